use std::fmt;

use thiserror::Error;

/// Row and column index sets (0-based) of a tropically singular square submatrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericityWitness {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl fmt::Display for GenericityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one_based = |v: &[usize]| {
            v.iter()
                .map(|i| (i + 1).to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(
            f,
            "rows {{{}}} x cols {{{}}}",
            one_based(&self.rows),
            one_based(&self.cols)
        )
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("non-generic input: tropically singular submatrix at {0}")]
    NonGeneric(GenericityWitness),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
