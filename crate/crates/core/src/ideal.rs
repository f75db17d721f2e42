//! Squarefree monomial ideals in the variables x_ij, the initial ideal of the
//! 2x2 minors, and squarefree Alexander duality.
//!
//! A squarefree monomial is identified with its support. Vertex labels are
//! the unshaded boxes of vertex grids; the initial ideal is generated by the
//! minimal non-faces of the complex whose facets are the shaded sets.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, GenericityWitness, Result};
use crate::geometry::{enumerate_vertices, VertexRecord};
use crate::grid::Grid;
use crate::trop::{ensure_generic, WeightMatrix};

/// Fixed-capacity bitset over `0..len`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet {
            words: vec![0; len.div_ceil(64).max(1)],
        }
    }

    pub fn insert(&mut self, k: usize) {
        self.words[k / 64] |= 1 << (k % 64);
    }

    pub fn contains(&self, k: usize) -> bool {
        self.words[k / 64] & (1 << (k % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            (0..64).filter(move |b| word & (1 << b) != 0).map(move |b| w * 64 + b)
        })
    }

    fn with(&self, k: usize) -> BitSet {
        let mut s = self.clone();
        s.insert(k);
        s
    }
}

/// Inclusion-minimal sets meeting every edge of the hypergraph.
///
/// Berge's sequential dualization: process edges one at a time, extending
/// each partial transversal that misses the edge by one of its elements and
/// pruning non-minimal candidates after every step. An empty hypergraph has
/// the single transversal ∅; a hypergraph with an empty edge has none.
pub fn minimal_transversals(edges: &[BitSet], universe: usize) -> Vec<BitSet> {
    let mut edges: Vec<&BitSet> = edges.iter().collect();
    edges.sort_by_key(|e| e.len());
    let mut current = vec![BitSet::new(universe)];
    for edge in edges {
        let (mut keep, missing): (Vec<BitSet>, Vec<BitSet>) =
            current.into_iter().partition(|t| t.intersects(edge));
        let mut candidates: Vec<BitSet> = missing
            .iter()
            .flat_map(|t| edge.iter().map(move |k| t.with(k)))
            .collect();
        candidates.sort_by_key(|c| c.len());
        candidates.dedup();
        let old = keep.len();
        for cand in candidates {
            if keep.iter().any(|k| k.is_subset(&cand)) {
                continue;
            }
            keep.push(cand);
        }
        // Kept transversals are mutually minimal; new ones were only checked
        // against sets added before them, which are no larger.
        debug_assert!(keep[old..].iter().all(|c| {
            !keep[..old].iter().any(|k| c.is_subset(k) && c != k)
        }));
        current = keep;
    }
    current.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| cmp_sets(a, b)));
    current
}

fn cmp_sets(a: &BitSet, b: &BitSet) -> Ordering {
    a.iter().cmp(b.iter())
}

/// A squarefree monomial in x_ij, 0 <= i < rows, 0 <= j < cols.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SqfMonomial {
    rows: usize,
    cols: usize,
    support: BitSet,
}

impl SqfMonomial {
    pub fn one(rows: usize, cols: usize) -> Self {
        SqfMonomial {
            rows,
            cols,
            support: BitSet::new(rows * cols),
        }
    }

    pub fn from_vars(rows: usize, cols: usize, vars: &[(usize, usize)]) -> Self {
        let mut m = Self::one(rows, cols);
        for &(i, j) in vars {
            m.support.insert(i * cols + j);
        }
        m
    }

    fn from_bitset(rows: usize, cols: usize, support: BitSet) -> Self {
        SqfMonomial { rows, cols, support }
    }

    /// The label of a grid: product of the unshaded variables.
    pub fn from_grid(g: &Grid) -> Self {
        let vars: Vec<_> = g.unshaded().collect();
        Self::from_vars(g.rows(), g.cols(), &vars)
    }

    /// The grid of this label: shaded exactly where x_ij does not divide.
    pub fn to_grid(&self) -> Grid {
        let mut g = Grid::full(self.rows, self.cols);
        for (i, j) in self.vars() {
            g.set(i, j, false);
        }
        g
    }

    /// Parses `"x_1_2*x_3_1"` (1-based indices) or `"1"`.
    pub fn parse(rows: usize, cols: usize, text: &str) -> Result<Self> {
        let text = text.trim();
        let mut m = Self::one(rows, cols);
        if text == "1" {
            return Ok(m);
        }
        for factor in text.split('*') {
            let bad = || Error::Input(format!("malformed variable {factor:?}"));
            let mut parts = factor.trim().split('_');
            if parts.next() != Some("x") {
                return Err(bad());
            }
            let i: usize = parts.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
            let j: usize = parts.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
            if parts.next().is_some() || i == 0 || j == 0 || i > rows || j > cols {
                return Err(bad());
            }
            m.support.insert((i - 1) * cols + (j - 1));
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn degree(&self) -> usize {
        self.support.len()
    }

    pub fn support(&self) -> &BitSet {
        &self.support
    }

    /// Variables (i, j) dividing the monomial, row-major.
    pub fn vars(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.support.iter().map(|k| (k / self.cols, k % self.cols))
    }

    pub fn divides(&self, other: &SqfMonomial) -> bool {
        self.support.is_subset(&other.support)
    }
}

impl PartialOrd for SqfMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, then the sorted variable lists.
impl Ord for SqfMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| cmp_sets(&self.support, &other.support))
    }
}

impl fmt::Display for SqfMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.support.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        for (i, j) in self.vars() {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "x_{}_{}", i + 1, j + 1)?;
        }
        Ok(())
    }
}

/// A squarefree monomial ideal given by its minimal generators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MonomialIdeal {
    rows: usize,
    cols: usize,
    generators: Vec<SqfMonomial>,
}

impl MonomialIdeal {
    /// Builds the ideal, keeping only minimal generators in canonical order.
    pub fn new(rows: usize, cols: usize, gens: Vec<SqfMonomial>) -> Result<Self> {
        if let Some(g) = gens.iter().find(|g| g.rows != rows || g.cols != cols) {
            return Err(Error::Input(format!(
                "generator {g} lives in a {}x{} ring, expected {rows}x{cols}",
                g.rows, g.cols
            )));
        }
        let mut gens = gens;
        gens.sort();
        gens.dedup();
        let mut minimal: Vec<SqfMonomial> = Vec::with_capacity(gens.len());
        for g in gens {
            if !minimal.iter().any(|m| m.divides(&g)) {
                minimal.push(g);
            }
        }
        Ok(MonomialIdeal {
            rows,
            cols,
            generators: minimal,
        })
    }

    pub fn generators(&self) -> &[SqfMonomial] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn contains(&self, m: &SqfMonomial) -> bool {
        self.generators.iter().any(|g| g.divides(m))
    }
}

/// I* from vertex labels: the unshaded support of each vertex grid.
pub fn dual_generators_from_vertices(vertices: &[VertexRecord]) -> Result<MonomialIdeal> {
    let Some(first) = vertices.first() else {
        return Err(Error::Precondition("no vertices given".into()));
    };
    let (r, n) = (first.grid.rows(), first.grid.cols());
    let expected = (r - 1) * (n - 1);
    let gens: Vec<SqfMonomial> = vertices
        .iter()
        .map(|v| SqfMonomial::from_grid(&v.grid))
        .collect();
    if let Some(bad) = gens.iter().find(|g| g.degree() != expected) {
        return Err(Error::Internal(format!(
            "vertex label {bad} has degree {}, expected {expected}",
            bad.degree()
        )));
    }
    let ideal = MonomialIdeal::new(r, n, gens)?;
    if ideal.len() != vertices.len() {
        return Err(Error::Internal("vertex labels are not distinct".into()));
    }
    Ok(ideal)
}

/// Squarefree Alexander dual: minimal transversals of the generator supports.
pub fn alexander_dual(ideal: &MonomialIdeal) -> MonomialIdeal {
    let (r, n) = (ideal.rows, ideal.cols);
    let edges: Vec<BitSet> = ideal.generators.iter().map(|g| g.support.clone()).collect();
    let gens = minimal_transversals(&edges, r * n)
        .into_iter()
        .map(|s| SqfMonomial::from_bitset(r, n, s))
        .collect();
    MonomialIdeal::new(r, n, gens).expect("same ring")
}

/// The initial ideal in_V of the 2x2 minors, as the Stanley–Reisner ideal of
/// the triangulation whose maximal cells are the shaded sets of vertex grids.
pub fn initial_ideal(v: &WeightMatrix) -> Result<MonomialIdeal> {
    let vertices = enumerate_vertices(v)?;
    initial_ideal_from_vertices(&vertices)
}

pub fn initial_ideal_from_vertices(vertices: &[VertexRecord]) -> Result<MonomialIdeal> {
    let dual = dual_generators_from_vertices(vertices)?;
    Ok(alexander_dual(&dual))
}

/// Max-weight term of every 2x2 minor `x_ij x_kl - x_il x_kj` (i < k, j < l).
pub fn minor_initial_forms(v: &WeightMatrix) -> Result<Vec<SqfMonomial>> {
    ensure_generic(v)?;
    let (r, n) = (v.rows(), v.cols());
    let mut out = Vec::new();
    for i in 0..r {
        for k in i + 1..r {
            for j in 0..n {
                for l in j + 1..n {
                    let main = v.get(i, j) + v.get(k, l);
                    let anti = v.get(i, l) + v.get(k, j);
                    let term = match main.cmp(&anti) {
                        Ordering::Greater => [(i, j), (k, l)],
                        Ordering::Less => [(i, l), (k, j)],
                        Ordering::Equal => {
                            return Err(Error::NonGeneric(GenericityWitness {
                                rows: vec![i, k],
                                cols: vec![j, l],
                            }))
                        }
                    };
                    out.push(SqfMonomial::from_vars(r, n, &term));
                }
            }
        }
    }
    out.sort();
    Ok(out)
}
