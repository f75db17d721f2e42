//! Exact rational linear feasibility with strict inequalities.
//!
//! Dense two-phase simplex with Bland's rule. Strict constraints `a.x < b`
//! are handled by maximizing a common margin `s` in `a.x + s <= b`,
//! `0 <= s <= 1`; the strict system is feasible iff the optimum is positive.

use num_traits::{One, Signed, Zero};

use crate::trop::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Lt,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub relation: Relation,
    pub rhs: Rat,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rat>, relation: Relation, rhs: Rat) -> Self {
        Constraint {
            coeffs,
            relation,
            rhs,
        }
    }
}

struct Tableau {
    /// Each row holds the coefficients followed by the right-hand side.
    rows: Vec<Vec<Rat>>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self, row: usize) -> &Rat {
        &self.rows[row][self.width]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col].clone();
        for x in self.rows[row].iter_mut() {
            *x /= &p;
        }
        let pivot_row = self.rows[row].clone();
        for (k, other) in self.rows.iter_mut().enumerate() {
            if k == row || other[col].is_zero() {
                continue;
            }
            let f = other[col].clone();
            for (x, pv) in other.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *x -= &f * pv;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Maximizes `obj . x` over columns allowed to enter. Returns `None`
    /// when unbounded.
    fn maximize(&mut self, obj: &[Rat], allowed: &[bool]) -> Option<Rat> {
        loop {
            let entering = (0..self.width).find(|&j| {
                if !allowed[j] || self.basis.contains(&j) {
                    return false;
                }
                let mut reduced = obj[j].clone();
                for (row, &b) in self.rows.iter().zip(&self.basis) {
                    if !obj[b].is_zero() && !row[j].is_zero() {
                        reduced -= &obj[b] * &row[j];
                    }
                }
                reduced.is_positive()
            });
            let Some(col) = entering else {
                let value = self
                    .basis
                    .iter()
                    .enumerate()
                    .map(|(r, &b)| &obj[b] * self.rhs(r))
                    .sum();
                return Some(value);
            };
            let mut leave: Option<(usize, Rat)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(r) / a;
                let better = match &leave {
                    None => true,
                    Some((lr, lratio)) => {
                        ratio < *lratio || (ratio == *lratio && self.basis[r] < self.basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let (row, _) = leave?;
            self.pivot(row, col);
        }
    }
}

/// Quick reject: the equality subsystem alone is inconsistent.
fn equalities_consistent(nvars: usize, constraints: &[Constraint]) -> bool {
    let mut rows: Vec<Vec<Rat>> = constraints
        .iter()
        .filter(|c| c.relation == Relation::Eq)
        .map(|c| {
            let mut row = c.coeffs.clone();
            row.push(c.rhs.clone());
            row
        })
        .collect();
    let mut rank = 0;
    for col in 0..nvars {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for r in 0..rows.len() {
            if r == rank || rows[r][col].is_zero() {
                continue;
            }
            let f = &rows[r][col] / &pivot[col];
            for (x, pv) in rows[r].iter_mut().zip(&pivot) {
                *x -= &f * pv;
            }
        }
        rank += 1;
    }
    rows[rank..].iter().all(|row| row[nvars].is_zero())
}

/// Whether some `x` in R^nvars satisfies every constraint, strict ones strictly.
pub fn is_feasible(nvars: usize, constraints: &[Constraint]) -> bool {
    if !equalities_consistent(nvars, constraints) {
        return false;
    }
    let has_strict = constraints.iter().any(|c| c.relation == Relation::Lt);
    // Columns: x+ (nvars), x- (nvars), margin s, one slack per inequality,
    // the slack of s <= 1, then one artificial per row.
    let n_ineq = constraints.iter().filter(|c| c.relation != Relation::Eq).count();
    let margin = 2 * nvars;
    let first_slack = margin + 1;
    let bound_slack = first_slack + n_ineq;
    let first_art = bound_slack + 1;
    let n_rows = constraints.len() + 1;
    let width = first_art + n_rows;

    let mut rows = Vec::with_capacity(n_rows);
    let mut slack = first_slack;
    for c in constraints {
        let mut row = vec![Rat::zero(); width + 1];
        for (k, a) in c.coeffs.iter().enumerate() {
            row[k] = a.clone();
            row[nvars + k] = -a;
        }
        match c.relation {
            Relation::Eq => {}
            Relation::Le | Relation::Lt => {
                row[slack] = Rat::one();
                slack += 1;
                if c.relation == Relation::Lt {
                    row[margin] = Rat::one();
                }
            }
        }
        row[width] = c.rhs.clone();
        rows.push(row);
    }
    let mut bound = vec![Rat::zero(); width + 1];
    bound[margin] = Rat::one();
    bound[bound_slack] = Rat::one();
    bound[width] = Rat::one();
    rows.push(bound);

    for (k, row) in rows.iter_mut().enumerate() {
        if row[width].is_negative() {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
        }
        row[first_art + k] = Rat::one();
    }
    let mut tab = Tableau {
        basis: (first_art..first_art + n_rows).collect(),
        rows,
        width,
    };

    let mut phase1 = vec![Rat::zero(); width];
    for c in phase1.iter_mut().skip(first_art) {
        *c = -Rat::one();
    }
    let all = vec![true; width];
    let best = tab.maximize(&phase1, &all).expect("phase 1 is bounded");
    if best.is_negative() {
        return false;
    }
    if !has_strict {
        return true;
    }
    // Drive artificials out of the basis where possible.
    for r in 0..tab.rows.len() {
        if tab.basis[r] < first_art {
            continue;
        }
        if let Some(col) = (0..first_art).find(|&j| !tab.rows[r][j].is_zero()) {
            tab.pivot(r, col);
        }
    }
    let mut allowed = vec![true; width];
    for a in allowed.iter_mut().skip(first_art) {
        *a = false;
    }
    let mut phase2 = vec![Rat::zero(); width];
    phase2[margin] = Rat::one();
    let best = tab.maximize(&phase2, &allowed).expect("margin is bounded by 1");
    best.is_positive()
}
