//! Brute-force references for small instances.
//!
//! Everything here goes through exact LP feasibility on the inequalities
//! `y_i + z_j <= v_ij` and shares no code with pivoting or the graph-based
//! cell test.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::ideal::{MonomialIdeal, SqfMonomial};
use crate::lp::{is_feasible, Constraint, Relation};
use crate::trop::{Rat, WeightMatrix};

/// Largest r*n accepted by the exhaustive searches.
pub const MAX_CELLS: usize = 20;

fn check_size(v: &WeightMatrix) -> Result<()> {
    let cells = v.rows() * v.cols();
    if cells > MAX_CELLS {
        return Err(Error::Config(format!(
            "brute force is limited to {MAX_CELLS} boxes, got {cells}"
        )));
    }
    Ok(())
}

/// `y_i + z_j (rel) v_ij` over the variables (y_1..y_r, z_1..z_n).
fn box_constraint(v: &WeightMatrix, i: usize, j: usize, relation: Relation) -> Constraint {
    let r = v.rows();
    let mut coeffs = vec![Rat::zero(); r + v.cols()];
    coeffs[i] = Rat::one();
    coeffs[r + j] = Rat::one();
    Constraint::new(coeffs, relation, v.get(i, j).clone())
}

fn normalization(v: &WeightMatrix) -> Constraint {
    let r = v.rows();
    let mut coeffs = vec![Rat::zero(); r + v.cols()];
    coeffs[r] = Rat::one();
    Constraint::new(coeffs, Relation::Eq, Rat::zero())
}

/// Whether some point of `P_V` is tight exactly on the shaded boxes.
pub fn is_cell_lp(g: &Grid, v: &WeightMatrix) -> bool {
    let mut cs = vec![normalization(v)];
    for i in 0..v.rows() {
        for j in 0..v.cols() {
            let rel = if g.is_shaded(i, j) { Relation::Eq } else { Relation::Lt };
            cs.push(box_constraint(v, i, j, rel));
        }
    }
    is_feasible(v.rows() + v.cols(), &cs)
}

/// Whether some point of `P_V` is tight on every box of `boxes`.
fn is_triangulation_face(boxes: &[(usize, usize)], v: &WeightMatrix) -> bool {
    let set: BTreeSet<_> = boxes.iter().copied().collect();
    let mut cs = vec![normalization(v)];
    for i in 0..v.rows() {
        for j in 0..v.cols() {
            let rel = if set.contains(&(i, j)) { Relation::Eq } else { Relation::Le };
            cs.push(box_constraint(v, i, j, rel));
        }
    }
    is_feasible(v.rows() + v.cols(), &cs)
}

fn all_boxes(r: usize, n: usize) -> Vec<(usize, usize)> {
    (0..r).cartesian_product(0..n).collect()
}

/// Box sets that are simultaneously tight somewhere on `P_V` (the faces of
/// the induced regular subdivision) and the minimal sets that are not.
///
/// Sets are grown one box at a time in index order. A set that cannot be
/// tight has no tight superset, so its branch is cut.
fn tight_sets(v: &WeightMatrix) -> (Vec<Vec<(usize, usize)>>, Vec<Vec<(usize, usize)>>) {
    let boxes = all_boxes(v.rows(), v.cols());
    let mut level: BTreeSet<Vec<usize>> = [Vec::new()].into_iter().collect();
    let mut tight = vec![Vec::new()];
    let mut minimal_nonfaces = Vec::new();
    while !level.is_empty() {
        let mut next = BTreeSet::new();
        for set in &level {
            let start = set.last().map_or(0, |&b| b + 1);
            for b in start..boxes.len() {
                let mut cand = set.clone();
                cand.push(b);
                let subsets_tight = (0..cand.len()).all(|drop| {
                    let mut sub = cand.clone();
                    sub.remove(drop);
                    level.contains(&sub)
                });
                if !subsets_tight {
                    continue;
                }
                let pts: Vec<_> = cand.iter().map(|&k| boxes[k]).collect();
                if is_triangulation_face(&pts, v) {
                    tight.push(pts);
                    next.insert(cand);
                } else {
                    minimal_nonfaces.push(pts);
                }
            }
        }
        level = next;
    }
    (tight, minimal_nonfaces)
}

/// Every grid covering all rows and columns that is a cell, sorted.
pub fn brute_force_face_grids(v: &WeightMatrix) -> Result<Vec<Grid>> {
    check_size(v)?;
    let (r, n) = (v.rows(), v.cols());
    let mut out: Vec<Grid> = tight_sets(v)
        .0
        .iter()
        .map(|shaded| Grid::from_shaded(r, n, shaded))
        .filter(|g| g.covers_all_lines() && is_cell_lp(g, v))
        .collect();
    out.sort();
    Ok(out)
}

/// Vertex grids: cells whose shaded boxes form a spanning tree of K_{r,n}.
pub fn brute_force_vertex_grids(v: &WeightMatrix) -> Result<Vec<Grid>> {
    Ok(brute_force_face_grids(v)?
        .into_iter()
        .filter(Grid::is_spanning_tree)
        .collect())
}

/// Minimal non-faces of the regular subdivision induced by V.
pub fn brute_force_initial_ideal(v: &WeightMatrix) -> Result<MonomialIdeal> {
    check_size(v)?;
    let (r, n) = (v.rows(), v.cols());
    let gens = tight_sets(v)
        .1
        .iter()
        .map(|pts| SqfMonomial::from_vars(r, n, pts))
        .collect();
    MonomialIdeal::new(r, n, gens)
}
