//! The polyhedron `P_V = {(y, z) : y_i + z_j <= v_ij}`, types of points, and
//! exact vertex enumeration by spanning-tree pivoting.
//!
//! A vertex of `P_V` has exactly r + n - 1 tight constraints forming a
//! spanning tree of the complete bipartite graph K_{r,n} (for generic V).
//! Its z-projection is a vertex of the tropical polytope and its tight set is
//! the vertex's grid label.

use std::collections::{HashMap, VecDeque};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::trop::{ensure_generic, PointTP, Rat, WeightMatrix};

/// A point `(y, z)` of `P_V`, normalized so that `z_1 = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualPoint {
    pub y: Vec<Rat>,
    pub z: Vec<Rat>,
}

impl DualPoint {
    fn normalized(mut y: Vec<Rat>, mut z: Vec<Rat>) -> Self {
        let shift = z[0].clone();
        for zj in &mut z {
            *zj -= &shift;
        }
        for yi in &mut y {
            *yi += &shift;
        }
        DualPoint { y, z }
    }

    pub fn slack(&self, v: &WeightMatrix, i: usize, j: usize) -> Rat {
        v.get(i, j) - &self.y[i] - &self.z[j]
    }

    pub fn is_feasible(&self, v: &WeightMatrix) -> bool {
        (0..v.rows()).all(|i| (0..v.cols()).all(|j| !self.slack(v, i, j).is_negative()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexRecord {
    pub grid: Grid,
    pub coords: PointTP,
    pub dual: DualPoint,
}

/// `tight[i][j]` iff j attains `min_k (v_ik - z_k)`.
pub fn type_of(z: &PointTP, v: &WeightMatrix) -> Result<Grid> {
    check_dims(z, v)?;
    let lift = dual_lift(z, v)?;
    let mut g = Grid::empty(v.rows(), v.cols());
    for i in 0..v.rows() {
        for j in 0..v.cols() {
            if lift.slack(v, i, j).is_zero() {
                g.set(i, j, true);
            }
        }
    }
    Ok(g)
}

/// Lifts z to the point of `P_V` with `y_i = min_k (v_ik - z_k)`.
pub fn dual_lift(z: &PointTP, v: &WeightMatrix) -> Result<DualPoint> {
    check_dims(z, v)?;
    let zc = z.coords().to_vec();
    let y = (0..v.rows())
        .map(|i| {
            (0..v.cols())
                .map(|k| v.get(i, k) - &zc[k])
                .min()
                .expect("n >= 2")
        })
        .collect();
    Ok(DualPoint::normalized(y, zc))
}

/// Membership in tconv(V): every column of the type is non-empty.
pub fn in_hull(z: &PointTP, v: &WeightMatrix) -> Result<bool> {
    let g = type_of(z, v)?;
    Ok((0..v.cols()).all(|j| g.col_shaded(j)))
}

fn check_dims(z: &PointTP, v: &WeightMatrix) -> Result<()> {
    if z.len() != v.cols() {
        return Err(Error::Input(format!(
            "point has {} coordinates but the input points have {}",
            z.len(),
            v.cols()
        )));
    }
    Ok(())
}

/// Potentials solving `y_i + z_j = v_ij` on every shaded box, one free
/// constant per connected component (each component's first node is 0).
/// Returns `None` when the equations are inconsistent on a cycle.
fn component_potentials(g: &Grid, v: &WeightMatrix) -> Option<(usize, Vec<usize>, Vec<Rat>)> {
    let r = v.rows();
    let (count, comp) = g.components();
    let mut pot: Vec<Option<Rat>> = vec![None; r + v.cols()];
    for start in 0..pot.len() {
        if pot[start].is_some() {
            continue;
        }
        pot[start] = Some(Rat::zero());
        let mut queue = VecDeque::from([start]);
        while let Some(node) = queue.pop_front() {
            let here = pot[node].clone().expect("visited");
            for next in g.neighbours(node) {
                let (i, j) = if node < r { (node, next - r) } else { (next, node - r) };
                let want = v.get(i, j) - &here;
                match &pot[next] {
                    None => {
                        pot[next] = Some(want);
                        queue.push_back(next);
                    }
                    Some(existing) if *existing != want => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some((count, comp, pot.into_iter().map(|p| p.expect("all assigned")).collect()))
}

/// Whether some point of `P_V` has tight set exactly the shaded boxes of `g`.
///
/// Within a connected component of the shaded graph the equalities fix all
/// potentials up to one shift `t_c`. The remaining strict inequalities are
/// difference constraints `t_a - t_b < s` between components, feasible iff
/// every cycle of the constraint graph has positive total weight.
pub fn is_cell(g: &Grid, v: &WeightMatrix) -> bool {
    let r = v.rows();
    let Some((count, comp, pot)) = component_potentials(g, v) else {
        return false;
    };
    let mut dist: Vec<Vec<Option<Rat>>> = vec![vec![None; count]; count];
    for (i, j) in g.unshaded() {
        let s = v.get(i, j) - &pot[i] - &pot[r + j];
        let (a, b) = (comp[i], comp[r + j]);
        if a == b {
            if !s.is_positive() {
                return false;
            }
            continue;
        }
        // t_a <= t_b + s, strictly: edge b -> a.
        let slot = &mut dist[b][a];
        if slot.as_ref().map_or(true, |cur| s < *cur) {
            *slot = Some(s);
        }
    }
    for k in 0..count {
        for a in 0..count {
            let Some(ak) = dist[a][k].clone() else { continue };
            for b in 0..count {
                let Some(kb) = &dist[k][b] else { continue };
                let through = &ak + kb;
                if dist[a][b].as_ref().map_or(true, |cur| through < *cur) {
                    dist[a][b] = Some(through);
                }
            }
        }
    }
    (0..count).all(|a| dist[a][a].as_ref().map_or(true, |w| w.is_positive()))
}

/// Solves the vertex-coordinate system of a grid whose shaded boxes connect
/// all columns.
pub fn coords_of(g: &Grid, v: &WeightMatrix) -> Result<PointTP> {
    let r = v.rows();
    let n = v.cols();
    if g.rows() != r || g.cols() != n {
        return Err(Error::Input("grid shape does not match the input".into()));
    }
    let mut pot: Vec<Option<Rat>> = vec![None; r + n];
    pot[r] = Some(Rat::zero());
    let mut queue = VecDeque::from([r]);
    while let Some(node) = queue.pop_front() {
        let here = pot[node].clone().expect("visited");
        for next in g.neighbours(node) {
            let (i, j) = if node < r { (node, next - r) } else { (next, node - r) };
            let want = v.get(i, j) - &here;
            match &pot[next] {
                None => {
                    pot[next] = Some(want);
                    queue.push_back(next);
                }
                Some(existing) if *existing != want => {
                    return Err(Error::Internal(format!(
                        "coordinate system of grid {g} is inconsistent at box ({}, {})",
                        i + 1,
                        j + 1
                    )))
                }
                Some(_) => {}
            }
        }
    }
    let z: Option<Vec<Rat>> = pot[r..].iter().cloned().collect();
    match z {
        Some(z) => PointTP::new(z),
        None => Err(Error::Precondition(format!(
            "shaded boxes of grid {g} do not connect all columns"
        ))),
    }
}

/// All vertices of `P_V`, sorted by grid.
///
/// Starts at the vertex of the first input point and pivots across every
/// tree edge. For a removed edge the side of the tree not containing row 1
/// is translated (y += t on its rows, z -= t on its columns) in the direction
/// that loosens the removed constraint; the first crossing constraint to
/// become tight enters. No crossing constraint tightening means the edge of
/// `P_V` is an unbounded ray.
pub fn enumerate_vertices(v: &WeightMatrix) -> Result<Vec<VertexRecord>> {
    ensure_generic(v)?;
    let start_point = v.point(0);
    let start_grid = type_of(&start_point, v)?;
    if !start_grid.is_spanning_tree() {
        return Err(Error::Internal(format!(
            "type of the first input point is not a spanning tree: {start_grid}"
        )));
    }
    let start = VertexRecord {
        grid: start_grid.clone(),
        coords: start_point.clone(),
        dual: dual_lift(&start_point, v)?,
    };
    let mut seen: HashMap<Grid, VertexRecord> = HashMap::new();
    let mut queue = VecDeque::new();
    seen.insert(start_grid, start.clone());
    queue.push_back(start);
    while let Some(current) = queue.pop_front() {
        let edges: Vec<(usize, usize)> = current.grid.shaded().collect();
        for edge in edges {
            if let Some(next) = pivot(&current, edge, v)? {
                if !seen.contains_key(&next.grid) {
                    seen.insert(next.grid.clone(), next.clone());
                    queue.push_back(next);
                }
            }
        }
    }
    let mut out: Vec<VertexRecord> = seen.into_values().collect();
    out.sort_by(|a, b| a.grid.cmp(&b.grid));
    Ok(out)
}

fn pivot(current: &VertexRecord, (ei, ej): (usize, usize), v: &WeightMatrix) -> Result<Option<VertexRecord>> {
    let r = v.rows();
    let n = v.cols();
    let reduced = current.grid.with(ei, ej, false);
    let (_, comp) = reduced.components();
    let anchor = comp[0];
    let moving: Vec<bool> = comp.iter().map(|&c| c != anchor).collect();
    // Row ei on the moving side: shift by -t. Otherwise column ej moves: +t.
    let row_side_moves = moving[ei];
    let mut best: Option<(Rat, (usize, usize))> = None;
    let mut tied = false;
    for i in 0..r {
        for j in 0..n {
            let tightening = if row_side_moves {
                !moving[i] && moving[r + j]
            } else {
                moving[i] && !moving[r + j]
            };
            if !tightening {
                continue;
            }
            let slack = current.dual.slack(v, i, j);
            if !slack.is_positive() {
                return Err(Error::Internal(format!(
                    "degenerate pivot at vertex {}: box ({}, {}) is tight off the tree",
                    current.grid,
                    i + 1,
                    j + 1
                )));
            }
            match &best {
                Some((b, _)) if slack > *b => {}
                Some((b, _)) if slack == *b => tied = true,
                _ => {
                    best = Some((slack, (i, j)));
                    tied = false;
                }
            }
        }
    }
    let Some((step, (ni, nj))) = best else {
        return Ok(None);
    };
    if tied {
        return Err(Error::Internal(format!(
            "ratio test tie while pivoting out of {}",
            current.grid
        )));
    }
    let mut y = current.dual.y.clone();
    let mut z = current.dual.z.clone();
    let shift = if row_side_moves { -step } else { step };
    for i in 0..r {
        if moving[i] {
            y[i] += &shift;
        }
    }
    for j in 0..n {
        if moving[r + j] {
            z[j] -= &shift;
        }
    }
    let dual = DualPoint::normalized(y, z);
    let grid = reduced.with(ni, nj, true);
    let coords = PointTP::new(dual.z.clone())?;
    Ok(Some(VertexRecord { grid, coords, dual }))
}
