//! Tropical cyclic polytopes `C_{r,n}`, the hull of `v_ij = (i-1)(j-1)`.
//!
//! Grids are drawn with row 1 on top, so a monotone lattice path runs from
//! the lower-left box `(r-1, 0)` to the upper-right box `(0, n-1)`. A face
//! is a path over {R, U, D}; each diagonal step skips the two corner boxes
//! it jumps over.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::geometry::{coords_of, dual_lift, VertexRecord};
use crate::grid::Grid;
use crate::resolution::{Face, FacePoset};
use crate::series::{Series, Truncation};
use crate::trop::{PointTP, Rat, WeightMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Step {
    R,
    U,
    D,
}

impl Step {
    fn letter(self) -> char {
        match self {
            Step::R => 'R',
            Step::U => 'U',
            Step::D => 'D',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticePath {
    rows: usize,
    cols: usize,
    steps: Vec<Step>,
}

impl LatticePath {
    pub fn new(rows: usize, cols: usize, steps: Vec<Step>) -> Result<Self> {
        let count = |s: Step| steps.iter().filter(|&&t| t == s).count();
        let (ups, rights, diags) = (count(Step::U), count(Step::R), count(Step::D));
        if rows == 0 || cols == 0 || ups + diags != rows - 1 || rights + diags != cols - 1 {
            return Err(Error::Input(format!(
                "steps do not lead across a {rows}x{cols} grid"
            )));
        }
        Ok(LatticePath { rows, cols, steps })
    }

    pub fn parse(rows: usize, cols: usize, text: &str) -> Result<Self> {
        let steps = text
            .chars()
            .map(|c| match c {
                'R' => Ok(Step::R),
                'U' => Ok(Step::U),
                'D' => Ok(Step::D),
                other => Err(Error::Input(format!("unknown step {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows, cols, steps)
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn diagonal_steps(&self) -> usize {
        self.steps.iter().filter(|&&s| s == Step::D).count()
    }

    /// The boxes visited by the path, starting at the lower-left corner.
    pub fn cells(&self) -> Vec<(usize, usize)> {
        let (mut i, mut j) = (self.rows - 1, 0);
        let mut out = vec![(i, j)];
        for s in &self.steps {
            match s {
                Step::R => j += 1,
                Step::U => i -= 1,
                Step::D => {
                    i -= 1;
                    j += 1;
                }
            }
            out.push((i, j));
        }
        out
    }

    pub fn to_grid(&self) -> Grid {
        Grid::from_shaded(self.rows, self.cols, &self.cells())
    }

    /// The 2^k R/U paths obtained by replacing every D with RU or UR.
    pub fn resolutions(&self) -> Vec<LatticePath> {
        let mut out = vec![Vec::new()];
        for &s in &self.steps {
            if s == Step::D {
                let mut next = Vec::with_capacity(out.len() * 2);
                for prefix in &out {
                    for pair in [[Step::R, Step::U], [Step::U, Step::R]] {
                        let mut p: Vec<Step> = prefix.clone();
                        p.extend(pair);
                        next.push(p);
                    }
                }
                out = next;
            } else {
                for prefix in out.iter_mut() {
                    prefix.push(s);
                }
            }
        }
        out.into_iter()
            .map(|steps| LatticePath {
                rows: self.rows,
                cols: self.cols,
                steps,
            })
            .collect()
    }

    /// Paths with one diagonal step fewer, one per choice of D to resolve.
    fn facets(&self) -> Vec<LatticePath> {
        let mut out = Vec::new();
        for (pos, _) in self.steps.iter().enumerate().filter(|(_, &s)| s == Step::D) {
            for pair in [[Step::R, Step::U], [Step::U, Step::R]] {
                let mut steps = self.steps[..pos].to_vec();
                steps.extend(pair);
                steps.extend_from_slice(&self.steps[pos + 1..]);
                out.push(LatticePath {
                    rows: self.rows,
                    cols: self.cols,
                    steps,
                });
            }
        }
        out
    }
}

impl fmt::Display for LatticePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            write!(f, "{}", s.letter())?;
        }
        Ok(())
    }
}

/// All paths across an r x n grid with exactly k diagonal steps.
pub fn paths_with_diagonals(r: usize, n: usize, k: usize) -> Vec<LatticePath> {
    if r == 0 || n == 0 || k + 1 > r || k + 1 > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut steps = Vec::new();
    extend_paths(r - 1 - k, n - 1 - k, k, &mut steps, &mut out);
    out.into_iter()
        .map(|steps| LatticePath { rows: r, cols: n, steps })
        .collect()
}

fn extend_paths(ups: usize, rights: usize, diags: usize, prefix: &mut Vec<Step>, out: &mut Vec<Vec<Step>>) {
    if ups + rights + diags == 0 {
        out.push(prefix.clone());
        return;
    }
    for (s, left) in [(Step::R, rights), (Step::U, ups), (Step::D, diags)] {
        if left == 0 {
            continue;
        }
        prefix.push(s);
        match s {
            Step::R => extend_paths(ups, rights - 1, diags, prefix, out),
            Step::U => extend_paths(ups - 1, rights, diags, prefix, out),
            Step::D => extend_paths(ups, rights, diags - 1, prefix, out),
        }
        prefix.pop();
    }
}

pub fn cyclic_points(r: usize, n: usize) -> Result<WeightMatrix> {
    if r == 0 || n < 2 {
        return Err(Error::Input(format!("cyclic points need r >= 1 and n >= 2, got {r}, {n}")));
    }
    let rows: Vec<Vec<i64>> = (0..r)
        .map(|i| (0..n).map(|j| (i * j) as i64).collect())
        .collect();
    WeightMatrix::from_ints(&rows)
}

/// Vertex grids of `C_{r,n}`: one per monotone R/U path, sorted.
pub fn path_vertices(r: usize, n: usize) -> Vec<Grid> {
    let mut out: Vec<Grid> = paths_with_diagonals(r, n, 0).iter().map(LatticePath::to_grid).collect();
    out.sort();
    out
}

/// The face poset of `C_{r,n}` assembled from lattice paths alone.
///
/// Coordinates come from the path grids; no cell test or pivoting is used.
pub fn cyclic_faces(r: usize, n: usize) -> Result<FacePoset> {
    let v = cyclic_points(r, n)?;
    let mut vertex_paths = paths_with_diagonals(r, n, 0);
    vertex_paths.sort_by_key(LatticePath::to_grid);
    let mut vertices = Vec::with_capacity(vertex_paths.len());
    let mut vertex_index = BTreeMap::new();
    for (k, p) in vertex_paths.iter().enumerate() {
        let grid = p.to_grid();
        let coords = coords_of(&grid, &v)?;
        let dual = dual_lift(&coords, &v)?;
        vertex_index.insert(p.clone(), k);
        vertices.push(VertexRecord { grid, coords, dual });
    }

    let mut levels = Vec::new();
    let mut covers = Vec::new();
    let mut prev_index: BTreeMap<LatticePath, usize> = BTreeMap::new();
    for k in 0..r.min(n) {
        let mut paths = paths_with_diagonals(r, n, k);
        paths.sort_by_key(LatticePath::to_grid);
        let mut level = Vec::with_capacity(paths.len());
        let mut cover = Vec::new();
        let mut index = BTreeMap::new();
        for (idx, p) in paths.iter().enumerate() {
            let mut ids: Vec<usize> = p.resolutions().iter().map(|q| vertex_index[q]).collect();
            ids.sort_unstable();
            let pts: Vec<&PointTP> = ids.iter().map(|&q| &vertices[q].coords).collect();
            level.push(Face {
                grid: p.to_grid(),
                dim: k,
                vertices: ids,
                sample: barycenter(&pts)?,
            });
            if k > 0 {
                cover.extend(p.facets().iter().map(|q| (idx, prev_index[q])));
            }
            index.insert(p.clone(), idx);
        }
        levels.push(level);
        if k > 0 {
            cover.sort_unstable();
            covers.push(cover);
        }
        prev_index = index;
    }
    FacePoset::from_parts(r, n, vertices, levels, covers)
}

fn barycenter(points: &[&PointTP]) -> Result<PointTP> {
    let n = points[0].len();
    let count = Rat::from_integer(points.len().into());
    let coords = (0..n)
        .map(|j| points.iter().map(|p| &p.coords()[j]).sum::<Rat>() / &count)
        .collect();
    PointTP::new(coords)
}

/// Hasse diagram of Young diagrams inside a box, as a plain graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YoungSkeleton {
    /// Partitions as weakly decreasing row lengths, sorted.
    pub nodes: Vec<Vec<usize>>,
    /// Index pairs (smaller, larger) differing by one box, sorted.
    pub edges: Vec<(usize, usize)>,
}

/// Young diagrams fitting in an (r-1) x (n-1) box with their cover relations.
pub fn young_skeleton(r: usize, n: usize) -> YoungSkeleton {
    let parts = r.saturating_sub(1);
    let width = n.saturating_sub(1);
    let mut nodes = Vec::new();
    let mut current = Vec::with_capacity(parts);
    partitions_in_box(parts, width, &mut current, &mut nodes);
    nodes.sort();
    let index: BTreeMap<&Vec<usize>, usize> = nodes.iter().enumerate().map(|(k, p)| (p, k)).collect();
    let mut edges = Vec::new();
    for (a, p) in nodes.iter().enumerate() {
        for row in 0..parts {
            let mut q = p.clone();
            q[row] += 1;
            if q[row] > width || (row > 0 && q[row] > q[row - 1]) {
                continue;
            }
            edges.push((a, index[&q]));
        }
    }
    edges.sort_unstable();
    YoungSkeleton { nodes, edges }
}

fn partitions_in_box(parts: usize, width: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if current.len() == parts {
        out.push(current.clone());
        return;
    }
    let cap = current.last().copied().unwrap_or(width);
    for len in 0..=cap {
        current.push(len);
        partitions_in_box(parts, width, current, out);
        current.pop();
    }
}

/// The Young diagram to the upper left of a vertex path: in row i (from
/// the top, excluding the last row) the boxes left of the path.
pub fn young_diagram_of(grid: &Grid) -> Result<Vec<usize>> {
    (0..grid.rows().saturating_sub(1))
        .map(|i| {
            (0..grid.cols())
                .find(|&j| grid.is_shaded(i, j))
                .ok_or_else(|| Error::Input(format!("row {} of grid {grid} is empty", i + 1)))
        })
        .collect()
}

/// The 1-skeleton of a face poset rewritten on Young diagrams.
pub fn skeleton_of_poset(poset: &FacePoset) -> Result<YoungSkeleton> {
    let diagrams: Vec<Vec<usize>> = poset
        .vertices()
        .iter()
        .map(|rec| young_diagram_of(&rec.grid))
        .collect::<Result<_>>()?;
    let nodes: BTreeSet<Vec<usize>> = diagrams.iter().cloned().collect();
    if nodes.len() != diagrams.len() {
        return Err(Error::Internal("two vertices share a Young diagram".into()));
    }
    let nodes: Vec<Vec<usize>> = nodes.into_iter().collect();
    let index: BTreeMap<&Vec<usize>, usize> = nodes.iter().enumerate().map(|(k, p)| (p, k)).collect();
    let mut edges = Vec::new();
    for edge in poset.faces(1) {
        let [a, b] = edge.vertices[..] else {
            return Err(Error::Internal(format!("edge {} does not have two vertices", edge.grid)));
        };
        let (pa, pb) = (&diagrams[a], &diagrams[b]);
        let (small, large) = if pa.iter().sum::<usize>() < pb.iter().sum::<usize>() {
            (pa, pb)
        } else {
            (pb, pa)
        };
        edges.push((index[small], index[large]));
    }
    edges.sort_unstable();
    Ok(YoungSkeleton { nodes, edges })
}

/// A horizontal (1 x w) or vertical (h x 1) stripe; 1 x 1 is listed once.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Stripe {
    pub width: usize,
    pub height: usize,
}

pub type StripeTuple = Vec<Stripe>;

/// All ordered tuples of `len` stripes with widths summing to n and heights to r.
pub fn stripe_tuples(r: usize, n: usize, len: usize) -> Vec<StripeTuple> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fill_stripes(r, n, len, &mut current, &mut out);
    out
}

fn fill_stripes(r: usize, n: usize, len: usize, current: &mut StripeTuple, out: &mut Vec<StripeTuple>) {
    if len == 0 {
        if r == 0 && n == 0 {
            out.push(current.clone());
        }
        return;
    }
    if r < len || n < len {
        return;
    }
    let mut options = vec![Stripe { width: 1, height: 1 }];
    options.extend((2..=n).map(|w| Stripe { width: w, height: 1 }));
    options.extend((2..=r).map(|h| Stripe { width: 1, height: h }));
    for s in options {
        if s.width > n || s.height > r {
            continue;
        }
        current.push(s);
        fill_stripes(r - s.height, n - s.width, len - 1, current, out);
        current.pop();
    }
}

/// Maximal faces of `C_{r,n}` of dimension k, counted by stripe enumeration.
pub fn count_maximal_faces(r: usize, n: usize, k: usize) -> u128 {
    stripe_tuples(r, n, k + 1).len() as u128
}

/// The same count by dynamic programming over (height used, width used).
pub fn count_maximal_faces_dp(r: usize, n: usize, k: usize) -> u128 {
    // table[h][w] = tuples of the current length covering h rows, w columns
    let mut table = vec![vec![0u128; n + 1]; r + 1];
    table[0][0] = 1;
    for _ in 0..=k {
        let mut next = vec![vec![0u128; n + 1]; r + 1];
        for h in 0..=r {
            for w in 0..=n {
                let c = table[h][w];
                if c == 0 {
                    continue;
                }
                if h < r && w < n {
                    next[h + 1][w + 1] += c;
                }
                if h < r {
                    for w2 in (w + 2)..=n {
                        next[h + 1][w2] += c;
                    }
                }
                if w < n {
                    for h2 in (h + 2)..=r {
                        next[h2][w + 1] += c;
                    }
                }
            }
        }
        table = next;
    }
    table[r][n]
}

/// Coefficient of `x^r y^n z^k` read off both printed generating functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GfReport {
    pub r: usize,
    pub n: usize,
    pub k: usize,
    pub enumeration: u128,
    /// Coefficient of the exponential form times r! n! k!.
    pub egf: Rat,
    /// Ordinary form with the minus sign in its denominator, as printed.
    pub ogf_printed: Rat,
    /// Ordinary form with both stripe terms added in the denominator.
    pub ogf_corrected: Rat,
    pub egf_mismatch: bool,
    pub ogf_printed_mismatch: bool,
    pub ogf_corrected_mismatch: bool,
}

fn factorial(m: usize) -> Rat {
    (1..=m).map(|k| Rat::from_integer(k.into())).product()
}

/// Expands both generating functions to total degree `truncation` and
/// compares the `x^r y^n z^k` coefficient with stripe enumeration.
pub fn gf_coefficient_check(r: usize, n: usize, k: usize, truncation: u32) -> Result<GfReport> {
    let needed = (r + n + k + 1) as u32;
    if truncation < needed {
        return Err(Error::Config(format!(
            "truncation degree {truncation} is below the required {needed}"
        )));
    }
    // Exponents beyond the target never contribute to its coefficient.
    let t = Truncation::capped(truncation, [r as u32, n as u32, k as u32 + 1]);
    let (x, y, z) = (Series::x(t), Series::y(t), Series::z(t));
    let one = Series::constant(t, Rat::one());
    let exp_exp = [r as u32, n as u32, k as u32];

    // y(e^x - 1) + x(e^y - 1) - xy
    let ex_minus_one = &x.exp() - &one;
    let ey_minus_one = &y.exp() - &one;
    let t = &(&(&y * &ex_minus_one) + &(&x * &ey_minus_one)) - &(&x * &y);
    let egf = (&z * &t).exp().derivative_z();
    let egf_value = egf.coeff(exp_exp) * factorial(r) * factorial(n) * factorial(k);

    // xy/(1-y) and y x^2/(1-x)
    let horizontal = &(&x * &y) * &y.geometric();
    let vertical = &(&(&y * &x) * &x) * &x.geometric();
    let plus = &horizontal + &vertical;
    let minus = &horizontal - &vertical;
    let ogf_printed = &plus * &(&z * &minus).geometric();
    let ogf_corrected = &plus * &(&z * &plus).geometric();

    let enumeration = count_maximal_faces(r, n, k);
    let as_rat = Rat::from_integer(enumeration.into());
    let printed = ogf_printed.coeff(exp_exp);
    let corrected = ogf_corrected.coeff(exp_exp);
    Ok(GfReport {
        r,
        n,
        k,
        enumeration,
        egf_mismatch: egf_value != as_rat,
        ogf_printed_mismatch: printed != as_rat,
        ogf_corrected_mismatch: corrected != as_rat,
        egf: egf_value,
        ogf_printed: printed,
        ogf_corrected: corrected,
    })
}

/// Default truncation for [`gf_coefficient_check`].
pub fn gf_truncation(r: usize, n: usize, k: usize) -> u32 {
    (r + n + k + 1) as u32
}
