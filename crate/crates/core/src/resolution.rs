//! Face poset of the tropical polytope and the signed monomial matrices of
//! its minimal linear cellular resolution.
//!
//! Faces are keyed by grid. Starting from the vertex grids, a face of one
//! dimension higher is obtained by unshading a single box as long as every
//! row and column keeps a shaded box. The dimension of a face is its number
//! of unshaded boxes minus (r-1)(n-1).

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::{is_cell, VertexRecord};
use crate::grid::Grid;
use crate::ideal::SqfMonomial;
use crate::trop::{PointTP, Rat, WeightMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub grid: Grid,
    pub dim: usize,
    /// Indices into [`FacePoset::vertices`], ascending.
    pub vertices: Vec<usize>,
    /// Barycenter of the vertices, a relative-interior point.
    pub sample: PointTP,
}

impl Face {
    pub fn label(&self) -> SqfMonomial {
        SqfMonomial::from_grid(&self.grid)
    }
}

#[derive(Clone, Debug)]
pub struct FacePoset {
    rows: usize,
    cols: usize,
    vertices: Vec<VertexRecord>,
    levels: Vec<Vec<Face>>,
    /// `covers[d]` holds pairs (index in level d+1, index in level d).
    covers: Vec<Vec<(usize, usize)>>,
}

impl FacePoset {
    /// Assembles a poset from explicit levels and cover pairs; levels must be
    /// sorted by grid and level 0 must match `vertices`.
    pub fn from_parts(
        rows: usize,
        cols: usize,
        vertices: Vec<VertexRecord>,
        levels: Vec<Vec<Face>>,
        covers: Vec<Vec<(usize, usize)>>,
    ) -> Result<Self> {
        if levels.len() != covers.len() + 1 {
            return Err(Error::Internal("one cover list per pair of levels expected".into()));
        }
        for (d, level) in levels.iter().enumerate() {
            if let Some(f) = level.iter().find(|f| f.dim != d) {
                return Err(Error::Internal(format!("face {} filed at dimension {d}", f.grid)));
            }
        }
        Ok(FacePoset {
            rows,
            cols,
            vertices,
            levels,
            covers,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn vertices(&self) -> &[VertexRecord] {
        &self.vertices
    }

    pub fn levels(&self) -> &[Vec<Face>] {
        &self.levels
    }

    pub fn faces(&self, dim: usize) -> &[Face] {
        self.levels.get(dim).map_or(&[], Vec::as_slice)
    }

    pub fn covers(&self, dim: usize) -> &[(usize, usize)] {
        self.covers.get(dim).map_or(&[], Vec::as_slice)
    }

    pub fn max_dim(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn all_faces(&self) -> impl Iterator<Item = &Face> {
        self.levels.iter().flatten()
    }

    /// Facets of face `index` in level `dim` (indices into level dim-1).
    pub fn facets_of(&self, dim: usize, index: usize) -> Vec<usize> {
        if dim == 0 {
            return Vec::new();
        }
        self.covers[dim - 1]
            .iter()
            .filter(|&&(upper, _)| upper == index)
            .map(|&(_, lower)| lower)
            .collect()
    }
}

fn barycenter(points: &[&PointTP]) -> Result<PointTP> {
    let n = points[0].len();
    let count = Rat::from_integer(points.len().into());
    let coords = (0..n)
        .map(|j| points.iter().map(|p| &p.coords()[j]).sum::<Rat>() / &count)
        .collect();
    PointTP::new(coords)
}

/// Builds every bounded face from the complete list of vertices.
pub fn build_face_poset(vertices: &[VertexRecord], v: &WeightMatrix) -> Result<FacePoset> {
    let (r, n) = (v.rows(), v.cols());
    if vertices.is_empty() {
        return Err(Error::Precondition("no vertices given".into()));
    }
    let mut verts = vertices.to_vec();
    verts.sort_by(|a, b| a.grid.cmp(&b.grid));
    let base = (r - 1) * (n - 1);
    let max_dim = r.min(n) - 1;

    let mut levels: Vec<Vec<Face>> = vec![verts
        .iter()
        .enumerate()
        .map(|(k, rec)| Face {
            grid: rec.grid.clone(),
            dim: 0,
            vertices: vec![k],
            sample: rec.coords.clone(),
        })
        .collect()];
    if let Some(f) = levels[0].iter().find(|f| f.grid.unshaded_count() != base) {
        return Err(Error::Internal(format!("vertex grid {} has the wrong degree", f.grid)));
    }
    let mut covers: Vec<Vec<(usize, usize)>> = Vec::new();

    loop {
        let d = levels.len() - 1;
        let mut found: BTreeMap<Grid, (BTreeSet<usize>, Vec<usize>)> = BTreeMap::new();
        for (fi, face) in levels[d].iter().enumerate() {
            for (i, j) in face.grid.shaded().collect::<Vec<_>>() {
                let cand = face.grid.with(i, j, false);
                if !cand.covers_all_lines() {
                    continue;
                }
                if let Some((verts_of, facets)) = found.get_mut(&cand) {
                    verts_of.extend(face.vertices.iter().copied());
                    facets.push(fi);
                    continue;
                }
                if !is_cell(&cand, v) {
                    continue;
                }
                found.insert(cand, (face.vertices.iter().copied().collect(), vec![fi]));
            }
        }
        if found.is_empty() {
            break;
        }
        if d + 1 > max_dim {
            return Err(Error::Internal(format!(
                "found a face of dimension {} above the bound {max_dim}",
                d + 1
            )));
        }
        let mut level = Vec::with_capacity(found.len());
        let mut cover = Vec::new();
        for (idx, (grid, (verts_of, facets))) in found.into_iter().enumerate() {
            if grid.unshaded_count() != base + d + 1 {
                return Err(Error::Internal(format!(
                    "face {grid} has {} unshaded boxes, expected {}",
                    grid.unshaded_count(),
                    base + d + 1
                )));
            }
            let vertex_ids: Vec<usize> = verts_of.into_iter().collect();
            let pts: Vec<&PointTP> = vertex_ids.iter().map(|&k| &verts[k].coords).collect();
            let sample = barycenter(&pts)?;
            cover.extend(facets.into_iter().map(|f| (idx, f)));
            level.push(Face {
                grid,
                dim: d + 1,
                vertices: vertex_ids,
                sample,
            });
        }
        cover.sort_unstable();
        levels.push(level);
        covers.push(cover);
    }
    FacePoset::from_parts(r, n, verts, levels, covers)
}

/// One boundary map: rows are (i-1)-faces, columns are i-faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialMatrix {
    pub row_labels: Vec<SqfMonomial>,
    pub col_labels: Vec<SqfMonomial>,
    pub entries: Vec<Vec<i64>>,
}

impl MonomialMatrix {
    pub fn nrows(&self) -> usize {
        self.row_labels.len()
    }

    pub fn ncols(&self) -> usize {
        self.col_labels.len()
    }

    /// Nonzero entries as (row, column, sign).
    pub fn triplets(&self) -> Vec<(usize, usize, i64)> {
        let mut out = Vec::new();
        for (p, row) in self.entries.iter().enumerate() {
            for (q, &e) in row.iter().enumerate() {
                if e != 0 {
                    out.push((p, q, e));
                }
            }
        }
        out
    }

    pub fn row_is_zero(&self, p: usize) -> bool {
        self.entries[p].iter().all(|&e| e == 0)
    }
}

/// Integer matrix product.
pub fn compose(a: &MonomialMatrix, b: &MonomialMatrix) -> Vec<Vec<i64>> {
    let inner = a.ncols();
    (0..a.nrows())
        .map(|p| {
            (0..b.ncols())
                .map(|q| (0..inner).map(|k| a.entries[p][k] * b.entries[k][q]).sum())
                .collect()
        })
        .collect()
}

/// The last n-1 coordinates of the canonical representative.
fn affine_coords(p: &PointTP) -> Vec<Rat> {
    p.coords()[1..].to_vec()
}

fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Row-reduces a copy of `vectors`; returns the rank and pivot columns.
fn rank_and_pivots(vectors: &[Vec<Rat>]) -> (usize, Vec<usize>) {
    let mut rows = vectors.to_vec();
    let width = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for r in rank + 1..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            let f = &rows[r][col] / &pivot[col];
            for (x, pv) in rows[r].iter_mut().zip(&pivot) {
                *x -= &f * pv;
            }
        }
        pivots.push(col);
        rank += 1;
    }
    (rank, pivots)
}

fn determinant(mut m: Vec<Vec<Rat>>) -> Rat {
    let k = m.len();
    let mut det = Rat::from_integer(1.into());
    for col in 0..k {
        let Some(p) = (col..k).find(|&r| !m[r][col].is_zero()) else {
            return Rat::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pivot = m[col].clone();
        det *= &pivot[col];
        for row in m.iter_mut().skip(col + 1) {
            if row[col].is_zero() {
                continue;
            }
            let f = &row[col] / &pivot[col];
            for (x, pv) in row.iter_mut().zip(&pivot) {
                *x -= &f * pv;
            }
        }
    }
    det
}

/// Ordered tangent basis of a face: differences to the first vertex, taken
/// greedily in canonical vertex order while they raise the rank.
fn tangent_basis(face: &Face, poset: &FacePoset) -> Result<Vec<Vec<Rat>>> {
    let pts: Vec<Vec<Rat>> = face
        .vertices
        .iter()
        .map(|&k| affine_coords(&poset.vertices[k].coords))
        .collect();
    let mut basis: Vec<Vec<Rat>> = Vec::with_capacity(face.dim);
    for p in &pts[1..] {
        if basis.len() == face.dim {
            break;
        }
        let mut trial = basis.clone();
        trial.push(sub(p, &pts[0]));
        if rank_and_pivots(&trial).0 == trial.len() {
            basis = trial;
        }
    }
    if basis.len() != face.dim {
        return Err(Error::Internal(format!(
            "face {} spans dimension {} instead of {}",
            face.grid,
            basis.len(),
            face.dim
        )));
    }
    Ok(basis)
}

/// Signed boundary maps M_1, ..., M_d of the cellular resolution.
///
/// Each face is oriented by its tangent basis. For a facet F of G the sign
/// compares (outward vector, basis of F) against the basis of G, where the
/// outward vector points from the barycenter of G to that of F. The result
/// is checked to be a chain complex.
pub fn boundary_matrices(poset: &FacePoset) -> Result<Vec<MonomialMatrix>> {
    let bases: Vec<Vec<Vec<Vec<Rat>>>> = poset
        .levels
        .iter()
        .map(|level| level.iter().map(|f| tangent_basis(f, poset)).collect())
        .collect::<Result<_>>()?;
    let mut matrices = Vec::new();
    for dim in 1..poset.levels.len() {
        let lower = &poset.levels[dim - 1];
        let upper = &poset.levels[dim];
        let mut entries = vec![vec![0i64; upper.len()]; lower.len()];
        for &(g, f) in &poset.covers[dim - 1] {
            let basis_g = &bases[dim][g];
            let coords = chart_coordinates(basis_g);
            let restrict = |vecs: &[Vec<Rat>]| -> Vec<Vec<Rat>> {
                vecs.iter()
                    .map(|vec| coords.iter().map(|&c| vec[c].clone()).collect())
                    .collect()
            };
            let outward = sub(
                &affine_coords(&lower[f].sample),
                &affine_coords(&upper[g].sample),
            );
            let mut frame = vec![outward];
            frame.extend(bases[dim - 1][f].iter().cloned());
            let det_frame = determinant(restrict(&frame));
            let det_g = determinant(restrict(basis_g));
            if det_frame.is_zero() || det_g.is_zero() {
                return Err(Error::Internal(format!(
                    "degenerate orientation frame for facet {} of {}",
                    lower[f].grid, upper[g].grid
                )));
            }
            entries[f][g] = if det_frame.is_positive() == det_g.is_positive() {
                1
            } else {
                -1
            };
        }
        matrices.push(MonomialMatrix {
            row_labels: lower.iter().map(Face::label).collect(),
            col_labels: upper.iter().map(Face::label).collect(),
            entries,
        });
    }
    for pair in matrices.windows(2) {
        let product = compose(&pair[0], &pair[1]);
        if product.iter().flatten().any(|&e| e != 0) {
            return Err(Error::Internal(
                "boundary maps do not compose to zero".into(),
            ));
        }
    }
    Ok(matrices)
}

/// Coordinates on which the span of `basis` projects isomorphically.
fn chart_coordinates(basis: &[Vec<Rat>]) -> Vec<usize> {
    let width = basis.first().map_or(0, Vec::len);
    let transposed: Vec<Vec<Rat>> = (0..width)
        .map(|c| basis.iter().map(|b| b[c].clone()).collect())
        .collect();
    // Independent rows of the transpose = coordinates with a nonsingular minor.
    let mut chosen: Vec<usize> = Vec::new();
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for (c, row) in transposed.into_iter().enumerate() {
        if chosen.len() == basis.len() {
            break;
        }
        let mut trial = rows.clone();
        trial.push(row);
        if rank_and_pivots(&trial).0 == trial.len() {
            rows = trial;
            chosen.push(c);
        }
    }
    chosen
}

pub fn f_vector(poset: &FacePoset) -> Vec<usize> {
    poset.levels.iter().map(Vec::len).collect()
}

/// Counts of faces keyed by (dimension, number of vertices).
pub type FMatrix = BTreeMap<(usize, usize), usize>;

pub fn f_matrix(poset: &FacePoset) -> FMatrix {
    let mut out = FMatrix::new();
    for face in poset.all_faces() {
        *out.entry((face.dim, face.vertices.len())).or_insert(0) += 1;
    }
    out
}

/// Multinomial (r+n-i-2 choose r-i-1, n-i-1, i), or 0 outside the range.
pub fn expected_face_count(r: usize, n: usize, i: usize) -> u128 {
    if i + 1 > r || i + 1 > n {
        return 0;
    }
    let (a, b, c) = (r - i - 1, n - i - 1, i);
    multinomial(&[a, b, c])
}

pub fn multinomial(parts: &[usize]) -> u128 {
    let mut total = 0usize;
    let mut acc: u128 = 1;
    for &p in parts {
        for k in 1..=p {
            total += 1;
            acc = acc * total as u128 / k as u128;
        }
    }
    acc
}

/// Maximal faces: dimension n-1, or an all-zero row in the next boundary map.
pub fn maximal_faces<'a>(poset: &'a FacePoset, matrices: &[MonomialMatrix]) -> Vec<&'a Face> {
    let mut out = Vec::new();
    for (dim, level) in poset.levels.iter().enumerate() {
        for (idx, face) in level.iter().enumerate() {
            let maximal = dim == poset.cols - 1
                || matrices.get(dim).map_or(true, |m| m.row_is_zero(idx));
            if maximal {
                out.push(face);
            }
        }
    }
    out
}

/// Linearity and multiplicity-one checks on a list of boundary maps.
///
/// Every nonzero entry must be ±1 and lie exactly where the row label
/// divides the column label with degree one less; labels within each
/// matrix side must be distinct.
pub fn minimality_linearity_check(matrices: &[MonomialMatrix]) -> bool {
    matrices.iter().all(|m| {
        let distinct = |labels: &[SqfMonomial]| {
            labels.iter().collect::<std::collections::HashSet<_>>().len() == labels.len()
        };
        if !distinct(&m.row_labels) || !distinct(&m.col_labels) {
            return false;
        }
        m.entries.iter().enumerate().all(|(p, row)| {
            row.iter().enumerate().all(|(q, &e)| {
                let row_label = &m.row_labels[p];
                let col_label = &m.col_labels[q];
                let divides = row_label.divides(col_label);
                let linear = col_label.degree() == row_label.degree() + 1;
                match e {
                    0 => !divides,
                    1 | -1 => divides && linear,
                    _ => false,
                }
            })
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::enumerate_vertices;

    fn ex4pt() -> WeightMatrix {
        WeightMatrix::from_ints(&[
            vec![0, 3, 4],
            vec![0, 5, 2],
            vec![0, 1, 1],
            vec![0, 4, -1],
        ])
        .unwrap()
    }

    #[test]
    fn multinomials() {
        assert_eq!(multinomial(&[3, 2, 0]), 10);
        assert_eq!(expected_face_count(4, 3, 1), 12);
        assert_eq!(expected_face_count(4, 3, 2), 3);
        assert_eq!(expected_face_count(4, 3, 3), 0);
        let f55: Vec<u128> = (0..5).map(|i| expected_face_count(5, 5, i)).collect();
        assert_eq!(f55, vec![70, 140, 90, 20, 1]);
    }

    #[test]
    fn example_poset() {
        let v = ex4pt();
        let poset = build_face_poset(&enumerate_vertices(&v).unwrap(), &v).unwrap();
        assert_eq!(f_vector(&poset), vec![10, 12, 3]);
        let matrices = boundary_matrices(&poset).unwrap();
        assert_eq!(matrices.len(), 2);
        assert_eq!((matrices[1].nrows(), matrices[1].ncols()), (12, 3));
        assert!(minimality_linearity_check(&matrices));
        let zero_rows: Vec<usize> = (0..12).filter(|&p| matrices[1].row_is_zero(p)).collect();
        assert_eq!(zero_rows.len(), 1);
        assert_eq!(matrices[1].row_labels[zero_rows[0]].degree(), 7);
        let maximal = maximal_faces(&poset, &matrices);
        assert_eq!(maximal.iter().filter(|f| f.dim == 2).count(), 3);
        assert_eq!(maximal.iter().filter(|f| f.dim == 1).count(), 1);
        assert_eq!(maximal.len(), 4);
    }

    #[test]
    fn segment() {
        let v = WeightMatrix::from_ints(&[vec![0, 0], vec![0, 1]]).unwrap();
        let poset = build_face_poset(&enumerate_vertices(&v).unwrap(), &v).unwrap();
        assert_eq!(f_vector(&poset), vec![2, 1]);
        let matrices = boundary_matrices(&poset).unwrap();
        let mut col: Vec<i64> = matrices[0].entries.iter().map(|r| r[0]).collect();
        col.sort();
        assert_eq!(col, vec![-1, 1]);
        let maximal = maximal_faces(&poset, &matrices);
        assert_eq!(maximal.len(), 1);
        assert_eq!(maximal[0].dim, 1);
    }

    #[test]
    fn single_point() {
        let v = WeightMatrix::from_ints(&[vec![0, 1, 2]]).unwrap();
        let poset = build_face_poset(&enumerate_vertices(&v).unwrap(), &v).unwrap();
        assert_eq!(f_vector(&poset), vec![1]);
        assert!(boundary_matrices(&poset).unwrap().is_empty());
        assert_eq!(f_matrix(&poset), FMatrix::from([((0, 1), 1)]));
    }

    #[test]
    fn duplicated_label_fails_the_check() {
        let v = ex4pt();
        let poset = build_face_poset(&enumerate_vertices(&v).unwrap(), &v).unwrap();
        let mut matrices = boundary_matrices(&poset).unwrap();
        let dup = matrices[1].col_labels[0].clone();
        matrices[1].col_labels[1] = dup;
        assert!(!minimality_linearity_check(&matrices));
    }
}
