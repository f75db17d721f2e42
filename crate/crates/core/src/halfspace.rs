//! Exterior descriptions by closed tropical halfspaces `a + ∪_{j∈A} C_j`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::geometry::VertexRecord;
use crate::grid::Grid;
use crate::ideal::{minimal_transversals, BitSet};
use crate::resolution::FacePoset;
use crate::trop::{PointTP, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Halfspace {
    apex: PointTP,
    /// Sorted, 0-based; a non-empty proper subset of the columns.
    sectors: Vec<usize>,
}

impl Halfspace {
    pub fn new(apex: PointTP, mut sectors: Vec<usize>) -> Result<Self> {
        sectors.sort_unstable();
        sectors.dedup();
        let n = apex.len();
        if sectors.is_empty() || sectors.len() >= n || sectors.iter().any(|&j| j >= n) {
            return Err(Error::Input(format!(
                "sector set {sectors:?} is not a non-empty proper subset of {n} columns"
            )));
        }
        Ok(Halfspace { apex, sectors })
    }

    pub fn apex(&self) -> &PointTP {
        &self.apex
    }

    pub fn sectors(&self) -> &[usize] {
        &self.sectors
    }
}

/// z lies in `apex + C_j` iff j attains `min_k (z_k - apex_k)`.
pub fn halfspace_contains(h: &Halfspace, z: &PointTP) -> Result<bool> {
    if z.len() != h.apex.len() {
        return Err(Error::Input("point and apex dimensions differ".into()));
    }
    let diff: Vec<Rat> = z
        .coords()
        .iter()
        .zip(h.apex.coords())
        .map(|(a, b)| a - b)
        .collect();
    let min = diff.iter().min().expect("n >= 2");
    Ok(h.sectors.iter().any(|&j| diff[j] == *min))
}

/// Inclusion-minimal column sets whose shaded boxes meet every row.
pub fn covering_sets(v: &VertexRecord) -> Vec<Vec<usize>> {
    covers_of_grid(&v.grid)
}

fn covers_of_grid(g: &Grid) -> Vec<Vec<usize>> {
    // A cover hits, for every row, the set of columns shaded in that row.
    let row_sets: Vec<BitSet> = (0..g.rows())
        .map(|i| {
            let mut s = BitSet::new(g.cols());
            for j in (0..g.cols()).filter(|&j| g.is_shaded(i, j)) {
                s.insert(j);
            }
            s
        })
        .collect();
    let mut covers: Vec<Vec<usize>> = minimal_transversals(&row_sets, g.cols())
        .into_iter()
        .map(|s| s.iter().collect())
        .collect();
    covers.sort();
    covers
}

/// Covers whose columns' shaded row sets are pairwise disjoint.
///
/// These are the candidates for minimal halfspaces singled out by the
/// partition conjecture; they are reported, never assumed minimal.
pub fn partition_filter(v: &VertexRecord) -> Vec<Vec<usize>> {
    covering_sets(v)
        .into_iter()
        .filter(|cover| is_partition(&v.grid, cover))
        .collect()
}

fn is_partition(g: &Grid, cover: &[usize]) -> bool {
    (0..g.rows()).all(|i| cover.iter().filter(|&&j| g.is_shaded(i, j)).count() == 1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfspaceRecord {
    pub halfspace: Halfspace,
    /// Index into the poset's vertex list.
    pub source_vertex: usize,
    pub partition: bool,
}

#[derive(Clone, Debug)]
pub struct ExteriorDescription {
    pub halfspaces: Vec<HalfspaceRecord>,
    /// The list is not reduced to the inclusion-minimal halfspaces.
    pub possibly_redundant: bool,
}

/// Halfspaces at every vertex for every proper minimal cover.
pub fn exterior_description(poset: &FacePoset) -> Result<ExteriorDescription> {
    let mut halfspaces = Vec::new();
    for (k, vertex) in poset.vertices().iter().enumerate() {
        for cover in covering_sets(vertex) {
            if cover.len() == poset.cols() {
                // The union of all sectors is the whole space.
                continue;
            }
            let partition = is_partition(&vertex.grid, &cover);
            let h = Halfspace::new(vertex.coords.clone(), cover)?;
            for other in poset.vertices() {
                if !halfspace_contains(&h, &other.coords)? {
                    return Err(Error::Internal(format!(
                        "halfspace at vertex {} with sectors {:?} misses vertex {}",
                        vertex.coords, h.sectors, other.coords
                    )));
                }
            }
            halfspaces.push(HalfspaceRecord {
                halfspace: h,
                source_vertex: k,
                partition,
            });
        }
    }
    Ok(ExteriorDescription {
        halfspaces,
        possibly_redundant: true,
    })
}

/// Whether z lies in every listed halfspace.
pub fn in_all(halfspaces: &[HalfspaceRecord], z: &PointTP) -> Result<bool> {
    for rec in halfspaces {
        if !halfspace_contains(&rec.halfspace, z)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The origin of TP^{n-1}.
pub fn origin(n: usize) -> PointTP {
    PointTP::new(vec![Rat::zero(); n]).expect("n >= 2")
}
