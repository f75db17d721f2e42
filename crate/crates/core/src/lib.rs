//! Tropical convex hulls of finitely many points in tropical projective
//! space, computed through the cellular free resolution they support.
//!
//! The pipeline for a generic weight matrix `V` (one point per row):
//! [`trop::ensure_generic`], [`geometry::enumerate_vertices`],
//! [`resolution::build_face_poset`], [`resolution::boundary_matrices`].
//! All arithmetic is exact over the rationals.

pub mod cyclic;
pub mod error;
pub mod geometry;
pub mod grid;
pub mod halfspace;
pub mod ideal;
pub mod lp;
pub mod oracle;
pub mod resolution;
pub mod series;
pub mod trop;

pub use error::{Error, GenericityWitness, Result};
pub use geometry::{enumerate_vertices, VertexRecord};
pub use grid::Grid;
pub use ideal::{MonomialIdeal, SqfMonomial};
pub use resolution::{boundary_matrices, build_face_poset, Face, FacePoset, MonomialMatrix};
pub use trop::{PointTP, Rat, WeightMatrix};
