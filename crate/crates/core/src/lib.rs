//! Median-dual metrics for node-centred, edge-based schemes on simplicial
//! meshes in any dimension.
//!
//! Two independent routes are provided:
//!
//! * [`dual_algebraic`]: per-node dual hypervolumes and per-edge
//!   directed-hyperarea vectors accumulated from cell facet normals.
//! * [`dual_explicit`]: the same quantities built directly from centroid
//!   cubes split with the CFK decomposition ([`cfk`]).
//!
//! [`verify`] compares the two, checks closure of the directed areas and
//! conservation of volume. All geometry is generic over [`Scalar`], which is
//! implemented for `f32`, `f64` and the exact [`Rational`] type.

pub mod cfk;
pub mod dual_algebraic;
pub mod dual_explicit;
pub mod generate;
pub mod geometry;
pub mod io;
pub mod mesh;
pub mod scalar;
pub mod verify;

pub use cfk::{cfk_triangulate, cfk_triangulate_anchored, CfkSimplex};
pub use dual_algebraic::{
    directed_area_field, directed_area_field_with, dual_volume_via_identity, dual_volumes, Accumulation,
    DirectedAreaField, DualError, DualVolumeField, FieldMode, IdentityForm,
};
pub use dual_explicit::{explicit_directed_area, explicit_dual_volume, lumped_normal, CuboidFacet, DualCellCuboid};
pub use geometry::{
    altitude, centroid, generalized_cross, opposite_facet_normal, simplex_hypervolume, GeometryError, SimplexGeom,
    Vector,
};
pub use mesh::{BuildOptions, MeshError, Triangulation};
pub use scalar::{Rational, Scalar};
pub use verify::{run_verification, VerificationReport, VerifyOptions};

pub type Vector64 = Vector<f64>;
pub type Vector32 = Vector<f32>;
pub type VectorQ = Vector<Rational>;

pub type Triangulation64 = Triangulation<f64>;
pub type Triangulation32 = Triangulation<f32>;
pub type TriangulationQ = Triangulation<Rational>;

pub type DirectedAreaField64 = DirectedAreaField<f64>;
pub type DirectedAreaFieldQ = DirectedAreaField<Rational>;

pub type DualVolumeField64 = DualVolumeField<f64>;
pub type DualVolumeFieldQ = DualVolumeField<Rational>;
