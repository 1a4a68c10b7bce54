//! Exact-arithmetic certificates for the three exceptional flag-domain
//! geometries: odd-dimensional projective space under `Sp₂ₙ`, the
//! five-dimensional quadric under `G₂`, and maximal isotropic Grassmannians
//! under `SO₂ₙ₋₁`.

pub mod campaign;
pub mod forms;
pub mod groups;
pub mod linalg;
pub mod octonions;
pub mod orbits;
pub mod sampling;
pub mod scalar;
pub mod serial;
pub mod witnesses;

pub use campaign::{CampaignConfig, Report};
pub use forms::{FormSpec, StandardModel};
pub use groups::GroupSpec;
pub use linalg::{LieAlgebraBasis, Matrix, Subspace, Vector};
pub use orbits::OrbitReport;
pub use scalar::{Scalar, Tower};
pub use witnesses::Witness;
