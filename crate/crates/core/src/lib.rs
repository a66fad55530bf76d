//! Enumeration and exact verification of quasi-particle bases of principal
//! subspaces of untwisted affine Lie algebras.
//!
//! * [`lie_data`]: Dynkin labeling, Cartan matrices, positive roots.
//! * [`series`]: truncated power series in `q, y_1, …, y_l`.
//! * [`qp_enum`]: monomials, difference conditions, basis census.
//! * [`characters`]: sum sides, product side and the PBW count.
//! * [`verify`]: cross-checks and reports.

pub mod characters;
pub mod error;
pub mod lie_data;
pub mod qp_enum;
pub mod series;
pub mod verify;

pub use error::{EngineError, Result};
pub use lie_data::{build_root_system, AlgebraSpec, Family, RootSystemData};
pub use qp_enum::{Census, DualChargeCounts, QPMonomial, QuasiParticle, WeightSpec};
pub use series::{SeriesKey, TruncatedSeries};
pub use verify::{Status, VerificationReport};
