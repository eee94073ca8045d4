//! Exact multivalued solutions of the homentropic 1-D Euler equations.
//!
//! Every numeric routine is generic over [`Scalar`]; the aliases below fix
//! the scalar to `f64` for everyday use.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod family;
pub mod geometry;
pub mod numeric;
pub mod oracle;
pub mod scalar;
pub mod singularity;
pub mod thermo;

pub use family::{Branch, FamilyError, ProfileSample, SolutionFamily};
pub use geometry::{GeometryError, SystemKind};
pub use oracle::OracleError;
pub use scalar::Scalar;
pub use singularity::{CausticCurve, Cusp, ShockFront, SingularityError, Termination};
pub use thermo::{HomentropicModel, RhoDomain, ThermoError};

pub type Family = family::SolutionFamily<f64>;
pub type Model = thermo::HomentropicModel<f64>;
pub type Domain = thermo::RhoDomain<f64>;
pub type Profile = Vec<family::ProfileSample<f64>>;
pub type Caustic = singularity::CausticCurve<f64>;
pub type Front = singularity::ShockFront<f64>;
