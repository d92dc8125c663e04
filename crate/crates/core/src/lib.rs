//! Skew-symmetric logarithms of special orthogonal matrices and the
//! Riemannian geometry of O(n) under the Frobenius metric.
//!
//! The crate is organised bottom-up:
//!
//! * [`matcore`]: dense matrices, the Jacobi eigensolver, a reference
//!   matrix exponential and the Pfaffian.
//! * [`skewsvd`]: the SVD system `A = Σ ζ_j A_j` of a skew matrix and the
//!   Rodrigues exponential.
//! * [`canon`]: the angle-block canonical form of `R ∈ SO(n)`.
//! * [`plog`]: principal logarithms and the structure of their set.
//! * [`loglattice`]: verification of arbitrary logarithms and enumeration of
//!   the logarithm lattice in the generic case.
//! * [`geo`]: geodesics, distance, diameter, periodicity, curvature and
//!   diametral pairs.

pub mod canon;
pub mod error;
pub mod geo;
pub mod loglattice;
pub mod matcore;
pub mod plog;
pub mod sampling;
pub mod skewsvd;
pub mod tol;

pub use canon::{canonical_form, CanonicalForm};
pub use error::{Error, Result};
pub use geo::{
    classify_pair, classify_periodicity, diameter, distance, einstein_constants, geodesic,
    minimal_geodesics, sectional_curvature, GeodesicArc, MinimalGeodesics, PairClass, Periodicity,
};
pub use loglattice::{enumerate_logs, is_generic, verify_general_form, GeneralForm, LatticeLog};
pub use matcore::{exp_oracle, frobenius_inner, pfaffian, sym_eig, trace_metric, Mat};
pub use plog::{
    all_principal_logs_generic, classify_component, principal_log, sample_aplog, AplogSample,
    PlogDescriptor, Structure,
};
pub use skewsvd::{decompose, SvdSystem};
pub use tol::Tolerances;
