//! Dense matrix substrate: arithmetic, predicates, the symmetric
//! eigensolver, the reference exponential and the Pfaffian.

mod eig;
mod expm;
pub mod io;
mod mat;
mod pfaffian;

pub(crate) use eig::jacobi;
pub use eig::{sym_eig, SymEig};
pub use expm::exp_oracle;
pub use mat::{frobenius_inner, trace_metric, Mat};
pub use pfaffian::pfaffian;
