//! Exact dense linear algebra and linear feasibility.
//!
//! [`Matrix`] and the elimination routines are generic over a [`Scalar`];
//! the crate deploys them at `Rat = BigRational`, where every operation is
//! exact. Feasibility of `{A·q = b, q ≥ 0}` is decided by Fourier–Motzkin
//! elimination with an exact witness or a recombination certificate.

mod feasible;
mod matrix;

pub use feasible::{
    Certificate, Feasibility, FeasibilityError, LinearSystem, FM_VARIABLE_CAP,
};
pub use matrix::{LinalgError, Matrix, PdResult, Scalar};
