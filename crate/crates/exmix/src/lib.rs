//! Exact computation with signed mixing measures for finitely exchangeable laws.
//!
//! A probability law on `S^n` that is invariant under coordinate permutations
//! need not be a mixture of i.i.d. product laws, but it always is once the
//! mixing measure is allowed to be *signed*. This crate constructs that
//! representation for finite alphabets in exact rational arithmetic:
//!
//! * [`typecomb`] — type vectors (multisets of size `n` over the alphabet),
//!   their enumeration and multinomial counts;
//! * [`exactla`] — dense exact linear algebra (solve, inverse, rank,
//!   feasibility, Sylvester's criterion) generic over the scalar;
//! * [`dyson`] — the multinomial Dyson matrix `W(λ,ν) = C(n,ν) λ^ν` and its
//!   exact inverse `M`;
//! * [`mixing`] — per-point mixing measures `ψ`, the canonical mixing measure
//!   `ξ`, total-variation norms and the sorted-coordinate cone form;
//! * [`measureops`] — integration of mixing measures against product laws:
//!   reconstruction, validation, moment and Laplace functionals;
//! * [`extend`] — exact extendibility checks for exchangeable laws, plus the
//!   Gaussian covariance counterexample;
//! * [`cli`] — the `exmix` command-line front end with JSON I/O.
//!
//! All quantities except the Laplace functional are exact rationals. The
//! linear-algebra core is generic over a [`exactla::Scalar`]; the rest of the
//! crate is pinned to the arbitrary-precision rational aliases below.

pub mod cli;
pub mod dyson;
pub mod exactla;
pub mod extend;
pub mod fixtures;
pub mod jsonio;
pub mod measureops;
pub mod mixing;
pub mod poly;
pub mod typecomb;

/// Arbitrary-precision rational scalar used throughout the crate.
pub type Rat = num_rational::BigRational;

/// Dense matrix over [`Rat`].
pub type RatMatrix = exactla::Matrix<Rat>;

pub use exactla::Scalar;

use num_bigint::BigInt;

/// `r == p/q` from machine integers.
pub fn rat(p: i64, q: i64) -> Rat {
    assert!(q != 0, "zero denominator");
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// `r == p` as a rational.
pub fn rat_int(p: i64) -> Rat {
    Rat::from(BigInt::from(p))
}
