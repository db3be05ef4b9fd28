//! The multinomial Dyson matrix `W` and its exact inverse `M`.
//!
//! `W(λ,ν) = C(n,ν)·λ^ν` on type vectors of mass `n`, with the convention
//! `0^0 = 1`. Scaled by `n^{-n}`, row `λ` is the one-step transition law of
//! the `n`-individual multitype Wright-Fisher chain started from type counts
//! `λ`. `W` is invertible; its inverse `M` is what turns an exchangeable law
//! into a signed mixing measure, so `M·W = W·M = I` is verified exactly at
//! construction time.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactla::LinalgError;
use crate::typecomb::{multinomial, TypeIndex, TypeVector, TypecombError};
use crate::{Rat, RatMatrix};

/// Default cap on the matrix dimension `C(n+d-1, d-1)`; exact dense
/// inversion beyond this is out of desk scale.
pub const DEFAULT_SIZE_CAP: usize = 3000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DysonError {
    #[error("type space has dimension {required}, exceeding the size cap {cap}")]
    SizeCapExceeded { required: usize, cap: usize },
    #[error("n must be at least 1")]
    ZeroMass,
    #[error("alphabet size must be at least 1")]
    ZeroAlphabet,
    #[error(transparent)]
    Type(#[from] TypecombError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `base^exp` with the convention `0^0 = 1`.
pub fn pow_rat(base: &Rat, exp: u32) -> Rat {
    if exp == 0 {
        return Rat::one();
    }
    let mut acc = Rat::one();
    let mut sq = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc *= sq.clone();
        }
        e >>= 1;
        if e > 0 {
            sq = sq.clone() * sq;
        }
    }
    acc
}

/// `λ^ν = ∏_a λ[a]^{ν[a]}` for a probability-or-count vector `λ` given as
/// rationals, with `0^0 = 1`.
pub fn vector_power(base: &[Rat], nu: &TypeVector) -> Rat {
    debug_assert_eq!(base.len(), nu.dim());
    let mut acc = Rat::one();
    for (b, &e) in base.iter().zip(nu.counts()) {
        acc *= pow_rat(b, e);
    }
    acc
}

fn check_dimensions(n: u32, d: usize, cap: usize) -> Result<TypeIndex, DysonError> {
    if n == 0 {
        return Err(DysonError::ZeroMass);
    }
    if d == 0 {
        return Err(DysonError::ZeroAlphabet);
    }
    let index = TypeIndex::new(n, d);
    if index.len() > cap {
        return Err(DysonError::SizeCapExceeded {
            required: index.len(),
            cap,
        });
    }
    Ok(index)
}

/// Build `W` for mass `n` over `d` symbols: rows `λ`, columns `ν`, both in
/// lexicographic type order.
pub fn build_w(n: u32, d: usize, cap: usize) -> Result<RatMatrix, DysonError> {
    let index = check_dimensions(n, d, cap)?;
    Ok(build_w_indexed(&index))
}

fn build_w_indexed(index: &TypeIndex) -> RatMatrix {
    let size = index.len();
    RatMatrix::from_fn(size, size, |r, c| {
        let lambda = index.type_at(r);
        let nu = index.type_at(c);
        let lambda_rat: Vec<Rat> = lambda
            .counts()
            .iter()
            .map(|&x| Rat::from(BigInt::from(x)))
            .collect();
        Rat::from(multinomial(nu)) * vector_power(&lambda_rat, nu)
    })
}

/// The Dyson matrix together with its exact inverse.
#[derive(Debug, Clone)]
pub struct DysonPair {
    n: u32,
    d: usize,
    index: TypeIndex,
    w: RatMatrix,
    m: RatMatrix,
}

/// Build `W` and `M = W^{-1}`; both products against the identity are
/// checked exactly before returning.
pub fn build_pair(n: u32, d: usize, cap: usize) -> Result<DysonPair, DysonError> {
    let index = check_dimensions(n, d, cap)?;
    let w = build_w_indexed(&index);
    let m = w.inverse()?;
    if !m.mul(&w)?.is_identity() || !w.mul(&m)?.is_identity() {
        return Err(DysonError::Linalg(LinalgError::Singular { rank: w.rank() }));
    }
    Ok(DysonPair { n, d, index, w, m })
}

impl DysonPair {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn index(&self) -> &TypeIndex {
        &self.index
    }

    pub fn w(&self) -> &RatMatrix {
        &self.w
    }

    pub fn m(&self) -> &RatMatrix {
        &self.m
    }

    /// Row of `M` indexed by `nu`, as a type-keyed map over `λ`.
    pub fn m_row(&self, nu: &TypeVector) -> Result<BTreeMap<TypeVector, Rat>, DysonError> {
        nu.check_shape(self.n, self.d)?;
        let r = self
            .index
            .index_of(nu)
            .expect("shape-checked type is enumerated");
        Ok(self
            .index
            .iter()
            .enumerate()
            .map(|(c, lambda)| (lambda.clone(), self.m.get(r, c).clone()))
            .collect())
    }
}

/// Report of the exact-rank invertibility check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HompolReport {
    pub n: u32,
    pub d: usize,
    pub rank: usize,
    pub expected: usize,
    pub pass: bool,
}

/// Verify that `W` has full rank `C(n+d-1, d-1)`, i.e. that the homogeneous
/// polynomials `(λ_1 x_1 + … + λ_d x_d)^n` over types `λ` are linearly
/// independent.
pub fn verify_hompol(n: u32, d: usize, cap: usize) -> Result<HompolReport, DysonError> {
    let index = check_dimensions(n, d, cap)?;
    let w = build_w_indexed(&index);
    let rank = w.rank();
    let expected = index.len();
    Ok(HompolReport {
        n,
        d,
        rank,
        expected,
        pass: rank == expected,
    })
}

/// Both sides of the terminal finite-difference identity
/// `Δ_{h_1}···Δ_{h_n} t^n |_{t=0} = n!·h_1···h_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteDifferenceReport {
    pub lhs: Rat,
    pub rhs: Rat,
    pub pass: bool,
}

/// Evaluate the iterated difference of `t^n` at `t = 0` by the
/// inclusion–exclusion expansion over all `2^n` subsets of the steps, and
/// compare with `n!·h_1···h_n` exactly.
pub fn finite_difference_identity(n: u32, h: &[Rat]) -> FiniteDifferenceReport {
    assert_eq!(h.len(), n as usize, "need one step per difference operator");
    let n_usize = n as usize;
    let mut lhs = Rat::zero();
    for mask in 0u64..(1u64 << n_usize) {
        let mut shift = Rat::zero();
        let mut included = 0u32;
        for (i, step) in h.iter().enumerate() {
            if mask >> i & 1 == 1 {
                shift += step.clone();
                included += 1;
            }
        }
        let term = pow_rat(&shift, n);
        // Δ_{h_1}···Δ_{h_n} f(t) = Σ_I (-1)^{n-|I|} f(t + Σ_{i∈I} h_i)
        if (n - included) % 2 == 0 {
            lhs += term;
        } else {
            lhs -= term;
        }
    }
    let mut rhs = Rat::from(factorial(n));
    for step in h {
        rhs *= step.clone();
    }
    FiniteDifferenceReport {
        pass: lhs == rhs,
        lhs,
        rhs,
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::typecomb::enumerate_types;
    use crate::{rat, rat_int};

    fn tv(counts: &[u32]) -> TypeVector {
        TypeVector::new(counts.to_vec())
    }

    #[test]
    fn zero_power_convention() {
        assert_eq!(pow_rat(&rat_int(0), 0), rat_int(1));
        assert_eq!(pow_rat(&rat_int(0), 3), rat_int(0));
        assert_eq!(pow_rat(&rat(2, 3), 2), rat(4, 9));
        assert_eq!(pow_rat(&rat(-1, 2), 3), rat(-1, 8));
    }

    #[test]
    fn w_2_2_matches_hand_evaluation() {
        let w = build_w(2, 2, DEFAULT_SIZE_CAP).unwrap();
        let expected = RatMatrix::from_rows(vec![
            vec![rat_int(4), rat_int(0), rat_int(0)],
            vec![rat_int(1), rat_int(2), rat_int(1)],
            vec![rat_int(0), rat_int(0), rat_int(4)],
        ]);
        assert_eq!(w, expected);
    }

    #[test]
    fn w_mass_one_is_identity() {
        for d in 1..=5 {
            let w = build_w(1, d, DEFAULT_SIZE_CAP).unwrap();
            assert!(w.is_identity());
        }
    }

    #[test]
    fn w_rows_sum_to_n_pow_n() {
        // multinomial theorem: Σ_ν C(n,ν) λ^ν = n^n, and the n^{-n}-scaled
        // matrix is row-stochastic (Wright-Fisher transition rows)
        for n in 1..=6u32 {
            for d in 1..=4usize {
                if enumerate_types(n, d).len() > 200 {
                    continue;
                }
                let w = build_w(n, d, DEFAULT_SIZE_CAP).unwrap();
                let total = Rat::from(BigInt::from(n).pow(n));
                for r in 0..w.rows() {
                    let sum: Rat = w.row(r).iter().cloned().sum();
                    assert_eq!(sum, total);
                }
            }
        }
    }

    #[test]
    fn pair_2_2_inverse_matches_paper_row() {
        let pair = build_pair(2, 2, DEFAULT_SIZE_CAP).unwrap();
        let expected = RatMatrix::from_rows(vec![
            vec![rat(1, 4), rat_int(0), rat_int(0)],
            vec![rat(-1, 8), rat(1, 2), rat(-1, 8)],
            vec![rat_int(0), rat_int(0), rat(1, 4)],
        ]);
        assert_eq!(*pair.m(), expected);
    }

    #[test]
    fn pair_mass_one_inverse_is_identity() {
        let pair = build_pair(1, 3, DEFAULT_SIZE_CAP).unwrap();
        assert!(pair.m().is_identity());
    }

    #[test]
    fn pair_3_2_products_are_identity() {
        let pair = build_pair(3, 2, DEFAULT_SIZE_CAP).unwrap();
        assert!(pair.m().mul(pair.w()).unwrap().is_identity());
        assert!(pair.w().mul(pair.m()).unwrap().is_identity());
    }

    #[test]
    fn m_row_examples() {
        let pair = build_pair(2, 2, DEFAULT_SIZE_CAP).unwrap();
        let row = pair.m_row(&tv(&[1, 1])).unwrap();
        assert_eq!(row[&tv(&[0, 2])], rat(-1, 8));
        assert_eq!(row[&tv(&[1, 1])], rat(1, 2));
        assert_eq!(row[&tv(&[2, 0])], rat(-1, 8));

        let row = pair.m_row(&tv(&[2, 0])).unwrap();
        assert_eq!(row[&tv(&[0, 2])], rat_int(0));
        assert_eq!(row[&tv(&[1, 1])], rat_int(0));
        assert_eq!(row[&tv(&[2, 0])], rat(1, 4));

        let unit = build_pair(1, 2, DEFAULT_SIZE_CAP).unwrap();
        let row = unit.m_row(&tv(&[1, 0])).unwrap();
        assert_eq!(row[&tv(&[1, 0])], rat_int(1));
        assert_eq!(row[&tv(&[0, 1])], rat_int(0));
    }

    #[test]
    fn m_row_rejects_wrong_mass() {
        let pair = build_pair(2, 2, DEFAULT_SIZE_CAP).unwrap();
        assert!(pair.m_row(&tv(&[1, 1, 1])).is_err());
        assert!(pair.m_row(&tv(&[2, 1])).is_err());
    }

    #[test]
    fn hompol_small_cases() {
        let report = verify_hompol(2, 2, DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(report.rank, 3);
        assert!(report.pass);
        let report = verify_hompol(1, 5, DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(report.rank, 5);
        assert!(report.pass);
        let report = verify_hompol(4, 3, DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(report.rank, 15);
        assert!(report.pass);
    }

    #[test]
    fn size_cap_is_reported() {
        let err = build_w(10, 10, 100).unwrap_err();
        assert_eq!(
            err,
            DysonError::SizeCapExceeded {
                required: 92378,
                cap: 100
            }
        );
    }

    #[test]
    fn basis_change_round_trip() {
        // expanding λ^n in the u_ν basis via W, then resolving each u_ν back
        // into the λ'^n basis via M, must return the unit coefficient vector
        let pair = build_pair(3, 2, DEFAULT_SIZE_CAP).unwrap();
        let size = pair.index().len();
        for l in 0..size {
            let mut back = vec![Rat::zero(); size];
            for nu in 0..size {
                let coeff = pair.w().get(l, nu);
                for lp in 0..size {
                    back[lp] += coeff.clone() * pair.m().get(nu, lp).clone();
                }
            }
            for (lp, value) in back.iter().enumerate() {
                let expected = if lp == l { Rat::one() } else { Rat::zero() };
                assert_eq!(*value, expected);
            }
        }
    }

    #[test]
    fn finite_difference_hand_values() {
        let r = finite_difference_identity(2, &[rat_int(1), rat_int(1)]);
        assert_eq!(r.lhs, rat_int(2));
        assert_eq!(r.rhs, rat_int(2));
        assert!(r.pass);

        let r = finite_difference_identity(1, &[rat(5, 3)]);
        assert_eq!(r.lhs, rat(5, 3));
        assert!(r.pass);

        let r = finite_difference_identity(3, &[rat(1, 2), rat_int(2), rat_int(-3)]);
        assert_eq!(r.lhs, rat_int(-18));
        assert_eq!(r.rhs, rat_int(-18));
        assert!(r.pass);
    }
}
