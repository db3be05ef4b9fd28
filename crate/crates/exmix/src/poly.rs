//! Univariate polynomials with rational coefficients.
//!
//! Supports the exact operations the density pieces of mixing measures need:
//! evaluation, products, definite integrals over rational intervals, and
//! integration of the absolute value. `∫|f|` is exact whenever the sign
//! pattern on the interval is rationally resolvable (degree ≤ 2 with rational
//! roots, or no interior roots); otherwise an exact enclosing interval is
//! returned.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::Rat;

/// Coefficients ascending by power, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

/// `∫ |f|` over an interval: exact value, or exact rational bounds when the
/// sign changes at irrational points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AbsIntegral {
    Exact(Rat),
    Bounds { lower: Rat, upper: Rat },
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::new(vec![Rat::zero(), Rat::one()])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![Rat::zero(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c.clone();
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[i] += c.clone();
        }
        Poly::new(coeffs)
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a.clone() * b.clone();
            }
        }
        Poly::new(coeffs)
    }

    pub fn scale(&self, factor: &Rat) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c.clone() * factor.clone()).collect())
    }

    /// `p^a (1-p)^b` expanded.
    pub fn binomial_monomial(a: u32, b: u32) -> Poly {
        let p = Poly::x();
        let q = Poly::new(vec![Rat::one(), -Rat::one()]); // 1 - p
        let mut out = Poly::constant(Rat::one());
        for _ in 0..a {
            out = out.mul(&p);
        }
        for _ in 0..b {
            out = out.mul(&q);
        }
        out
    }

    pub fn antiderivative(&self) -> Poly {
        let mut coeffs = vec![Rat::zero(); self.coeffs.len() + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i + 1] = c.clone() / Rat::from(BigInt::from(i as u64 + 1));
        }
        Poly::new(coeffs)
    }

    /// Exact `∫_lo^hi f`.
    pub fn integrate(&self, lo: &Rat, hi: &Rat) -> Rat {
        let antider = self.antiderivative();
        antider.eval(hi) - antider.eval(lo)
    }

    /// Roots strictly inside `(lo, hi)`, ascending, for degree ≤ 2 when they
    /// are rational. `None` means real irrational roots may exist, so the
    /// sign pattern cannot be resolved exactly.
    fn interior_rational_roots(&self, lo: &Rat, hi: &Rat) -> Option<Vec<Rat>> {
        let inside = |r: &Rat| r > lo && r < hi;
        match self.degree() {
            None | Some(0) => Some(vec![]),
            Some(1) => {
                let root = -self.coeffs[0].clone() / self.coeffs[1].clone();
                Some(if inside(&root) { vec![root] } else { vec![] })
            }
            Some(2) => {
                let a = &self.coeffs[2];
                let b = &self.coeffs[1];
                let c = &self.coeffs[0];
                let disc = b.clone() * b.clone()
                    - Rat::from(BigInt::from(4)) * a.clone() * c.clone();
                if disc.is_negative() {
                    return Some(vec![]);
                }
                let sqrt = rational_sqrt(&disc)?;
                let two_a = Rat::from(BigInt::from(2)) * a.clone();
                let mut roots = vec![
                    (-b.clone() - sqrt.clone()) / two_a.clone(),
                    (-b.clone() + sqrt) / two_a,
                ];
                roots.sort();
                roots.dedup();
                roots.retain(|r| inside(r));
                Some(roots)
            }
            _ => None,
        }
    }

    /// Exact `∫_lo^hi |f|` when the sign pattern is resolvable, otherwise
    /// exact enclosing bounds `|∫f| ≤ ∫|f| ≤ (hi-lo)·sup|f|`.
    pub fn integrate_abs(&self, lo: &Rat, hi: &Rat) -> AbsIntegral {
        if lo >= hi || self.is_zero() {
            return AbsIntegral::Exact(Rat::zero());
        }
        match self.interior_rational_roots(lo, hi) {
            Some(roots) => {
                let mut cuts = vec![lo.clone()];
                cuts.extend(roots);
                cuts.push(hi.clone());
                let mut total = Rat::zero();
                for pair in cuts.windows(2) {
                    total += self.integrate(&pair[0], &pair[1]).abs();
                }
                AbsIntegral::Exact(total)
            }
            None => {
                let lower = self.integrate(lo, hi).abs();
                let m = lo.abs().max(hi.abs());
                let mut sup = Rat::zero();
                let mut power = Rat::one();
                for c in &self.coeffs {
                    sup += c.abs() * power.clone();
                    power *= m.clone();
                }
                let upper = (hi.clone() - lo.clone()) * sup;
                AbsIntegral::Bounds { lower, upper }
            }
        }
    }
}

/// Exact square root of a nonnegative rational, when it is rational.
fn rational_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let num = r.numer().sqrt();
    let den = r.denom().sqrt();
    if &(num.clone() * num.clone()) == r.numer() && &(den.clone() * den.clone()) == r.denom() {
        Some(Rat::new(num, den))
    } else {
        None
    }
}
