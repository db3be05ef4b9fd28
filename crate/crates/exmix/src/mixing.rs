//! Mixing measures for exchangeable laws on finite alphabets.
//!
//! An exchangeable law of mass `n` is stored as rational weights per type
//! vector; each ordered tuple in the cell of `ν` carries `weight(ν)/C(n,ν)`.
//! The per-type mixing measure `ψ` places weight `n^n·M(ε,λ)` on the
//! simplex point `λ/n`, and averaging `ψ` over the law's types gives the
//! canonical signed mixing measure `ξ`, which reproduces the law exactly
//! when integrated against `n`-fold products (see [`crate::measureops`]).

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::dyson::{self, DysonError, DysonPair, DEFAULT_SIZE_CAP};
use crate::poly::{AbsIntegral, Poly};
use crate::typecomb::{multinomial, Alphabet, TypeVector, TypecombError};
use crate::Rat;

#[derive(Debug, Error, PartialEq)]
pub enum MixingError {
    #[error("law weights sum to {sum}, expected 1")]
    WeightSum { sum: Rat },
    #[error("law weight for type ({nu}) is {w}, weights must be nonnegative")]
    NegativeWeight { nu: String, w: Rat },
    #[error("law must have mass n >= 1")]
    ZeroMass,
    #[error("atom ({atom}) has coordinate sum {sum}, expected 1")]
    AtomSum { atom: String, sum: Rat },
    #[error("atom ({atom}) has a negative coordinate")]
    AtomNegative { atom: String },
    #[error("atom has {got} coordinates, expected {expected}")]
    AtomDimension { expected: usize, got: usize },
    #[error("piecewise densities are only supported on binary alphabets, got dimension {dim}")]
    DensityDimension { dim: usize },
    #[error("density interval [{from}, {to}] is not a subinterval of [0,1] with from < to")]
    DensityInterval { from: Rat, to: Rat },
    #[error("density intervals overlap at {at}")]
    DensityOverlap { at: Rat },
    #[error("atom ({atom}) is not of the form lambda/n for a type lambda of mass {n}")]
    NotTypeRational { atom: String, n: u32 },
    #[error("cone values must be injective, {value} repeats")]
    RepeatedConeValue { value: Rat },
    #[error("expected {expected} cone values, got {got}")]
    ConeValueCount { expected: usize, got: usize },
    #[error("measure has a density part, expected a purely atomic measure")]
    NotAtomic,
    #[error("mixing pair is for (n={pair_n}, d={pair_d}), law needs (n={n}, d={d})")]
    PairMismatch {
        pair_n: u32,
        pair_d: usize,
        n: u32,
        d: usize,
    },
    #[error("canonical reconstruction self-check failed at n={n}")]
    SelfCheck { n: u32 },
    #[error(transparent)]
    Type(#[from] TypecombError),
    #[error(transparent)]
    Dyson(#[from] DysonError),
}

fn fmt_point(v: &[Rat]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Exchangeable probability law on `S^n`, encoded as nonnegative rational
/// weights per type vector, summing to one. Zero weights are dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct ExchangeableLaw {
    n: u32,
    alphabet: Alphabet,
    weights: BTreeMap<TypeVector, Rat>,
}

impl ExchangeableLaw {
    pub fn new(
        n: u32,
        alphabet: Alphabet,
        weights: impl IntoIterator<Item = (TypeVector, Rat)>,
    ) -> Result<Self, MixingError> {
        if n == 0 {
            return Err(MixingError::ZeroMass);
        }
        let d = alphabet.len();
        let mut map = BTreeMap::new();
        let mut sum = Rat::zero();
        for (nu, w) in weights {
            nu.check_shape(n, d)?;
            if w.is_negative() {
                return Err(MixingError::NegativeWeight { nu: nu.key(), w });
            }
            sum += w.clone();
            if !w.is_zero() {
                *map.entry(nu).or_insert_with(Rat::zero) += w;
            }
        }
        if !sum.is_one() {
            return Err(MixingError::WeightSum { sum });
        }
        Ok(Self {
            n,
            alphabet,
            weights: map,
        })
    }

    /// The law of a uniformly random permutation of `(1, …, n)`: all weight
    /// on the all-ones type over the alphabet `{1, …, n}`.
    pub fn uniform_permutation(n: u32) -> Result<Self, MixingError> {
        if n == 0 {
            return Err(MixingError::ZeroMass);
        }
        let alphabet = Alphabet::numeric(n as usize);
        let all_ones = TypeVector::new(vec![1; n as usize]);
        Self::new(n, alphabet, [(all_ones, Rat::one())])
    }

    /// The i.i.d. law `π^n`: type weights `C(n,ν)·π^ν`.
    pub fn iid(n: u32, alphabet: Alphabet, pi: &[Rat]) -> Result<Self, MixingError> {
        if n == 0 {
            return Err(MixingError::ZeroMass);
        }
        let d = alphabet.len();
        if pi.len() != d {
            return Err(MixingError::AtomDimension {
                expected: d,
                got: pi.len(),
            });
        }
        let weights: Vec<(TypeVector, Rat)> = crate::typecomb::enumerate_types(n, d)
            .into_iter()
            .map(|nu| {
                let w = Rat::from(multinomial(&nu)) * dyson::vector_power(pi, &nu);
                (nu, w)
            })
            .collect();
        Self::new(n, alphabet, weights)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn dim(&self) -> usize {
        self.alphabet.len()
    }

    pub fn weights(&self) -> &BTreeMap<TypeVector, Rat> {
        &self.weights
    }

    /// Weight of a type, zero when absent.
    pub fn weight(&self, nu: &TypeVector) -> Rat {
        self.weights.get(nu).cloned().unwrap_or_else(Rat::zero)
    }

    /// Probability of one ordered tuple in the cell of `nu`:
    /// `weight(ν)/C(n,ν)`.
    pub fn ordered_tuple_probability(&self, nu: &TypeVector) -> Rat {
        self.weight(nu) / Rat::from(multinomial(nu))
    }
}

/// One piece of a piecewise-polynomial density on `[0,1]` in the coordinate
/// `p = π(first symbol)` (binary alphabets only).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityPiece {
    pub from: Rat,
    pub to: Rat,
    pub poly: Poly,
}

/// Signed measure on the probability simplex: rational-weighted atoms, plus
/// an optional piecewise-polynomial density for binary alphabets.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedMixingMeasure {
    dim: usize,
    atoms: BTreeMap<Vec<Rat>, Rat>,
    density: Vec<DensityPiece>,
}

impl SignedMixingMeasure {
    pub fn new_atomic(
        dim: usize,
        atoms: impl IntoIterator<Item = (Vec<Rat>, Rat)>,
    ) -> Result<Self, MixingError> {
        Self::new(dim, atoms, Vec::new())
    }

    pub fn new(
        dim: usize,
        atoms: impl IntoIterator<Item = (Vec<Rat>, Rat)>,
        density: Vec<DensityPiece>,
    ) -> Result<Self, MixingError> {
        let mut map: BTreeMap<Vec<Rat>, Rat> = BTreeMap::new();
        for (point, w) in atoms {
            if point.len() != dim {
                return Err(MixingError::AtomDimension {
                    expected: dim,
                    got: point.len(),
                });
            }
            if point.iter().any(Signed::is_negative) {
                return Err(MixingError::AtomNegative {
                    atom: fmt_point(&point),
                });
            }
            let sum: Rat = point.iter().cloned().sum();
            if !sum.is_one() {
                return Err(MixingError::AtomSum {
                    atom: fmt_point(&point),
                    sum,
                });
            }
            *map.entry(point).or_insert_with(Rat::zero) += w;
        }
        map.retain(|_, w| !w.is_zero());
        if !density.is_empty() && dim != 2 {
            return Err(MixingError::DensityDimension { dim });
        }
        let mut pieces = density;
        pieces.sort_by(|a, b| a.from.cmp(&b.from));
        for piece in &pieces {
            if piece.from.is_negative() || piece.to > Rat::one() || piece.from >= piece.to {
                return Err(MixingError::DensityInterval {
                    from: piece.from.clone(),
                    to: piece.to.clone(),
                });
            }
        }
        for pair in pieces.windows(2) {
            if pair[1].from < pair[0].to {
                return Err(MixingError::DensityOverlap {
                    at: pair[1].from.clone(),
                });
            }
        }
        Ok(Self {
            dim,
            atoms: map,
            density: pieces,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &BTreeMap<Vec<Rat>, Rat> {
        &self.atoms
    }

    pub fn density(&self) -> &[DensityPiece] {
        &self.density
    }

    pub fn is_atomic(&self) -> bool {
        self.density.is_empty()
    }

    /// Exact total mass: atom weights plus density integrals.
    pub fn total_mass(&self) -> Rat {
        let atoms: Rat = self.atoms.values().cloned().sum();
        let density: Rat = self
            .density
            .iter()
            .map(|p| p.poly.integrate(&p.from, &p.to))
            .sum();
        atoms + density
    }
}

/// Total-variation norm: exact for atomic measures and for densities whose
/// sign pattern resolves rationally, otherwise exact enclosing bounds.
#[derive(Debug, Clone, PartialEq)]
pub enum TvNorm {
    Exact(Rat),
    Bounds { lower: Rat, upper: Rat },
}

impl TvNorm {
    pub fn upper(&self) -> &Rat {
        match self {
            TvNorm::Exact(v) => v,
            TvNorm::Bounds { upper, .. } => upper,
        }
    }

    pub fn as_exact(&self) -> Option<&Rat> {
        match self {
            TvNorm::Exact(v) => Some(v),
            TvNorm::Bounds { .. } => None,
        }
    }
}

/// `Σ|atom weights| + ∫|density|`.
pub fn tv_norm(xi: &SignedMixingMeasure) -> TvNorm {
    let atoms: Rat = xi.atoms().values().map(Signed::abs).sum();
    let mut exact = atoms;
    let mut slack = Rat::zero(); // accumulated upper-lower gap of unresolved pieces
    let mut lower_extra = Rat::zero();
    for piece in xi.density() {
        match piece.poly.integrate_abs(&piece.from, &piece.to) {
            AbsIntegral::Exact(v) => exact += v,
            AbsIntegral::Bounds { lower, upper } => {
                slack += upper - lower.clone();
                lower_extra += lower;
            }
        }
    }
    if slack.is_zero() {
        TvNorm::Exact(exact + lower_extra)
    } else {
        let lower = exact.clone() + lower_extra;
        TvNorm::Bounds {
            upper: lower.clone() + slack,
            lower,
        }
    }
}

/// Per-type mixing measure `ψ`: atoms `λ/n` with weights `n^n·M(ε,λ)`,
/// zero-weight atoms dropped. Depends on the tuple only through its type.
pub fn psi_of_type(pair: &DysonPair, eps: &TypeVector) -> Result<SignedMixingMeasure, MixingError> {
    let row = pair.m_row(eps)?;
    let n = pair.n();
    let n_rat = Rat::from(BigInt::from(n));
    let n_pow_n = dyson::pow_rat(&n_rat, n);
    let atoms = row.into_iter().map(|(lambda, m)| {
        let point: Vec<Rat> = lambda
            .counts()
            .iter()
            .map(|&c| Rat::from(BigInt::from(c)) / n_rat.clone())
            .collect();
        (point, n_pow_n.clone() * m)
    });
    let psi = SignedMixingMeasure::new_atomic(pair.dim(), atoms)?;
    debug_assert!(psi.total_mass().is_one());
    Ok(psi)
}

/// Canonical mixing measure `ξ = Σ_ν weight(ν)·ψ_ν`, merged by exact atom
/// equality. Always purely atomic, supported on `(1/n)·𝒩ₙ(d)`, total mass 1.
pub fn canonical_xi(law: &ExchangeableLaw) -> Result<SignedMixingMeasure, MixingError> {
    let pair = dyson::build_pair(law.n(), law.dim(), DEFAULT_SIZE_CAP)?;
    canonical_xi_with_pair(law, &pair)
}

/// As [`canonical_xi`], reusing a prebuilt Dyson pair.
pub fn canonical_xi_with_pair(
    law: &ExchangeableLaw,
    pair: &DysonPair,
) -> Result<SignedMixingMeasure, MixingError> {
    if pair.n() != law.n() || pair.dim() != law.dim() {
        return Err(MixingError::PairMismatch {
            pair_n: pair.n(),
            pair_d: pair.dim(),
            n: law.n(),
            d: law.dim(),
        });
    }
    let mut atoms: BTreeMap<Vec<Rat>, Rat> = BTreeMap::new();
    for (nu, w) in law.weights() {
        let psi = psi_of_type(pair, nu)?;
        for (point, pw) in psi.atoms() {
            *atoms.entry(point.clone()).or_insert_with(Rat::zero) += w.clone() * pw.clone();
        }
    }
    let xi = SignedMixingMeasure::new_atomic(law.dim(), atoms)?;
    debug_assert!(xi.total_mass().is_one());
    Ok(xi)
}

/// Compare `ψ` computed with the full alphabet against `ψ` computed with the
/// restricted alphabet `T = support(ε)`, embedded back into the full
/// simplex. They agree atom by atom; this guards the use of one Dyson pair
/// per law instead of one per support set.
pub fn t_independence_check(law: &ExchangeableLaw, eps: &TypeVector) -> Result<bool, MixingError> {
    let n = law.n();
    let d = law.dim();
    eps.check_shape(n, d)?;
    let full_pair = dyson::build_pair(n, d, DEFAULT_SIZE_CAP)?;
    let full = psi_of_type(&full_pair, eps)?;

    let support = eps.support();
    let restricted_eps = TypeVector::new(support.iter().map(|&i| eps.count(i)).collect());
    let restricted_pair = dyson::build_pair(n, support.len(), DEFAULT_SIZE_CAP)?;
    let restricted = psi_of_type(&restricted_pair, &restricted_eps)?;

    let embedded = restricted.atoms().iter().map(|(point, w)| {
        let mut embedded_point = vec![Rat::zero(); d];
        for (k, &coord) in support.iter().enumerate() {
            embedded_point[coord] = point[k].clone();
        }
        (embedded_point, w.clone())
    });
    let embedded = SignedMixingMeasure::new_atomic(d, embedded)?;
    Ok(embedded.atoms() == full.atoms())
}

/// Families available to the total-variation sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepFamily {
    UniformPermutation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TvSweepRow {
    pub n: u32,
    pub tv: Rat,
}

/// Exact TV norms for the family, `n = 1..n_max`, with an explicit marker
/// when the Dyson size cap truncates the sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct TvSweep {
    pub rows: Vec<TvSweepRow>,
    pub truncated_at: Option<u32>,
}

/// TV norm of the canonical mixing measure of the uniform-permutation law,
/// for each `n` up to `n_max`. Every reported value has passed the exact
/// reconstruction check against its source law first. No growth law is
/// asserted.
pub fn tv_sweep(family: SweepFamily, n_max: u32, cap: usize) -> Result<TvSweep, MixingError> {
    let SweepFamily::UniformPermutation = family;
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let law = ExchangeableLaw::uniform_permutation(n)?;
        let pair = match dyson::build_pair(n, n as usize, cap) {
            Ok(pair) => pair,
            Err(DysonError::SizeCapExceeded { .. }) => {
                return Ok(TvSweep {
                    rows,
                    truncated_at: Some(n),
                });
            }
            Err(e) => return Err(e.into()),
        };
        let xi = canonical_xi_with_pair(&law, &pair)?;
        let reconstructed = crate::measureops::reconstruct(&xi, n, law.dim())
            .map_err(|_| MixingError::SelfCheck { n })?;
        let matches = law
            .weights()
            .iter()
            .all(|(nu, w)| reconstructed.get(nu) == Some(w))
            && reconstructed.iter().all(|(nu, w)| law.weight(nu) == *w);
        if !matches {
            return Err(MixingError::SelfCheck { n });
        }
        let tv = match tv_norm(&xi) {
            TvNorm::Exact(v) => v,
            TvNorm::Bounds { .. } => unreachable!("canonical measures are atomic"),
        };
        rows.push(TvSweepRow { n, tv });
    }
    Ok(TvSweep {
        rows,
        truncated_at: None,
    })
}

/// Atomic mixing measure over a real alphabet re-expressed on the sorted
/// coordinate cone: the atom `λ/n` becomes the ascending vector listing
/// `value(a)` with multiplicity `λ[a]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeParametrization {
    n: u32,
    points: BTreeMap<Vec<Rat>, Rat>,
}

impl ConeParametrization {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn points(&self) -> &BTreeMap<Vec<Rat>, Rat> {
        &self.points
    }

    pub fn total_mass(&self) -> Rat {
        self.points.values().cloned().sum()
    }

    pub fn tv_norm(&self) -> Rat {
        self.points.values().map(Signed::abs).sum()
    }
}

/// Map a type-rational atomic measure to the cone parametrization, given an
/// injective real value per alphabet coordinate. Weights are carried over;
/// total mass and TV norm are preserved.
pub fn cone_parametrize(
    xi: &SignedMixingMeasure,
    n: u32,
    values: &[Rat],
) -> Result<ConeParametrization, MixingError> {
    if !xi.is_atomic() {
        return Err(MixingError::NotAtomic);
    }
    if values.len() != xi.dim() {
        return Err(MixingError::ConeValueCount {
            expected: xi.dim(),
            got: values.len(),
        });
    }
    let mut seen = BTreeSet::new();
    for v in values {
        if !seen.insert(v.clone()) {
            return Err(MixingError::RepeatedConeValue { value: v.clone() });
        }
    }
    let n_rat = Rat::from(BigInt::from(n));
    let mut points: BTreeMap<Vec<Rat>, Rat> = BTreeMap::new();
    for (atom, w) in xi.atoms() {
        let mut theta: Vec<Rat> = Vec::with_capacity(n as usize);
        for (coord, entry) in atom.iter().enumerate() {
            let scaled = entry.clone() * n_rat.clone();
            if !scaled.is_integer() {
                return Err(MixingError::NotTypeRational {
                    atom: fmt_point(atom),
                    n,
                });
            }
            let count = scaled
                .to_integer()
                .to_usize()
                .expect("atom multiplicities fit in usize");
            for _ in 0..count {
                theta.push(values[coord].clone());
            }
        }
        if theta.len() != n as usize {
            return Err(MixingError::NotTypeRational {
                atom: fmt_point(atom),
                n,
            });
        }
        theta.sort();
        *points.entry(theta).or_insert_with(Rat::zero) += w.clone();
    }
    points.retain(|_, w| !w.is_zero());
    Ok(ConeParametrization { n, points })
}
