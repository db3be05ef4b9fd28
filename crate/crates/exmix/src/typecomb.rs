//! Type vectors: finite point measures of total mass `n` on a finite alphabet.
//!
//! The type of a tuple `x ∈ S^n` is the vector counting how many coordinates
//! carry each alphabet symbol. Everything downstream (the Dyson matrix, the
//! mixing measures, extendibility systems) is indexed by these vectors, so the
//! enumeration order fixed here — lexicographic on the count vector — is the
//! canonical index order of the whole crate.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TypecombError {
    #[error("label {label:?} at position {position} is not in the alphabet")]
    UnknownLabel { position: usize, label: String },
    #[error("alphabet labels must be distinct, {label:?} repeats")]
    DuplicateLabel { label: String },
    #[error("alphabet must contain at least one symbol")]
    EmptyAlphabet,
    #[error("type vector has mass {got}, expected {expected}")]
    MassMismatch { expected: u32, got: u32 },
    #[error("type vector has {got} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Ordered finite alphabet of distinct opaque labels.
///
/// The construction order is fixed and used for all coordinate indexing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self, TypecombError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(TypecombError::EmptyAlphabet);
        }
        let mut seen = std::collections::BTreeSet::new();
        for s in &symbols {
            if !seen.insert(s.clone()) {
                return Err(TypecombError::DuplicateLabel { label: s.clone() });
            }
        }
        Ok(Self { symbols })
    }

    /// Alphabet `{"1", ..., "d"}`.
    pub fn numeric(d: usize) -> Self {
        Self::new((1..=d).map(|i| i.to_string())).expect("numeric labels are distinct")
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, i: usize) -> &str {
        &self.symbols[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == label)
    }
}

/// Count vector of total mass `n` over `d` alphabet coordinates.
///
/// Ordered lexicographically on the counts, which is the enumeration and
/// matrix index order everywhere.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeVector {
    counts: Vec<u32>,
}

impl TypeVector {
    pub fn new(counts: Vec<u32>) -> Self {
        Self { counts }
    }

    /// Total mass `n = Σ counts`.
    pub fn mass(&self) -> u32 {
        self.counts.iter().sum()
    }

    /// Number of coordinates `d`.
    pub fn dim(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn count(&self, i: usize) -> u32 {
        self.counts[i]
    }

    /// Coordinates with nonzero count, in alphabet order.
    pub fn support(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.counts[i] > 0).collect()
    }

    /// `self + δ_i`.
    pub fn bump(&self, i: usize) -> TypeVector {
        let mut counts = self.counts.clone();
        counts[i] += 1;
        TypeVector::new(counts)
    }

    /// Canonical string form, counts joined by commas: `"2,0,1"`.
    pub fn key(&self) -> String {
        self.counts
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn check_shape(&self, n: u32, d: usize) -> Result<(), TypecombError> {
        if self.dim() != d {
            return Err(TypecombError::DimensionMismatch {
                expected: d,
                got: self.dim(),
            });
        }
        if self.mass() != n {
            return Err(TypecombError::MassMismatch {
                expected: n,
                got: self.mass(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for TypeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.key())
    }
}

/// All type vectors of mass `n` over `d` coordinates, lexicographically
/// ascending. Length is `C(n+d-1, d-1)`.
pub fn enumerate_types(n: u32, d: usize) -> Vec<TypeVector> {
    assert!(d >= 1, "alphabet must be nonempty");
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(d);
    fill(n, d, &mut prefix, &mut out);
    out
}

fn fill(remaining: u32, coords_left: usize, prefix: &mut Vec<u32>, out: &mut Vec<TypeVector>) {
    if coords_left == 1 {
        prefix.push(remaining);
        out.push(TypeVector::new(prefix.clone()));
        prefix.pop();
        return;
    }
    for c in 0..=remaining {
        prefix.push(c);
        fill(remaining - c, coords_left - 1, prefix, out);
        prefix.pop();
    }
}

/// Number of type vectors of mass `n` over `d` coordinates: `C(n+d-1, d-1)`.
pub fn type_count(n: u32, d: usize) -> BigInt {
    binomial(BigInt::from(n as u64 + d as u64 - 1), BigInt::from(d as u64 - 1))
}

/// `C(n, ν) = n! / ∏ νᵢ!`, the cardinality of the cell of ordered tuples
/// with type `ν`.
pub fn multinomial(nu: &TypeVector) -> BigInt {
    let mut acc = BigInt::from(1u32);
    let mut partial: u64 = 0;
    for &c in nu.counts() {
        partial += c as u64;
        acc *= binomial(BigInt::from(partial), BigInt::from(c as u64));
    }
    acc
}

/// Cardinality of `S^n(ν)`; identical to [`multinomial`].
pub fn cell_cardinality(nu: &TypeVector) -> BigInt {
    multinomial(nu)
}

/// Type of an ordered tuple: counts per alphabet symbol.
pub fn type_of<S: AsRef<str>>(x: &[S], alphabet: &Alphabet) -> Result<TypeVector, TypecombError> {
    let mut counts = vec![0u32; alphabet.len()];
    for (position, label) in x.iter().enumerate() {
        match alphabet.index_of(label.as_ref()) {
            Some(i) => counts[i] += 1,
            None => {
                return Err(TypecombError::UnknownLabel {
                    position,
                    label: label.as_ref().to_owned(),
                })
            }
        }
    }
    Ok(TypeVector::new(counts))
}

/// Bijection between `𝒩ₙ(d)` and dense indices `0..C(n+d-1,d-1)-1` in
/// lexicographic order.
#[derive(Debug, Clone)]
pub struct TypeIndex {
    n: u32,
    d: usize,
    types: Vec<TypeVector>,
    positions: BTreeMap<TypeVector, usize>,
}

impl TypeIndex {
    pub fn new(n: u32, d: usize) -> Self {
        let types = enumerate_types(n, d);
        let positions = types
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        Self {
            n,
            d,
            types,
            positions,
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn index_of(&self, nu: &TypeVector) -> Option<usize> {
        self.positions.get(nu).copied()
    }

    pub fn type_at(&self, i: usize) -> &TypeVector {
        &self.types[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &TypeVector> {
        self.types.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tv(counts: &[u32]) -> TypeVector {
        TypeVector::new(counts.to_vec())
    }

    #[test]
    fn enumerate_n2_d2_lexicographic() {
        let types = enumerate_types(2, 2);
        assert_eq!(types, vec![tv(&[0, 2]), tv(&[1, 1]), tv(&[2, 0])]);
    }

    #[test]
    fn enumerate_n3_d3_matches_brute_force() {
        // independent oracle: enumerate nonnegative solutions of a+b+c=3
        let mut expected = Vec::new();
        for a in 0..=3u32 {
            for b in 0..=3u32 {
                for c in 0..=3u32 {
                    if a + b + c == 3 {
                        expected.push(tv(&[a, b, c]));
                    }
                }
            }
        }
        expected.sort();
        let got = enumerate_types(3, 3);
        assert_eq!(got.len(), 10);
        assert_eq!(got, expected);
    }

    #[test]
    fn enumerate_n0_is_zero_vector() {
        assert_eq!(enumerate_types(0, 4), vec![tv(&[0, 0, 0, 0])]);
    }

    #[test]
    fn enumeration_count_and_cell_union() {
        // |𝒩ₙ(d)| = C(n+d-1, d-1) and Σ_ν C(n,ν) = d^n, exactly, n,d ≤ 6
        for n in 0..=6u32 {
            for d in 1..=6usize {
                let types = enumerate_types(n, d);
                assert_eq!(BigInt::from(types.len()), type_count(n, d));
                let total: BigInt = types.iter().map(multinomial).sum();
                assert_eq!(total, BigInt::from(d).pow(n));
            }
        }
    }

    #[test]
    fn multinomial_examples() {
        assert_eq!(multinomial(&tv(&[1, 1])), BigInt::from(2));
        assert_eq!(multinomial(&tv(&[2, 0])), BigInt::from(1));
        assert_eq!(multinomial(&tv(&[3, 0])), BigInt::from(1));
        assert_eq!(multinomial(&tv(&[2, 1, 1])), BigInt::from(12));
    }

    /// Count tuples of a given type directly.
    fn count_cell_brute(nu: &TypeVector) -> u64 {
        let d = nu.dim();
        let n = nu.mass() as usize;
        let mut count = 0u64;
        let mut tuple = vec![0usize; n];
        loop {
            let mut counts = vec![0u32; d];
            for &t in &tuple {
                counts[t] += 1;
            }
            if TypeVector::new(counts) == *nu {
                count += 1;
            }
            // odometer over d^n tuples
            let mut pos = 0;
            loop {
                if pos == n {
                    return count;
                }
                tuple[pos] += 1;
                if tuple[pos] < d {
                    break;
                }
                tuple[pos] = 0;
                pos += 1;
            }
        }
    }

    #[test]
    fn multinomial_counts_cells() {
        assert_eq!(count_cell_brute(&tv(&[2, 1, 1])), 12);
        assert_eq!(count_cell_brute(&tv(&[2, 2])), 6);
        assert_eq!(cell_cardinality(&tv(&[2, 2])), BigInt::from(6));
    }

    #[test]
    fn type_of_examples() {
        let ab = Alphabet::new(["1", "2"]).unwrap();
        assert_eq!(type_of(&["1", "2", "1"], &ab).unwrap(), tv(&[2, 1]));
        let ab2 = Alphabet::new(["a", "b"]).unwrap();
        assert_eq!(type_of(&["a", "a"], &ab2).unwrap(), tv(&[2, 0]));
    }

    #[test]
    fn type_of_unknown_label_names_position() {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let err = type_of(&["a", "c"], &ab).unwrap_err();
        assert_eq!(
            err,
            TypecombError::UnknownLabel {
                position: 1,
                label: "c".into()
            }
        );
    }

    fn permutations(k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(k - 1) {
            for slot in 0..=p.len() {
                let mut q = p.clone();
                q.insert(slot, k - 1);
                out.push(q);
            }
        }
        out
    }

    fn check_permutation_invariance(n: usize, d: usize) {
        let ab = Alphabet::numeric(d);
        let perms = permutations(n);
        let mut tuple = vec![0usize; n];
        loop {
            let labels: Vec<String> = tuple.iter().map(|&t| ab.symbol(t).to_owned()).collect();
            let base = type_of(&labels, &ab).unwrap();
            for p in &perms {
                let permuted: Vec<String> = p.iter().map(|&i| labels[i].clone()).collect();
                assert_eq!(type_of(&permuted, &ab).unwrap(), base);
            }
            let mut pos = 0;
            loop {
                if pos == n {
                    return;
                }
                tuple[pos] += 1;
                if tuple[pos] < d {
                    break;
                }
                tuple[pos] = 0;
                pos += 1;
            }
        }
    }

    #[test]
    fn type_of_is_permutation_invariant() {
        // exhaustive for d ≤ 3, n ≤ 5
        for d in 1..=3usize {
            for n in 1..=5usize {
                check_permutation_invariance(n, d);
            }
        }
    }

    #[test]
    fn type_index_round_trip() {
        for n in 0..=5u32 {
            for d in 1..=4usize {
                let index = TypeIndex::new(n, d);
                for i in 0..index.len() {
                    assert_eq!(index.index_of(index.type_at(i)), Some(i));
                }
            }
        }
    }

    #[test]
    fn alphabet_rejects_duplicates() {
        assert!(matches!(
            Alphabet::new(["a", "a"]),
            Err(TypecombError::DuplicateLabel { .. })
        ));
        assert!(matches!(
            Alphabet::new(Vec::<String>::new()),
            Err(TypecombError::EmptyAlphabet)
        ));
    }
}
