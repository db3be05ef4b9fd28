//! Exact feasibility of `{q : A·q = b, q ≥ 0}` by Fourier–Motzkin elimination.
//!
//! Equalities are expanded into inequality pairs, variables are eliminated
//! from the last to the first, and every derived row carries its multiplier
//! vector over the expanded rows. A feasible answer returns the
//! lexicographically smallest point (computed by minimal back-substitution);
//! an infeasible answer returns the multipliers that recombine to a
//! contradiction `0 ≤ negative`, so the certificate can be re-verified
//! against the original system.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::{Rat, RatMatrix};

/// Fourier–Motzkin is doubly exponential in the worst case; systems with
/// more variables than this are rejected up front.
pub const FM_VARIABLE_CAP: usize = 12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FeasibilityError {
    #[error("system has {vars} variables, exceeding the Fourier-Motzkin cap of {cap}")]
    VariableCapExceeded { vars: usize, cap: usize },
    #[error("system shape mismatch: A is {rows}x{cols}, b has {b_len} entries, {flags} nonnegativity flags")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        b_len: usize,
        flags: usize,
    },
}

/// Equality constraints `A·q = b` with per-variable nonnegativity flags.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    a: RatMatrix,
    b: Vec<Rat>,
    nonneg: Vec<bool>,
}

/// Exact feasibility decision.
#[derive(Debug, Clone)]
pub enum Feasibility {
    Feasible { witness: Vec<Rat> },
    Infeasible { certificate: Certificate },
}

/// Nonnegative multipliers over the expanded inequality rows whose
/// combination has zero coefficients and a negative right-hand side.
///
/// Expanded row layout: for equality row `i`, rows `2i` and `2i+1` are
/// `a_i·q ≤ b_i` and `-a_i·q ≤ -b_i`; they are followed by one row
/// `-q_j ≤ 0` per flagged variable, in variable order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub multipliers: Vec<Rat>,
    /// The derived contradictory right-hand side (`0 ≤ value`, `value < 0`).
    pub value: Rat,
}

#[derive(Debug, Clone)]
struct Row {
    coeffs: Vec<Rat>,
    rhs: Rat,
    mult: Vec<Rat>,
}

impl LinearSystem {
    pub fn new(a: RatMatrix, b: Vec<Rat>, nonneg: Vec<bool>) -> Result<Self, FeasibilityError> {
        if a.rows() != b.len() || a.cols() != nonneg.len() {
            return Err(FeasibilityError::ShapeMismatch {
                rows: a.rows(),
                cols: a.cols(),
                b_len: b.len(),
                flags: nonneg.len(),
            });
        }
        Ok(Self { a, b, nonneg })
    }

    /// System with every variable flagged nonnegative.
    pub fn with_all_nonneg(a: RatMatrix, b: Vec<Rat>) -> Result<Self, FeasibilityError> {
        let cols = a.cols();
        Self::new(a, b, vec![true; cols])
    }

    pub fn num_vars(&self) -> usize {
        self.a.cols()
    }

    /// Exact satisfaction check of a candidate point.
    pub fn check_witness(&self, w: &[Rat]) -> bool {
        if w.len() != self.num_vars() {
            return false;
        }
        for i in 0..self.a.rows() {
            let lhs: Rat = (0..w.len())
                .map(|j| self.a.get(i, j).clone() * w[j].clone())
                .sum();
            if lhs != self.b[i] {
                return false;
            }
        }
        self.nonneg
            .iter()
            .zip(w)
            .all(|(&flag, v)| !flag || !v.is_negative())
    }

    fn expanded_rows(&self) -> Vec<(Vec<Rat>, Rat)> {
        let m = self.num_vars();
        let mut rows = Vec::new();
        for i in 0..self.a.rows() {
            let coeffs: Vec<Rat> = (0..m).map(|j| self.a.get(i, j).clone()).collect();
            let neg: Vec<Rat> = coeffs.iter().map(|c| -c.clone()).collect();
            rows.push((coeffs, self.b[i].clone()));
            rows.push((neg, -self.b[i].clone()));
        }
        for (j, &flag) in self.nonneg.iter().enumerate() {
            if flag {
                let mut coeffs = vec![Rat::zero(); m];
                coeffs[j] = -Rat::one();
                rows.push((coeffs, Rat::zero()));
            }
        }
        rows
    }

    /// Decide feasibility exactly. Feasible systems yield the
    /// lexicographically smallest point of the polyhedron (when coordinates
    /// are bounded below, which nonnegativity guarantees); infeasible ones
    /// yield a verified recombination certificate.
    pub fn feasible(&self) -> Result<Feasibility, FeasibilityError> {
        let m = self.num_vars();
        if m > FM_VARIABLE_CAP {
            return Err(FeasibilityError::VariableCapExceeded {
                vars: m,
                cap: FM_VARIABLE_CAP,
            });
        }
        let expanded = self.expanded_rows();
        let total = expanded.len();
        let initial: Vec<Row> = expanded
            .into_iter()
            .enumerate()
            .map(|(i, (coeffs, rhs))| {
                let mut mult = vec![Rat::zero(); total];
                mult[i] = Rat::one();
                Row { coeffs, rhs, mult }
            })
            .collect();

        // stages[k] constrains only variables 0..k
        let mut stages: Vec<Vec<Row>> = vec![Vec::new(); m + 1];
        match normalize(initial) {
            Ok(rows) => stages[m] = rows,
            Err(cert) => return Ok(Feasibility::Infeasible { certificate: cert }),
        }
        for k in (0..m).rev() {
            match eliminate(&stages[k + 1], k) {
                Ok(rows) => stages[k] = rows,
                Err(cert) => {
                    debug_assert!(cert.verify(self));
                    return Ok(Feasibility::Infeasible { certificate: cert });
                }
            }
        }

        let mut witness: Vec<Rat> = Vec::with_capacity(m);
        for k in 0..m {
            let mut lower: Option<Rat> = None;
            let mut upper: Option<Rat> = None;
            for row in &stages[k + 1] {
                let c = &row.coeffs[k];
                if c.is_zero() {
                    continue;
                }
                let partial: Rat = (0..k)
                    .map(|j| row.coeffs[j].clone() * witness[j].clone())
                    .sum();
                let bound = (row.rhs.clone() - partial) / c.clone();
                if c.is_positive() {
                    upper = Some(match upper {
                        Some(u) if u <= bound => u,
                        _ => bound,
                    });
                } else {
                    lower = Some(match lower {
                        Some(l) if l >= bound => l,
                        _ => bound,
                    });
                }
            }
            let value = match (lower, upper) {
                (Some(l), Some(u)) => {
                    assert!(l <= u, "Fourier-Motzkin projection gave an empty interval");
                    l
                }
                (Some(l), None) => l,
                (None, Some(u)) => if u.is_negative() { u } else { Rat::zero() },
                (None, None) => Rat::zero(),
            };
            witness.push(value);
        }
        assert!(
            self.check_witness(&witness),
            "back-substituted witness violates the system"
        );
        Ok(Feasibility::Feasible { witness })
    }
}

impl Certificate {
    /// Recombine the expanded rows of `sys` with the stored multipliers and
    /// check that the result is exactly `0 ≤ negative`.
    pub fn verify(&self, sys: &LinearSystem) -> bool {
        let rows = sys.expanded_rows();
        if rows.len() != self.multipliers.len() {
            return false;
        }
        if self.multipliers.iter().any(Signed::is_negative) {
            return false;
        }
        let m = sys.num_vars();
        let mut coeffs = vec![Rat::zero(); m];
        let mut rhs = Rat::zero();
        for (y, (row_coeffs, row_rhs)) in self.multipliers.iter().zip(&rows) {
            if y.is_zero() {
                continue;
            }
            for j in 0..m {
                coeffs[j] += y.clone() * row_coeffs[j].clone();
            }
            rhs += y.clone() * row_rhs.clone();
        }
        coeffs.iter().all(Zero::is_zero) && rhs.is_negative() && rhs == self.value
    }
}

/// Scale rows to a canonical form, drop trivial ones, deduplicate, and
/// surface constant contradictions.
fn normalize(rows: Vec<Row>) -> Result<Vec<Row>, Certificate> {
    use std::collections::BTreeMap;
    let mut best: BTreeMap<Vec<Rat>, Row> = BTreeMap::new();
    for mut row in rows {
        let lead = row.coeffs.iter().position(|c| !c.is_zero());
        let Some(lead) = lead else {
            if row.rhs.is_negative() {
                return Err(Certificate {
                    multipliers: row.mult,
                    value: row.rhs,
                });
            }
            continue; // 0 ≤ nonnegative, trivially true
        };
        let scale = row.coeffs[lead].abs().recip();
        for c in &mut row.coeffs {
            *c *= scale.clone();
        }
        row.rhs *= scale.clone();
        for y in &mut row.mult {
            *y *= scale.clone();
        }
        match best.get(&row.coeffs) {
            Some(kept) if kept.rhs <= row.rhs => {}
            _ => {
                best.insert(row.coeffs.clone(), row);
            }
        }
    }
    Ok(best.into_values().collect())
}

/// Eliminate variable `var`: keep rows without it, combine every
/// positive/negative pair so the variable cancels exactly.
fn eliminate(rows: &[Row], var: usize) -> Result<Vec<Row>, Certificate> {
    let mut kept = Vec::new();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for row in rows {
        let c = &row.coeffs[var];
        if c.is_zero() {
            kept.push(row.clone());
        } else if c.is_positive() {
            pos.push(row);
        } else {
            neg.push(row);
        }
    }
    for p in &pos {
        let pw = p.coeffs[var].clone().recip();
        for n in &neg {
            let nw = (-n.coeffs[var].clone()).recip();
            let coeffs: Vec<Rat> = (0..p.coeffs.len())
                .map(|j| {
                    if j == var {
                        Rat::zero()
                    } else {
                        p.coeffs[j].clone() * pw.clone() + n.coeffs[j].clone() * nw.clone()
                    }
                })
                .collect();
            let rhs = p.rhs.clone() * pw.clone() + n.rhs.clone() * nw.clone();
            let mult: Vec<Rat> = p
                .mult
                .iter()
                .zip(&n.mult)
                .map(|(a, b)| a.clone() * pw.clone() + b.clone() * nw.clone())
                .collect();
            kept.push(Row { coeffs, rhs, mult });
        }
    }
    normalize(kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::Matrix;
    use crate::{rat, rat_int};

    #[test]
    fn single_variable_feasible() {
        let a = Matrix::from_rows(vec![vec![rat_int(1)]]);
        let sys = LinearSystem::with_all_nonneg(a, vec![rat_int(1)]).unwrap();
        match sys.feasible().unwrap() {
            Feasibility::Feasible { witness } => assert_eq!(witness, vec![rat_int(1)]),
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn single_variable_infeasible_with_certificate() {
        let a = Matrix::from_rows(vec![vec![rat_int(1)]]);
        let sys = LinearSystem::with_all_nonneg(a, vec![rat_int(-1)]).unwrap();
        match sys.feasible().unwrap() {
            Feasibility::Infeasible { certificate } => {
                assert!(certificate.value.is_negative());
                assert!(certificate.verify(&sys));
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn simplex_lexmin_witness() {
        // q1 + q2 = 1, q ≥ 0: lexicographically smallest vertex is (0, 1)
        let a = Matrix::from_rows(vec![vec![rat_int(1), rat_int(1)]]);
        let sys = LinearSystem::with_all_nonneg(a, vec![rat_int(1)]).unwrap();
        match sys.feasible().unwrap() {
            Feasibility::Feasible { witness } => {
                assert_eq!(witness, vec![rat_int(0), rat_int(1)]);
            }
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn fractional_equalities() {
        // q1/2 + q3 = 1/3, q2 = 2/5
        let a = Matrix::from_rows(vec![
            vec![rat(1, 2), rat_int(0), rat_int(1)],
            vec![rat_int(0), rat_int(1), rat_int(0)],
        ]);
        let sys = LinearSystem::with_all_nonneg(a, vec![rat(1, 3), rat(2, 5)]).unwrap();
        match sys.feasible().unwrap() {
            Feasibility::Feasible { witness } => {
                assert!(sys.check_witness(&witness));
                assert_eq!(witness[0], rat_int(0));
                assert_eq!(witness[1], rat(2, 5));
                assert_eq!(witness[2], rat(1, 3));
            }
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn conflicting_equalities_are_certified() {
        // q1 = 1 and q1 = 2
        let a = Matrix::from_rows(vec![vec![rat_int(1)], vec![rat_int(1)]]);
        let sys = LinearSystem::new(a, vec![rat_int(1), rat_int(2)], vec![false]).unwrap();
        match sys.feasible().unwrap() {
            Feasibility::Infeasible { certificate } => assert!(certificate.verify(&sys)),
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn variable_cap_is_enforced() {
        let vars = FM_VARIABLE_CAP + 1;
        let a = Matrix::from_rows(vec![vec![rat_int(1); vars]]);
        let sys = LinearSystem::with_all_nonneg(a, vec![rat_int(1)]).unwrap();
        assert_eq!(
            sys.feasible().unwrap_err(),
            FeasibilityError::VariableCapExceeded {
                vars,
                cap: FM_VARIABLE_CAP
            }
        );
    }

    #[test]
    fn zero_row_contradiction() {
        // 0·q = 1 is a constant contradiction before any elimination
        let a = Matrix::from_rows(vec![vec![rat_int(0), rat_int(0)]]);
        let sys = LinearSystem::with_all_nonneg(a, vec![rat_int(1)]).unwrap();
        match sys.feasible().unwrap() {
            Feasibility::Infeasible { certificate } => assert!(certificate.verify(&sys)),
            other => panic!("expected infeasible, got {other:?}"),
        }
    }
}
