//! Binary-relaxation machinery: hard thresholding, the binarity distance,
//! the coupling penalty, and the closed-form auxiliary update.
//!
//! The penalty couples a relaxed vector `x ∈ [0,1]^n` to an auxiliary vector
//! `a ∈ [0,1]^n`:
//!
//! ```text
//! phi_lambda(x, a) = lambda * (n - <x, a> - <1 - x, 1 - a>)
//! ```
//!
//! By Cauchy-Schwarz the gap is nonnegative and vanishes exactly when
//! `x = a` with both binary, so minimizing `phi` drives the relaxed block
//! onto the binary set without an explicit integrality constraint.

use crate::error::{Error, Result};

/// Slack allowed when accepting entries marginally outside `[0,1]`;
/// anything within it is clamped, anything beyond is rejected.
const UNIT_RANGE_SLACK: f64 = 1e-12;

/// A vector with every entry in `[0,1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RelaxedVector {
    values: Vec<f64>,
}

impl RelaxedVector {
    /// Builds a relaxed vector, clamping entries within `1e-12` of the unit
    /// interval and rejecting anything farther out (subsolver round-off is
    /// tolerated; genuine range violations are caller bugs).
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let mut values = values;
        for (index, v) in values.iter_mut().enumerate() {
            if !v.is_finite() || *v < -UNIT_RANGE_SLACK || *v > 1.0 + UNIT_RANGE_SLACK {
                return Err(Error::OutOfUnitRange { index, value: *v });
            }
            *v = v.clamp(0.0, 1.0);
        }
        Ok(Self { values })
    }

    pub fn from_slice(values: &[f64]) -> Result<Self> {
        Self::new(values.to_vec())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// A vector with every entry exactly 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryVector {
    bits: Vec<bool>,
}

impl BinaryVector {
    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.bits.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect()
    }

    /// Reinterprets the binary vector as a point of `[0,1]^n`.
    pub fn to_relaxed(&self) -> RelaxedVector {
        RelaxedVector { values: self.as_f64() }
    }
}

/// The evaluated penalty together with the coefficient that scaled it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyValue {
    pub lambda: f64,
    pub value: f64,
}

/// Componentwise rounding `floor(x_i + 1/2)`; an entry maps to 1 exactly
/// when `x_i >= 1/2`, so the tie at one half rounds up.
pub fn hard_threshold(x: &RelaxedVector) -> BinaryVector {
    BinaryVector {
        bits: x.values.iter().map(|&v| v >= 0.5).collect(),
    }
}

/// L1 distance from `x` to its hard threshold, `n - sum_i max(x_i, 1-x_i)`.
pub fn distance(x: &RelaxedVector) -> f64 {
    distance_raw(&x.values)
}

/// Penalty `lambda * (n - <x,a> - <1-x,1-a>)`. Nonnegative for all inputs,
/// zero exactly when `x = a` with both binary.
pub fn penalty(x: &RelaxedVector, a: &RelaxedVector, lambda: f64) -> Result<PenaltyValue> {
    if x.len() != a.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: a.len(),
        });
    }
    debug_assert!(lambda > 0.0, "penalty coefficient must be positive");
    let value = lambda * penalty_gap_raw(&x.values, &a.values);
    Ok(PenaltyValue { lambda, value })
}

/// Whether the unscaled penalty gap is within `tol`. With `tol = 0` a true
/// result implies `x = a` with both binary.
pub fn in_zero_penalty_set(x: &RelaxedVector, a: &RelaxedVector, tol: f64) -> Result<bool> {
    if x.len() != a.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: a.len(),
        });
    }
    Ok(penalty_gap_raw(&x.values, &a.values) <= tol)
}

/// Closed-form auxiliary update: the maximizer of `<a, 2x - 1>` over
/// `[0,1]^n`, which is the hard threshold of `x` (ties at one half break
/// upward, consistent with [`hard_threshold`]).
pub fn optimal_aux(x: &RelaxedVector) -> RelaxedVector {
    hard_threshold(x).to_relaxed()
}

// Raw-slice forms used on the solver hot path. The gap is clamped at zero:
// it is nonnegative in exact arithmetic and round-off must not leak tiny
// negative penalties into descent checks.

pub(crate) fn penalty_gap_raw(x: &[f64], a: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mut acc = 0.0;
    for (&xi, &ai) in x.iter().zip(a) {
        acc += xi * ai + (1.0 - xi) * (1.0 - ai);
    }
    (n - acc).max(0.0)
}

pub(crate) fn distance_raw(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let kept: f64 = x.iter().map(|&v| v.max(1.0 - v)).sum();
    (n - kept).max(0.0)
}

pub(crate) fn threshold_raw(x: &[f64]) -> Vec<f64> {
    x.iter().map(|&v| if v >= 0.5 { 1.0 } else { 0.0 }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn rv(values: &[f64]) -> RelaxedVector {
        RelaxedVector::from_slice(values).unwrap()
    }

    #[test]
    fn construction_clamps_and_rejects() {
        let v = rv(&[1.0 + 5e-13, -5e-13, 0.5]);
        assert_eq!(v.values(), &[1.0, 0.0, 0.5]);
        assert!(RelaxedVector::from_slice(&[1.0 + 1e-9]).is_err());
        assert!(RelaxedVector::from_slice(&[f64::NAN]).is_err());
    }

    #[test]
    fn hard_threshold_examples() {
        assert_eq!(hard_threshold(&rv(&[0.49, 0.5, 0.51])).as_f64(), [0.0, 1.0, 1.0]);
        assert_eq!(hard_threshold(&rv(&[0.0, 1.0])).as_f64(), [0.0, 1.0]);
        assert_eq!(hard_threshold(&rv(&[0.999, 0.001])).as_f64(), [1.0, 0.0]);
    }

    #[test]
    fn distance_examples() {
        assert!((distance(&rv(&[0.3, 0.9])) - 0.4).abs() < 1e-15);
        assert_eq!(distance(&rv(&[0.0, 1.0, 1.0])), 0.0);
        assert!((distance(&rv(&[0.5, 0.5, 0.5])) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn distance_forms_agree() {
        // max form versus the defining L1 form.
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..2000 {
            let n = rng.gen_range(1..20);
            let x: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
            let x = rv(&x);
            let rounded = hard_threshold(&x).as_f64();
            let l1: f64 = x
                .values()
                .iter()
                .zip(&rounded)
                .map(|(a, b)| (a - b).abs())
                .sum();
            assert!((distance(&x) - l1).abs() <= 1e-12);
        }
    }

    #[test]
    fn distance_dominates_l2() {
        let mut rng = StdRng::seed_from_u64(8);
        for _ in 0..2000 {
            let n = rng.gen_range(1..20);
            let x: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
            let x = rv(&x);
            let rounded = hard_threshold(&x).as_f64();
            let l2: f64 = x
                .values()
                .iter()
                .zip(&rounded)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            assert!(distance(&x) >= l2 - 1e-12);
        }
    }

    #[test]
    fn penalty_examples() {
        let p = penalty(&rv(&[0.5, 0.5]), &rv(&[1.0, 0.0]), 3.0).unwrap();
        assert!((p.value - 3.0).abs() < 1e-15);

        let x = rv(&[1.0, 0.0, 1.0]);
        for lambda in [0.5, 1.0, 42.0] {
            assert_eq!(penalty(&x, &x, lambda).unwrap().value, 0.0);
        }

        let p = penalty(&rv(&[0.2]), &rv(&[0.2]), 1.0).unwrap();
        assert!((p.value - 0.32).abs() < 1e-15);

        assert!(penalty(&rv(&[0.2]), &rv(&[0.2, 0.3]), 1.0).is_err());
    }

    #[test]
    fn penalty_monotone_in_lambda() {
        let x = rv(&[0.3, 0.6]);
        let a = rv(&[1.0, 0.0]);
        let p1 = penalty(&x, &a, 1.0).unwrap().value;
        let p2 = penalty(&x, &a, 2.5).unwrap().value;
        assert!(p2 > p1);
    }

    #[test]
    fn zero_penalty_set_examples() {
        let b = rv(&[0.0, 1.0]);
        assert!(in_zero_penalty_set(&b, &b, 0.0).unwrap());
        assert!(!in_zero_penalty_set(&rv(&[0.5]), &rv(&[0.5]), 0.0).unwrap());
        assert!(!in_zero_penalty_set(&rv(&[1.0, 0.0]), &rv(&[0.0, 0.0]), 0.0).unwrap());
    }

    #[test]
    fn optimal_aux_examples() {
        assert_eq!(optimal_aux(&rv(&[0.2, 0.8])).values(), &[0.0, 1.0]);
        assert_eq!(optimal_aux(&rv(&[0.5])).values(), &[1.0]);
    }

    #[test]
    fn optimal_aux_matches_corner_enumeration() {
        // Linear objective <a, 2x-1> attains its maximum at a corner of the
        // cube; enumerate all 2^n corners as the oracle.
        let mut rng = StdRng::seed_from_u64(9);
        for _ in 0..200 {
            let x: Vec<f64> = (0..3).map(|_| rng.gen::<f64>()).collect();
            if x.iter().any(|&v| (v - 0.5).abs() < 1e-9) {
                continue; // ties are covered by the dedicated example above
            }
            let xv = rv(&x);
            let got = optimal_aux(&xv);
            let mut best = f64::NEG_INFINITY;
            let mut best_corner = vec![0.0; 3];
            for mask in 0..8u32 {
                let corner: Vec<f64> =
                    (0..3).map(|b| ((mask >> b) & 1) as f64).collect();
                let score: f64 = corner
                    .iter()
                    .zip(&x)
                    .map(|(a, xi)| a * (2.0 * xi - 1.0))
                    .sum();
                if score > best {
                    best = score;
                    best_corner = corner;
                }
            }
            assert_eq!(got.values(), best_corner.as_slice());
        }
    }

    proptest! {
        #[test]
        fn penalty_is_nonnegative(
            pairs in prop::collection::vec((0.0f64..=1.0, 0.0f64..=1.0), 1..50),
            lambda in 1e-3f64..1e3,
        ) {
            let (xs, aus): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
            let p = penalty(&rv(&xs), &rv(&aus), lambda).unwrap();
            prop_assert!(p.value >= 0.0);
        }

        #[test]
        fn tiny_penalty_implies_coupled_binary(
            bits in prop::collection::vec(prop::bool::ANY, 1..50),
            noise in prop::collection::vec(-1e-14f64..1e-14, 50),
        ) {
            // Perturb an exact coupled-binary pair; the gap must stay tiny and
            // the characterization must recover equality and binarity.
            let xs: Vec<f64> = bits
                .iter()
                .zip(&noise)
                .map(|(&b, &e)| ((b as u8) as f64 + e).clamp(0.0, 1.0))
                .collect();
            let x = rv(&xs);
            let a = rv(&xs);
            let p = penalty(&x, &a, 1.0).unwrap();
            prop_assert!(p.value <= 1e-12);
            let max_diff = x
                .values()
                .iter()
                .zip(a.values())
                .fold(0.0f64, |m, (u, v)| m.max((u - v).abs()));
            let max_frac = x
                .values()
                .iter()
                .fold(0.0f64, |m, &v| m.max(v.min(1.0 - v)));
            prop_assert!(max_diff <= 1e-6);
            prop_assert!(max_frac <= 1e-6);
        }
    }

    #[test]
    fn small_gap_forces_coupled_binary_generally() {
        // Characterization direction of the zero-penalty set, checked on
        // random near-binary pairs rather than exact ones.
        let mut rng = StdRng::seed_from_u64(10);
        for _ in 0..10_000 {
            let n = rng.gen_range(1..=50);
            let x: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
            let a: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
            let gap = penalty_gap_raw(&x, &a);
            assert!(gap >= 0.0);
            if gap <= 1e-12 {
                for (xi, ai) in x.iter().zip(&a) {
                    assert!((xi - ai).abs() <= 1e-6);
                    assert!(xi.min(1.0 - xi) <= 1e-6);
                }
            }
        }
    }
}
