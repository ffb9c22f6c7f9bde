//! Finite discrete distributions and exact expectations over them.
//!
//! A [`DiscreteDistribution`] is a finite support of `(value, probability)`
//! pairs with strictly ascending values. Keeping supports finite is what
//! makes every stopping-rule computation in [`crate::stopping`] *exact*: the
//! guarantees become machine-checkable inequalities instead of sampled
//! estimates.

use crate::error::{Error, Result};
use crate::rng::Rng;

/// Probabilities must sum to 1 within this tolerance. Loose enough to admit
/// rational inputs expressed in binary floating point (e.g. three 1/3's).
pub const PROB_SUM_TOLERANCE: f64 = 1e-12;

/// A finite distribution over real values.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    support: Vec<(f64, f64)>,
}

impl DiscreteDistribution {
    /// Builds a distribution from `(value, probability)` pairs.
    ///
    /// Values must be finite and strictly ascending; probabilities must lie
    /// in `(0, 1]` and sum to 1 within [`PROB_SUM_TOLERANCE`].
    pub fn new(support: Vec<(f64, f64)>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        let mut sum = 0.0;
        for (i, &(v, p)) in support.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::InvalidDistribution(format!("non-finite value {v}")));
            }
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::InvalidDistribution(format!(
                    "probability {p} outside (0, 1]"
                )));
            }
            if i > 0 && support[i - 1].0 >= v {
                return Err(Error::InvalidDistribution(
                    "values must be strictly ascending".into(),
                ));
            }
            sum += p;
        }
        if (sum - 1.0).abs() > PROB_SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {sum}, not 1"
            )));
        }
        Ok(DiscreteDistribution { support })
    }

    /// The distribution that always takes `value`.
    pub fn point_mass(value: f64) -> Self {
        DiscreteDistribution {
            support: vec![(value, 1.0)],
        }
    }

    pub fn support(&self) -> &[(f64, f64)] {
        &self.support
    }

    pub fn min_value(&self) -> f64 {
        self.support[0].0
    }

    pub fn max_value(&self) -> f64 {
        self.support[self.support.len() - 1].0
    }

    /// `E[v]`.
    pub fn mean(&self) -> f64 {
        self.support.iter().map(|&(v, p)| v * p).sum()
    }

    /// `P(v < t)`.
    pub fn prob_lt(&self, t: f64) -> f64 {
        self.support
            .iter()
            .take_while(|&&(v, _)| v < t)
            .map(|&(_, p)| p)
            .sum()
    }

    /// `P(v <= t)`.
    pub fn prob_le(&self, t: f64) -> f64 {
        self.support
            .iter()
            .take_while(|&&(v, _)| v <= t)
            .map(|&(_, p)| p)
            .sum()
    }

    /// `E[v · 1{v ≥ t}]` (or `E[v · 1{v > t}]` when `strict`).
    pub fn expected_passing(&self, t: f64, strict: bool) -> f64 {
        self.support
            .iter()
            .filter(|&&(v, _)| if strict { v > t } else { v >= t })
            .map(|&(v, p)| v * p)
            .sum()
    }

    /// Draws one value. Empirical frequencies converge to the probabilities.
    pub fn sample(&self, rng: &mut Rng) -> f64 {
        let u = rng.next_f64();
        let mut acc = 0.0;
        for &(v, p) in &self.support {
            acc += p;
            if u < acc {
                return v;
            }
        }
        // u landed in the rounding slack past the accumulated sum.
        self.max_value()
    }
}

/// Exact `E[max_i v_i]` for independent draws `v_i ~ dists[i]`.
///
/// Uses `P(max ≤ v) = Π_i F_i(v)` over the sorted union of the supports.
pub fn expected_max(dists: &[DiscreteDistribution]) -> Result<f64> {
    if dists.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut values: Vec<f64> = dists
        .iter()
        .flat_map(|d| d.support().iter().map(|&(v, _)| v))
        .collect();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    values.dedup();

    let mut expectation = 0.0;
    let mut prev_cdf = 0.0;
    for &v in &values {
        let cdf: f64 = dists.iter().map(|d| d.prob_le(v)).product();
        expectation += v * (cdf - prev_cdf);
        prev_cdf = cdf;
    }
    Ok(expectation)
}


#[cfg(test)]
mod proptests {
    use super::*;
    use crate::rng::Rng as SeededRng;
    use proptest::prelude::*;

    /// Strategy: a valid discrete distribution with 1..=5 support points.
    fn arb_distribution() -> impl Strategy<Value = DiscreteDistribution> {
        (
            proptest::collection::vec(0.0f64..100.0, 1..=5),
            proptest::collection::vec(0.01f64..1.0, 5),
        )
            .prop_filter_map("degenerate support", |(mut values, weights)| {
                values.sort_by(|a, b| a.partial_cmp(b).unwrap());
                values.dedup();
                let total: f64 = weights[..values.len()].iter().sum();
                let support: Vec<(f64, f64)> = values
                    .iter()
                    .zip(&weights)
                    .map(|(&v, &w)| (v, w / total))
                    .collect();
                DiscreteDistribution::new(support).ok()
            })
    }

    proptest! {
        #[test]
        fn samples_stay_on_support(d in arb_distribution(), seed in any::<u64>()) {
            let mut rng = SeededRng::new(seed);
            for _ in 0..50 {
                let v = d.sample(&mut rng);
                prop_assert!(d.support().iter().any(|&(s, _)| s == v));
            }
        }

        #[test]
        fn cdf_is_monotone_and_bounded(d in arb_distribution(), t in -1.0f64..101.0) {
            let lt = d.prob_lt(t);
            let le = d.prob_le(t);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&lt));
            prop_assert!(le >= lt);
        }

        #[test]
        fn expected_max_between_means_and_sum_of_maxima(
            dists in proptest::collection::vec(arb_distribution(), 1..=3)
        ) {
            let joint = expected_max(&dists).unwrap();
            let best_mean = dists.iter().map(|d| d.mean()).fold(f64::MIN, f64::max);
            let max_value = dists.iter().map(|d| d.max_value()).fold(f64::MIN, f64::max);
            prop_assert!(joint >= best_mean - 1e-9);
            prop_assert!(joint <= max_value + 1e-9);
        }
    }
}
