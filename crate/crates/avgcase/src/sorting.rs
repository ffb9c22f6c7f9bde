//! Deterministic first-element-pivot QuickSort with comparison accounting.
//!
//! The partition step compares each non-pivot element with the pivot exactly
//! once (`n−1` comparisons per call), which is the cost model under which a
//! random permutation of `{1..n}` costs `Σ_{i<j} 2/(j−i+1)` comparisons in
//! expectation. Already-sorted input is the worst case at exactly
//! `n(n−1)/2`.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::record::ExperimentRecord;
use crate::rng::Rng;

/// Result of one instrumented sort.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortTrace {
    /// The input, ascending.
    pub sorted: Vec<i64>,
    /// Pivot-vs-element comparisons performed.
    pub comparisons: u64,
}

/// Sorts distinct integers with first-element-pivot QuickSort, counting
/// comparisons. Duplicate elements are outside the random-permutation model
/// and rejected.
pub fn quicksort_first_pivot(arr: &[i64]) -> Result<SortTrace> {
    let mut seen = HashSet::with_capacity(arr.len());
    if !arr.iter().all(|&x| seen.insert(x)) {
        return Err(Error::DuplicateElements);
    }
    let mut buf = arr.to_vec();
    let mut comparisons = 0u64;
    let len = buf.len();
    if len > 1 {
        quicksort(&mut buf, 0, len - 1, &mut comparisons);
    }
    Ok(SortTrace {
        sorted: buf,
        comparisons,
    })
}

/// In-place sort of `buf[lo..=hi]`; the partition is a single left-to-right
/// scan around `buf[lo]`.
fn quicksort(buf: &mut [i64], lo: usize, hi: usize, comparisons: &mut u64) {
    let pivot = buf[lo];
    let mut split = lo;
    for j in (lo + 1)..=hi {
        *comparisons += 1;
        if buf[j] < pivot {
            split += 1;
            buf.swap(split, j);
        }
    }
    buf.swap(lo, split);
    if split > lo + 1 {
        quicksort(buf, lo, split - 1, comparisons);
    }
    if split + 1 < hi {
        quicksort(buf, split + 1, hi, comparisons);
    }
}

/// Exact expected comparison count on a uniformly random permutation of
/// `{1..n}`: `Σ_{d=1}^{n−1} 2(n−d)/(d+1)`.
pub fn expected_comparisons_exact(n: usize) -> f64 {
    let n = n as f64;
    let mut total = 0.0;
    let mut d = 1.0;
    while d <= n - 1.0 {
        total += 2.0 * (n - d) / (d + 1.0);
        d += 1.0;
    }
    total
}

/// Mean comparisons over seeded random permutations of `{1..n}` versus the
/// exact formula. One record per call.
pub fn quicksort_experiment(
    n: usize,
    trials: u64,
    master_seed: u64,
    threads: usize,
) -> Result<ExperimentRecord> {
    if n == 0 {
        return Err(Error::InvalidParameter("--n must be positive".into()));
    }
    let counts = crate::harness::map_trials(trials, threads, |trial| {
        let mut rng = Rng::substream(master_seed, trial);
        let mut perm: Vec<i64> = (1..=n as i64).collect();
        // Fisher–Yates over i64 values.
        for i in (1..perm.len()).rev() {
            let j = rng.index(i + 1);
            perm.swap(i, j);
        }
        Ok(quicksort_first_pivot(&perm)?.comparisons)
    })?;
    let total: u64 = counts.iter().sum();
    let trial_mean = total as f64 / trials as f64;
    let exact = expected_comparisons_exact(n);
    let relative_error = if exact > 0.0 {
        (trial_mean - exact).abs() / exact
    } else {
        0.0
    };
    Ok(ExperimentRecord::new("quicksort", master_seed)
        .with_param("n", n as f64)
        .with_param("trials", trials as f64)
        .with_stat("trial_mean", trial_mean)
        .with_stat("exact_formula", exact)
        .with_stat("relative_error", relative_error))
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    #[test]
    fn small_traces() {
        // Pivot 2 is compared with 1 and 3; both subarrays are singletons.
        let t = quicksort_first_pivot(&[2, 1, 3]).unwrap();
        assert_eq!(t.sorted, vec![1, 2, 3]);
        assert_eq!(t.comparisons, 2);

        assert_eq!(quicksort_first_pivot(&[]).unwrap().comparisons, 0);
        assert_eq!(quicksort_first_pivot(&[9]).unwrap().comparisons, 0);
    }

    #[test]
    fn sorted_input_is_quadratic() {
        for n in [2usize, 5, 17, 100] {
            let input: Vec<i64> = (1..=n as i64).collect();
            let t = quicksort_first_pivot(&input).unwrap();
            assert_eq!(t.sorted, input);
            assert_eq!(t.comparisons, (n * (n - 1) / 2) as u64);
        }
    }

    #[test]
    fn duplicates_are_rejected() {
        assert!(matches!(
            quicksort_first_pivot(&[1, 2, 1]),
            Err(Error::DuplicateElements)
        ));
    }

    #[test]
    fn formula_small_values() {
        assert_eq!(expected_comparisons_exact(0), 0.0);
        assert_eq!(expected_comparisons_exact(1), 0.0);
        // Both permutations of {1,2} cost exactly one comparison.
        assert!((expected_comparisons_exact(2) - 1.0).abs() < 1e-15);
        // Brute-force average over all six permutations of {1,2,3} is 16/6.
        assert!((expected_comparisons_exact(3) - 8.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn formula_matches_full_permutation_average_up_to_8() {
        for n in 1..=8usize {
            let mut total = 0u64;
            let mut count = 0u64;
            for perm in (1..=n as i64).permutations(n) {
                total += quicksort_first_pivot(&perm).unwrap().comparisons;
                count += 1;
            }
            let mean = total as f64 / count as f64;
            let exact = expected_comparisons_exact(n);
            assert!(
                (mean - exact).abs() < 1e-9,
                "n={n}: brute {mean} exact {exact}"
            );
        }
    }

    #[test]
    fn comparison_count_is_order_isomorphism_invariant() {
        // Relabeling values monotonically cannot change any comparison.
        let mut rng = Rng::new(31);
        for _ in 0..200 {
            let n = 2 + rng.index(40);
            let mut perm: Vec<i64> = (1..=n as i64).collect();
            for i in (1..perm.len()).rev() {
                let j = rng.index(i + 1);
                perm.swap(i, j);
            }
            let relabeled: Vec<i64> = perm.iter().map(|&x| 3 * x + 1000).collect();
            let a = quicksort_first_pivot(&perm).unwrap();
            let b = quicksort_first_pivot(&relabeled).unwrap();
            assert_eq!(a.comparisons, b.comparisons);
            assert!(a.sorted.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn monte_carlo_near_formula_at_n_100() {
        let record = quicksort_experiment(100, 10_000, 12345, 1).unwrap();
        assert!(
            record.get("relative_error").unwrap() < 0.02,
            "relative error {}",
            record.get("relative_error").unwrap()
        );
        assert_eq!(record, quicksort_experiment(100, 10_000, 12345, 4).unwrap());
    }
}
