//! Trial dispatch: run independent seeded trials across threads.
//!
//! Every trial derives its own [`crate::rng::Rng`] substream from
//! `(master_seed, trial_index)`, so trials are independent of execution
//! order and results are aggregated by trial index. Output is therefore
//! bit-identical whatever the thread count.

use crate::error::Result;

/// Applies `f` to every trial index in `0..trials`, returning results in
/// index order. `threads <= 1` runs on the calling thread. On error, the
/// error of the lowest trial index is returned.
pub fn map_trials<T, F>(trials: u64, threads: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync,
{
    let workers = threads.max(1).min(trials.max(1) as usize);
    if workers == 1 {
        return (0..trials).map(f).collect();
    }
    let mut slots: Vec<Option<Result<T>>> = (0..trials).map(|_| None).collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let f = &f;
                scope.spawn(move || {
                    let mut out = Vec::new();
                    let mut i = w as u64;
                    while i < trials {
                        out.push((i, f(i)));
                        i += workers as u64;
                    }
                    out
                })
            })
            .collect();
        for handle in handles {
            for (i, r) in handle.join().expect("trial worker panicked") {
                slots[i as usize] = Some(r);
            }
        }
    });
    slots
        .into_iter()
        .map(|s| s.expect("every trial index was dispatched"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::rng::Rng;

    #[test]
    fn results_are_in_index_order_and_thread_count_invariant() {
        let run = |threads| {
            map_trials(57, threads, |i| {
                let mut rng = Rng::substream(7, i);
                Ok((i, rng.next_u64()))
            })
            .unwrap()
        };
        let serial = run(1);
        assert_eq!(serial.len(), 57);
        assert!(serial.iter().enumerate().all(|(k, &(i, _))| k as u64 == i));
        for threads in [2, 3, 8] {
            assert_eq!(run(threads), serial);
        }
    }

    #[test]
    fn lowest_index_error_wins() {
        let err = map_trials(10, 4, |i| {
            if i >= 3 {
                Err(Error::PropertyViolation(format!("trial {i}")))
            } else {
                Ok(i)
            }
        })
        .unwrap_err();
        assert!(matches!(err, Error::PropertyViolation(msg) if msg == "trial 3"));
    }

    #[test]
    fn zero_trials() {
        let out: Vec<u64> = map_trials(0, 4, Ok).unwrap();
        assert!(out.is_empty());
    }
}
