//! Average-case algorithm experiments.
//!
//! This crate implements a family of classical algorithms whose interesting
//! guarantees are *average-case* rather than worst-case, together with the
//! exact computations and seeded Monte Carlo experiments needed to observe
//! those guarantees at desk scale:
//!
//! - [`stopping`] — optimal stopping over known prize distributions: the
//!   backward-induction optimal policy and the single-threshold rule of the
//!   prophet inequality, both evaluated exactly over discrete supports.
//! - [`sorting`] — deterministic first-element-pivot QuickSort with
//!   comparison accounting and the exact expected-comparison formula.
//! - [`hashing`] — a linear-probing table instrumented with probe counts,
//!   plus the idealized geometric baseline `1/(1-α)`.
//! - [`binpack`] — First-Fit Decreasing and Truncate-and-Match packing,
//!   validity checking, and the `⌈Σ sᵢ⌉` lower bound.
//! - [`geometry`] — expected-linear-time divide-and-conquer 2D convex hull
//!   with an exact orientation predicate and a brute-force oracle.
//! - [`tsp`] — exact Held-Karp tours for small inputs and the grid-dissection
//!   Stitch heuristic for large uniform inputs.
//! - [`graphs`] — Erdős–Rényi and planted-model generators with the
//!   combinatorial recovery algorithms (top-k degrees, greedy clique,
//!   common-neighbor bisection).
//!
//! Everything is deterministic: all randomness flows through [`rng::Rng`],
//! a counter-based generator whose (master seed, trial index) substreams are
//! reproducible bit-for-bit on every platform.
//!
//! ```
//! use avgcase::dist::DiscreteDistribution;
//! use avgcase::stopping::{backward_induction_policy, median_threshold,
//!                         threshold_rule_value, StoppingInstance};
//!
//! // Two fair 0/1 coins: the optimal player and the single-threshold rule
//! // both collect 3/4, while the prophet's benchmark E[max] is also 3/4.
//! let coin = DiscreteDistribution::new(vec![(0.0, 0.5), (1.0, 0.5)])?;
//! let inst = StoppingInstance::new(vec![coin.clone(), coin])?;
//! let (_policy, optimal) = backward_induction_policy(&inst);
//! let (t, mode) = median_threshold(&inst);
//! let rule = threshold_rule_value(&inst, t, mode);
//! assert_eq!(optimal, 0.75);
//! assert_eq!(rule, 0.75);
//! assert!(rule >= 0.5 * inst.expected_max());
//! # Ok::<(), avgcase::Error>(())
//! ```

pub mod binpack;
pub mod dist;
pub mod error;
pub mod geometry;
pub mod graphs;
pub mod harness;
pub mod hashing;
pub mod record;
pub mod rng;
pub mod sorting;
pub mod stopping;
pub mod tsp;

pub use dist::DiscreteDistribution;
pub use error::{Error, Result};
pub use record::{ExperimentRecord, OutputFormat};
pub use rng::Rng;
