//! Euclidean TSP: exact Held-Karp tours for small inputs and the
//! grid-dissection Stitch heuristic for large uniform inputs.
//!
//! Stitch divides the unit square into roughly `n / ln n` subsquares, solves
//! each subsquare optimally when it holds at most `min(6·log₂n, 20)` points
//! (Held-Karp subset DP; the hard cap keeps the `2^k` table in memory),
//! visits one representative per nonempty subsquare along a boustrophedon
//! row tour `T₀`, and concatenates the subsquare tours in `T₀` order — one
//! particular shortcutting of the Eulerian walk over the union of subtours.
//!
//! On uniform inputs the optimal tour length grows like `√n` while the
//! stitching overhead is `O(√(n/ln n))`, so the approximation overhead
//! vanishes as `n` grows.

use crate::error::{Error, Result};
use crate::geometry::{lex_cmp, Point};
use crate::record::ExperimentRecord;
use crate::rng::Rng;

/// Hard cap on exact Held-Karp inputs: the DP table is `2^(n-1)·(n-1)`
/// entries, about 80 MB of `f64` at 20 points.
pub const HELD_KARP_MAX: usize = 20;

/// A closed tour: a visiting order over all point indices and its length.
#[derive(Debug, Clone, PartialEq)]
pub struct Tour {
    pub order: Vec<usize>,
    pub length: f64,
}

#[inline]
fn dist(a: Point, b: Point) -> f64 {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    (dx * dx + dy * dy).sqrt()
}

/// Total Euclidean length of visiting `order` cyclically (including the
/// closing edge). `order` must be a permutation of `0..ps.len()`.
pub fn tour_length(ps: &[Point], order: &[usize]) -> Result<f64> {
    if order.len() != ps.len() {
        return Err(Error::NotAPermutation);
    }
    let mut seen = vec![false; ps.len()];
    for &i in order {
        if i >= ps.len() || seen[i] {
            return Err(Error::NotAPermutation);
        }
        seen[i] = true;
    }
    if order.len() <= 1 {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for w in 0..order.len() {
        total += dist(ps[order[w]], ps[order[(w + 1) % order.len()]]);
    }
    Ok(total)
}

/// Exact minimum tour via subset dynamic programming.
///
/// One subproblem per (subset of points, endpoint): the shortest path from
/// point 0 through the subset ending at the endpoint. `O(k²·2^k)` time;
/// inputs above [`HELD_KARP_MAX`] are rejected, inputs below 2 points give a
/// degenerate tour of length 0.
pub fn held_karp(ps: &[Point]) -> Result<Tour> {
    let n = ps.len();
    if n > HELD_KARP_MAX {
        return Err(Error::TooManyPoints {
            got: n,
            limit: HELD_KARP_MAX,
        });
    }
    if n <= 1 {
        return Ok(Tour {
            order: (0..n).collect(),
            length: 0.0,
        });
    }
    if n == 2 {
        return Ok(Tour {
            order: vec![0, 1],
            length: 2.0 * dist(ps[0], ps[1]),
        });
    }

    let mut d = vec![0.0f64; n * n];
    for a in 0..n {
        for b in 0..n {
            d[a * n + b] = dist(ps[a], ps[b]);
        }
    }

    let m = n - 1; // points 1..n; bit j <-> point j+1
    let full: usize = (1 << m) - 1;
    let mut dp = vec![f64::INFINITY; (full + 1) * m];
    let mut parent = vec![u8::MAX; (full + 1) * m];
    for j in 0..m {
        dp[(1usize << j) * m + j] = d[j + 1];
    }
    for mask in 1..=full {
        if mask & (mask - 1) == 0 {
            continue; // singletons are seeded
        }
        let base = mask * m;
        let mut mj = mask;
        while mj != 0 {
            let j = mj.trailing_zeros() as usize;
            mj &= mj - 1;
            let prev_mask = mask ^ (1 << j);
            let prev_base = prev_mask * m;
            let dj = (j + 1) * n;
            let mut best = f64::INFINITY;
            let mut best_i = u8::MAX;
            let mut mi = prev_mask;
            while mi != 0 {
                let i = mi.trailing_zeros() as usize;
                mi &= mi - 1;
                let cand = dp[prev_base + i] + d[dj + i + 1];
                if cand < best {
                    best = cand;
                    best_i = i as u8;
                }
            }
            dp[base + j] = best;
            parent[base + j] = best_i;
        }
    }

    let mut best = f64::INFINITY;
    let mut last = 0usize;
    for j in 0..m {
        let cand = dp[full * m + j] + d[j + 1];
        if cand < best {
            best = cand;
            last = j;
        }
    }

    let mut tail = Vec::with_capacity(m);
    let mut mask = full;
    let mut j = last;
    while mask != 0 {
        tail.push(j + 1);
        let p = parent[mask * m + j];
        mask ^= 1 << j;
        if mask != 0 {
            j = p as usize;
        }
    }
    let mut order = Vec::with_capacity(n);
    order.push(0);
    order.extend(tail.into_iter().rev());
    let length = tour_length(ps, &order)?;
    Ok(Tour { order, length })
}

/// The even dissection of the unit square into `g×g` subsquares with
/// `g = ⌈√(n / ln n)⌉`, and each point's cell assignment.
#[derive(Debug, Clone)]
pub struct GridDissection {
    pub g: usize,
    pub cell_of: Vec<usize>,
}

impl GridDissection {
    /// Requires at least 3 points (so `ln n > 1`).
    pub fn new(ps: &[Point]) -> Result<Self> {
        let n = ps.len();
        if n < 3 {
            return Err(Error::TooFewPoints { need: 3, got: n });
        }
        let g = ((n as f64 / (n as f64).ln()).sqrt()).ceil() as usize;
        let g = g.max(1);
        let cell_of = ps
            .iter()
            .map(|p| {
                let cx = ((p.x * g as f64).floor() as isize).clamp(0, g as isize - 1) as usize;
                let cy = ((p.y * g as f64).floor() as isize).clamp(0, g as isize - 1) as usize;
                cy * g + cx
            })
            .collect();
        Ok(GridDissection { g, cell_of })
    }

    pub fn cell_count(&self) -> usize {
        self.g * self.g
    }
}

/// Diagnostics from one Stitch run.
#[derive(Debug, Clone, PartialEq)]
pub struct StitchStats {
    pub grid_dim: usize,
    pub nonempty_cells: usize,
    /// Points in the fullest subsquare.
    pub max_cell_count: usize,
    /// Cells solved by the deterministic fallback order instead of Held-Karp.
    pub fallback_cells: usize,
    /// Length of the boustrophedon representative tour T₀.
    pub t0_length: f64,
}

/// Grid-dissection tour of at least 3 points. See the module docs.
pub fn stitch(ps: &[Point]) -> Result<Tour> {
    Ok(stitch_with_stats(ps)?.0)
}

/// As [`stitch`], also returning per-run diagnostics.
pub fn stitch_with_stats(ps: &[Point]) -> Result<(Tour, StitchStats)> {
    let n = ps.len();
    let grid = GridDissection::new(ps)?;
    let g = grid.g;
    let mut cells: Vec<Vec<usize>> = vec![Vec::new(); grid.cell_count()];
    for (i, &c) in grid.cell_of.iter().enumerate() {
        cells[c].push(i); // ascending original index; the representative is cells[c][0]
    }

    let cap = (6.0 * (n as f64).log2()).min(HELD_KARP_MAX as f64);
    let mut max_cell_count = 0usize;
    let mut fallback_cells = 0usize;
    let mut subtours: Vec<Option<Vec<usize>>> = vec![None; cells.len()];
    for (c, members) in cells.iter().enumerate() {
        if members.is_empty() {
            continue;
        }
        max_cell_count = max_cell_count.max(members.len());
        let mut tour_indices: Vec<usize> = if members.len() as f64 <= cap {
            let local: Vec<Point> = members.iter().map(|&i| ps[i]).collect();
            held_karp(&local)?
                .order
                .iter()
                .map(|&l| members[l])
                .collect()
        } else {
            fallback_cells += 1;
            // Arbitrary-but-deterministic fallback: sweep by (x, y).
            let mut order = members.clone();
            order.sort_by(|&a, &b| lex_cmp(ps[a], ps[b]).then(a.cmp(&b)));
            order
        };
        // Rotate the cyclic subtour to start at the representative.
        let rep = members[0];
        let pos = tour_indices
            .iter()
            .position(|&i| i == rep)
            .expect("representative is in its own cell");
        tour_indices.rotate_left(pos);
        subtours[c] = Some(tour_indices);
    }

    // Boustrophedon cell order: bottom row left-to-right, next row
    // right-to-left, and so on.
    let mut cell_sequence: Vec<usize> = Vec::new();
    for cy in 0..g {
        if cy % 2 == 0 {
            for cx in 0..g {
                cell_sequence.push(cy * g + cx);
            }
        } else {
            for cx in (0..g).rev() {
                cell_sequence.push(cy * g + cx);
            }
        }
    }
    cell_sequence.retain(|&c| subtours[c].is_some());

    let reps: Vec<Point> = cell_sequence
        .iter()
        .map(|&c| ps[subtours[c].as_ref().expect("nonempty")[0]])
        .collect();
    let t0_length = if reps.len() <= 1 {
        0.0
    } else {
        let order: Vec<usize> = (0..reps.len()).collect();
        tour_length(&reps, &order)?
    };

    let mut order = Vec::with_capacity(n);
    for &c in &cell_sequence {
        order.extend_from_slice(subtours[c].as_ref().expect("nonempty"));
    }
    let length = tour_length(ps, &order)?;
    Ok((
        Tour { order, length },
        StitchStats {
            grid_dim: g,
            nonempty_cells: cell_sequence.len(),
            max_cell_count,
            fallback_cells,
            t0_length,
        },
    ))
}

/// One row per trial of Stitch on uniform points: the tour length, its ratio
/// to `√n`, and cell-occupancy diagnostics. With `with_oracle`, also the
/// exact Held-Karp length (capped at 14 points to keep the oracle fast).
///
/// Each trial also checks the boustrophedon geometry bound
/// `T₀ ≤ 4·√(n/ln n)`; a violation aborts the experiment.
pub fn sqrt_n_experiment(
    n: usize,
    trials: u64,
    with_oracle: bool,
    master_seed: u64,
    threads: usize,
) -> Result<Vec<ExperimentRecord>> {
    if n < 3 {
        return Err(Error::TooFewPoints { need: 3, got: n });
    }
    if with_oracle && n > 14 {
        return Err(Error::InvalidParameter(format!(
            "--oracle supports n <= 14, got {n}"
        )));
    }
    let t0_budget = 4.0 * (n as f64 / (n as f64).ln()).sqrt();
    crate::harness::map_trials(trials, threads, |trial| {
        let sub = Rng::subseed(master_seed, trial);
        let mut rng = Rng::new(sub);
        let ps = crate::geometry::uniform_points(n, &mut rng);
        let (tour, stats) = stitch_with_stats(&ps)?;
        if stats.t0_length > t0_budget {
            return Err(Error::PropertyViolation(format!(
                "representative tour length {} exceeds 4*sqrt(n/ln n) = {} on trial {trial}",
                stats.t0_length, t0_budget
            )));
        }
        let mut record = ExperimentRecord::new("tsp", sub)
            .with_param("n", n as f64)
            .with_param("trial", trial as f64)
            .with_stat("stitch_length", tour.length)
            .with_stat("length_over_sqrt_n", tour.length / (n as f64).sqrt())
            .with_stat("max_cell_occupancy", stats.max_cell_count as f64)
            .with_stat("t0_length", stats.t0_length);
        if with_oracle {
            record = record.with_stat("oracle_length", held_karp(&ps)?.length);
        }
        Ok(record)
    })
}
