//! Divide-and-conquer 2D convex hull with an exact orientation predicate.
//!
//! The hull of uniform points in the unit square has expected size
//! `O(log n)`, which is what makes the input-order divide-and-conquer run in
//! expected linear time: each merge touches only the two sub-hulls, not the
//! sub-point-sets. The merge works on x-sorted vertex lists — a linear list
//! merge followed by a monotone-chain scan — and performs at most
//! `8(|C₁|+|C₂|)` orientation tests.
//!
//! Hulls contain *strict* vertices only: collinear points interior to a hull
//! edge are excluded, so "the points on the hull" is unambiguous and two
//! independent implementations ([`hull_divide_conquer`] and the quadratic
//! [`hull_bruteforce`] oracle) must agree exactly.
//!
//! Orientation tests are exact: a floating-point evaluation with Shewchuk's
//! error-bound filter, falling back to arbitrary-precision rationals when
//! the filter cannot certify the sign.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::record::ExperimentRecord;
use crate::rng::Rng;

/// A point in the plane. Coordinates must be finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }
}

/// Lexicographic order by `(x, y)`.
pub fn lex_cmp(a: Point, b: Point) -> Ordering {
    a.x.partial_cmp(&b.x)
        .expect("finite coordinates")
        .then(a.y.partial_cmp(&b.y).expect("finite coordinates"))
}

// Shewchuk's static filter for the 2x2 orientation determinant: if the
// float result clears CCW_ERRBOUND_A times the sum of the addend
// magnitudes, its sign is certain.
const EPSILON: f64 = 1.110_223_024_625_156_5e-16; // 2^-53
const CCW_ERRBOUND_A: f64 = (3.0 + 16.0 * EPSILON) * EPSILON;

/// Sign of the orientation determinant `(q−p) × (r−p)`: +1 if `p,q,r` turn
/// counterclockwise, −1 clockwise, 0 collinear. Exact.
pub fn orientation(p: Point, q: Point, r: Point) -> i8 {
    let detleft = (q.x - p.x) * (r.y - p.y);
    let detright = (q.y - p.y) * (r.x - p.x);
    let det = detleft - detright;

    let detsum = if detleft > 0.0 {
        if detright <= 0.0 {
            return sign(det);
        }
        detleft + detright
    } else if detleft < 0.0 {
        if detright >= 0.0 {
            return sign(det);
        }
        -detleft - detright
    } else {
        return sign(det);
    };

    if det >= CCW_ERRBOUND_A * detsum || -det >= CCW_ERRBOUND_A * detsum {
        return sign(det);
    }
    orientation_exact(p, q, r)
}

fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// Reference evaluation in arbitrary-precision rationals.
fn orientation_exact(p: Point, q: Point, r: Point) -> i8 {
    let rat = |x: f64| BigRational::from_float(x).expect("finite coordinate");
    let det = (rat(q.x) - rat(p.x)) * (rat(r.y) - rat(p.y))
        - (rat(q.y) - rat(p.y)) * (rat(r.x) - rat(p.x));
    match det.cmp(&BigRational::zero()) {
        Ordering::Greater => 1,
        Ordering::Less => -1,
        Ordering::Equal => 0,
    }
}

#[inline]
fn orient_counted(p: Point, q: Point, r: Point, tests: &mut u64) -> i8 {
    *tests += 1;
    orientation(p, q, r)
}

/// Is `c` strictly between `a` and `b` in lexicographic order? For three
/// collinear points this is exactly "strictly inside the segment".
fn lex_between(a: Point, c: Point, b: Point) -> bool {
    (lex_cmp(a, c) == Ordering::Less && lex_cmp(c, b) == Ordering::Less)
        || (lex_cmp(b, c) == Ordering::Less && lex_cmp(c, a) == Ordering::Less)
}

/// A convex hull: strict vertices only, no three collinear.
#[derive(Debug, Clone, PartialEq)]
pub struct Hull {
    ccw: Vec<Point>,
    by_x: Vec<Point>,
}

impl Hull {
    /// Vertices counterclockwise, starting at the lexicographically
    /// smallest.
    pub fn vertices(&self) -> &[Point] {
        &self.ccw
    }

    /// The same vertices sorted by x-coordinate (ties by y).
    pub fn sorted_by_x(&self) -> &[Point] {
        &self.by_x
    }

    pub fn len(&self) -> usize {
        self.ccw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ccw.is_empty()
    }

    /// Is `p` inside or on the hull polygon? Exact.
    pub fn contains(&self, p: Point) -> bool {
        match self.ccw.len() {
            0 => false,
            1 => self.ccw[0] == p,
            2 => {
                orientation(self.ccw[0], self.ccw[1], p) == 0
                    && (p == self.ccw[0]
                        || p == self.ccw[1]
                        || lex_between(self.ccw[0], p, self.ccw[1]))
            }
            n => (0..n).all(|i| orientation(self.ccw[i], self.ccw[(i + 1) % n], p) >= 0),
        }
    }
}

fn sort_dedup(ps: &[Point]) -> Vec<Point> {
    let mut v = ps.to_vec();
    v.sort_by(|&a, &b| lex_cmp(a, b));
    v.dedup();
    v
}

/// Monotone-chain hull of strictly ascending unique points. Collinear
/// triples are popped, so only strict vertices survive.
fn monotone_chain(sorted: &[Point], tests: &mut u64) -> Hull {
    let n = sorted.len();
    if n <= 2 {
        return Hull {
            ccw: sorted.to_vec(),
            by_x: sorted.to_vec(),
        };
    }
    let mut lower: Vec<Point> = Vec::with_capacity(8);
    for &p in sorted {
        while lower.len() >= 2 {
            if orient_counted(lower[lower.len() - 2], lower[lower.len() - 1], p, tests) <= 0 {
                lower.pop();
            } else {
                break;
            }
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::with_capacity(8);
    for &p in sorted.iter().rev() {
        while upper.len() >= 2 {
            if orient_counted(upper[upper.len() - 2], upper[upper.len() - 1], p, tests) <= 0 {
                upper.pop();
            } else {
                break;
            }
        }
        upper.push(p);
    }
    // lower runs lexmin->lexmax, upper runs lexmax->lexmin; their interiors
    // are disjoint and both are sorted, so by_x is a linear two-way merge.
    let upper_inner = &upper[1..upper.len() - 1];
    let mut by_x = Vec::with_capacity(lower.len() + upper_inner.len());
    {
        let mut i = 0;
        let mut j = upper_inner.len();
        while i < lower.len() || j > 0 {
            let take_lower = if i == lower.len() {
                false
            } else if j == 0 {
                true
            } else {
                lex_cmp(lower[i], upper_inner[j - 1]) == Ordering::Less
            };
            if take_lower {
                by_x.push(lower[i]);
                i += 1;
            } else {
                by_x.push(upper_inner[j - 1]);
                j -= 1;
            }
        }
    }
    let mut ccw = lower;
    ccw.extend_from_slice(upper_inner);
    Hull { ccw, by_x }
}

/// Quadratic-oracle hull: a directed pair `(a, b)` is a hull edge iff every
/// other point lies strictly left of `a→b` or collinear strictly between
/// `a` and `b`; the hull is the successor cycle of those edges. Capped at
/// 2000 points.
pub fn hull_bruteforce(ps: &[Point]) -> Result<Hull> {
    const LIMIT: usize = 2000;
    if ps.is_empty() {
        return Err(Error::EmptyInput);
    }
    if ps.len() > LIMIT {
        return Err(Error::TooManyPoints {
            got: ps.len(),
            limit: LIMIT,
        });
    }
    let unique = sort_dedup(ps);
    let mut tests = 0u64;
    Ok(bruteforce_unique(&unique, &mut tests))
}

fn bruteforce_unique(unique: &[Point], tests: &mut u64) -> Hull {
    let u = unique.len();
    if u <= 2 {
        return Hull {
            ccw: unique.to_vec(),
            by_x: unique.to_vec(),
        };
    }
    let mut next = vec![usize::MAX; u];
    for a in 0..u {
        'pair: for b in 0..u {
            if a == b {
                continue;
            }
            for c in 0..u {
                if c == a || c == b {
                    continue;
                }
                let o = orient_counted(unique[a], unique[b], unique[c], tests);
                let on_edge_interior = o == 0 && lex_between(unique[a], unique[c], unique[b]);
                if o <= 0 && !on_edge_interior {
                    continue 'pair;
                }
            }
            next[a] = b;
            break;
        }
    }
    // unique[0] is the lexicographic minimum, always a strict vertex.
    let mut ccw = vec![unique[0]];
    let mut cur = next[0];
    while cur != 0 {
        assert!(cur != usize::MAX && ccw.len() <= u, "broken hull cycle");
        ccw.push(unique[cur]);
        cur = next[cur];
    }
    let mut by_x = ccw.clone();
    by_x.sort_by(|&a, &b| lex_cmp(a, b));
    Hull { ccw, by_x }
}

/// Divide-and-conquer hull: split by *input order* (so random subproblems
/// stay random), brute force below six points, merge the sub-hulls.
pub fn hull_divide_conquer(ps: &[Point]) -> Result<Hull> {
    Ok(hull_divide_conquer_counted(ps)?.0)
}

/// As [`hull_divide_conquer`], also returning the total number of
/// orientation tests performed (worst case `O(n log n)`).
pub fn hull_divide_conquer_counted(ps: &[Point]) -> Result<(Hull, u64)> {
    if ps.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut tests = 0u64;
    let hull = divide(ps, &mut tests);
    Ok((hull, tests))
}

fn divide(ps: &[Point], tests: &mut u64) -> Hull {
    if ps.len() <= 5 {
        let unique = sort_dedup(ps);
        return bruteforce_unique(&unique, tests);
    }
    let mid = ps.len() / 2;
    let c1 = divide(&ps[..mid], tests);
    let c2 = divide(&ps[mid..], tests);
    merge_internal(&c1, &c2, tests)
}

/// Merges two hulls into the hull of the union of their vertex sets.
///
/// Only hull vertices are examined, so this is linear in `|c1|+|c2|`: a
/// linear merge of the x-sorted vertex lists, then one monotone-chain scan.
pub fn merge_hulls(c1: &Hull, c2: &Hull) -> Hull {
    let (hull, _) = merge_hulls_counted(c1, c2);
    hull
}

/// As [`merge_hulls`], also returning the orientation-test count.
pub fn merge_hulls_counted(c1: &Hull, c2: &Hull) -> (Hull, u64) {
    let mut tests = 0u64;
    let hull = merge_internal(c1, c2, &mut tests);
    (hull, tests)
}

fn merge_internal(c1: &Hull, c2: &Hull, tests: &mut u64) -> Hull {
    let a = c1.sorted_by_x();
    let b = c2.sorted_by_x();
    let mut merged: Vec<Point> = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = if i == a.len() {
            false
        } else if j == b.len() {
            true
        } else {
            lex_cmp(a[i], b[j]) != Ordering::Greater
        };
        let p = if take_a {
            let p = a[i];
            i += 1;
            p
        } else {
            let p = b[j];
            j += 1;
            p
        };
        if merged.last() != Some(&p) {
            merged.push(p);
        }
    }
    let before = *tests;
    let hull = monotone_chain(&merged, tests);
    let used = *tests - before;
    let budget = 8 * (c1.len() + c2.len()) as u64;
    assert!(
        used <= budget,
        "merge used {used} orientation tests, budget {budget}"
    );
    hull
}

/// `n` points uniform in the unit square.
pub fn uniform_points(n: usize, rng: &mut Rng) -> Vec<Point> {
    (0..n)
        .map(|_| Point::new(rng.next_f64(), rng.next_f64()))
        .collect()
}

/// Mean hull size of uniform point sets: one record per `n`.
pub fn hull_size_experiment(
    n: usize,
    trials: u64,
    master_seed: u64,
    threads: usize,
) -> Result<ExperimentRecord> {
    if n == 0 {
        return Err(Error::InvalidParameter("--n must be positive".into()));
    }
    let sizes = crate::harness::map_trials(trials, threads, |trial| {
        let mut rng = Rng::substream(master_seed, trial);
        let points = uniform_points(n, &mut rng);
        Ok(hull_divide_conquer(&points)?.len())
    })?;
    let total: usize = sizes.iter().sum();
    let mean = total as f64 / trials as f64;
    let log_n = (n as f64).ln();
    Ok(ExperimentRecord::new("hull", master_seed)
        .with_param("n", n as f64)
        .with_param("trials", trials as f64)
        .with_stat("mean_hull_size", mean)
        .with_stat(
            "mean_hull_size_over_ln_n",
            if log_n > 0.0 { mean / log_n } else { mean },
        ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(coords: &[(f64, f64)]) -> Vec<Point> {
        coords.iter().map(|&(x, y)| Point::new(x, y)).collect()
    }

    fn vertex_set(h: &Hull) -> Vec<(u64, u64)> {
        let mut v: Vec<(u64, u64)> = h
            .vertices()
            .iter()
            .map(|p| (p.x.to_bits(), p.y.to_bits()))
            .collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn orientation_basics() {
        let o = Point::new(0.0, 0.0);
        assert_eq!(orientation(o, Point::new(1.0, 0.0), Point::new(0.0, 1.0)), 1);
        assert_eq!(orientation(o, Point::new(0.0, 1.0), Point::new(1.0, 0.0)), -1);
        assert_eq!(orientation(o, Point::new(1.0, 1.0), Point::new(2.0, 2.0)), 0);
    }

    #[test]
    fn orientation_exact_near_degeneracy() {
        // Points nearly collinear: the float determinant is below the
        // filter, so the exact path decides the sign.
        let a = Point::new(0.1, 0.1);
        let b = Point::new(0.3, 0.3);
        let c_on = Point::new(0.7, 0.7);
        assert_eq!(orientation(a, b, c_on), 0);
        let c_up = Point::new(0.7, f64::from_bits(0.7f64.to_bits() + 1));
        let c_dn = Point::new(0.7, f64::from_bits(0.7f64.to_bits() - 1));
        assert_eq!(orientation(a, b, c_up), 1);
        assert_eq!(orientation(a, b, c_dn), -1);
        assert_eq!(orientation(b, a, c_up), -1);
    }

    #[test]
    fn square_corners() {
        let corners = pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        for hull in [
            hull_bruteforce(&corners).unwrap(),
            hull_divide_conquer(&corners).unwrap(),
        ] {
            assert_eq!(hull.len(), 4);
            assert_eq!(hull.vertices()[0], Point::new(0.0, 0.0));
        }
    }

    #[test]
    fn interior_collinear_point_is_excluded() {
        let ps = pts(&[(0.0, 0.0), (0.5, 0.0), (1.0, 0.0), (0.5, 0.5)]);
        let expect = pts(&[(0.0, 0.0), (1.0, 0.0), (0.5, 0.5)]);
        for hull in [
            hull_bruteforce(&ps).unwrap(),
            hull_divide_conquer(&ps).unwrap(),
        ] {
            assert_eq!(hull.len(), 3);
            let mut got = hull.vertices().to_vec();
            got.sort_by(|&a, &b| lex_cmp(a, b));
            let mut want = expect.clone();
            want.sort_by(|&a, &b| lex_cmp(a, b));
            assert_eq!(got, want);
        }
    }

    #[test]
    fn collinear_sets_keep_only_extremes() {
        let ps = pts(&[(0.1, 0.1), (0.2, 0.2), (0.3, 0.3)]);
        let h = hull_bruteforce(&ps).unwrap();
        assert_eq!(h.len(), 2);
        assert_eq!(h.vertices()[0], Point::new(0.1, 0.1));
        assert_eq!(h.vertices()[1], Point::new(0.3, 0.3));
        assert_eq!(vertex_set(&hull_divide_conquer(&ps).unwrap()), vertex_set(&h));
    }

    #[test]
    fn degenerate_inputs() {
        assert!(hull_bruteforce(&[]).is_err());
        assert!(hull_divide_conquer(&[]).is_err());
        let single = pts(&[(0.3, 0.4)]);
        assert_eq!(hull_divide_conquer(&single).unwrap().len(), 1);
        // Duplicates collapse.
        let dup = pts(&[(0.3, 0.4), (0.3, 0.4), (0.3, 0.4)]);
        assert_eq!(hull_divide_conquer(&dup).unwrap().len(), 1);
        assert_eq!(hull_bruteforce(&dup).unwrap().len(), 1);
        let oversized = vec![Point::new(0.0, 0.0); 2001];
        assert!(matches!(
            hull_bruteforce(&oversized),
            Err(Error::TooManyPoints { .. })
        ));
    }

    #[test]
    fn merge_is_idempotent_and_absorbs_contained_hulls() {
        let outer =
            hull_bruteforce(&pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])).unwrap();
        let inner = hull_bruteforce(&pts(&[(0.4, 0.4), (0.6, 0.4), (0.5, 0.6)])).unwrap();
        assert_eq!(vertex_set(&merge_hulls(&outer, &inner)), vertex_set(&outer));
        assert_eq!(vertex_set(&merge_hulls(&outer, &outer)), vertex_set(&outer));
    }

    #[test]
    fn merge_of_adjacent_triangles_matches_bruteforce() {
        let left = pts(&[(0.0, 0.0), (0.4, 0.0), (0.2, 0.3)]);
        let right = pts(&[(0.5, 0.0), (0.9, 0.0), (0.7, 0.3)]);
        let c1 = hull_bruteforce(&left).unwrap();
        let c2 = hull_bruteforce(&right).unwrap();
        let merged = merge_hulls(&c1, &c2);
        let all: Vec<Point> = left.iter().chain(right.iter()).copied().collect();
        assert_eq!(
            vertex_set(&merged),
            vertex_set(&hull_bruteforce(&all).unwrap())
        );
    }

    #[test]
    fn oracle_equivalence_on_random_sets() {
        let mut rng = Rng::new(4242);
        for round in 0..2000 {
            let n = 1 + rng.index(50);
            let ps = uniform_points(n, &mut rng);
            let dc = hull_divide_conquer(&ps).unwrap();
            let bf = hull_bruteforce(&ps).unwrap();
            assert_eq!(dc.vertices(), bf.vertices(), "round {round} n {n}");
            assert_eq!(dc.sorted_by_x(), bf.sorted_by_x());
        }
    }

    #[test]
    fn oracle_equivalence_on_adversarial_sets() {
        let mut fixtures: Vec<Vec<Point>> = Vec::new();
        // All collinear on a diagonal.
        fixtures.push(
            (0..200)
                .map(|i| Point::new(i as f64 / 200.0, i as f64 / 200.0))
                .collect(),
        );
        // Identical x.
        fixtures.push((0..150).map(|i| Point::new(0.5, i as f64 / 150.0)).collect());
        // Identical y.
        fixtures.push((0..150).map(|i| Point::new(i as f64 / 150.0, 0.25)).collect());
        // Regular polygon (every point a vertex).
        let m = 97;
        fixtures.push(
            (0..m)
                .map(|k| {
                    let t = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
                    Point::new(0.5 + 0.45 * t.cos(), 0.5 + 0.45 * t.sin())
                })
                .collect(),
        );
        // A coarse grid: many collinear runs.
        let mut grid = Vec::new();
        for i in 0..12 {
            for j in 0..12 {
                grid.push(Point::new(i as f64 / 11.0, j as f64 / 11.0));
            }
        }
        fixtures.push(grid);
        // Duplicated cluster plus outliers.
        let mut dups = vec![Point::new(0.5, 0.5); 40];
        dups.extend(pts(&[(0.0, 0.0), (1.0, 1.0), (0.0, 1.0)]));
        fixtures.push(dups);

        for (i, ps) in fixtures.iter().enumerate() {
            let dc = hull_divide_conquer(ps).unwrap();
            let bf = hull_bruteforce(ps).unwrap();
            assert_eq!(dc.vertices(), bf.vertices(), "fixture {i}");
        }
    }

    #[test]
    fn containment_and_strict_convexity() {
        let mut rng = Rng::new(333);
        for _ in 0..300 {
            let n = 3 + rng.index(60);
            let ps = uniform_points(n, &mut rng);
            let hull = hull_divide_conquer(&ps).unwrap();
            for &p in &ps {
                assert!(hull.contains(p), "input point escaped its hull");
            }
            let v = hull.vertices();
            if v.len() >= 3 {
                for i in 0..v.len() {
                    let a = v[i];
                    let b = v[(i + 1) % v.len()];
                    let c = v[(i + 2) % v.len()];
                    assert_eq!(orientation(a, b, c), 1, "hull corner not strictly ccw");
                }
            }
        }
    }

    #[test]
    fn orientation_test_count_within_worst_case_budget() {
        // c * n * log2(n) with c = 32, exercised on adversarial inputs.
        let budget = |n: usize| 32.0 * n as f64 * (n as f64).log2();
        let mut rng = Rng::new(8080);

        let collinear: Vec<Point> = (0..1024)
            .map(|i| Point::new(i as f64 / 1024.0, i as f64 / 1024.0))
            .collect();
        let (_, tests) = hull_divide_conquer_counted(&collinear).unwrap();
        assert!((tests as f64) <= budget(collinear.len()));

        let circle: Vec<Point> = (0..1000)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / 1000.0;
                Point::new(0.5 + 0.45 * t.cos(), 0.5 + 0.45 * t.sin())
            })
            .collect();
        let (_, tests) = hull_divide_conquer_counted(&circle).unwrap();
        assert!((tests as f64) <= budget(circle.len()));

        let uniform = uniform_points(4096, &mut rng);
        let (_, tests) = hull_divide_conquer_counted(&uniform).unwrap();
        assert!((tests as f64) <= budget(uniform.len()));
    }

    #[test]
    fn hull_size_experiment_statistics() {
        let r4 = hull_size_experiment(4, 50, 9, 1).unwrap();
        assert!(r4.get("mean_hull_size").unwrap() <= 4.0);
        // Mean hull size grows with n (0.2 absolute slack).
        let m100 = hull_size_experiment(100, 40, 9, 1)
            .unwrap()
            .get("mean_hull_size")
            .unwrap();
        let m1000 = hull_size_experiment(1000, 40, 9, 1)
            .unwrap()
            .get("mean_hull_size")
            .unwrap();
        assert!(m1000 >= m100 - 0.2, "m100 {m100} m1000 {m1000}");
    }
}
