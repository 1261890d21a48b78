//! Greedy triangulations and their worst-case stretch.
//!
//! The greedy triangulation scans all point pairs in non-decreasing order of
//! length and keeps every edge that does not properly cross an already
//! accepted edge. This module provides:
//!
//! * [`greedy_triangulation`] — the construction itself, with a deterministic
//!   `(length, min index, max index)` tie-break;
//! * the six-point parallelogram family ([`parallelogram_six`]) whose greedy
//!   triangulation forces a detour between the two exterior points of ratio
//!   `min(1 + 1/sin α, 1 − cot α + √(1 + sin²α − 2 sin α cos α)/sin α)`,
//!   maximized near `α ≈ 1.3416` at `≈ 2.0268` ([`greedy_bound`],
//!   [`maximize_greedy_bound`]);
//! * seeded random experiments measuring greedy stretch on uniform point
//!   sets ([`greedy_stretch_experiment`]);
//! * an exhaustive scan over convex-position subsets
//!   ([`convex_subset_greedy_max`]), which can demonstrate that the worst
//!   greedy stretch of a non-convex set is not always attained by one of its
//!   convex subsets.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::{
    orientation, point_in_segment_interior, segments_properly_cross, Orientation, Point, PointSet,
};
use crate::graph::GeometricGraph;

/// Largest point count accepted by [`convex_subset_greedy_max`] (the scan is
/// exponential in the point count).
pub const SUBSET_SCAN_MAX: usize = 16;

#[derive(Debug, Error, PartialEq)]
pub enum GreedyError {
    #[error("greedy triangulation needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("alpha must lie in (pi/4, pi/2), got {0}")]
    AlphaOutOfRange(f64),
    #[error("epsilon must lie in (0, 1e-2], got {0}")]
    EpsilonOutOfRange(f64),
    #[error("subset scan accepts at most {SUBSET_SCAN_MAX} points, got {0}")]
    TooManyPoints(usize),
    #[error("experiment range needs 4 <= n_min <= n_max, got {n_min}..={n_max}")]
    BadRange { n_min: usize, n_max: usize },
    #[error("experiment needs at least one trial")]
    NoTrials,
    #[error("optimization tolerance must be positive, got {0}")]
    BadTolerance(f64),
}

/// Parameters of the six-point parallelogram family: the parallelogram angle
/// `alpha` (strictly between π/4 and π/2) and the vertical offset `epsilon`
/// of the two exterior points (positive, at most 1e-2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreedyParams {
    alpha: f64,
    epsilon: f64,
}

impl GreedyParams {
    pub fn new(alpha: f64, epsilon: f64) -> Result<Self, GreedyError> {
        if !(alpha > std::f64::consts::FRAC_PI_4 && alpha < std::f64::consts::FRAC_PI_2) {
            return Err(GreedyError::AlphaOutOfRange(alpha));
        }
        if !(epsilon > 0.0 && epsilon <= 1e-2) {
            return Err(GreedyError::EpsilonOutOfRange(epsilon));
        }
        Ok(GreedyParams { alpha, epsilon })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

/// Builds the greedy triangulation: all pairs sorted by
/// `(length, min index, max index)`, each accepted iff it properly crosses no
/// accepted edge and contains no third point in its interior. The result is
/// a maximal plane graph on the set.
pub fn greedy_triangulation(points: &PointSet) -> Result<GeometricGraph, GreedyError> {
    let n = points.len();
    if n < 3 {
        return Err(GreedyError::TooFewPoints(n));
    }
    let ps = points.points();
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            pairs.push((ps[i].distance(&ps[j]), i, j));
        }
    }
    pairs.sort_unstable_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .expect("distances are finite")
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });

    let mut accepted: Vec<(usize, usize)> = Vec::new();
    'pairs: for &(_, i, j) in &pairs {
        for (v, p) in ps.iter().enumerate() {
            if v != i && v != j && point_in_segment_interior(p, &ps[i], &ps[j]) {
                continue 'pairs;
            }
        }
        for &(a, b) in &accepted {
            if segments_properly_cross(&ps[i], &ps[j], &ps[a], &ps[b]) {
                continue 'pairs;
            }
        }
        accepted.push((i, j));
    }

    Ok(GeometricGraph::new(points.clone(), accepted).expect("greedy edges are valid"))
}

/// The parallelogram quantities for angle `alpha`: the slanted side length
/// `a = 1/sin α`, the short diagonal `b = √(1 + sin²α − 2 sin α cos α)/sin α`,
/// and the horizontal distance `x = (1 − cot α)/2` from the upper-left corner
/// to the center. Accepts the closed right endpoint π/2 (the unit square,
/// where `a = 1`, `b = √2`, `x = 1/2`).
pub fn derived_quantities(alpha: f64) -> Result<(f64, f64, f64), GreedyError> {
    if !(alpha > std::f64::consts::FRAC_PI_4 && alpha <= std::f64::consts::FRAC_PI_2) {
        return Err(GreedyError::AlphaOutOfRange(alpha));
    }
    let (sin, cos) = alpha.sin_cos();
    let a = 1.0 / sin;
    let b = (1.0 + sin * sin - 2.0 * sin * cos).sqrt() / sin;
    let x = (1.0 - cos / sin) / 2.0;
    Ok((a, b, x))
}

/// The limiting detour ratio forced on the exterior pair of
/// [`parallelogram_six`] as ε → 0: `min(1 + a, 2x + b)`, the shorter of the
/// route around the slanted side and the route across the short diagonal.
pub fn greedy_bound(alpha: f64) -> Result<f64, GreedyError> {
    let (a, b, x) = derived_quantities(alpha)?;
    Ok((1.0 + a).min(2.0 * x + b))
}

/// Maximizes [`greedy_bound`] over α ∈ (π/4, π/2) to within `tol` on α.
///
/// The bound is the minimum of a strictly decreasing branch (`1 + a`) and a
/// strictly increasing branch (`2x + b`), so its maximum sits where the two
/// branches cross; bisection on their difference finds it. Returns
/// `(alpha_star, greedy_bound(alpha_star))`, with `alpha_star ≈ 1.3416` and
/// value `≈ 2.0268`.
pub fn maximize_greedy_bound(tol: f64) -> Result<(f64, f64), GreedyError> {
    if !(tol > 0.0) {
        return Err(GreedyError::BadTolerance(tol));
    }
    let gap = |alpha: f64| -> f64 {
        let (a, b, x) = derived_quantities(alpha).expect("alpha stays inside the bracket");
        (1.0 + a) - (2.0 * x + b)
    };
    let mut lo = std::f64::consts::FRAC_PI_4 + 1e-9;
    let mut hi = std::f64::consts::FRAC_PI_2 - 1e-9;
    debug_assert!(gap(lo) > 0.0 && gap(hi) < 0.0);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if gap(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let alpha_star = 0.5 * (lo + hi);
    Ok((alpha_star, greedy_bound(alpha_star)?))
}

/// The six-point lower-bound family: a parallelogram `V` with horizontal
/// unit sides, unit height, and angle `alpha`, plus two exterior points on
/// the vertical line through the center of `V`, `epsilon` below the lower
/// side and `epsilon` above the upper side.
///
/// Indexing: `p0` = bottom exterior point, `p1 = (0,0)`, `p2 = (1,0)` (lower
/// side), `p3` = top exterior point, `p4 = (cot α, 1)`, `p5 = (cot α + 1, 1)`
/// (upper side). `p0` and `p3` share their x-coordinate exactly.
pub fn parallelogram_six(params: GreedyParams) -> PointSet {
    let (sin, cos) = params.alpha.sin_cos();
    let c = cos / sin;
    let center_x = (1.0 + c) / 2.0;
    let eps = params.epsilon;
    PointSet::new(vec![
        Point::new(center_x, -eps),
        Point::new(0.0, 0.0),
        Point::new(1.0, 0.0),
        Point::new(center_x, 1.0 + eps),
        Point::new(c, 1.0),
        Point::new(c + 1.0, 1.0),
    ])
    .expect("parallelogram points are distinct")
    .with_label("parallelogram6")
}

/// One trial of the random experiment: greedy stretch of `n` uniform points
/// in the unit square.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub n: usize,
    pub trial: usize,
    /// The derived per-trial RNG seed (reproducible in isolation).
    pub seed: u64,
    pub stretch: f64,
    pub witness_pair: (usize, usize),
}

/// Aggregate view of an experiment run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSummary {
    pub max_stretch: f64,
    /// `(n, trial)` of the record attaining `max_stretch`.
    pub argmax: (usize, usize),
    /// Counts of records per stretch bin: bin `k` covers
    /// `[1 + k·bin_width, 1 + (k+1)·bin_width)`.
    pub histogram: Vec<u64>,
    pub bin_width: f64,
    /// Generator recorded for reproducibility.
    pub rng_name: &'static str,
    pub base_seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub records: Vec<ExperimentRecord>,
    pub summary: ExperimentSummary,
}

impl ExperimentResult {
    /// CSV with a reproducibility comment, a header, and one row per record:
    /// `n,trial,seed,stretch,wi,wj`.
    pub fn records_to_csv(&self) -> String {
        let mut out = format!(
            "# rng={} base_seed={}\nn,trial,seed,stretch,wi,wj\n",
            self.summary.rng_name, self.summary.base_seed
        );
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{:?},{},{}\n",
                r.n, r.trial, r.seed, r.stretch, r.witness_pair.0, r.witness_pair.1
            ));
        }
        out
    }
}

const HISTOGRAM_BIN_WIDTH: f64 = 0.05;

/// SplitMix64 step; used to derive independent per-trial seeds from the base
/// seed without correlations between (n, trial) cells.
fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

fn trial_seed(base_seed: u64, n: usize, trial: usize) -> u64 {
    splitmix64(splitmix64(base_seed ^ (n as u64)) ^ (trial as u64))
}

/// Samples `n` points uniformly in the unit square. The astronomically rare
/// near-coincident draw is rejected and resampled, keeping the stream
/// deterministic.
fn sample_unit_square(rng: &mut ChaCha8Rng, n: usize) -> PointSet {
    loop {
        let points = (0..n)
            .map(|_| Point::new(rng.random::<f64>(), rng.random::<f64>()))
            .collect();
        if let Ok(set) = PointSet::new(points) {
            return set;
        }
    }
}

/// Runs the greedy-stretch experiment: for every `n` in `n_min..=n_max` and
/// every trial, sample `n` uniform points in the unit square (seeded and
/// reproducible), build the greedy triangulation, and record its stretch
/// factor. Trials run in parallel; records are ordered by `(n, trial)` and
/// identical across worker counts.
pub fn greedy_stretch_experiment(
    n_min: usize,
    n_max: usize,
    trials: usize,
    seed: u64,
) -> Result<ExperimentResult, GreedyError> {
    if n_min < 4 || n_min > n_max {
        return Err(GreedyError::BadRange { n_min, n_max });
    }
    if trials == 0 {
        return Err(GreedyError::NoTrials);
    }
    let tasks: Vec<(usize, usize)> = (n_min..=n_max)
        .flat_map(|n| (0..trials).map(move |t| (n, t)))
        .collect();
    let records: Vec<ExperimentRecord> = tasks
        .par_iter()
        .map(|&(n, trial)| {
            let trial_seed = trial_seed(seed, n, trial);
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
            let points = sample_unit_square(&mut rng, n);
            let graph = greedy_triangulation(&points).expect("n >= 4");
            let report = graph.stretch_factor().expect("n >= 4");
            ExperimentRecord {
                n,
                trial,
                seed: trial_seed,
                stretch: report.stretch,
                witness_pair: report.witness_pair.expect("n >= 2 has a witness"),
            }
        })
        .collect();

    let mut max_stretch = f64::NEG_INFINITY;
    let mut argmax = (0, 0);
    for r in &records {
        if r.stretch > max_stretch {
            max_stretch = r.stretch;
            argmax = (r.n, r.trial);
        }
    }
    let bins = ((max_stretch - 1.0) / HISTOGRAM_BIN_WIDTH).floor() as usize + 1;
    let mut histogram = vec![0u64; bins];
    for r in &records {
        let k = (((r.stretch - 1.0) / HISTOGRAM_BIN_WIDTH).floor() as usize).min(bins - 1);
        histogram[k] += 1;
    }
    Ok(ExperimentResult {
        records,
        summary: ExperimentSummary {
            max_stretch,
            argmax,
            histogram,
            bin_width: HISTOGRAM_BIN_WIDTH,
            rng_name: "chacha8+splitmix64",
            base_seed: seed,
        },
    })
}

/// Number of strict convex-hull vertices of `subset` (indices into `ps`);
/// the subset is in convex position iff every point is a strict hull vertex.
fn in_convex_position(ps: &[Point], subset: &[usize]) -> bool {
    let k = subset.len();
    if k < 3 {
        return false;
    }
    // Monotone chain with strict turns: collinear middle points are not
    // hull vertices, so any collinear triple disqualifies the subset.
    let mut order: Vec<usize> = subset.to_vec();
    order.sort_unstable_by(|&i, &j| {
        ps[i]
            .x
            .partial_cmp(&ps[j].x)
            .expect("coordinates are finite")
            .then(ps[i].y.partial_cmp(&ps[j].y).expect("coordinates are finite"))
    });
    let mut hull_size = 0usize;
    for chain_order in [&order[..], &order.iter().rev().copied().collect::<Vec<_>>()[..]] {
        let mut chain: Vec<usize> = Vec::new();
        for &i in chain_order {
            while chain.len() >= 2 {
                let a = chain[chain.len() - 2];
                let b = chain[chain.len() - 1];
                if orientation(&ps[a], &ps[b], &ps[i]) == Orientation::CounterClockwise {
                    break;
                }
                chain.pop();
            }
            chain.push(i);
        }
        hull_size += chain.len() - 1;
    }
    hull_size == k
}

/// Scans every subset of at least 3 points in convex position and returns
/// the maximum greedy-triangulation stretch over them, together with the
/// subset attaining it (first such subset in bitmask order on ties).
///
/// Point sets larger than [`SUBSET_SCAN_MAX`] are rejected — the scan is
/// exponential.
pub fn convex_subset_greedy_max(points: &PointSet) -> Result<(f64, Vec<usize>), GreedyError> {
    let n = points.len();
    if n < 3 {
        return Err(GreedyError::TooFewPoints(n));
    }
    if n > SUBSET_SCAN_MAX {
        return Err(GreedyError::TooManyPoints(n));
    }
    let ps = points.points();
    let mut best = f64::NEG_INFINITY;
    let mut best_subset: Vec<usize> = Vec::new();
    for mask in 1u32..(1 << n) {
        if mask.count_ones() < 3 {
            continue;
        }
        let subset: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        if !in_convex_position(ps, &subset) {
            continue;
        }
        let sub_points = PointSet::new(subset.iter().map(|&i| ps[i]).collect())
            .expect("subset of a valid point set is valid");
        let graph = greedy_triangulation(&sub_points).expect("subset has >= 3 points");
        let stretch = graph.stretch_factor().expect("subset has >= 2 points").stretch;
        if stretch > best {
            best = stretch;
            best_subset = subset;
        }
    }
    debug_assert!(best.is_finite(), "every 3-point non-collinear subset is convex");
    Ok((best, best_subset))
}
