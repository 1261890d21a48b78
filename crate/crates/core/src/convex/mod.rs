//! Dilation of triangulations of the regular n-gon.
//!
//! Everything in this module works in "chord space": the vertices of the
//! regular n-gon are the indices `0..n`, and the distance between vertices
//! `i` and `j` is the chord length `2 sin(mu * pi / n)` where
//! `mu = min(|i - j|, n - |i - j|)`. Working with the chord table instead of
//! coordinates keeps evaluations cheap and makes results independent of the
//! polygon's placement in the plane.
//!
//! The exact minimizer ([`min_dilation_convex`]) enumerates all C(n-2)
//! (Catalan) triangulations by recursive apex decomposition and supports a
//! certified pruning rule: once the chord cut off by an ear of the recursion
//! is fully triangulated, distances between vertices inside that ear can
//! never improve in any completion, so a partial stretch above the incumbent
//! kills the whole subtree without loss of optimality.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::geometry::regular_ngon;
use crate::graph::{DilationReport, GeometricGraph};

mod search;

pub use search::{
    min_dilation_convex, EnumerationResult, MinDilationOptions, STRETCH_DISTINCTION_MARGIN,
};

/// Catalan number C(k). Exact: the recurrence C_k = C_{k-1}(4k-2)/(k+1)
/// stays integral at every step and fits u64 up to k = 35, far beyond any
/// polygon size this crate can enumerate.
pub fn catalan(k: usize) -> u64 {
    let mut c: u128 = 1;
    for i in 1..=k as u128 {
        c = c * (4 * i - 2) / (i + 1);
    }
    c as u64
}

/// Errors for chord arithmetic and triangulation handling.
#[derive(Debug, Error, PartialEq)]
pub enum ConvexError {
    #[error("need at least {min} vertices, got {n}")]
    TooFewVertices { n: usize, min: usize },
    #[error("vertex index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("hull distance between a vertex and itself is undefined")]
    SameVertex { index: usize },
    #[error("chord profile needs at least one hop")]
    EmptyProfile,
    #[error("hop arc {hop} out of range 1..={max} for n = {n}")]
    HopOutOfRange { hop: usize, max: usize, n: usize },
    #[error("denominator arc {lambda} out of range 1..={max} for n = {n}")]
    LambdaOutOfRange { lambda: usize, max: usize, n: usize },
    #[error("a triangulation of an {n}-gon has {expected} diagonals, got {got}")]
    WrongDiagonalCount { n: usize, expected: usize, got: usize },
    #[error("({i}, {j}) is not a diagonal of the {n}-gon")]
    NotADiagonal { i: usize, j: usize, n: usize },
    #[error("duplicate diagonal ({i}, {j})")]
    DuplicateDiagonal { i: usize, j: usize },
    #[error("diagonals ({0}, {1}) and ({2}, {3}) cross", .a.0, .a.1, .b.0, .b.1)]
    CrossingDiagonals { a: (usize, usize), b: (usize, usize) },
    #[error("worker count must be at least 1")]
    NoWorkers,
    #[error("budget must be at least 1")]
    NoBudget,
}

/// Memoized chord lengths of the regular n-gon with circumradius 1.
///
/// `chord(i, j) = 2 sin(mu(i, j) pi / n)`. The table is tiny (n/2 + 1
/// entries) but sits on every hot path, so it is built once per computation.
#[derive(Debug, Clone)]
pub(crate) struct ChordTable {
    n: usize,
    by_arc: Vec<f64>,
    /// Pairwise chord lengths (n x n), for branch-free lookups on hot paths.
    matrix: Vec<f64>,
    /// Pairwise reciprocal chord lengths; infinity on the diagonal.
    inv_matrix: Vec<f64>,
}

impl ChordTable {
    pub(crate) fn new(n: usize) -> Self {
        debug_assert!(n >= 3);
        let mut by_arc = Vec::with_capacity(n / 2 + 1);
        for m in 0..=n / 2 {
            by_arc.push(2.0 * (m as f64 * PI / n as f64).sin());
        }
        let mut matrix = vec![0.0; n * n];
        let mut inv_matrix = vec![f64::INFINITY; n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let d = i.abs_diff(j);
                    let chord = by_arc[d.min(n - d)];
                    matrix[i * n + j] = chord;
                    inv_matrix[i * n + j] = 1.0 / chord;
                }
            }
        }
        ChordTable { n, by_arc, matrix, inv_matrix }
    }

    #[inline]
    pub(crate) fn arc(&self, i: usize, j: usize) -> usize {
        let d = i.abs_diff(j);
        d.min(self.n - d)
    }

    #[inline]
    pub(crate) fn chord(&self, i: usize, j: usize) -> f64 {
        self.matrix[i * self.n + j]
    }

    /// Chord lengths from vertex `i` to every vertex, as a slice.
    #[inline]
    pub(crate) fn row(&self, i: usize) -> &[f64] {
        &self.matrix[i * self.n..(i + 1) * self.n]
    }
}

/// Number of hull edges on the shorter boundary arc between vertices `i` and
/// `j` of the regular n-gon.
pub fn hull_length(n: usize, i: usize, j: usize) -> Result<usize, ConvexError> {
    if n < 3 {
        return Err(ConvexError::TooFewVertices { n, min: 3 });
    }
    for index in [i, j] {
        if index >= n {
            return Err(ConvexError::IndexOutOfRange { index, n });
        }
    }
    if i == j {
        return Err(ConvexError::SameVertex { index: i });
    }
    let d = i.abs_diff(j);
    Ok(d.min(n - d))
}

/// A candidate shortest path in the n-gon described combinatorially: the
/// path's edges span boundary arcs `hops`, and it connects a vertex pair
/// spanning arc `lambda`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChordProfile {
    pub n: usize,
    pub lambda: usize,
    pub hops: Vec<usize>,
}

impl ChordProfile {
    pub fn new(n: usize, lambda: usize, hops: Vec<usize>) -> Self {
        ChordProfile { n, lambda, hops }
    }
}

/// Ratio of a hop-sum of chords to a single chord:
/// `sum_h 2 sin(hop_h pi / n) / (2 sin(lambda pi / n))`.
///
/// This is the dilation attained by a path whose edges span the given arcs,
/// measured against the chord spanning `lambda`. The value only depends on
/// the multiset of hops, not their order.
pub fn chord_ratio(profile: &ChordProfile) -> Result<f64, ConvexError> {
    let n = profile.n;
    if n < 3 {
        return Err(ConvexError::TooFewVertices { n, min: 3 });
    }
    if profile.hops.is_empty() {
        return Err(ConvexError::EmptyProfile);
    }
    let max = n / 2;
    if profile.lambda == 0 || profile.lambda > max {
        return Err(ConvexError::LambdaOutOfRange { lambda: profile.lambda, max, n });
    }
    let table = ChordTable::new(n);
    let mut sum = 0.0;
    for &hop in &profile.hops {
        if hop == 0 || hop > max {
            return Err(ConvexError::HopOutOfRange { hop, max, n });
        }
        sum += table.by_arc[hop];
    }
    Ok(sum / table.by_arc[profile.lambda])
}

/// A triangulation of the convex position point set `0..n` (the regular
/// n-gon), stored as its `n - 3` diagonals.
///
/// Construction validates everything: diagonal count, index ranges,
/// non-adjacency, distinctness and pairwise non-crossing. A value of this
/// type is therefore always a genuine triangulation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexTriangulation {
    n: usize,
    diagonals: Vec<(usize, usize)>,
}

impl ConvexTriangulation {
    /// Builds a triangulation from its diagonal set. Pairs may be given in
    /// any order and orientation; they are normalized to `i < j` and sorted.
    pub fn new(n: usize, diagonals: &[(usize, usize)]) -> Result<Self, ConvexError> {
        if n < 3 {
            return Err(ConvexError::TooFewVertices { n, min: 3 });
        }
        let expected = n - 3;
        if diagonals.len() != expected {
            return Err(ConvexError::WrongDiagonalCount { n, expected, got: diagonals.len() });
        }
        let mut normalized = Vec::with_capacity(diagonals.len());
        for &(a, b) in diagonals {
            for index in [a, b] {
                if index >= n {
                    return Err(ConvexError::IndexOutOfRange { index, n });
                }
            }
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            // A diagonal must skip at least one vertex on both arcs.
            if i == j || j - i < 2 || (i == 0 && j == n - 1) {
                return Err(ConvexError::NotADiagonal { i: a, j: b, n });
            }
            normalized.push((i, j));
        }
        normalized.sort_unstable();
        for w in normalized.windows(2) {
            if w[0] == w[1] {
                return Err(ConvexError::DuplicateDiagonal { i: w[0].0, j: w[0].1 });
            }
        }
        for (k, &(a, b)) in normalized.iter().enumerate() {
            for &(c, d) in &normalized[k + 1..] {
                if a == c || a == d || b == c || b == d {
                    continue;
                }
                let c_inside = a < c && c < b;
                let d_inside = a < d && d < b;
                if c_inside != d_inside {
                    return Err(ConvexError::CrossingDiagonals { a: (a, b), b: (c, d) });
                }
            }
        }
        Ok(ConvexTriangulation { n, diagonals: normalized })
    }

    /// Internal constructor for diagonal sets already known to be valid
    /// (produced by the enumeration recursion). Normalizes and sorts only.
    pub(crate) fn from_trusted(n: usize, diagonals: &[(usize, usize)]) -> Self {
        let mut normalized: Vec<(usize, usize)> = diagonals
            .iter()
            .map(|&(a, b)| if a < b { (a, b) } else { (b, a) })
            .collect();
        normalized.sort_unstable();
        debug_assert_eq!(normalized.len(), n.saturating_sub(3));
        ConvexTriangulation { n, diagonals: normalized }
    }

    /// The fan triangulation: every diagonal incident to `apex`.
    pub fn fan(n: usize, apex: usize) -> Result<Self, ConvexError> {
        if n < 3 {
            return Err(ConvexError::TooFewVertices { n, min: 3 });
        }
        if apex >= n {
            return Err(ConvexError::IndexOutOfRange { index: apex, n });
        }
        let diagonals: Vec<(usize, usize)> = (0..n)
            .filter(|&j| {
                let d = apex.abs_diff(j);
                d >= 2 && n - d >= 2
            })
            .map(|j| (apex, j))
            .collect();
        Self::new(n, &diagonals)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Diagonals, normalized `i < j` and lexicographically sorted.
    pub fn diagonals(&self) -> &[(usize, usize)] {
        &self.diagonals
    }

    /// All edges: the `n` hull edges followed by the diagonals.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges: Vec<(usize, usize)> = (0..self.n)
            .map(|i| if i + 1 < self.n { (i, i + 1) } else { (0, self.n - 1) })
            .collect();
        edges.extend_from_slice(&self.diagonals);
        edges
    }

    /// Realizes the triangulation as a geometric graph on the regular n-gon
    /// with the given circumradius.
    pub fn realize(&self, circumradius: f64) -> Result<GeometricGraph, crate::graph::GraphError> {
        let points = regular_ngon(self.n, circumradius).expect("valid n-gon parameters");
        GeometricGraph::new(points, self.edges())
    }

    fn adjacency_matrix(&self) -> Vec<bool> {
        let n = self.n;
        let mut adj = vec![false; n * n];
        for (i, j) in self.edges() {
            adj[i * n + j] = true;
            adj[j * n + i] = true;
        }
        adj
    }
}

impl fmt::Display for ConvexTriangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}{:?}", self.n, self.diagonals)
    }
}

/// Entry in the Dijkstra frontier; ordering reversed for a min-heap, with
/// the vertex index as tiebreaker so traversal order is fully determined.
#[derive(PartialEq)]
struct Frontier {
    cost: f64,
    vertex: usize,
}

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .partial_cmp(&self.cost)
            .expect("chord path costs are finite")
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dijkstra over chord weights. Returns distances and predecessors; among
/// equal-cost shortest paths the one with the lexicographically smaller
/// predecessor sequence wins, matching the geometric graph module.
fn chord_dijkstra(
    table: &ChordTable,
    adjacency: &[Vec<usize>],
    source: usize,
) -> (Vec<f64>, Vec<usize>) {
    let n = adjacency.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut pred = vec![usize::MAX; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Frontier { cost: 0.0, vertex: source });
    while let Some(Frontier { cost, vertex }) = heap.pop() {
        if done[vertex] {
            continue;
        }
        done[vertex] = true;
        for &next in &adjacency[vertex] {
            let candidate = cost + table.chord(vertex, next);
            if candidate < dist[next] {
                dist[next] = candidate;
                pred[next] = vertex;
                heap.push(Frontier { cost: candidate, vertex: next });
            } else if candidate == dist[next] && vertex < pred[next] {
                pred[next] = vertex;
            }
        }
    }
    (dist, pred)
}

/// Exact stretch factor of a triangulation of the regular n-gon, with a
/// witness pair and witness path.
///
/// Computed entirely in chord space with one Dijkstra per source. Among
/// pairs attaining the maximum the lexicographically first `(i, j)` wins.
pub fn triangulation_stretch(t: &ConvexTriangulation) -> DilationReport {
    let n = t.n;
    let table = ChordTable::new(n);
    let mut adjacency = vec![Vec::new(); n];
    for (i, j) in t.edges() {
        adjacency[i].push(j);
        adjacency[j].push(i);
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }
    // Every pair realizes ratio >= 1 (the hull edge pairs realize exactly 1),
    // so the maximum below is always attained by a genuine witness.
    let mut best = 0.0_f64;
    let mut witness = (0, 0);
    let mut witness_pred: Vec<usize> = Vec::new();
    for u in 0..n {
        let (dist, pred) = chord_dijkstra(&table, &adjacency, u);
        for v in u + 1..n {
            let ratio = dist[v] / table.chord(u, v);
            if ratio > best {
                best = ratio;
                witness = (u, v);
                witness_pred = pred.clone();
            }
        }
    }
    let mut path = vec![witness.1];
    let mut cursor = witness.1;
    while cursor != witness.0 {
        cursor = witness_pred[cursor];
        path.push(cursor);
    }
    path.reverse();
    DilationReport {
        stretch: best,
        witness_pair: Some(witness),
        witness_path: Some(path),
    }
}

/// Longest chord used by a triangulation, measured in hull-arc units: the
/// maximum of `hull_length` over all edges. Hull edges contribute 1, so the
/// result for any triangulation with `n >= 3` is at least 1.
pub fn longest_chord(t: &ConvexTriangulation) -> usize {
    let table = ChordTable::new(t.n);
    t.diagonals
        .iter()
        .map(|&(i, j)| table.arc(i, j))
        .max()
        .unwrap_or(0)
        .max(1)
}

/// Enumerates every triangulation of the regular n-gon exactly once,
/// invoking the visitor on each, and returns the count (the Catalan number
/// C(n-2)).
///
/// The order is the recursive apex order: the triangle on the hull edge
/// `(0, n-1)` picks its apex `m = 1, 2, ...` in increasing order, then the
/// sub-polygons `[0..m]` and `[m..n-1]` are triangulated recursively (left
/// side varying fastest).
pub fn enumerate_triangulations<F>(n: usize, mut visitor: F) -> Result<u64, ConvexError>
where
    F: FnMut(&ConvexTriangulation),
{
    if n < 3 {
        return Err(ConvexError::TooFewVertices { n, min: 3 });
    }
    let mut diagonals: Vec<(usize, usize)> = Vec::with_capacity(n.saturating_sub(3));
    let mut intervals: Vec<(usize, usize)> = Vec::new();
    if n >= 4 {
        intervals.push((0, n - 1));
    }
    let mut count = 0u64;
    enumerate_rec(n, &mut intervals, &mut diagonals, &mut count, &mut visitor);
    Ok(count)
}

fn enumerate_rec<F>(
    n: usize,
    intervals: &mut Vec<(usize, usize)>,
    diagonals: &mut Vec<(usize, usize)>,
    count: &mut u64,
    visitor: &mut F,
) where
    F: FnMut(&ConvexTriangulation),
{
    let Some((lo, hi)) = intervals.pop() else {
        *count += 1;
        visitor(&ConvexTriangulation::from_trusted(n, diagonals));
        return;
    };
    for m in lo + 1..hi {
        let mut pushed_diagonals = 0;
        // The chord (lo, m) is a diagonal unless it is a hull edge.
        if m - lo >= 2 && !(lo == 0 && m == n - 1) {
            diagonals.push((lo, m));
            pushed_diagonals += 1;
        }
        if hi - m >= 2 && !(m == 0 && hi == n - 1) {
            diagonals.push((m, hi));
            pushed_diagonals += 1;
        }
        let depth = intervals.len();
        if hi - m >= 2 {
            intervals.push((m, hi));
        }
        if m - lo >= 2 {
            intervals.push((lo, m));
        }
        enumerate_rec(n, intervals, diagonals, count, visitor);
        intervals.truncate(depth);
        for _ in 0..pushed_diagonals {
            diagonals.pop();
        }
    }
    intervals.push((lo, hi));
}

/// Uniformly random triangulation (uniform over the apex-decomposition
/// choices, not over triangulations) with a fixed seed. The same seed always
/// yields the same triangulation.
pub fn random_triangulation(n: usize, seed: u64) -> Result<ConvexTriangulation, ConvexError> {
    if n < 3 {
        return Err(ConvexError::TooFewVertices { n, min: 3 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut diagonals = Vec::with_capacity(n.saturating_sub(3));
    let mut stack = Vec::new();
    if n >= 4 {
        stack.push((0usize, n - 1));
    }
    while let Some((lo, hi)) = stack.pop() {
        let m = rng.random_range(lo + 1..hi);
        if m - lo >= 2 && !(lo == 0 && m == n - 1) {
            diagonals.push((lo, m));
        }
        if hi - m >= 2 && !(m == 0 && hi == n - 1) {
            diagonals.push((m, hi));
        }
        if m - lo >= 2 {
            stack.push((lo, m));
        }
        if hi - m >= 2 {
            stack.push((m, hi));
        }
    }
    Ok(ConvexTriangulation::from_trusted(n, &diagonals))
}

/// Result of a local-search run.
#[derive(Debug, Clone)]
pub struct LocalSearchResult {
    /// Best stretch found within the budget.
    pub best_stretch: f64,
    /// Triangulation attaining it.
    pub best: ConvexTriangulation,
    /// Number of stretch evaluations actually spent.
    pub evaluations: u64,
    /// Number of random restarts performed (the initial start counts as 1).
    pub restarts: u64,
}

/// Heuristic minimum-dilation search by edge-flip descent with random
/// restarts.
///
/// Starts from a seeded random triangulation and repeatedly flips the
/// diagonal whose flip best reduces the stretch (steepest descent). On a
/// local optimum it restarts from a fresh random triangulation. Every
/// stretch evaluation of a candidate flip counts against `budget`; the
/// search stops when the budget is exhausted. Fully deterministic for a
/// fixed `(n, budget, seed)`.
pub fn local_search_min_dilation(
    n: usize,
    budget: u64,
    seed: u64,
) -> Result<LocalSearchResult, ConvexError> {
    if n < 4 {
        return Err(ConvexError::TooFewVertices { n, min: 4 });
    }
    if budget == 0 {
        return Err(ConvexError::NoBudget);
    }
    let table = ChordTable::new(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut scratch = search::EvalScratch::new(n);

    let mut best_value = f64::INFINITY;
    let mut best_diagonals: Vec<(usize, usize)> = Vec::new();
    let mut evaluations = 0u64;
    let mut restarts = 0u64;

    'search: loop {
        restarts += 1;
        let start = random_triangulation(n, rng.random())?;
        let mut adj = start.adjacency_matrix();
        let mut diagonals = start.diagonals.clone();
        let mut current = search::evaluate_full(&table, &adj, &mut scratch);
        evaluations += 1;
        if current < best_value {
            best_value = current;
            best_diagonals = diagonals.clone();
        }
        if evaluations >= budget {
            break 'search;
        }

        loop {
            // Steepest-descent step: try flipping every diagonal.
            let mut step_best = current;
            let mut step_flip: Option<(usize, (usize, usize))> = None;
            for k in 0..diagonals.len() {
                let (a, b) = diagonals[k];
                let (c, d) = flip_partner(n, &adj, a, b);
                apply_flip(n, &mut adj, (a, b), (c, d));
                let value = search::evaluate_bounded(&table, &adj, &mut scratch, step_best);
                apply_flip(n, &mut adj, (c, d), (a, b));
                evaluations += 1;
                if value < step_best {
                    step_best = value;
                    step_flip = Some((k, (c, d)));
                }
                if evaluations >= budget {
                    if let Some((k, new_diag)) = step_flip {
                        let old = diagonals[k];
                        apply_flip(n, &mut adj, old, new_diag);
                        diagonals[k] = order(new_diag);
                        if step_best < best_value {
                            best_value = step_best;
                            best_diagonals = diagonals.clone();
                        }
                    }
                    break 'search;
                }
            }
            match step_flip {
                Some((k, new_diag)) => {
                    let old = diagonals[k];
                    apply_flip(n, &mut adj, old, new_diag);
                    diagonals[k] = order(new_diag);
                    current = step_best;
                    if current < best_value {
                        best_value = current;
                        best_diagonals = diagonals.clone();
                    }
                }
                None => break, // local optimum; restart
            }
        }
    }

    Ok(LocalSearchResult {
        best_stretch: best_value,
        best: ConvexTriangulation::from_trusted(n, &best_diagonals),
        evaluations,
        restarts,
    })
}

fn order((a, b): (usize, usize)) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// The new diagonal obtained by flipping `(a, b)`: the two triangles of the
/// triangulation sharing `(a, b)` have apexes `c` and `d`, which are exactly
/// the two vertices adjacent to both `a` and `b`.
fn flip_partner(n: usize, adj: &[bool], a: usize, b: usize) -> (usize, usize) {
    let mut apexes = [usize::MAX; 2];
    let mut found = 0;
    for v in 0..n {
        if v != a && v != b && adj[a * n + v] && adj[b * n + v] {
            // In a triangulation the diagonal (a, b) separates exactly two
            // triangle apexes, one on each side.
            let side = {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                (lo < v && v < hi) as usize
            };
            apexes[side] = v;
            found += 1;
        }
    }
    debug_assert_eq!(found, 2, "diagonal ({a}, {b}) must bound two triangles");
    order((apexes[0], apexes[1]))
}

fn apply_flip(n: usize, adj: &mut [bool], old: (usize, usize), new: (usize, usize)) {
    adj[old.0 * n + old.1] = false;
    adj[old.1 * n + old.0] = false;
    adj[new.0 * n + new.1] = true;
    adj[new.1 * n + new.0] = true;
}
