//! Exhaustive minimum-dilation search over the triangulations of the
//! regular n-gon.
//!
//! The search tree is the recursive apex decomposition: the triangle resting
//! on the hull edge `(0, n-1)` chooses its apex `m`, splitting the polygon
//! into the sub-intervals `[0..m]` and `[m..n-1]`, each triangulated
//! recursively. Leaves of this tree are exactly the C(n-2) triangulations,
//! each reached once.
//!
//! Pruning rests on one geometric fact. Call an interval `[lo..hi]` a
//! *pocket* once all its internal chords are fixed and its base chord
//! `(lo, hi)` is an edge. Any path between two pocket vertices in any
//! completion of the partial triangulation decomposes into segments inside
//! the pocket and excursions that leave through `lo` and re-enter through
//! `hi` (or vice versa); every such excursion is at least as long as the
//! straight chord `(lo, hi)`, which the pocket already contains as an edge.
//! Shortest distances between pocket vertices are therefore *final*: no
//! completion can improve them. The maximum distance/chord ratio inside a
//! completed pocket is thus an exact lower bound on the stretch of every
//! completion, and a subtree whose pocket already beats the incumbent can be
//! discarded without ever losing a minimizer. Because a minimizer is never
//! discarded, pruned and unpruned runs return bit-for-bit identical minima.
//!
//! Parallel runs split the top of the search tree into tasks, explore tasks
//! under a shared incumbent (which only affects how *much* is pruned, never
//! *what* survives), and combine task results in fixed task order, so any
//! worker count produces the identical result.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use rayon::prelude::*;

use super::{ChordTable, ConvexError, ConvexTriangulation};

/// Two stretch values within this margin of each other are considered the
/// same value for second-best reporting and threshold tests. The interesting
/// gaps (e.g. between the best and second-best stretch over the 23-gon) are
/// several orders of magnitude wider.
pub const STRETCH_DISTINCTION_MARGIN: f64 = 1e-9;

/// Options for [`min_dilation_convex`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinDilationOptions {
    /// Enable certified subtree pruning. Changes only the work done, never
    /// the reported minimum or argmin.
    pub prune: bool,
    /// Number of worker threads (must be >= 1). Any value yields identical
    /// results.
    pub workers: usize,
    /// If set, the result additionally reports whether any triangulation has
    /// stretch strictly below this value (by more than the comparison
    /// margin).
    pub threshold: Option<f64>,
}

impl Default for MinDilationOptions {
    fn default() -> Self {
        MinDilationOptions { prune: false, workers: 1, threshold: None }
    }
}

/// Outcome of an exhaustive enumeration.
#[derive(Debug, Clone)]
pub struct EnumerationResult {
    /// Triangulations fully evaluated. Without pruning this is exactly the
    /// Catalan number C(n-2); with pruning it is the number of leaves that
    /// survived to evaluation (informational: under parallel pruning the
    /// exact value depends on incumbent timing).
    pub count: u64,
    /// Smallest stretch over all triangulations. Deterministic bit-for-bit
    /// across pruning choices and worker counts.
    pub min_stretch: f64,
    /// A triangulation attaining `min_stretch`; among bitwise-equal minima
    /// the lexicographically smallest sorted diagonal set wins, so this too
    /// is deterministic.
    pub argmin: ConvexTriangulation,
    /// Vertex pair of `argmin` realizing its stretch.
    pub witness_pair: (usize, usize),
    /// Subtrees (including single leaves) discarded by the pruning bound.
    pub pruned_subtrees: u64,
    /// Smallest stretch among triangulations whose stretch is distinct from
    /// (more than the margin above) `min_stretch`, if any was observed.
    pub second_best: Option<f64>,
    /// For `threshold = Some(t)`: whether some triangulation has stretch
    /// below `t - margin`.
    pub below_threshold: Option<bool>,
}

/// Scratch buffers reused across evaluations.
pub(crate) struct EvalScratch {
    dist: Vec<f64>,
    row: Vec<f64>,
}

impl EvalScratch {
    pub(crate) fn new(n: usize) -> Self {
        EvalScratch { dist: vec![0.0; n * n], row: vec![0.0; n] }
    }
}

struct PocketEval {
    max_ratio: f64,
    witness: (usize, usize),
    exceeded: bool,
}

/// Certified stretch lower bound for the interval `[lo..hi]`, assuming all
/// its internal chords are fixed and `(lo, hi)` is an edge. Exact shortest
/// distances inside the interval come from Floyd-Warshall over the chord
/// table (bit-for-bit reproducible for a fixed adjacency); the maximum runs
/// over
///
/// * pairs inside the interval, whose distances are final in every
///   completion (paths leaving the interval must re-enter through `lo` or
///   `hi` and each excursion costs at least the chord `(lo, hi)`, which is
///   already an edge), and
/// * pairs of one interior vertex `u` and one outside vertex `v`: every
///   path exits through `lo` or `hi`, so
///   `min(d(u,lo) + |lo,v|, d(u,hi) + |hi,v|)` underestimates every
///   completion.
///
/// For the full polygon (`lo = 0, hi = n-1`) the outside part is empty and
/// the interior maximum *is* the triangulation's exact stretch. Scanning
/// aborts as soon as some ratio exceeds `abort_above`; the returned
/// `max_ratio` is then just a value above the bound, not the true maximum.
fn evaluate_pocket(
    table: &ChordTable,
    adj: &[bool],
    scratch: &mut EvalScratch,
    lo: usize,
    hi: usize,
    abort_above: f64,
) -> PocketEval {
    let n = table.n;
    let k = hi - lo + 1;
    let dist = &mut scratch.dist[..k * k];
    for a in 0..k {
        let ga = lo + a;
        let adj_row = &adj[ga * n..(ga + 1) * n];
        let chord_row = table.row(ga);
        let dist_row = &mut dist[a * k..(a + 1) * k];
        for b in 0..k {
            let gb = lo + b;
            dist_row[b] = if adj_row[gb] { chord_row[gb] } else { f64::INFINITY };
        }
        dist_row[a] = 0.0;
    }
    let row = &mut scratch.row[..k];
    for mid in 0..k {
        row.copy_from_slice(&dist[mid * k..(mid + 1) * k]);
        for a in 0..k {
            let through = dist[a * k + mid];
            if !through.is_finite() {
                continue;
            }
            let dist_row = &mut dist[a * k..(a + 1) * k];
            for (d, &via) in dist_row.iter_mut().zip(row.iter()) {
                *d = d.min(through + via);
            }
        }
    }

    let mut max_ratio = 0.0_f64;
    let mut witness = (lo, lo + 1);
    for a in 0..k {
        let ga = lo + a;
        let inv_row = &table.inv_matrix[ga * n..(ga + 1) * n];
        for b in a + 1..k {
            let ratio = dist[a * k + b] * inv_row[lo + b];
            if ratio > max_ratio {
                max_ratio = ratio;
                witness = (ga, lo + b);
                if ratio > abort_above {
                    return PocketEval { max_ratio, witness, exceeded: true };
                }
            }
        }
    }
    // Interior-to-outside pairs. Outside vertices are hi+1..n and 0..lo;
    // for the full polygon this range is empty.
    for a in 1..k.saturating_sub(1) {
        let u = lo + a;
        let to_lo = dist[a * k];
        let to_hi = dist[a * k + k - 1];
        let lo_row = table.row(lo);
        let hi_row = table.row(hi);
        let inv_row = &table.inv_matrix[u * n..(u + 1) * n];
        let mut v = (hi + 1) % n;
        while v != lo {
            let detour = (to_lo + lo_row[v]).min(to_hi + hi_row[v]);
            let ratio = detour * inv_row[v];
            if ratio > max_ratio {
                max_ratio = ratio;
                witness = (u.min(v), u.max(v));
                if ratio > abort_above {
                    return PocketEval { max_ratio, witness, exceeded: true };
                }
            }
            v = (v + 1) % n;
        }
    }
    PocketEval { max_ratio, witness, exceeded: false }
}

/// Exact stretch of a full triangulation given as an adjacency matrix.
pub(crate) fn evaluate_full(table: &ChordTable, adj: &[bool], scratch: &mut EvalScratch) -> f64 {
    evaluate_pocket(table, adj, scratch, 0, table.n - 1, f64::INFINITY).max_ratio
}

/// Like [`evaluate_full`] but abandons the pair scan once the stretch is
/// known to exceed `bound`; the returned value is then only guaranteed to be
/// larger than `bound`. Callers that merely compare against `bound` get the
/// exact same accept/reject decision at lower cost.
pub(crate) fn evaluate_bounded(
    table: &ChordTable,
    adj: &[bool],
    scratch: &mut EvalScratch,
    bound: f64,
) -> f64 {
    evaluate_pocket(table, adj, scratch, 0, table.n - 1, bound).max_ratio
}

/// Incumbent stretch values shared by all workers. Tracks the best value and
/// the best value distinct from it; pruning compares against the latter so
/// that the reported second-best is itself deterministic.
struct SharedIncumbent {
    best_bits: AtomicU64,
    second_bits: AtomicU64,
    update: Mutex<()>,
}

impl SharedIncumbent {
    fn new() -> Self {
        SharedIncumbent {
            best_bits: AtomicU64::new(f64::INFINITY.to_bits()),
            second_bits: AtomicU64::new(f64::INFINITY.to_bits()),
            update: Mutex::new(()),
        }
    }

    /// Pruning bound: the incumbent second-best value. Stale reads are
    /// harmless (they can only under-prune).
    fn bound(&self) -> f64 {
        f64::from_bits(self.second_bits.load(Ordering::Relaxed))
    }

    fn second(&self) -> Option<f64> {
        let second = f64::from_bits(self.second_bits.load(Ordering::Relaxed));
        second.is_finite().then_some(second)
    }

    fn observe(&self, value: f64) {
        // Both incumbents only ever decrease, so a stale read that already
        // rules out an update is conclusive: no lock needed on the (vastly
        // dominant) no-op path.
        let best_peek = f64::from_bits(self.best_bits.load(Ordering::Relaxed));
        let second_peek = f64::from_bits(self.second_bits.load(Ordering::Relaxed));
        if value >= second_peek && value - best_peek > STRETCH_DISTINCTION_MARGIN {
            return;
        }
        let _guard = self.update.lock().expect("incumbent lock");
        let best = f64::from_bits(self.best_bits.load(Ordering::Relaxed));
        let second = f64::from_bits(self.second_bits.load(Ordering::Relaxed));
        if value < best - STRETCH_DISTINCTION_MARGIN {
            // New distinct best; the old best becomes the runner-up.
            self.second_bits.store(best.to_bits(), Ordering::Relaxed);
            self.best_bits.store(value.to_bits(), Ordering::Relaxed);
        } else if value < best {
            // Same value cluster as the best; keep the smaller representative.
            self.best_bits.store(value.to_bits(), Ordering::Relaxed);
        } else if value - best > STRETCH_DISTINCTION_MARGIN && value < second {
            self.second_bits.store(value.to_bits(), Ordering::Relaxed);
        }
    }
}

/// Work items of the explicit search agenda (a stack; the top is processed
/// first). `Split(lo, hi)` enumerates apex choices for the interval;
/// `Check(lo, hi)` fires once the interval is fully triangulated and applies
/// the pocket bound. The root check `Check(0, n-1)` doubles as the full leaf
/// evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Item {
    Split(usize, usize),
    Check(usize, usize),
}

/// Pushes the agenda items for splitting interval `(lo, hi)` at apex `m`,
/// in the order that makes the left sub-interval complete first. Pocket
/// checks are only worthwhile for intervals with at least one internal
/// vertex pair, i.e. a gap of 3 or more.
fn child_items(agenda: &mut Vec<Item>, lo: usize, m: usize, hi: usize, prune: bool) {
    if prune && hi - m >= 3 {
        agenda.push(Item::Check(m, hi));
    }
    if hi - m >= 2 {
        agenda.push(Item::Split(m, hi));
    }
    if prune && m - lo >= 3 {
        agenda.push(Item::Check(lo, m));
    }
    if m - lo >= 2 {
        agenda.push(Item::Split(lo, m));
    }
}

/// A partially expanded branch of the search tree, ready to run on any
/// worker: the remaining agenda plus the diagonals fixed so far.
#[derive(Debug, Clone)]
struct TaskState {
    agenda: Vec<Item>,
    diagonals: Vec<(usize, usize)>,
}

fn initial_agenda(n: usize) -> Vec<Item> {
    vec![Item::Check(0, n - 1), Item::Split(0, n - 1)]
}

/// Splits the top of the search tree into at least `target` tasks (where
/// possible) by breadth-first refinement. Children replace their parent in
/// place and in apex order, so the task list covers the leaves in exactly
/// the sequential enumeration order — the ordered merge over tasks then
/// reproduces the sequential result.
fn generate_tasks(n: usize, prune: bool, target: usize) -> Vec<TaskState> {
    let mut tasks = vec![TaskState { agenda: initial_agenda(n), diagonals: Vec::new() }];
    while tasks.len() < target {
        let mut next = Vec::with_capacity(tasks.len() * 4);
        let mut expanded = false;
        for task in &tasks {
            let Some(&Item::Split(lo, hi)) = task.agenda.last() else {
                next.push(task.clone());
                continue;
            };
            expanded = true;
            let mut rest = task.agenda.clone();
            rest.pop();
            for m in lo + 1..hi {
                let mut child = TaskState { agenda: rest.clone(), diagonals: task.diagonals.clone() };
                if m - lo >= 2 {
                    child.diagonals.push((lo, m));
                }
                if hi - m >= 2 {
                    child.diagonals.push((m, hi));
                }
                child_items(&mut child.agenda, lo, m, hi, prune);
                next.push(child);
            }
        }
        tasks = next;
        if !expanded {
            break;
        }
    }
    tasks
}

/// Per-task accumulator. `best` is the smallest stretch seen among the
/// task's evaluated leaves, with ties broken toward the lexicographically
/// smallest sorted diagonal set.
#[derive(Debug, Clone)]
struct TaskOutcome {
    count: u64,
    pruned: u64,
    best: f64,
    best_diagonals: Vec<(usize, usize)>,
    best_witness: (usize, usize),
}

impl TaskOutcome {
    fn empty() -> Self {
        TaskOutcome {
            count: 0,
            pruned: 0,
            best: f64::INFINITY,
            best_diagonals: Vec::new(),
            best_witness: (0, 0),
        }
    }
}

/// A pocket check below this many remaining completions is more expensive
/// than the leaf evaluations it could save; skip it.
const CHECK_WORK_CUTOFF: u64 = 32;

struct Engine<'a> {
    n: usize,
    prune: bool,
    table: &'a ChordTable,
    shared: &'a SharedIncumbent,
    adj: Vec<bool>,
    diagonals: Vec<(usize, usize)>,
    scratch: EvalScratch,
    /// catalan[g]: triangulations of an interval with gap g (a (g+1)-gon).
    completions_by_gap: Vec<u64>,
    /// Evaluation produced by the root check, consumed by the leaf directly
    /// below it.
    pending_leaf: Option<(f64, (usize, usize))>,
    outcome: TaskOutcome,
}

impl<'a> Engine<'a> {
    fn new(n: usize, table: &'a ChordTable, shared: &'a SharedIncumbent, prune: bool) -> Self {
        let mut adj = vec![false; n * n];
        for i in 0..n {
            let j = (i + 1) % n;
            adj[i * n + j] = true;
            adj[j * n + i] = true;
        }
        let completions_by_gap = (0..n).map(|g| super::catalan(g.saturating_sub(1))).collect();
        Engine {
            n,
            prune,
            table,
            shared,
            adj,
            diagonals: Vec::with_capacity(n.saturating_sub(3)),
            scratch: EvalScratch::new(n),
            completions_by_gap,
            pending_leaf: None,
            outcome: TaskOutcome::empty(),
        }
    }

    /// Number of triangulation completions still to be enumerated below the
    /// current agenda position, saturated at `CHECK_WORK_CUTOFF`.
    fn remaining_completions(&self, agenda: &[Item]) -> u64 {
        let mut product = 1u64;
        for item in agenda {
            if let Item::Split(lo, hi) = item {
                product = product.saturating_mul(self.completions_by_gap[hi - lo]);
                if product >= CHECK_WORK_CUTOFF {
                    return product;
                }
            }
        }
        product
    }

    fn run(mut self, task: &TaskState) -> TaskOutcome {
        for &(a, b) in &task.diagonals {
            self.add_diagonal(a, b);
        }
        let mut agenda = task.agenda.clone();
        self.dfs(&mut agenda);
        self.outcome
    }

    fn add_diagonal(&mut self, a: usize, b: usize) {
        self.adj[a * self.n + b] = true;
        self.adj[b * self.n + a] = true;
        self.diagonals.push((a, b));
    }

    fn pop_diagonals(&mut self, pushed: usize) {
        for _ in 0..pushed {
            let (a, b) = self.diagonals.pop().expect("diagonal stack underflow");
            self.adj[a * self.n + b] = false;
            self.adj[b * self.n + a] = false;
        }
    }

    fn dfs(&mut self, agenda: &mut Vec<Item>) {
        let Some(item) = agenda.pop() else {
            let (value, witness) = self
                .pending_leaf
                .take()
                .expect("the root check runs before every leaf");
            self.register_leaf(value, witness);
            return;
        };
        match item {
            Item::Split(lo, hi) => {
                for m in lo + 1..hi {
                    let mut pushed = 0;
                    if m - lo >= 2 {
                        self.add_diagonal(lo, m);
                        pushed += 1;
                    }
                    if hi - m >= 2 {
                        self.add_diagonal(m, hi);
                        pushed += 1;
                    }
                    let depth = agenda.len();
                    child_items(agenda, lo, m, hi, self.prune);
                    self.dfs(agenda);
                    agenda.truncate(depth);
                    self.pop_diagonals(pushed);
                }
            }
            Item::Check(lo, hi) => {
                let is_root = lo == 0 && hi == self.n - 1;
                if !is_root && self.remaining_completions(agenda) < CHECK_WORK_CUTOFF {
                    // Too little left below this point for the check to pay
                    // for itself; the root check still vets the few leaves.
                    self.dfs(agenda);
                } else {
                    let bound = if self.prune { self.shared.bound() } else { f64::INFINITY };
                    let eval =
                        evaluate_pocket(self.table, &self.adj, &mut self.scratch, lo, hi, bound);
                    if eval.exceeded {
                        self.outcome.pruned += 1;
                    } else {
                        if is_root {
                            self.pending_leaf = Some((eval.max_ratio, eval.witness));
                        }
                        self.dfs(agenda);
                    }
                }
            }
        }
        agenda.push(item);
    }

    fn register_leaf(&mut self, value: f64, witness: (usize, usize)) {
        self.outcome.count += 1;
        if value <= self.outcome.best {
            let mut key = self.diagonals.clone();
            key.sort_unstable();
            if value < self.outcome.best || key < self.outcome.best_diagonals {
                self.outcome.best = value;
                self.outcome.best_diagonals = key;
                self.outcome.best_witness = witness;
            }
        }
        self.shared.observe(value);
    }
}

/// Exact minimum dilation over all triangulations of the regular n-gon, by
/// exhaustive enumeration with optional certified pruning and parallelism.
///
/// `min_stretch`, `argmin` and `witness_pair` are bit-for-bit identical
/// across `prune` on/off and every worker count; see the module
/// documentation for why. The running minimum over any enumeration prefix
/// only decreases, so partial runs always over-estimate the final value.
pub fn min_dilation_convex(
    n: usize,
    options: &MinDilationOptions,
) -> Result<EnumerationResult, ConvexError> {
    if n < 4 {
        return Err(ConvexError::TooFewVertices { n, min: 4 });
    }
    if options.workers == 0 {
        return Err(ConvexError::NoWorkers);
    }
    let table = ChordTable::new(n);
    let shared = SharedIncumbent::new();
    let target = if options.workers == 1 { 1 } else { options.workers * 8 };
    let tasks = generate_tasks(n, options.prune, target);
    let run = |task: &TaskState| Engine::new(n, &table, &shared, options.prune).run(task);
    let outcomes: Vec<TaskOutcome> = if options.workers == 1 {
        tasks.iter().map(run).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.workers)
            .build()
            .expect("worker pool construction");
        pool.install(|| tasks.par_iter().map(run).collect())
    };

    let mut merged = TaskOutcome::empty();
    for outcome in outcomes {
        merged.count += outcome.count;
        merged.pruned += outcome.pruned;
        if outcome.best < merged.best
            || (outcome.best == merged.best
                && merged.best.is_finite()
                && outcome.best_diagonals < merged.best_diagonals)
        {
            merged.best = outcome.best;
            merged.best_diagonals = outcome.best_diagonals;
            merged.best_witness = outcome.best_witness;
        }
    }
    debug_assert!(merged.best.is_finite(), "the optimum is never pruned");

    Ok(EnumerationResult {
        count: merged.count,
        min_stretch: merged.best,
        argmin: ConvexTriangulation::from_trusted(n, &merged.best_diagonals),
        witness_pair: merged.best_witness,
        pruned_subtrees: merged.pruned,
        second_best: shared.second(),
        below_threshold: options
            .threshold
            .map(|t| merged.best < t - STRETCH_DISTINCTION_MARGIN),
    })
}
