//! Acceptance suite: one test per criterion, each printing a single
//! `criterion NN ...: PASS` line (visible with `--nocapture`) once every
//! assertion in it holds. All tolerances are pinned as constants here.
//!
//! Reference values follow the source table's convention of printing
//! truncated (not rounded) decimals, so "matches to 4 decimal places" means
//! the computed value truncates to the printed digits.

use std::process::Command;
use std::time::Instant;

use dilation::constructions::{
    degree3_spanner13, degree4_spanner6, extended_construction, falsify_degree_bound, s23_stretch,
    s23_witness,
};
use dilation::convex::{
    catalan, chord_ratio, enumerate_triangulations, local_search_min_dilation, longest_chord,
    min_dilation_convex, random_triangulation, triangulation_stretch, ChordProfile,
    MinDilationOptions,
};
use dilation::greedy::{
    greedy_stretch_experiment, greedy_triangulation, maximize_greedy_bound, parallelogram_six,
    GreedyParams,
};
use dilation::{GeometricGraph, Point, PointSet};

/// Agreement between the chord-space and the coordinate-space stretch
/// computations (independent code paths).
const CROSS_ORACLE_TOL: f64 = 1e-9;
/// Slack below a claimed lower bound that a falsification search would need
/// to reach before the claim counts as beaten.
const BOUND_MARGIN: f64 = 1e-9;
/// Tolerance for a construction's stretch against its closed form.
const CLAIM_TOL: f64 = 1e-12;
/// Window around printed 4-decimal reference values.
const FOUR_DECIMALS: f64 = 1e-4;

/// Does `value` reproduce the 4-decimal reference `printed`? The table
/// truncates, so 1.23606... matches "1.2360"; a rounded match is also
/// accepted since the convention is not stated per value.
fn matches_4dp(value: f64, printed: &str) -> bool {
    let p: f64 = printed.parse().expect("reference parses");
    let grid = (p * 1e4).round();
    (value - p).abs() < FOUR_DECIMALS
        && ((value * 1e4).floor() == grid || (value * 1e4).round() == grid)
}

fn pass(id: u32, label: &str, details: String) {
    println!("criterion {id:02} ({label}): PASS - {details}");
}

#[test]
fn criterion_01_reference_table_up_to_16() {
    let t0 = Instant::now();
    let expected: [(usize, &str); 13] = [
        (4, "1.4142"),
        (5, "1.2360"),
        (6, "1.3660"),
        (7, "1.3351"),
        (8, "1.4142"),
        (9, "1.3472"),
        (10, "1.3968"),
        (11, "1.3770"),
        (12, "1.3836"),
        (13, "1.3912"),
        (14, "1.4053"),
        (15, "1.4089"),
        (16, "1.4092"),
    ];

    // Criterion phrasing: the `repro` command itself must produce the rows.
    let out = Command::new(env!("CARGO_BIN_EXE_dilation"))
        .args(["repro", "--max-n", "16", "--format", "json"])
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "repro failed: {}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("repro emits json");
    assert_eq!(doc["all_pass"], true);

    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), expected.len());
    for (row, &(n, printed)) in rows.iter().zip(&expected) {
        assert_eq!(row["n"], n as u64);
        assert_eq!(row["pass"], true, "row n = {n} flagged");
        let computed = row["computed"].as_f64().unwrap();
        assert!(
            matches_4dp(computed, printed),
            "n = {n}: computed {computed} does not match printed {printed}"
        );
        let self_consistency = row["self_consistency"].as_f64().unwrap();
        assert!(
            self_consistency <= CROSS_ORACLE_TOL,
            "n = {n}: chord-space vs coordinate stretch differ by {self_consistency}"
        );
    }

    let elapsed = t0.elapsed().as_secs_f64();
    assert!(elapsed < 900.0, "took {elapsed:.0}s, limit is 15 minutes");
    pass(1, "exact n-gon minima, n=4..16", format!("13 rows in {elapsed:.1}s"));
}

#[test]
fn criterion_02_enumeration_counts_are_catalan() {
    for n in 4..=14 {
        let count = enumerate_triangulations(n, |_| {}).unwrap();
        assert_eq!(count, catalan(n - 2), "count mismatch at n = {n}");
    }
    assert_eq!(catalan(12), 208012);
    pass(2, "Catalan counts n=4..14", "all equal C(n-2), up to 208012".into());
}

#[test]
fn criterion_03_detour_ratio_table() {
    // All sixteen printed ratios are detours around near-diameter chords of
    // the 23-gon (hull length 11).
    let table: [(&[usize], &str); 16] = [
        (&[4, 7], "1.3396"),
        (&[5, 6], "1.3651"),
        (&[5, 7], "1.4514"),
        (&[6, 6], "1.4650"),
        (&[2, 3, 6], "1.4023"),
        // The reference table prints 1.4061 here — a digit transposition:
        // the defining formula gives 1.40161..., and no three-hop profile
        // sums to the printed value.
        (&[1, 5, 5], "1.4016"),
        (&[2, 4, 5], "1.4237"),
        (&[1, 3, 8], "1.4257"),
        (&[2, 2, 8], "1.4308"),
        (&[3, 3, 5], "1.4312"),
        (&[3, 4, 4], "1.4409"),
        (&[1, 4, 7], "1.4761"),
        (&[2, 3, 7], "1.4886"),
        (&[3, 3, 6], "1.5312"),
        (&[1, 1, 4, 5], "1.4263"),
        (&[1, 2, 3, 5], "1.4388"),
    ];
    for (hops, printed) in table {
        let value = chord_ratio(&ChordProfile::new(23, 11, hops.to_vec())).unwrap();
        assert!(
            matches_4dp(value, printed),
            "f{hops:?} = {value} does not match printed {printed}"
        );
    }
    pass(
        3,
        "chord detour ratios",
        "all 16 table values reproduced (one corrected for a digit transposition)".into(),
    );
}

#[test]
fn criterion_04_s23_witness_and_default_search() {
    let construction = s23_witness();
    let report = construction.verify().expect("the frozen triangulation verifies");
    let closed_form = s23_stretch();
    assert!((report.stretch - closed_form).abs() <= CLAIM_TOL);
    let witness = report.witness_pair.unwrap();
    assert!(
        witness == (6, 18) || witness == (10, 21),
        "unexpected witness {witness:?}"
    );

    // Default-suite substitute for the multi-day exhaustive n = 23 run: a
    // 10^6-evaluation local search neither beats the bound nor misses it.
    let search = local_search_min_dilation(23, 1_000_000, 0).unwrap();
    assert!(
        search.best_stretch >= closed_form - BOUND_MARGIN,
        "local search found {} below the claimed minimum",
        search.best_stretch
    );
    assert!(
        (search.best_stretch - closed_form).abs() <= BOUND_MARGIN,
        "local search did not reach the minimum: {}",
        search.best_stretch
    );
    pass(
        4,
        "23-gon witness",
        format!(
            "stretch {:.12} with witness {witness:?}; search attains it and never beats it",
            report.stretch
        ),
    );
}

#[test]
fn criterion_05_pruning_and_workers_never_change_results() {
    for n in 4..=12 {
        let baseline = min_dilation_convex(
            n,
            &MinDilationOptions { prune: false, workers: 1, threshold: None },
        )
        .unwrap();
        for prune in [false, true] {
            for workers in [1, 2, 4] {
                let run = min_dilation_convex(
                    n,
                    &MinDilationOptions { prune, workers, threshold: None },
                )
                .unwrap();
                assert_eq!(
                    run.min_stretch.to_bits(),
                    baseline.min_stretch.to_bits(),
                    "bitwise mismatch at n = {n}, prune = {prune}, workers = {workers}"
                );
                assert_eq!(run.argmin.diagonals(), baseline.argmin.diagonals());
                assert_eq!(run.witness_pair, baseline.witness_pair);
            }
        }
    }
    pass(5, "pruning soundness", "n=4..12 x prune x workers {1,2,4}: bit-for-bit equal".into());
}

#[test]
fn criterion_06_longest_chord_range() {
    const SAMPLES: u64 = 10_000;
    for seed in 0..SAMPLES {
        let t = random_triangulation(23, seed).unwrap();
        let ell = longest_chord(&t);
        assert!((8..=11).contains(&ell), "seed {seed}: longest chord {ell}");
    }
    pass(6, "longest-chord range", format!("{SAMPLES} random 23-gon triangulations in 8..=11"));
}

#[test]
fn criterion_07_degree3_spanner() {
    let construction = degree3_spanner13();
    let report = construction.verify().expect("the 13-point spanner verifies");
    let bound = 1.0 + 3.0f64.sqrt();
    assert!(construction.graph.max_degree() <= 3);
    assert!((report.stretch - bound).abs() <= CLAIM_TOL);

    let search =
        falsify_degree_bound(construction.graph.points(), 3, bound, 100_000, 1).unwrap();
    assert!(
        search.best_found >= bound - BOUND_MARGIN,
        "degree-3 search found {} below 1+sqrt(3)",
        search.best_found
    );
    pass(
        7,
        "degree-3 spanner",
        format!(
            "stretch 1+sqrt(3) verified; best of {} degree-3 candidates: {:.12}",
            search.evaluations, search.best_found
        ),
    );
}

#[test]
fn criterion_08_degree4_spanner_and_extensions() {
    let construction = degree4_spanner6();
    let report = construction.verify().expect("the 6-point spanner verifies");
    let bound = 1.0 + ((5.0 - 5.0f64.sqrt()) / 2.0).sqrt();
    assert!((report.stretch - bound).abs() <= CLAIM_TOL);
    assert_eq!(report.witness_pair, Some((0, 1)));

    let search =
        falsify_degree_bound(construction.graph.points(), 4, bound, 100_000, 1).unwrap();
    assert!(
        search.best_found >= bound - BOUND_MARGIN,
        "degree-4 search found {} below the bound",
        search.best_found
    );

    // Collinear tail extensions preserve both stretch values exactly (the
    // maximum stays at the original witness, computed from the same
    // coordinates).
    for n in 7..=20 {
        let ext = extended_construction(&construction, n).unwrap();
        let ext_report = ext.verify().unwrap();
        assert_eq!(
            ext_report.stretch.to_bits(),
            report.stretch.to_bits(),
            "degree-4 extension to n = {n} changed the stretch"
        );
    }
    let deg3 = degree3_spanner13();
    let deg3_report = deg3.verify().unwrap();
    for n in 14..=20 {
        let ext = extended_construction(&deg3, n).unwrap();
        let ext_report = ext.verify().unwrap();
        assert_eq!(
            ext_report.stretch.to_bits(),
            deg3_report.stretch.to_bits(),
            "degree-3 extension to n = {n} changed the stretch"
        );
    }
    pass(
        8,
        "degree-4 spanner",
        "stretch verified with witness (0,1); extensions n=7..20 exact".into(),
    );
}

#[test]
fn criterion_09_parallelogram_bound() {
    const ALPHA_REF: f64 = 1.3416;
    const VALUE_REF: f64 = 2.0268;
    const ALPHA_TOL: f64 = 2e-3;
    const VALUE_TOL: f64 = 1e-4;

    let (alpha_star, value) = maximize_greedy_bound(1e-6).unwrap();
    assert!((alpha_star - ALPHA_REF).abs() <= ALPHA_TOL, "alpha* = {alpha_star}");
    assert!((value - VALUE_REF).abs() <= VALUE_TOL, "value = {value}");

    let params = GreedyParams::new(alpha_star, 1e-4).unwrap();
    let points = parallelogram_six(params);
    let graph = greedy_triangulation(&points).unwrap();
    let expected_edges: Vec<(usize, usize)> =
        vec![(0, 1), (0, 2), (1, 2), (1, 4), (2, 4), (2, 5), (3, 4), (3, 5), (4, 5)];
    assert_eq!(graph.edges(), expected_edges.as_slice());

    // Uniqueness under the tie-break rule: relabeling the input points never
    // changes the resulting geometric edge set.
    for perm in [[5, 4, 3, 2, 1, 0], [1, 2, 3, 4, 5, 0], [3, 0, 5, 1, 4, 2]] {
        let shuffled: Vec<Point> = perm.iter().map(|&i| points[i]).collect();
        let shuffled_graph =
            greedy_triangulation(&PointSet::new(shuffled).unwrap()).unwrap();
        let mut mapped: Vec<(usize, usize)> = shuffled_graph
            .edges()
            .iter()
            .map(|&(a, b)| {
                let (a, b) = (perm[a], perm[b]);
                (a.min(b), a.max(b))
            })
            .collect();
        mapped.sort_unstable();
        assert_eq!(mapped, expected_edges, "greedy output depends on labels under {perm:?}");
    }

    let report = graph.stretch_factor().unwrap();
    assert!(report.stretch > 2.026, "measured stretch {}", report.stretch);
    assert_eq!(report.witness_pair, Some((0, 3)), "witness must be the exterior pair");
    pass(
        9,
        "parallelogram bound",
        format!(
            "alpha* = {alpha_star:.5}, bound {value:.5}; realized stretch {:.5} at (0, 3)",
            report.stretch
        ),
    );
}

#[test]
fn criterion_10_heuristic_upper_bounds() {
    let n25 = local_search_min_dilation(25, 1_000_000, 0).unwrap();
    assert!(n25.best_stretch < 1.4296, "n = 25: {}", n25.best_stretch);
    let n26 = local_search_min_dilation(26, 1_000_000, 0).unwrap();
    assert!(n26.best_stretch < 1.4202, "n = 26: {}", n26.best_stretch);
    pass(
        10,
        "heuristic upper bounds",
        format!("n=25: {:.10} < 1.4296; n=26: {:.10} < 1.4202", n25.best_stretch, n26.best_stretch),
    );
}

#[test]
fn criterion_11_greedy_experiment_envelope() {
    const SEED: u64 = 2024;
    let t0 = Instant::now();
    let result = greedy_stretch_experiment(4, 60, 50, SEED).unwrap();
    let elapsed = t0.elapsed().as_secs_f64();

    assert_eq!(result.records.len(), 57 * 50);
    for record in &result.records {
        assert!(record.stretch >= 1.0, "stretch below 1 at {:?}", (record.n, record.trial));
    }
    assert!(
        result.summary.max_stretch < 2.03,
        "max stretch {} breaks the envelope",
        result.summary.max_stretch
    );
    assert!(elapsed < 600.0, "took {elapsed:.0}s, limit is 10 minutes");
    pass(
        11,
        "greedy experiment",
        format!(
            "2850 trials, max {:.4} at n = {}, {elapsed:.1}s",
            result.summary.max_stretch, result.summary.argmax.0
        ),
    );
}

#[test]
fn criterion_12_cross_oracle_equivalence() {
    let mut checked = 0u32;
    for n in [8usize, 12, 15] {
        for seed in 0..100u64 {
            let t = random_triangulation(n, seed).unwrap();
            let closed = triangulation_stretch(&t).stretch;
            let graph: GeometricGraph = t.realize(1.0).unwrap();
            let coordinate = graph.stretch_factor().unwrap().stretch;
            assert!(
                (closed - coordinate).abs() <= CROSS_ORACLE_TOL,
                "n = {n}, seed {seed}: chord-space {closed} vs coordinates {coordinate}"
            );
            checked += 1;
        }
    }
    pass(12, "cross-oracle equivalence", format!("{checked} random triangulations agree"));
}
