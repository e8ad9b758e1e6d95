//! Acceptance gate: one test per numbered criterion, each a single pass/fail
//! line under `cargo test --test acceptance`. Statistical criteria run fixed
//! seeds, so every run sees the same numbers.

use std::time::Instant;

use modgroup::experiment::{
    run_experiment, ExperimentConfig, ExperimentKind, ExperimentReport, Rational,
};
use modgroup::graph::{delta_2, Mode, ModularGraph, SparseGraph};
use modgroup::oracle::{enumerate_graphs, verify_counts, verify_preimage_formulas, verify_uniformity};
use modgroup::sampler::{task_rng, CycSampler, RootedSampler, SilhouetteSampler};
use modgroup::silhouette::{apply_move, silhouette, sparse_moves};
use modgroup::stallings::stallings_from_generators;
use modgroup::{analysis, fixtures, tables};

use rand::Rng;

fn config(kind: ExperimentKind, sizes: &[u32], samples: u32) -> ExperimentConfig {
    ExperimentConfig {
        experiment: kind,
        sizes: sizes.to_vec(),
        samples_per_size: samples,
        alpha_exponent: Rational::new(1, 7),
        mu: Rational::new(1, 1),
        master_seed: 0,
    }
}

fn cell(report: &ExperimentReport, row: usize, column: &str) -> f64 {
    let idx = report
        .columns
        .iter()
        .position(|&c| c == column)
        .unwrap_or_else(|| panic!("no column {column}"));
    report.rows[row][idx]
        .parse()
        .unwrap_or_else(|_| panic!("column {column} row {row} is not numeric"))
}

fn budget(start: Instant, seconds: u64, what: &str) {
    let elapsed = start.elapsed().as_secs_f64();
    assert!(
        elapsed < seconds as f64,
        "{what} took {elapsed:.1}s, over the {seconds}s budget"
    );
}

#[test]
fn criterion_1_reference_subgroups() {
    let start = Instant::now();
    let cases = [
        (fixtures::gens_h(), fixtures::graph_h(), 6, (6, 3, 0, 0, 0)),
        (fixtures::gens_k(), fixtures::graph_k(), 6, (6, 3, 1, 0, 1)),
        (fixtures::gens_l(), fixtures::graph_l(), 13, (13, 6, 0, 1, 1)),
    ];
    for (gens, expected, n, (tn, k2, k3, l2, l3)) in cases {
        let g = stallings_from_generators(&gens);
        assert_eq!(g.n(), n);
        let t = g.combinatorial_type();
        assert_eq!((t.n, t.k2, t.k3, t.l2, t.l3), (tn, k2, k3, l2, l3));
        assert!(g.is_isomorphic(&expected, true), "fixture mismatch at size {n}");
    }
    assert_eq!(silhouette(&fixtures::graph_k()).unwrap(), delta_2());
    assert_eq!(
        silhouette(&fixtures::graph_l()).unwrap(),
        fixtures::silhouette_of_l()
    );
    budget(start, 1, "criterion 1");
}

#[test]
fn criterion_2_move_preimage_formulas() {
    let start = Instant::now();
    for n in 2..=8 {
        let rows = verify_preimage_formulas(n).unwrap();
        assert!(
            rows.iter().all(|r| r.images == r.expected_images),
            "preimage imbalance at n = {n}"
        );
        assert!(n < 4 || !rows.is_empty(), "no admissible moves found at n = {n}");
    }
    budget(start, 600, "criterion 2");
}

#[test]
fn criterion_3_silhouetting_uniformity() {
    let start = Instant::now();
    for n in 2..=8 {
        let report = verify_uniformity(n).unwrap();
        assert!(
            report.cyc.iter().all(|r| r.fibers == r.expected_fibers),
            "skewed unrooted fiber at n = {n}"
        );
        assert!(
            report.rooted.iter().all(|r| r.fibers == r.expected_fibers),
            "skewed rooted fiber at n = {n}"
        );
        assert!(!report.cyc.is_empty() && !report.rooted.is_empty());
    }
    budget(start, 1800, "criterion 3");
}

#[test]
fn criterion_4_confluence_under_random_orders() {
    let start = Instant::now();
    let tables = tables::CountTables::up_to(30);
    for n in 6..=30 {
        let sampler = CycSampler::new(&tables, n).unwrap();
        for i in 0..100u64 {
            let mut rng = task_rng(44, ((n as u64) << 32) | (i << 8));
            let g = sampler.sample(&mut rng);
            let expected = silhouette(&g).unwrap();
            for order in 1..=10u64 {
                let mut rng = task_rng(44, ((n as u64) << 32) | (i << 8) | order);
                let mut h = SparseGraph::from_graph(&g);
                loop {
                    let moves = sparse_moves(&h);
                    if moves.is_empty() {
                        break;
                    }
                    let m = &moves[rng.gen_range(0..moves.len())];
                    h = apply_move(&h, m).unwrap();
                }
                assert_eq!(
                    h.relabel_normalize(),
                    expected,
                    "two move orders disagree at n = {n}, sample {i}, order {order}"
                );
            }
        }
    }
    budget(start, 60, "criterion 4");
}

#[test]
fn criterion_5_silhouette_size_deficit() {
    let start = Instant::now();
    let cfg = config(ExperimentKind::SilhouetteSize, &[3000], 10_000);
    let report = run_experiment(&cfg).unwrap();
    budget(start, 600, "criterion 5");
    for (row, lane) in [(0, "cyclically-reduced"), (1, "rooted")] {
        let tail = cell(&report, row, "tail_freq");
        assert!(
            tail <= 0.01,
            "{lane} tail frequency {tail:.4} above the 0.01 gate at n = 3000 \
             (mean deficit {:.1}, cut {:.1})",
            cell(&report, row, "mean_deficit"),
            cell(&report, row, "tail_cut"),
        );
    }
}

#[test]
fn criterion_6_small_ab_cycle_decay() {
    let start = Instant::now();
    let cfg = config(ExperimentKind::SmallAbCycles, &[60, 600, 6000], 10_000);
    let report = run_experiment(&cfg).unwrap();
    budget(start, 1200, "criterion 6");
    // Silhouette lane rows sit first within each size block.
    let freqs: Vec<(f64, f64)> = [0, 3, 6]
        .iter()
        .map(|&r| {
            (
                cell(&report, r, "freq_no_small"),
                cell(&report, r, "freq_no_small_stderr"),
            )
        })
        .collect();
    for w in freqs.windows(2) {
        let ((f1, s1), (f2, s2)) = (w[0], w[1]);
        let gap = 3.0 * (s1 * s1 + s2 * s2).sqrt();
        assert!(
            f1 - f2 >= gap,
            "no-small-cycle frequency not decreasing by 3 sigma: {f1:.4} -> {f2:.4}"
        );
    }
    let last = freqs[2].0;
    assert!(
        last <= 0.25,
        "no-small-cycle frequency {last:.4} above the 0.25 gate at n = 6000"
    );
}

#[test]
fn criterion_7_parabolicity_and_malnormality() {
    let start = Instant::now();
    // Frequencies over the rooted sampler must drop from n = 100 to n = 1000
    // by at least three standard errors of the difference.
    for kind in [ExperimentKind::Parabolicity, ExperimentKind::Malnormality] {
        let cfg = config(kind, &[100, 1000], 1000);
        let report = run_experiment(&cfg).unwrap();
        let freq = report.freq_column;
        let err = report.stderr_column;
        let (f1, s1) = (cell(&report, 0, freq), cell(&report, 0, err));
        let (f2, s2) = (cell(&report, 2, freq), cell(&report, 2, err));
        assert!(
            f1 - f2 >= 3.0 * (s1 * s1 + s2 * s2).sqrt(),
            "{kind} rooted frequency not decreasing by 3 sigma: {f1:.4} -> {f2:.4}"
        );
    }
    // Small sizes make the finite-index cross-check inside the runner bite:
    // it panics on any finite-index sample classified almost malnormal.
    let cfg = config(ExperimentKind::Malnormality, &[4, 8, 16], 2000);
    let report = run_experiment(&cfg).unwrap();
    let checked: f64 = (0..report.rows.len())
        .map(|r| cell(&report, r, "finite_index_samples"))
        .sum();
    assert!(checked > 100.0, "too few finite-index samples crossed the check");
    // Exact version of the cross-check: every finite-index subgroup of size
    // at least 2 contains a parabolic element, hence is not almost malnormal.
    for n in 2..=6 {
        let mut finite_index = 0u32;
        enumerate_graphs(n, Mode::CyclicallyReduced, |g| {
            if analysis::is_finite_index(g).is_some() {
                finite_index += 1;
                let (am, _) = analysis::is_almost_malnormal(g);
                assert!(!am, "finite-index graph of size {n} classified almost malnormal");
            }
        })
        .unwrap();
        assert!(n == 5 || finite_index > 0, "no finite-index graphs of size {n}");
    }
    budget(start, 1800, "criterion 7");
}

#[test]
fn criterion_8_disconnection_constant() {
    let start = Instant::now();
    let cfg = config(ExperimentKind::Connectivity, &[600], 100_000);
    let report = run_experiment(&cfg).unwrap();
    let z = cell(&report, 0, "z_abs");
    assert!(
        z <= 3.0,
        "disconnection frequency {} deviates from 5/(6n) by {z:.2} sigma",
        cell(&report, 0, "freq_disconnected")
    );
    budget(start, 120, "criterion 8");
}

#[test]
fn criterion_9_counts_and_sampler_chi_square() {
    let start = Instant::now();
    for row in verify_counts(9).unwrap() {
        assert_eq!(row.total, row.expected_total, "total miscount at n = {}", row.n);
        assert_eq!(
            row.connected, row.expected_connected,
            "connected miscount at n = {}",
            row.n
        );
    }

    let tables = tables::CountTables::up_to(6);
    let classes = |n: u32, mode: Mode| {
        let mut map = std::collections::HashMap::new();
        enumerate_graphs(n, mode, |g| {
            let next = map.len();
            map.insert(g.clone(), next);
        })
        .unwrap();
        map
    };
    let chi_square = |label: &str,
                      map: &std::collections::HashMap<ModularGraph, usize>,
                      stream: u64,
                      draw: &dyn Fn(&mut rand_chacha::ChaCha8Rng) -> ModularGraph| {
        let samples = 1_000_000u64;
        let mut counts = vec![0u64; map.len()];
        let mut rng = task_rng(9, stream);
        for _ in 0..samples {
            let g = draw(&mut rng);
            let idx = *map
                .get(&g)
                .unwrap_or_else(|| panic!("{label} sample outside the enumerated support"));
            counts[idx] += 1;
        }
        let expected = samples as f64 / map.len() as f64;
        let stat: f64 = counts
            .iter()
            .map(|&c| {
                let d = c as f64 - expected;
                d * d / expected
            })
            .sum();
        let threshold = tables::chi_square_quantile(map.len() as f64 - 1.0, 0.999);
        assert!(
            stat <= threshold,
            "{label} sampler fails uniformity: chi-square {stat:.1} over {} classes \
             exceeds the 99.9% quantile {threshold:.1}",
            map.len()
        );
    };

    let cyc_classes = classes(4, Mode::CyclicallyReduced);
    assert_eq!(cyc_classes.len(), 144);
    let cyc = CycSampler::new(&tables, 4).unwrap();
    chi_square("cyclically-reduced", &cyc_classes, 0, &|rng| cyc.sample(rng));

    let rooted_classes = classes(4, Mode::Reduced);
    let rooted = RootedSampler::new(&tables, 4).unwrap();
    chi_square("rooted", &rooted_classes, 1, &|rng| rooted.sample(rng));

    let silh_classes = classes(6, Mode::Silhouette);
    assert_eq!(silh_classes.len(), 600);
    let silh = SilhouetteSampler::new(6).unwrap();
    chi_square("silhouette", &silh_classes, 2, &|rng| silh.sample(rng));

    budget(start, 600, "criterion 9");
}
