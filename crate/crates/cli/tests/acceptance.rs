//! Acceptance suite: every release criterion as one test, each printing a
//! `ACCEPTANCE <id> ...: PASS` line (visible with `--nocapture`).
//!
//! d0 = iee-security.org and d1 = mwkwhvkdpp.info are the two reference
//! domains whose published feature values the extractor must reproduce.

use dgaclass_core::dataset::FeatureMatrix;
use dgaclass_core::domains::{parse, SuffixDatabase};
use dgaclass_core::evalharness::{
    bench_throughput, cross_validate, macro_metrics, CVPlan,
};
use dgaclass_core::features::{self, extract, FeatureSetSelection};
use dgaclass_core::forest::{self, class_weights, ForestMode, HyperParams};
use dgaclass_core::selection::{
    drop_degenerate, multisurf, permutation_importance, relieff, rfe, spearman_collapse,
    RfeBackend,
};
use dgaclass_core::synthdga;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

const D0: &str = "iee-security.org";
const D1: &str = "mwkwhvkdpp.info";

fn pass(id: &str, detail: &str) {
    println!("ACCEPTANCE {id}: PASS ({detail})");
}

fn feature_map(domain: &str) -> HashMap<String, f64> {
    let db = SuffixDatabase::bundled();
    let union = FeatureSetSelection::named("union").unwrap();
    let parsed = parse(domain, &db).unwrap();
    let vector = extract(&parsed, &union).unwrap();
    union.member_ids().into_iter().zip(vector.values().iter().copied()).collect()
}

/// Reference values for d0/d1; `None` marks the one value excluded from
/// verification (syllable-count on the vowel-free d1).
#[allow(clippy::approx_constant)] // entries are published 5-decimal values
fn reference_values() -> Vec<(&'static str, Option<f64>, Option<f64>)> {
    let mut rows: Vec<(&'static str, Option<f64>, Option<f64>)> = vec![
        ("adjacent-duplicates-ratio", Some(0.08333), Some(0.10000)),
        ("consecutive-consonant-ratio", Some(0.16667), Some(1.0)),
        ("consecutive-digit-ratio", Some(0.0), Some(0.0)),
        ("consonant-to-vowel-ratio", Some(0.83333), Some(10.0)),
        ("consonants-character-ratio", Some(0.41667), Some(1.0)),
        ("consonants-max-streak-length", Some(2.0), Some(10.0)),
        ("contains-digits", Some(0.0), Some(0.0)),
        ("decimaldigits-character-ratio", Some(0.0), Some(0.0)),
        ("decimaldigits-max-streak-length", Some(0.0), Some(0.0)),
        ("start-digit-edge-distance", Some(-1.0), Some(-1.0)),
        ("end-digit-edge-distance", Some(-1.0), Some(-1.0)),
        ("hexadecimaldigits-character-ratio", Some(0.33333), Some(0.1)),
        ("hexadecimaldigits-max-streak-length", Some(2.0), Some(1.0)),
        ("primedigits-character-ratio", Some(0.08333), Some(0.3)),
        ("primedigits-max-streak-length", Some(1.0), Some(2.0)),
        ("repeated-characters-ratio", Some(0.22222), Some(0.42857)),
        ("subdomain-digit-sum", Some(238.0), Some(237.0)),
        ("suffix-digit-sum", Some(67.0), Some(80.0)),
        ("suffix-standard-deviation", Some(4.64280), Some(3.67423)),
        ("vowels-character-ratio", Some(0.5), Some(0.0)),
        ("vowels-max-streak-length", Some(3.0), Some(0.0)),
        ("inverse-hamming-distance", Some(1.0), Some(1.0)),
        ("syllable-count", Some(4.0), None),
        ("domain-name-length", Some(16.0), Some(15.0)),
        ("hex-exclusive-subdomains-ratio", Some(0.0), Some(0.0)),
        ("second-level-length", Some(12.0), Some(10.0)),
        ("subdomains-length", Some(12.0), Some(10.0)),
        ("subdomains-mean-length", Some(12.0), Some(10.0)),
        ("suffix-length", Some(3.0), Some(4.0)),
        ("1-gram-alphabet-diversity", Some(0.75), Some(0.7)),
        ("1-gram-alphabet-size", Some(9.0), Some(7.0)),
        ("1-gram-arithmetic-mean", Some(1.33333), Some(1.42857)),
        ("1-gram-harmonic-mean", Some(1.14894), Some(1.27273)),
        ("1-gram-kurtosis", Some(1.5), Some(-1.91667)),
        ("1-gram-max", Some(3.0), Some(2.0)),
        ("1-gram-shannon-entropy", Some(3.02206), Some(2.72193)),
        ("1-gram-skewness", Some(1.75), Some(0.28868)),
        ("1-gram-standard-deviation", Some(0.66667), Some(0.49487)),
        ("2-gram-alphabet-size", Some(11.0), Some(9.0)),
        ("2-gram-shannon-entropy", Some(3.45943), Some(3.16993)),
        ("3-gram-alphabet-size", Some(10.0), Some(8.0)),
        ("3-gram-shannon-entropy", Some(3.32193), Some(3.0)),
    ];
    const ALPHABET_D0: [f64; 26] = [
        0.0, 0.0, 1.0, 0.0, 3.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
        1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0,
    ];
    const ALPHABET_D1: [f64; 26] = [
        0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 2.0, 0.0, 1.0, 0.0, 0.0, 2.0, 0.0,
        0.0, 0.0, 0.0, 0.0, 1.0, 2.0, 0.0, 0.0, 0.0,
    ];
    const ALPHABET_IDS: [&str; 26] = [
        "alphabet-a", "alphabet-b", "alphabet-c", "alphabet-d", "alphabet-e", "alphabet-f",
        "alphabet-g", "alphabet-h", "alphabet-i", "alphabet-j", "alphabet-k", "alphabet-l",
        "alphabet-m", "alphabet-n", "alphabet-o", "alphabet-p", "alphabet-q", "alphabet-r",
        "alphabet-s", "alphabet-t", "alphabet-u", "alphabet-v", "alphabet-w", "alphabet-x",
        "alphabet-y", "alphabet-z",
    ];
    for i in 0..26 {
        rows.push((ALPHABET_IDS[i], Some(ALPHABET_D0[i]), Some(ALPHABET_D1[i])));
    }
    rows
}

#[test]
fn acceptance_c1_reference_feature_values() {
    let started = Instant::now();
    let extracted = [feature_map(D0), feature_map(D1)];
    let mut checked = 0usize;
    for (id, f_d0, f_d1) in reference_values() {
        for (domain, expected) in [(0usize, f_d0), (1usize, f_d1)] {
            let Some(expected) = expected else { continue };
            let actual = extracted[domain][id];
            assert!(
                (actual - expected).abs() < 1e-4,
                "{id} on d{domain}: got {actual}, expected {expected}"
            );
            checked += 1;
        }
    }
    assert!(checked >= 60, "only {checked} reference values checked");
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}, budget 1 s");
    pass("C1 reference-feature-values", &format!("{checked} values within 1e-4, {elapsed:?}"));
}

#[test]
fn acceptance_c2_pinned_regression_values() {
    // Implementation-defined features: the expected values below were
    // produced by the first verified build and are frozen as regression
    // anchors. They intentionally differ from any externally published
    // numbers; see README for the list and the reasons.
    let pinned: [(&str, f64, f64); 9] = [
        ("first-character-pair", 26981.0, 28023.0),
        ("weighted-streaks", 0.5833333333333334, 10.0),
        ("syllable-count", 4.0, 0.0),
        ("bits-entropy", 5.93894199826059, 5.4909266135559935),
        ("zlib-bits-compression-ratio", 0.8571428571428571, 0.8333333333333334),
        ("binary-matrix-rank-test", 1.0, 1.0),
        ("binary-matrix-rank-test-unicode", 0.0, 0.0),
        ("longest-run-of-ones-test", 1.0, 0.0),
        ("longest-run-of-ones-test-unicode", 1.0, 1.0),
    ];
    let extracted = [feature_map(D0), feature_map(D1)];
    for (id, v0, v1) in pinned {
        for (domain, expected) in [(0usize, v0), (1usize, v1)] {
            let actual = extracted[domain][id];
            assert!(
                (actual - expected).abs() < 1e-12,
                "regression drift in {id} on d{domain}: got {actual:.17}, pinned {expected:.17}"
            );
        }
    }
    pass("C2 pinned-regression-values", "9 implementation-defined features stable");
}

#[test]
fn acceptance_c3_ngram_moments_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0123);
    let charset: Vec<char> = "abcdefghijklmnopqrstuvwxyz0123456789-".chars().collect();
    for case in 0..1000 {
        let len = rng.gen_range(3..=30);
        let s: String = (0..len).map(|_| charset[rng.gen_range(0..charset.len())]).collect();
        for n in 1..=3usize {
            let stats = features::ops::ngram_stats(&s, n).unwrap();

            // Brute-force recomputation from an explicit window multiset.
            let mut windows: Vec<Vec<u8>> =
                s.as_bytes().windows(n).map(|w| w.to_vec()).collect();
            let total = windows.len() as f64;
            windows.sort();
            let mut counts: Vec<f64> = Vec::new();
            let mut i = 0;
            while i < windows.len() {
                let mut j = i;
                while j < windows.len() && windows[j] == windows[i] {
                    j += 1;
                }
                counts.push((j - i) as f64);
                i = j;
            }
            let k = counts.len() as f64;
            let mean = total / k;
            let central = |p: i32| counts.iter().map(|c| (c - mean).powi(p)).sum::<f64>() / k;
            let m2 = central(2);
            let (skew, kurt) = if m2 == 0.0 {
                (0.0, 0.0)
            } else {
                (central(3) / m2.powf(1.5), central(4) / (m2 * m2) - 3.0)
            };
            let harmonic = k / counts.iter().map(|c| 1.0 / c).sum::<f64>();
            let entropy: f64 =
                -counts.iter().map(|c| (c / total) * (c / total).log2()).sum::<f64>();

            let close = |a: f64, b: f64, what: &str| {
                assert!(
                    (a - b).abs() < 1e-9,
                    "case {case} n={n} s={s:?} {what}: {a} vs oracle {b}"
                );
            };
            close(stats.arithmetic_mean, mean, "arithmetic mean");
            close(stats.harmonic_mean, harmonic, "harmonic mean");
            close(stats.std_dev, m2.sqrt(), "std dev");
            close(stats.skewness, skew, "skewness");
            close(stats.kurtosis, kurt, "kurtosis");
            close(stats.entropy, entropy.max(0.0), "entropy");
        }
    }
    pass("C3 ngram-moments-oracle", "1000 seeded strings, 1e-9 agreement");
}

#[test]
fn acceptance_c4_synthetic_corpus_cross_validation() {
    let started = Instant::now();
    let dataset = synthdga::pinned_corpus(500, 42).expect("pinned corpus");
    assert_eq!(dataset.len(), 2500);
    let db = SuffixDatabase::bundled();
    let union = FeatureSetSelection::named("union").unwrap();
    let plan = CVPlan::new(5, 5, 42);
    let report = cross_validate(
        &dataset,
        &db,
        &union,
        &HyperParams::default(),
        ForestMode::OneVsRest,
        &plan,
    )
    .expect("cross-validation");

    let total: u64 = report.confusion.iter().flatten().sum();
    assert_eq!(total, 5 * 2500, "pooled confusion must cover every repetition");
    assert!(
        report.metrics.macro_f1 >= 0.95,
        "macro-F1 {} below 0.95",
        report.metrics.macro_f1
    );
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(300), "took {elapsed:?}, budget 5 min");
    pass(
        "C4 synthetic-corpus-cv",
        &format!("macro-F1 {:.5}, pooled {total}, {elapsed:?}", report.metrics.macro_f1),
    );
}

/// 1000 rows, 2 classes, 2 informative features (0, 1) and 8 noise
/// features; column 6 is constant and column 8 duplicates column 7.
fn pinned_selection_matrix(seed: u64) -> FeatureMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(1000);
    let mut labels = Vec::with_capacity(1000);
    for i in 0..1000 {
        let class = i % 2;
        let f0 = if class == 0 { rng.gen_range(0.0..0.45) } else { rng.gen_range(0.55..1.0) };
        let f1 = if class == 0 { rng.gen_range(0.2..0.5) } else { rng.gen_range(0.5..0.8) };
        let mut row = vec![f0, f1];
        for _ in 2..8 {
            row.push(rng.gen_range(0.0..1.0));
        }
        row[6] = 0.5;
        let dup = row[7];
        row.push(dup);
        row.push(rng.gen_range(0.0..1.0));
        rows.push(row);
        labels.push(class);
    }
    FeatureMatrix::from_rows(
        (0..10).map(|i| format!("f{i}")).collect(),
        vec!["a".into(), "b".into()],
        rows,
        labels,
    )
}

#[test]
fn acceptance_c5_selection_pipeline_properties() {
    let started = Instant::now();
    let matrix = pinned_selection_matrix(2024);

    // Degenerate filter drops the constant column.
    let filtered_report = drop_degenerate(&matrix).expect("filter");
    assert!(!filtered_report.selected_ids.contains(&"f6".to_string()));
    let kept: Vec<usize> = filtered_report
        .selected_ids
        .iter()
        .map(|id| id[1..].parse::<usize>().unwrap())
        .collect();
    let filtered = matrix.select_columns(&kept);
    let informative = ["f0", "f1"];

    // Relief-family rankers put both informative features above all noise.
    for report in [relieff(&filtered, 10).unwrap(), multisurf(&filtered).unwrap()] {
        let score = |id: &str| {
            let pos = report.feature_ids.iter().position(|f| f == id).unwrap();
            report.scores[pos]
        };
        let weakest_signal = informative.iter().map(|id| score(id)).fold(f64::INFINITY, f64::min);
        for id in &report.feature_ids {
            if !informative.contains(&id.as_str()) {
                assert!(
                    score(id) < weakest_signal,
                    "{}: noise {id} >= informative ({} vs {weakest_signal})",
                    report.method,
                    score(id)
                );
            }
        }
    }

    // Recursive elimination keeps both informative features.
    for backend in [RfeBackend::Mdi, RfeBackend::Pi] {
        let report = rfe(&filtered, backend, 3, 99).expect("rfe");
        for id in informative {
            assert!(
                report.selected_ids.contains(&id.to_string()),
                "{backend:?} dropped {id}"
            );
        }
    }

    // Permutation importance of every noise feature is almost zero.
    let plan = CVPlan::new(1, 4, 7);
    let folds = dgaclass_core::evalharness::stratified_folds(filtered.labels(), &plan).unwrap();
    let holdout = filtered.select_rows(&folds[0][0]);
    let train_rows: Vec<usize> = folds[0].iter().skip(1).flatten().copied().collect();
    let model = forest::train(
        &filtered.select_rows(&train_rows),
        &HyperParams { n_estimators: 40, ..HyperParams::default() },
        ForestMode::DirectMulticlass,
        5,
    )
    .unwrap();
    let pi = permutation_importance(&model, &holdout, 5, 1234).unwrap();
    for (id, score) in filtered.feature_ids().iter().zip(&pi) {
        if !informative.contains(&id.as_str()) {
            assert!(score.abs() < 0.01, "noise {id} has |PI| {} >= 0.01", score.abs());
        }
    }

    // Spearman collapse merges the exactly duplicated pair.
    let mdi_scores = model.feature_importances().unwrap();
    let collapsed =
        spearman_collapse(&filtered, filtered.n_features() - 1, &mdi_scores).unwrap();
    let has7 = collapsed.selected_ids.contains(&"f7".to_string());
    let has8 = collapsed.selected_ids.contains(&"f8".to_string());
    assert!(has7 ^ has8, "duplicated pair must collapse to one member");

    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(120), "took {elapsed:?}, budget 2 min");
    pass("C5 selection-pipeline", &format!("all five properties hold, {elapsed:?}"));
}

#[test]
fn acceptance_c6_class_weight_formula() {
    let uniform = class_weights(&[10, 90], 0.0).unwrap();
    assert_eq!(uniform.as_slice(), &[1.0, 1.0]);

    let full = class_weights(&[10, 90], 1.0).unwrap();
    assert!((full.as_slice()[0] - 10.0).abs() < 1e-5);
    assert!((full.as_slice()[1] - 1.11111).abs() < 1e-5);

    // Scale invariance: multiplying all counts leaves every weight alone.
    for gamma in [0.0, 0.3, 0.5, 1.0] {
        let base = class_weights(&[10, 90], gamma).unwrap();
        let scaled = class_weights(&[70, 630], gamma).unwrap();
        for (a, b) in base.as_slice().iter().zip(scaled.as_slice()) {
            assert!((a - b).abs() < 1e-12, "gamma {gamma}: {a} vs {b}");
        }
    }
    pass("C6 class-weights", "gamma 0 and 1 exact, scale invariant");
}

fn run_cli(dir: &Path, args: &[&str]) {
    let status = Command::new(env!("CARGO_BIN_EXE_dgaclass"))
        .current_dir(dir)
        .args(args)
        .status()
        .expect("spawning dgaclass");
    assert!(status.success(), "dgaclass {args:?} failed with {status}");
}

#[test]
fn acceptance_c7_byte_identical_outputs() {
    let base = tempfile::tempdir().expect("tempdir");
    let mut outputs: Vec<Vec<(String, Vec<u8>)>> = Vec::new();
    for run in 0..2 {
        let dir = base.path().join(format!("run{run}"));
        std::fs::create_dir(&dir).unwrap();
        run_cli(&dir, &["gen", "--out", "data.csv", "--per-family", "40", "--seed", "42"]);
        run_cli(
            &dir,
            &[
                "train", "--data", "data.csv", "--selection", "rfe-pi", "--mode", "ovr",
                "--out", "model.json", "--seed", "42",
            ],
        );
        run_cli(
            &dir,
            &[
                "eval", "--data", "data.csv", "--selection", "rfe-pi", "--mode", "ovr",
                "--repetitions", "2", "--folds", "5", "--out-dir", "reports", "--seed", "42",
            ],
        );
        // timing.csv is a wall-clock measurement and inherently varies.
        let files = ["data.csv", "model.json", "reports/metrics.csv", "reports/confusion.csv"];
        outputs.push(
            files
                .iter()
                .map(|f| (f.to_string(), std::fs::read(dir.join(f)).expect(f)))
                .collect(),
        );
    }
    for ((name, a), (_, b)) in outputs[0].iter().zip(&outputs[1]) {
        assert_eq!(a, b, "{name} differs between identically seeded runs");
    }
    pass("C7 determinism", "model and report files byte-identical across runs");
}

#[test]
fn acceptance_c8_throughput_budget() {
    let dataset = synthdga::pinned_corpus(500, 77).expect("corpus");
    let db = SuffixDatabase::bundled();
    let union = FeatureSetSelection::named("union").unwrap();
    let (matrix, _) = features::extract_matrix(&dataset, &db, &union).unwrap();
    let model =
        forest::train(&matrix, &HyperParams::default(), ForestMode::OneVsRest, 42).unwrap();

    let report =
        bench_throughput(&model, &union, &db, dataset.domains(), 1024, false).unwrap();
    assert!(
        report.samples_per_second > 2325.0,
        "sustained only {:.0} samples/s",
        report.samples_per_second
    );
    assert!(
        report.mean_us_per_sample < 430.0,
        "mean {:.1} us/sample over budget",
        report.mean_us_per_sample
    );
    // Stretch target, reported but not gating: 128 us/sample end to end.
    let stretch = if report.mean_us_per_sample < 128.0 { "met" } else { "not met" };
    pass(
        "C8 throughput",
        &format!(
            "{:.0} samples/s, mean {:.1} us (stretch 128 us {stretch})",
            report.samples_per_second, report.mean_us_per_sample
        ),
    );
}

#[test]
fn acceptance_c9_macro_metrics_oracle() {
    let hand = vec![vec![8, 2], vec![4, 6]];
    let metrics = macro_metrics(&hand).unwrap();
    assert!((metrics.macro_f1 - 0.69697).abs() < 1e-5, "macro F1 {}", metrics.macro_f1);

    let identity = vec![vec![9, 0, 0], vec![0, 9, 0], vec![0, 0, 9]];
    assert_eq!(macro_metrics(&identity).unwrap().macro_f1, 1.0);

    let zero_diag = vec![vec![0, 7], vec![3, 0]];
    assert_eq!(macro_metrics(&zero_diag).unwrap().macro_f1, 0.0);
    pass("C9 macro-metrics-oracle", "hand-computed confusion values match");
}
