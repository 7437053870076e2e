//! Repeated stratified cross-validation, macro-averaged metrics, and
//! throughput measurement.
//!
//! One pooled confusion matrix is accumulated over all repetitions and
//! folds; macro scores are unweighted means over the classes, so every
//! class counts equally regardless of support.

use crate::dataset::LabeledDataset;
use crate::domains::SuffixDatabase;
use crate::error::EvalError;
use crate::features::{self, FeatureSetSelection};
use crate::forest::{self, ForestMode, ForestModel, HyperParams};
use crate::util::derive_seed;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::io::{self, Write};
use std::time::Instant;

/// Cross-validation plan: `repetitions` independent stratified splits into
/// `folds` parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CVPlan {
    pub repetitions: usize,
    pub folds: usize,
    pub seed: u64,
}

impl Default for CVPlan {
    fn default() -> Self {
        CVPlan { repetitions: 5, folds: 5, seed: 42 }
    }
}

impl CVPlan {
    pub fn new(repetitions: usize, folds: usize, seed: u64) -> Self {
        CVPlan { repetitions, folds, seed }
    }

    fn validate(&self) -> Result<(), EvalError> {
        if self.repetitions < 1 {
            return Err(EvalError::BadPlan("repetitions must be >= 1".into()));
        }
        if self.folds < 2 {
            return Err(EvalError::BadPlan("folds must be >= 2".into()));
        }
        Ok(())
    }
}

/// Per-class precision/recall/F1. A class with no true samples in the
/// pooled test predictions is undefined and excluded from the macro
/// averages.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
    pub defined: bool,
}

/// Macro-averaged metrics over the defined classes.
#[derive(Debug, Clone, PartialEq)]
pub struct MacroMetrics {
    pub per_class: Vec<ClassMetrics>,
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
    pub warnings: Vec<String>,
}

/// Wall-time figures collected during cross-validation.
#[derive(Debug, Clone, PartialEq)]
pub struct TimingProfile {
    /// Mean wall time of one classifier training, in seconds.
    pub training_time_s: f64,
    /// Feature-extraction wall time per sample, in microseconds.
    pub extraction_us_per_sample: f64,
    /// Prediction wall time per sample, in microseconds.
    pub inference_us_per_sample: f64,
    /// Number of classifier trainings performed.
    pub trainings: usize,
}

/// Full cross-validation output.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub class_names: Vec<String>,
    pub metrics: MacroMetrics,
    /// Pooled confusion counts, true class x predicted class.
    pub confusion: Vec<Vec<u64>>,
    pub timing: TimingProfile,
}

/// Seeded stratified fold assignments: per repetition, `folds` disjoint
/// index lists covering every sample, with each class spread so that its
/// per-fold counts differ by at most one.
pub fn stratified_folds(
    labels: &[usize],
    plan: &CVPlan,
) -> Result<Vec<Vec<Vec<usize>>>, EvalError> {
    plan.validate()?;
    let n_classes = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); n_classes];
    for (i, &l) in labels.iter().enumerate() {
        by_class[l].push(i);
    }
    for (class, members) in by_class.iter().enumerate() {
        if members.len() < plan.folds {
            return Err(EvalError::ClassTooSmall {
                class,
                count: members.len(),
                folds: plan.folds,
            });
        }
    }

    let mut repetitions = Vec::with_capacity(plan.repetitions);
    for rep in 0..plan.repetitions {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(plan.seed, rep as u64));
        let mut folds: Vec<Vec<usize>> = vec![Vec::new(); plan.folds];
        for members in &by_class {
            let mut shuffled = members.clone();
            shuffled.shuffle(&mut rng);
            for (i, idx) in shuffled.into_iter().enumerate() {
                folds[i % plan.folds].push(idx);
            }
        }
        repetitions.push(folds);
    }
    Ok(repetitions)
}

/// Per-class and macro precision/recall/F1 from a square confusion matrix
/// of true-class rows and predicted-class columns.
pub fn macro_metrics(confusion: &[Vec<u64>]) -> Result<MacroMetrics, EvalError> {
    let n = confusion.len();
    for row in confusion {
        if row.len() != n {
            return Err(EvalError::NonSquare { rows: n, cols: row.len() });
        }
    }

    let mut per_class = Vec::with_capacity(n);
    let mut warnings = Vec::new();
    let mut sums = (0.0, 0.0, 0.0);
    let mut defined_count = 0usize;
    for c in 0..n {
        let row_sum: u64 = confusion[c].iter().sum();
        let col_sum: u64 = confusion.iter().map(|r| r[c]).sum();
        let tp = confusion[c][c];
        let precision = if col_sum == 0 { 0.0 } else { tp as f64 / col_sum as f64 };
        let recall = if row_sum == 0 { 0.0 } else { tp as f64 / row_sum as f64 };
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        let defined = row_sum > 0;
        if defined {
            sums.0 += precision;
            sums.1 += recall;
            sums.2 += f1;
            defined_count += 1;
        } else {
            warnings.push(format!("class {c} has no true samples; excluded from macro averages"));
        }
        per_class.push(ClassMetrics { precision, recall, f1, support: row_sum, defined });
    }

    let d = defined_count.max(1) as f64;
    Ok(MacroMetrics {
        per_class,
        macro_precision: sums.0 / d,
        macro_recall: sums.1 / d,
        macro_f1: sums.2 / d,
        warnings,
    })
}

/// Builds a confusion matrix from aligned true and predicted labels.
pub fn confusion_matrix(truth: &[usize], predicted: &[usize], n_classes: usize) -> Vec<Vec<u64>> {
    let mut m = vec![vec![0u64; n_classes]; n_classes];
    for (&t, &p) in truth.iter().zip(predicted) {
        m[t][p] += 1;
    }
    m
}

/// Shorthand: macro F1 of predictions against truth.
pub fn macro_f1(truth: &[usize], predicted: &[usize], n_classes: usize) -> f64 {
    macro_metrics(&confusion_matrix(truth, predicted, n_classes))
        .expect("square by construction")
        .macro_f1
}

/// Runs the full protocol: extract features once, then train and test per
/// fold and repetition, pooling one confusion matrix over all test
/// predictions.
pub fn cross_validate(
    dataset: &LabeledDataset,
    suffix_db: &SuffixDatabase,
    selection: &FeatureSetSelection,
    hp: &HyperParams,
    mode: ForestMode,
    plan: &CVPlan,
) -> Result<EvaluationReport, EvalError> {
    plan.validate()?;
    let (matrix, extract_us_total) = features::extract_matrix(dataset, suffix_db, selection)?;
    let folds = stratified_folds(matrix.labels(), plan)?;
    let n_classes = dataset.n_classes();

    let mut confusion = vec![vec![0u64; n_classes]; n_classes];
    let mut train_seconds = 0.0;
    let mut inference_seconds = 0.0;
    let mut predictions_made = 0usize;
    let mut trainings = 0usize;

    for (rep, rep_folds) in folds.iter().enumerate() {
        for test_fold in 0..plan.folds {
            let test_idx = &rep_folds[test_fold];
            let train_idx: Vec<usize> = rep_folds
                .iter()
                .enumerate()
                .filter(|(f, _)| *f != test_fold)
                .flat_map(|(_, idx)| idx.iter().copied())
                .collect();

            let train_matrix = matrix.select_rows(&train_idx);
            let fold_seed = derive_seed(plan.seed, (rep * plan.folds + test_fold) as u64);

            let t0 = Instant::now();
            let model = forest::train(&train_matrix, hp, mode, fold_seed)?;
            train_seconds += t0.elapsed().as_secs_f64();
            trainings += 1;

            let t1 = Instant::now();
            let predicted: Result<Vec<usize>, _> = test_idx
                .par_iter()
                .map(|&i| model.predict(matrix.row(i)))
                .collect();
            let predicted = predicted?;
            inference_seconds += t1.elapsed().as_secs_f64();
            predictions_made += predicted.len();

            for (&i, &p) in test_idx.iter().zip(&predicted) {
                confusion[matrix.labels()[i]][p] += 1;
            }
        }
    }

    let metrics = macro_metrics(&confusion)?;
    let timing = TimingProfile {
        training_time_s: train_seconds / trainings as f64,
        extraction_us_per_sample: extract_us_total / dataset.len() as f64,
        inference_us_per_sample: inference_seconds * 1e6 / predictions_made as f64,
        trainings,
    };
    Ok(EvaluationReport { class_names: dataset.class_names().to_vec(), metrics, confusion, timing })
}

/// End-to-end throughput of parse + extract + predict over a domain batch.
#[derive(Debug, Clone, PartialEq)]
pub struct ThroughputReport {
    pub samples: usize,
    pub mean_us_per_sample: f64,
    pub max_us_per_sample: f64,
    pub samples_per_second: f64,
    /// The real-time budget the run is judged against, in microseconds.
    pub budget_us: f64,
    pub within_budget: bool,
    /// Samples per second with data-parallel classification, when the
    /// opt-in parallel pass ran.
    pub parallel_samples_per_second: Option<f64>,
}

/// Latency budget per sample, in microseconds.
pub const LATENCY_BUDGET_US: f64 = 430.0;

/// Measures single-threaded end-to-end latency per sample (parse, extract,
/// predict) and sustained throughput; optionally also a data-parallel
/// throughput pass over chunks of `batch` domains.
pub fn bench_throughput(
    model: &ForestModel,
    selection: &FeatureSetSelection,
    suffix_db: &SuffixDatabase,
    domains_list: &[String],
    batch: usize,
    parallel: bool,
) -> Result<ThroughputReport, EvalError> {
    if domains_list.len() < 1000 {
        return Err(EvalError::BadPlan(format!(
            "throughput measurement needs >= 1000 domains, got {}",
            domains_list.len()
        )));
    }

    let classify_one = |raw: &String| -> Result<usize, EvalError> {
        let parsed = crate::domains::parse(raw, suffix_db)?;
        let vector = features::extract(&parsed, selection)?;
        Ok(model.predict(vector.values())?)
    };

    // Warm-up pass over a small prefix.
    for raw in domains_list.iter().take(32) {
        classify_one(raw)?;
    }

    let mut max_us = 0.0f64;
    let started = Instant::now();
    for raw in domains_list {
        let t0 = Instant::now();
        classify_one(raw)?;
        max_us = max_us.max(t0.elapsed().as_secs_f64() * 1e6);
    }
    let total_s = started.elapsed().as_secs_f64();
    let mean_us = total_s * 1e6 / domains_list.len() as f64;

    let parallel_samples_per_second = if parallel {
        let t0 = Instant::now();
        let results: Result<Vec<usize>, EvalError> = domains_list
            .par_chunks(batch.max(1))
            .flat_map_iter(|chunk| chunk.iter().map(classify_one))
            .collect();
        results?;
        Some(domains_list.len() as f64 / t0.elapsed().as_secs_f64())
    } else {
        None
    };

    Ok(ThroughputReport {
        samples: domains_list.len(),
        mean_us_per_sample: mean_us,
        max_us_per_sample: max_us,
        samples_per_second: domains_list.len() as f64 / total_s,
        budget_us: LATENCY_BUDGET_US,
        within_budget: mean_us < LATENCY_BUDGET_US,
        parallel_samples_per_second,
    })
}

/// Metrics CSV: one row per class plus a final `macro` row.
pub fn write_metrics_csv<W: Write>(mut w: W, report: &EvaluationReport) -> io::Result<()> {
    writeln!(w, "class,precision,recall,f1,support")?;
    for (name, m) in report.class_names.iter().zip(&report.metrics.per_class) {
        writeln!(
            w,
            "{name},{:.6},{:.6},{:.6},{}",
            m.precision, m.recall, m.f1, m.support
        )?;
    }
    let m = &report.metrics;
    writeln!(w, "macro,{:.6},{:.6},{:.6},", m.macro_precision, m.macro_recall, m.macro_f1)?;
    Ok(())
}

/// Confusion CSV: header of predicted-class labels, one row per true class.
pub fn write_confusion_csv<W: Write>(mut w: W, report: &EvaluationReport) -> io::Result<()> {
    writeln!(w, "true\\predicted,{}", report.class_names.join(","))?;
    for (name, row) in report.class_names.iter().zip(&report.confusion) {
        let counts: Vec<String> = row.iter().map(|c| c.to_string()).collect();
        writeln!(w, "{name},{}", counts.join(","))?;
    }
    Ok(())
}

/// Timing CSV with the measured wall-time figures.
pub fn write_timing_csv<W: Write>(mut w: W, report: &EvaluationReport) -> io::Result<()> {
    writeln!(
        w,
        "training_time_per_classifier_s,feature_extraction_time_per_sample_us,inference_time_per_sample_us,trainings"
    )?;
    let t = &report.timing;
    writeln!(
        w,
        "{:.6},{:.3},{:.3},{}",
        t.training_time_s, t.extraction_us_per_sample, t.inference_us_per_sample, t.trainings
    )?;
    Ok(())
}

/// Long-format comparison of two reports over the same classes: per
/// (true, predicted) cell, each model's share of the true class's samples.
pub fn write_combined_confusion_csv<W: Write>(
    mut w: W,
    a: &EvaluationReport,
    b: &EvaluationReport,
) -> io::Result<()> {
    assert_eq!(a.class_names, b.class_names, "reports must share a class index");
    writeln!(w, "true,predicted,share_model_a,share_model_b")?;
    let share = |report: &EvaluationReport, t: usize, p: usize| -> f64 {
        let row_sum: u64 = report.confusion[t].iter().sum();
        if row_sum == 0 {
            0.0
        } else {
            report.confusion[t][p] as f64 / row_sum as f64
        }
    };
    for (t, true_name) in a.class_names.iter().enumerate() {
        for (p, pred_name) in a.class_names.iter().enumerate() {
            writeln!(
                w,
                "{true_name},{pred_name},{:.6},{:.6}",
                share(a, t, p),
                share(b, t, p)
            )?;
        }
    }
    Ok(())
}
