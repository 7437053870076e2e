//! Recursive feature elimination with cross-validated scoring.
//!
//! Starting from the full feature set, each iteration trains a forest,
//! ranks the current features by the chosen backend, drops the single
//! least important one, and records the stratified-CV macro-F1 of the set.
//! The final selection is the set with the best score; ties keep the
//! larger (earlier) set.

use super::{map_eval, permutation_importance, SelectionReport};
use crate::dataset::FeatureMatrix;
use crate::error::SelectionError;
use crate::evalharness::{self, CVPlan};
use crate::forest::{self, ForestMode, HyperParams};
use crate::util::derive_seed;
use std::collections::BTreeMap;

/// Importance backend for the per-iteration ranking.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RfeBackend {
    /// Mean decrease impurity of a forest trained on all rows.
    Mdi,
    /// Permutation importance on an internal stratified holdout.
    Pi,
}

impl RfeBackend {
    fn name(self) -> &'static str {
        match self {
            RfeBackend::Mdi => "mdi",
            RfeBackend::Pi => "pi",
        }
    }
}

/// Internal forest configuration; elimination retrains many times, so the
/// forest is kept small.
fn rfe_forest() -> HyperParams {
    HyperParams { n_estimators: 30, ..HyperParams::default() }
}

const PI_REPEATS: usize = 3;

fn cv_macro_f1(
    m: &FeatureMatrix,
    cols: &[usize],
    folds: &[Vec<usize>],
    hp: &HyperParams,
    seed: u64,
) -> Result<f64, SelectionError> {
    let view = m.select_columns(cols);
    let n_classes = m.labels().iter().max().map_or(0, |l| l + 1);
    let mut confusion = vec![vec![0u64; n_classes]; n_classes];
    for test_fold in 0..folds.len() {
        let train_rows: Vec<usize> = folds
            .iter()
            .enumerate()
            .filter(|(f, _)| *f != test_fold)
            .flat_map(|(_, rows)| rows.iter().copied())
            .collect();
        let model = forest::train(
            &view.select_rows(&train_rows),
            hp,
            ForestMode::DirectMulticlass,
            derive_seed(seed, test_fold as u64),
        )?;
        for &r in &folds[test_fold] {
            let predicted = model.predict(view.row(r))?;
            confusion[m.labels()[r]][predicted] += 1;
        }
    }
    Ok(evalharness::macro_metrics(&confusion).map_err(map_eval)?.macro_f1)
}

fn rank_features(
    m: &FeatureMatrix,
    cols: &[usize],
    backend: RfeBackend,
    hp: &HyperParams,
    seed: u64,
) -> Result<Vec<f64>, SelectionError> {
    let view = m.select_columns(cols);
    match backend {
        RfeBackend::Mdi => {
            let model = forest::train(
                &view,
                hp,
                ForestMode::DirectMulticlass,
                derive_seed(seed, 0xA),
            )?;
            super::mdi(&model)
        }
        RfeBackend::Pi => {
            // Internal 75/25 stratified split: rank on a holdout the
            // ranking model never saw.
            let plan = CVPlan::new(1, 4, derive_seed(seed, 0xB));
            let split = evalharness::stratified_folds(view.labels(), &plan).map_err(map_eval)?;
            let holdout_rows = &split[0][0];
            let train_rows: Vec<usize> =
                split[0].iter().skip(1).flatten().copied().collect();
            let model = forest::train(
                &view.select_rows(&train_rows),
                hp,
                ForestMode::DirectMulticlass,
                derive_seed(seed, 0xC),
            )?;
            permutation_importance(
                &model,
                &view.select_rows(holdout_rows),
                PI_REPEATS,
                derive_seed(seed, 0xD),
            )
        }
    }
}

/// Runs recursive feature elimination and returns the best-scoring set.
pub fn rfe(
    m: &FeatureMatrix,
    backend: RfeBackend,
    folds: usize,
    seed: u64,
) -> Result<SelectionReport, SelectionError> {
    if m.n_features() < 2 {
        return Err(SelectionError::BadMatrix("recursive elimination needs >= 2 features".into()));
    }
    let hp = rfe_forest();
    let plan = CVPlan::new(1, folds, derive_seed(seed, 0xF0));
    let fold_rows = evalharness::stratified_folds(m.labels(), &plan)
        .map_err(map_eval)?
        .remove(0);

    let mut current: Vec<usize> = (0..m.n_features()).collect();
    let mut history: Vec<(Vec<usize>, f64)> = Vec::new();
    // Iteration at which each feature was eliminated; survivors keep the
    // maximum so elimination order doubles as the reported score.
    let mut dropped_at = vec![usize::MAX; m.n_features()];

    for iteration in 0.. {
        let score = cv_macro_f1(m, &current, &fold_rows, &hp, derive_seed(seed, iteration))?;
        history.push((current.clone(), score));
        if current.len() == 1 {
            break;
        }
        let ranks = rank_features(m, &current, backend, &hp, derive_seed(seed, 0x1000 + iteration))?;
        let mut weakest = 0;
        for (pos, &r) in ranks.iter().enumerate() {
            if r < ranks[weakest] {
                weakest = pos;
            }
        }
        dropped_at[current[weakest]] = iteration as usize;
        current.remove(weakest);
    }

    let mut best = 0;
    for (i, (_, score)) in history.iter().enumerate() {
        if *score > history[best].1 {
            best = i;
        }
    }
    let (best_set, best_score) = &history[best];
    let selected_ids: Vec<String> =
        best_set.iter().map(|&c| m.feature_ids()[c].clone()).collect();

    let total = history.len();
    let scores: Vec<f64> = dropped_at
        .iter()
        .map(|&d| if d == usize::MAX { total as f64 } else { d as f64 })
        .collect();

    let mut parameters = BTreeMap::new();
    parameters.insert("backend".into(), backend.name().to_string());
    parameters.insert("folds".into(), folds.to_string());
    parameters.insert("n_estimators".into(), hp.n_estimators.to_string());
    parameters.insert("best_size".into(), best_set.len().to_string());
    parameters.insert("best_score".into(), format!("{best_score:.6}"));
    parameters.insert(
        "cv_curve".into(),
        history
            .iter()
            .map(|(set, score)| format!("{}:{score:.4}", set.len()))
            .collect::<Vec<_>>()
            .join(" "),
    );

    Ok(SelectionReport {
        method: format!("rfe-{}", backend.name()),
        parameters,
        feature_ids: m.feature_ids().to_vec(),
        scores,
        selected_ids,
    })
}

#[cfg(test)]
mod tests {
    use super::super::testdata::pinned_matrix;
    use super::*;

    #[test]
    fn rfe_retains_informative_features() {
        for backend in [RfeBackend::Mdi, RfeBackend::Pi] {
            let m = pinned_matrix(31);
            let report = rfe(&m, backend, 3, 77).unwrap();
            assert!(
                report.selected_ids.contains(&"f0".to_string()),
                "{backend:?} dropped f0: {:?}",
                report.selected_ids
            );
            assert!(
                report.selected_ids.contains(&"f1".to_string()),
                "{backend:?} dropped f1: {:?}",
                report.selected_ids
            );
        }
    }

    #[test]
    fn rfe_removes_exactly_one_feature_per_iteration() {
        let m = pinned_matrix(32);
        let report = rfe(&m, RfeBackend::Mdi, 2, 5).unwrap();
        let curve = &report.parameters["cv_curve"];
        let sizes: Vec<usize> = curve
            .split(' ')
            .map(|e| e.split(':').next().unwrap().parse().unwrap())
            .collect();
        assert_eq!(sizes, (1..=10).rev().collect::<Vec<_>>());
    }

    #[test]
    fn rfe_is_deterministic() {
        let m = pinned_matrix(33);
        let a = rfe(&m, RfeBackend::Mdi, 2, 9).unwrap();
        let b = rfe(&m, RfeBackend::Mdi, 2, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rfe_needs_two_features() {
        let m = pinned_matrix(34).select_columns(&[0]);
        assert!(matches!(
            rfe(&m, RfeBackend::Mdi, 2, 1),
            Err(SelectionError::BadMatrix(_))
        ));
    }
}
