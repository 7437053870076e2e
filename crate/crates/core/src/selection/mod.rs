//! Feature-selection pipeline: degenerate-feature filtering, Relief-family
//! rankers, recursive feature elimination with two importance backends,
//! set combination, and Spearman multicollinearity collapse.

mod relief;
mod rfe;
mod spearman;

pub use relief::{multisurf, relieff};
pub use rfe::{rfe, RfeBackend};
pub use spearman::{spearman_collapse, spearman_rho};

use crate::dataset::FeatureMatrix;
use crate::error::{EvalError, SelectionError};
use crate::evalharness;
use crate::forest::{ForestModel, HyperParams};
use crate::util::derive_seed;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashSet};
use std::io::{Read, Write};

/// Output of one selection method: scores for every input feature and the
/// ordered subset that survived.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    pub method: String,
    /// Method settings, stringly typed for the report file.
    pub parameters: BTreeMap<String, String>,
    /// The input feature ids, in catalog order.
    pub feature_ids: Vec<String>,
    /// Per-feature importance scores, aligned with `feature_ids`.
    pub scores: Vec<f64>,
    /// Selected ids, ordered as in `feature_ids`.
    pub selected_ids: Vec<String>,
}

impl SelectionReport {
    /// Writes the report as a JSON document.
    pub fn save<W: Write>(&self, w: W) -> std::io::Result<()> {
        serde_json::to_writer_pretty(w, self)?;
        Ok(())
    }

    /// Reads a report written by [`Self::save`].
    pub fn load<R: Read>(r: R) -> std::io::Result<Self> {
        serde_json::from_reader(r).map_err(std::io::Error::from)
    }
}

pub(crate) fn map_eval(e: EvalError) -> SelectionError {
    match e {
        EvalError::ClassTooSmall { class, count, folds } => {
            SelectionError::ClassTooSmall { class, count, need: folds }
        }
        other => SelectionError::BadMatrix(other.to_string()),
    }
}

const MAX_MI_BINS: usize = 32;

/// Equal-frequency discretization into at most `max_bins` bins; tied values
/// always share a bin.
fn equal_frequency_bins(column: &[f64], max_bins: usize) -> Vec<usize> {
    let n = column.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| column[a].total_cmp(&column[b]));
    let target = n.div_ceil(max_bins);
    let mut bins = vec![0usize; n];
    let mut bin = 0usize;
    let mut filled = 0usize;
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j < n && column[order[j]] == column[order[i]] {
            j += 1;
        }
        if filled >= target && bin + 1 < max_bins {
            bin += 1;
            filled = 0;
        }
        for &row in &order[i..j] {
            bins[row] = bin;
        }
        filled += j - i;
        i = j;
    }
    bins
}

/// Plug-in mutual information, in bits, between a discretized feature and
/// the class labels.
fn binned_mutual_information(bins: &[usize], labels: &[usize]) -> f64 {
    let n = bins.len() as f64;
    let n_bins = bins.iter().max().map_or(0, |m| m + 1);
    let n_classes = labels.iter().max().map_or(0, |m| m + 1);
    let mut joint = vec![0u32; n_bins * n_classes];
    let mut p_bin = vec![0u32; n_bins];
    let mut p_class = vec![0u32; n_classes];
    for (&b, &c) in bins.iter().zip(labels) {
        joint[b * n_classes + c] += 1;
        p_bin[b] += 1;
        p_class[c] += 1;
    }
    let mut mi = 0.0;
    for b in 0..n_bins {
        for c in 0..n_classes {
            let j = joint[b * n_classes + c];
            if j == 0 {
                continue;
            }
            let p_joint = j as f64 / n;
            let expected = (p_bin[b] as f64 / n) * (p_class[c] as f64 / n);
            mi += p_joint * (p_joint / expected).log2();
        }
    }
    mi.max(0.0)
}

fn is_constant(column: &[f64]) -> bool {
    column.windows(2).all(|w| w[0] == w[1])
}

/// Removes ill-defined features: zero variance, or zero estimated mutual
/// information with the labels (equal-frequency binning into at most 32
/// bins, plug-in estimate).
pub fn drop_degenerate(m: &FeatureMatrix) -> Result<SelectionReport, SelectionError> {
    if m.n_rows() < 2 {
        return Err(SelectionError::BadMatrix("need at least 2 rows".into()));
    }
    if m.labels().iter().collect::<HashSet<_>>().len() < 2 {
        return Err(SelectionError::BadMatrix("need at least 2 classes".into()));
    }
    let mut scores = Vec::with_capacity(m.n_features());
    let mut selected_ids = Vec::new();
    for f in 0..m.n_features() {
        let column = m.column(f);
        let mi = if is_constant(&column) {
            0.0
        } else {
            binned_mutual_information(&equal_frequency_bins(&column, MAX_MI_BINS), m.labels())
        };
        scores.push(mi);
        if !is_constant(&column) && mi > 1e-12 {
            selected_ids.push(m.feature_ids()[f].clone());
        }
    }
    if selected_ids.is_empty() {
        return Err(SelectionError::AllDegenerate);
    }
    let mut parameters = BTreeMap::new();
    parameters.insert("max_bins".into(), MAX_MI_BINS.to_string());
    Ok(SelectionReport {
        method: "variance-mi".into(),
        parameters,
        feature_ids: m.feature_ids().to_vec(),
        scores,
        selected_ids,
    })
}

/// Mean-decrease-impurity scores of a trained forest, aligned with its
/// feature ids.
pub fn mdi(model: &ForestModel) -> Result<Vec<f64>, SelectionError> {
    Ok(model.feature_importances()?)
}

/// Mean macro-F1 drop over `repeats` seeded permutations of each feature
/// column of a holdout set. Holdout rows must be disjoint from training.
pub fn permutation_importance(
    model: &ForestModel,
    holdout: &FeatureMatrix,
    repeats: usize,
    seed: u64,
) -> Result<Vec<f64>, SelectionError> {
    if repeats == 0 {
        return Err(SelectionError::ZeroRepeats);
    }
    let n_classes = model.n_classes();
    let predict_all = |mat: &FeatureMatrix| -> Result<Vec<usize>, SelectionError> {
        (0..mat.n_rows())
            .map(|r| model.predict(mat.row(r)).map_err(SelectionError::from))
            .collect()
    };
    let baseline_pred = predict_all(holdout)?;
    let baseline = evalharness::macro_f1(holdout.labels(), &baseline_pred, n_classes);

    let mut scores = Vec::with_capacity(holdout.n_features());
    let mut permuted = holdout.clone();
    for f in 0..holdout.n_features() {
        let original = holdout.column(f);
        let mut drop_sum = 0.0;
        for r in 0..repeats {
            let mut shuffled = original.clone();
            let mut rng =
                ChaCha8Rng::seed_from_u64(derive_seed(seed, (f as u64) << 20 | r as u64));
            shuffled.shuffle(&mut rng);
            permuted.set_column(f, &shuffled);
            let pred = predict_all(&permuted)?;
            drop_sum += baseline - evalharness::macro_f1(holdout.labels(), &pred, n_classes);
        }
        permuted.set_column(f, &original);
        scores.push(drop_sum / repeats as f64);
    }
    Ok(scores)
}

/// Set combination of selection outputs over the same catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombineMode {
    Union,
    Intersection,
}

/// Union or intersection of the reports' selected ids, ordered by catalog
/// order. Scores become per-feature vote counts.
pub fn combine(
    reports: &[SelectionReport],
    mode: CombineMode,
) -> Result<SelectionReport, SelectionError> {
    if reports.len() < 2 {
        return Err(SelectionError::BadMatrix("need at least 2 reports to combine".into()));
    }
    let feature_ids = reports[0].feature_ids.clone();
    for r in reports {
        if r.feature_ids != feature_ids {
            return Err(SelectionError::BadMatrix(
                "reports cover different feature catalogs".into(),
            ));
        }
    }
    let sets: Vec<HashSet<&String>> =
        reports.iter().map(|r| r.selected_ids.iter().collect()).collect();
    let mut scores = Vec::with_capacity(feature_ids.len());
    let mut selected_ids = Vec::new();
    for id in &feature_ids {
        let votes = sets.iter().filter(|s| s.contains(id)).count();
        scores.push(votes as f64);
        let keep = match mode {
            CombineMode::Union => votes > 0,
            CombineMode::Intersection => votes == reports.len(),
        };
        if keep {
            selected_ids.push(id.clone());
        }
    }
    if selected_ids.is_empty() && mode == CombineMode::Intersection {
        return Err(SelectionError::EmptyIntersection);
    }
    let mut parameters = BTreeMap::new();
    parameters.insert("inputs".into(), reports.iter().map(|r| r.method.as_str()).collect::<Vec<_>>().join("+"));
    Ok(SelectionReport {
        method: match mode {
            CombineMode::Union => "union".into(),
            CombineMode::Intersection => "intersection".into(),
        },
        parameters,
        feature_ids,
        scores,
        selected_ids,
    })
}

/// Everything the full pipeline produces, in run order.
pub struct PipelineOutput {
    pub reports: Vec<SelectionReport>,
}

/// Runs the whole selection pipeline: degenerate filter, then ReliefF,
/// MultiSURF, RFE-MDI and RFE-PI on the retained features, their union and
/// intersection, and a Spearman collapse of the union.
///
/// `target_clusters` defaults to 64/76 of the union size, mirroring the
/// ratio the collapse is calibrated for.
pub fn run_pipeline(
    m: &FeatureMatrix,
    k_neighbors: usize,
    folds: usize,
    target_clusters: Option<usize>,
    seed: u64,
) -> Result<PipelineOutput, SelectionError> {
    let filtered_report = drop_degenerate(m)?;
    let kept: Vec<usize> = filtered_report
        .selected_ids
        .iter()
        .map(|id| m.feature_ids().iter().position(|f| f == id).unwrap())
        .collect();
    let filtered = m.select_columns(&kept);

    let relieff_report = relieff(&filtered, k_neighbors)?;
    let multisurf_report = multisurf(&filtered)?;
    let rfe_mdi_report = rfe(&filtered, RfeBackend::Mdi, folds, derive_seed(seed, 1))?;
    let rfe_pi_report = rfe(&filtered, RfeBackend::Pi, folds, derive_seed(seed, 2))?;

    let selector_reports = [
        relieff_report.clone(),
        multisurf_report.clone(),
        rfe_mdi_report.clone(),
        rfe_pi_report.clone(),
    ];
    let union = combine(&selector_reports, CombineMode::Union)?;
    let intersection = combine(&selector_reports, CombineMode::Intersection)?;

    // Spearman collapse over the union columns, tie-broken by MDI of a
    // forest trained on exactly those columns.
    let union_cols: Vec<usize> = union
        .selected_ids
        .iter()
        .map(|id| filtered.feature_ids().iter().position(|f| f == id).unwrap())
        .collect();
    let union_matrix = filtered.select_columns(&union_cols);
    let forest = crate::forest::train(
        &union_matrix,
        &HyperParams::default(),
        crate::forest::ForestMode::DirectMulticlass,
        derive_seed(seed, 3),
    )?;
    let mdi_scores = mdi(&forest)?;
    let target = target_clusters
        .unwrap_or_else(|| (union_matrix.n_features() * 64).div_ceil(76))
        .clamp(1, union_matrix.n_features());
    let mut collapsed = spearman_collapse(&union_matrix, target, &mdi_scores)?;
    collapsed.method = "union-spearman".into();

    Ok(PipelineOutput {
        reports: vec![
            filtered_report,
            relieff_report,
            multisurf_report,
            rfe_mdi_report,
            rfe_pi_report,
            union,
            intersection,
            collapsed,
        ],
    })
}


#[cfg(test)]
mod tests {
    use super::testdata::pinned_matrix;
    use super::*;
    use crate::forest::{train, ForestMode};
    use rand::Rng;

    #[test]
    fn drop_degenerate_removes_constant_column() {
        let m = pinned_matrix(1);
        let report = drop_degenerate(&m).unwrap();
        assert!(!report.selected_ids.contains(&"f6".to_string()));
        assert!(report.selected_ids.contains(&"f0".to_string()));
        assert_eq!(report.scores[6], 0.0);
    }

    #[test]
    fn drop_degenerate_keeps_label_column_with_max_mi() {
        // A column equal to the label index carries full label information.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let labels: Vec<usize> = (0..400).map(|i| i % 2).collect();
        let rows: Vec<Vec<f64>> = labels
            .iter()
            .map(|&l| vec![l as f64, rng.gen_range(0.0..1.0)])
            .collect();
        let m = FeatureMatrix::from_rows(
            vec!["label-copy".into(), "noise".into()],
            vec!["a".into(), "b".into()],
            rows,
            labels,
        );
        let report = drop_degenerate(&m).unwrap();
        assert!(report.selected_ids.contains(&"label-copy".to_string()));
        // Plug-in MI of a perfect predictor of a balanced binary label: 1 bit.
        assert!((report.scores[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn shuffled_noise_has_near_zero_mi_on_10k_rows() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let labels: Vec<usize> = (0..10_000).map(|i| i % 2).collect();
        let rows: Vec<Vec<f64>> = (0..10_000)
            .map(|_| vec![rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)])
            .collect();
        let m = FeatureMatrix::from_rows(
            vec!["n0".into(), "n1".into()],
            vec!["a".into(), "b".into()],
            rows,
            labels,
        );
        let report = drop_degenerate(&m).unwrap();
        assert!(report.scores[0] < 0.01, "mi = {}", report.scores[0]);
        assert!(report.scores[1] < 0.01);
    }

    #[test]
    fn all_degenerate_errors() {
        let m = FeatureMatrix::from_rows(
            vec!["c".into()],
            vec!["a".into(), "b".into()],
            vec![vec![3.0], vec![3.0], vec![3.0], vec![3.0]],
            vec![0, 1, 0, 1],
        );
        assert_eq!(drop_degenerate(&m).unwrap_err(), SelectionError::AllDegenerate);
    }

    #[test]
    fn permutation_importance_zero_for_unused_feature() {
        let m = pinned_matrix(2);
        let model = train(
            &m,
            &HyperParams { n_estimators: 20, ..HyperParams::default() },
            ForestMode::DirectMulticlass,
            11,
        )
        .unwrap();
        // Column 6 is constant: no split can use it, so permuting it
        // changes nothing.
        let scores = permutation_importance(&model, &m, 3, 99).unwrap();
        assert_eq!(scores[6], 0.0);
        assert!(scores[0] > 0.0 || scores[1] > 0.0);
    }

    #[test]
    fn permutation_importance_separates_signal_from_noise() {
        let m = pinned_matrix(3);
        let plan = evalharness::CVPlan::new(1, 4, 7);
        let folds = evalharness::stratified_folds(m.labels(), &plan).unwrap();
        let holdout = m.select_rows(&folds[0][0]);
        let train_rows: Vec<usize> =
            folds[0].iter().skip(1).flatten().copied().collect();
        let train_matrix = m.select_rows(&train_rows);
        let model = train(
            &train_matrix,
            &HyperParams { n_estimators: 40, ..HyperParams::default() },
            ForestMode::DirectMulticlass,
            5,
        )
        .unwrap();
        let scores = permutation_importance(&model, &holdout, 5, 1234).unwrap();
        let signal = scores[0].max(scores[1]);
        for noise in [2, 3, 4, 5, 6, 7, 8, 9] {
            assert!(
                signal > 10.0 * scores[noise].abs(),
                "noise f{noise} score {} vs signal {signal}",
                scores[noise]
            );
        }
    }

    #[test]
    fn permutation_importance_rejects_zero_repeats() {
        let m = pinned_matrix(4);
        let model = train(&m, &HyperParams::default(), ForestMode::DirectMulticlass, 1).unwrap();
        assert_eq!(
            permutation_importance(&model, &m, 0, 1).unwrap_err(),
            SelectionError::ZeroRepeats
        );
    }

    #[test]
    fn combine_union_and_intersection() {
        let ids = vec!["a".to_string(), "b".to_string(), "c".to_string()];
        let report = |selected: &[&str], method: &str| SelectionReport {
            method: method.into(),
            parameters: BTreeMap::new(),
            feature_ids: ids.clone(),
            scores: vec![0.0; 3],
            selected_ids: selected.iter().map(|s| s.to_string()).collect(),
        };
        let r1 = report(&["a", "b"], "x");
        let r2 = report(&["b", "c"], "y");
        let union = combine(&[r1.clone(), r2.clone()], CombineMode::Union).unwrap();
        assert_eq!(union.selected_ids, vec!["a", "b", "c"]);
        let inter = combine(&[r1, r2], CombineMode::Intersection).unwrap();
        assert_eq!(inter.selected_ids, vec!["b"]);
    }

    #[test]
    fn combine_empty_intersection_errors() {
        let ids = vec!["a".to_string(), "b".to_string()];
        let report = |selected: &[&str]| SelectionReport {
            method: "m".into(),
            parameters: BTreeMap::new(),
            feature_ids: ids.clone(),
            scores: vec![0.0; 2],
            selected_ids: selected.iter().map(|s| s.to_string()).collect(),
        };
        assert_eq!(
            combine(&[report(&["a"]), report(&["b"])], CombineMode::Intersection).unwrap_err(),
            SelectionError::EmptyIntersection
        );
    }

    #[test]
    fn report_round_trips_through_json() {
        let m = pinned_matrix(6);
        let report = drop_degenerate(&m).unwrap();
        let mut buf = Vec::new();
        report.save(&mut buf).unwrap();
        let back = SelectionReport::load(&buf[..]).unwrap();
        assert_eq!(back, report);
    }
}
