//! Bagged random forests with class weighting, either direct multiclass or
//! one-vs-rest, plus per-prediction feature attributions.

mod tree;

pub use tree::{DecisionTree, Node};

use crate::dataset::FeatureMatrix;
use crate::error::ForestError;
use crate::util::derive_seed;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::io::{Read, Write};
use tree::TrainingData;

/// Split quality criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitCriterion {
    Gini,
    Entropy,
}

impl fmt::Display for SplitCriterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SplitCriterion::Gini => write!(f, "gini"),
            SplitCriterion::Entropy => write!(f, "entropy"),
        }
    }
}

/// Number of candidate features drawn at each split.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MaxFeatures {
    Sqrt,
    Log2,
    All,
    Fraction(f64),
}

impl MaxFeatures {
    pub(crate) fn resolve(&self, n_features: usize) -> usize {
        let k = match self {
            MaxFeatures::Sqrt => (n_features as f64).sqrt().floor() as usize,
            MaxFeatures::Log2 => (n_features as f64).log2().floor() as usize,
            MaxFeatures::All => n_features,
            MaxFeatures::Fraction(f) => (f * n_features as f64).floor() as usize,
        };
        k.clamp(1, n_features)
    }
}

impl fmt::Display for MaxFeatures {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MaxFeatures::Sqrt => write!(f, "sqrt"),
            MaxFeatures::Log2 => write!(f, "log2"),
            MaxFeatures::All => write!(f, "all"),
            MaxFeatures::Fraction(x) => write!(f, "{x}"),
        }
    }
}

/// Class-rebalancing mode. `Gamma(g)` scales class i by
/// `(total / count_i)^g`; `Balanced` additionally divides by the number of
/// classes, which leaves predictions unchanged up to a constant factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassWeighting {
    None,
    Balanced,
    Gamma(f64),
}

impl fmt::Display for ClassWeighting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassWeighting::None => write!(f, "none"),
            ClassWeighting::Balanced => write!(f, "balanced"),
            ClassWeighting::Gamma(g) => write!(f, "gamma({g})"),
        }
    }
}

/// Forest hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperParams {
    pub n_estimators: usize,
    pub criterion: SplitCriterion,
    /// `None` means unlimited depth.
    pub max_depth: Option<usize>,
    pub max_features: MaxFeatures,
    pub bootstrap: bool,
    pub class_weight: ClassWeighting,
}

impl Default for HyperParams {
    fn default() -> Self {
        HyperParams {
            n_estimators: 100,
            criterion: SplitCriterion::Gini,
            max_depth: None,
            max_features: MaxFeatures::Sqrt,
            bootstrap: true,
            class_weight: ClassWeighting::None,
        }
    }
}

impl HyperParams {
    pub fn validate(&self) -> Result<(), ForestError> {
        if self.n_estimators < 1 {
            return Err(ForestError::BadHyperParams("n_estimators must be >= 1".into()));
        }
        if self.max_depth == Some(0) {
            return Err(ForestError::BadHyperParams("max_depth must be >= 1".into()));
        }
        if let MaxFeatures::Fraction(f) = self.max_features {
            if !(f > 0.0 && f <= 1.0) {
                return Err(ForestError::BadHyperParams(format!(
                    "max_features fraction {f} outside (0, 1]"
                )));
            }
        }
        if let ClassWeighting::Gamma(g) = self.class_weight {
            if !(0.0..=1.0).contains(&g) {
                return Err(ForestError::BadHyperParams(format!("gamma {g} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

/// Per-class rebalancing weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassWeights {
    weights: Vec<f64>,
}

impl ClassWeights {
    pub fn uniform(n_classes: usize) -> Self {
        ClassWeights { weights: vec![1.0; n_classes] }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }
}

/// `C_i = (total / count_i)^gamma`. With `gamma = 0` every class gets
/// weight 1; `gamma = 1` equalizes the total weight of every class.
pub fn class_weights(counts: &[usize], gamma: f64) -> Result<ClassWeights, ForestError> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(ForestError::BadHyperParams(format!("gamma {gamma} outside [0, 1]")));
    }
    if let Some(i) = counts.iter().position(|&c| c == 0) {
        return Err(ForestError::EmptyClass(i));
    }
    let total: usize = counts.iter().sum();
    let weights = counts
        .iter()
        .map(|&c| (total as f64 / c as f64).powf(gamma))
        .collect();
    Ok(ClassWeights { weights })
}

fn resolve_class_weights(
    weighting: ClassWeighting,
    counts: &[usize],
) -> Result<ClassWeights, ForestError> {
    match weighting {
        ClassWeighting::None => Ok(ClassWeights::uniform(counts.len())),
        ClassWeighting::Balanced => {
            let mut cw = class_weights(counts, 1.0)?;
            let k = counts.len() as f64;
            cw.weights.iter_mut().for_each(|w| *w /= k);
            Ok(cw)
        }
        ClassWeighting::Gamma(g) => class_weights(counts, g),
    }
}

/// Multiclass strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForestMode {
    DirectMulticlass,
    OneVsRest,
}

impl fmt::Display for ForestMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ForestMode::DirectMulticlass => write!(f, "rf"),
            ForestMode::OneVsRest => write!(f, "ovr"),
        }
    }
}

/// A trained forest: either one multiclass forest or one binary forest per
/// class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub mode: ForestMode,
    pub class_names: Vec<String>,
    pub hyperparams: HyperParams,
    pub seed: u64,
    /// Name of the feature selection the model was trained on.
    pub selection_name: String,
    /// Feature ids, aligned with input vector positions.
    pub feature_ids: Vec<String>,
    trees: Vec<DecisionTree>,
    per_class: Vec<Vec<DecisionTree>>,
}

/// Per-prediction output of [`ForestModel::explain`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Explanation {
    pub predicted: usize,
    pub class_name: String,
    pub probabilities: Vec<f64>,
    /// (feature id, input value) pairs for the whole input.
    pub feature_values: Vec<(String, f64)>,
    /// Top-k (feature id, attributed impurity decrease), best first.
    pub attributions: Vec<(String, f64)>,
    /// Sum of attributions over all features, not only the top k.
    pub total_attribution: f64,
}

const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format_version: u32,
    model: ForestModel,
}

fn bootstrap_rows(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    (0..n).map(|_| rng.gen_range(0..n)).collect()
}

fn train_forest_trees(
    data: &TrainingData,
    n_rows: usize,
    hp: &HyperParams,
    seed: u64,
) -> Vec<DecisionTree> {
    (0..hp.n_estimators)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, t as u64));
            let rows = if hp.bootstrap {
                bootstrap_rows(n_rows, &mut rng)
            } else {
                (0..n_rows).collect()
            };
            tree::train_tree(data, rows, hp, &mut rng)
        })
        .collect()
}

/// Trains a forest on an extracted feature matrix. Deterministic given
/// `(matrix, hyperparams, mode, seed)`.
pub fn train(
    m: &FeatureMatrix,
    hp: &HyperParams,
    mode: ForestMode,
    seed: u64,
) -> Result<ForestModel, ForestError> {
    hp.validate()?;
    if m.is_empty() {
        return Err(ForestError::EmptyTraining);
    }
    let n_rows = m.n_rows();
    let n_classes = m.n_classes();
    let columns: Vec<Vec<f64>> = (0..m.n_features()).map(|c| m.column(c)).collect();
    let counts = m.class_counts();

    let mut model = ForestModel {
        mode,
        class_names: m.class_names().to_vec(),
        hyperparams: hp.clone(),
        seed,
        selection_name: String::new(),
        feature_ids: m.feature_ids().to_vec(),
        trees: Vec::new(),
        per_class: Vec::new(),
    };

    match mode {
        ForestMode::DirectMulticlass => {
            if n_classes < 2 {
                return Err(ForestError::DegenerateClass(
                    "direct multiclass needs at least two classes".into(),
                ));
            }
            let cw = resolve_class_weights(hp.class_weight, &counts)?;
            let sample_weights: Vec<f64> =
                m.labels().iter().map(|&l| cw.as_slice()[l]).collect();
            let data = TrainingData {
                columns: &columns,
                labels: m.labels(),
                sample_weights: &sample_weights,
                n_classes,
            };
            model.trees = train_forest_trees(&data, n_rows, hp, seed);
        }
        ForestMode::OneVsRest => {
            let forests: Result<Vec<Vec<DecisionTree>>, ForestError> = (0..n_classes)
                .into_par_iter()
                .map(|class| {
                    let positives = counts[class];
                    if positives == 0 || positives == n_rows {
                        return Err(ForestError::DegenerateClass(
                            m.class_names()[class].clone(),
                        ));
                    }
                    let binary_labels: Vec<usize> =
                        m.labels().iter().map(|&l| usize::from(l == class)).collect();
                    let binary_counts = [n_rows - positives, positives];
                    let cw = resolve_class_weights(hp.class_weight, &binary_counts)?;
                    let sample_weights: Vec<f64> =
                        binary_labels.iter().map(|&l| cw.as_slice()[l]).collect();
                    let data = TrainingData {
                        columns: &columns,
                        labels: &binary_labels,
                        sample_weights: &sample_weights,
                        n_classes: 2,
                    };
                    Ok(train_forest_trees(&data, n_rows, hp, derive_seed(seed, class as u64)))
                })
                .collect();
            model.per_class = forests?;
        }
    }
    Ok(model)
}

pub(crate) fn normalize_scores(scores: &[f64]) -> Vec<f64> {
    let sum: f64 = scores.iter().sum();
    if sum <= 0.0 {
        vec![1.0 / scores.len() as f64; scores.len()]
    } else {
        scores.iter().map(|s| s / sum).collect()
    }
}

impl ForestModel {
    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn n_features(&self) -> usize {
        self.feature_ids.len()
    }

    /// Total number of trained trees across all forests.
    pub fn n_trees(&self) -> usize {
        self.trees.len() + self.per_class.iter().map(Vec::len).sum::<usize>()
    }

    fn check_width(&self, v: &[f64]) -> Result<(), ForestError> {
        if v.len() != self.n_features() {
            return Err(ForestError::DimensionMismatch {
                expected: self.n_features(),
                got: v.len(),
            });
        }
        if self.n_trees() == 0 {
            return Err(ForestError::UntrainedModel);
        }
        Ok(())
    }

    /// Per-class probabilities: mean leaf distribution over trees in
    /// direct mode; normalized per-class positive scores in one-vs-rest
    /// mode (uniform when every score is zero).
    pub fn predict_proba(&self, v: &[f64]) -> Result<Vec<f64>, ForestError> {
        self.check_width(v)?;
        match self.mode {
            ForestMode::DirectMulticlass => {
                let mut acc = vec![0.0; self.n_classes()];
                for tree in &self.trees {
                    for (a, p) in acc.iter_mut().zip(tree.predict_distribution(v)) {
                        *a += p;
                    }
                }
                let t = self.trees.len() as f64;
                acc.iter_mut().for_each(|a| *a /= t);
                Ok(acc)
            }
            ForestMode::OneVsRest => {
                let scores: Vec<f64> = self
                    .per_class
                    .iter()
                    .map(|forest| {
                        let positive: f64 = forest
                            .iter()
                            .map(|tree| tree.predict_distribution(v)[1])
                            .sum();
                        positive / forest.len() as f64
                    })
                    .collect();
                Ok(normalize_scores(&scores))
            }
        }
    }

    /// Argmax of [`Self::predict_proba`]; ties go to the lowest class
    /// index.
    pub fn predict(&self, v: &[f64]) -> Result<usize, ForestError> {
        let proba = self.predict_proba(v)?;
        Ok(argmax(&proba))
    }

    /// Mean-decrease-impurity importances, normalized to sum to 1.
    pub fn feature_importances(&self) -> Result<Vec<f64>, ForestError> {
        if self.n_trees() == 0 {
            return Err(ForestError::UntrainedModel);
        }
        let mut acc = vec![0.0; self.n_features()];
        for tree in self.all_trees() {
            tree.accumulate_importances(&mut acc);
        }
        let t = self.n_trees() as f64;
        acc.iter_mut().for_each(|a| *a /= t);
        let total: f64 = acc.iter().sum();
        if total > 0.0 {
            acc.iter_mut().for_each(|a| *a /= total);
        }
        Ok(acc)
    }

    fn all_trees(&self) -> impl Iterator<Item = &DecisionTree> {
        self.trees.iter().chain(self.per_class.iter().flatten())
    }

    /// Prediction plus the top-k features by decision-path impurity
    /// attribution. In one-vs-rest mode only the winning class's forest is
    /// credited.
    pub fn explain(&self, v: &[f64], top_k: usize) -> Result<Explanation, ForestError> {
        let probabilities = self.predict_proba(v)?;
        let predicted = argmax(&probabilities);
        let mut acc = vec![0.0; self.n_features()];
        let trees: &[DecisionTree] = match self.mode {
            ForestMode::DirectMulticlass => &self.trees,
            ForestMode::OneVsRest => &self.per_class[predicted],
        };
        for tree in trees {
            tree.accumulate_path_attribution(v, &mut acc);
        }
        let total_attribution: f64 = acc.iter().sum();

        let mut ranked: Vec<usize> = (0..acc.len()).collect();
        ranked.sort_by(|&a, &b| acc[b].total_cmp(&acc[a]).then(a.cmp(&b)));
        let attributions = ranked
            .into_iter()
            .take(top_k)
            .map(|i| (self.feature_ids[i].clone(), acc[i]))
            .collect();

        let feature_values = self
            .feature_ids
            .iter()
            .cloned()
            .zip(v.iter().copied())
            .collect();

        Ok(Explanation {
            predicted,
            class_name: self.class_names[predicted].clone(),
            probabilities,
            feature_values,
            attributions,
            total_attribution,
        })
    }

    /// Writes the versioned model document.
    pub fn save<W: Write>(&self, w: W) -> std::io::Result<()> {
        let file = ModelFile { format_version: MODEL_FORMAT_VERSION, model: self.clone() };
        serde_json::to_writer(w, &file)?;
        Ok(())
    }

    /// Reads a model document written by [`Self::save`].
    pub fn load<R: Read>(r: R) -> Result<ForestModel, ForestError> {
        let file: ModelFile = serde_json::from_reader(r)
            .map_err(|e| ForestError::BadModelFile(e.to_string()))?;
        if file.format_version != MODEL_FORMAT_VERSION {
            return Err(ForestError::BadModelFile(format!(
                "unsupported format version {}",
                file.format_version
            )));
        }
        Ok(file.model)
    }
}

pub(crate) fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(rows: Vec<Vec<f64>>, labels: Vec<usize>, n_classes: usize) -> FeatureMatrix {
        let width = rows[0].len();
        let ids = (0..width).map(|i| format!("f{i}")).collect();
        let classes = (0..n_classes).map(|i| format!("c{i}")).collect();
        FeatureMatrix::from_rows(ids, classes, rows, labels)
    }

    /// Two classes cleanly separated by feature 1; feature 0 is constant.
    fn separable(n_per_class: usize) -> FeatureMatrix {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..n_per_class {
            rows.push(vec![1.0, i as f64 * 0.001]);
            labels.push(0);
            rows.push(vec![1.0, 10.0 + i as f64 * 0.001]);
            labels.push(1);
        }
        matrix(rows, labels, 2)
    }

    #[test]
    fn class_weight_formula() {
        let cw = class_weights(&[10, 90], 0.0).unwrap();
        assert_eq!(cw.as_slice(), &[1.0, 1.0]);
        let cw = class_weights(&[10, 90], 1.0).unwrap();
        assert!((cw.as_slice()[0] - 10.0).abs() < 1e-9);
        assert!((cw.as_slice()[1] - 1.11111).abs() < 1e-5);
        // 10^0.3 and (10/9)^0.3, evaluated independently via exp/ln.
        let cw = class_weights(&[10, 90], 0.3).unwrap();
        assert!((cw.as_slice()[0] - (0.3f64 * 10f64.ln()).exp()).abs() < 1e-12);
        assert!((cw.as_slice()[1] - (0.3f64 * (10f64 / 9.0).ln()).exp()).abs() < 1e-12);
        assert!((cw.as_slice()[0] - 1.99526).abs() < 1e-5);
        assert!((cw.as_slice()[1] - 1.03211).abs() < 1e-5);
    }

    #[test]
    fn class_weights_scale_invariant() {
        let a = class_weights(&[10, 90], 0.7).unwrap();
        let b = class_weights(&[30, 270], 0.7).unwrap();
        for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn class_weights_reject_empty_class_and_bad_gamma() {
        assert_eq!(class_weights(&[5, 0], 0.5).unwrap_err(), ForestError::EmptyClass(1));
        assert!(class_weights(&[5, 5], 1.5).is_err());
    }

    #[test]
    fn single_tree_no_bootstrap_is_deterministic_cart() {
        let m = separable(20);
        let hp = HyperParams {
            n_estimators: 1,
            bootstrap: false,
            max_features: MaxFeatures::All,
            ..HyperParams::default()
        };
        let a = train(&m, &hp, ForestMode::DirectMulticlass, 1).unwrap();
        let b = train(&m, &hp, ForestMode::DirectMulticlass, 99).unwrap();
        // All features, no bootstrap: the seed has nothing left to vary.
        assert_eq!(a.trees, b.trees);
        assert_eq!(a.predict(&[1.0, 0.0]).unwrap(), 0);
        assert_eq!(a.predict(&[1.0, 10.5]).unwrap(), 1);
    }

    #[test]
    fn same_seed_gives_identical_model_bytes() {
        let m = separable(15);
        let hp = HyperParams { n_estimators: 8, ..HyperParams::default() };
        let a = train(&m, &hp, ForestMode::OneVsRest, 7).unwrap();
        let b = train(&m, &hp, ForestMode::OneVsRest, 7).unwrap();
        let mut buf_a = Vec::new();
        let mut buf_b = Vec::new();
        a.save(&mut buf_a).unwrap();
        b.save(&mut buf_b).unwrap();
        assert_eq!(buf_a, buf_b);
        let c = train(&m, &hp, ForestMode::OneVsRest, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn no_bootstrap_all_features_trees_are_identical() {
        let m = separable(10);
        let hp = HyperParams {
            n_estimators: 5,
            bootstrap: false,
            max_features: MaxFeatures::All,
            ..HyperParams::default()
        };
        let model = train(&m, &hp, ForestMode::DirectMulticlass, 3).unwrap();
        for t in &model.trees {
            assert_eq!(*t, model.trees[0]);
        }
    }

    #[test]
    fn probabilities_sum_to_one() {
        let m = separable(12);
        let hp = HyperParams { n_estimators: 20, ..HyperParams::default() };
        for mode in [ForestMode::DirectMulticlass, ForestMode::OneVsRest] {
            let model = train(&m, &hp, mode, 5).unwrap();
            for x in [[1.0, 0.5], [1.0, 9.9], [1.0, 5.0]] {
                let p = model.predict_proba(&x).unwrap();
                assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn argmax_tie_goes_to_lowest_index() {
        assert_eq!(argmax(&[0.1, 0.7, 0.2]), 1);
        assert_eq!(argmax(&[0.5, 0.5]), 0);
    }

    #[test]
    fn ovr_all_zero_scores_normalize_to_uniform() {
        assert_eq!(normalize_scores(&[0.0, 0.0, 0.0, 0.0]), vec![0.25; 4]);
    }

    #[test]
    fn prediction_invariant_under_score_rescaling() {
        let scores = [0.2, 0.5, 0.3];
        let scaled: Vec<f64> = scores.iter().map(|s| s * 7.5).collect();
        assert_eq!(argmax(&scores), argmax(&scaled));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let m = separable(10);
        let model = train(&m, &HyperParams::default(), ForestMode::DirectMulticlass, 1).unwrap();
        assert_eq!(
            model.predict(&[1.0]).unwrap_err(),
            ForestError::DimensionMismatch { expected: 2, got: 1 }
        );
    }

    #[test]
    fn unlimited_depth_full_features_reach_perfect_training_accuracy() {
        // No conflicting duplicate rows by construction.
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..60 {
            rows.push(vec![(i % 13) as f64, (i % 7) as f64, i as f64]);
            labels.push((i % 3) as usize);
        }
        let m = matrix(rows.clone(), labels.clone(), 3);
        let hp = HyperParams {
            n_estimators: 1,
            bootstrap: false,
            max_features: MaxFeatures::All,
            ..HyperParams::default()
        };
        let model = train(&m, &hp, ForestMode::DirectMulticlass, 0).unwrap();
        for (row, &label) in rows.iter().zip(&labels) {
            assert_eq!(model.predict(row).unwrap(), label);
        }
    }

    #[test]
    fn ovr_degenerate_class_is_rejected() {
        let m = matrix(vec![vec![0.0], vec![1.0]], vec![0, 0], 1);
        let err = train(&m, &HyperParams::default(), ForestMode::OneVsRest, 1).unwrap_err();
        assert!(matches!(err, ForestError::DegenerateClass(_)));
    }

    #[test]
    fn stump_attributes_everything_to_its_split_feature() {
        let m = separable(10);
        let hp = HyperParams {
            n_estimators: 1,
            bootstrap: false,
            max_features: MaxFeatures::All,
            max_depth: Some(1),
            ..HyperParams::default()
        };
        let model = train(&m, &hp, ForestMode::DirectMulticlass, 0).unwrap();
        let ex = model.explain(&[1.0, 0.0], 2).unwrap();
        assert_eq!(ex.attributions[0].0, "f1");
        assert!(ex.attributions[0].1 > 0.0);
        assert_eq!(ex.attributions[1].1, 0.0);
        assert!((ex.total_attribution - ex.attributions[0].1).abs() < 1e-12);
        // The only split carries all of the importance mass.
        assert_eq!(model.feature_importances().unwrap(), vec![0.0, 1.0]);
    }

    #[test]
    fn attribution_is_conserved_and_nonnegative() {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..80 {
            rows.push(vec![(i % 11) as f64, ((i * 3) % 17) as f64, ((i * 7) % 5) as f64]);
            labels.push((i % 2) as usize);
        }
        let m = matrix(rows.clone(), labels, 2);
        let model = train(
            &m,
            &HyperParams { n_estimators: 12, ..HyperParams::default() },
            ForestMode::DirectMulticlass,
            9,
        )
        .unwrap();
        let ex = model.explain(&rows[5], 3).unwrap();
        assert!(ex.attributions.iter().all(|(_, a)| *a >= 0.0));
        assert_eq!(ex.attributions.len(), 3);
        // Recompute the conservation total over all features with top_k = width.
        let full = model.explain(&rows[5], m.n_features()).unwrap();
        let sum: f64 = full.attributions.iter().map(|(_, a)| a).sum();
        assert!((sum - full.total_attribution).abs() < 1e-9);
    }

    #[test]
    fn mdi_sums_to_one_and_skips_unused_features() {
        let m = separable(25);
        let hp = HyperParams { n_estimators: 10, ..HyperParams::default() };
        let model = train(&m, &hp, ForestMode::DirectMulticlass, 2).unwrap();
        let imp = model.feature_importances().unwrap();
        assert!((imp.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        // Feature 0 is constant: never split on.
        assert_eq!(imp[0], 0.0);
        assert!(imp[1] > 0.99);
    }

    #[test]
    fn model_file_round_trips_predictions() {
        let m = separable(15);
        let hp = HyperParams { n_estimators: 10, ..HyperParams::default() };
        let model = train(&m, &hp, ForestMode::OneVsRest, 4).unwrap();
        let mut buf = Vec::new();
        model.save(&mut buf).unwrap();
        let loaded = ForestModel::load(&buf[..]).unwrap();
        assert_eq!(loaded, model);
        for x in [[1.0, 0.3], [1.0, 8.0]] {
            assert_eq!(
                model.predict_proba(&x).unwrap(),
                loaded.predict_proba(&x).unwrap()
            );
        }
    }

    #[test]
    fn model_file_rejects_garbage() {
        assert!(matches!(
            ForestModel::load(&b"not json"[..]),
            Err(ForestError::BadModelFile(_))
        ));
    }
}
