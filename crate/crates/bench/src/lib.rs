//! Shared fixtures for the criterion benchmarks: a pinned corpus and a
//! model trained on it.

use dgaclass_core::dataset::LabeledDataset;
use dgaclass_core::domains::SuffixDatabase;
use dgaclass_core::features::{self, FeatureSetSelection};
use dgaclass_core::forest::{self, ForestMode, ForestModel, HyperParams};
use dgaclass_core::synthdga;

pub struct Fixture {
    pub dataset: LabeledDataset,
    pub suffix_db: SuffixDatabase,
    pub union: FeatureSetSelection,
    pub rfe_pi: FeatureSetSelection,
    pub model_union: ForestModel,
    pub model_rfe_pi: ForestModel,
}

/// Builds the benchmark fixture: 200 domains per family and two one-vs-rest
/// models of 50 trees per class.
pub fn fixture() -> Fixture {
    let dataset = synthdga::pinned_corpus(200, 42).expect("pinned corpus");
    let suffix_db = SuffixDatabase::bundled();
    let union = FeatureSetSelection::named("union").expect("built-in");
    let rfe_pi = FeatureSetSelection::named("rfe-pi").expect("built-in");
    let hp = HyperParams { n_estimators: 50, ..HyperParams::default() };

    let train = |selection: &FeatureSetSelection| {
        let (matrix, _) =
            features::extract_matrix(&dataset, &suffix_db, selection).expect("extraction");
        let mut model =
            forest::train(&matrix, &hp, ForestMode::OneVsRest, 42).expect("training");
        model.selection_name = selection.name().to_string();
        model
    };

    let model_union = train(&union);
    let model_rfe_pi = train(&rfe_pi);
    Fixture { dataset, suffix_db, union, rfe_pi, model_union, model_rfe_pi }
}
