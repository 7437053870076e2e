//! Contextless, feature-based classification of algorithmically generated
//! domain names (DGAs).
//!
//! Everything works from a single domain-name string: no DNS lookups, no
//! traffic context. The pipeline is
//!
//! 1. [`domains`] — sanitize, validate, and split a raw domain into suffix,
//!    second-level label, and subdomains,
//! 2. [`features`] — extract a catalog of 76 linguistic, structural, and
//!    statistical features per domain (bit-level statistics live in
//!    [`randtests`]),
//! 3. [`selection`] — variance/MI filters, ReliefF, MultiSURF, recursive
//!    feature elimination, and Spearman multicollinearity collapse,
//! 4. [`forest`] — CART random forests (direct multiclass or one-vs-rest)
//!    with class weighting and per-prediction feature attributions,
//! 5. [`tuning`] / [`evalharness`] — seeded random hyperparameter search and
//!    repeated stratified cross-validation with macro-averaged metrics,
//! 6. [`synthdga`] — a deterministic synthetic corpus generator for
//!    desk-scale experiments.
//!
//! All randomized operations take an explicit seed and are reproducible
//! across runs and platforms.

pub mod dataset;
pub mod domains;
pub mod error;
pub mod evalharness;
pub mod features;
pub mod forest;
pub mod randtests;
pub mod selection;
pub mod synthdga;
pub mod tuning;
mod util;

pub use dataset::{FeatureMatrix, LabeledDataset};
pub use domains::{ParsedDomain, SuffixDatabase};
pub use error::{
    DomainError, EvalError, FeatureError, ForestError, SelectionError, SynthError, TuneError,
};
pub use evalharness::{CVPlan, EvaluationReport, MacroMetrics, ThroughputReport};
pub use features::{FeatureCatalog, FeatureSetSelection, FeatureSpec, FeatureVector};
pub use forest::{ClassWeights, DecisionTree, ForestMode, ForestModel, HyperParams};
pub use selection::SelectionReport;
pub use synthdga::FamilySpec;
pub use tuning::{SearchSpace, TrialResult};
