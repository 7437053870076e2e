//! Error types for the core pipeline, one enum per subsystem.

use std::error::Error as StdError;
use std::fmt;

/// Errors from domain parsing and the suffix database.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DomainError {
    /// The string failed validation and cannot be parsed.
    Invalid(String),
    /// The domain consists only of a public suffix; there is no
    /// second-level label to extract features from.
    NoSubdomain(String),
}

impl fmt::Display for DomainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainError::Invalid(d) => write!(f, "invalid domain: {d:?}"),
            DomainError::NoSubdomain(d) => {
                write!(f, "domain {d:?} is a bare public suffix, no second-level label")
            }
        }
    }
}

impl StdError for DomainError {}

/// Errors from feature operations, including the bit-level statistics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FeatureError {
    /// The operation requires a non-empty input string.
    EmptyInput,
    /// The input is shorter than the operation's window.
    TooShort { len: usize, need: usize },
    /// A named selection references a feature id missing from the catalog.
    UnknownFeature(String),
    /// A selection must contain at least one feature.
    EmptySelection,
    /// Extraction over raw domains hit a parse failure.
    Domain(DomainError),
}

impl fmt::Display for FeatureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeatureError::EmptyInput => write!(f, "empty input string"),
            FeatureError::TooShort { len, need } => {
                write!(f, "input of length {len} is shorter than required {need}")
            }
            FeatureError::UnknownFeature(id) => write!(f, "unknown feature id {id:?}"),
            FeatureError::EmptySelection => write!(f, "feature selection is empty"),
            FeatureError::Domain(e) => write!(f, "{e}"),
        }
    }
}

impl StdError for FeatureError {
    fn source(&self) -> Option<&(dyn StdError + 'static)> {
        match self {
            FeatureError::Domain(e) => Some(e),
            _ => None,
        }
    }
}

impl From<DomainError> for FeatureError {
    fn from(e: DomainError) -> Self {
        FeatureError::Domain(e)
    }
}

/// Errors from feature-selection algorithms.
#[derive(Debug, Clone, PartialEq)]
pub enum SelectionError {
    /// Every feature was filtered out.
    AllDegenerate,
    /// A class has too few members for the requested neighborhood size.
    ClassTooSmall { class: usize, count: usize, need: usize },
    /// The intersection of the combined reports is empty.
    EmptyIntersection,
    /// The matrix does not satisfy the operation's shape preconditions.
    BadMatrix(String),
    /// Permutation importance needs at least one repeat.
    ZeroRepeats,
    /// A forest error surfaced while a selector trained internal models.
    Forest(ForestError),
}

impl fmt::Display for SelectionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SelectionError::AllDegenerate => write!(f, "all features are degenerate"),
            SelectionError::ClassTooSmall { class, count, need } => {
                write!(f, "class {class} has {count} members, needs more than {need}")
            }
            SelectionError::EmptyIntersection => write!(f, "intersection of selections is empty"),
            SelectionError::BadMatrix(msg) => write!(f, "bad feature matrix: {msg}"),
            SelectionError::ZeroRepeats => write!(f, "permutation importance needs repeats >= 1"),
            SelectionError::Forest(e) => write!(f, "forest training failed: {e}"),
        }
    }
}

impl StdError for SelectionError {
    fn source(&self) -> Option<&(dyn StdError + 'static)> {
        match self {
            SelectionError::Forest(e) => Some(e),
            _ => None,
        }
    }
}

impl From<ForestError> for SelectionError {
    fn from(e: ForestError) -> Self {
        SelectionError::Forest(e)
    }
}

/// Errors from forest training, prediction, and model files.
#[derive(Debug, Clone, PartialEq)]
pub enum ForestError {
    /// A class has zero samples.
    EmptyClass(usize),
    /// Training input contains no rows.
    EmptyTraining,
    /// One-vs-rest requires positives and negatives for every class.
    DegenerateClass(String),
    /// Input vector width differs from the model's feature width.
    DimensionMismatch { expected: usize, got: usize },
    /// The model contains no trained trees.
    UntrainedModel,
    /// Hyperparameters outside their documented ranges.
    BadHyperParams(String),
    /// Model file could not be read or parsed.
    BadModelFile(String),
}

impl fmt::Display for ForestError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ForestError::EmptyClass(i) => write!(f, "class {i} has no samples"),
            ForestError::EmptyTraining => write!(f, "training set is empty"),
            ForestError::DegenerateClass(name) => {
                write!(f, "one-vs-rest class {name:?} lacks positive or negative samples")
            }
            ForestError::DimensionMismatch { expected, got } => {
                write!(f, "feature vector has {got} values, model expects {expected}")
            }
            ForestError::UntrainedModel => write!(f, "model has no trained trees"),
            ForestError::BadHyperParams(msg) => write!(f, "bad hyperparameters: {msg}"),
            ForestError::BadModelFile(msg) => write!(f, "bad model file: {msg}"),
        }
    }
}

impl StdError for ForestError {}

/// Errors from hyperparameter search.
#[derive(Debug, Clone, PartialEq)]
pub enum TuneError {
    /// Fewer than one trial requested.
    InvalidTrials(usize),
    /// Cross-validation needs at least two folds.
    InvalidFolds(usize),
    /// Evaluation failure inside a trial.
    Eval(EvalError),
}

impl fmt::Display for TuneError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TuneError::InvalidTrials(n) => write!(f, "need at least 1 trial, got {n}"),
            TuneError::InvalidFolds(n) => write!(f, "need at least 2 folds, got {n}"),
            TuneError::Eval(e) => write!(f, "trial evaluation failed: {e}"),
        }
    }
}

impl StdError for TuneError {
    fn source(&self) -> Option<&(dyn StdError + 'static)> {
        match self {
            TuneError::Eval(e) => Some(e),
            _ => None,
        }
    }
}

impl From<EvalError> for TuneError {
    fn from(e: EvalError) -> Self {
        TuneError::Eval(e)
    }
}

/// Errors from the evaluation harness.
#[derive(Debug, Clone, PartialEq)]
pub enum EvalError {
    /// A class has fewer members than the number of folds.
    ClassTooSmall { class: usize, count: usize, folds: usize },
    /// Confusion matrix is not square.
    NonSquare { rows: usize, cols: usize },
    /// Invalid cross-validation plan.
    BadPlan(String),
    Feature(FeatureError),
    Forest(ForestError),
    Domain(DomainError),
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::ClassTooSmall { class, count, folds } => {
                write!(f, "class {class} has {count} members, fewer than {folds} folds")
            }
            EvalError::NonSquare { rows, cols } => {
                write!(f, "confusion matrix is {rows}x{cols}, expected square")
            }
            EvalError::BadPlan(msg) => write!(f, "bad cross-validation plan: {msg}"),
            EvalError::Feature(e) => write!(f, "feature extraction failed: {e}"),
            EvalError::Forest(e) => write!(f, "forest failed: {e}"),
            EvalError::Domain(e) => write!(f, "domain failed: {e}"),
        }
    }
}

impl StdError for EvalError {
    fn source(&self) -> Option<&(dyn StdError + 'static)> {
        match self {
            EvalError::Feature(e) => Some(e),
            EvalError::Forest(e) => Some(e),
            EvalError::Domain(e) => Some(e),
            _ => None,
        }
    }
}

impl From<FeatureError> for EvalError {
    fn from(e: FeatureError) -> Self {
        EvalError::Feature(e)
    }
}

impl From<ForestError> for EvalError {
    fn from(e: ForestError) -> Self {
        EvalError::Forest(e)
    }
}

impl From<DomainError> for EvalError {
    fn from(e: DomainError) -> Self {
        EvalError::Domain(e)
    }
}

/// Errors from the synthetic corpus generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SynthError {
    /// The family cannot produce the requested number of unique domains.
    ExhaustedSpace { family: String, produced: usize, wanted: usize },
    /// Corpus construction needs at least 10 samples per family.
    TooFewPerFamily(usize),
    /// Family specs must have unique names.
    DuplicateFamily(String),
}

impl fmt::Display for SynthError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SynthError::ExhaustedSpace { family, produced, wanted } => write!(
                f,
                "family {family:?} exhausted after {produced} of {wanted} unique domains"
            ),
            SynthError::TooFewPerFamily(n) => {
                write!(f, "need at least 10 samples per family, got {n}")
            }
            SynthError::DuplicateFamily(name) => write!(f, "duplicate family name {name:?}"),
        }
    }
}

impl StdError for SynthError {}
