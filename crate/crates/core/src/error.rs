use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("strand counts differ: {0} vs {1}")]
    MismatchedStrands(usize, usize),
    #[error("flavors differ: {0} vs {1}")]
    MismatchedFlavor(String, String),
    #[error("enumeration of {flavor} with n = {n} exceeds the budget (max n = {max})")]
    BudgetExceeded { flavor: String, n: usize, max: usize },
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("invalid evaluation map: {0}")]
    InvalidEvaluation(String),
    #[error("J-class {0} has nontrivial H-classes; use idempotent-indicator mode")]
    NontrivialHWithoutIndicatorMode(usize),
    #[error("monoid has nontrivial H-classes (J-class {0}); use formula-based cell dimensions")]
    NontrivialHClass(usize),
    #[error("generic rank disagreed in {0} consecutive samples; symbolic rank needed")]
    GenericDisagreement(usize),
    #[error("no nontrivial simple module")]
    NoNontrivialSimple,
    #[error("empty truncation window [{0}, {1}]")]
    EmptyWindow(usize, usize),
    #[error("twisting is not tight: {0}")]
    NotTight(String),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("cocycle identity fails at ({0}, {1}, {2})")]
    CocycleViolation(usize, usize, usize),
    #[error("label ({k}, {label}) is not admissible for {flavor} with n = {n}")]
    InadmissibleLabel { flavor: String, n: usize, k: usize, label: String },
    #[error("quantum order l must be at least 2, got {0}")]
    InvalidOrder(usize),
    #[error("degenerate window: {0}")]
    DegenerateWindow(String),
    #[error("partition sizes differ: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("malformed table: {0}")]
    MalformedTable(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
