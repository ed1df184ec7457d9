//! Reference classifier, metrics, significance tests and the three-arm
//! experiment protocol.

mod classifier;
mod experiment;
mod metrics;
mod stats;

use thiserror::Error;

use crate::augment::AugmentError;
use crate::corpus::CorpusError;

pub use classifier::{
    features, predict, softmax, train_classifier, IntentModel, IntentPrediction, DEFAULT_TEMPERATURE,
};
pub use experiment::{
    run_experiments, run_experiments_detailed, Arm, ArmReport, ExperimentConfig, ExperimentReport, RunDetail,
    RunRecord, ScenarioReport, SkippedScenario,
};
pub use metrics::{
    evaluate, evaluate_with_predictions, metrics_from_labels, pct_improvement, pct_optimal, IntentMetrics,
    MetricsReport,
};
pub use stats::{
    confidence_split, mann_whitney_u, midranks, quantile, summarize, u_distribution, ConfidenceSplit, MannWhitney,
    MwuMode, Summary,
};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("a classifier needs at least 2 intents, got {0}")]
    TooFewIntents(usize),
    #[error("temperature must be positive and finite, got {0}")]
    InvalidTemperature(f64),
    #[error("test set is empty")]
    EmptyTest,
    #[error("test intents missing from the training set: {}", .0.join(", "))]
    UnknownTestIntents(Vec<String>),
    #[error("invalid experiment config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Augment(#[from] AugmentError),
}
