//! Baseline, augmented and human arms over repeated scenario samples.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::classifier::{train_classifier, IntentPrediction, DEFAULT_TEMPERATURE};
use super::metrics::{evaluate_with_predictions, pct_improvement, pct_optimal};
use super::stats::{confidence_split, mann_whitney_u, ConfidenceSplit, MannWhitney, MwuMode};
use super::EvalError;
use crate::augment::{augment_dataset, AugmentConfig};
use crate::corpus::{ensure_disjoint, sample_scenario, CorpusError, Origin, TrainingSet};
use crate::paraphrase::ParaphraseProvider;
use crate::seed;
use crate::thesaurus::Thesaurus;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Scenario sizes (queries per intent).
    pub scenarios: Vec<usize>,
    pub repeats: usize,
    pub seed: u64,
    pub temperature: f64,
    pub mwu_mode: MwuMode,
    /// `n` is forced to 1 for the augmented arm.
    pub augment: AugmentConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            scenarios: vec![1, 3, 5],
            repeats: 10,
            seed: 0,
            temperature: DEFAULT_TEMPERATURE,
            mwu_mode: MwuMode::Auto,
            augment: AugmentConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arm {
    Baseline,
    Augmented,
    Human,
}

impl Arm {
    pub const ALL: [Arm; 3] = [Arm::Baseline, Arm::Augmented, Arm::Human];

    pub fn as_str(self) -> &'static str {
        match self {
            Arm::Baseline => "baseline",
            Arm::Augmented => "augmented",
            Arm::Human => "human",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub repeat: usize,
    pub train_size: usize,
    pub weighted_f1: f64,
    pub median_confidence_correct: Option<f64>,
    pub median_confidence_incorrect: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArmReport {
    pub arm: Arm,
    pub runs: Vec<RunRecord>,
    pub mean_weighted_f1: f64,
    /// Relative to the baseline mean; `None` for the baseline itself.
    pub pct_improvement: Option<f64>,
    /// Augmented arm only.
    pub pct_optimal: Option<f64>,
    /// Per-repeat F1 samples against the baseline's.
    pub vs_baseline: Option<MannWhitney>,
    /// Pooled over all repeats.
    pub confidence: ConfidenceSplit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub k: usize,
    pub arms: Vec<ArmReport>,
    /// Augmented queries accepted, summed over repeats.
    pub augmented_queries: usize,
    pub provider_failures: usize,
}

impl ScenarioReport {
    pub fn arm(&self, arm: Arm) -> &ArmReport {
        self.arms.iter().find(|a| a.arm == arm).expect("every arm is reported")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedScenario {
    pub k: usize,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub train_size: usize,
    pub test_size: usize,
    pub scenarios: Vec<ScenarioReport>,
    pub skipped: Vec<SkippedScenario>,
}

/// Predictions of one `(k, repeat, arm)` run, in test-set order.
#[derive(Debug, Clone, PartialEq)]
pub struct RunDetail {
    pub k: usize,
    pub repeat: usize,
    pub arm: Arm,
    pub train_size: usize,
    pub predictions: Vec<(String, IntentPrediction)>,
}

struct RepeatOutcome {
    details: Vec<RunDetail>,
    f1: [f64; 3],
    accepted: usize,
    provider_failures: usize,
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.6}")).unwrap_or_else(|| "NA".into())
}

impl ExperimentReport {
    /// One row per `(k, arm, repeat)` with fixed precision, so equal reports
    /// print byte-identical tables.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,arm,repeat,train_size,weighted_f1,median_conf_correct,median_conf_incorrect\n");
        for s in &self.scenarios {
            for a in &s.arms {
                for r in &a.runs {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{:.6},{},{}",
                        s.k,
                        a.arm.as_str(),
                        r.repeat,
                        r.train_size,
                        r.weighted_f1,
                        fmt_opt(r.median_confidence_correct),
                        fmt_opt(r.median_confidence_incorrect)
                    );
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn scenario(&self, k: usize) -> Option<&ScenarioReport> {
        self.scenarios.iter().find(|s| s.k == k)
    }
}

fn human_set(scenario: &TrainingSet, held_out: &TrainingSet, seed: u64) -> Result<TrainingSet, CorpusError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut set = scenario.clone();
    for (_, queries) in held_out.intents() {
        if let Some(q) = queries.choose(&mut rng) {
            let mut q = q.clone();
            q.origin = Origin::HeldOutHuman;
            set.insert(q)?;
        }
    }
    Ok(set)
}

#[allow(clippy::too_many_arguments)]
fn run_repeat(
    train: &TrainingSet,
    test: &TrainingSet,
    thesaurus: &dyn Thesaurus,
    provider: &dyn ParaphraseProvider,
    config: &ExperimentConfig,
    augment: &AugmentConfig,
    k: usize,
    repeat: usize,
) -> Result<RepeatOutcome, EvalError> {
    let run_seed = seed::derive(config.seed, &[k as u64, repeat as u64]);
    let (scenario, held_out) = sample_scenario(train, k, run_seed)?;
    let (augmented, provenance) = augment_dataset(&scenario, thesaurus, provider, augment)?;
    let human = human_set(&scenario, &held_out, seed::derive(run_seed, &[1]))?;

    let mut details = Vec::with_capacity(3);
    let mut f1 = [0.0; 3];
    for (slot, (arm, set)) in [
        (Arm::Baseline, &scenario),
        (Arm::Augmented, &augmented),
        (Arm::Human, &human),
    ]
    .into_iter()
    .enumerate()
    {
        let model = train_classifier(set, config.temperature)?;
        let (metrics, predictions) = evaluate_with_predictions(&model, test);
        f1[slot] = metrics.weighted_f1;
        details.push(RunDetail {
            k,
            repeat,
            arm,
            train_size: set.len(),
            predictions,
        });
    }
    Ok(RepeatOutcome {
        details,
        f1,
        accepted: provenance.accepted(),
        provider_failures: provenance.provider_failures(),
    })
}

fn validate(train: &TrainingSet, test: &TrainingSet, config: &ExperimentConfig) -> Result<(), EvalError> {
    if config.scenarios.is_empty() {
        return Err(EvalError::InvalidConfig("no scenario sizes given".into()));
    }
    if config.repeats == 0 {
        return Err(EvalError::InvalidConfig("repeats must be at least 1".into()));
    }
    if !(config.temperature > 0.0 && config.temperature.is_finite()) {
        return Err(EvalError::InvalidTemperature(config.temperature));
    }
    if train.num_intents() < 2 {
        return Err(EvalError::TooFewIntents(train.num_intents()));
    }
    if test.is_empty() {
        return Err(EvalError::EmptyTest);
    }
    let unknown: Vec<String> = test
        .intent_names()
        .filter(|i| train.queries(i).is_empty())
        .map(str::to_string)
        .collect();
    if !unknown.is_empty() {
        return Err(EvalError::UnknownTestIntents(unknown));
    }
    ensure_disjoint(train, test)?;
    Ok(())
}

/// Like [`run_experiments`], also returning every run's predictions ordered
/// by `(k, repeat, arm)`.
pub fn run_experiments_detailed(
    train: &TrainingSet,
    test: &TrainingSet,
    thesaurus: &dyn Thesaurus,
    provider: &dyn ParaphraseProvider,
    config: &ExperimentConfig,
) -> Result<(ExperimentReport, Vec<RunDetail>), EvalError> {
    validate(train, test, config)?;
    let augment = AugmentConfig {
        n: 1,
        ..config.augment.clone()
    };
    augment.validate()?;

    let mut scenarios = Vec::new();
    let mut skipped = Vec::new();
    let mut all_details = Vec::new();
    for &k in &config.scenarios {
        if k == 0 {
            skipped.push(SkippedScenario {
                k,
                note: "scenario size must be at least 1".into(),
            });
            continue;
        }
        if let Err(CorpusError::TooFewQueries { need, intents }) = sample_scenario(train, k, 0) {
            log::warn!("skipping k={k}: intents with fewer than {need} training queries");
            skipped.push(SkippedScenario {
                k,
                note: format!(
                    "not enough training queries left for the human arm (need {need}): {}",
                    intents.join(", ")
                ),
            });
            continue;
        }
        let outcomes: Vec<RepeatOutcome> = (0..config.repeats)
            .into_par_iter()
            .map(|r| run_repeat(train, test, thesaurus, provider, config, &augment, k, r))
            .collect::<Result<_, _>>()?;
        scenarios.push(aggregate(k, &outcomes, config.mwu_mode));
        all_details.extend(outcomes.into_iter().flat_map(|o| o.details));
    }
    let report = ExperimentReport {
        config: config.clone(),
        train_size: train.len(),
        test_size: test.len(),
        scenarios,
        skipped,
    };
    Ok((report, all_details))
}

/// Runs every scenario size `k` for `repeats` samples. Each sample trains the
/// reference classifier on the scenario (baseline), on the scenario plus one
/// augmented query per intent, and on the scenario plus one held-out real
/// query per intent, then scores all three on `test`.
///
/// Scenario sizes whose held-out pool would be empty are skipped with a note.
/// Results depend only on the inputs and `config.seed`.
pub fn run_experiments(
    train: &TrainingSet,
    test: &TrainingSet,
    thesaurus: &dyn Thesaurus,
    provider: &dyn ParaphraseProvider,
    config: &ExperimentConfig,
) -> Result<ExperimentReport, EvalError> {
    run_experiments_detailed(train, test, thesaurus, provider, config).map(|(report, _)| report)
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn aggregate(k: usize, outcomes: &[RepeatOutcome], mode: MwuMode) -> ScenarioReport {
    let samples: Vec<Vec<f64>> = (0..3)
        .map(|slot| outcomes.iter().map(|o| o.f1[slot]).collect())
        .collect();
    let means: Vec<f64> = samples.iter().map(|s| mean(s)).collect();
    let improvement = |slot: usize| pct_improvement(means[slot], means[0]);

    let arms = Arm::ALL
        .iter()
        .enumerate()
        .map(|(slot, &arm)| {
            let mut runs = Vec::with_capacity(outcomes.len());
            let mut correct = Vec::new();
            let mut incorrect = Vec::new();
            for (repeat, o) in outcomes.iter().enumerate() {
                let d = &o.details[slot];
                let split = confidence_split(d.predictions.iter().map(|(t, p)| (t.as_str(), p)));
                runs.push(RunRecord {
                    repeat,
                    train_size: d.train_size,
                    weighted_f1: o.f1[slot],
                    median_confidence_correct: split.correct_summary.map(|s| s.median),
                    median_confidence_incorrect: split.incorrect_summary.map(|s| s.median),
                });
                correct.extend(split.correct);
                incorrect.extend(split.incorrect);
            }
            let (pct_imp, pct_opt, vs_baseline) = match arm {
                Arm::Baseline => (None, None, None),
                Arm::Augmented => (
                    improvement(1),
                    match (improvement(1), improvement(2)) {
                        (Some(aug), Some(human)) => pct_optimal(aug, human),
                        _ => None,
                    },
                    Some(mann_whitney_u(&samples[0], &samples[1], mode)),
                ),
                Arm::Human => (
                    improvement(2),
                    None,
                    Some(mann_whitney_u(&samples[0], &samples[2], mode)),
                ),
            };
            ArmReport {
                arm,
                runs,
                mean_weighted_f1: means[slot],
                pct_improvement: pct_imp,
                pct_optimal: pct_opt,
                vs_baseline,
                confidence: ConfidenceSplit::from_parts(correct, incorrect),
            }
        })
        .collect();

    ScenarioReport {
        k,
        arms,
        augmented_queries: outcomes.iter().map(|o| o.accepted).sum(),
        provider_failures: outcomes.iter().map(|o| o.provider_failures).sum(),
    }
}
