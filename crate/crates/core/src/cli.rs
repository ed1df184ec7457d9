//! `botaug` command line. Exit codes: 0 ok, 2 usage or validation error,
//! 3 paraphrase provider failure, 4 nothing ran.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::augment::{augment_dataset, AugmentConfig, ReferenceScope};
use crate::corpus::{load_dataset, save_dataset, stratified_split, TrainingSet};
use crate::eval::{run_experiments, Arm, ExperimentConfig, ExperimentReport, MwuMode, DEFAULT_TEMPERATURE};
use crate::paraphrase::{
    paraphrase, NoProvider, ParaphraseProvider, ParaphraseRequest, ProviderError, RemoteProvider, RuleProvider,
    PARAPHRASE_URL_ENV,
};
use crate::seed;
use crate::textproc::PosTag;
use crate::thesaurus::{load_embeddings, EmbeddingFormat, EmbeddingTable, Thesaurus, DEFAULT_MIN_SIMILARITY};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_PROVIDER: i32 = 3;
pub const EXIT_NOTHING_RAN: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "botaug",
    version,
    about = "Augment chatbot training sets and evaluate the effect"
)]
pub struct Cli {
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// TOML file with defaults; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Augment a training set and write it with a provenance report.
    Augment(AugmentArgs),
    /// Run the baseline / augmented / human experiments.
    Experiment(ExperimentArgs),
    /// Print paraphrases for one text.
    Paraphrase(ParaphraseArgs),
    /// Print thesaurus neighbours for one word.
    Synonyms(SynonymsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProviderKind {
    Remote,
    Rules,
    None,
}

#[derive(Debug, Args)]
pub struct ProviderArgs {
    /// Paraphrase source [default: rules].
    #[arg(long, value_enum)]
    pub provider: Option<ProviderKind>,
    /// Base URL of the remote paraphrase service.
    #[arg(long, env = PARAPHRASE_URL_ENV)]
    pub url: Option<String>,
    /// Treat any provider failure as fatal (exit 3).
    #[arg(long)]
    pub strict_provider: bool,
}

#[derive(Debug, Args)]
pub struct AugmentFlags {
    /// Accepted queries per intent.
    #[arg(long)]
    pub n: Option<usize>,
    /// POS tags eligible for replacement, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub target_pos: Option<Vec<PosTag>>,
    #[arg(long)]
    pub synonyms_per_token: Option<usize>,
    #[arg(long)]
    pub min_similarity: Option<f64>,
    #[arg(long)]
    pub paraphrases_per_candidate: Option<usize>,
    #[arg(long)]
    pub max_candidates: Option<usize>,
    #[arg(long, value_enum)]
    pub reference_scope: Option<ScopeArg>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScopeArg {
    Scenario,
    Intent,
}

#[derive(Debug, Args)]
pub struct AugmentArgs {
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long)]
    pub embeddings: Option<PathBuf>,
    /// Output dataset; `.json` selects JSON, anything else TSV.
    #[arg(long)]
    pub out: PathBuf,
    /// Provenance report path [default: <out>.provenance.json].
    #[arg(long)]
    pub provenance: Option<PathBuf>,
    #[command(flatten)]
    pub provider: ProviderArgs,
    #[command(flatten)]
    pub augment: AugmentFlags,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long, conflicts_with = "split_fraction", required_unless_present = "split_fraction")]
    pub test: Option<PathBuf>,
    /// Split `--train` per intent, sending this fraction to the test side.
    #[arg(long)]
    pub split_fraction: Option<f64>,
    #[arg(long)]
    pub embeddings: Option<PathBuf>,
    /// Scenario sizes, comma separated [default: 1,3,5].
    #[arg(long, value_delimiter = ',')]
    pub k: Option<Vec<usize>>,
    #[arg(long)]
    pub repeats: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub temperature: Option<f64>,
    /// JSON report path.
    #[arg(long)]
    pub out: PathBuf,
    /// CSV table path [default: <out> with a .csv extension].
    #[arg(long)]
    pub table: Option<PathBuf>,
    #[command(flatten)]
    pub provider: ProviderArgs,
    #[command(flatten)]
    pub augment: AugmentFlags,
}

#[derive(Debug, Args)]
pub struct ParaphraseArgs {
    #[arg(long)]
    pub text: String,
    #[arg(long, default_value_t = 3)]
    pub num_return: usize,
    #[command(flatten)]
    pub provider: ProviderArgs,
}

#[derive(Debug, Args)]
pub struct SynonymsArgs {
    #[arg(long)]
    pub word: String,
    #[arg(long)]
    pub embeddings: Option<PathBuf>,
    #[arg(long, default_value_t = 5)]
    pub k: usize,
    #[arg(long)]
    pub min_similarity: Option<f64>,
}

/// Optional config file. Every key mirrors a flag of the same name.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub jobs: Option<usize>,
    pub embeddings: Option<PathBuf>,
    pub provider: Option<ProviderKind>,
    pub url: Option<String>,
    pub strict_provider: Option<bool>,
    pub n: Option<usize>,
    pub target_pos: Option<Vec<PosTag>>,
    pub synonyms_per_token: Option<usize>,
    pub min_similarity: Option<f64>,
    pub paraphrases_per_candidate: Option<usize>,
    pub max_candidates: Option<usize>,
    pub reference_scope: Option<ScopeArg>,
    pub k: Option<Vec<usize>>,
    pub repeats: Option<usize>,
    pub seed: Option<u64>,
    pub temperature: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::validation(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::validation(format!("config {}: {e}", path.display())))
    }
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn validation(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_VALIDATION,
            message: message.into(),
        }
    }

    fn provider(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_PROVIDER,
            message: message.into(),
        }
    }
}

/// Parses `std::env::args` and runs; returns the process exit code.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let jobs = cli.jobs.or(file.jobs);
    if jobs == Some(0) {
        return Err(CliError::validation("--jobs must be at least 1"));
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        builder = builder.num_threads(j);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::validation(format!("thread pool: {e}")))?;
    pool.install(|| match cli.command {
        Command::Augment(args) => cmd_augment(args, &file),
        Command::Experiment(args) => cmd_experiment(args, &file),
        Command::Paraphrase(args) => cmd_paraphrase(args, &file),
        Command::Synonyms(args) => cmd_synonyms(args, &file),
    })
}

fn load_set(path: &Path) -> Result<TrainingSet, CliError> {
    load_dataset(path).map_err(|e| CliError::validation(format!("{}: {e}", path.display())))
}

fn load_thesaurus(flag: &Option<PathBuf>, file: &FileConfig) -> Result<EmbeddingTable, CliError> {
    let path = flag
        .clone()
        .or_else(|| file.embeddings.clone())
        .ok_or_else(|| CliError::validation("--embeddings is required"))?;
    load_embeddings(&path, EmbeddingFormat::from_path(&path))
        .map_err(|e| CliError::validation(format!("{}: {e}", path.display())))
}

struct ProviderChoice {
    provider: Box<dyn ParaphraseProvider>,
    strict: bool,
}

fn build_provider(args: &ProviderArgs, file: &FileConfig) -> Result<ProviderChoice, CliError> {
    let kind = args.provider.or(file.provider).unwrap_or(ProviderKind::Rules);
    let strict = args.strict_provider || file.strict_provider.unwrap_or(false);
    let provider: Box<dyn ParaphraseProvider> = match kind {
        ProviderKind::Rules => Box::new(RuleProvider),
        ProviderKind::None => Box::new(NoProvider),
        ProviderKind::Remote => {
            let url = args
                .url
                .clone()
                .or_else(|| file.url.clone())
                .filter(|u| !u.trim().is_empty())
                .ok_or_else(|| {
                    CliError::validation(format!("--provider remote needs --url or {PARAPHRASE_URL_ENV}"))
                })?;
            let remote = RemoteProvider::new(url);
            match remote.health() {
                Ok(h) if h.status == "ok" => log::info!("paraphrase service {} is up", remote.base_url()),
                Ok(h) if strict => {
                    return Err(CliError::provider(format!(
                        "paraphrase service reports status {:?}",
                        h.status
                    )))
                }
                Ok(h) => log::warn!("paraphrase service reports status {:?}", h.status),
                Err(e) if strict => return Err(CliError::provider(e.to_string())),
                Err(e) => log::warn!("paraphrase service health check failed: {e}"),
            }
            Box::new(remote)
        }
    };
    Ok(ProviderChoice { provider, strict })
}

fn augment_config(flags: &AugmentFlags, file: &FileConfig) -> AugmentConfig {
    let d = AugmentConfig::default();
    let scope = flags.reference_scope.or(file.reference_scope).map(|s| match s {
        ScopeArg::Scenario => ReferenceScope::Scenario,
        ScopeArg::Intent => ReferenceScope::Intent,
    });
    AugmentConfig {
        n: flags.n.or(file.n).unwrap_or(d.n),
        target_pos: flags
            .target_pos
            .clone()
            .or_else(|| file.target_pos.clone())
            .map(|v| v.into_iter().collect::<BTreeSet<_>>())
            .unwrap_or(d.target_pos),
        synonyms_per_token: flags
            .synonyms_per_token
            .or(file.synonyms_per_token)
            .unwrap_or(d.synonyms_per_token),
        min_similarity: flags.min_similarity.or(file.min_similarity).unwrap_or(d.min_similarity),
        max_candidates_per_query: flags
            .max_candidates
            .or(file.max_candidates)
            .unwrap_or(d.max_candidates_per_query),
        paraphrases_per_candidate: flags
            .paraphrases_per_candidate
            .or(file.paraphrases_per_candidate)
            .unwrap_or(d.paraphrases_per_candidate),
        reference_scope: scope.unwrap_or(d.reference_scope),
        seed: d.seed,
    }
}

fn ensure_not_input(out: &Path, inputs: &[&Path]) -> Result<(), CliError> {
    let canon = |p: &Path| fs::canonicalize(p).unwrap_or_else(|_| p.to_path_buf());
    if inputs.iter().any(|i| canon(i) == canon(out)) {
        return Err(CliError::validation(format!(
            "refusing to overwrite input file {}",
            out.display()
        )));
    }
    Ok(())
}

fn write(path: &Path, content: &str) -> Result<(), CliError> {
    fs::write(path, content).map_err(|e| CliError::validation(format!("cannot write {}: {e}", path.display())))
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn cmd_augment(args: AugmentArgs, file: &FileConfig) -> Result<i32, CliError> {
    let config = augment_config(&args.augment, file);
    config.validate().map_err(|e| CliError::validation(e.to_string()))?;
    let provenance_path = args
        .provenance
        .clone()
        .unwrap_or_else(|| with_suffix(&args.out, ".provenance.json"));
    ensure_not_input(&args.out, &[&args.train])?;
    ensure_not_input(&provenance_path, &[&args.train])?;

    let train = load_set(&args.train)?;
    let thesaurus = load_thesaurus(&args.embeddings, file)?;
    let choice = build_provider(&args.provider, file)?;

    let (augmented, report) = augment_dataset(&train, &thesaurus, choice.provider.as_ref(), &config)
        .map_err(|e| CliError::validation(e.to_string()))?;
    let failures = report.provider_failures();
    if failures > 0 {
        if choice.strict {
            return Err(CliError::provider(format!(
                "{failures} paraphrase request(s) failed; nothing written"
            )));
        }
        log::warn!("{failures} paraphrase request(s) failed; continued with synonym candidates only");
    }

    save_dataset(&augmented, &args.out).map_err(|e| CliError::validation(format!("{}: {e}", args.out.display())))?;
    let json = serde_json::to_string_pretty(&report).expect("provenance serializes");
    write(&provenance_path, &json)?;
    eprintln!(
        "{} queries in, {} added, {} candidates considered; wrote {} and {}",
        train.len(),
        report.accepted(),
        report.total_candidates(),
        args.out.display(),
        provenance_path.display()
    );
    Ok(EXIT_OK)
}

fn print_summary(report: &ExperimentReport) {
    let pct = |x: Option<f64>| x.map(|v| format!("{v:.1}")).unwrap_or_else(|| "-".into());
    println!("k\tarm\tmean_f1\tpct_improvement\tpct_optimal\tp_value");
    for s in &report.scenarios {
        for arm in Arm::ALL {
            let a = s.arm(arm);
            println!(
                "{}\t{}\t{:.1}\t{}\t{}\t{}",
                s.k,
                arm.as_str(),
                a.mean_weighted_f1,
                pct(a.pct_improvement),
                pct(a.pct_optimal),
                a.vs_baseline
                    .map(|m| format!("{:.4}", m.p_two_sided))
                    .unwrap_or_else(|| "-".into())
            );
        }
    }
    for s in &report.skipped {
        println!("# k={} skipped: {}", s.k, s.note);
    }
}

fn cmd_experiment(args: ExperimentArgs, file: &FileConfig) -> Result<i32, CliError> {
    let augment = augment_config(&args.augment, file);
    augment.validate().map_err(|e| CliError::validation(e.to_string()))?;
    let config = ExperimentConfig {
        scenarios: args
            .k
            .clone()
            .or_else(|| file.k.clone())
            .unwrap_or_else(|| vec![1, 3, 5]),
        repeats: args.repeats.or(file.repeats).unwrap_or(10),
        seed: args.seed.or(file.seed).unwrap_or(0),
        temperature: args.temperature.or(file.temperature).unwrap_or(DEFAULT_TEMPERATURE),
        mwu_mode: MwuMode::Auto,
        augment,
    };
    let table_path = args.table.clone().unwrap_or_else(|| args.out.with_extension("csv"));
    let mut inputs: Vec<&Path> = vec![&args.train];
    if let Some(t) = &args.test {
        inputs.push(t);
    }
    ensure_not_input(&args.out, &inputs)?;
    ensure_not_input(&table_path, &inputs)?;
    if table_path == args.out {
        return Err(CliError::validation("--table and --out must differ"));
    }

    let full = load_set(&args.train)?;
    let (train, test) = match (&args.test, args.split_fraction) {
        (Some(path), _) => (full, load_set(path)?),
        (None, Some(f)) => stratified_split(&full, f, seed::derive(config.seed, &[u64::MAX]))
            .map_err(|e| CliError::validation(e.to_string()))?,
        (None, None) => return Err(CliError::validation("either --test or --split-fraction is required")),
    };
    let thesaurus = load_thesaurus(&args.embeddings, file)?;
    let choice = build_provider(&args.provider, file)?;

    let report = run_experiments(&train, &test, &thesaurus, choice.provider.as_ref(), &config)
        .map_err(|e| CliError::validation(e.to_string()))?;
    let failures: usize = report.scenarios.iter().map(|s| s.provider_failures).sum();
    if failures > 0 && choice.strict {
        return Err(CliError::provider(format!(
            "{failures} paraphrase request(s) failed; nothing written"
        )));
    }
    write(&args.out, &report.to_json())?;
    write(&table_path, &report.to_csv())?;
    print_summary(&report);
    if report.scenarios.is_empty() {
        eprintln!("error: no scenario could be run");
        return Ok(EXIT_NOTHING_RAN);
    }
    Ok(EXIT_OK)
}

fn cmd_paraphrase(args: ParaphraseArgs, file: &FileConfig) -> Result<i32, CliError> {
    let request =
        ParaphraseRequest::new(args.text, args.num_return).map_err(|e| CliError::validation(e.to_string()))?;
    let choice = build_provider(&args.provider, file)?;
    match paraphrase(choice.provider.as_ref(), &request) {
        Ok(result) => {
            for p in result.paraphrases {
                println!("{p}");
            }
            Ok(EXIT_OK)
        }
        Err(ProviderError::InvalidRequest(m)) | Err(ProviderError::Rejected(m)) => Err(CliError::validation(m)),
        Err(e) => Err(CliError::provider(e.to_string())),
    }
}

fn cmd_synonyms(args: SynonymsArgs, file: &FileConfig) -> Result<i32, CliError> {
    if args.k == 0 {
        return Err(CliError::validation("--k must be at least 1"));
    }
    let table = load_thesaurus(&args.embeddings, file)?;
    let min_similarity = args
        .min_similarity
        .or(file.min_similarity)
        .unwrap_or(DEFAULT_MIN_SIMILARITY);
    for c in table.synonyms(&args.word, args.k, min_similarity) {
        println!("{}\t{:.4}", c.word, c.similarity);
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file: FileConfig =
            toml::from_str("n = 3\nmin_similarity = 0.7\ntarget_pos = [\"VERB\", \"NOUN\"]").unwrap();
        let flags = AugmentFlags {
            n: Some(2),
            target_pos: None,
            synonyms_per_token: None,
            min_similarity: None,
            paraphrases_per_candidate: None,
            max_candidates: None,
            reference_scope: None,
        };
        let c = augment_config(&flags, &file);
        assert_eq!(c.n, 2);
        assert_eq!(c.min_similarity, 0.7);
        assert_eq!(c.target_pos, BTreeSet::from([PosTag::Verb, PosTag::Noun]));
    }

    #[test]
    fn unknown_config_key_is_rejected() {
        assert!(toml::from_str::<FileConfig>("bogus = 1").is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_from(["botaug", "augment"]), EXIT_VALIDATION);
        assert_eq!(
            run_from(["botaug", "synonyms", "--word", "x", "--k", "0"]),
            EXIT_VALIDATION
        );
    }
}
