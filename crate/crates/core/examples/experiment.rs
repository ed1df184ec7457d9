//! Baseline vs. augmented vs. human arms on the repository miniature.

use botaug::corpus::load_dataset;
use botaug::eval::{run_experiments, Arm, ExperimentConfig};
use botaug::paraphrase::RuleProvider;
use botaug::thesaurus::{load_embeddings, EmbeddingFormat};

fn main() {
    let root = env!("CARGO_MANIFEST_DIR");
    let train = load_dataset(format!("{root}/fixtures/repository_train.tsv")).unwrap();
    let test = load_dataset(format!("{root}/fixtures/repository_test.tsv")).unwrap();
    let table = load_embeddings(format!("{root}/data/se_mini.vec"), EmbeddingFormat::Text).unwrap();

    let config = ExperimentConfig {
        scenarios: vec![1, 3, 5],
        repeats: 10,
        seed: 7,
        ..Default::default()
    };
    let report = run_experiments(&train, &test, &table, &RuleProvider, &config).unwrap();

    let opt = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.1}"));
    println!(" k  arm        F1    %Impr  %Opt   p");
    for s in &report.scenarios {
        for arm in Arm::ALL {
            let a = s.arm(arm);
            println!(
                "{:>2}  {:<9} {:>5.1}  {:>5}  {:>5}  {}",
                s.k,
                arm.as_str(),
                a.mean_weighted_f1,
                opt(a.pct_improvement),
                opt(a.pct_optimal),
                a.vs_baseline
                    .map_or("-".to_string(), |m| format!("{:.3}", m.p_two_sided)),
            );
        }
    }
    print!("\n{}", report.to_csv().lines().take(4).collect::<Vec<_>>().join("\n"));
    println!("\n...");
}
