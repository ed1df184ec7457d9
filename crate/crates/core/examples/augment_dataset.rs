//! Augment the Ask Ubuntu miniature end to end and inspect the provenance.

use botaug::augment::{augment_dataset, AugmentConfig, CandidateStatus};
use botaug::corpus::load_dataset;
use botaug::paraphrase::RuleProvider;
use botaug::textproc::PosTag;
use botaug::thesaurus::{load_embeddings, EmbeddingFormat};

fn main() {
    let root = env!("CARGO_MANIFEST_DIR");
    let scenario = load_dataset(format!("{root}/fixtures/askubuntu.json")).unwrap();
    let table = load_embeddings(format!("{root}/data/se_mini.vec"), EmbeddingFormat::Text).unwrap();
    let config = AugmentConfig {
        n: 2,
        target_pos: [PosTag::Verb, PosTag::Noun].into(),
        ..Default::default()
    };

    let (augmented, report) = augment_dataset(&scenario, &table, &RuleProvider, &config).unwrap();
    println!("{} -> {} queries", scenario.len(), augmented.len());

    for intent in &report.intents {
        println!(
            "\n{} ({} candidates, {} accepted)",
            intent.intent,
            intent.candidates.len(),
            intent.accepted
        );
        for c in &intent.candidates {
            match &c.status {
                CandidateStatus::Selected => println!("  + [{}] {}", c.min_distance.unwrap_or(0), c.text),
                CandidateStatus::Rejected(why) => println!("  - {} ({why})", c.text),
                CandidateStatus::Discarded(_) => {}
            }
        }
    }
    for q in augmented.iter().filter(|q| q.origin != botaug::Origin::Original) {
        println!("{}\t{}", q.intent, q.to_markup().unwrap());
    }
}
