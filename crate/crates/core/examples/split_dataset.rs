//! Stratified train/test split of an unsplit corpus, then a k-shot scenario.

use botaug::corpus::{load_dataset, sample_scenario, stratified_split};

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/stackoverflow.tsv");
    let all = load_dataset(path).unwrap();
    let (train, test) = stratified_split(&all, 0.5, 42).unwrap();
    for (intent, qs) in all.intents() {
        println!(
            "{intent:<24} {:>2} = {:>2} train + {:>2} test",
            qs.len(),
            train.queries(intent).len(),
            test.queries(intent).len()
        );
    }

    let (scenario, held_out) = sample_scenario(&train, 2, 1).unwrap();
    println!(
        "\n2-shot scenario: {} queries, {} held out",
        scenario.len(),
        held_out.len()
    );
    for q in scenario.iter().take(5) {
        println!("  {:<24} {}", q.intent, q.text);
    }

    if let Err(e) = sample_scenario(&train, 3, 1) {
        println!("\nk=3: {e}");
    }
}
