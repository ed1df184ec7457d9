//! Train the reference classifier and score a held-out split.

use botaug::corpus::load_dataset;
use botaug::eval::{confidence_split, evaluate_with_predictions, train_classifier, DEFAULT_TEMPERATURE};

fn main() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
    let train = load_dataset(format!("{dir}/repository_train.tsv")).unwrap();
    let test = load_dataset(format!("{dir}/repository_test.tsv")).unwrap();

    let model = train_classifier(&train, DEFAULT_TEMPERATURE).unwrap();
    println!(
        "{} intents, {} features",
        model.intents().len(),
        model.vocabulary_size()
    );

    let (metrics, predictions) = evaluate_with_predictions(&model, &test);
    for (truth, p) in predictions.iter().take(6) {
        let mark = if &p.intent == truth { ' ' } else { '*' };
        println!("{mark} {:<20} {:.3}  (truth {truth})", p.intent, p.confidence);
    }
    println!("\nintent                  P      R     F1  support");
    for (intent, m) in &metrics.per_intent {
        println!(
            "{intent:<20} {:>6.1} {:>6.1} {:>6.1} {:>6}",
            m.precision, m.recall, m.f1, m.support
        );
    }
    println!("weighted F1 {:.1}", metrics.weighted_f1);

    let split = confidence_split(predictions.iter().map(|(t, p)| (t.as_str(), p)));
    if let Some(s) = split.correct_summary {
        println!(
            "median confidence when correct: {:.3} (IQR {:.3}..{:.3})",
            s.median, s.q1, s.q3
        );
    }
    match split.incorrect_summary {
        Some(s) => println!("median confidence when wrong:   {:.3}", s.median),
        None => println!("no misclassifications"),
    }
}
