//! The offline rule-based paraphraser.

use botaug::paraphrase::{paraphrase, ParaphraseRequest, RuleProvider};

fn main() {
    let inputs = [
        "What files induce the most issues?",
        "How can I install a printer driver?",
        "Show me the commits from last week",
        "Fixes for bug 42",
    ];
    for text in inputs {
        let req = ParaphraseRequest::new(text, 3).unwrap();
        let out = paraphrase(&RuleProvider, &req).unwrap();
        println!("{text}");
        for p in out.paraphrases {
            println!("    {p}");
        }
    }
}
