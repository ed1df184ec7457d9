//! Nearest neighbours in the bundled miniature embedding table.

use botaug::thesaurus::{load_embeddings, EmbeddingFormat, Thesaurus};

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/se_mini.vec");
    let table = load_embeddings(path, EmbeddingFormat::Text).expect("bundled table");
    println!("{} words, {} dims", table.len(), table.dim());

    for word in ["bug", "fix", "cause", "commit", "zzz"] {
        let syns: Vec<String> = table
            .synonyms(word, 5, 0.55)
            .into_iter()
            .map(|c| format!("{} ({:.2})", c.word, c.similarity))
            .collect();
        println!(
            "{word:>7}: {}",
            if syns.is_empty() {
                "-".to_string()
            } else {
                syns.join(", ")
            }
        );
    }
}
