//! Step-by-step replay of the pipeline on a two-query scenario: tag, swap
//! synonyms, paraphrase, then keep the candidate furthest from the scenario.

use botaug::augment::{diversity_rank, replace_synonyms, select_top, AugmentConfig, CandidateQuery};
use botaug::corpus::{Origin, Query};
use botaug::paraphrase::{paraphrase, ParaphraseRequest, ScriptedProvider};
use botaug::textproc::{tag_pos, tokenize, LexiconTagger};
use botaug::thesaurus::StaticThesaurus;

fn main() {
    let scenario = vec![
        Query::new(
            "What files cause the most issues?",
            "BuggyFiles",
            vec![],
            Origin::Original,
        )
        .unwrap(),
        Query::new(
            "What files contain the most issues?",
            "BuggyFiles",
            vec![],
            Origin::Original,
        )
        .unwrap(),
    ];
    let thesaurus = StaticThesaurus::new().with("cause", &["induce", "generate"]);
    let config = AugmentConfig::default();

    let source = &scenario[0];
    let tokens = tag_pos(LexiconTagger::builtin(), tokenize(&source.text, &source.entities));
    let tags: Vec<String> = tokens
        .iter()
        .map(|t| format!("{}/{}", t.text, t.pos.as_str()))
        .collect();
    println!("tagged: {}", tags.join(" "));

    let mut pool = replace_synonyms(source, 0, &tokens, &thesaurus, &config);
    for c in &pool {
        println!("synonym candidate: {}", c.text);
    }

    // A stand-in for the paraphrase service.
    let provider =
        ScriptedProvider::new("scripted").with("What files induce the most issues?", &["Most issue inducing files?"]);
    let mut paraphrased = Vec::new();
    for c in &pool {
        let req = ParaphraseRequest::new(c.text.clone(), 3).unwrap();
        for text in paraphrase(&provider, &req).unwrap().paraphrases {
            let mut derivation = c.derivation.clone();
            derivation.provider = Some("scripted".into());
            paraphrased.push(CandidateQuery {
                text,
                intent: c.intent.clone(),
                derivation,
                min_distance: None,
            });
        }
    }
    pool.extend(paraphrased);

    let ranked = diversity_rank(pool, &scenario).unwrap();
    for c in &ranked {
        println!("{:>3}  {}", c.min_distance.unwrap(), c.text);
    }
    let chosen = select_top(&ranked, config.n);
    println!("selected: {}", chosen[0].text);
}
