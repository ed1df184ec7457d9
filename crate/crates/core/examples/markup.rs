//! Parse and render the `[value](Type)` entity markup.

use botaug::corpus::{parse_annotated, render_annotated, Query};

fn main() {
    let markup = "How to upgrade Ubuntu [14.04.1](UbuntuVersion) to [14.04.2](UbuntuVersion)?";
    let (plain, spans) = parse_annotated(markup).expect("well-formed markup");
    println!("plain: {plain}");
    for s in &spans {
        println!("  {:<14} {:>2}..{:<2} {:?}", s.entity_type, s.start, s.end, s.value);
    }
    assert_eq!(render_annotated(&plain, &spans).unwrap(), markup);

    let q = Query::from_markup("FixCommit", "Which commit fixed bug [5391](BugId)?").unwrap();
    println!("{} -> {}", q.intent, q.to_markup().unwrap());

    // Offsets in errors are character positions.
    for bad in ["fix [a](T", "see [](BugId)", "nested [a [b](X)](Y)"] {
        println!("{bad:?}: {}", parse_annotated(bad).unwrap_err());
    }
}
