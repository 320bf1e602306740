//! Write every corpus presentation into a directory.
//!
//! `cargo run --example make_corpus -- /tmp/corpus`

use pqp::corpus::{build, presentation, standard_corpus};
use pqp::GroupView;

fn main() {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "corpus".into());
    std::fs::create_dir_all(&dir).unwrap();
    for spec in standard_corpus() {
        let text = presentation(&spec).unwrap().to_text();
        let order = build(&spec).unwrap().order();
        let label = spec.label();
        let stem: Vec<&str> = label
            .split(|c: char| !c.is_ascii_alphanumeric() && c != '_')
            .filter(|s| !s.is_empty())
            .collect();
        let path = format!("{dir}/{}.pqp", stem.join("_"));
        std::fs::write(&path, format!("# {label}\n{text}")).unwrap();
        println!("{path:<40} order {order}");
    }
}
