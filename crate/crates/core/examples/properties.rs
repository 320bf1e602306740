//! Structural properties of the shipped order-6561 group, with witnesses.

use pqp::corpus::{build, FamilySpec};
use pqp::predicates::{property_report, PredicateOptions};
use pqp::subgroup::{center, derived, frattini};

fn main() {
    let g = build(&FamilySpec::paper_6561()).unwrap();
    println!("|Z(G)| = {}", center(&g).order());
    println!("|G'|   = {}", derived(&g).unwrap().order());
    println!("|Phi|  = {}", frattini(&g).unwrap().order());

    // the non-regular pair is found immediately when offered first
    let opts = PredicateOptions {
        priority_pairs: vec![(g.elem("a^18 c^18 d"), g.elem("c"))],
        ..PredicateOptions::default()
    };
    let report = property_report(&g, "paper_6561", &opts).unwrap();
    for (name, entry) in &report.properties {
        println!("{name:<18} {:?}", entry.holds);
        if let Some(w) = &entry.witness {
            for e in &w.elements {
                println!("    {} = {}", e.name, e.word);
            }
        }
    }
}
