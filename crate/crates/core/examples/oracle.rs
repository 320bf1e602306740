//! Cross-check the collector against a brute-force Cayley table.

use pqp::corpus::{build, FamilySpec};
use pqp::oracle::{recompute_and_compare, AssocMode, CayleyTable};

fn main() {
    for spec in [
        FamilySpec::paper_256(),
        FamilySpec::paper_729(),
        FamilySpec::extraspecial(5),
    ] {
        let g = build(&spec).unwrap();
        let t = CayleyTable::build(&g).unwrap();
        let assoc = t.check_associativity(AssocMode::Auto).unwrap();
        let cmp = recompute_and_compare(&g, &t).unwrap();
        println!(
            "{:<18} latin {} assoc {} triples ({}) diff {}",
            spec.label(),
            t.is_latin_square(),
            assoc.triples,
            if assoc.exhaustive { "all" } else { "sampled" },
            if cmp.is_empty() {
                "empty".to_string()
            } else {
                format!("{:?}", cmp.diff)
            }
        );
    }
}
