//! Parse a presentation, check it, and compute with its elements.

use pqp::{GroupView, PcGroup};

const TEXT: &str = "\
prime 3
gen a 3
gen b 3
gen c 3
conj b a = b c
";

fn main() {
    let g = PcGroup::from_text(TEXT).expect("consistent presentation");
    let report = g.consistency();
    println!(
        "order {} ({} overlaps checked)",
        g.order(),
        report.overlaps_checked
    );

    let (a, b) = (g.elem("a"), g.elem("b"));
    let ab = g.multiply(a, b);
    println!("a b       = {}", g.describe(ab));
    println!("b a       = {}", g.describe(g.multiply(b, a)));
    println!("[b, a]    = {}", g.describe(g.commutator(b, a)));
    println!("(a b)^-1  = {}", g.describe(g.inverse(ab)));
    println!("(a b)^3   = {}", g.describe(g.power(ab, 3)));
    println!("o(a b)    = {}", g.element_order(ab));
    println!("b^a       = {}", g.describe(g.conjugate(b, a)));
}
