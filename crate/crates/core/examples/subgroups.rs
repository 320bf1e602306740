//! Enumerate the subgroups of a small group and tabulate generator counts.

use std::collections::BTreeMap;

use pqp::corpus::{build, FamilySpec};
use pqp::subgroup::{
    enumerate_subgroups, min_generators, sample_subgroups, EnumerationBudget, SubgroupView,
};

fn main() {
    let g = build(&FamilySpec::higman(3, 2)).unwrap();
    let mut table: BTreeMap<(usize, u32), usize> = BTreeMap::new();
    for h in enumerate_subgroups(&g, EnumerationBudget::default()) {
        let h = h.unwrap();
        let d = min_generators(&SubgroupView::new(&g, &h)).unwrap();
        *table.entry((h.order(), d)).or_default() += 1;
    }
    println!("higman(3,2): order, d(H), count");
    for ((order, d), n) in &table {
        println!("{order:>5} {d:>3} {n:>5}");
    }

    let big = build(&FamilySpec::paper_6561()).unwrap();
    let sample = sample_subgroups(&big, 200, 3, 7).unwrap();
    let max = sample
        .iter()
        .map(|h| min_generators(&SubgroupView::new(&big, h)).unwrap())
        .max();
    println!("paper_6561: max d(H) over 200 sampled subgroups = {max:?}");
}
