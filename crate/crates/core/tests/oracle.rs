//! Engine against the Cayley-table oracle.

use std::collections::BTreeSet;

use pqp::corpus::{build, standard_corpus, FamilySpec};
use pqp::oracle::{oracle_subgroups_in_engine, recompute_and_compare, AssocMode, CayleyTable};
use pqp::subgroup::{
    closure, derived, enumerate_subgroups, min_generators, normal_closure, EnumerationBudget,
};
use pqp::{collect::Collector, parse_presentation, Elem, GroupView, PcGroup};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn table(g: &PcGroup) -> CayleyTable {
    let t = CayleyTable::build_with_budget(g, 10_000, 2).unwrap();
    assert!(t.is_latin_square());
    t
}

/// Oracle index of an engine element.
fn o(g: &PcGroup, t: &CayleyTable, x: Elem) -> Elem {
    t.index_of(&g.vector_of(x)).unwrap()
}

#[test]
fn every_fixture_has_empty_diff() {
    for spec in standard_corpus() {
        let g = build(&spec).unwrap();
        if g.order() > 6561 {
            continue;
        }
        let t = table(&g);
        let r = recompute_and_compare(&g, &t).unwrap();
        assert!(r.is_empty(), "{}: {:#?}", spec.label(), r.diff);
        assert!(r.compared.len() >= 8);
    }
}

#[test]
fn full_associativity_on_order_256() {
    let g = build(&FamilySpec::paper_256()).unwrap();
    let t = table(&g);
    let start = std::time::Instant::now();
    let a = t.check_associativity(AssocMode::Full).unwrap();
    assert_eq!(a.triples, 16_777_216);
    assert!(a.exhaustive && a.failure.is_none());
    assert!(start.elapsed().as_secs() < 30);
    assert_eq!(t.naive_omega(1).len(), 64);
}

#[test]
fn sampled_associativity_on_order_6561() {
    let g = build(&FamilySpec::paper_6561()).unwrap();
    let t = table(&g);
    let a = t.check_associativity(AssocMode::Auto).unwrap();
    assert_eq!(a.triples, 1_000_000);
    assert!(!a.exhaustive && a.failure.is_none());
}

#[test]
fn order_729_has_exponent_nine_on_the_table() {
    let g = build(&FamilySpec::paper_729()).unwrap();
    let t = table(&g);
    assert_eq!(t.naive_agemo(2), vec![t.identity()]);
    assert!(recompute_and_compare(&g, &t).unwrap().is_empty());
}

#[test]
fn products_agree_with_table() {
    for spec in standard_corpus() {
        let g = build(&spec).unwrap();
        if g.order() > 6561 {
            continue;
        }
        let t = table(&g);
        if g.order() <= 729 {
            for x in g.elements() {
                for y in g.elements() {
                    assert_eq!(
                        o(&g, &t, g.multiply(x, y)),
                        t.product(o(&g, &t, x), o(&g, &t, y))
                    );
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            for _ in 0..100_000 {
                let x = rng.random_range(0..g.order() as Elem);
                let y = rng.random_range(0..g.order() as Elem);
                assert_eq!(
                    o(&g, &t, g.multiply(x, y)),
                    t.product(o(&g, &t, x), o(&g, &t, y))
                );
            }
        }
    }
}

#[test]
fn subgroup_lattices_agree_up_to_p4() {
    let specs = [
        FamilySpec::cyclic(3, 2),
        FamilySpec::cyclic(2, 3),
        FamilySpec::cyclic(3, 4),
        FamilySpec::abelian(3, &[1, 1]),
        FamilySpec::abelian(3, &[2, 1]),
        FamilySpec::abelian(3, &[2, 2]),
        FamilySpec::abelian(3, &[1, 1, 1, 1]),
        FamilySpec::abelian(2, &[2, 1, 1]),
        FamilySpec::abelian(5, &[2, 1]),
        FamilySpec::extraspecial(3),
        FamilySpec::extraspecial(5),
    ];
    for spec in specs {
        let g = build(&spec).unwrap();
        let t = table(&g);
        let oracle = oracle_subgroups_in_engine(&g, &t);
        let engine: BTreeSet<Vec<Elem>> = enumerate_subgroups(&g, EnumerationBudget::default())
            .map(|h| h.unwrap().elements().to_vec())
            .collect();
        assert_eq!(engine, oracle, "{}", spec.label());
    }
}

/// Subgroups of `C_{p^a} x C_{p^b}` with `a >= b`: the sum over subgroup
/// orders `p^k` of the number of subgroups of that order.
fn abelian_rank_two_count(p: u64, a: u32, b: u32) -> u64 {
    let mut total = 0;
    for k in 0..=(a + b) {
        // subgroups of order p^k: sum over types (k1 >= k2), k1 + k2 = k
        for k2 in 0..=k.min(b) {
            let k1 = k - k2;
            if k1 < k2 || k1 > a {
                continue;
            }
            // number of subgroups of type (p^k1, p^k2) in C_{p^a} x C_{p^b}
            total += if k1 == k2 {
                1
            } else if k1 <= b {
                (p + 1) * p.pow(k1 - k2 - 1)
            } else {
                p.pow(b - k2)
            };
        }
    }
    total
}

#[test]
fn abelian_counts_match_oracle() {
    for (p, a, b) in [
        (3, 2, 1),
        (3, 2, 2),
        (2, 2, 1),
        (2, 3, 1),
        (5, 2, 1),
        (3, 3, 1),
    ] {
        let g = build(&FamilySpec::abelian(p, &[a, b])).unwrap();
        let t = table(&g);
        let oracle = t.naive_subgroups().len() as u64;
        let engine = enumerate_subgroups(&g, EnumerationBudget::default()).count() as u64;
        assert_eq!(engine, oracle, "p={p} a={a} b={b}");
        assert_eq!(
            abelian_rank_two_count(p as u64, a, b),
            oracle,
            "p={p} a={a} b={b}"
        );
    }
}

#[test]
fn higman_subgroup_count() {
    let g = build(&FamilySpec::higman(3, 2)).unwrap();
    let t = table(&g);
    assert_eq!(t.naive_subgroups().len(), 117);
    let oracle = oracle_subgroups_in_engine(&g, &t);
    let engine: BTreeSet<Vec<Elem>> = enumerate_subgroups(&g, EnumerationBudget::default())
        .map(|h| h.unwrap().elements().to_vec())
        .collect();
    assert_eq!(engine, oracle);
}

#[test]
fn order_6561_values() {
    let g = build(&FamilySpec::paper_6561()).unwrap();
    let t = table(&g);
    let ab = t.product(o(&g, &t, g.elem("a")), o(&g, &t, g.elem("b")));
    let ab3 = t.naive_power(ab, 3);
    assert_eq!(ab3, o(&g, &t, g.elem("a^3")));
    assert_eq!(g.elem("a b a b a b"), g.elem("a^3"));

    let x = g.elem("a^18 c^18 d");
    let inv = t.search_inverse(o(&g, &t, x));
    assert_eq!(inv, o(&g, &t, g.elem("d^2 c^9 a^9")));
    assert_eq!(o(&g, &t, g.inverse(x)), inv);
    assert_eq!(g.multiply(x, g.inverse(x)), 0);
    assert_eq!(t.naive_order(o(&g, &t, x)), 3);
    assert_eq!(g.element_order(x), 3);

    let d = t.naive_derived();
    assert_eq!(d.len(), 27);
    assert_eq!(derived(&g).unwrap().order(), 27);
    assert_eq!(
        closure(&g, &[g.elem("a^3"), g.elem("b")]).unwrap().order(),
        27
    );

    let b = o(&g, &t, g.elem("b"));
    let mut conj = vec![b];
    for z in 0..t.order() as Elem {
        conj.push(t.product(t.product(t.inverse(z), b), z));
    }
    assert_eq!(t.naive_closure(&conj).len(), 9);
    assert_eq!(normal_closure(&g, &[g.elem("b")]).unwrap().order(), 9);

    let phi = t.naive_frattini();
    assert_eq!(t.order() / phi.len(), 27);
    assert_eq!(min_generators(&g).unwrap(), 3);
}

#[test]
fn relation_variant_consistency() {
    let text = pqp::corpus::PAPER_6561.replace("conj a c = a^4 b", "conj a c = a^4");
    let pres = parse_presentation(&text).unwrap();
    let c = Collector::new(&pres).unwrap();
    let overlap = c.consistency().unwrap();
    let action = c.regular_action_check(10_000).unwrap().unwrap();
    assert!(overlap.consistent);
    assert!(action.consistent && action.bijective);
    assert_eq!(action.normal_forms, 6561);
    let g = PcGroup::new(pres).unwrap();
    let t = table(&g);
    assert_eq!(t.order(), 6561);
}

/// Order 3^9 is beyond the table budget, so the commutator order is checked
/// by repeated collection instead.
#[test]
fn higman_commutator_order() {
    let g = build(&FamilySpec::higman(3, 3)).unwrap();
    assert_eq!(g.order(), 19683);
    let (x, y) = (g.elem("x1"), g.elem("x2 y3"));
    let c = g.commutator(x, y);
    assert_eq!(g.element_order(c), 3);
    let col = g.collector();
    let word = g
        .word(x)
        .inverse()
        .concat(&g.word(y).inverse())
        .concat(&g.word(x))
        .concat(&g.word(y));
    let cv = col.normal_form(&word).unwrap();
    assert_eq!(cv, g.vector_of(c));
    let mut p = cv.clone();
    let mut k = 1;
    while p.iter().any(|&e| e != 0) {
        p = col.multiply(&p, &cv).unwrap();
        k += 1;
    }
    assert_eq!(k, 3);
}
