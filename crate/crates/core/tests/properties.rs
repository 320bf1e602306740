//! Algebraic invariants under random inputs.

use std::sync::OnceLock;

use proptest::prelude::*;

use pqp::corpus::{build, FamilySpec};
use pqp::oracle::CayleyTable;
use pqp::subgroup::{
    center, closure, derived, derived_by_all_commutators, frattini, irredundant_generators,
    min_generators, normal_closure,
};
use pqp::theorems::witt::{witt_count, witt_sum};
use pqp::{parse_presentation, quotient, Elem, GroupView, PcGroup};

fn groups() -> &'static [(String, PcGroup)] {
    static G: OnceLock<Vec<(String, PcGroup)>> = OnceLock::new();
    G.get_or_init(|| {
        [
            FamilySpec::paper_6561(),
            FamilySpec::paper_729(),
            FamilySpec::paper_256(),
            FamilySpec::extraspecial(5),
            FamilySpec::higman(3, 2),
            FamilySpec::abelian(2, &[2, 1, 1]),
        ]
        .iter()
        .map(|s| (s.label(), build(s).unwrap()))
        .collect()
    })
}

fn tables() -> &'static [CayleyTable] {
    static T: OnceLock<Vec<CayleyTable>> = OnceLock::new();
    T.get_or_init(|| {
        groups()
            .iter()
            .map(|(_, g)| CayleyTable::build(g).unwrap())
            .collect()
    })
}

fn group_and_elems(k: usize) -> impl Strategy<Value = (usize, Vec<Elem>)> {
    (0..groups().len()).prop_flat_map(move |i| {
        let n = groups()[i].1.order() as Elem;
        (Just(i), proptest::collection::vec(0..n, k))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn group_axioms((i, e) in group_and_elems(3)) {
        let g = &groups()[i].1;
        let (x, y, z) = (e[0], e[1], e[2]);
        prop_assert_eq!(g.multiply(g.multiply(x, y), z), g.multiply(x, g.multiply(y, z)));
        prop_assert_eq!(g.multiply(x, 0), x);
        prop_assert_eq!(g.multiply(0, x), x);
        prop_assert_eq!(g.multiply(x, g.inverse(x)), 0);
        prop_assert_eq!(g.multiply(g.inverse(x), x), 0);
    }

    #[test]
    fn products_match_table((i, e) in group_and_elems(2)) {
        let (g, t) = (&groups()[i].1, &tables()[i]);
        let o = |x: Elem| t.index_of(&g.vector_of(x)).unwrap();
        prop_assert_eq!(o(g.multiply(e[0], e[1])), t.product(o(e[0]), o(e[1])));
        prop_assert_eq!(o(g.inverse(e[0])), t.inverse(o(e[0])));
    }

    #[test]
    fn power_laws((i, e) in group_and_elems(1), a in -60i64..60, b in -60i64..60) {
        let g = &groups()[i].1;
        let x = e[0];
        prop_assert_eq!(g.power(x, a + b), g.multiply(g.power(x, a), g.power(x, b)));
        prop_assert_eq!(g.power(g.power(x, a), b), g.power(x, a * b));
        let o = g.element_order(x);
        prop_assert_eq!(g.power(x, o as i64), 0);
        prop_assert!(o.is_power_of_two() || g.prime() != 2);
    }

    #[test]
    fn commutator_identities((i, e) in group_and_elems(3)) {
        let g = &groups()[i].1;
        let (x, y, z) = (e[0], e[1], e[2]);
        prop_assert_eq!(g.inverse(g.commutator(x, y)), g.commutator(y, x));
        // [x, yz] = [x, z] [x, y]^z
        let lhs = g.commutator(x, g.multiply(y, z));
        let rhs = g.multiply(g.commutator(x, z), g.conjugate(g.commutator(x, y), z));
        prop_assert_eq!(lhs, rhs);
        // Hall-Witt: [x, y^-1, z]^y [y, z^-1, x]^z [z, x^-1, y]^x = 1
        let c3 = |a: Elem, b: Elem, c: Elem| g.commutator(g.commutator(a, g.inverse(b)), c);
        let hw = g.multiply(
            g.multiply(g.conjugate(c3(x, y, z), y), g.conjugate(c3(y, z, x), z)),
            g.conjugate(c3(z, x, y), x),
        );
        prop_assert_eq!(hw, 0);
    }

    #[test]
    fn word_round_trip((i, e) in group_and_elems(1)) {
        let g = &groups()[i].1;
        let text = g.describe(e[0]);
        prop_assert_eq!(g.elem(&text), e[0]);
        let v = g.vector_of(e[0]);
        prop_assert_eq!(g.index_of_vector(&v), e[0]);
    }

    #[test]
    fn index_order_is_lexicographic((i, e) in group_and_elems(2)) {
        let g = &groups()[i].1;
        prop_assert_eq!(e[0].cmp(&e[1]), g.vector_of(e[0]).cmp(&g.vector_of(e[1])));
    }

    #[test]
    fn closures_are_subgroups((i, e) in group_and_elems(2)) {
        let g = &groups()[i].1;
        let h = closure(g, &e).unwrap();
        prop_assert_eq!(g.order() % h.order(), 0);
        prop_assert!(e.iter().all(|&x| h.contains(x)));
        for &x in h.elements().iter().take(50) {
            for &y in h.elements().iter().take(50) {
                prop_assert!(h.contains(g.multiply(x, y)));
            }
            prop_assert!(h.contains(g.inverse(x)));
        }
        let n = normal_closure(g, &e).unwrap();
        prop_assert!(h.is_subset_of(&n));
        prop_assert!(pqp::subgroup::is_normal(g, &n));
    }

    #[test]
    fn burnside_basis((i, e) in group_and_elems(4)) {
        // any set that generates G modulo Phi(G) generates G, and an irredundant
        // generating set has d(G) elements
        let g = &groups()[i].1;
        let phi = frattini(g).unwrap();
        let d = min_generators(g).unwrap();
        prop_assert_eq!(g.order() / phi.order(), (g.prime() as usize).pow(d));
        let mut gens = e.clone();
        gens.extend(phi.generators());
        let with_phi = closure(g, &gens).unwrap();
        let without = closure(g, &e).unwrap();
        let mut mod_phi = e.clone();
        mod_phi.extend(phi.elements().iter().copied());
        prop_assert_eq!(with_phi.order() == g.order(), without.order() == g.order());
        let mut all = e.clone();
        all.extend(g.generators());
        let irr = irredundant_generators(g, &all).unwrap();
        prop_assert_eq!(closure(g, &irr).unwrap().order(), g.order());
        prop_assert!(irr.len() >= d as usize);
    }

    #[test]
    fn quotient_by_normal_closure((i, e) in group_and_elems(1)) {
        let g = &groups()[i].1;
        let n = normal_closure(g, &e).unwrap();
        let q = quotient(g, &n).unwrap();
        prop_assert_eq!(q.order() * n.order(), g.order());
        for x in q.elements().take(20) {
            for y in q.elements().take(20) {
                let lifted = g.multiply(q.representative(x), q.representative(y));
                prop_assert_eq!(q.coset_of(lifted), q.multiply(x, y));
            }
        }
    }

    #[test]
    fn necklace_identity(r in 1u64..=6, n in 1u64..=9) {
        prop_assert_eq!(witt_count(r, n) as i128 * n as i128, witt_sum(r, n));
    }
}

#[test]
fn derived_two_ways() {
    for (name, g) in groups() {
        assert_eq!(
            derived(g).unwrap(),
            derived_by_all_commutators(g).unwrap(),
            "{name}"
        );
        let z = center(g);
        assert!(pqp::subgroup::is_normal(g, &z));
    }
}

#[test]
fn presentations_round_trip() {
    for (name, g) in groups() {
        let text = g.presentation().to_text();
        let again = PcGroup::new(parse_presentation(&text).unwrap()).unwrap();
        assert_eq!(again.order(), g.order(), "{name}");
        for x in g.elements().step_by(97) {
            for y in g.elements().step_by(101) {
                assert_eq!(again.multiply(x, y), g.multiply(x, y));
            }
        }
    }
}
