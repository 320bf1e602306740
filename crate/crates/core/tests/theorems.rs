//! Theorem verifiers on the corpus, negative controls and witness replay.

use pqp::corpus::{build, standard_corpus, FamilySpec};
use pqp::oracle::CayleyTable;
use pqp::subgroup::{agemo, center, closure, SubgroupView};
use pqp::theorems::{
    hall_subgroup, run_suite, Checker, Status, SubgroupMode, Suite, TheoremVerdict, VerifyOptions,
};
use pqp::{Elem, GroupView, PcGroup};

mod common;
use common::{D32, SQUARES_64, WREATH_5};

fn opts() -> VerifyOptions {
    VerifyOptions::default()
}

fn waived() -> VerifyOptions {
    VerifyOptions {
        waive_hypotheses: true,
        ..VerifyOptions::default()
    }
}

fn find<'a>(vs: &'a [TheoremVerdict], id: &str) -> &'a TheoremVerdict {
    vs.iter()
        .find(|v| v.id == id)
        .unwrap_or_else(|| panic!("no verdict {id}"))
}

#[test]
fn odd_corpus_passes_every_verifier() {
    for spec in standard_corpus() {
        let g = build(&spec).unwrap();
        if g.prime() == 2 || g.order() > 6561 {
            continue;
        }
        let vs = run_suite(&g, &spec.label(), Suite::All, opts()).unwrap();
        for v in &vs {
            assert!(v.status != Status::Fails, "{}: {v:#?}", spec.label());
        }
        assert_eq!(
            find(&vs, "thm-1.1-i").status,
            Status::Holds,
            "{}",
            spec.label()
        );
    }
}

#[test]
fn higman_rank_three_detailed_bound() {
    let g = build(&FamilySpec::higman(3, 3)).unwrap();
    let c = Checker::new(&g, "higman(3,3)", opts()).unwrap();
    assert_eq!(c.is_quasi_powerful(), Some(true));
    let v = c.detailed_commutator_bound();
    assert_eq!(v.status, Status::Holds, "{v:#?}");
    assert!(v.swept.contains("sampled"));
}

#[test]
fn order_256_preconditions_fail_and_conditions_fail() {
    let g = build(&FamilySpec::paper_256()).unwrap();
    let vs = run_suite(&g, "paper_256", Suite::Rps, opts()).unwrap();
    for id in ["thm-1.1-i", "thm-1.1-ii", "thm-1.1-iii"] {
        let v = find(&vs, id);
        assert_eq!(v.status, Status::PreconditionFailed);
        assert_eq!(v.holds, None);
    }
    for id in ["rps-1", "rps-2", "rps-3"] {
        assert_eq!(find(&vs, id).status, Status::Fails);
    }
    let w = find(&vs, "rps-2").witness.as_ref().unwrap();
    assert_eq!(w.word("x"), Some("b^2"));
    assert_eq!(w.parameters["omega_exponent"], 4);
}

#[test]
fn order_729_agemo_powerful_not_embedded() {
    let g = build(&FamilySpec::paper_729()).unwrap();
    let c = Checker::new(&g, "paper_729", opts()).unwrap();
    let v = c.agemo_powerful().unwrap();
    assert_eq!(v.status, Status::Holds);
    assert!(
        v.notes
            .iter()
            .any(|n| n.contains("not powerfully embedded") && n.contains("b^3")),
        "{v:#?}"
    );
}

#[test]
fn rank_bound_on_higman_and_order_6561() {
    let g = build(&FamilySpec::higman(3, 2)).unwrap();
    let c = Checker::new(&g, "higman(3,2)", opts()).unwrap();
    let v = c.subgroup_rank_bound().unwrap();
    assert_eq!(v.status, Status::Holds);
    assert!(
        v.notes[0].contains("bound = 5") && v.notes[0].contains("max d(H) observed = 3"),
        "{v:#?}"
    );

    let g = build(&FamilySpec::paper_6561()).unwrap();
    let o = VerifyOptions {
        subgroups: SubgroupMode::Sample {
            count: 500,
            gens: 3,
            seed: 7,
        },
        ..opts()
    };
    let v = Checker::new(&g, "paper_6561", o)
        .unwrap()
        .subgroup_rank_bound()
        .unwrap();
    assert_eq!(v.status, Status::Holds);
    assert!(v.notes[0].starts_with("r = 3, bound = 9"), "{v:#?}");

    // d(G) = 3: b lies in the Frattini subgroup, so r is 3 and not the
    // number of presentation generators
    let phi = pqp::subgroup::frattini(&g).unwrap();
    assert!(phi.contains(g.elem("b")));
    let o = VerifyOptions {
        subgroups: SubgroupMode::Sample {
            count: 100,
            gens: 3,
            seed: 42,
        },
        ..opts()
    };
    let v = Checker::new(&g, "paper_6561", o)
        .unwrap()
        .subgroup_rank_bound()
        .unwrap();
    assert_eq!(v.status, Status::Holds);
    assert!(v.notes[0].starts_with("r = 3, bound = 9"), "{v:#?}");
}

#[test]
fn generator_level_commutator_orders() {
    for spec in standard_corpus() {
        let g = build(&spec).unwrap();
        if g.prime() == 2 {
            continue;
        }
        let c = Checker::new(&g, "", opts()).unwrap();
        if c.is_quasi_powerful() != Some(true) {
            continue;
        }
        for x in g.generators() {
            for y in g.generators() {
                let o = g.element_order(g.commutator(x, y));
                assert!(
                    o <= g.element_order(y) && o <= g.element_order(x),
                    "{}",
                    spec.label()
                );
            }
        }
    }
}

#[test]
fn hall_defect_of_a_b_on_the_table() {
    let g = build(&FamilySpec::paper_6561()).unwrap();
    let t = CayleyTable::build(&g).unwrap();
    let (a, b) = (g.elem("a"), g.elem("b"));
    let defect = g.multiply(
        g.power(g.multiply(a, b), 3),
        g.inverse(g.multiply(g.power(a, 3), g.power(b, 3))),
    );
    let tsub = closure(&g, &[a, b]).unwrap();
    assert!(hall_subgroup(&g, &tsub, 1).unwrap().contains(defect));

    // the same subgroup from the table: T, gamma_2(T), gamma_3(T), then gamma_2(T)^3 gamma_3(T)
    let o = |x: Elem| t.index_of(&g.vector_of(x)).unwrap();
    let tt = t.naive_closure(&[o(a), o(b)]);
    let comms = |u: &[Elem], v: &[Elem]| -> Vec<Elem> {
        let mut out = Vec::new();
        for &x in u {
            for &y in v {
                out.push(t.naive_commutator(x, y));
            }
        }
        t.naive_closure(&out)
    };
    let g2 = comms(&tt, &tt);
    let g3 = comms(&g2, &tt);
    let mut gens: Vec<Elem> = g2.iter().map(|&x| t.naive_power(x, 3)).collect();
    gens.extend(&g3);
    let prescribed = t.naive_closure(&gens);
    assert!(prescribed.contains(&o(defect)));
    let engine = hall_subgroup(&g, &tsub, 1).unwrap();
    assert_eq!(engine.order(), prescribed.len());
}

#[test]
fn identities_on_order_729_with_many_pairs() {
    let g = build(&FamilySpec::paper_729()).unwrap();
    let [e4, e5] = Checker::new(&g, "paper_729", opts())
        .unwrap()
        .collection_identities()
        .unwrap();
    assert!(e4.holds() && e5.holds());
    assert!(e4.swept.starts_with("100 seeded pairs"));
}

#[test]
fn negative_controls_fire() {
    let d32 = PcGroup::from_text(D32).unwrap();
    let c = Checker::new(&d32, "D32", waived()).unwrap();
    assert!(c.weight_four().failed());
    assert!(c.omega_class().unwrap().failed());
    assert!(c.interchanging().unwrap().failed());
    assert!(c.commutator_bound().failed());
    assert!(c.detailed_commutator_bound().failed());
    assert!(c.h_powerfully_embedded().unwrap().failed());
    assert!(c.commutator_bound().precondition.contains("waived"));

    let w5 = PcGroup::from_text(WREATH_5).unwrap();
    let c = Checker::new(&w5, "C5 wr C5", waived()).unwrap();
    assert_eq!(c.is_quasi_powerful(), Some(false));
    assert!(c.weight_four().failed());
    assert!(c.omega_class().unwrap().failed());

    let sq = PcGroup::from_text(SQUARES_64).unwrap();
    assert!(Checker::new(&sq, "sq64", waived())
        .unwrap()
        .power_products()
        .failed());

    let g = build(&FamilySpec::paper_729()).unwrap();
    let c = Checker::new(&g, "paper_729", opts()).unwrap();
    let g3 = agemo(&g, 1).unwrap();
    let v = c.powerfully_embedded_check(&g3, "G^3").unwrap();
    assert!(v.failed());
    let w = v.witness.unwrap();
    assert_eq!(
        (w.word("x"), w.word("g"), w.word("[x,g]")),
        (Some("a^3"), Some("c"), Some("b^3"))
    );

    let h = build(&FamilySpec::higman(3, 2)).unwrap();
    let c = Checker::new(&h, "higman(3,2)", opts()).unwrap();
    let whole = pqp::Subgroup::whole(&h);
    assert!(c.strongly_powerful_check(&whole, "G").unwrap().failed());
    assert!(c.h_strongly_powerful().unwrap().holds());
}

#[test]
fn unwaived_controls_report_preconditions() {
    let d32 = PcGroup::from_text(D32).unwrap();
    let vs = run_suite(&d32, "D32", Suite::All, opts()).unwrap();
    for v in &vs {
        assert!(
            v.status != Status::Fails || v.id.starts_with("rps-") || v.id.starts_with("eq-"),
            "{v:#?}"
        );
    }
    assert_eq!(find(&vs, "lem-4.1").status, Status::PreconditionFailed);
}

/// Failing verdicts replay: the witness words, parsed back, violate the
/// statement again.
#[test]
fn witnesses_replay() {
    let d32 = PcGroup::from_text(D32).unwrap();
    let c = Checker::new(&d32, "D32", waived()).unwrap();
    let v = c.commutator_bound();
    let w = v.witness.unwrap();
    let (x, y) = (
        d32.elem(w.word("x").unwrap()),
        d32.elem(w.word("y").unwrap()),
    );
    assert_eq!(d32.elem(w.word("[x,y]").unwrap()), d32.commutator(x, y));
    assert!(d32.element_order(d32.commutator(x, y)) > d32.element_order(y));

    let v = c.weight_four();
    let w = v.witness.unwrap();
    let e = |n: &str| d32.elem(w.word(n).unwrap());
    let c4 = d32.commutator(
        d32.commutator(d32.commutator(e("x"), e("y")), e("z")),
        e("w"),
    );
    assert_ne!(c4, 0);
    assert!(["x", "y", "z"].iter().all(|n| d32.element_order(e(n)) <= 2));

    let sq = PcGroup::from_text(SQUARES_64).unwrap();
    let v = Checker::new(&sq, "sq64", waived())
        .unwrap()
        .power_products();
    let w = v.witness.unwrap();
    let prod = sq.multiply(
        sq.elem(w.word("g^p").unwrap()),
        sq.elem(w.word("h^p").unwrap()),
    );
    let z = pqp::subgroup::center(&sq);
    let powers = pqp::subgroup::power_image_set(&sq, 1);
    assert!(!powers
        .iter()
        .any(|&u| z.elements().iter().any(|&c| sq.multiply(u, c) == prod)));
}

#[test]
fn sweeps_are_independent_of_workers() {
    let g = build(&FamilySpec::paper_729()).unwrap();
    let one = run_suite(
        &g,
        "x",
        Suite::All,
        VerifyOptions {
            workers: 1,
            ..opts()
        },
    )
    .unwrap();
    let four = run_suite(
        &g,
        "x",
        Suite::All,
        VerifyOptions {
            workers: 4,
            ..opts()
        },
    )
    .unwrap();
    assert_eq!(one, four);
    let d32 = PcGroup::from_text(D32).unwrap();
    let a = Checker::new(
        &d32,
        "",
        VerifyOptions {
            workers: 1,
            ..waived()
        },
    )
    .unwrap()
    .commutator_bound();
    let b = Checker::new(
        &d32,
        "",
        VerifyOptions {
            workers: 3,
            ..waived()
        },
    )
    .unwrap()
    .commutator_bound();
    assert_eq!(a, b);
}

#[test]
fn power_center_subgroup_of_6561_is_strongly_powerful() {
    let g = build(&FamilySpec::paper_6561()).unwrap();
    let c = Checker::new(&g, "paper_6561", opts()).unwrap();
    assert!(c.h_strongly_powerful().unwrap().holds());
    assert!(c.h_powerfully_embedded().unwrap().holds());
    let h = pqp::predicates::power_center_subgroup(&g).unwrap();
    assert!(center(&g).is_subset_of(&h) && agemo(&g, 1).unwrap().is_subset_of(&h));
    let view = SubgroupView::new(&g, &h);
    assert!(pqp::predicates::is_powerful(&view).unwrap().holds);
}
