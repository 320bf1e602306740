//! Executable checks of the theorem statements about quasi-powerful groups.
//!
//! Each check returns a [`TheoremVerdict`]. A verdict whose hypothesis does
//! not hold on the input is reported as [`Status::PreconditionFailed`] and
//! never as holding, unless hypotheses are explicitly waived for a negative
//! control.

pub mod witt;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::predicates::{
    is_potent, is_powerful, is_powerfully_embedded, is_quasi_powerful, is_strongly_powerful,
    power_center_subgroup, regular_power_structure, PowerStructure, PredicateError,
};
use crate::quotient::QuotientGroup;
use crate::subgroup::{
    agemo, center, closure, commutator_subgroup, derived, enumerate_subgroups,
    lower_central_series, min_generators, nilpotency_class, omega, power_image_set,
    sample_subgroups, EnumerationBudget, Subgroup, SubgroupError, SubgroupView,
};
use crate::sweep::{default_workers, find_first, sample_pairs, sweep_pairs, PairPlan};
use crate::view::{log_p, Elem, GroupView, PowerTables};
use crate::witness::Witness;

pub use witt::{lyndon_count_brute, witt_count};

pub const THEOREM_IDS: [&str; 18] = [
    "thm-1.1-i",
    "thm-1.1-ii",
    "thm-1.1-iii",
    "rps-1",
    "rps-2",
    "rps-3",
    "thm-1.2",
    "thm-1.3",
    "thm-1.4",
    "thm-1.5",
    "thm-1.6",
    "lem-3.4",
    "prop-3.5",
    "lem-4.1",
    "lem-4.2",
    "eq-4",
    "eq-5",
    "lem-2.4",
];

/// Largest sample for the detailed commutator bound above the exhaustive
/// threshold.
pub const DETAILED_SAMPLE_CAP: u64 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Holds,
    Fails,
    PreconditionFailed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremVerdict {
    pub id: String,
    pub group: String,
    pub status: Status,
    /// `None` when the hypothesis fails.
    pub holds: Option<bool>,
    pub precondition: String,
    pub swept: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl TheoremVerdict {
    fn new(id: &str, group: &str, precondition: impl Into<String>) -> Self {
        Self {
            id: id.to_string(),
            group: group.to_string(),
            status: Status::Holds,
            holds: Some(true),
            precondition: precondition.into(),
            swept: String::new(),
            witness: None,
            notes: Vec::new(),
        }
    }

    fn swept(mut self, s: impl Into<String>) -> Self {
        self.swept = s.into();
        self
    }

    fn fail(mut self, w: Witness) -> Self {
        self.status = Status::Fails;
        self.holds = Some(false);
        self.witness = Some(w);
        self
    }

    fn outcome(self, w: Option<Witness>) -> Self {
        match w {
            Some(w) => self.fail(w),
            None => self,
        }
    }

    fn unmet(mut self, why: impl Into<String>) -> Self {
        self.status = Status::PreconditionFailed;
        self.holds = None;
        self.precondition = why.into();
        self
    }

    fn note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }

    pub fn holds(&self) -> bool {
        self.status == Status::Holds
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fails
    }
}

#[derive(Debug, Error)]
pub enum TheoremError {
    #[error(transparent)]
    Predicate(#[from] PredicateError),
    #[error(transparent)]
    Subgroup(#[from] SubgroupError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubgroupMode {
    /// Exhaustive up to order 729, otherwise 500 samples of 3 generators.
    Auto,
    Exhaustive,
    Sample {
        count: usize,
        gens: usize,
        seed: u64,
    },
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    pub workers: usize,
    /// Pair sweeps are exhaustive when `|G|^2` is at most this, else sampled.
    pub max_pairs: u64,
    /// Forces the basic commutator bound to sweep every pair.
    pub exhaustive_pairs: bool,
    /// Pairs per level for the collection identities.
    pub identity_trials: usize,
    pub subgroups: SubgroupMode,
    /// Pairs tried first in sampled sweeps.
    pub priority_pairs: Vec<(Elem, Elem)>,
    /// Runs conditional checks even when their hypothesis fails, for
    /// negative controls. Such verdicts say so in their precondition.
    pub waive_hypotheses: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            workers: default_workers(),
            max_pairs: 729 * 729,
            exhaustive_pairs: false,
            identity_trials: 100,
            subgroups: SubgroupMode::Auto,
            priority_pairs: Vec::new(),
            waive_hypotheses: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    /// Everything, with the basic commutator bound swept exhaustively.
    Paper,
    /// Power-structure verdicts only.
    Rps,
    All,
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" => Ok(Suite::Paper),
            "rps" => Ok(Suite::Rps),
            "all" => Ok(Suite::All),
            _ => Err(format!("unknown suite {s:?} (expected paper, rps or all)")),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Paper => "paper",
            Suite::Rps => "rps",
            Suite::All => "all",
        })
    }
}

const QUASI: &str = "p odd and G/Z(G) powerful";
const POTENT: &str = "p odd and G potent";

/// Shared state for the verifiers on one group.
pub struct Checker<'g, G: GroupView + ?Sized> {
    g: &'g G,
    label: String,
    opts: VerifyOptions,
    tables: PowerTables,
    e: u32,
    quasi: Option<bool>,
    potent: bool,
    powerful: bool,
}

impl<'g, G: GroupView + ?Sized> Checker<'g, G> {
    pub fn new(g: &'g G, label: &str, opts: VerifyOptions) -> Result<Self, TheoremError> {
        let tables = PowerTables::new(g);
        let e = log_p(tables.exponent(), g.prime());
        let quasi = match is_quasi_powerful(g) {
            Ok(v) => Some(v.holds),
            Err(PredicateError::QuasiPowerfulAtTwo) => None,
            Err(err) => return Err(err.into()),
        };
        Ok(Self {
            g,
            label: label.to_string(),
            opts,
            tables,
            e,
            quasi,
            potent: is_potent(g)?.holds,
            powerful: is_powerful(g)?.holds,
        })
    }

    pub fn is_quasi_powerful(&self) -> Option<bool> {
        self.quasi
    }

    fn verdict(&self, id: &str, precondition: &str) -> TheoremVerdict {
        let waived = self.opts.waive_hypotheses
            && match precondition {
                QUASI => self.quasi != Some(true),
                POTENT => self.g.prime() == 2 || !self.potent,
                _ => false,
            };
        if waived {
            TheoremVerdict::new(
                id,
                &self.label,
                format!("{precondition} (not satisfied; checked with hypotheses waived)"),
            )
        } else {
            TheoremVerdict::new(id, &self.label, precondition)
        }
    }

    /// A verdict already marked as failing its hypothesis, if `G` is not
    /// quasi-powerful with `p` odd.
    fn quasi_gate(&self, id: &str) -> Option<TheoremVerdict> {
        if self.opts.waive_hypotheses {
            return None;
        }
        let v = self.verdict(id, QUASI);
        match self.quasi {
            None => Some(v.unmet(format!("{QUASI}: not defined at p = 2"))),
            Some(false) => Some(v.unmet(format!("{QUASI}: G/Z(G) is not powerful"))),
            Some(true) => None,
        }
    }

    fn pow_p(&self, i: u32) -> u64 {
        (self.g.prime() as u64).pow(i)
    }

    fn pair_plan(&self, exhaustive: bool, cap: u64) -> PairPlan {
        let n = self.g.order() as u64;
        if exhaustive || n * n <= self.opts.max_pairs {
            PairPlan::Exhaustive
        } else {
            PairPlan::Sampled {
                count: self.opts.max_pairs.min(cap) as usize,
                seed: self.opts.seed,
            }
        }
    }

    fn priority_pairs(&self) -> Vec<(Elem, Elem)> {
        let mut out = self.opts.priority_pairs.clone();
        let gens = self.g.generators();
        for &x in &gens {
            for &y in &gens {
                out.push((x, y));
            }
        }
        out
    }

    /// The three conditions as unconditional verdicts, plus the conditional
    /// verdicts for parts (i), (ii), (iii).
    pub fn power_structure(&self) -> Result<Vec<TheoremVerdict>, TheoremError> {
        let ps = regular_power_structure(self.g)?;
        let mut out = self.rps_conditional(&ps);
        out.extend(self.rps_unconditional(&ps));
        Ok(out)
    }

    fn rps_unconditional(&self, ps: &PowerStructure) -> Vec<TheoremVerdict> {
        let swept = format!("i = 1..{}", ps.exponent_log);
        (1u8..=3)
            .map(|k| {
                let v = self
                    .verdict(&format!("rps-{k}"), "none")
                    .swept(swept.clone());
                let w = ps.first_failure(k).map(|l| {
                    let c = match k {
                        1 => &l.condition_1,
                        2 => &l.condition_2,
                        _ => &l.condition_3,
                    };
                    c.witness.clone().expect("failing condition has a witness")
                });
                let mut v = v.outcome(w);
                for l in &ps.levels {
                    v = v.note(match k {
                        1 => format!(
                            "i={}: {} powers, |G^(p^i)| = {}",
                            l.i, l.power_set_size, l.agemo_order
                        ),
                        2 => format!(
                            "i={}: exp Omega_i = {}, |Omega_i| = {}, {} elements of order <= p^i",
                            l.i, l.omega_exponent, l.omega_order, l.order_bounded_count
                        ),
                        _ => format!(
                            "i={}: |G : G^(p^i)| = {}, |Omega_i| = {}",
                            l.i, l.agemo_index, l.omega_order
                        ),
                    });
                }
                v
            })
            .collect()
    }

    fn rps_conditional(&self, ps: &PowerStructure) -> Vec<TheoremVerdict> {
        let ids = ["thm-1.1-i", "thm-1.1-ii", "thm-1.1-iii"];
        if let Some(v) = self.quasi_gate(ids[0]) {
            return ids
                .iter()
                .map(|id| TheoremVerdict {
                    id: id.to_string(),
                    ..v.clone()
                })
                .collect();
        }
        let swept = format!("i = 1..{}", ps.exponent_log);
        let part_i = self.product_orders(ps);
        let part_ii = self
            .verdict(ids[1], QUASI)
            .swept(format!("{swept}; set of p^i-th powers against G^(p^i)"))
            .outcome(
                ps.first_failure(1)
                    .and_then(|l| l.condition_1.witness.clone()),
            );
        let part_iii = self
            .verdict(ids[2], QUASI)
            .swept(format!("{swept}; |G : G^(p^i)| against |Omega_i(G)|"))
            .outcome(
                ps.first_failure(3)
                    .and_then(|l| l.condition_3.witness.clone()),
            );
        vec![part_i, part_ii, part_iii]
    }

    /// Products of two elements of order at most `p^i` have order at most
    /// `p^i`, swept over all such pairs, cross-checked against
    /// `exp Omega_i <= p^i`.
    fn product_orders(&self, ps: &PowerStructure) -> TheoremVerdict {
        let g = self.g;
        let t = &self.tables;
        let mut total = 0u64;
        let mut found = None;
        for i in 1..ps.exponent_log {
            let bound = self.pow_p(i);
            let small: Vec<Elem> = g
                .elements()
                .filter(|&x| t.order[x as usize] <= bound)
                .collect();
            let n = small.len() as u64;
            let hit = find_first(
                n * n,
                self.opts.workers,
                || (),
                |_, k| {
                    let (a, b) = (small[(k / n) as usize], small[(k % n) as usize]);
                    let ab = g.multiply(a, b);
                    (t.order[ab as usize] > bound).then_some((a, b, ab))
                },
            );
            total += match hit {
                Some((k, _)) => k + 1,
                None => n * n,
            };
            if let Some((_, (a, b, ab))) = hit {
                found = Some(
                    Witness::new("a and b have order at most p^i but ab does not")
                        .with(g, "a", a)
                        .with(g, "b", b)
                        .with(g, "ab", ab)
                        .param("i", i as i64)
                        .param("order_ab", t.order[ab as usize] as i64),
                );
                break;
            }
        }
        let exp_form = ps.condition_holds(2);
        let v = self.verdict("thm-1.1-i", QUASI).swept(format!(
            "i = 1..{} exhaustive over {total} pairs of elements of order <= p^i; i = {} is immediate",
            ps.exponent_log.saturating_sub(1),
            ps.exponent_log
        ));
        match (found, exp_form) {
            (Some(w), _) => v.fail(w),
            (None, true) => v.note("exp Omega_i <= p^i agrees"),
            (None, false) => {
                let w = ps
                    .first_failure(2)
                    .and_then(|l| l.condition_2.witness.clone())
                    .expect("witness");
                v.fail(w)
                    .note("pair formulation passed but exp Omega_i <= p^i failed")
            }
        }
    }

    /// `G^{p^i}` is powerful for every `i >= 1`.
    pub fn agemo_powerful(&self) -> Result<TheoremVerdict, TheoremError> {
        if let Some(v) = self.quasi_gate("thm-1.2") {
            return Ok(v);
        }
        let g = self.g;
        let mut v = self.verdict("thm-1.2", QUASI);
        let mut i = 1;
        loop {
            let a = agemo(g, i)?;
            if a.is_trivial() {
                break;
            }
            let view = SubgroupView::new(g, &a);
            let pw = is_powerful(&view)?;
            let pe = is_powerfully_embedded(g, &a)?;
            v = v.note(match &pe.witness {
                None => format!("G^(p^{i}) is powerfully embedded in G"),
                Some(w) => format!(
                    "G^(p^{i}) is not powerfully embedded in G: [{}, {}] = {}",
                    w.word("x").unwrap_or("?"),
                    w.word("g").unwrap_or("?"),
                    w.word("[x,g]").unwrap_or("?")
                ),
            });
            if let Some(w) = pw.witness {
                v = v.fail(w.param("i", i as i64));
                break;
            }
            i += 1;
        }
        Ok(v.swept(format!("i = 1..{} until G^(p^i) = 1", i - 1)))
    }

    /// `o([x,y]) <= o(y)`.
    pub fn commutator_bound(&self) -> TheoremVerdict {
        if let Some(v) = self.quasi_gate("thm-1.3") {
            return v;
        }
        let g = self.g;
        let t = &self.tables;
        let plan = self.pair_plan(self.opts.exhaustive_pairs, u64::MAX);
        let priority = if plan == PairPlan::Exhaustive {
            Vec::new()
        } else {
            self.priority_pairs()
        };
        let (n, hit) = sweep_pairs(
            g.order(),
            &priority,
            plan,
            self.opts.workers,
            || (),
            |_, x, y| {
                let c = g.commutator(x, y);
                (t.order[c as usize] > t.order[y as usize]).then_some(c)
            },
        );
        let v = self
            .verdict("thm-1.3", QUASI)
            .swept(format!("{}; {n} pairs examined", plan.describe(g.order())));
        v.outcome(hit.map(|((x, y), c)| {
            Witness::new("o([x,y]) > o(y)")
                .with(g, "x", x)
                .with(g, "y", y)
                .with(g, "[x,y]", c)
                .param("order_commutator", t.order[c as usize] as i64)
                .param("order_y", t.order[y as usize] as i64)
        }))
    }

    /// `o([x^{p^j}, y^{p^k}]) <= p^{i-j-k}` with the tightest admissible `i`;
    /// a negative exponent means the commutator must be trivial.
    fn detailed_bound(&self, id: &str, precondition: &str) -> TheoremVerdict {
        let g = self.g;
        let t = &self.tables;
        let e = self.e;
        let plan = self.pair_plan(false, DETAILED_SAMPLE_CAP);
        let priority = if plan == PairPlan::Exhaustive {
            Vec::new()
        } else {
            self.priority_pairs()
        };
        let (n, hit) = sweep_pairs(
            g.order(),
            &priority,
            plan,
            self.opts.workers,
            || (),
            |_, x, y| {
                let lx = log_p(t.order[x as usize], g.prime()) as i64;
                let ly = log_p(t.order[y as usize], g.prime()) as i64;
                let i = (lx - 1).max(ly);
                let mut xj = x;
                for j in 0..=e {
                    let mut yk = y;
                    for k in 0..=e {
                        let c = g.commutator(xj, yk);
                        let allowed = i - j as i64 - k as i64;
                        if !t.order_at_most(c, allowed) {
                            return Some((j, k, i, c));
                        }
                        yk = t.pth_power[yk as usize];
                    }
                    xj = t.pth_power[xj as usize];
                }
                None
            },
        );
        let v = self.verdict(id, precondition).swept(format!(
            "{}; j, k = 0..{e}; i = max(log o(x) - 1, log o(y)); {n} pairs examined",
            plan.describe(g.order())
        ));
        v.outcome(hit.map(|((x, y), (j, k, i, c))| {
            Witness::new("o([x^(p^j), y^(p^k)]) exceeds p^(i-j-k)")
                .with(g, "x", x)
                .with(g, "y", y)
                .with(g, "commutator", c)
                .param("i", i)
                .param("j", j as i64)
                .param("k", k as i64)
                .param("order_commutator", t.order[c as usize] as i64)
        }))
    }

    pub fn detailed_commutator_bound(&self) -> TheoremVerdict {
        match self.quasi_gate("thm-1.4") {
            Some(v) => v,
            None => self.detailed_bound("thm-1.4", QUASI),
        }
    }

    /// The same bound for potent groups with `p` odd.
    pub fn potent_commutator_bound(&self) -> TheoremVerdict {
        let pre = POTENT;
        if self.opts.waive_hypotheses {
            return self.detailed_bound("thm-1.5", pre);
        }
        if self.g.prime() == 2 {
            return self.verdict("thm-1.5", pre).unmet(format!("{pre}: p = 2"));
        }
        if !self.potent {
            return self
                .verdict("thm-1.5", pre)
                .unmet(format!("{pre}: G is not potent"));
        }
        self.detailed_bound("thm-1.5", pre)
    }

    /// `d(H) <= r(r+3)/2` for every enumerated or sampled subgroup.
    pub fn subgroup_rank_bound(&self) -> Result<TheoremVerdict, TheoremError> {
        if let Some(v) = self.quasi_gate("thm-1.6") {
            return Ok(v);
        }
        let g = self.g;
        let r = min_generators(g)? as u64;
        let bound = r * (r + 3) / 2;
        let mode = match self.opts.subgroups {
            SubgroupMode::Auto if g.order() <= 729 => SubgroupMode::Exhaustive,
            SubgroupMode::Auto => SubgroupMode::Sample {
                count: 500,
                gens: 3,
                seed: self.opts.seed,
            },
            m => m,
        };
        let mut max_d = 0u64;
        let mut count = 0usize;
        let mut failure = None;
        let mut check = |h: &Subgroup| -> Result<bool, TheoremError> {
            count += 1;
            let view = SubgroupView::new(g, h);
            let d = min_generators(&view)? as u64;
            max_d = max_d.max(d);
            if d > bound && failure.is_none() {
                let mut w = Witness::new("d(H) exceeds r(r+3)/2")
                    .param("d_H", d as i64)
                    .param("r", r as i64);
                for (k, &x) in h.generators().iter().enumerate() {
                    w = w.with(g, &format!("h{}", k + 1), x);
                }
                failure = Some(w);
                return Ok(false);
            }
            Ok(true)
        };
        let (swept, note) = match mode {
            SubgroupMode::Exhaustive => {
                let budget = EnumerationBudget {
                    max_group_order: g.order().max(729),
                    ..EnumerationBudget::default()
                };
                for h in enumerate_subgroups(g, budget) {
                    if !check(&h?)? {
                        break;
                    }
                }
                ("exhaustive subgroup enumeration".to_string(), None)
            }
            SubgroupMode::Sample {
                count: n,
                gens,
                seed,
            } => {
                for h in sample_subgroups(g, n, gens, seed)? {
                    if !check(&h)? {
                        break;
                    }
                }
                (
                    format!("sampled {n} subgroups on {gens} random generators (seed {seed})"),
                    (g.order() <= 729)
                        .then_some("sampled although exhaustive enumeration is in budget"),
                )
            }
            SubgroupMode::Auto => unreachable!(),
        };
        let mut v = self
            .verdict("thm-1.6", QUASI)
            .swept(format!("{swept}; {count} subgroups checked"))
            .note(format!(
                "r = {r}, bound = {bound}, max d(H) observed = {max_d}"
            ))
            .note(format!("product of at most {} cyclic subgroups", r + bound));
        if let Some(n) = note {
            v = v.note(n);
        }
        Ok(v.outcome(failure))
    }

    /// `g^p h^p = j^p z` with `z` central.
    pub fn power_products(&self) -> TheoremVerdict {
        if let Some(v) = self.quasi_gate("lem-3.4") {
            return v;
        }
        let g = self.g;
        let powers = power_image_set(g, 1);
        let z = center(g);
        let mut pz = vec![false; g.order()];
        for &u in &powers {
            for &c in z.elements() {
                pz[g.multiply(u, c) as usize] = true;
            }
        }
        let n = powers.len() as u64;
        let hit = find_first(
            n * n,
            self.opts.workers,
            || (),
            |_, k| {
                let (s, t) = (powers[(k / n) as usize], powers[(k % n) as usize]);
                let st = g.multiply(s, t);
                (!pz[st as usize]).then_some((s, t, st))
            },
        );
        self.verdict("lem-3.4", QUASI)
            .swept(format!("all {} pairs of p-th powers", n * n))
            .outcome(hit.map(|(_, (s, t, st))| {
                Witness::new("g^p h^p is not a p-th power times a central element")
                    .with(g, "g^p", s)
                    .with(g, "h^p", t)
                    .with(g, "product", st)
            }))
    }

    /// `H = G^p Z(G)` is powerfully embedded.
    pub fn h_powerfully_embedded(&self) -> Result<TheoremVerdict, TheoremError> {
        if let Some(v) = self.quasi_gate("prop-3.5") {
            return Ok(v);
        }
        let h = power_center_subgroup(self.g)?;
        self.powerfully_embedded_check(&h, "H = G^p Z(G)")
    }

    /// The powerful-embedding test behind the check above, applied to any
    /// normal subgroup `n`.
    pub fn powerfully_embedded_check(
        &self,
        n: &Subgroup,
        name: &str,
    ) -> Result<TheoremVerdict, TheoremError> {
        let pe = is_powerfully_embedded(self.g, n)?;
        Ok(self
            .verdict("prop-3.5", QUASI)
            .swept(format!("{name} of order {}; {}", n.order(), pe.detail))
            .outcome(pe.witness))
    }

    /// `H = G^p Z(G)` is strongly powerful.
    pub fn h_strongly_powerful(&self) -> Result<TheoremVerdict, TheoremError> {
        if let Some(v) = self.quasi_gate("prop-8.1") {
            return Ok(v);
        }
        let h = power_center_subgroup(self.g)?;
        self.strongly_powerful_check(&h, "H = G^p Z(G)")
    }

    /// The strong-powerfulness test behind the check above, applied to any
    /// subgroup `h`.
    pub fn strongly_powerful_check(
        &self,
        h: &Subgroup,
        name: &str,
    ) -> Result<TheoremVerdict, TheoremError> {
        let view = SubgroupView::new(self.g, h);
        let sp = is_strongly_powerful(&view)?;
        Ok(self
            .verdict("prop-8.1", QUASI)
            .swept(format!("{name} of order {}; {}", h.order(), sp.detail))
            .outcome(sp.witness))
    }

    /// `[x,y,z,w] = 1` for `x, y, z` of order at most `p`.
    pub fn weight_four(&self) -> TheoremVerdict {
        if let Some(v) = self.quasi_gate("lem-4.1") {
            return v;
        }
        let g = self.g;
        let t = &self.tables;
        let p = g.prime() as u64;
        let small: Vec<Elem> = g.elements().filter(|&x| t.order[x as usize] <= p).collect();
        let mut seen = vec![false; g.order()];
        let mut weight2: Vec<(Elem, Elem, Elem)> = Vec::new();
        for &x in &small {
            for &y in &small {
                let c = g.commutator(x, y);
                if !seen[c as usize] {
                    seen[c as usize] = true;
                    weight2.push((x, y, c));
                }
            }
        }
        let gens = g.generators();
        let mut seen3 = vec![false; g.order()];
        let mut failure = None;
        'outer: for &(x, y, c) in &weight2 {
            for &z in &small {
                let c3 = g.commutator(c, z);
                if seen3[c3 as usize] {
                    continue;
                }
                seen3[c3 as usize] = true;
                for &w in &gens {
                    let c4 = g.commutator(c3, w);
                    if c4 != 0 {
                        failure = Some(
                            Witness::new("[x,y,z,w] is not trivial")
                                .with(g, "x", x)
                                .with(g, "y", y)
                                .with(g, "z", z)
                                .with(g, "w", w)
                                .with(g, "[x,y,z,w]", c4),
                        );
                        break 'outer;
                    }
                }
            }
        }
        self.verdict("lem-4.1", QUASI)
            .swept(format!(
                "{} elements of order <= p; {} distinct [x,y]; {} distinct [x,y,z] tested against all generators",
                small.len(),
                weight2.len(),
                seen3.iter().filter(|&&b| b).count()
            ))
            .outcome(failure)
    }

    /// `Omega_1(G)` has class at most 3.
    pub fn omega_class(&self) -> Result<TheoremVerdict, TheoremError> {
        if let Some(v) = self.quasi_gate("lem-4.2") {
            return Ok(v);
        }
        let om = omega(self.g, 1)?;
        let view = SubgroupView::new(self.g, &om);
        let class = nilpotency_class(&view)?;
        let v = self
            .verdict("lem-4.2", QUASI)
            .swept(format!(
                "lower central series of Omega_1(G), |Omega_1(G)| = {}",
                om.order()
            ))
            .note(format!("class of Omega_1(G) = {class}"));
        Ok(if class > 3 {
            let series = lower_central_series(&view)?;
            let c = view.lift(series[3].elements()[1]);
            v.fail(
                Witness::new("gamma_4(Omega_1(G)) is not trivial")
                    .with(self.g, "c", c)
                    .param("class", class as i64),
            )
        } else {
            v
        })
    }

    /// `[M^{p^i}, N^{p^j}] = [M,N]^{p^{i+j}}` with `M = N = G`, or with
    /// `M = N = G/Z(G)` when only the quotient is powerful.
    pub fn interchanging(&self) -> Result<TheoremVerdict, TheoremError> {
        let pre = "G powerful (or G/Z(G) powerful with p odd, applied to G/Z(G))";
        if self.powerful {
            return Ok(interchange_on(self.g, self.verdict("lem-2.4", pre), "G"));
        }
        if self.quasi == Some(true) {
            let z = center(self.g);
            let q = QuotientGroup::new(self.g, &z)?;
            return Ok(interchange_on(&q, self.verdict("lem-2.4", pre), "G/Z(G)"));
        }
        let v = self.verdict("lem-2.4", pre);
        if self.opts.waive_hypotheses {
            let v = TheoremVerdict {
                precondition: format!("{pre} (not satisfied; checked on G with hypotheses waived)"),
                ..v
            };
            return Ok(interchange_on(self.g, v, "G"));
        }
        Ok(v.unmet(format!("{pre}: neither G nor G/Z(G) qualifies")))
    }

    /// Hall's collection formulas for `(xy)^{p^l}` and `[x,y]^{p^l}`.
    pub fn collection_identities(&self) -> Result<[TheoremVerdict; 2], TheoremError> {
        let g = self.g;
        let t = &self.tables;
        let p = g.prime();
        let pairs = sample_pairs(g.order(), self.opts.identity_trials, self.opts.seed);
        let mut fail4 = None;
        let mut fail5 = None;
        for &(x, y) in &pairs {
            let tsub = closure(g, &[x, y])?;
            let xy = g.commutator(x, y);
            let msub = closure(g, &[x, xy])?;
            for l in 1..=self.e {
                let pl = (p as i64).pow(l);
                if fail4.is_none() {
                    let lhs = t.power_p(g.multiply(x, y), l);
                    let rhs = g.multiply(t.power_p(x, l), t.power_p(y, l));
                    let defect = g.multiply(lhs, g.inverse(rhs));
                    if defect != 0 && !hall_subgroup(g, &tsub, l)?.contains(defect) {
                        fail4 = Some(
                            Witness::new("(xy)^(p^l) (x^(p^l) y^(p^l))^-1 is outside the Hall subgroup of <x,y>")
                                .with(g, "x", x)
                                .with(g, "y", y)
                                .with(g, "defect", defect)
                                .param("l", l as i64),
                        );
                    }
                }
                if fail5.is_none() {
                    let lhs = g.power(xy, pl);
                    let rhs = g.commutator(t.power_p(x, l), y);
                    let defect = g.multiply(lhs, g.inverse(rhs));
                    if defect != 0 && !hall_subgroup(g, &msub, l)?.contains(defect) {
                        fail5 = Some(
                            Witness::new("[x,y]^(p^l) [x^(p^l),y]^-1 is outside the Hall subgroup of <x,[x,y]>")
                                .with(g, "x", x)
                                .with(g, "y", y)
                                .with(g, "defect", defect)
                                .param("l", l as i64),
                        );
                    }
                }
            }
        }
        let swept = format!(
            "{} seeded pairs (seed {}) at each level l = 1..{}",
            pairs.len(),
            self.opts.seed,
            self.e
        );
        Ok([
            self.verdict("eq-4", "none")
                .swept(swept.clone())
                .outcome(fail4),
            self.verdict("eq-5", "none").swept(swept).outcome(fail5),
        ])
    }

    /// Every verifier in the suite, in the order of [`THEOREM_IDS`].
    pub fn run(
        &self,
        suite: Suite,
    ) -> Result<Vec<(TheoremVerdict, std::time::Duration)>, TheoremError> {
        let mut out = Vec::new();
        let timed = |f: &mut dyn FnMut() -> Result<Vec<TheoremVerdict>, TheoremError>,
                     out: &mut Vec<(TheoremVerdict, std::time::Duration)>|
         -> Result<(), TheoremError> {
            let start = std::time::Instant::now();
            let vs = f()?;
            let dt = start.elapsed() / vs.len().max(1) as u32;
            out.extend(vs.into_iter().map(|v| (v, dt)));
            Ok(())
        };
        timed(&mut || self.power_structure(), &mut out)?;
        if suite == Suite::Rps {
            return Ok(out);
        }
        timed(&mut || Ok(vec![self.agemo_powerful()?]), &mut out)?;
        timed(&mut || Ok(vec![self.commutator_bound()]), &mut out)?;
        timed(&mut || Ok(vec![self.detailed_commutator_bound()]), &mut out)?;
        timed(&mut || Ok(vec![self.potent_commutator_bound()]), &mut out)?;
        timed(&mut || Ok(vec![self.subgroup_rank_bound()?]), &mut out)?;
        timed(&mut || Ok(vec![self.power_products()]), &mut out)?;
        timed(&mut || Ok(vec![self.h_powerfully_embedded()?]), &mut out)?;
        timed(&mut || Ok(vec![self.weight_four()]), &mut out)?;
        timed(&mut || Ok(vec![self.omega_class()?]), &mut out)?;
        timed(&mut || Ok(self.collection_identities()?.to_vec()), &mut out)?;
        timed(&mut || Ok(vec![self.interchanging()?]), &mut out)?;
        timed(&mut || Ok(vec![self.h_strongly_powerful()?]), &mut out)?;
        timed(&mut || Ok(vec![verify_witt()]), &mut out)?;
        Ok(out)
    }
}

/// The subgroup of `T` generated by `gamma_2(T)^{p^l}` and
/// `gamma_{p^k}(T)^{p^{l-k}}` for `k = 1..l`, as a subgroup of `G`.
pub fn hall_subgroup<G: GroupView + ?Sized>(
    g: &G,
    t: &Subgroup,
    l: u32,
) -> Result<Subgroup, SubgroupError> {
    let view = SubgroupView::new(g, t);
    let series = lower_central_series(&view)?;
    let p = g.prime() as u64;
    let mut gens: Vec<Elem> = Vec::new();
    let mut add = |k: u64, power: u32| -> Result<(), SubgroupError> {
        let idx = (k - 1) as usize;
        if idx >= series.len() || series[idx].is_trivial() {
            return Ok(());
        }
        let inner = SubgroupView::new(&view, &series[idx]);
        let a = inner.lift_subgroup(&agemo(&inner, power)?);
        gens.extend(a.generators().iter().map(|&x| view.lift(x)));
        Ok(())
    };
    add(2, l)?;
    for k in 1..=l {
        add(p.pow(k), l - k)?;
    }
    closure(g, &gens)
}

fn interchange_on<Q: GroupView + ?Sized>(q: &Q, v: TheoremVerdict, on: &str) -> TheoremVerdict {
    let run = || -> Result<Option<Witness>, SubgroupError> {
        let d = derived(q)?;
        let dview = SubgroupView::new(q, &d);
        for s in 0..=2u32 {
            let rhs = dview.lift_subgroup(&agemo(&dview, s)?);
            for i in 0..=s {
                let j = s - i;
                let lhs = commutator_subgroup(q, &agemo(q, i)?, &agemo(q, j)?)?;
                if lhs != rhs {
                    let x = lhs
                        .first_outside(&rhs)
                        .or_else(|| rhs.first_outside(&lhs))
                        .expect("distinct subgroups differ somewhere");
                    return Ok(Some(
                        Witness::new(
                            "x lies in exactly one of [M^(p^i), N^(p^j)] and [M,N]^(p^(i+j))",
                        )
                        .with(q, "x", x)
                        .param("i", i as i64)
                        .param("j", j as i64)
                        .param("lhs_order", lhs.order() as i64)
                        .param("rhs_order", rhs.order() as i64),
                    ));
                }
            }
        }
        Ok(None)
    };
    let v = v.swept(format!("M = N = {on}; i, j >= 0 with i + j <= 2"));
    match run() {
        Ok(w) => v.outcome(w),
        Err(e) => v.fail(Witness::new(format!("subgroup computation failed: {e}"))),
    }
}

/// The necklace count against a Lyndon-word oracle, and the weight-2 count.
pub fn verify_witt() -> TheoremVerdict {
    let mut v = TheoremVerdict::new("witt", "-", "none")
        .swept("r = 1..3, n = 1..4 against Lyndon words; n = 2 for r = 1..10");
    for r in 1..=3 {
        for n in 1..=4 {
            let (a, b) = (witt_count(r, n), lyndon_count_brute(r, n));
            if a != b {
                return v.fail(
                    Witness::new("formula and Lyndon count differ")
                        .param("r", r as i64)
                        .param("n", n as i64)
                        .param("formula", a as i64)
                        .param("lyndon", b as i64),
                );
            }
        }
    }
    for r in 1..=10 {
        if witt_count(r, 2) != r * (r - 1) / 2 {
            return v.fail(Witness::new("weight-2 count is not r(r-1)/2").param("r", r as i64));
        }
    }
    v.notes.push(format!(
        "witt_count(2,3) = {}, witt_count(3,4) = {}",
        witt_count(2, 3),
        witt_count(3, 4)
    ));
    v
}

/// Runs a suite on one group.
pub fn run_suite<G: GroupView + ?Sized>(
    g: &G,
    label: &str,
    suite: Suite,
    opts: VerifyOptions,
) -> Result<Vec<TheoremVerdict>, TheoremError> {
    let opts = VerifyOptions {
        exhaustive_pairs: opts.exhaustive_pairs || suite == Suite::Paper,
        ..opts
    };
    Ok(Checker::new(g, label, opts)?
        .run(suite)?
        .into_iter()
        .map(|(v, _)| v)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build, FamilySpec};

    fn quick() -> VerifyOptions {
        VerifyOptions {
            workers: 2,
            ..VerifyOptions::default()
        }
    }

    #[test]
    fn abelian_everything_holds() {
        let g = build(&FamilySpec::abelian(3, &[2, 1])).unwrap();
        let vs = run_suite(&g, "ab", Suite::All, quick()).unwrap();
        for v in &vs {
            assert!(v.holds(), "{v:#?}");
        }
        let ids: Vec<&str> = vs.iter().map(|v| v.id.as_str()).collect();
        for id in THEOREM_IDS {
            assert!(ids.contains(&id), "{id}");
        }
        assert!(ids.contains(&"prop-8.1") && ids.contains(&"witt"));
    }

    #[test]
    fn two_groups_fail_preconditions() {
        let g = build(&FamilySpec::cyclic(2, 3)).unwrap();
        let c = Checker::new(&g, "c8", quick()).unwrap();
        assert_eq!(c.commutator_bound().status, Status::PreconditionFailed);
        assert_eq!(
            c.potent_commutator_bound().status,
            Status::PreconditionFailed
        );
        assert!(c.commutator_bound().holds.is_none());
        assert_eq!(c.interchanging().unwrap().status, Status::Holds);
    }

    #[test]
    fn witt_verdict_holds() {
        assert!(verify_witt().holds());
    }

    #[test]
    fn suite_names() {
        assert_eq!("paper".parse::<Suite>().unwrap(), Suite::Paper);
        assert!("some".parse::<Suite>().is_err());
    }
}
