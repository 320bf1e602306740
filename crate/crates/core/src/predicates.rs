//! Structural properties of p-groups, each decided with a re-checkable
//! witness on failure.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::quotient::QuotientGroup;
use crate::subgroup::{
    agemo, agemo_with, center, closure, derived, exponent_of, gamma, lower_central_series,
    min_generators, omega_with, power_image_set_with, require_normal, Subgroup, SubgroupError,
    SubgroupView,
};
use crate::sweep::{default_workers, sweep_pairs, PairPlan};
use crate::view::{log_p, Elem, GroupView, PowerTables};
use crate::witness::Witness;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PredicateKind {
    Abelian,
    Powerful,
    Potent,
    Regular,
    StronglyPowerful,
    QuasiPowerful,
    CentreByPowerful,
}

impl PredicateKind {
    pub const ALL: [PredicateKind; 7] = [
        PredicateKind::Abelian,
        PredicateKind::Powerful,
        PredicateKind::Potent,
        PredicateKind::Regular,
        PredicateKind::StronglyPowerful,
        PredicateKind::QuasiPowerful,
        PredicateKind::CentreByPowerful,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PredicateKind::Abelian => "abelian",
            PredicateKind::Powerful => "powerful",
            PredicateKind::Potent => "potent",
            PredicateKind::Regular => "regular",
            PredicateKind::StronglyPowerful => "strongly_powerful",
            PredicateKind::QuasiPowerful => "quasi_powerful",
            PredicateKind::CentreByPowerful => "centre_by_powerful",
        }
    }
}

impl fmt::Display for PredicateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PredicateKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PredicateKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown predicate {s:?}"))
    }
}

#[derive(Debug, Error)]
pub enum PredicateError {
    #[error("quasi-powerful is not defined for p = 2; use centre_by_powerful for the 2-group diagnostics")]
    QuasiPowerfulAtTwo,
    #[error(transparent)]
    Subgroup(#[from] SubgroupError),
    #[error("internal cross-check failed: {0}")]
    CrossCheck(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub detail: String,
}

impl Verdict {
    fn pass(detail: impl Into<String>) -> Self {
        Self {
            holds: true,
            witness: None,
            detail: detail.into(),
        }
    }

    fn fail(witness: Witness, detail: impl Into<String>) -> Self {
        Self {
            holds: false,
            witness: Some(witness),
            detail: detail.into(),
        }
    }
}

/// Sweep settings for the regularity test.
#[derive(Clone, Debug)]
pub struct PredicateOptions {
    /// Groups up to this order get a full pair sweep.
    pub exhaustive_order: usize,
    /// Sample size above that order.
    pub sample_pairs: usize,
    pub seed: u64,
    pub workers: usize,
    /// Pairs tried before anything else.
    pub priority_pairs: Vec<(Elem, Elem)>,
}

impl Default for PredicateOptions {
    fn default() -> Self {
        Self {
            exhaustive_order: 729,
            sample_pairs: 10_000,
            seed: 0,
            workers: default_workers(),
            priority_pairs: Vec::new(),
        }
    }
}

/// The power exponent `k` in the "powerful" family of conditions: `G^p` for odd
/// `p` and `G^4` for `p = 2`.
pub fn powerful_level(p: u32) -> u32 {
    if p == 2 {
        2
    } else {
        1
    }
}

/// First pair of listed elements whose commutator leaves `target`.
fn commutator_escape<G: GroupView + ?Sized>(
    g: &G,
    left: &[Elem],
    right: &[Elem],
    target: &Subgroup,
) -> Option<(Elem, Elem, Elem)> {
    for &x in left {
        for &y in right {
            let c = g.commutator(x, y);
            if !target.contains(c) {
                return Some((x, y, c));
            }
        }
    }
    None
}

/// `[G,G] <= G^{p^k}`, witnessed by a generator pair.
fn derived_in_agemo<G: GroupView + ?Sized>(
    g: &G,
    k: u32,
    label: &str,
) -> Result<Verdict, PredicateError> {
    let d = derived(g)?;
    let a = agemo(g, k)?;
    let gens = g.generators();
    let detail = format!("|G'| = {}, |{label}| = {}", d.order(), a.order());
    match commutator_escape(g, &gens, &gens, &a) {
        None => {
            if !d.is_subset_of(&a) {
                return Err(PredicateError::CrossCheck(format!(
                    "G' escapes {label} but no generator pair shows it"
                )));
            }
            Ok(Verdict::pass(detail))
        }
        Some((x, y, c)) => Ok(Verdict::fail(
            Witness::new(format!("[x,y] is not in {label}"))
                .with(g, "x", x)
                .with(g, "y", y)
                .with(g, "[x,y]", c),
            detail,
        )),
    }
}

fn agemo_label(p: u32, k: u32) -> String {
    format!("G^{}", (p as u64).pow(k))
}

pub fn is_abelian<G: GroupView + ?Sized>(g: &G) -> Verdict {
    let gens = g.generators();
    for (i, &x) in gens.iter().enumerate() {
        for &y in &gens[i + 1..] {
            let c = g.commutator(x, y);
            if c != 0 {
                return Verdict::fail(
                    Witness::new("generators do not commute")
                        .with(g, "x", x)
                        .with(g, "y", y)
                        .with(g, "[x,y]", c),
                    "generator pair check",
                );
            }
        }
    }
    Verdict::pass("generator pair check")
}

pub fn is_powerful<G: GroupView + ?Sized>(g: &G) -> Result<Verdict, PredicateError> {
    let k = powerful_level(g.prime());
    derived_in_agemo(g, k, &agemo_label(g.prime(), k))
}

pub fn is_strongly_powerful<G: GroupView + ?Sized>(g: &G) -> Result<Verdict, PredicateError> {
    derived_in_agemo(g, 2, &agemo_label(g.prime(), 2))
}

/// `gamma_{p-1}(G) <= G^p` for odd `p`, `[G,G] <= G^4` for `p = 2`.
pub fn is_potent<G: GroupView + ?Sized>(g: &G) -> Result<Verdict, PredicateError> {
    let p = g.prime();
    if p <= 3 {
        return is_powerful(g);
    }
    let gam = gamma(g, p - 1)?;
    let a = agemo(g, 1)?;
    let detail = format!(
        "|gamma_{}| = {}, |G^{p}| = {}",
        p - 1,
        gam.order(),
        a.order()
    );
    match gam.generators().iter().copied().find(|&c| !a.contains(c)) {
        None => Ok(Verdict::pass(detail)),
        Some(c) => Ok(Verdict::fail(
            Witness::new(format!("c lies in gamma_{} but not in G^{p}", p - 1)).with(g, "c", c),
            detail,
        )),
    }
}

/// `G/Z(G)` powerful, in the sense appropriate to `p`.
pub fn is_centre_by_powerful<G: GroupView + ?Sized>(g: &G) -> Result<Verdict, PredicateError> {
    let p = g.prime();
    let k = powerful_level(p);
    let z = center(g);
    let q = QuotientGroup::new(g, &z)?;
    let v = is_powerful(&q)?;
    // Same condition lifted to G: [G,G] <= G^{p^k} Z(G).
    let a = agemo(g, k)?;
    let mut gens = a.generators().to_vec();
    gens.extend_from_slice(z.generators());
    let h = closure(g, &gens)?;
    let d = derived(g)?;
    if d.is_subset_of(&h) != v.holds {
        return Err(PredicateError::CrossCheck(
            "quotient criterion and G' <= G^p Z(G) criterion disagree".into(),
        ));
    }
    let detail = format!(
        "|Z(G)| = {}, |G/Z(G)| = {}, |G^{}Z(G)| = {}; {}",
        z.order(),
        q.order(),
        (p as u64).pow(k),
        h.order(),
        v.detail
    );
    Ok(Verdict { detail, ..v })
}

pub fn is_quasi_powerful<G: GroupView + ?Sized>(g: &G) -> Result<Verdict, PredicateError> {
    if g.prime() == 2 {
        return Err(PredicateError::QuasiPowerfulAtTwo);
    }
    is_centre_by_powerful(g)
}

struct RegularScratch {
    cache: HashMap<Vec<Elem>, Subgroup>,
}

/// `(xy)^{-p} x^p y^p` lies in the subgroup generated by `p`-th powers of
/// `gamma_2(<x,y>)`, for every pair in the sweep.
pub fn is_regular<G: GroupView + ?Sized>(
    g: &G,
    opts: &PredicateOptions,
) -> Result<Verdict, PredicateError> {
    let t = PowerTables::new(g);
    let whole_bound = powers_of_derived(g)?;
    let plan = if g.order() <= opts.exhaustive_order {
        PairPlan::Exhaustive
    } else {
        PairPlan::Sampled {
            count: opts.sample_pairs,
            seed: opts.seed,
        }
    };
    let mut priority = opts.priority_pairs.clone();
    let gens = g.generators();
    for &x in &gens {
        for &y in &gens {
            priority.push((x, y));
        }
    }
    let (examined, hit) = sweep_pairs(
        g.order(),
        &priority,
        plan,
        opts.workers,
        || RegularScratch {
            cache: HashMap::new(),
        },
        |s, x, y| {
            let xy = g.multiply(x, y);
            let defect = g.multiply(
                g.inverse(t.pth_power[xy as usize]),
                g.multiply(t.pth_power[x as usize], t.pth_power[y as usize]),
            );
            if defect == 0 {
                return None;
            }
            if !whole_bound.contains(defect) {
                return Some(defect);
            }
            let tsub = closure(g, &[x, y]).expect("two-generator closure fits");
            if tsub.order() == g.order() {
                return None;
            }
            let bound = s.cache.entry(tsub.elements().to_vec()).or_insert_with(|| {
                let view = SubgroupView::new(g, &tsub);
                view.lift_subgroup(&powers_of_derived(&view).expect("subgroup of a subgroup fits"))
            });
            (!bound.contains(defect)).then_some(defect)
        },
    );
    let detail = format!(
        "{} priority pairs then {}; {examined} pairs examined",
        priority.len(),
        plan.describe(g.order())
    );
    Ok(match hit {
        None => Verdict::pass(detail),
        Some(((x, y), defect)) => Verdict::fail(
            Witness::new(
                "(xy)^-p x^p y^p is not in the subgroup generated by p-th powers of gamma_2(<x,y>)",
            )
            .with(g, "x", x)
            .with(g, "y", y)
            .with(g, "defect", defect),
            detail,
        ),
    })
}

/// `<c^p : c in [G,G]>`.
pub fn powers_of_derived<G: GroupView + ?Sized>(g: &G) -> Result<Subgroup, SubgroupError> {
    let d = derived(g)?;
    let view = SubgroupView::new(g, &d);
    Ok(view.lift_subgroup(&agemo(&view, 1)?))
}

pub fn predicate<G: GroupView + ?Sized>(
    g: &G,
    kind: PredicateKind,
    opts: &PredicateOptions,
) -> Result<Verdict, PredicateError> {
    match kind {
        PredicateKind::Abelian => Ok(is_abelian(g)),
        PredicateKind::Powerful => is_powerful(g),
        PredicateKind::Potent => is_potent(g),
        PredicateKind::Regular => is_regular(g, opts),
        PredicateKind::StronglyPowerful => is_strongly_powerful(g),
        PredicateKind::QuasiPowerful => is_quasi_powerful(g),
        PredicateKind::CentreByPowerful => is_centre_by_powerful(g),
    }
}

/// `N^{p^k}` for a subgroup, computed inside `N`.
pub fn subgroup_agemo<G: GroupView + ?Sized>(
    g: &G,
    n: &Subgroup,
    k: u32,
) -> Result<Subgroup, SubgroupError> {
    let view = SubgroupView::new(g, n);
    Ok(view.lift_subgroup(&agemo(&view, k)?))
}

/// `[N,G] <= N^p` (`N^4` when `p = 2`) for a normal subgroup `N`.
pub fn is_powerfully_embedded<G: GroupView + ?Sized>(
    g: &G,
    n: &Subgroup,
) -> Result<Verdict, PredicateError> {
    require_normal(g, n)?;
    let k = powerful_level(g.prime());
    let np = subgroup_agemo(g, n, k)?;
    let detail = format!(
        "|N| = {}, |N^{}| = {}",
        n.order(),
        (g.prime() as u64).pow(k),
        np.order()
    );
    Ok(
        match commutator_escape(g, n.generators(), &g.generators(), &np) {
            None => Verdict::pass(detail),
            Some((x, s, c)) => Verdict::fail(
                Witness::new("[x,g] lies in [N,G] but not in the power subgroup of N")
                    .with(g, "x", x)
                    .with(g, "g", s)
                    .with(g, "[x,g]", c),
                detail,
            ),
        },
    )
}

/// `H = G^p Z(G)`.
pub fn power_center_subgroup<G: GroupView + ?Sized>(g: &G) -> Result<Subgroup, SubgroupError> {
    let a = agemo(g, 1)?;
    let z = center(g);
    let mut gens = a.generators().to_vec();
    gens.extend_from_slice(z.generators());
    closure(g, &gens)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionCheck {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerLevel {
    pub i: u32,
    /// `|{x^{p^i}}|`.
    pub power_set_size: usize,
    pub agemo_order: usize,
    pub omega_order: usize,
    pub omega_exponent: u64,
    /// `|{x : o(x) <= p^i}|`.
    pub order_bounded_count: usize,
    /// `|G : G^{p^i}|`.
    pub agemo_index: usize,
    pub condition_1: ConditionCheck,
    pub condition_2: ConditionCheck,
    pub condition_3: ConditionCheck,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerStructure {
    /// `e` with `p^e = exp G`.
    pub exponent_log: u32,
    pub levels: Vec<PowerLevel>,
}

impl PowerStructure {
    /// Whether condition `k` (1, 2 or 3) holds at every level.
    pub fn condition_holds(&self, k: u8) -> bool {
        self.levels.iter().all(|l| match k {
            1 => l.condition_1.holds,
            2 => l.condition_2.holds,
            3 => l.condition_3.holds,
            _ => panic!("no condition {k}"),
        })
    }

    pub fn holds(&self) -> bool {
        (1..=3).all(|k| self.condition_holds(k))
    }

    /// First level where condition `k` fails.
    pub fn first_failure(&self, k: u8) -> Option<&PowerLevel> {
        self.levels.iter().find(|l| match k {
            1 => !l.condition_1.holds,
            2 => !l.condition_2.holds,
            _ => !l.condition_3.holds,
        })
    }
}

/// The three power-structure conditions for `i = 1..e`, compared as sets.
pub fn regular_power_structure<G: GroupView + ?Sized>(
    g: &G,
) -> Result<PowerStructure, SubgroupError> {
    let t = PowerTables::new(g);
    let p = g.prime();
    let e = log_p(t.exponent(), p);
    let mut levels = Vec::new();
    for i in 1..=e {
        let powers = power_image_set_with(&t, i);
        let ag = agemo_with(g, &t, i)?;
        let om = omega_with(g, &t, i)?;
        let bound = (p as u64).pow(i);
        let bounded_count = g
            .elements()
            .filter(|&x| t.order[x as usize] <= bound)
            .count();
        let omega_exponent = om
            .elements()
            .iter()
            .map(|&x| t.order[x as usize])
            .max()
            .unwrap_or(1);

        let condition_1 = if powers.len() == ag.order() {
            ConditionCheck {
                holds: true,
                witness: None,
            }
        } else {
            let mut is_power = vec![false; g.order()];
            for &x in &powers {
                is_power[x as usize] = true;
            }
            let x = ag
                .elements()
                .iter()
                .copied()
                .find(|&x| !is_power[x as usize])
                .expect("agemo exceeds powers");
            ConditionCheck {
                holds: false,
                witness: Some(
                    Witness::new(format!("x lies in G^{{p^{i}}} but is not a p^{i}-th power"))
                        .with(g, "x", x)
                        .param("i", i as i64)
                        .param("power_set_size", powers.len() as i64)
                        .param("agemo_order", ag.order() as i64),
                ),
            }
        };
        let condition_2 = match om
            .elements()
            .iter()
            .copied()
            .find(|&x| t.order[x as usize] > bound)
        {
            None => ConditionCheck {
                holds: true,
                witness: None,
            },
            Some(x) => ConditionCheck {
                holds: false,
                witness: Some(
                    Witness::new(format!("x lies in Omega_{i} but has order above p^{i}"))
                        .with(g, "x", x)
                        .param("i", i as i64)
                        .param("order", t.order[x as usize] as i64)
                        .param("omega_exponent", omega_exponent as i64),
                ),
            },
        };
        let index = g.order() / ag.order();
        let condition_3 = if index == om.order() {
            ConditionCheck {
                holds: true,
                witness: None,
            }
        } else {
            ConditionCheck {
                holds: false,
                witness: Some(
                    Witness::new(format!("|G : G^{{p^{i}}}| differs from |Omega_{i}|"))
                        .param("i", i as i64)
                        .param("agemo_index", index as i64)
                        .param("omega_order", om.order() as i64),
                ),
            }
        };
        levels.push(PowerLevel {
            i,
            power_set_size: powers.len(),
            agemo_order: ag.order(),
            omega_order: om.order(),
            omega_exponent,
            order_bounded_count: bounded_count,
            agemo_index: index,
            condition_1,
            condition_2,
            condition_3,
        });
    }
    Ok(PowerStructure {
        exponent_log: e,
        levels,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyEntry {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub holds: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub group: String,
    pub prime: u32,
    pub order: usize,
    pub exponent: u64,
    pub nilpotency_class: usize,
    pub min_generators: u32,
    pub frattini_rank: u32,
    pub properties: BTreeMap<String, PropertyEntry>,
}

impl PropertyReport {
    pub fn holds(&self, kind: PredicateKind) -> Option<bool> {
        self.properties.get(kind.name()).and_then(|e| e.holds)
    }
}

/// Every predicate, plus the group's basic invariants.
pub fn property_report<G: GroupView + ?Sized>(
    g: &G,
    label: &str,
    opts: &PredicateOptions,
) -> Result<PropertyReport, PredicateError> {
    let mut properties = BTreeMap::new();
    for kind in PredicateKind::ALL {
        if kind == PredicateKind::CentreByPowerful && g.prime() != 2 {
            continue;
        }
        let entry = match predicate(g, kind, opts) {
            Ok(v) => PropertyEntry {
                holds: Some(v.holds),
                witness: v.witness,
                detail: v.detail,
                error: None,
            },
            Err(PredicateError::QuasiPowerfulAtTwo) => PropertyEntry {
                holds: None,
                witness: None,
                detail: String::new(),
                error: Some(PredicateError::QuasiPowerfulAtTwo.to_string()),
            },
            Err(e) => return Err(e),
        };
        properties.insert(kind.name().to_string(), entry);
    }
    let phi = crate::subgroup::frattini(g)?;
    let phi_view = SubgroupView::new(g, &phi);
    Ok(PropertyReport {
        group: label.to_string(),
        prime: g.prime(),
        order: g.order(),
        exponent: exponent_of(g),
        nilpotency_class: lower_central_series(g)?.len() - 1,
        min_generators: min_generators(g)?,
        frattini_rank: min_generators(&phi_view)?,
        properties,
    })
}
