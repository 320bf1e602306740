//! Subgroups as explicit element sets, and the characteristic subgroups
//! built from them.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::view::{log_p, Elem, GroupView, PowerTables};
use crate::word::Word;

/// Default cap on the number of elements a closure may produce.
pub const DEFAULT_ELEMENT_BUDGET: usize = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubgroupError {
    #[error("closure exceeded the element budget of {0}")]
    ElementBudget(usize),
    #[error("subgroup is not normal: conjugating {element} by {by} leaves it")]
    NotNormal { element: String, by: String },
    #[error("subgroup enumeration stopped at the budget after {emitted} subgroups")]
    EnumerationBudget { emitted: usize },
    #[error("group of order {order} is above the enumeration limit {limit}")]
    TooLargeToEnumerate { order: usize, limit: usize },
}

/// A subgroup of some [`GroupView`], stored as its sorted element list.
#[derive(Clone, Debug)]
pub struct Subgroup {
    elements: Vec<Elem>,
    member: Vec<bool>,
    generators: Vec<Elem>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    pub fn trivial(parent_order: usize) -> Self {
        let mut member = vec![false; parent_order];
        member[0] = true;
        Self {
            elements: vec![0],
            member,
            generators: Vec::new(),
        }
    }

    /// The whole group, generated by its own generators.
    pub fn whole<G: GroupView + ?Sized>(g: &G) -> Self {
        Self {
            elements: g.elements().collect(),
            member: vec![true; g.order()],
            generators: g.generators().into_iter().filter(|&x| x != 0).collect(),
        }
    }

    /// Builds a subgroup from a set already known to be closed.
    pub fn from_closed_set(
        parent_order: usize,
        mut elements: Vec<Elem>,
        generators: Vec<Elem>,
    ) -> Self {
        elements.sort_unstable();
        elements.dedup();
        let mut member = vec![false; parent_order];
        for &x in &elements {
            member[x as usize] = true;
        }
        Self {
            elements,
            member,
            generators,
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.member.get(x as usize).copied().unwrap_or(false)
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    pub fn parent_order(&self) -> usize {
        self.member.len()
    }

    /// First element (in index order) lying outside `other`.
    pub fn first_outside(&self, other: &Subgroup) -> Option<Elem> {
        self.elements.iter().copied().find(|&x| !other.contains(x))
    }

    /// Largest element order.
    pub fn exponent<G: GroupView + ?Sized>(&self, g: &G) -> u64 {
        self.elements
            .iter()
            .map(|&x| g.element_order(x))
            .max()
            .unwrap_or(1)
    }

    /// Set intersection of two subgroups of the same parent.
    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        let elements: Vec<Elem> = self
            .elements
            .iter()
            .copied()
            .filter(|&x| other.contains(x))
            .collect();
        let gens = elements.iter().copied().filter(|&x| x != 0).collect();
        Subgroup::from_closed_set(self.parent_order(), elements, gens)
    }

    /// Adds generators, keeping the set closed.
    fn extend<G: GroupView + ?Sized>(
        &mut self,
        g: &G,
        new_gen: Elem,
        budget: usize,
    ) -> Result<(), SubgroupError> {
        if self.contains(new_gen) {
            return Ok(());
        }
        self.generators.push(new_gen);
        let gens = self.generators.clone();
        // Old elements are already closed under the old generators.
        let mut queue: Vec<Elem> = Vec::new();
        let start = self.elements.clone();
        for x in start {
            let y = g.multiply(x, new_gen);
            if !self.member[y as usize] {
                self.member[y as usize] = true;
                self.elements.push(y);
                queue.push(y);
            }
        }
        while let Some(x) = queue.pop() {
            if self.elements.len() > budget {
                return Err(SubgroupError::ElementBudget(budget));
            }
            for &s in &gens {
                let y = g.multiply(x, s);
                if !self.member[y as usize] {
                    self.member[y as usize] = true;
                    self.elements.push(y);
                    queue.push(y);
                }
            }
        }
        self.elements.sort_unstable();
        Ok(())
    }
}

/// `<gens>`, closing under right multiplication by the generators.
pub fn closure<G: GroupView + ?Sized>(g: &G, gens: &[Elem]) -> Result<Subgroup, SubgroupError> {
    closure_with_budget(g, gens, DEFAULT_ELEMENT_BUDGET)
}

pub fn closure_with_budget<G: GroupView + ?Sized>(
    g: &G,
    gens: &[Elem],
    budget: usize,
) -> Result<Subgroup, SubgroupError> {
    let mut h = Subgroup::trivial(g.order());
    for &x in gens {
        h.extend(g, x, budget)?;
    }
    Ok(h)
}

/// Closure of a candidate set, keeping only candidates that enlarge the
/// subgroup as generators.
pub fn closure_of_set<G: GroupView + ?Sized, I: IntoIterator<Item = Elem>>(
    g: &G,
    candidates: I,
) -> Result<Subgroup, SubgroupError> {
    let mut h = Subgroup::trivial(g.order());
    for x in candidates {
        h.extend(g, x, DEFAULT_ELEMENT_BUDGET)?;
    }
    Ok(h)
}

/// Smallest normal subgroup containing `gens`.
pub fn normal_closure<G: GroupView + ?Sized>(
    g: &G,
    gens: &[Elem],
) -> Result<Subgroup, SubgroupError> {
    let mut h = closure(g, gens)?;
    normalize_in_place(g, &mut h)?;
    Ok(h)
}

fn normalize_in_place<G: GroupView + ?Sized>(g: &G, h: &mut Subgroup) -> Result<(), SubgroupError> {
    let outer = g.generators();
    loop {
        let mut grew = false;
        let gens = h.generators.clone();
        for &x in &gens {
            for &s in &outer {
                let c = g.conjugate(x, s);
                if !h.contains(c) {
                    h.extend(g, c, DEFAULT_ELEMENT_BUDGET)?;
                    grew = true;
                }
            }
        }
        if !grew {
            return Ok(());
        }
    }
}

/// First `(h, s)` with `h` a generator of `n` and `s` a group generator such
/// that `h^s` leaves `n`.
pub fn normality_witness<G: GroupView + ?Sized>(g: &G, n: &Subgroup) -> Option<(Elem, Elem)> {
    let outer = g.generators();
    for &x in n.generators() {
        for &s in &outer {
            if !n.contains(g.conjugate(x, s)) {
                return Some((x, s));
            }
        }
    }
    None
}

pub fn is_normal<G: GroupView + ?Sized>(g: &G, n: &Subgroup) -> bool {
    normality_witness(g, n).is_none()
}

pub fn require_normal<G: GroupView + ?Sized>(g: &G, n: &Subgroup) -> Result<(), SubgroupError> {
    match normality_witness(g, n) {
        None => Ok(()),
        Some((x, s)) => Err(SubgroupError::NotNormal {
            element: g.describe(x),
            by: g.describe(s),
        }),
    }
}

/// `[A, B]` for subgroups normalised by `G`: the normal closure of the
/// commutators of their generators.
pub fn commutator_subgroup<G: GroupView + ?Sized>(
    g: &G,
    a: &Subgroup,
    b: &Subgroup,
) -> Result<Subgroup, SubgroupError> {
    let mut comms = Vec::new();
    for &x in a.generators() {
        for &y in b.generators() {
            let c = g.commutator(x, y);
            if c != 0 {
                comms.push(c);
            }
        }
    }
    normal_closure(g, &comms)
}

/// `[G, G]` as the closure of every commutator, used to cross-check
/// [`Characteristic::Derived`].
pub fn derived_by_all_commutators<G: GroupView + ?Sized>(g: &G) -> Result<Subgroup, SubgroupError> {
    let mut h = Subgroup::trivial(g.order());
    for x in g.elements() {
        for y in g.elements() {
            let c = g.commutator(x, y);
            if !h.contains(c) {
                h.extend(g, c, DEFAULT_ELEMENT_BUDGET)?;
            }
        }
    }
    Ok(h)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Characteristic {
    Center,
    Derived,
    /// `gamma(k)`: the k-th term of the lower central series, `gamma(1) = G`.
    Gamma(u32),
    Frattini,
    /// `Omega_i`: generated by elements of order dividing `p^i`.
    Omega(u32),
    /// `G^{p^i}`: generated by `p^i`-th powers.
    Agemo(u32),
}

pub fn center<G: GroupView + ?Sized>(g: &G) -> Subgroup {
    let gens = g.generators();
    let elements: Vec<Elem> = g
        .elements()
        .filter(|&x| gens.iter().all(|&s| g.multiply(x, s) == g.multiply(s, x)))
        .collect();
    // Greedy generating set, in index order.
    let mut generators = Vec::new();
    let mut span = Subgroup::trivial(g.order());
    for &x in &elements {
        if !span.contains(x) {
            span.extend(g, x, DEFAULT_ELEMENT_BUDGET)
                .expect("center fits in the group");
            generators.push(x);
        }
    }
    debug_assert_eq!(span.order(), elements.len());
    Subgroup::from_closed_set(g.order(), elements, generators)
}

pub fn derived<G: GroupView + ?Sized>(g: &G) -> Result<Subgroup, SubgroupError> {
    let whole = Subgroup::whole(g);
    commutator_subgroup(g, &whole, &whole)
}

/// `gamma_1, ..., gamma_{c+1} = 1` for a nilpotent group of class `c`.
pub fn lower_central_series<G: GroupView + ?Sized>(g: &G) -> Result<Vec<Subgroup>, SubgroupError> {
    let whole = Subgroup::whole(g);
    let mut series = vec![whole.clone()];
    loop {
        let last = series.last().expect("nonempty");
        if last.is_trivial() {
            return Ok(series);
        }
        let next = commutator_subgroup(g, last, &whole)?;
        if next.order() == last.order() {
            // Not nilpotent; cannot happen for p-groups.
            return Ok(series);
        }
        series.push(next);
    }
}

pub fn nilpotency_class<G: GroupView + ?Sized>(g: &G) -> Result<usize, SubgroupError> {
    Ok(lower_central_series(g)?.len() - 1)
}

pub fn gamma<G: GroupView + ?Sized>(g: &G, k: u32) -> Result<Subgroup, SubgroupError> {
    let whole = Subgroup::whole(g);
    let mut cur = whole.clone();
    for _ in 1..k.max(1) {
        if cur.is_trivial() {
            break;
        }
        cur = commutator_subgroup(g, &cur, &whole)?;
    }
    Ok(cur)
}

/// The literal set `{x^{p^i}}`, sorted.
pub fn power_image_set<G: GroupView + ?Sized>(g: &G, i: u32) -> Vec<Elem> {
    let t = PowerTables::new(g);
    power_image_set_with(&t, i)
}

pub fn power_image_set_with(t: &PowerTables, i: u32) -> Vec<Elem> {
    let mut seen = vec![false; t.pth_power.len()];
    for x in 0..t.pth_power.len() as Elem {
        seen[t.power_p(x, i) as usize] = true;
    }
    (0..seen.len() as Elem)
        .filter(|&x| seen[x as usize])
        .collect()
}

pub fn agemo<G: GroupView + ?Sized>(g: &G, i: u32) -> Result<Subgroup, SubgroupError> {
    let t = PowerTables::new(g);
    agemo_with(g, &t, i)
}

pub fn agemo_with<G: GroupView + ?Sized>(
    g: &G,
    t: &PowerTables,
    i: u32,
) -> Result<Subgroup, SubgroupError> {
    closure_of_set(g, g.elements().map(|x| t.power_p(x, i)))
}

pub fn omega<G: GroupView + ?Sized>(g: &G, i: u32) -> Result<Subgroup, SubgroupError> {
    let t = PowerTables::new(g);
    omega_with(g, &t, i)
}

pub fn omega_with<G: GroupView + ?Sized>(
    g: &G,
    t: &PowerTables,
    i: u32,
) -> Result<Subgroup, SubgroupError> {
    closure_of_set(g, g.elements().filter(|&x| t.power_p(x, i) == 0))
}

/// `Phi(G) = G^p [G, G]`.
pub fn frattini<G: GroupView + ?Sized>(g: &G) -> Result<Subgroup, SubgroupError> {
    let powers = agemo(g, 1)?;
    let comm = derived(g)?;
    let mut gens = powers.generators().to_vec();
    gens.extend_from_slice(comm.generators());
    closure(g, &gens)
}

pub fn characteristic_subgroup<G: GroupView + ?Sized>(
    g: &G,
    kind: Characteristic,
) -> Result<Subgroup, SubgroupError> {
    match kind {
        Characteristic::Center => Ok(center(g)),
        Characteristic::Derived => derived(g),
        Characteristic::Gamma(k) => gamma(g, k),
        Characteristic::Frattini => frattini(g),
        Characteristic::Omega(i) => omega(g, i),
        Characteristic::Agemo(i) => agemo(g, i),
    }
}

/// `d(G) = log_p |G : Phi(G)|`.
pub fn min_generators<G: GroupView + ?Sized>(g: &G) -> Result<u32, SubgroupError> {
    if g.order() == 1 {
        return Ok(0);
    }
    let phi = frattini(g)?;
    Ok(log_p((g.order() / phi.order()) as u64, g.prime()))
}

/// Largest element order.
pub fn exponent_of<G: GroupView + ?Sized>(g: &G) -> u64 {
    g.elements().map(|x| g.element_order(x)).max().unwrap_or(1)
}

/// Drops generators that are redundant given the others, scanning in order.
pub fn irredundant_generators<G: GroupView + ?Sized>(
    g: &G,
    gens: &[Elem],
) -> Result<Vec<Elem>, SubgroupError> {
    let target = closure(g, gens)?.order();
    let mut kept: Vec<Elem> = gens.iter().copied().filter(|&x| x != 0).collect();
    let mut i = 0;
    while i < kept.len() {
        let mut trial = kept.clone();
        trial.remove(i);
        if closure(g, &trial)?.order() == target {
            kept = trial;
        } else {
            i += 1;
        }
    }
    Ok(kept)
}

/// A subgroup viewed as a group in its own right.
pub struct SubgroupView<'a, G: GroupView + ?Sized> {
    parent: &'a G,
    sub: &'a Subgroup,
    position: Vec<u32>,
    generators: Vec<Elem>,
}

impl<'a, G: GroupView + ?Sized> SubgroupView<'a, G> {
    pub fn new(parent: &'a G, sub: &'a Subgroup) -> Self {
        let mut position = vec![u32::MAX; parent.order()];
        for (i, &x) in sub.elements().iter().enumerate() {
            position[x as usize] = i as u32;
        }
        let generators = sub
            .generators()
            .iter()
            .map(|&x| position[x as usize])
            .collect();
        Self {
            parent,
            sub,
            position,
            generators,
        }
    }

    /// Parent element for a local index.
    pub fn lift(&self, x: Elem) -> Elem {
        self.sub.elements()[x as usize]
    }

    /// Local index of a parent element, if it lies in the subgroup.
    pub fn local(&self, x: Elem) -> Option<Elem> {
        self.position
            .get(x as usize)
            .copied()
            .filter(|&i| i != u32::MAX)
    }

    /// Maps a subgroup of this view back to a subgroup of the parent.
    pub fn lift_subgroup(&self, h: &Subgroup) -> Subgroup {
        let elements = h.elements().iter().map(|&x| self.lift(x)).collect();
        let gens = h.generators().iter().map(|&x| self.lift(x)).collect();
        Subgroup::from_closed_set(self.parent.order(), elements, gens)
    }
}

impl<G: GroupView + ?Sized> GroupView for SubgroupView<'_, G> {
    fn prime(&self) -> u32 {
        self.parent.prime()
    }
    fn order(&self) -> usize {
        self.sub.order()
    }
    fn multiply(&self, x: Elem, y: Elem) -> Elem {
        self.position[self.parent.multiply(self.lift(x), self.lift(y)) as usize]
    }
    fn inverse(&self, x: Elem) -> Elem {
        self.position[self.parent.inverse(self.lift(x)) as usize]
    }
    fn generators(&self) -> Vec<Elem> {
        self.generators.clone()
    }
    fn word(&self, x: Elem) -> Word {
        self.parent.word(self.lift(x))
    }
    fn generator_names(&self) -> Vec<String> {
        self.parent.generator_names()
    }
}

/// Limits for [`enumerate_subgroups`].
#[derive(Clone, Copy, Debug)]
pub struct EnumerationBudget {
    pub max_group_order: usize,
    pub max_subgroups: usize,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        Self {
            max_group_order: 729,
            max_subgroups: 1_000_000,
        }
    }
}

/// Streams every subgroup exactly once, layer by layer in increasing order.
///
/// Each subgroup `H > 1` of a p-group has a normal subgroup `K` of index `p`,
/// and `H = K <x>` for any `x` in `H \ K`, so extending each subgroup of the
/// previous layer by elements that normalise it and whose `p`-th power falls
/// inside it reaches every subgroup of the next layer.
pub struct SubgroupStream<'a, G: GroupView + ?Sized> {
    g: &'a G,
    tables: PowerTables,
    budget: EnumerationBudget,
    pending: std::vec::IntoIter<Subgroup>,
    next_layer: Vec<Subgroup>,
    seen: HashSet<Vec<Elem>>,
    emitted: usize,
    done: bool,
}

pub fn enumerate_subgroups<G: GroupView + ?Sized>(
    g: &G,
    budget: EnumerationBudget,
) -> SubgroupStream<'_, G> {
    let trivial = Subgroup::trivial(g.order());
    let mut seen = HashSet::new();
    seen.insert(trivial.elements().to_vec());
    SubgroupStream {
        g,
        tables: PowerTables::new(g),
        budget,
        pending: vec![trivial].into_iter(),
        next_layer: Vec::new(),
        seen,
        emitted: 0,
        done: g.order() > budget.max_group_order,
    }
}

impl<G: GroupView + ?Sized> SubgroupStream<'_, G> {
    fn extensions(&mut self, k: &Subgroup) {
        let g = self.g;
        let mut covered = k.member.clone();
        for x in g.elements() {
            if covered[x as usize] {
                continue;
            }
            if !k.contains(self.tables.pth_power[x as usize]) {
                continue;
            }
            let xi = g.inverse(x);
            if !k
                .generators()
                .iter()
                .all(|&h| k.contains(g.multiply(g.multiply(xi, h), x)))
            {
                continue;
            }
            let mut elements = Vec::with_capacity(k.order() * g.prime() as usize);
            let mut xp = 0;
            for _ in 0..g.prime() {
                for &h in k.elements() {
                    elements.push(g.multiply(h, xp));
                }
                xp = g.multiply(xp, x);
            }
            for &y in &elements {
                covered[y as usize] = true;
            }
            let mut gens = k.generators().to_vec();
            gens.push(x);
            let h = Subgroup::from_closed_set(g.order(), elements, gens);
            if self.seen.insert(h.elements().to_vec()) {
                self.next_layer.push(h);
            }
        }
    }
}

impl<G: GroupView + ?Sized> Iterator for SubgroupStream<'_, G> {
    type Item = Result<Subgroup, SubgroupError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            if self.emitted == 0 && self.g.order() > self.budget.max_group_order {
                self.emitted = usize::MAX;
                return Some(Err(SubgroupError::TooLargeToEnumerate {
                    order: self.g.order(),
                    limit: self.budget.max_group_order,
                }));
            }
            return None;
        }
        loop {
            if let Some(k) = self.pending.next() {
                if self.emitted >= self.budget.max_subgroups {
                    self.done = true;
                    return Some(Err(SubgroupError::EnumerationBudget {
                        emitted: self.emitted,
                    }));
                }
                self.extensions(&k);
                self.emitted += 1;
                return Some(Ok(k));
            }
            if self.next_layer.is_empty() {
                self.done = true;
                return None;
            }
            let mut layer = std::mem::take(&mut self.next_layer);
            layer.sort_by(|a, b| a.elements().cmp(b.elements()));
            self.pending = layer.into_iter();
        }
    }
}

/// `count` subgroups, each generated by `gens_per_sample` uniformly drawn
/// elements from a seeded ChaCha8 stream.
pub fn sample_subgroups<G: GroupView + ?Sized>(
    g: &G,
    count: usize,
    gens_per_sample: usize,
    seed: u64,
) -> Result<Vec<Subgroup>, SubgroupError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = g.order() as u32;
    (0..count)
        .map(|_| {
            let gens: Vec<Elem> = (0..gens_per_sample.max(1))
                .map(|_| rng.random_range(0..n))
                .collect();
            closure(g, &gens)
        })
        .collect()
}
