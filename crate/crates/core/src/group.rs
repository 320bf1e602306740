//! Consistent pc groups and their arithmetic.
//!
//! Elements are normal forms `g_0^{x_0} ... g_{n-1}^{x_{n-1}}` with
//! `0 <= x_i < m_i`. Word normalisation goes through the collector; once the
//! presentation is known to be consistent the group also precomputes, for
//! every generator `g_k`, the automorphism `u -> u^{g_k}` of the subgroup
//! `G_{k+1} = <g_{k+1}, ..., g_{n-1}>` as a lookup table, so products of
//! normal forms are formed by the recursion
//!
//! ```text
//! (g_k^a x')(g_k^b y') = g_k^{a+b} (x')^{g_k^b} y'
//! ```
//!
//! which touches each level of the series at most a few times.

use std::fmt;

use thiserror::Error;

use crate::collect::{CollectError, Collector, ConsistencyReport};
use crate::presentation::{parse_presentation, ParseError, PcPresentation};
use crate::view::{Elem, GroupView};
use crate::word::Word;

/// Largest group order for which arithmetic tables are built.
pub const MAX_GROUP_ORDER: u128 = 1 << 24;

#[derive(Debug, Error)]
pub enum PcError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Collect(#[from] CollectError),
    #[error("presentation is inconsistent: overlap {overlap} collects to {left:?} and {right:?}")]
    Inconsistent {
        overlap: String,
        left: Vec<u32>,
        right: Vec<u32>,
        report: ConsistencyReport,
    },
    #[error("group order {0} exceeds the supported maximum {MAX_GROUP_ORDER}")]
    TooLarge(u128),
}

/// A normal form, stored as its exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(pub Vec<u32>);

impl Element {
    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

struct Level {
    /// `conj_pow[b][u] = u^{g_k^b}` on `G_{k+1}`, for `1 <= b < m_k` (index 0 unused).
    conj_pow: Vec<Vec<u32>>,
    /// `g_k^{m_k}` as an element of `G_{k+1}`.
    tail: u32,
}

pub struct PcGroup {
    presentation: PcPresentation,
    names: Vec<String>,
    collector: Collector,
    consistency: ConsistencyReport,
    relative_orders: Vec<u32>,
    /// `suffix[k] = |G_k|`, with `suffix[n] = 1`.
    suffix: Vec<u32>,
    levels: Vec<Level>,
    inverses: Vec<u32>,
}

impl fmt::Debug for PcGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PcGroup")
            .field("prime", &self.presentation.prime())
            .field("generators", &self.names)
            .field("order", &self.order())
            .finish()
    }
}

impl PcGroup {
    /// Checks consistency and builds the arithmetic tables.
    pub fn new(presentation: PcPresentation) -> Result<Self, PcError> {
        let nominal = presentation.nominal_order();
        if nominal > MAX_GROUP_ORDER {
            return Err(PcError::TooLarge(nominal));
        }
        let collector = Collector::new(&presentation)?;
        let consistency = collector.consistency()?;
        if let Some(f) = &consistency.failure {
            return Err(PcError::Inconsistent {
                overlap: f.overlap.describe(&presentation.names()),
                left: f.left.clone(),
                right: f.right.clone(),
                report: consistency.clone(),
            });
        }
        let n = presentation.len();
        let relative_orders: Vec<u32> = presentation
            .generators()
            .iter()
            .map(|g| g.relative_order)
            .collect();
        let mut suffix = vec![1u32; n + 1];
        for k in (0..n).rev() {
            suffix[k] = suffix[k + 1] * relative_orders[k];
        }
        let mut group = PcGroup {
            names: presentation.names(),
            presentation,
            collector,
            consistency,
            relative_orders,
            suffix,
            levels: Vec::with_capacity(n),
            inverses: Vec::new(),
        };
        group.build_levels();
        group.inverses = (0..group.order() as u32)
            .map(|x| group.inverse_at(0, x))
            .collect();
        Ok(group)
    }

    pub fn from_text(text: &str) -> Result<Self, PcError> {
        Self::new(parse_presentation(text)?)
    }

    fn build_levels(&mut self) {
        let n = self.relative_orders.len();
        // Levels are stored in order 0..n but built from the bottom up.
        let mut built: Vec<Option<Level>> = (0..n).map(|_| None).collect();
        for k in (0..n).rev() {
            let size = self.suffix[k + 1] as usize;
            let images: Vec<u32> = (k + 1..n)
                .map(|j| self.index_of_vector(&self.collector.conjugate_relation(j, k)))
                .collect();
            let tail = self.index_of_vector(&self.collector.tail(k));
            let mut phi = vec![0u32; size];
            for u in 1..size as u32 {
                // Leading generator of u is j with suffix[j+1] <= u < suffix[j].
                let j = (k + 1..n)
                    .find(|&j| u >= self.suffix[j + 1])
                    .expect("u is nonzero");
                let rest = u - self.suffix[j + 1];
                phi[u as usize] =
                    self.mul_at_with(&built, k + 1, images[j - k - 1], phi[rest as usize]);
            }
            let m = self.relative_orders[k] as usize;
            let mut conj_pow = Vec::with_capacity(m);
            conj_pow.push(Vec::new());
            if m > 1 {
                conj_pow.push(phi.clone());
            }
            for b in 2..m {
                let prev: &Vec<u32> = &conj_pow[b - 1];
                let next: Vec<u32> = prev.iter().map(|&u| phi[u as usize]).collect();
                conj_pow.push(next);
            }
            built[k] = Some(Level { conj_pow, tail });
        }
        self.levels = built
            .into_iter()
            .map(|l| l.expect("every level built"))
            .collect();
    }

    fn mul_at_with(&self, levels: &[Option<Level>], k: usize, x: u32, y: u32) -> u32 {
        if x == 0 {
            return y;
        }
        if y == 0 {
            return x;
        }
        let s = self.suffix[k + 1];
        let (a, xr) = (x / s, x % s);
        let (b, yr) = (y / s, y % s);
        let level = levels[k].as_ref().expect("lower levels are built first");
        let xc = if b == 0 {
            xr
        } else {
            level.conj_pow[b as usize][xr as usize]
        };
        let mut z = self.mul_at_with(levels, k + 1, xc, yr);
        let mut c = a + b;
        let m = self.relative_orders[k];
        if c >= m {
            c -= m;
            z = self.mul_at_with(levels, k + 1, level.tail, z);
        }
        c * s + z
    }

    fn mul_at(&self, k: usize, x: u32, y: u32) -> u32 {
        if x == 0 {
            return y;
        }
        if y == 0 {
            return x;
        }
        let s = self.suffix[k + 1];
        let (a, xr) = (x / s, x % s);
        let (b, yr) = (y / s, y % s);
        let level = &self.levels[k];
        let xc = if b == 0 {
            xr
        } else {
            level.conj_pow[b as usize][xr as usize]
        };
        let mut z = self.mul_at(k + 1, xc, yr);
        let mut c = a + b;
        let m = self.relative_orders[k];
        if c >= m {
            c -= m;
            z = self.mul_at(k + 1, level.tail, z);
        }
        c * s + z
    }

    /// Peels the leading generator: `x g_k^{m_k - a}` lies in `G_{k+1}`.
    fn inverse_at(&self, k: usize, x: u32) -> u32 {
        if x == 0 {
            return 0;
        }
        let s = self.suffix[k + 1];
        let (a, xr) = (x / s, x % s);
        if a == 0 {
            return self.inverse_at(k + 1, xr);
        }
        let b = self.relative_orders[k] - a;
        let level = &self.levels[k];
        let r = self.mul_at(k + 1, level.tail, level.conj_pow[b as usize][xr as usize]);
        b * s + self.inverse_at(k + 1, r)
    }

    pub fn presentation(&self) -> &PcPresentation {
        &self.presentation
    }

    pub fn collector(&self) -> &Collector {
        &self.collector
    }

    pub fn consistency(&self) -> &ConsistencyReport {
        &self.consistency
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn relative_orders(&self) -> &[u32] {
        &self.relative_orders
    }

    pub fn rank(&self) -> usize {
        self.relative_orders.len()
    }

    pub fn index_of_vector(&self, v: &[u32]) -> u32 {
        v.iter()
            .enumerate()
            .map(|(i, &e)| e * self.suffix[i + 1])
            .sum()
    }

    pub fn vector_of(&self, x: Elem) -> Vec<u32> {
        let mut x = x;
        (0..self.rank())
            .map(|i| {
                let d = x / self.suffix[i + 1];
                x %= self.suffix[i + 1];
                d
            })
            .collect()
    }

    pub fn index(&self, e: &Element) -> Elem {
        self.index_of_vector(&e.0)
    }

    pub fn element(&self, x: Elem) -> Element {
        Element(self.vector_of(x))
    }

    pub fn identity_element(&self) -> Element {
        Element(vec![0; self.rank()])
    }

    /// The generator `g_i` as an element.
    pub fn generator(&self, i: usize) -> Element {
        let mut v = vec![0; self.rank()];
        v[i] = 1;
        Element(v)
    }

    pub fn generator_by_name(&self, name: &str) -> Option<Element> {
        self.presentation.index_of(name).map(|i| self.generator(i))
    }

    /// Normal form of a word, by collection from the left.
    pub fn normalize_word(&self, w: &Word) -> Result<Element, CollectError> {
        self.collector.normal_form(w).map(Element)
    }

    /// Parses and normalises a word written with this group's generator names.
    pub fn parse_element(&self, text: &str) -> Result<Element, PcError> {
        let w = self.presentation.parse_word(text)?;
        Ok(self.normalize_word(&w)?)
    }

    /// Index of the element named by a word; panics on malformed input.
    pub fn elem(&self, text: &str) -> Elem {
        let e = self
            .parse_element(text)
            .unwrap_or_else(|err| panic!("bad element {text:?}: {err}"));
        self.index(&e)
    }

    pub fn word_of(&self, e: &Element) -> Word {
        Word::from_letters(e.0.iter().enumerate().map(|(g, &x)| (g, x as i64)))
    }

    pub fn format(&self, e: &Element) -> String {
        self.word_of(e).display(&self.names).to_string()
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Element {
        self.element(self.multiply(self.index(x), self.index(y)))
    }

    pub fn inv(&self, x: &Element) -> Element {
        self.element(self.inverse(self.index(x)))
    }

    pub fn pow(&self, x: &Element, k: i64) -> Element {
        self.element(self.power(self.index(x), k))
    }

    pub fn comm(&self, x: &Element, y: &Element) -> Element {
        self.element(self.commutator(self.index(x), self.index(y)))
    }

    pub fn conj(&self, x: &Element, y: &Element) -> Element {
        self.element(self.conjugate(self.index(x), self.index(y)))
    }

    pub fn order_of(&self, x: &Element) -> u64 {
        self.element_order(self.index(x))
    }
}

impl GroupView for PcGroup {
    fn prime(&self) -> u32 {
        self.presentation.prime()
    }

    fn order(&self) -> usize {
        self.suffix[0] as usize
    }

    fn multiply(&self, x: Elem, y: Elem) -> Elem {
        self.mul_at(0, x, y)
    }

    fn inverse(&self, x: Elem) -> Elem {
        self.inverses[x as usize]
    }

    fn generators(&self) -> Vec<Elem> {
        (0..self.rank()).map(|i| self.suffix[i + 1]).collect()
    }

    fn word(&self, x: Elem) -> Word {
        self.word_of(&self.element(x))
    }

    fn generator_names(&self) -> Vec<String> {
        self.names.clone()
    }
}
