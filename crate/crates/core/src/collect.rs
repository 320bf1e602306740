//! Collection from the left and the overlap consistency test.
//!
//! The collector keeps the already-collected prefix as an exponent vector and
//! a stack of uncollected letters `(generator, positive exponent)`. The
//! leftmost uncollected letter `g_k^a` is multiplied onto the prefix
//! `g_0^{e_0} ... g_k^{e_k} u`, where `u` lives in the subgroup generated by
//! the generators after `g_k`, using `u g_k = g_k u^{g_k}`: the part `u` is
//! cleared and its conjugate by `g_k` is pushed back as uncollected letters.
//! Exponents reaching the relative order are replaced by the power tail.
//!
//! Negative exponents never reach the collector. Relation right-hand sides
//! are compiled bottom-up into normal forms with nonnegative exponents, and
//! `g_i^{-1}` is expanded as `g_i^{m_i - 1} t_i^{-1}`.

use serde::Serialize;
use thiserror::Error;

use crate::presentation::PcPresentation;
use crate::word::Word;

/// Upper bound on collector steps for a single call.
pub const DEFAULT_STEP_LIMIT: u64 = 50_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CollectError {
    #[error("collection exceeded {0} steps")]
    StepLimit(u64),
    #[error("word references generator {0}, which does not exist")]
    NoSuchGenerator(usize),
}

type Letters = Vec<(usize, u32)>;

/// A compiled presentation ready for collection.
#[derive(Clone, Debug)]
pub struct Collector {
    orders: Vec<u32>,
    tails: Vec<Letters>,
    /// `conj[j][i]` for `i < j`; `None` when `g_j^{g_i} = g_j`.
    conj: Vec<Vec<Option<Letters>>>,
    /// Normal form of `g_i^{-1}`.
    gen_inverse: Vec<Vec<u32>>,
    step_limit: u64,
}

fn letters_of(v: &[u32]) -> Letters {
    v.iter()
        .enumerate()
        .filter(|&(_, &e)| e > 0)
        .map(|(g, &e)| (g, e))
        .collect()
}

impl Collector {
    /// Compiles relation right-hand sides bottom-up into normal forms.
    pub fn new(pres: &PcPresentation) -> Result<Self, CollectError> {
        let n = pres.len();
        let mut c = Collector {
            orders: pres.generators().iter().map(|g| g.relative_order).collect(),
            tails: vec![Vec::new(); n],
            conj: (0..n).map(|j| vec![None; j]).collect(),
            gen_inverse: vec![Vec::new(); n],
            step_limit: DEFAULT_STEP_LIMIT,
        };
        for k in (0..n).rev() {
            // Everything below only touches generators after k, which are compiled.
            let tail = c.normal_form(&pres.power_tail(k))?;
            c.tails[k] = letters_of(&tail);
            for j in k + 1..n {
                let w = pres.conjugate(j, k);
                if w != Word::generator(j) {
                    let v = c.normal_form(&w)?;
                    let letters = letters_of(&v);
                    c.conj[j][k] = if letters == [(j, 1)] {
                        None
                    } else {
                        Some(letters)
                    };
                }
            }
            let tail_inv = c.inverse(&tail)?;
            let mut inv = vec![0u32; n];
            let mut stack = letters_of(&tail_inv);
            stack.reverse();
            if c.orders[k] > 1 {
                stack.push((k, c.orders[k] - 1));
            }
            c.collect(&mut inv, &mut stack)?;
            c.gen_inverse[k] = inv;
        }
        Ok(c)
    }

    pub fn with_step_limit(mut self, limit: u64) -> Self {
        self.step_limit = limit;
        self
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn relative_orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn identity(&self) -> Vec<u32> {
        vec![0; self.orders.len()]
    }

    /// Normal form of the power tail `t_k`.
    pub fn tail(&self, k: usize) -> Vec<u32> {
        let mut v = self.identity();
        for &(g, e) in &self.tails[k] {
            v[g] = e;
        }
        v
    }

    /// Normal form of `g_j^{g_i}` (`i < j`).
    pub fn conjugate_relation(&self, j: usize, i: usize) -> Vec<u32> {
        let mut v = self.identity();
        match &self.conj[j][i] {
            None => v[j] = 1,
            Some(w) => {
                for &(g, e) in w {
                    v[g] = e;
                }
            }
        }
        v
    }

    /// Runs the collector until the stack is empty, accumulating into `e`.
    pub fn collect(
        &self,
        e: &mut [u32],
        stack: &mut Vec<(usize, u32)>,
    ) -> Result<(), CollectError> {
        let n = self.orders.len();
        let mut steps: u64 = 0;
        while let Some((k, a)) = stack.pop() {
            steps += 1;
            if steps > self.step_limit {
                return Err(CollectError::StepLimit(self.step_limit));
            }
            if k >= n {
                return Err(CollectError::NoSuchGenerator(k));
            }
            let m = self.orders[k];
            if e[k + 1..].iter().all(|&x| x == 0) {
                let total = e[k] as u64 + a as u64;
                e[k] = (total % m as u64) as u32;
                for _ in 0..total / m as u64 {
                    stack.extend(self.tails[k].iter().rev());
                }
                continue;
            }
            // Multiply by a single g_k: prefix g_k^{e_k + 1} u^{g_k}.
            if a > 1 {
                stack.push((k, a - 1));
            }
            for j in (k + 1..n).rev() {
                let ej = e[j];
                if ej == 0 {
                    continue;
                }
                e[j] = 0;
                match &self.conj[j][k] {
                    None => stack.push((j, ej)),
                    Some(w) => {
                        for _ in 0..ej {
                            stack.extend(w.iter().rev());
                        }
                    }
                }
            }
            e[k] += 1;
            if e[k] == m {
                e[k] = 0;
                stack.extend(self.tails[k].iter().rev());
            }
        }
        Ok(())
    }

    /// Multiplies the normal form `start` on the right by nonnegative letters.
    pub fn multiply_letters(
        &self,
        start: &[u32],
        letters: &[(usize, u32)],
    ) -> Result<Vec<u32>, CollectError> {
        let mut e = start.to_vec();
        let mut stack: Vec<(usize, u32)> = letters
            .iter()
            .rev()
            .copied()
            .filter(|&(_, a)| a > 0)
            .collect();
        self.collect(&mut e, &mut stack)?;
        Ok(e)
    }

    /// Multiplies two normal forms.
    pub fn multiply(&self, x: &[u32], y: &[u32]) -> Result<Vec<u32>, CollectError> {
        self.multiply_letters(x, &letters_of(y))
    }

    /// Rewrites a word with arbitrary integer exponents into nonnegative letters.
    fn positive_letters(&self, w: &Word) -> Result<Letters, CollectError> {
        let mut out = Vec::new();
        for &(g, e) in w.letters() {
            if g >= self.orders.len() {
                return Err(CollectError::NoSuchGenerator(g));
            }
            if e > 0 {
                out.push((g, e as u32));
            } else {
                let inv = letters_of(&self.gen_inverse[g]);
                for _ in 0..(-e) {
                    out.extend(inv.iter().copied());
                }
            }
        }
        Ok(out)
    }

    /// Normal form of an arbitrary word.
    pub fn normal_form(&self, w: &Word) -> Result<Vec<u32>, CollectError> {
        let letters = self.positive_letters(w)?;
        self.multiply_letters(&self.identity(), &letters)
    }

    /// Inverse by peeling the leading generator: `u g_k^{m_k - u_k}` lies
    /// deeper in the series, and the peeled powers multiply to `u^{-1}`.
    pub fn inverse(&self, u: &[u32]) -> Result<Vec<u32>, CollectError> {
        let mut rest = u.to_vec();
        let mut peeled: Letters = Vec::new();
        while let Some(k) = rest.iter().position(|&x| x != 0) {
            let b = self.orders[k] - rest[k];
            rest = self.multiply_letters(&rest, &[(k, b)])?;
            debug_assert_eq!(rest[k], 0);
            peeled.push((k, b));
        }
        self.multiply_letters(&self.identity(), &peeled)
    }

    /// Runs the standard overlap tests and reports the first failure.
    pub fn consistency(&self) -> Result<ConsistencyReport, CollectError> {
        let n = self.orders.len();
        let id = self.identity();
        let single = |g: usize, e: u32| -> Vec<u32> {
            let mut v = vec![0; n];
            v[g] = e;
            v
        };
        let mut checked = 0usize;
        let mut fail =
            |overlap: Overlap, left: Vec<u32>, right: Vec<u32>| -> Option<OverlapFailure> {
                checked += 1;
                (left != right).then_some(OverlapFailure {
                    overlap,
                    left,
                    right,
                })
            };
        let mut failure = None;

        // g_k g_j g_i, k > j > i
        'outer: for k in 0..n {
            for j in 0..k {
                for i in 0..j {
                    let left = self.multiply_letters(&id, &[(k, 1), (j, 1), (i, 1)])?;
                    let ji = self.multiply_letters(&id, &[(j, 1), (i, 1)])?;
                    let right = self.multiply(&single(k, 1), &ji)?;
                    if let Some(f) = fail(Overlap::Triple { k, j, i }, left, right) {
                        failure = Some(f);
                        break 'outer;
                    }
                }
            }
        }
        // g_j^{m_j} g_i and g_j g_i^{m_i}, j > i
        if failure.is_none() {
            'outer2: for j in 0..n {
                for i in 0..j {
                    let left = self.multiply_letters(&self.tail(j), &[(i, 1)])?;
                    let ji = self.multiply_letters(&id, &[(j, 1), (i, 1)])?;
                    let right = self.multiply(&single(j, self.orders[j] - 1), &ji)?;
                    if let Some(f) = fail(Overlap::PowerLeft { j, i }, left, right) {
                        failure = Some(f);
                        break 'outer2;
                    }
                    let left = self.multiply(&single(j, 1), &self.tail(i))?;
                    let right = self.multiply_letters(&ji, &[(i, self.orders[i] - 1)])?;
                    if let Some(f) = fail(Overlap::PowerRight { j, i }, left, right) {
                        failure = Some(f);
                        break 'outer2;
                    }
                }
            }
        }
        // g_i^{m_i + 1}
        if failure.is_none() {
            for i in 0..n {
                let left = self.multiply_letters(&self.tail(i), &[(i, 1)])?;
                let right = self.multiply(&single(i, 1), &self.tail(i))?;
                if let Some(f) = fail(Overlap::PowerPower { i }, left, right) {
                    failure = Some(f);
                    break;
                }
            }
        }
        Ok(ConsistencyReport {
            consistent: failure.is_none(),
            overlaps_checked: checked,
            failure,
        })
    }

    /// Independent consistency decision: the right-regular action of the
    /// generators on the `Π m_i` normal forms must satisfy every defining
    /// relation. Returns `None` when the nominal order exceeds `bound`.
    pub fn regular_action_check(
        &self,
        bound: u64,
    ) -> Result<Option<RegularActionReport>, CollectError> {
        let n = self.orders.len();
        let total: u128 = self.orders.iter().map(|&m| m as u128).product();
        if total > bound as u128 {
            return Ok(None);
        }
        let total = total as usize;
        let mut radix = vec![1usize; n + 1];
        for i in (0..n).rev() {
            radix[i] = radix[i + 1] * self.orders[i] as usize;
        }
        let index = |v: &[u32]| -> usize {
            v.iter()
                .enumerate()
                .map(|(i, &e)| e as usize * radix[i + 1])
                .sum()
        };
        let vector = |mut x: usize| -> Vec<u32> {
            let mut v = vec![0u32; n];
            for i in 0..n {
                v[i] = (x / radix[i + 1]) as u32;
                x %= radix[i + 1];
            }
            v
        };
        // action[g][x] = x * g_g
        let mut action = vec![vec![0u32; total]; n];
        for x in 0..total {
            let v = vector(x);
            for (g, row) in action.iter_mut().enumerate() {
                row[x] = index(&self.multiply_letters(&v, &[(g, 1)])?) as u32;
            }
        }
        let apply = |x: usize, letters: &[(usize, u32)]| -> usize {
            let mut x = x;
            for &(g, e) in letters {
                for _ in 0..e {
                    x = action[g][x] as usize;
                }
            }
            x
        };
        let mut bijective = true;
        for row in &action {
            let mut seen = vec![false; total];
            for &y in row {
                if std::mem::replace(&mut seen[y as usize], true) {
                    bijective = false;
                }
            }
        }
        let mut violated: Option<String> = None;
        'rel: for x in 0..total {
            for i in 0..n {
                if apply(x, &[(i, self.orders[i])]) != apply(x, &self.tails[i]) {
                    violated = Some(format!("power relation of generator {i}"));
                    break 'rel;
                }
                for j in i + 1..n {
                    let rhs: Letters = match &self.conj[j][i] {
                        None => vec![(j, 1)],
                        Some(w) => w.clone(),
                    };
                    let left = apply(x, &[(j, 1), (i, 1)]);
                    let right = apply(apply(x, &[(i, 1)]), &rhs);
                    if left != right {
                        violated = Some(format!("conjugation relation of generator {j} by {i}"));
                        break 'rel;
                    }
                }
            }
        }
        Ok(Some(RegularActionReport {
            normal_forms: total,
            bijective,
            violated_relation: violated.clone(),
            consistent: bijective && violated.is_none(),
        }))
    }
}

/// An overlap ambiguity of the rewriting system, with generator indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Overlap {
    /// `(g_k g_j) g_i` versus `g_k (g_j g_i)`.
    Triple { k: usize, j: usize, i: usize },
    /// `(g_j^{m_j}) g_i` versus `g_j^{m_j - 1} (g_j g_i)`.
    PowerLeft { j: usize, i: usize },
    /// `g_j (g_i^{m_i})` versus `(g_j g_i) g_i^{m_i - 1}`.
    PowerRight { j: usize, i: usize },
    /// `(g_i^{m_i}) g_i` versus `g_i (g_i^{m_i})`.
    PowerPower { i: usize },
}

impl Overlap {
    pub fn describe(&self, names: &[String]) -> String {
        match *self {
            Overlap::Triple { k, j, i } => format!("({} {}) {}", names[k], names[j], names[i]),
            Overlap::PowerLeft { j, i } => format!("{}^m {}", names[j], names[i]),
            Overlap::PowerRight { j, i } => format!("{} {}^m", names[j], names[i]),
            Overlap::PowerPower { i } => format!("{0}^m {0}", names[i]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OverlapFailure {
    pub overlap: Overlap,
    pub left: Vec<u32>,
    pub right: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    pub consistent: bool,
    pub overlaps_checked: usize,
    pub failure: Option<OverlapFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularActionReport {
    pub normal_forms: usize,
    pub bijective: bool,
    pub violated_relation: Option<String>,
    pub consistent: bool,
}

/// Parses-free entry point: consistency verdict for a presentation.
pub fn consistency_check(pres: &PcPresentation) -> Result<ConsistencyReport, CollectError> {
    Collector::new(pres)?.consistency()
}
