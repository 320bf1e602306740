//! Brute-force Cayley tables and naive recomputation of subgroup data.
//!
//! A table is filled from right multiplication by single generators: the
//! collector is asked only for `x * g_j`, once per element and generator.
//! Every other product is composed from those entries, and all subgroup
//! quantities here are computed from the table with plain closures.

use std::collections::{BTreeSet, HashSet};
use std::io::{Read, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::collect::CollectError;
use crate::group::PcGroup;
use crate::subgroup::{self, Subgroup, SubgroupError};
use crate::view::{log_p, Elem, GroupView};
use crate::word::Word;

pub const DUMP_MAGIC: &[u8; 8] = b"PQPTBL01";
pub const DEFAULT_TABLE_BUDGET: usize = 10_000;
/// Largest order for which every triple is checked on request.
pub const FULL_ASSOC_LIMIT: usize = 1024;
pub const SAMPLED_TRIPLES: u64 = 1_000_000;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("group of order {order} exceeds the table budget of {limit} elements")]
    Budget { order: usize, limit: usize },
    #[error("full associativity requested for order {order}; the limit is {limit}")]
    AssociativityBudget { order: usize, limit: usize },
    #[error(transparent)]
    Collect(#[from] CollectError),
    #[error(transparent)]
    Subgroup(#[from] SubgroupError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad table dump: {0}")]
    BadDump(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AssocMode {
    /// Every triple up to order 81, else a seeded sample.
    Auto,
    /// Every triple.
    Full,
    Sampled {
        count: u64,
        seed: u64,
    },
    Skip,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssocReport {
    pub triples: u64,
    pub exhaustive: bool,
    /// First failing `(x, y, z)`.
    pub failure: Option<(Elem, Elem, Elem)>,
}

#[derive(Clone, Debug)]
pub struct CayleyTable {
    prime: u32,
    names: Vec<String>,
    vectors: Vec<Vec<u32>>,
    table: Vec<Elem>,
    inverse: Vec<Elem>,
    identity: Elem,
    generators: Vec<Elem>,
}

fn mixed_radix_vectors(orders: &[u32]) -> Vec<Vec<u32>> {
    let total: usize = orders.iter().map(|&m| m as usize).product();
    let mut out = Vec::with_capacity(total);
    let mut v = vec![0u32; orders.len()];
    for _ in 0..total {
        out.push(v.clone());
        for k in (0..orders.len()).rev() {
            v[k] += 1;
            if v[k] < orders[k] {
                break;
            }
            v[k] = 0;
        }
    }
    out
}

impl CayleyTable {
    /// Builds the table with the default budget.
    pub fn build(g: &PcGroup) -> Result<Self, OracleError> {
        Self::build_with_budget(g, DEFAULT_TABLE_BUDGET, 1)
    }

    pub fn build_with_budget(
        g: &PcGroup,
        limit: usize,
        workers: usize,
    ) -> Result<Self, OracleError> {
        let orders = g.relative_orders().to_vec();
        let nominal: u128 = orders.iter().map(|&m| m as u128).product();
        if nominal > limit as u128 {
            return Err(OracleError::Budget {
                order: nominal as usize,
                limit,
            });
        }
        let vectors = mixed_radix_vectors(&orders);
        let n = vectors.len();
        let rank = orders.len();
        let index_of = |v: &[u32]| -> Elem {
            v.iter()
                .zip(&orders)
                .fold(0u64, |acc, (&e, &m)| acc * m as u64 + e as u64) as Elem
        };
        let collector = g.collector();
        // right[x * rank + j] = x g_j
        let mut right = vec![0 as Elem; n * rank];
        for (x, v) in vectors.iter().enumerate() {
            for j in 0..rank {
                right[x * rank + j] = index_of(&collector.multiply_letters(v, &[(j, 1)])?);
            }
        }
        // y = pred[y] * g_{last[y]}, with pred[y] having one fewer letter.
        let mut pred = vec![0 as Elem; n];
        let mut last = vec![0usize; n];
        for (y, v) in vectors.iter().enumerate().skip(1) {
            let j = v.iter().rposition(|&e| e != 0).expect("nonidentity");
            let mut w = v.clone();
            w[j] -= 1;
            pred[y] = index_of(&w);
            last[y] = j;
        }
        let mut table = vec![0 as Elem; n * n];
        let fill = |rows: &mut [Elem], first: usize| {
            for (r, row) in rows.chunks_mut(n).enumerate() {
                row[0] = (first + r) as Elem;
                for y in 1..n {
                    row[y] = right[row[pred[y] as usize] as usize * rank + last[y]];
                }
            }
        };
        let workers = workers.max(1);
        let rows_per = n.div_ceil(workers);
        std::thread::scope(|s| {
            for (b, block) in table.chunks_mut(rows_per * n).enumerate() {
                let fill = &fill;
                s.spawn(move || fill(block, b * rows_per));
            }
        });
        let identity = index_of(&vec![0; rank]);
        let mut inverse = vec![0 as Elem; n];
        for x in 0..n {
            let row = &table[x * n..(x + 1) * n];
            inverse[x] = row
                .iter()
                .position(|&z| z == identity)
                .expect("row contains the identity") as Elem;
        }
        let generators = (0..rank)
            .map(|j| {
                let mut v = vec![0; rank];
                v[j] = 1;
                index_of(&v)
            })
            .collect();
        Ok(Self {
            prime: g.prime(),
            names: g.names().to_vec(),
            vectors,
            table,
            inverse,
            identity,
            generators,
        })
    }

    #[inline]
    pub fn product(&self, x: Elem, y: Elem) -> Elem {
        self.table[x as usize * self.vectors.len() + y as usize]
    }

    pub fn vector(&self, x: Elem) -> &[u32] {
        &self.vectors[x as usize]
    }

    /// Index of an exponent vector in the table.
    pub fn index_of(&self, v: &[u32]) -> Option<Elem> {
        self.vectors.iter().position(|w| w == v).map(|i| i as Elem)
    }

    /// Rows and columns are permutations.
    pub fn is_latin_square(&self) -> bool {
        let n = self.vectors.len();
        let mut seen = vec![0u32; n];
        for x in 0..n {
            let stamp = x as u32 + 1;
            for y in 0..n {
                let z = self.table[x * n + y] as usize;
                if seen[z] == stamp {
                    return false;
                }
                seen[z] = stamp;
            }
        }
        seen.fill(0);
        for y in 0..n {
            let stamp = y as u32 + 1;
            for x in 0..n {
                let z = self.table[x * n + y] as usize;
                if seen[z] == stamp {
                    return false;
                }
                seen[z] = stamp;
            }
        }
        true
    }

    pub fn check_associativity(&self, mode: AssocMode) -> Result<AssocReport, OracleError> {
        let n = self.vectors.len();
        let mode = match mode {
            AssocMode::Auto if n <= 81 => AssocMode::Full,
            AssocMode::Auto => AssocMode::Sampled {
                count: SAMPLED_TRIPLES,
                seed: 0,
            },
            m => m,
        };
        let assoc = |x: Elem, y: Elem, z: Elem| {
            self.product(self.product(x, y), z) == self.product(x, self.product(y, z))
        };
        match mode {
            AssocMode::Skip => Ok(AssocReport {
                triples: 0,
                exhaustive: false,
                failure: None,
            }),
            AssocMode::Full => {
                if n > FULL_ASSOC_LIMIT {
                    return Err(OracleError::AssociativityBudget {
                        order: n,
                        limit: FULL_ASSOC_LIMIT,
                    });
                }
                for x in 0..n as Elem {
                    for y in 0..n as Elem {
                        let xy = self.product(x, y);
                        let row_xy = &self.table[xy as usize * n..(xy as usize + 1) * n];
                        let row_y = &self.table[y as usize * n..(y as usize + 1) * n];
                        for z in 0..n {
                            if row_xy[z] != self.product(x, row_y[z]) {
                                return Ok(AssocReport {
                                    triples: (x as u64 * n as u64 + y as u64) * n as u64
                                        + z as u64
                                        + 1,
                                    exhaustive: true,
                                    failure: Some((x, y, z as Elem)),
                                });
                            }
                        }
                    }
                }
                Ok(AssocReport {
                    triples: (n as u64).pow(3),
                    exhaustive: true,
                    failure: None,
                })
            }
            AssocMode::Sampled { count, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for k in 0..count {
                    let x = rng.random_range(0..n) as Elem;
                    let y = rng.random_range(0..n) as Elem;
                    let z = rng.random_range(0..n) as Elem;
                    if !assoc(x, y, z) {
                        return Ok(AssocReport {
                            triples: k + 1,
                            exhaustive: false,
                            failure: Some((x, y, z)),
                        });
                    }
                }
                Ok(AssocReport {
                    triples: count,
                    exhaustive: false,
                    failure: None,
                })
            }
            AssocMode::Auto => unreachable!(),
        }
    }

    /// Order by repeated multiplication, or `u64::MAX` when the powers never
    /// return to the identity, as only a broken table allows.
    pub fn naive_order(&self, x: Elem) -> u64 {
        let mut y = x;
        let mut k = 1;
        while y != self.identity {
            if k > self.vectors.len() as u64 {
                return u64::MAX;
            }
            y = self.product(y, x);
            k += 1;
        }
        k
    }

    pub fn naive_power(&self, x: Elem, k: u64) -> Elem {
        (0..k).fold(self.identity, |acc, _| self.product(acc, x))
    }

    pub fn naive_commutator(&self, x: Elem, y: Elem) -> Elem {
        self.product(
            self.product(self.inverse[x as usize], self.inverse[y as usize]),
            self.product(x, y),
        )
    }

    /// Two-sided inverse found by scanning row `x`.
    pub fn search_inverse(&self, x: Elem) -> Elem {
        let n = self.vectors.len();
        let y = (0..n as Elem)
            .find(|&y| self.product(x, y) == self.identity)
            .expect("inverse exists");
        assert_eq!(self.product(y, x), self.identity);
        y
    }

    /// Subgroup generated by `gens`, as a sorted element list.
    pub fn naive_closure(&self, gens: &[Elem]) -> Vec<Elem> {
        let n = self.vectors.len();
        let mut member = vec![false; n];
        member[self.identity as usize] = true;
        let mut list = vec![self.identity];
        let gens: Vec<Elem> = gens
            .iter()
            .copied()
            .filter(|&x| x != self.identity)
            .collect();
        let mut i = 0;
        while i < list.len() {
            let x = list[i];
            for &s in &gens {
                let z = self.product(x, s);
                if !member[z as usize] {
                    member[z as usize] = true;
                    list.push(z);
                }
            }
            i += 1;
        }
        list.sort_unstable();
        list
    }

    pub fn naive_center(&self) -> Vec<Elem> {
        (0..self.vectors.len() as Elem)
            .filter(|&x| {
                (0..self.vectors.len() as Elem).all(|y| self.product(x, y) == self.product(y, x))
            })
            .collect()
    }

    pub fn naive_derived(&self) -> Vec<Elem> {
        let n = self.vectors.len() as Elem;
        let mut comms = vec![false; n as usize];
        for x in 0..n {
            for y in 0..n {
                comms[self.naive_commutator(x, y) as usize] = true;
            }
        }
        self.naive_closure(&set_elems(&comms))
    }

    /// Closure of all `p^i`-th powers.
    pub fn naive_agemo(&self, i: u32) -> Vec<Elem> {
        let k = (self.prime as u64).pow(i);
        let mut hit = vec![false; self.vectors.len()];
        for x in 0..self.vectors.len() as Elem {
            hit[self.naive_power(x, k) as usize] = true;
        }
        self.naive_closure(&set_elems(&hit))
    }

    /// Closure of the elements of order at most `p^i`.
    pub fn naive_omega(&self, i: u32) -> Vec<Elem> {
        let k = (self.prime as u64).pow(i);
        let small: Vec<Elem> = (0..self.vectors.len() as Elem)
            .filter(|&x| self.naive_order(x) <= k)
            .collect();
        self.naive_closure(&small)
    }

    /// `G^p G'`.
    pub fn naive_frattini(&self) -> Vec<Elem> {
        let mut gens = self.naive_agemo(1);
        gens.extend(self.naive_derived());
        self.naive_closure(&gens)
    }

    /// Every subgroup, as joins of cyclic subgroups until nothing new appears.
    pub fn naive_subgroups(&self) -> Vec<Vec<Elem>> {
        let n = self.vectors.len();
        let mut cyclic: BTreeSet<Vec<Elem>> = BTreeSet::new();
        for x in 0..n as Elem {
            cyclic.insert(self.naive_closure(&[x]));
        }
        let cyclic: Vec<Vec<Elem>> = cyclic.into_iter().collect();
        let gens_of: Vec<Elem> = cyclic
            .iter()
            .map(|c| *c.iter().max().unwrap_or(&self.identity))
            .collect();
        let mut seen: HashSet<Vec<Elem>> = cyclic.iter().cloned().collect();
        let mut frontier: Vec<Vec<Elem>> = cyclic.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for h in &frontier {
                let mut member = vec![false; n];
                for &x in h {
                    member[x as usize] = true;
                }
                for (c, &cg) in cyclic.iter().zip(&gens_of) {
                    if c.iter().all(|&x| member[x as usize]) {
                        continue;
                    }
                    // a cyclic subgroup is generated by any of its elements of maximal order
                    let gen = c
                        .iter()
                        .copied()
                        .find(|&x| self.naive_order(x) == c.len() as u64)
                        .unwrap_or(cg);
                    let mut gens = h.clone();
                    gens.push(gen);
                    let j = self.naive_closure(&gens);
                    if seen.insert(j.clone()) {
                        next.push(j);
                    }
                }
            }
            frontier = next;
        }
        let mut all: Vec<Vec<Elem>> = seen.into_iter().collect();
        all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        all
    }

    pub fn write_dump<W: Write>(&self, mut out: W) -> Result<(), OracleError> {
        out.write_all(DUMP_MAGIC)?;
        out.write_all(&(self.vectors.len() as u64).to_le_bytes())?;
        let mut buf = Vec::with_capacity(self.table.len() * 4);
        for &z in &self.table {
            buf.extend_from_slice(&z.to_le_bytes());
        }
        out.write_all(&buf)?;
        Ok(())
    }

    pub fn dump_to_path(&self, path: &Path) -> Result<(), OracleError> {
        let f = std::fs::File::create(path)?;
        self.write_dump(std::io::BufWriter::new(f))
    }

    /// Reads the product matrix of a dump.
    pub fn read_dump<R: Read>(mut input: R) -> Result<(u64, Vec<Elem>), OracleError> {
        let mut magic = [0u8; 8];
        input.read_exact(&mut magic)?;
        if &magic != DUMP_MAGIC {
            return Err(OracleError::BadDump("wrong magic".into()));
        }
        let mut len = [0u8; 8];
        input.read_exact(&mut len)?;
        let n = u64::from_le_bytes(len);
        let cells = n
            .checked_mul(n)
            .ok_or_else(|| OracleError::BadDump("element count overflows".into()))?;
        let mut bytes = Vec::new();
        input.read_to_end(&mut bytes)?;
        if bytes.len() as u64 != cells * 4 {
            return Err(OracleError::BadDump(format!(
                "expected {} bytes of table, found {}",
                cells * 4,
                bytes.len()
            )));
        }
        let table = bytes
            .chunks_exact(4)
            .map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]]))
            .collect();
        Ok((n, table))
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }
}

fn set_elems(flags: &[bool]) -> Vec<Elem> {
    flags
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| i as Elem)
        .collect()
}

impl GroupView for CayleyTable {
    fn prime(&self) -> u32 {
        self.prime
    }

    fn order(&self) -> usize {
        self.vectors.len()
    }

    fn identity(&self) -> Elem {
        self.identity
    }

    fn multiply(&self, x: Elem, y: Elem) -> Elem {
        self.product(x, y)
    }

    fn inverse(&self, x: Elem) -> Elem {
        self.inverse[x as usize]
    }

    fn generators(&self) -> Vec<Elem> {
        self.generators.clone()
    }

    fn word(&self, x: Elem) -> Word {
        Word::from_letters(
            self.vectors[x as usize]
                .iter()
                .enumerate()
                .map(|(g, &e)| (g, e as i64)),
        )
    }

    fn generator_names(&self) -> Vec<String> {
        self.names.clone()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub quantity: String,
    pub engine: String,
    pub oracle: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ComparisonReport {
    pub order: usize,
    /// Quantities compared, in order.
    pub compared: Vec<String>,
    pub diff: Vec<Discrepancy>,
}

impl ComparisonReport {
    pub fn is_empty(&self) -> bool {
        self.diff.is_empty()
    }
}

/// Recomputes orders, centre, derived subgroup, `Omega_i`, `G^{p^i}`,
/// Frattini subgroup and `d(G)` from the table and diffs them against the
/// engine.
pub fn recompute_and_compare(
    g: &PcGroup,
    t: &CayleyTable,
) -> Result<ComparisonReport, OracleError> {
    let n = t.order();
    let mut report = ComparisonReport {
        order: n,
        ..ComparisonReport::default()
    };
    let to_engine: Vec<Elem> = (0..n as Elem)
        .map(|x| g.index_of_vector(t.vector(x)))
        .collect();
    let mut cmp = |quantity: String, engine: String, oracle: String| {
        if engine != oracle {
            report.diff.push(Discrepancy {
                quantity: quantity.clone(),
                engine,
                oracle,
            });
        }
        report.compared.push(quantity);
    };
    let as_engine_set = |elems: &[Elem]| -> Vec<Elem> {
        let mut v: Vec<Elem> = elems.iter().map(|&x| to_engine[x as usize]).collect();
        v.sort_unstable();
        v
    };
    let describe = |s: &[Elem]| {
        format!(
            "order {} ({} elements hashed {:016x})",
            s.len(),
            s.len(),
            fingerprint(s)
        )
    };
    let engine_set = |h: &Subgroup| describe(h.elements());

    cmp("order".into(), g.order().to_string(), n.to_string());

    let mut bad_products = 0u64;
    let mut first_bad = None;
    for x in 0..n as Elem {
        for y in 0..n as Elem {
            if g.multiply(to_engine[x as usize], to_engine[y as usize])
                != to_engine[t.product(x, y) as usize]
            {
                bad_products += 1;
                first_bad.get_or_insert((x, y));
            }
        }
    }
    cmp(
        "products".into(),
        "0 mismatches".into(),
        match first_bad {
            None => "0 mismatches".into(),
            Some((x, y)) => format!(
                "{bad_products} mismatches, first at ({}, {})",
                t.describe(x),
                t.describe(y)
            ),
        },
    );

    let mut bad_orders = 0;
    let mut max_order = 1;
    for x in 0..n as Elem {
        let o = t.naive_order(x);
        max_order = max_order.max(o);
        if g.element_order(to_engine[x as usize]) != o {
            bad_orders += 1;
        }
    }
    cmp(
        "element orders".into(),
        "0 mismatches".into(),
        format!("{bad_orders} mismatches"),
    );

    cmp(
        "centre".into(),
        engine_set(&subgroup::center(g)),
        describe(&as_engine_set(&t.naive_center())),
    );
    cmp(
        "derived subgroup".into(),
        engine_set(&subgroup::derived(g)?),
        describe(&as_engine_set(&t.naive_derived())),
    );
    let e = if max_order == u64::MAX {
        1
    } else {
        log_p(max_order, g.prime())
    };
    for i in 1..=e.max(1) {
        cmp(
            format!("Omega_{i}"),
            engine_set(&subgroup::omega(g, i)?),
            describe(&as_engine_set(&t.naive_omega(i))),
        );
        cmp(
            format!("G^(p^{i})"),
            engine_set(&subgroup::agemo(g, i)?),
            describe(&as_engine_set(&t.naive_agemo(i))),
        );
    }
    let phi = t.naive_frattini();
    cmp(
        "Frattini subgroup".into(),
        engine_set(&subgroup::frattini(g)?),
        describe(&as_engine_set(&phi)),
    );
    cmp(
        "d(G)".into(),
        subgroup::min_generators(g)?.to_string(),
        log_p((n / phi.len()) as u64, g.prime()).to_string(),
    );
    Ok(report)
}

fn fingerprint(s: &[Elem]) -> u64 {
    s.iter().fold(0xcbf2_9ce4_8422_2325u64, |h, &x| {
        (h ^ x as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

/// The oracle's subgroup list translated to engine element sets.
pub fn oracle_subgroups_in_engine(g: &PcGroup, t: &CayleyTable) -> BTreeSet<Vec<Elem>> {
    let to_engine: Vec<Elem> = (0..t.order() as Elem)
        .map(|x| g.index_of_vector(t.vector(x)))
        .collect();
    t.naive_subgroups()
        .into_iter()
        .map(|h| {
            let mut v: Vec<Elem> = h.iter().map(|&x| to_engine[x as usize]).collect();
            v.sort_unstable();
            v
        })
        .collect()
}
