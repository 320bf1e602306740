//! Power-commutator presentations and their text format.
//!
//! A presentation lists generators `g_0, ..., g_{n-1}` in polycyclic order,
//! each with a relative order `m_i` that is a power of the prime. The
//! relations are
//!
//! * power relations `g_i^{m_i} = t_i` where the tail `t_i` only involves
//!   generators after `g_i`;
//! * conjugation relations `g_j^{g_i} = w_{ji}` for `j > i` where `w_{ji}`
//!   only involves generators after `g_i`.
//!
//! Omitted relations default to `t_i = 1` and `g_j^{g_i} = g_j`.
//!
//! The text format is line oriented:
//!
//! ```text
//! # comment
//! prime 3
//! gen c 9
//! gen b 9
//! gen a 9
//! pow NAME = WORD
//! conj a c = a b        # a^c = a b, c declared before a
//! ```
//!
//! A `WORD` is a whitespace-separated list of `name` or `name^INT` tokens;
//! the literal `1` is the empty word.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::word::Word;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PresentationError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("generator {name}: relative order {order} is not a positive power of {prime}")]
    BadRelativeOrder {
        name: String,
        order: u32,
        prime: u32,
    },
    #[error("duplicate generator name {0}")]
    DuplicateGenerator(String),
    #[error("generator index {0} out of range")]
    NoSuchGenerator(usize),
    #[error("power tail of {name} may only use generators declared after it")]
    TailOrdering { name: String },
    #[error("conjugator {conjugator} must precede conjugated generator {target}")]
    ConjugatorOrdering { target: String, conjugator: String },
    #[error(
        "relation for {target}^{conjugator} may only use generators declared after {conjugator}"
    )]
    ConjugateOrdering { target: String, conjugator: String },
    #[error("presentation has no generators")]
    Empty,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: unknown generator {name}")]
    UnknownGenerator { line: usize, name: String },
    #[error("line {line}: {source}")]
    Invalid {
        line: usize,
        #[source]
        source: PresentationError,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub relative_order: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcPresentation {
    prime: u32,
    generators: Vec<Generator>,
    power_tails: BTreeMap<usize, Word>,
    conj_relations: BTreeMap<(usize, usize), Word>,
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn is_power_of(m: u32, p: u32) -> bool {
    if m < p {
        return false;
    }
    let mut m = m;
    while m.is_multiple_of(p) {
        m /= p;
    }
    m == 1
}

impl PcPresentation {
    pub fn new(prime: u32, generators: Vec<Generator>) -> Result<Self, PresentationError> {
        if !is_prime(prime) {
            return Err(PresentationError::NotPrime(prime));
        }
        if generators.is_empty() {
            return Err(PresentationError::Empty);
        }
        let mut seen = HashMap::new();
        for (i, g) in generators.iter().enumerate() {
            if !is_power_of(g.relative_order, prime) {
                return Err(PresentationError::BadRelativeOrder {
                    name: g.name.clone(),
                    order: g.relative_order,
                    prime,
                });
            }
            if seen.insert(g.name.clone(), i).is_some() {
                return Err(PresentationError::DuplicateGenerator(g.name.clone()));
            }
        }
        Ok(Self {
            prime,
            generators,
            power_tails: BTreeMap::new(),
            conj_relations: BTreeMap::new(),
        })
    }

    /// Convenience constructor from `(name, relative order)` pairs.
    pub fn with_generators<S: Into<String>>(
        prime: u32,
        gens: impl IntoIterator<Item = (S, u32)>,
    ) -> Result<Self, PresentationError> {
        let generators = gens
            .into_iter()
            .map(|(name, relative_order)| Generator {
                name: name.into(),
                relative_order,
            })
            .collect();
        Self::new(prime, generators)
    }

    fn check_index(&self, i: usize) -> Result<(), PresentationError> {
        if i >= self.generators.len() {
            Err(PresentationError::NoSuchGenerator(i))
        } else {
            Ok(())
        }
    }

    /// Sets `g_i^{m_i} = tail`.
    pub fn set_power_tail(&mut self, i: usize, tail: Word) -> Result<(), PresentationError> {
        self.check_index(i)?;
        if let Some(g) = tail.max_generator() {
            self.check_index(g)?;
        }
        if tail.min_generator().is_some_and(|g| g <= i) {
            return Err(PresentationError::TailOrdering {
                name: self.generators[i].name.clone(),
            });
        }
        if tail.is_identity() {
            self.power_tails.remove(&i);
        } else {
            self.power_tails.insert(i, tail);
        }
        Ok(())
    }

    /// Sets `g_j^{g_i} = value` for `i < j`.
    pub fn set_conjugate(
        &mut self,
        j: usize,
        i: usize,
        value: Word,
    ) -> Result<(), PresentationError> {
        self.check_index(i)?;
        self.check_index(j)?;
        if let Some(g) = value.max_generator() {
            self.check_index(g)?;
        }
        if i >= j {
            return Err(PresentationError::ConjugatorOrdering {
                target: self.generators[j].name.clone(),
                conjugator: self.generators[i].name.clone(),
            });
        }
        if value.min_generator().is_some_and(|g| g <= i) {
            return Err(PresentationError::ConjugateOrdering {
                target: self.generators[j].name.clone(),
                conjugator: self.generators[i].name.clone(),
            });
        }
        if value == Word::generator(j) {
            self.conj_relations.remove(&(j, i));
        } else {
            self.conj_relations.insert((j, i), value);
        }
        Ok(())
    }

    /// Sets `[g_j, g_i] = value`, i.e. `g_j^{g_i} = g_j value`.
    pub fn set_commutator(
        &mut self,
        j: usize,
        i: usize,
        value: Word,
    ) -> Result<(), PresentationError> {
        self.set_conjugate(j, i, Word::generator(j).concat(&value))
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    pub fn relative_order(&self, i: usize) -> u32 {
        self.generators[i].relative_order
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn power_tail(&self, i: usize) -> Word {
        self.power_tails.get(&i).cloned().unwrap_or_default()
    }

    pub fn conjugate(&self, j: usize, i: usize) -> Word {
        self.conj_relations
            .get(&(j, i))
            .cloned()
            .unwrap_or_else(|| Word::generator(j))
    }

    /// Product of the relative orders as a `u128`.
    pub fn nominal_order(&self) -> u128 {
        self.generators
            .iter()
            .map(|g| g.relative_order as u128)
            .product()
    }

    /// Parses a word such as `a^4 b c^-1` against this presentation's names.
    pub fn parse_word(&self, text: &str) -> Result<Word, ParseError> {
        parse_word_tokens(text, 1, 1, &self.name_map())
    }

    fn name_map(&self) -> HashMap<String, usize> {
        self.generators
            .iter()
            .enumerate()
            .map(|(i, g)| (g.name.clone(), i))
            .collect()
    }

    /// Canonical text form; parsing it gives back an equal presentation.
    pub fn to_text(&self) -> String {
        let names = self.names();
        let mut out = String::new();
        let _ = writeln!(out, "prime {}", self.prime);
        for g in &self.generators {
            let _ = writeln!(out, "gen {} {}", g.name, g.relative_order);
        }
        for (&i, tail) in &self.power_tails {
            let _ = writeln!(out, "pow {} = {}", names[i], tail.display(&names));
        }
        for (&(j, i), w) in &self.conj_relations {
            let _ = writeln!(
                out,
                "conj {} {} = {}",
                names[j],
                names[i],
                w.display(&names)
            );
        }
        out
    }
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// Splits a line into whitespace-separated tokens with 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (pos, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..pos]));
            }
        } else if start.is_none() {
            start = Some(pos);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_word_tokens(
    text: &str,
    line: usize,
    column_offset: usize,
    names: &HashMap<String, usize>,
) -> Result<Word, ParseError> {
    let toks = tokens(text);
    if toks.len() == 1 && toks[0].1 == "1" {
        return Ok(Word::identity());
    }
    if toks.is_empty() {
        return Err(syntax(
            line,
            column_offset,
            "empty word (use 1 for the identity)",
        ));
    }
    let mut word = Word::identity();
    for (col, tok) in toks {
        let col = col + column_offset - 1;
        let (name, exp) = match tok.split_once('^') {
            Some((name, exp)) => {
                let e: i64 = exp.parse().map_err(|_| {
                    syntax(line, col + name.len() + 1, format!("bad exponent {exp:?}"))
                })?;
                if e == 0 {
                    return Err(syntax(
                        line,
                        col + name.len() + 1,
                        "exponent must be nonzero",
                    ));
                }
                (name, e)
            }
            None => (tok, 1),
        };
        if name.is_empty() {
            return Err(syntax(line, col, "missing generator name"));
        }
        let g = *names
            .get(name)
            .ok_or_else(|| ParseError::UnknownGenerator {
                line,
                name: name.to_string(),
            })?;
        word.push(g, exp);
    }
    Ok(word)
}

/// Parses the presentation file format.
pub fn parse_presentation(text: &str) -> Result<PcPresentation, ParseError> {
    let mut prime: Option<u32> = None;
    let mut gens: Vec<Generator> = Vec::new();
    let mut pres: Option<PcPresentation> = None;
    let mut names: HashMap<String, usize> = HashMap::new();
    let mut seen_tail = std::collections::HashSet::new();
    let mut seen_conj = std::collections::HashSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokens(content);
        let Some(&(col0, keyword)) = toks.first() else {
            continue;
        };
        match keyword {
            "prime" => {
                if prime.is_some() {
                    return Err(syntax(line_no, col0, "duplicate prime declaration"));
                }
                if toks.len() != 2 {
                    return Err(syntax(line_no, col0, "expected `prime P`"));
                }
                let p: u32 = toks[1]
                    .1
                    .parse()
                    .map_err(|_| syntax(line_no, toks[1].0, "prime must be a positive integer"))?;
                if !is_prime(p) {
                    return Err(ParseError::Invalid {
                        line: line_no,
                        source: PresentationError::NotPrime(p),
                    });
                }
                prime = Some(p);
            }
            "gen" => {
                let Some(p) = prime else {
                    return Err(syntax(line_no, col0, "`prime P` must come first"));
                };
                if pres.is_some() {
                    return Err(syntax(
                        line_no,
                        col0,
                        "generators must be declared before relations",
                    ));
                }
                if toks.len() != 3 {
                    return Err(syntax(line_no, col0, "expected `gen NAME ORDER`"));
                }
                let name = toks[1].1;
                if name == "1" || name.contains('^') || name.contains('=') {
                    return Err(syntax(
                        line_no,
                        toks[1].0,
                        format!("invalid generator name {name:?}"),
                    ));
                }
                let order: u32 = toks[2].1.parse().map_err(|_| {
                    syntax(
                        line_no,
                        toks[2].0,
                        "relative order must be a positive integer",
                    )
                })?;
                if !is_power_of(order, p) {
                    return Err(ParseError::Invalid {
                        line: line_no,
                        source: PresentationError::BadRelativeOrder {
                            name: name.to_string(),
                            order,
                            prime: p,
                        },
                    });
                }
                if names.insert(name.to_string(), gens.len()).is_some() {
                    return Err(ParseError::Invalid {
                        line: line_no,
                        source: PresentationError::DuplicateGenerator(name.to_string()),
                    });
                }
                gens.push(Generator {
                    name: name.to_string(),
                    relative_order: order,
                });
            }
            "pow" | "conj" => {
                if prime.is_none() {
                    return Err(syntax(line_no, col0, "`prime P` must come first"));
                }
                if pres.is_none() {
                    let p = PcPresentation::new(prime.unwrap_or(2), std::mem::take(&mut gens))
                        .map_err(|source| ParseError::Invalid {
                            line: line_no,
                            source,
                        })?;
                    pres = Some(p);
                }
                let arity = if keyword == "pow" { 1 } else { 2 };
                let eq_pos = toks.iter().position(|&(_, t)| t == "=");
                let Some(eq_pos) = eq_pos.filter(|&p| p == arity + 1) else {
                    let msg = if keyword == "pow" {
                        "expected `pow NAME = WORD`"
                    } else {
                        "expected `conj X Y = WORD`"
                    };
                    return Err(syntax(line_no, col0, msg));
                };
                let lookup = |k: usize| -> Result<usize, ParseError> {
                    names
                        .get(toks[k].1)
                        .copied()
                        .ok_or_else(|| ParseError::UnknownGenerator {
                            line: line_no,
                            name: toks[k].1.to_string(),
                        })
                };
                let rhs_col = toks
                    .get(eq_pos + 1)
                    .map(|t| t.0)
                    .unwrap_or(content.len() + 1);
                let rhs = &content[(rhs_col - 1).min(content.len())..];
                let word = parse_word_tokens(rhs, line_no, rhs_col, &names)?;
                let p = pres.as_mut().expect("presentation initialised above");
                if keyword == "pow" {
                    let i = lookup(1)?;
                    if !seen_tail.insert(i) {
                        return Err(syntax(
                            line_no,
                            col0,
                            format!("duplicate power relation for {}", toks[1].1),
                        ));
                    }
                    p.set_power_tail(i, word)
                        .map_err(|source| ParseError::Invalid {
                            line: line_no,
                            source,
                        })?;
                } else {
                    let j = lookup(1)?;
                    let i = lookup(2)?;
                    if !seen_conj.insert((j, i)) {
                        return Err(syntax(
                            line_no,
                            col0,
                            format!(
                                "duplicate conjugation relation for {}^{}",
                                toks[1].1, toks[2].1
                            ),
                        ));
                    }
                    p.set_conjugate(j, i, word)
                        .map_err(|source| ParseError::Invalid {
                            line: line_no,
                            source,
                        })?;
                }
            }
            other => {
                return Err(syntax(
                    line_no,
                    col0,
                    format!("unknown directive {other:?}"),
                ));
            }
        }
    }

    match (pres, prime) {
        (Some(p), _) => Ok(p),
        (None, Some(p)) => PcPresentation::new(p, gens).map_err(|source| ParseError::Invalid {
            line: text.lines().count().max(1),
            source,
        }),
        (None, None) => Err(syntax(1, 1, "missing `prime P` declaration")),
    }
}
