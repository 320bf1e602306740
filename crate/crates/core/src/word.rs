//! Words in the generators of a presentation.

use std::fmt;

/// A word `g_{i_1}^{e_1} ... g_{i_k}^{e_k}` over generator indices.
///
/// Exponents are nonzero. The empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<(usize, i64)>,
}

impl Word {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Builds a word, dropping zero exponents and merging adjacent equal generators.
    pub fn from_letters<I: IntoIterator<Item = (usize, i64)>>(letters: I) -> Self {
        let mut w = Self::default();
        for (g, e) in letters {
            w.push(g, e);
        }
        w
    }

    pub fn generator(g: usize) -> Self {
        Self::from_letters([(g, 1)])
    }

    pub fn push(&mut self, g: usize, e: i64) {
        if e == 0 {
            return;
        }
        if let Some(last) = self.letters.last_mut() {
            if last.0 == g {
                last.1 += e;
                if last.1 == 0 {
                    self.letters.pop();
                }
                return;
            }
        }
        self.letters.push((g, e));
    }

    pub fn letters(&self) -> &[(usize, i64)] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Self::from_letters(self.letters.iter().rev().map(|&(g, e)| (g, -e)))
    }

    pub fn concat(&self, other: &Word) -> Self {
        let mut w = self.clone();
        for &(g, e) in &other.letters {
            w.push(g, e);
        }
        w
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut w = Self::default();
        for _ in 0..k {
            w = w.concat(self);
        }
        w
    }

    /// Largest generator index mentioned, if any.
    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|&(g, _)| g).max()
    }

    pub fn min_generator(&self) -> Option<usize> {
        self.letters.iter().map(|&(g, _)| g).min()
    }

    /// Renders the word with the given generator names, `1` for the identity.
    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_identity() {
            return f.write_str("1");
        }
        for (pos, &(g, e)) in self.word.letters.iter().enumerate() {
            if pos > 0 {
                f.write_str(" ")?;
            }
            let name = self.names.get(g).map(String::as_str).unwrap_or("?");
            if e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        Ok(())
    }
}
