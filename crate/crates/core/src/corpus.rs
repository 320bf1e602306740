//! Constructors for the shipped fixture groups and parametric families.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::group::{PcError, PcGroup};
use crate::presentation::{is_prime, parse_presentation, PcPresentation, PresentationError};
use crate::word::Word;

pub const PAPER_6561: &str = include_str!("../fixtures/paper_6561.pqp");
pub const PAPER_729: &str = include_str!("../fixtures/paper_729.pqp");
pub const PAPER_256: &str = include_str!("../fixtures/paper_256.pqp");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Paper6561,
    Paper729,
    Paper256,
    Cyclic,
    Abelian,
    Extraspecial,
    Higman,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Paper6561,
        Family::Paper729,
        Family::Paper256,
        Family::Cyclic,
        Family::Abelian,
        Family::Extraspecial,
        Family::Higman,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Paper6561 => "paper_6561",
            Family::Paper729 => "paper_729",
            Family::Paper256 => "paper_256",
            Family::Cyclic => "cyclic",
            Family::Abelian => "abelian",
            Family::Extraspecial => "extraspecial",
            Family::Higman => "higman",
        }
    }

    fn fixture(self) -> Option<(&'static str, u32)> {
        match self {
            Family::Paper6561 => Some((PAPER_6561, 3)),
            Family::Paper729 => Some((PAPER_729, 3)),
            Family::Paper256 => Some((PAPER_256, 2)),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| CorpusError::UnknownFamily(s.to_string()))
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("{family}: {message}")]
    InvalidParameters { family: Family, message: String },
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("fixture failed to build: {0}")]
    Build(#[from] PcError),
}

/// A family plus its parameters. `rank` is used by `cyclic` (as the exponent
/// `e` of `C_{p^e}`) and by `higman`; `exponents` by `abelian`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub family: Family,
    pub prime: u32,
    pub rank: Option<u32>,
    pub exponents: Vec<u32>,
}

impl FamilySpec {
    pub fn paper_6561() -> Self {
        Self::fixed(Family::Paper6561, 3)
    }

    pub fn paper_729() -> Self {
        Self::fixed(Family::Paper729, 3)
    }

    pub fn paper_256() -> Self {
        Self::fixed(Family::Paper256, 2)
    }

    fn fixed(family: Family, prime: u32) -> Self {
        Self {
            family,
            prime,
            rank: None,
            exponents: Vec::new(),
        }
    }

    pub fn cyclic(p: u32, e: u32) -> Self {
        Self {
            family: Family::Cyclic,
            prime: p,
            rank: Some(e),
            exponents: Vec::new(),
        }
    }

    pub fn abelian(p: u32, exps: &[u32]) -> Self {
        Self {
            family: Family::Abelian,
            prime: p,
            rank: None,
            exponents: exps.to_vec(),
        }
    }

    pub fn extraspecial(p: u32) -> Self {
        Self::fixed(Family::Extraspecial, p)
    }

    pub fn higman(p: u32, r: u32) -> Self {
        Self {
            family: Family::Higman,
            prime: p,
            rank: Some(r),
            exponents: Vec::new(),
        }
    }

    /// Short identifier used in reports, e.g. `higman(p=3,r=2)`.
    pub fn label(&self) -> String {
        match self.family {
            Family::Paper6561 | Family::Paper729 | Family::Paper256 => {
                self.family.name().to_string()
            }
            Family::Cyclic => format!("cyclic(p={},e={})", self.prime, self.rank.unwrap_or(0)),
            Family::Abelian => {
                let e: Vec<String> = self.exponents.iter().map(u32::to_string).collect();
                format!("abelian(p={},exps=[{}])", self.prime, e.join(","))
            }
            Family::Extraspecial => format!("extraspecial(p={})", self.prime),
            Family::Higman => format!("higman(p={},r={})", self.prime, self.rank.unwrap_or(0)),
        }
    }

    fn invalid(&self, message: impl Into<String>) -> CorpusError {
        CorpusError::InvalidParameters {
            family: self.family,
            message: message.into(),
        }
    }

    fn prime_power(&self, e: u32) -> Result<u32, CorpusError> {
        self.prime
            .checked_pow(e)
            .ok_or_else(|| self.invalid(format!("{}^{} overflows", self.prime, e)))
    }
}

/// The presentation for a family, without building the group.
pub fn presentation(spec: &FamilySpec) -> Result<PcPresentation, CorpusError> {
    let p = spec.prime;
    if !is_prime(p) {
        return Err(spec.invalid(format!("{p} is not prime")));
    }
    if let Some((text, fixed_p)) = spec.family.fixture() {
        if p != fixed_p {
            return Err(spec.invalid(format!("this fixture is a {fixed_p}-group")));
        }
        return Ok(parse_presentation(text).expect("shipped fixture parses"));
    }
    match spec.family {
        Family::Cyclic => {
            let e = spec
                .rank
                .ok_or_else(|| spec.invalid("needs an exponent e (--r)"))?;
            if e == 0 {
                return Err(spec.invalid("exponent must be at least 1"));
            }
            Ok(PcPresentation::with_generators(
                p,
                [("a", spec.prime_power(e)?)],
            )?)
        }
        Family::Abelian => {
            if spec.exponents.is_empty() || spec.exponents.contains(&0) {
                return Err(spec.invalid("needs a nonempty list of positive exponents"));
            }
            let gens = spec
                .exponents
                .iter()
                .enumerate()
                .map(|(i, &e)| Ok((format!("a{}", i + 1), spec.prime_power(e)?)))
                .collect::<Result<Vec<_>, CorpusError>>()?;
            Ok(PcPresentation::with_generators(p, gens)?)
        }
        Family::Extraspecial => {
            if p == 2 {
                return Err(spec.invalid("exponent-p extraspecial groups need an odd prime"));
            }
            let mut pres = PcPresentation::with_generators(p, [("x", p), ("y", p), ("z", p)])?;
            pres.set_commutator(1, 0, Word::generator(2))?;
            Ok(pres)
        }
        Family::Higman => {
            let r = spec
                .rank
                .ok_or_else(|| spec.invalid("needs a rank r (--r)"))? as usize;
            if p == 2 {
                return Err(spec.invalid("needs an odd prime"));
            }
            if r == 0 {
                return Err(spec.invalid("rank must be at least 1"));
            }
            let mut gens: Vec<(String, u32)> = Vec::new();
            for i in 1..=r {
                gens.push((format!("x{i}"), p));
            }
            for i in 1..=r {
                gens.push((format!("y{i}"), p));
            }
            let mut z_index = std::collections::BTreeMap::new();
            for j in 1..=r {
                for i in 1..j {
                    z_index.insert((j, i), gens.len());
                    gens.push((format!("z{j}_{i}"), p));
                }
            }
            let mut pres = PcPresentation::with_generators(p, gens)?;
            for i in 0..r {
                pres.set_power_tail(i, Word::generator(r + i))?;
            }
            for (&(j, i), &z) in &z_index {
                pres.set_commutator(j - 1, i - 1, Word::generator(z))?;
            }
            Ok(pres)
        }
        Family::Paper6561 | Family::Paper729 | Family::Paper256 => unreachable!(),
    }
}

/// Builds and consistency-checks the group.
pub fn build(spec: &FamilySpec) -> Result<PcGroup, CorpusError> {
    Ok(PcGroup::new(presentation(spec)?)?)
}

/// The shipped fixture files as `(file name, contents)`.
pub fn fixture_files() -> [(&'static str, &'static str); 3] {
    [
        ("paper_6561.pqp", PAPER_6561),
        ("paper_729.pqp", PAPER_729),
        ("paper_256.pqp", PAPER_256),
    ]
}

/// Groups the test suites sweep over: the three fixtures plus small members
/// of each family.
pub fn standard_corpus() -> Vec<FamilySpec> {
    vec![
        FamilySpec::paper_6561(),
        FamilySpec::paper_729(),
        FamilySpec::paper_256(),
        FamilySpec::cyclic(3, 2),
        FamilySpec::cyclic(2, 3),
        FamilySpec::abelian(3, &[1, 1]),
        FamilySpec::abelian(3, &[2, 1]),
        FamilySpec::abelian(2, &[2, 1, 1]),
        FamilySpec::abelian(5, &[2, 1]),
        FamilySpec::extraspecial(3),
        FamilySpec::extraspecial(5),
        FamilySpec::higman(3, 2),
        FamilySpec::higman(3, 3),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::view::GroupView;

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!("klein".parse::<Family>().is_err());
    }

    #[test]
    fn orders() {
        assert_eq!(build(&FamilySpec::cyclic(3, 2)).unwrap().order(), 9);
        assert_eq!(build(&FamilySpec::abelian(3, &[2, 1])).unwrap().order(), 27);
        assert_eq!(build(&FamilySpec::extraspecial(5)).unwrap().order(), 125);
        assert_eq!(build(&FamilySpec::higman(3, 2)).unwrap().order(), 243);
        assert_eq!(
            build(&FamilySpec::higman(3, 3)).unwrap().order(),
            3usize.pow(9)
        );
        assert_eq!(build(&FamilySpec::higman(5, 1)).unwrap().order(), 25);
    }

    #[test]
    fn bad_parameters() {
        assert!(build(&FamilySpec::extraspecial(2)).is_err());
        assert!(build(&FamilySpec::higman(2, 2)).is_err());
        assert!(build(&FamilySpec::higman(3, 0)).is_err());
        assert!(build(&FamilySpec::abelian(3, &[])).is_err());
        assert!(build(&FamilySpec::cyclic(4, 2)).is_err());
        assert!(build(&FamilySpec::cyclic(3, 40)).is_err());
        let wrong = FamilySpec {
            prime: 5,
            ..FamilySpec::paper_729()
        };
        assert!(build(&wrong).is_err());
    }

    #[test]
    fn fixtures_match_build() {
        for (name, text) in fixture_files() {
            let spec = FamilySpec::fixed(name.trim_end_matches(".pqp").parse().unwrap(), 0);
            let spec = FamilySpec {
                prime: parse_presentation(text).unwrap().prime(),
                ..spec
            };
            let built = presentation(&spec).unwrap();
            assert_eq!(built.to_text(), parse_presentation(text).unwrap().to_text());
        }
    }

    #[test]
    fn higman_text_is_stable() {
        let a = presentation(&FamilySpec::higman(3, 2)).unwrap().to_text();
        let b = presentation(&FamilySpec::higman(3, 2)).unwrap().to_text();
        assert_eq!(a, b);
        assert!(a.contains("conj x2 x1 = x2 z2_1"));
        assert!(a.contains("pow x1 = y1"));
    }
}
