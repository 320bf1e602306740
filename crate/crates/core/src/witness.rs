//! Counterexample witnesses rendered as words over generator names.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::view::{Elem, GroupView};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NamedWord {
    pub name: String,
    pub word: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub elements: Vec<NamedWord>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub parameters: BTreeMap<String, i64>,
    pub note: String,
}

impl Witness {
    pub fn new(note: impl Into<String>) -> Self {
        Self {
            note: note.into(),
            ..Self::default()
        }
    }

    pub fn with<G: GroupView + ?Sized>(mut self, g: &G, name: &str, x: Elem) -> Self {
        self.elements.push(NamedWord {
            name: name.to_string(),
            word: g.describe(x),
        });
        self
    }

    pub fn param(mut self, name: &str, value: i64) -> Self {
        self.parameters.insert(name.to_string(), value);
        self
    }

    /// Word recorded under `name`.
    pub fn word(&self, name: &str) -> Option<&str> {
        self.elements
            .iter()
            .find(|w| w.name == name)
            .map(|w| w.word.as_str())
    }
}
