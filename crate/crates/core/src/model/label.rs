use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An opaque leaf token naming a gene or a species.
///
/// Tokens are non-empty and never contain whitespace or the Newick
/// metacharacters `(`, `)`, `,`, `;`, `:`, so trees round-trip through
/// Newick without quoting. Ordering is plain lexicographic byte order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(Arc<str>);

pub type GeneId = Label;
pub type SpeciesId = Label;

impl Label {
    pub fn new(s: &str) -> Result<Self> {
        if s.is_empty() || s.chars().any(|c| c.is_whitespace() || "(),;:".contains(c)) {
            return Err(Error::InvalidLabel(s.to_string()));
        }
        Ok(Label(Arc::from(s)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Label::new(s)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Label::new(&s).map_err(serde::de::Error::custom)
    }
}

/// Convenience for tests and literals; panics on an invalid token.
pub fn label(s: &str) -> Label {
    Label::new(s).unwrap_or_else(|e| panic!("{e}"))
}

/// Total gene → species assignment.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpeciesMap {
    map: BTreeMap<GeneId, SpeciesId>,
}

impl SpeciesMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, gene: GeneId, species: SpeciesId) -> Option<SpeciesId> {
        self.map.insert(gene, species)
    }

    pub fn get(&self, gene: &Label) -> Option<&SpeciesId> {
        self.map.get(gene)
    }

    pub fn species_of(&self, gene: &Label) -> Result<&SpeciesId> {
        self.map.get(gene).ok_or_else(|| Error::MissingSpecies(gene.clone()))
    }

    pub fn contains(&self, gene: &Label) -> bool {
        self.map.contains_key(gene)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GeneId, &SpeciesId)> {
        self.map.iter()
    }

    pub fn genes(&self) -> impl Iterator<Item = &GeneId> {
        self.map.keys()
    }

    /// The image σ(𝔊), sorted.
    pub fn species(&self) -> Vec<SpeciesId> {
        let mut s: Vec<_> = self.map.values().cloned().collect();
        s.sort();
        s.dedup();
        s
    }
}

impl FromIterator<(GeneId, SpeciesId)> for SpeciesMap {
    fn from_iter<I: IntoIterator<Item = (GeneId, SpeciesId)>>(iter: I) -> Self {
        SpeciesMap { map: iter.into_iter().collect() }
    }
}
