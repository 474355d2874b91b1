use std::collections::{btree_map, BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Label;

/// A rooted triple (xy|z). The ingroup pair is stored sorted, so
/// (xy|z) and (yx|z) are the same value.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Triple {
    a: Label,
    b: Label,
    out: Label,
}

impl Triple {
    pub fn new(x: Label, y: Label, z: Label) -> Result<Self> {
        if x == y || x == z || y == z {
            return Err(Error::DegenerateTriple(x, y, z));
        }
        let (a, b) = if x < y { (x, y) } else { (y, x) };
        Ok(Triple { a, b, out: z })
    }

    pub fn pair(&self) -> (&Label, &Label) {
        (&self.a, &self.b)
    }

    pub fn outgroup(&self) -> &Label {
        &self.out
    }

    pub fn leaves(&self) -> [&Label; 3] {
        [&self.a, &self.b, &self.out]
    }

    /// The leaf trio, sorted.
    pub fn trio(&self) -> [Label; 3] {
        let mut t = [self.a.clone(), self.b.clone(), self.out.clone()];
        t.sort();
        t
    }

    pub fn has_leaf(&self, l: &Label) -> bool {
        &self.a == l || &self.b == l || &self.out == l
    }

    /// The three orientations of a sorted trio [x, y, z]: (xy|z), (xz|y), (yz|x).
    pub fn orientations(trio: &[Label; 3]) -> [Triple; 3] {
        let [x, y, z] = trio.clone();
        [
            Triple { a: x.clone(), b: y.clone(), out: z.clone() },
            Triple { a: x.clone(), b: z.clone(), out: y.clone() },
            Triple { a: y, b: z, out: x },
        ]
    }

    /// The other two orientations of this triple's trio.
    pub fn alternatives(&self) -> [Triple; 2] {
        let o = Triple::orientations(&self.trio());
        let mut alt = o.into_iter().filter(|t| t != self);
        [alt.next().unwrap(), alt.next().unwrap()]
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{}|{})", self.a, self.b, self.out)
    }
}

impl fmt::Debug for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Weighted set of rooted triples over an explicit leaf universe.
///
/// The universe always contains every leaf of every stored triple, and may
/// contain further leaves (isolated as far as the triples are concerned).
#[derive(Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TripleSet {
    weights: BTreeMap<Triple, f64>,
    universe: BTreeSet<Label>,
}

impl TripleSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_universe(leaves: impl IntoIterator<Item = Label>) -> Self {
        TripleSet { weights: BTreeMap::new(), universe: leaves.into_iter().collect() }
    }

    /// Insert (or overwrite) a triple with the given weight.
    pub fn insert(&mut self, t: Triple, weight: f64) {
        debug_assert!(weight >= 0.0);
        for l in t.leaves() {
            if !self.universe.contains(l) {
                self.universe.insert(l.clone());
            }
        }
        self.weights.insert(t, weight);
    }

    /// Add `weight` to the triple's current weight (0 if absent).
    pub fn add(&mut self, t: Triple, weight: f64) {
        let w = self.weight(&t) + weight;
        self.insert(t, w);
    }

    pub fn remove(&mut self, t: &Triple) -> Option<f64> {
        self.weights.remove(t)
    }

    pub fn extend_universe(&mut self, leaves: impl IntoIterator<Item = Label>) {
        self.universe.extend(leaves);
    }

    pub fn contains(&self, t: &Triple) -> bool {
        self.weights.contains_key(t)
    }

    /// Weight of a triple; absent triples weigh 0.
    pub fn weight(&self, t: &Triple) -> f64 {
        self.weights.get(t).copied().unwrap_or(0.0)
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.values().sum()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, Triple, f64> {
        self.weights.iter()
    }

    pub fn triples(&self) -> impl Iterator<Item = &Triple> {
        self.weights.keys()
    }

    pub fn universe(&self) -> &BTreeSet<Label> {
        &self.universe
    }

    /// L_R: leaves that occur in at least one triple.
    pub fn leaves(&self) -> BTreeSet<Label> {
        self.weights.keys().flat_map(|t| t.leaves()).cloned().collect()
    }

    pub fn is_subset(&self, other: &TripleSet) -> bool {
        self.triples().all(|t| other.contains(t))
    }

    /// Same triples with weight 1.
    pub fn unweighted(&self) -> TripleSet {
        TripleSet {
            weights: self.weights.keys().map(|t| (t.clone(), 1.0)).collect(),
            universe: self.universe.clone(),
        }
    }

    /// Triples in both sets, weights taken from `self`.
    pub fn intersection(&self, other: &TripleSet) -> TripleSet {
        TripleSet {
            weights: self.weights.iter().filter(|(t, _)| other.contains(t)).map(|(t, w)| (t.clone(), *w)).collect(),
            universe: self.universe.clone(),
        }
    }

    /// Number of stored orientations for every trio touched by the set.
    pub fn trio_counts(&self) -> BTreeMap<[Label; 3], usize> {
        let mut m = BTreeMap::new();
        for t in self.triples() {
            *m.entry(t.trio()).or_insert(0) += 1;
        }
        m
    }
}

impl fmt::Debug for TripleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.weights.iter().map(|(t, w)| (t.to_string(), w))).finish()
    }
}

impl FromIterator<Triple> for TripleSet {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        let mut s = TripleSet::new();
        for t in iter {
            s.insert(t, 1.0);
        }
        s
    }
}

impl<'a> IntoIterator for &'a TripleSet {
    type Item = (&'a Triple, &'a f64);
    type IntoIter = btree_map::Iter<'a, Triple, f64>;

    fn into_iter(self) -> Self::IntoIter {
        self.weights.iter()
    }
}

/// Shorthand used throughout the tests: `tr("a", "b", "c")` is (ab|c).
pub fn tr(x: &str, y: &str, z: &str) -> Triple {
    use crate::model::label;
    Triple::new(label(x), label(y), label(z)).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_is_unordered() {
        assert_eq!(tr("a", "b", "c"), tr("b", "a", "c"));
        assert_ne!(tr("a", "b", "c"), tr("a", "c", "b"));
        assert!(Triple::new(crate::model::label("a"), crate::model::label("a"), crate::model::label("b")).is_err());
    }

    #[test]
    fn alternatives_cover_the_trio() {
        let t = tr("b", "c", "a");
        let alts = t.alternatives();
        assert!(alts.contains(&tr("a", "b", "c")));
        assert!(alts.contains(&tr("a", "c", "b")));
        assert!(!alts.contains(&t));
    }

    #[test]
    fn weights_accumulate_and_universe_tracks_leaves() {
        let mut s = TripleSet::with_universe([crate::model::label("q")]);
        s.add(tr("a", "b", "c"), 2.0);
        s.add(tr("a", "b", "c"), 1.0);
        assert_eq!(s.weight(&tr("a", "b", "c")), 3.0);
        assert_eq!(s.weight(&tr("a", "c", "b")), 0.0);
        assert_eq!(s.universe().len(), 4);
        assert_eq!(s.leaves().len(), 3);
    }
}
