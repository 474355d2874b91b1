use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::Label;

/// A laminar family of clusters over a leaf universe.
///
/// Always contains the universe and every singleton; any two clusters
/// p, q satisfy p ∩ q ∈ {p, q, ∅}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hierarchy {
    universe: BTreeSet<Label>,
    clusters: BTreeSet<BTreeSet<Label>>,
}

impl Hierarchy {
    /// Adds the universe and singletons, drops empty clusters, and rejects
    /// incompatible pairs or clusters that leave the universe.
    pub fn new(universe: BTreeSet<Label>, clusters: impl IntoIterator<Item = BTreeSet<Label>>) -> Result<Self> {
        let mut set: BTreeSet<BTreeSet<Label>> = BTreeSet::new();
        for c in clusters {
            if c.is_empty() {
                continue;
            }
            if !c.is_subset(&universe) {
                return Err(Error::ClusterOutsideUniverse(c.into_iter().collect()));
            }
            set.insert(c);
        }
        if !universe.is_empty() {
            set.insert(universe.clone());
        }
        for l in &universe {
            set.insert(BTreeSet::from([l.clone()]));
        }
        let list: Vec<&BTreeSet<Label>> = set.iter().collect();
        for (i, p) in list.iter().enumerate() {
            for q in &list[i + 1..] {
                if !compatible(p, q) {
                    return Err(Error::IncompatibleClusters(
                        p.iter().cloned().collect(),
                        q.iter().cloned().collect(),
                    ));
                }
            }
        }
        Ok(Hierarchy { universe, clusters: set })
    }

    pub fn universe(&self) -> &BTreeSet<Label> {
        &self.universe
    }

    pub fn clusters(&self) -> &BTreeSet<BTreeSet<Label>> {
        &self.clusters
    }

    /// Clusters other than the universe and singletons.
    pub fn nontrivial(&self) -> impl Iterator<Item = &BTreeSet<Label>> {
        self.clusters.iter().filter(|c| c.len() > 1 && c.len() < self.universe.len())
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn contains(&self, c: &BTreeSet<Label>) -> bool {
        self.clusters.contains(c)
    }
}

/// p ∩ q ∈ {p, q, ∅}.
pub fn compatible(p: &BTreeSet<Label>, q: &BTreeSet<Label>) -> bool {
    p.is_disjoint(q) || p.is_subset(q) || q.is_subset(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{label, RootedTree};

    fn set(xs: &[&str]) -> BTreeSet<Label> {
        xs.iter().map(|x| label(x)).collect()
    }

    #[test]
    fn builds_tree_from_clusters() {
        let h = Hierarchy::new(set(&["a", "b", "c"]), [set(&["a", "b"])]).unwrap();
        assert_eq!(h.len(), 5);
        let t = RootedTree::from_hierarchy(&h).unwrap();
        assert_eq!(t, crate::model::newick::parse("((a,b),c);").unwrap());
    }

    #[test]
    fn incompatible_pair_is_reported() {
        let err = Hierarchy::new(set(&["a", "b", "c"]), [set(&["a", "b"]), set(&["b", "c"])]).unwrap_err();
        match err {
            Error::IncompatibleClusters(p, q) => {
                assert_eq!(p, vec![label("a"), label("b")]);
                assert_eq!(q, vec![label("b"), label("c")]);
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn singletons_and_universe_give_a_star() {
        let h = Hierarchy::new(set(&["a", "b", "c", "d"]), []).unwrap();
        let t = RootedTree::from_hierarchy(&h).unwrap();
        assert_eq!(t.inner_count(), 1);
        assert_eq!(t.children(t.root()).len(), 4);
    }
}
