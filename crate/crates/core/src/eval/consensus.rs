use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::model::{Hierarchy, Label, RootedTree};

/// Tree of the clusters found in more than half of `trees`.
pub fn majority_consensus(trees: &[RootedTree]) -> Result<RootedTree> {
    let first = trees.first().ok_or_else(|| Error::Internal("consensus of no trees".into()))?;
    let universe: BTreeSet<Label> = first.leaf_labels().into_iter().collect();
    let mut counts: BTreeMap<BTreeSet<Label>, usize> = BTreeMap::new();
    for t in trees {
        let h = t.hierarchy();
        if h.universe() != &universe {
            return Err(Error::LeafSetMismatch(
                universe.difference(h.universe()).cloned().collect(),
                h.universe().difference(&universe).cloned().collect(),
            ));
        }
        for c in h.nontrivial() {
            *counts.entry(c.clone()).or_default() += 1;
        }
    }
    let kept = counts.into_iter().filter(|&(_, k)| 2 * k > trees.len()).map(|(c, _)| c);
    RootedTree::from_hierarchy(&Hierarchy::new(universe, kept)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::newick::{parse, write};

    #[test]
    fn majority_rule() {
        let t = |s| parse(s).unwrap();
        let abc = t("((a,b),c);");
        assert_eq!(majority_consensus(&[abc.clone(), abc.clone(), t("(a,b,c);")]).unwrap(), abc);
        let split = [abc, t("((a,c),b);"), t("((b,c),a);")];
        assert_eq!(write(&majority_consensus(&split).unwrap()), "(a,b,c);");
        assert!(majority_consensus(&[t("(a,b,c);"), t("(a,b,d);")]).is_err());
    }
}
