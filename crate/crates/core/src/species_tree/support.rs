use serde::Serialize;

use crate::model::{NodeId, RootedTree, Triple, TripleSet};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Support {
    pub value: f64,
    /// False when no triple bears on the value; it is then reported as 1.
    pub supported: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Supports {
    pub global: Support,
    /// Indexed by node id; `None` on leaves.
    pub nodes: Vec<Option<Support>>,
}

fn ratio<'a>(triples: impl Iterator<Item = &'a Triple>, weights: &TripleSet) -> Support {
    let (mut num, mut den) = (0.0, 0.0);
    for t in triples {
        let w = weights.weight(t);
        let [a1, a2] = t.alternatives();
        num += w;
        den += w + weights.weight(&a1) + weights.weight(&a2);
    }
    if den > 0.0 {
        Support { value: num / den, supported: true }
    } else {
        Support { value: 1.0, supported: false }
    }
}

/// Global support over `selected` and subtree supports over the triples the
/// tree displays with their pair below v and outgroup outside, all weighed
/// by `extracted`.
pub fn support_values(tree: &RootedTree, selected: &TripleSet, extracted: &TripleSet) -> Supports {
    let global = ratio(selected.triples(), extracted);
    let displayed = tree.displayed_triples();
    let clusters = tree.clusters();
    let nodes = tree
        .node_ids()
        .map(|v: NodeId| {
            if tree.is_leaf(v) {
                return None;
            }
            let below = &clusters[v];
            let sv = displayed.triples().filter(|t| {
                let (a, b) = t.pair();
                below.contains(a) && below.contains(b) && !below.contains(t.outgroup())
            });
            Some(ratio(sv, extracted))
        })
        .collect();
    Supports { global, nodes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{newick, tr};

    #[test]
    fn conflict_free_is_one() {
        let t = newick::parse("((a,b),c);").unwrap();
        let s: TripleSet = [tr("a", "b", "c")].into_iter().collect();
        let sup = support_values(&t, &s, &s);
        assert_eq!(sup.global, Support { value: 1.0, supported: true });
        assert_eq!(sup.nodes[1], Some(Support { value: 1.0, supported: true }));
        // the root has no outgroup, so nothing bears on it
        assert_eq!(sup.nodes[0], Some(Support { value: 1.0, supported: false }));
    }

    #[test]
    fn three_to_one_to_one() {
        let t = newick::parse("((a,b),c);").unwrap();
        let mut all = TripleSet::new();
        all.insert(tr("a", "b", "c"), 3.0);
        all.insert(tr("a", "c", "b"), 1.0);
        all.insert(tr("b", "c", "a"), 1.0);
        let sel: TripleSet = [tr("a", "b", "c")].into_iter().collect();
        let sup = support_values(&t, &sel, &all);
        assert_eq!(sup.global.value, 0.6);
        assert_eq!(sup.nodes[1].unwrap().value, 0.6);
    }
}
