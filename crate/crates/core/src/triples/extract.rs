use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::cograph::{Event, EventLabeledTree};
use crate::model::{Triple, TripleSet};

/// Species triples contributed by one gene tree: (σ(a)σ(b)|σ(c)) for every
/// displayed (ab|c) over three species whose root lca(a,b,c) is a speciation.
pub fn tree_species_triples(t: &EventLabeledTree) -> BTreeSet<Triple> {
    let m = t.tree().lca_matrix();
    let sp: Vec<_> = m.leaves.iter().map(|g| t.species().get(g).expect("leaf has a species")).collect();
    let n = m.leaves.len();
    let mut out = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            if sp[i] == sp[j] {
                continue;
            }
            for k in j + 1..n {
                if sp[k] == sp[i] || sp[k] == sp[j] {
                    continue;
                }
                let Some((x, y, z)) = m.resolve(i, j, k) else { continue };
                if t.event(m.get(x, z)) == Some(Event::Speciation) {
                    let r = Triple::new(sp[x].clone(), sp[y].clone(), sp[z].clone()).expect("distinct species");
                    out.insert(r);
                }
            }
        }
    }
    out
}

/// Species triples of a collection of gene trees; each triple weighs the
/// number of trees that contribute it. The universe is every species seen.
pub fn extract_species_triples(trees: &[EventLabeledTree]) -> TripleSet {
    let per_tree: Vec<BTreeSet<Triple>> = trees.par_iter().map(tree_species_triples).collect();
    let mut out = TripleSet::with_universe(trees.iter().flat_map(|t| t.species().species()));
    for set in per_tree {
        for r in set {
            out.add(r, 1.0);
        }
    }
    out
}
