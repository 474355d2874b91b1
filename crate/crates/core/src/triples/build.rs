use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::model::{Label, RootedTree, Subtree, TripleSet};

/// The graph [R, 𝒮]: x–y whenever some (xy|z) ∈ R has z ∈ 𝒮.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AhoGraph {
    pub vertices: Vec<Label>,
    pub edges: BTreeSet<(Label, Label)>,
}

impl AhoGraph {
    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<Label>> {
        let idx: HashMap<&Label, usize> = self.vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let mut uf = UnionFind::new(self.vertices.len());
        for (a, b) in &self.edges {
            uf.union(idx[a], idx[b]);
        }
        let mut groups: Vec<Vec<Label>> = Vec::new();
        let mut slot: HashMap<usize, usize> = HashMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            let r = uf.find(i);
            let k = *slot.entry(r).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[k].push(v.clone());
        }
        groups
    }
}

pub fn aho_graph(r: &TripleSet, s: &BTreeSet<Label>) -> AhoGraph {
    let mut edges = BTreeSet::new();
    for t in r.triples() {
        let (a, b) = t.pair();
        if s.contains(a) && s.contains(b) && s.contains(t.outgroup()) {
            edges.insert((a.clone(), b.clone()));
        }
    }
    AhoGraph { vertices: s.iter().cloned().collect(), edges }
}

/// Outcome of BUILD: the Aho tree, or a leaf set whose Aho graph is connected.
#[derive(Debug, Clone, PartialEq)]
pub enum ConsistencyReport {
    Consistent(RootedTree),
    Inconsistent(Vec<Label>),
}

impl ConsistencyReport {
    pub fn is_consistent(&self) -> bool {
        matches!(self, ConsistencyReport::Consistent(_))
    }

    pub fn tree(&self) -> Option<&RootedTree> {
        match self {
            ConsistencyReport::Consistent(t) => Some(t),
            ConsistencyReport::Inconsistent(_) => None,
        }
    }

    pub fn into_result(self) -> Result<RootedTree> {
        match self {
            ConsistencyReport::Consistent(t) => Ok(t),
            ConsistencyReport::Inconsistent(w) => Err(Error::Inconsistent(w)),
        }
    }
}

/// BUILD over `leaves` ∪ the universe of `r`.
pub fn build(r: &TripleSet, leaves: &BTreeSet<Label>) -> ConsistencyReport {
    let all: BTreeSet<Label> = leaves.iter().chain(r.universe()).cloned().collect();
    let labels: Vec<Label> = all.into_iter().collect();
    if labels.is_empty() {
        return ConsistencyReport::Inconsistent(Vec::new());
    }
    let idx: HashMap<&Label, usize> = labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let triples: Vec<[usize; 3]> = r
        .triples()
        .map(|t| {
            let (a, b) = t.pair();
            [idx[a], idx[b], idx[t.outgroup()]]
        })
        .collect();
    match build_indexed(labels.len(), &triples) {
        Ok(shape) => {
            let shape = to_labels(shape, &labels);
            ConsistencyReport::Consistent(RootedTree::new(shape).expect("BUILD yields a phylogenetic tree"))
        }
        Err(w) => ConsistencyReport::Inconsistent(w.into_iter().map(|i| labels[i].clone()).collect()),
    }
}

/// Aho(R) on the universe of `r`.
pub fn aho_tree(r: &TripleSet) -> ConsistencyReport {
    build(r, &BTreeSet::new())
}

pub fn is_consistent(r: &TripleSet) -> bool {
    aho_tree(r).is_consistent()
}

pub(crate) enum Shape {
    Leaf(usize),
    Inner(Vec<Shape>),
}

fn to_labels(s: Shape, labels: &[Label]) -> Subtree<()> {
    match s {
        Shape::Leaf(i) => Subtree::Leaf(labels[i].clone()),
        Shape::Inner(kids) => Subtree::Inner((), kids.into_iter().map(|k| to_labels(k, labels)).collect()),
    }
}

/// BUILD on leaves `0..n`; triples are `[x, y, z]` meaning (xy|z).
pub(crate) fn build_indexed(n: usize, triples: &[[usize; 3]]) -> std::result::Result<Shape, Vec<usize>> {
    let mut comp = vec![usize::MAX; n];
    let mut uf = UnionFind::new(n);
    recurse((0..n).collect(), (0..triples.len()).collect(), triples, &mut comp, &mut uf)
}

fn recurse(
    set: Vec<usize>,
    active: Vec<usize>,
    triples: &[[usize; 3]],
    comp: &mut [usize],
    uf: &mut UnionFind,
) -> std::result::Result<Shape, Vec<usize>> {
    if set.len() == 1 {
        return Ok(Shape::Leaf(set[0]));
    }
    for &v in &set {
        uf.reset(v);
    }
    for &t in &active {
        let [x, y, _] = triples[t];
        uf.union(x, y);
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_slot: HashMap<usize, usize> = HashMap::new();
    for &v in &set {
        let r = uf.find(v);
        let k = *root_slot.entry(r).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[k].push(v);
        comp[v] = k;
    }
    if groups.len() == 1 {
        return Err(set);
    }
    let mut sub: Vec<Vec<usize>> = vec![Vec::new(); groups.len()];
    for &t in &active {
        let [x, y, z] = triples[t];
        if comp[x] == comp[z] && comp[y] == comp[z] {
            sub[comp[x]].push(t);
        }
    }
    let mut kids = Vec::with_capacity(groups.len());
    for (g, s) in groups.into_iter().zip(sub) {
        kids.push(recurse(g, s, triples, comp, uf)?);
    }
    Ok(Shape::Inner(kids))
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn reset(&mut self, v: usize) {
        self.parent[v] = v;
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}
