//! Rooted phylogenetic trees in canonical form.
//!
//! Every tree is stored as an arena in preorder with children sorted by the
//! smallest leaf label below them. Two trees are isomorphic (as leaf-labelled
//! trees) exactly when their arenas compare equal.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::model::{Hierarchy, Label, Triple, TripleSet};

pub type NodeId = usize;

/// Nested tree shape used to construct trees; inner vertices carry a payload.
#[derive(Debug, Clone, PartialEq)]
pub enum Subtree<T = ()> {
    Leaf(Label),
    Inner(T, Vec<Subtree<T>>),
}

impl Subtree<()> {
    pub fn leaf(name: &str) -> Self {
        Subtree::Leaf(crate::model::label(name))
    }

    pub fn inner(children: Vec<Subtree<()>>) -> Self {
        Subtree::Inner((), children)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Node {
    parent: Option<NodeId>,
    children: Vec<NodeId>,
    label: Option<Label>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RootedTree {
    nodes: Vec<Node>,
}

impl RootedTree {
    /// Build a canonical tree, dropping inner payloads.
    pub fn new(shape: Subtree<()>) -> Result<Self> {
        Self::with_payload(shape).map(|(t, _)| t)
    }

    /// Build a canonical tree and return the inner payloads indexed by node.
    pub fn with_payload<T>(shape: Subtree<T>) -> Result<(Self, Vec<Option<T>>)> {
        let mut seen = BTreeSet::new();
        validate(&shape, &mut seen)?;
        let shape = canonicalize(shape).1;
        let mut nodes = Vec::new();
        let mut payload = Vec::new();
        flatten(shape, None, &mut nodes, &mut payload);
        Ok((RootedTree { nodes }, payload))
    }

    /// A star tree: one root with every label as a child.
    pub fn star(leaves: impl IntoIterator<Item = Label>) -> Result<Self> {
        let mut kids: Vec<Subtree> = leaves.into_iter().map(Subtree::Leaf).collect();
        match kids.len() {
            0 => Err(Error::Internal("star tree on zero leaves".into())),
            1 => Self::new(kids.pop().unwrap()),
            _ => Self::new(Subtree::Inner((), kids)),
        }
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_ids(&self) -> std::ops::Range<NodeId> {
        0..self.nodes.len()
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        self.nodes[v].parent
    }

    pub fn children(&self, v: NodeId) -> &[NodeId] {
        &self.nodes[v].children
    }

    pub fn label(&self, v: NodeId) -> Option<&Label> {
        self.nodes[v].label.as_ref()
    }

    pub fn is_leaf(&self, v: NodeId) -> bool {
        self.nodes[v].children.is_empty()
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.children.is_empty()).count()
    }

    pub fn inner_count(&self) -> usize {
        self.nodes.len() - self.leaf_count()
    }

    pub fn inner_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.node_ids().filter(|&v| !self.is_leaf(v))
    }

    /// Leaf node ids in preorder.
    pub fn leaf_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.node_ids().filter(|&v| self.is_leaf(v))
    }

    /// Leaf labels in sorted order.
    pub fn leaf_labels(&self) -> Vec<Label> {
        let mut v: Vec<Label> = self.nodes.iter().filter_map(|n| n.label.clone()).collect();
        v.sort();
        v
    }

    pub fn find_leaf(&self, name: &Label) -> Option<NodeId> {
        self.nodes.iter().position(|n| n.label.as_ref() == Some(name))
    }

    /// Every inner vertex has exactly two children.
    pub fn is_binary(&self) -> bool {
        self.nodes.iter().all(|n| n.children.is_empty() || n.children.len() == 2)
    }

    pub fn depths(&self) -> Vec<usize> {
        let mut d = vec![0; self.nodes.len()];
        // preorder: parents precede children
        for v in 1..self.nodes.len() {
            d[v] = d[self.nodes[v].parent.unwrap()] + 1;
        }
        d
    }

    /// Leaf set L(v) for every vertex.
    pub fn clusters(&self) -> Vec<BTreeSet<Label>> {
        let mut out: Vec<BTreeSet<Label>> = vec![BTreeSet::new(); self.nodes.len()];
        for v in (0..self.nodes.len()).rev() {
            if let Some(l) = &self.nodes[v].label {
                out[v].insert(l.clone());
            }
            if let Some(p) = self.nodes[v].parent {
                let child = std::mem::take(&mut out[v]);
                out[p].extend(child.iter().cloned());
                out[v] = child;
            }
        }
        out
    }

    /// Least common ancestor of a non-empty set of leaves.
    pub fn lca(&self, leaves: &[Label]) -> Result<NodeId> {
        let mut ids = Vec::with_capacity(leaves.len());
        for l in leaves {
            ids.push(self.find_leaf(l).ok_or_else(|| Error::UnknownLeaf(l.clone()))?);
        }
        let Some(&first) = ids.first() else {
            return Err(Error::Internal("lca of an empty leaf set".into()));
        };
        let depth = self.depths();
        Ok(ids[1..].iter().fold(first, |a, &b| self.lca_nodes(a, b, &depth)))
    }

    pub fn lca_nodes(&self, mut a: NodeId, mut b: NodeId, depth: &[usize]) -> NodeId {
        while depth[a] > depth[b] {
            a = self.nodes[a].parent.unwrap();
        }
        while depth[b] > depth[a] {
            b = self.nodes[b].parent.unwrap();
        }
        while a != b {
            a = self.nodes[a].parent.unwrap();
            b = self.nodes[b].parent.unwrap();
        }
        a
    }

    /// Pairwise lca over leaves in sorted-label order.
    pub fn lca_matrix(&self) -> LcaMatrix {
        let mut leaves: Vec<(Label, NodeId)> = self
            .leaf_nodes()
            .map(|v| (self.nodes[v].label.clone().unwrap(), v))
            .collect();
        leaves.sort();
        let pos: HashMap<NodeId, usize> = leaves.iter().enumerate().map(|(i, &(_, v))| (v, i)).collect();
        let n = leaves.len();
        let mut lca = vec![0; n * n];
        // leaf positions below each vertex, built bottom-up
        let mut below: Vec<Vec<usize>> = vec![Vec::new(); self.nodes.len()];
        for v in (0..self.nodes.len()).rev() {
            if let Some(&i) = pos.get(&v) {
                below[v].push(i);
                lca[i * n + i] = v;
                continue;
            }
            let kids = self.nodes[v].children.clone();
            for (ci, &c) in kids.iter().enumerate() {
                for &d in &kids[ci + 1..] {
                    for &x in &below[c] {
                        for &y in &below[d] {
                            lca[x * n + y] = v;
                            lca[y * n + x] = v;
                        }
                    }
                }
            }
            let mut all = Vec::new();
            for &c in &kids {
                all.append(&mut below[c]);
            }
            below[v] = all;
        }
        LcaMatrix { leaves: leaves.into_iter().map(|(l, _)| l).collect(), lca, depth: self.depths() }
    }

    /// 𝔯(T): all triples (xy|z) with lca(x,y) strictly below lca(x,y,z).
    pub fn displayed_triples(&self) -> TripleSet {
        let m = self.lca_matrix();
        let mut out = TripleSet::with_universe(m.leaves.iter().cloned());
        let n = m.leaves.len();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if let Some((x, y, z)) = m.resolve(i, j, k) {
                        let t = Triple::new(m.leaves[x].clone(), m.leaves[y].clone(), m.leaves[z].clone())
                            .expect("distinct leaves");
                        out.insert(t, 1.0);
                    }
                }
            }
        }
        out
    }

    /// The hierarchy {L(v) | v ∈ V(T)}.
    pub fn hierarchy(&self) -> Hierarchy {
        let universe: BTreeSet<Label> = self.leaf_labels().into_iter().collect();
        Hierarchy::new(universe, self.clusters()).expect("clusters of a tree form a hierarchy")
    }

    /// Rebuild the unique tree whose vertex clusters are exactly `h`.
    pub fn from_hierarchy(h: &Hierarchy) -> Result<Self> {
        // Clusters sorted by decreasing size so every parent precedes its children.
        let mut clusters: Vec<&BTreeSet<Label>> = h.clusters().iter().collect();
        clusters.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        let mut parent = vec![None; clusters.len()];
        for i in 1..clusters.len() {
            // smallest strictly larger cluster containing this one
            for j in (0..i).rev() {
                if clusters[j].len() > clusters[i].len() && clusters[i].is_subset(clusters[j]) {
                    parent[i] = Some(j);
                    break;
                }
            }
            if parent[i].is_none() {
                return Err(Error::Internal("hierarchy without a containing cluster".into()));
            }
        }
        let mut kids: Vec<Vec<usize>> = vec![Vec::new(); clusters.len()];
        for (i, p) in parent.iter().enumerate() {
            if let Some(p) = p {
                kids[*p].push(i);
            }
        }
        fn shape(i: usize, clusters: &[&BTreeSet<Label>], kids: &[Vec<usize>]) -> Subtree<()> {
            if kids[i].is_empty() {
                Subtree::Leaf(clusters[i].iter().next().unwrap().clone())
            } else {
                Subtree::Inner((), kids[i].iter().map(|&c| shape(c, clusters, kids)).collect())
            }
        }
        Self::new(shape(0, &clusters, &kids))
    }

    /// Nested representation with a per-vertex payload.
    pub fn to_subtree<T>(&self, mut payload: impl FnMut(NodeId) -> T) -> Subtree<T> {
        fn go<T>(t: &RootedTree, v: NodeId, f: &mut impl FnMut(NodeId) -> T) -> Subtree<T> {
            match &t.nodes[v].label {
                Some(l) => Subtree::Leaf(l.clone()),
                None => {
                    let kids = t.nodes[v].children.iter().map(|&c| go(t, c, f)).collect();
                    Subtree::Inner(f(v), kids)
                }
            }
        }
        go(self, 0, &mut payload)
    }

    /// Resolve every multifurcation into a caterpillar over its children in
    /// canonical order, giving a binary tree that displays all of our triples.
    pub fn refine_binary(&self) -> Self {
        fn go(t: &RootedTree, v: NodeId) -> Subtree<()> {
            match &t.nodes[v].label {
                Some(l) => Subtree::Leaf(l.clone()),
                None => {
                    let mut kids = t.nodes[v].children.iter().map(|&c| go(t, c));
                    let first = kids.next().unwrap();
                    kids.fold(first, |acc, k| Subtree::Inner((), vec![acc, k]))
                }
            }
        }
        Self::new(go(self, 0)).expect("refinement of a valid tree")
    }

    /// Relabel leaves through `f`; the result is re-canonicalized.
    pub fn map_leaves(&self, f: impl Fn(&Label) -> Label) -> Result<Self> {
        fn go(t: &RootedTree, v: NodeId, f: &impl Fn(&Label) -> Label) -> Subtree<()> {
            match &t.nodes[v].label {
                Some(l) => Subtree::Leaf(f(l)),
                None => Subtree::Inner((), t.nodes[v].children.iter().map(|&c| go(t, c, f)).collect()),
            }
        }
        Self::new(go(self, 0, &f))
    }
}

/// Pairwise lca table over the sorted leaf list of a tree.
#[derive(Debug, Clone)]
pub struct LcaMatrix {
    pub leaves: Vec<Label>,
    lca: Vec<NodeId>,
    depth: Vec<usize>,
}

impl LcaMatrix {
    pub fn get(&self, i: usize, j: usize) -> NodeId {
        self.lca[i * self.leaves.len() + j]
    }

    pub fn depth_of(&self, v: NodeId) -> usize {
        self.depth[v]
    }

    /// For leaf positions i, j, k: `Some((x, y, z))` if the tree displays
    /// (xy|z), `None` if the trio is unresolved.
    pub fn resolve(&self, i: usize, j: usize, k: usize) -> Option<(usize, usize, usize)> {
        let dij = self.depth[self.get(i, j)];
        let dik = self.depth[self.get(i, k)];
        let djk = self.depth[self.get(j, k)];
        if dij > dik {
            Some((i, j, k))
        } else if dik > dij {
            Some((i, k, j))
        } else if djk > dij {
            Some((j, k, i))
        } else {
            None
        }
    }
}

fn validate<T>(s: &Subtree<T>, seen: &mut BTreeSet<Label>) -> Result<()> {
    match s {
        Subtree::Leaf(l) => {
            if !seen.insert(l.clone()) {
                return Err(Error::DuplicateLeaf(l.clone()));
            }
        }
        Subtree::Inner(_, kids) => {
            if kids.len() < 2 {
                return Err(Error::UnaryVertex);
            }
            for k in kids {
                validate(k, seen)?;
            }
        }
    }
    Ok(())
}

fn canonicalize<T>(s: Subtree<T>) -> (Label, Subtree<T>) {
    match s {
        Subtree::Leaf(l) => (l.clone(), Subtree::Leaf(l)),
        Subtree::Inner(p, kids) => {
            let mut kids: Vec<(Label, Subtree<T>)> = kids.into_iter().map(canonicalize).collect();
            kids.sort_by(|a, b| a.0.cmp(&b.0));
            let min = kids[0].0.clone();
            (min, Subtree::Inner(p, kids.into_iter().map(|k| k.1).collect()))
        }
    }
}

fn flatten<T>(s: Subtree<T>, parent: Option<NodeId>, nodes: &mut Vec<Node>, payload: &mut Vec<Option<T>>) {
    let id = nodes.len();
    if let Some(p) = parent {
        nodes[p].children.push(id);
    }
    match s {
        Subtree::Leaf(l) => {
            nodes.push(Node { parent, children: Vec::new(), label: Some(l) });
            payload.push(None);
        }
        Subtree::Inner(p, kids) => {
            nodes.push(Node { parent, children: Vec::new(), label: None });
            payload.push(Some(p));
            for k in kids {
                flatten(k, Some(id), nodes, payload);
            }
        }
    }
}

/// Count of vertices by outdegree, handy for quick shape assertions.
pub fn outdegree_histogram(t: &RootedTree) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for v in t.inner_nodes() {
        *h.entry(t.children(v).len()).or_insert(0) += 1;
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{label, newick};

    fn t(s: &str) -> RootedTree {
        newick::parse(s).unwrap()
    }

    #[test]
    fn children_are_sorted_by_smallest_leaf() {
        assert_eq!(t("(c,(b,a));"), t("((a,b),c);"));
        assert_ne!(t("((a,b),c);"), t("((a,c),b);"));
    }

    #[test]
    fn rejects_unary_and_duplicates() {
        assert!(matches!(
            RootedTree::new(Subtree::inner(vec![Subtree::leaf("a")])),
            Err(Error::UnaryVertex)
        ));
        assert!(matches!(
            RootedTree::new(Subtree::inner(vec![Subtree::leaf("a"), Subtree::leaf("a")])),
            Err(Error::DuplicateLeaf(_))
        ));
    }

    #[test]
    fn displayed_triples_small_cases() {
        let r = t("((a,b),c);").displayed_triples();
        assert_eq!(r.len(), 1);
        assert!(r.contains(&Triple::new(label("a"), label("b"), label("c")).unwrap()));
        assert!(t("(a,b,c);").displayed_triples().is_empty());
        assert!(t("(a,b);").displayed_triples().is_empty());
    }

    #[test]
    fn binary_five_leaf_tree_resolves_every_trio() {
        let tree = t("(((a,b),c),(d,e));");
        let r = tree.displayed_triples();
        assert_eq!(r.len(), 10);
        // oracle: lca via explicit ancestor lists
        let depth = tree.depths();
        let leaves = tree.leaf_labels();
        for x in &leaves {
            for y in &leaves {
                for z in &leaves {
                    if x >= y || x == z || y == z {
                        continue;
                    }
                    let xy = tree.lca(&[x.clone(), y.clone()]).unwrap();
                    let xyz = tree.lca(&[x.clone(), y.clone(), z.clone()]).unwrap();
                    let trip = Triple::new(x.clone(), y.clone(), z.clone()).unwrap();
                    assert_eq!(r.contains(&trip), depth[xy] > depth[xyz], "{trip}");
                }
            }
        }
    }

    #[test]
    fn lca_examples() {
        let tree = t("((a,b),c);");
        let ab = tree.lca(&[label("a"), label("b")]).unwrap();
        assert_eq!(tree.parent(ab), Some(tree.root()));
        assert!(!tree.is_leaf(ab));
        let a = tree.lca(&[label("a")]).unwrap();
        assert_eq!(tree.label(a), Some(&label("a")));
        assert_eq!(tree.lca(&[label("a"), label("c")]).unwrap(), tree.root());
        assert!(matches!(tree.lca(&[label("q")]), Err(Error::UnknownLeaf(_))));
    }

    #[test]
    fn hierarchy_examples() {
        let h = t("((a,b),c);").hierarchy();
        assert_eq!(h.len(), 5);
        assert_eq!(t("(((a,b),c),(d,e));").hierarchy().len(), 9);
        assert_eq!(t("(a,b,c,d);").hierarchy().len(), 5);
    }

    #[test]
    fn hierarchy_round_trip() {
        for s in ["((a,b),c);", "(((a,b),c),(d,e));", "(a,b,c,d);", "((a,b,c),(d,(e,f)),g);"] {
            let tree = t(s);
            assert_eq!(RootedTree::from_hierarchy(&tree.hierarchy()).unwrap(), tree);
        }
    }
}
