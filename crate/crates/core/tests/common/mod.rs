//! Brute-force oracles and random instance generators shared by the
//! integration tests. Nothing here calls the algorithms under test.

#![allow(dead_code)]

use std::collections::BTreeSet;

use phylotriple::cograph::OrthologyEstimate;
use phylotriple::model::{label, Label, RootedTree, SpeciesMap, Subtree, Triple, TripleSet};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn leaf_names(n: usize) -> Vec<Label> {
    (0..n).map(|i| label(&((b'a' + i as u8) as char).to_string())).collect()
}

/// A rooted tree as its non-singleton clusters over leaves `0..n`, root included.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Clusters {
    pub n: usize,
    pub sets: BTreeSet<u32>,
}

impl Clusters {
    pub fn inner_count(&self) -> usize {
        self.sets.len()
    }

    /// (x y | z) with x < y for every resolved trio.
    pub fn triples(&self) -> BTreeSet<(usize, usize, usize)> {
        let mut out = BTreeSet::new();
        for x in 0..self.n {
            for y in x + 1..self.n {
                for z in 0..self.n {
                    if z == x || z == y {
                        continue;
                    }
                    let sep = self.sets.iter().any(|&c| c >> x & 1 == 1 && c >> y & 1 == 1 && c >> z & 1 == 0);
                    if sep {
                        out.insert((x, y, z));
                    }
                }
            }
        }
        out
    }

    pub fn displays(&self, x: usize, y: usize, z: usize) -> bool {
        self.sets.iter().any(|&c| c >> x & 1 == 1 && c >> y & 1 == 1 && c >> z & 1 == 0)
    }

    pub fn to_tree(&self, names: &[Label]) -> RootedTree {
        fn build(c: u32, sets: &[u32], names: &[Label]) -> Subtree {
            if c.count_ones() == 1 {
                return Subtree::Leaf(names[c.trailing_zeros() as usize].clone());
            }
            // maximal proper sub-clusters, then uncovered leaves
            let mut kids: Vec<u32> = Vec::new();
            for &d in sets {
                if d != c && d & c == d && !sets.iter().any(|&e| e != c && e != d && e & c == e && d & e == d) {
                    kids.push(d);
                }
            }
            let covered = kids.iter().fold(0, |a, b| a | b);
            for i in 0..32 {
                if c >> i & 1 == 1 && covered >> i & 1 == 0 {
                    kids.push(1 << i);
                }
            }
            Subtree::Inner((), kids.into_iter().map(|k| build(k, sets, names)).collect())
        }
        let sets: Vec<u32> = self.sets.iter().copied().collect();
        RootedTree::new(build((1u32 << self.n) - 1, &sets, names)).unwrap()
    }

    pub fn from_tree(t: &RootedTree, names: &[Label]) -> Clusters {
        let mut sets = BTreeSet::new();
        for c in t.clusters() {
            if c.len() > 1 {
                sets.insert(c.iter().map(|l| 1u32 << names.iter().position(|x| x == l).unwrap()).sum());
            }
        }
        Clusters { n: names.len(), sets }
    }
}

/// Every rooted phylogenetic tree on `n` leaves, built by inserting leaves
/// one at a time: as a new child of an inner vertex, or on the edge above
/// any vertex.
pub fn all_trees(n: usize) -> Vec<Clusters> {
    assert!(n >= 1);
    let mut trees = vec![Clusters { n: 1, sets: BTreeSet::new() }];
    for leaf in 1..n {
        let bit = 1u32 << leaf;
        let mut next = Vec::new();
        for t in &trees {
            let root: u32 = (1 << leaf) - 1;
            // vertices: all clusters plus singletons
            let mut vertices: Vec<u32> = t.sets.iter().copied().collect();
            if !t.sets.contains(&root) {
                vertices.push(root);
            }
            for i in 0..leaf {
                if !vertices.contains(&(1 << i)) {
                    vertices.push(1 << i);
                }
            }
            for &v in &vertices {
                let above = |c: u32| c != v && c & v == v;
                // new child of an inner vertex
                if v.count_ones() > 1 {
                    let sets = t.sets.iter().map(|&c| if c == v || above(c) { c | bit } else { c }).collect();
                    next.push(Clusters { n: leaf + 1, sets });
                }
                // subdivide the edge above v (or put a new root above it)
                let mut sets: BTreeSet<u32> = t.sets.iter().map(|&c| if above(c) { c | bit } else { c }).collect();
                sets.insert(v | bit);
                next.push(Clusters { n: leaf + 1, sets });
            }
        }
        trees = next;
    }
    trees
}

pub fn to_triple(names: &[Label], (x, y, z): (usize, usize, usize)) -> Triple {
    Triple::new(names[x].clone(), names[y].clone(), names[z].clone()).unwrap()
}

pub fn from_triple(names: &[Label], t: &Triple) -> (usize, usize, usize) {
    let pos = |l: &Label| names.iter().position(|x| x == l).unwrap();
    let (a, b) = t.pair();
    let (a, b) = (pos(a), pos(b));
    (a.min(b), a.max(b), pos(t.outgroup()))
}

/// Uniformly random subset of a random tree's triples.
pub fn random_consistent<R: Rng>(rng: &mut R, n: usize, trees: &[Clusters]) -> (TripleSet, Clusters) {
    let names = leaf_names(n);
    let t = trees[rng.random_range(0..trees.len())].clone();
    let keep: f64 = rng.random_range(0.1..1.0);
    let mut s = TripleSet::with_universe(names.iter().cloned());
    for r in t.triples() {
        if rng.random::<f64>() < keep {
            s.insert(to_triple(&names, r), 1.0);
        }
    }
    (s, t)
}

/// One random orientation for every trio.
pub fn random_strictly_dense<R: Rng>(rng: &mut R, n: usize) -> TripleSet {
    let names = leaf_names(n);
    let mut s = TripleSet::with_universe(names.iter().cloned());
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let o = [(i, j, k), (i, k, j), (j, k, i)];
                s.insert(to_triple(&names, o[rng.random_range(0..3)]), 1.0);
            }
        }
    }
    s
}

/// Induced P4 test straight from the definition.
pub fn has_p4(n: usize, adj: &dyn Fn(usize, usize) -> bool) -> bool {
    let mut v: Vec<usize> = Vec::with_capacity(4);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    v.clear();
                    v.extend([a, b, c, d]);
                    let distinct = (0..4).all(|i| (i + 1..4).all(|j| v[i] != v[j]));
                    if distinct && adj(a, b) && adj(b, c) && adj(c, d) && !adj(a, c) && !adj(b, d) && !adj(a, d) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Random relation on `n` genes with unit weights; `species` species.
pub fn random_relation<R: Rng>(rng: &mut R, n: usize, species: usize, density: f64) -> OrthologyEstimate {
    let map: SpeciesMap = (0..n)
        .map(|i| (label(&format!("g{i}")), label(&format!("S{}", rng.random_range(0..species)))))
        .collect();
    let mut g = OrthologyEstimate::new(map);
    let genes = g.genes().to_vec();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < density {
                g.set(&genes[i], &genes[j], 1.0).unwrap();
            }
        }
    }
    g
}

/// Minimum number of pair edits turning `g` into a cograph without
/// same-species edges, by enumerating edit sets of increasing size.
pub fn brute_force_edit_cost(g: &OrthologyEstimate) -> usize {
    let n = g.genes().len();
    let genes = g.genes();
    let same = |i: usize, j: usize| g.species_of(&genes[i]) == g.species_of(&genes[j]);
    let base: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i != j && g.weight_at(i, j) >= 0.5).collect()).collect();
    let forced: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| base[i][j] && same(i, j)).collect();
    let free: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| !same(i, j)).collect();
    let mut start = base.clone();
    for &(i, j) in &forced {
        start[i][j] = false;
        start[j][i] = false;
    }
    for k in 0..=free.len() {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let mut adj = start.clone();
            for &p in &idx {
                let (i, j) = free[p];
                adj[i][j] = !adj[i][j];
                adj[j][i] = !adj[j][i];
            }
            if !has_p4(n, &|a, b| adj[a][b]) {
                return forced.len() + k;
            }
            // next k-combination
            let mut i = k;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if idx[i] < free.len() - k + i {
                    idx[i] += 1;
                    for j in i + 1..k {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
                if i == 0 {
                    idx.clear();
                }
            }
            if k == 0 || idx.is_empty() {
                break;
            }
        }
    }
    unreachable!("the empty graph is a cograph")
}

/// Random cograph on `genes` by random union/join recursion; returns edges
/// as index pairs.
pub fn random_cograph<R: Rng>(rng: &mut R, n: usize) -> Vec<(usize, usize)> {
    fn go<R: Rng>(rng: &mut R, vs: &mut [usize], edges: &mut Vec<(usize, usize)>) {
        if vs.len() < 2 {
            return;
        }
        vs.shuffle(rng);
        let cut = rng.random_range(1..vs.len());
        let (a, b) = vs.split_at_mut(cut);
        if rng.random_bool(0.5) {
            for &x in a.iter() {
                for &y in b.iter() {
                    edges.push((x.min(y), x.max(y)));
                }
            }
        }
        go(rng, a, edges);
        go(rng, b, edges);
    }
    let mut vs: Vec<usize> = (0..n).collect();
    let mut edges = Vec::new();
    go(rng, &mut vs, &mut edges);
    edges.sort();
    edges
}
