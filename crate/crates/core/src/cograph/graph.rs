use std::collections::VecDeque;

/// Simple undirected graph on vertices `0..n` with bitset adjacency rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Graph { n, words, bits: vec![0; n * words] }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n);
        for i in 0..n {
            for j in i + 1..n {
                g.add_edge(i, j);
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Graph::new(n);
        for (i, j) in edges {
            g.add_edge(i, j);
        }
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn add_edge(&mut self, i: usize, j: usize) {
        assert!(i != j && i < self.n && j < self.n, "invalid edge {i}-{j}");
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
        self.bits[j * self.words + i / 64] |= 1 << (i % 64);
    }

    pub fn remove_edge(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] &= !(1 << (j % 64));
        self.bits[j * self.words + i / 64] &= !(1 << (i % 64));
    }

    pub fn set_edge(&mut self, i: usize, j: usize, present: bool) {
        if present {
            self.add_edge(i, j)
        } else {
            self.remove_edge(i, j)
        }
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        iter_bits(self.row(i))
    }

    pub fn degree(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|i| self.degree(i)).sum::<usize>() / 2
    }

    /// Edges `(i, j)` with `i < j` in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            out.extend(self.neighbors(i).filter(|&j| j > i).map(|j| (i, j)));
        }
        out
    }

    /// Induced subgraph on `vs`, renumbered in the given order.
    pub fn induced(&self, vs: &[usize]) -> Graph {
        let mut g = Graph::new(vs.len());
        for (a, &x) in vs.iter().enumerate() {
            for (b, &y) in vs.iter().enumerate().skip(a + 1) {
                if self.has_edge(x, y) {
                    g.add_edge(a, b);
                }
            }
        }
        g
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        self.components_within(&(0..self.n).collect::<Vec<_>>(), false)
    }

    /// Connected components of the subgraph induced by `vs`, or of its
    /// complement when `complement` is set. Each component is sorted and
    /// components are ordered by their smallest vertex.
    pub fn components_within(&self, vs: &[usize], complement: bool) -> Vec<Vec<usize>> {
        let mut sorted = vs.to_vec();
        sorted.sort_unstable();
        let mut seen = vec![false; sorted.len()];
        let mut out = Vec::new();
        for s in 0..sorted.len() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![sorted[s]];
            let mut queue = VecDeque::from([s]);
            while let Some(a) = queue.pop_front() {
                for b in 0..sorted.len() {
                    if !seen[b] && self.has_edge(sorted[a], sorted[b]) != complement {
                        seen[b] = true;
                        comp.push(sorted[b]);
                        queue.push_back(b);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Some induced path w-x-y-z, if the graph has one.
    pub fn find_p4(&self) -> Option<[usize; 4]> {
        let mut a = vec![0u64; self.words];
        let mut b = vec![0u64; self.words];
        for x in 0..self.n {
            for y in self.neighbors(x) {
                // w ∈ N(x) \ N[y], z ∈ N(y) \ N[x]
                let (rx, ry) = (self.row(x), self.row(y));
                for k in 0..self.words {
                    a[k] = rx[k] & !ry[k];
                    b[k] = ry[k] & !rx[k];
                }
                a[y / 64] &= !(1 << (y % 64));
                b[x / 64] &= !(1 << (x % 64));
                for w in iter_bits(&a) {
                    let rw = self.row(w);
                    if let Some(z) = iter_bits(&b).find(|&z| rw[z / 64] >> (z % 64) & 1 == 0) {
                        return Some([w, x, y, z]);
                    }
                }
            }
        }
        None
    }

    pub fn is_cograph(&self) -> bool {
        self.find_p4().is_none()
    }

    /// Every 4-set (sorted) that induces a P4.
    pub fn p4_sets(&self) -> Vec<[usize; 4]> {
        let mut out = Vec::new();
        for x in 0..self.n {
            for y in self.neighbors(x) {
                for w in self.neighbors(x) {
                    if w == y || self.has_edge(w, y) {
                        continue;
                    }
                    for z in self.neighbors(y) {
                        if z != x && z != w && !self.has_edge(z, x) && !self.has_edge(z, w) {
                            let mut q = [w, x, y, z];
                            q.sort_unstable();
                            out.push(q);
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

fn iter_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(k, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let t = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(k * 64 + t)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_induced_p4(g: &Graph, [w, x, y, z]: [usize; 4]) -> bool {
        g.has_edge(w, x)
            && g.has_edge(x, y)
            && g.has_edge(y, z)
            && !g.has_edge(w, y)
            && !g.has_edge(x, z)
            && !g.has_edge(w, z)
    }

    #[test]
    fn path_square_and_clique() {
        let path = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]);
        let p = path.find_p4().unwrap();
        assert!(is_induced_p4(&path, p));
        assert_eq!(path.p4_sets(), vec![[0, 1, 2, 3]]);
        assert!(Graph::complete(4).is_cograph());
        let square = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert!(square.is_cograph());
    }

    #[test]
    fn wide_graph_uses_multiple_words() {
        let mut g = Graph::new(130);
        g.add_edge(0, 100);
        g.add_edge(100, 129);
        g.add_edge(129, 65);
        assert_eq!(g.edge_count(), 3);
        assert!(is_induced_p4(&g, g.find_p4().unwrap()));
        assert_eq!(g.components().len(), 127);
    }

    #[test]
    fn complement_components() {
        // K_{2,2} is the complement of two disjoint edges
        let g = Graph::from_edges(4, [(0, 2), (0, 3), (1, 2), (1, 3)]);
        assert_eq!(g.components_within(&[0, 1, 2, 3], true), vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(g.components().len(), 1);
    }
}
