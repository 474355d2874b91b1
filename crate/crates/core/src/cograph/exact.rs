//! Non-ILP editors: an exact subset recursion for small components and a
//! top-down cut heuristic that seeds the branch-and-bound.

use crate::cograph::{Graph, OrthologyEstimate};

/// Penalty standing in for a forbidden same-species edge.
const FORBIDDEN: f64 = 1e9;

fn same_species(g: &OrthologyEstimate, i: usize, j: usize) -> bool {
    g.species_of(&g.genes()[i]) == g.species_of(&g.genes()[j])
}

/// Add to `graph` all edges between the vertex sets `a` and `b`.
fn join(graph: &mut Graph, a: &[usize], b: &[usize]) {
    for &x in a {
        for &y in b {
            graph.add_edge(x, y);
        }
    }
}

fn members(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Minimum cost cograph by recursion over vertex subsets: every cograph on
/// two or more vertices is the disjoint union or the join of cographs on a
/// bipartition of its vertices. Time grows as 3^n.
pub fn subset_edit(g: &OrthologyEstimate) -> Graph {
    let n = g.genes().len();
    assert!(n < 32, "subset recursion is limited to small components");
    let full = (1u64 << n) - 1;
    let size = 1usize << n;
    // weight and same-species pair count inside every subset
    let mut inner = vec![0.0f64; size];
    let mut same = vec![0u32; size];
    for s in 1..size {
        let v = s.trailing_zeros() as usize;
        let rest = s & (s - 1);
        let (mut w, mut k) = (0.0, 0);
        for u in members(rest as u64) {
            w += g.weight_at(u, v);
            k += u32::from(same_species(g, u, v));
        }
        inner[s] = inner[rest] + w;
        same[s] = same[rest] + k;
    }
    let mut best = vec![0.0f64; size];
    // chosen part containing the lowest vertex, and whether the parts are joined
    let mut split = vec![(0usize, false); size];
    for s in 1..size {
        if s & (s - 1) == 0 {
            continue;
        }
        let low = s & s.wrapping_neg();
        let rest = s ^ low;
        let mut top = f64::INFINITY;
        let mut choice = (0, false);
        // parts A = low + sub, with sub a proper subset of rest
        let mut sub = rest;
        loop {
            sub = sub.wrapping_sub(1) & rest;
            if sub == rest {
                break;
            }
            let a = low | sub;
            let b = s ^ a;
            let cross = inner[s] - inner[a] - inner[b];
            let pairs = (a.count_ones() * b.count_ones()) as f64;
            let joinable = same[s] == same[a] + same[b];
            let (cut, joined) = if joinable && pairs - cross < cross { (pairs - cross, true) } else { (cross, false) };
            let total = best[a] + best[b] + cut;
            if total < top - 1e-12 {
                top = total;
                choice = (a, joined);
            }
            if sub == 0 {
                break;
            }
        }
        best[s] = top;
        split[s] = choice;
    }
    let mut graph = Graph::new(n);
    let mut stack = vec![full as usize];
    while let Some(s) = stack.pop() {
        if s & (s - 1) == 0 {
            continue;
        }
        let (a, joined) = split[s];
        let b = s ^ a;
        if joined {
            join(&mut graph, &members(a as u64), &members(b as u64));
        }
        stack.push(a);
        stack.push(b);
    }
    graph
}

/// Stoer-Wagner minimum cut of the complete graph on `vs` with pair weights
/// `w`. Returns one side of the cut and its weight.
fn min_cut(vs: &[usize], w: &dyn Fn(usize, usize) -> f64) -> (Vec<usize>, f64) {
    let k = vs.len();
    let mut mat: Vec<Vec<f64>> = (0..k).map(|i| (0..k).map(|j| if i == j { 0.0 } else { w(vs[i], vs[j]) }).collect()).collect();
    let mut groups: Vec<Vec<usize>> = vs.iter().map(|&v| vec![v]).collect();
    let mut alive: Vec<usize> = (0..k).collect();
    let mut best = (Vec::new(), f64::INFINITY);
    while alive.len() > 1 {
        let mut used = vec![false; k];
        let mut key = vec![0.0f64; k];
        let (mut prev, mut last) = (alive[0], alive[0]);
        for step in 0..alive.len() {
            let next = *alive
                .iter()
                .filter(|&&v| !used[v])
                .max_by(|&&a, &&b| key[a].total_cmp(&key[b]).then(b.cmp(&a)))
                .expect("unused vertex");
            used[next] = true;
            if step == alive.len() - 1 && key[next] < best.1 {
                best = (groups[next].clone(), key[next]);
            }
            prev = last;
            last = next;
            for &v in &alive {
                if !used[v] {
                    key[v] += mat[next][v];
                }
            }
        }
        // merge the last vertex into the one before it
        let moved = std::mem::take(&mut groups[last]);
        groups[prev].extend(moved);
        for &v in &alive {
            mat[prev][v] += mat[last][v];
            mat[v][prev] = mat[prev][v];
        }
        mat[prev][prev] = 0.0;
        alive.retain(|&v| v != last);
    }
    best
}

/// Build a cograph top-down: split each vertex set by the cheaper of a
/// minimum cut on the weights (parts left unconnected) and a minimum cut on
/// the complementary weights (parts fully joined).
pub fn cut_edit(g: &OrthologyEstimate) -> Graph {
    let n = g.genes().len();
    let mut graph = Graph::new(n);
    let mut stack = vec![(0..n).collect::<Vec<_>>()];
    while let Some(vs) = stack.pop() {
        if vs.len() < 2 {
            continue;
        }
        let (apart, apart_cost) = min_cut(&vs, &|a, b| g.weight_at(a, b));
        let (joined, join_cost) =
            min_cut(&vs, &|a, b| if same_species(g, a, b) { FORBIDDEN } else { 1.0 - g.weight_at(a, b) });
        let (part, connect) = if join_cost < apart_cost { (joined, true) } else { (apart, false) };
        let rest: Vec<usize> = vs.iter().copied().filter(|v| !part.contains(v)).collect();
        if connect {
            join(&mut graph, &part, &rest);
        }
        stack.push(part);
        stack.push(rest);
    }
    graph
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cograph::edit_cost;
    use crate::model::{label, SpeciesMap};

    fn relation(n: usize, edges: &[(usize, usize)]) -> OrthologyEstimate {
        let map: SpeciesMap = (0..n).map(|i| (label(&format!("g{i}")), label(&format!("S{i}")))).collect();
        let mut g = OrthologyEstimate::new(map);
        for &(a, b) in edges {
            g.set(&g.genes()[a].clone(), &g.genes()[b].clone(), 1.0).unwrap();
        }
        g
    }

    #[test]
    fn path_and_cycle() {
        let p4 = relation(4, &[(0, 1), (1, 2), (2, 3)]);
        let h = subset_edit(&p4);
        assert!(h.is_cograph());
        assert_eq!(edit_cost(&p4, &h), 1.0);
        let c5 = relation(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]);
        let h = subset_edit(&c5);
        assert!(h.is_cograph());
        assert_eq!(edit_cost(&c5, &h), 2.0);
        let h = cut_edit(&c5);
        assert!(h.is_cograph());
        assert!(edit_cost(&c5, &h) >= 2.0);
    }

    #[test]
    fn min_cut_finds_bridge() {
        // two triangles joined by a single edge
        let w = |a: usize, b: usize| {
            let e = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)];
            if e.contains(&(a.min(b), a.max(b))) { 1.0 } else { 0.0 }
        };
        let (mut side, cut) = min_cut(&[0, 1, 2, 3, 4, 5], &w);
        side.sort();
        assert_eq!(cut, 1.0);
        assert!(side == vec![0, 1, 2] || side == vec![3, 4, 5]);
    }
}
