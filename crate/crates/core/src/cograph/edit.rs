//! Minimum weighted cograph editing.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::cograph::exact::{cut_edit, subset_edit};
use crate::cograph::{Graph, OrthologyEstimate};
use crate::ilp::{solve_from, Cmp, IlpModel, Sense, SolveOptions, SolveStatus, VarId};
use crate::model::GeneId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EditStatus {
    Optimal,
    TimeLimitedIncumbent,
    SkippedTooLarge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EditMethod {
    /// Already a cograph after dropping same-species edges.
    Unchanged,
    SubsetRecursion,
    Ilp,
    Heuristic,
}

#[derive(Debug, Clone, Copy)]
pub struct EditOptions {
    /// Larger components are only repaired heuristically.
    pub size_limit: usize,
    /// Components up to this size are solved by subset recursion instead
    /// of the program.
    pub exact_limit: usize,
    pub time_limit: Option<Duration>,
    pub node_limit: Option<u64>,
}

impl Default for EditOptions {
    fn default() -> Self {
        EditOptions { size_limit: 50, exact_limit: 16, time_limit: Some(Duration::from_secs(1800)), node_limit: None }
    }
}

/// Result of editing one component; vertex `i` of `graph` is `genes[i]`.
#[derive(Debug, Clone)]
pub struct EditedCograph {
    pub genes: Vec<GeneId>,
    pub graph: Graph,
    pub cost: f64,
    pub inserted: Vec<(GeneId, GeneId)>,
    pub deleted: Vec<(GeneId, GeneId)>,
    pub status: EditStatus,
    pub method: EditMethod,
    pub nodes: u64,
}

impl EditedCograph {
    pub fn is_exact(&self) -> bool {
        self.status == EditStatus::Optimal
    }
}

/// Weighted symmetric difference between `graph` and the relation.
pub fn edit_cost(g: &OrthologyEstimate, graph: &Graph) -> f64 {
    let n = g.genes().len();
    let mut cost = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let w = g.weight_at(i, j);
            cost += if graph.has_edge(i, j) { 1.0 - w } else { w };
        }
    }
    cost
}

fn var_name(i: usize, j: usize) -> String {
    format!("E_{i}_{j}")
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    // row-major index of (i, j), i < j, in the strict upper triangle
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

struct EditModel {
    model: IlpModel,
    n: usize,
    quads: BTreeSet<[usize; 4]>,
}

impl EditModel {
    fn new(g: &OrthologyEstimate) -> Self {
        let n = g.genes().len();
        let mut model = IlpModel::new();
        let mut obj = Vec::new();
        let mut constant = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                let v = model.add_var(var_name(i, j)).expect("fresh name");
                let w = g.weight_at(i, j);
                constant += w;
                obj.push((v, 1.0 - 2.0 * w));
                if g.species_of(&g.genes()[i]) == g.species_of(&g.genes()[j]) {
                    model.add_constraint(format!("same_{i}_{j}"), [(v, 1.0)], Cmp::Eq, 0.0).expect("valid row");
                }
            }
        }
        model.set_objective(Sense::Minimize, obj, constant).expect("valid objective");
        EditModel { model, n, quads: BTreeSet::new() }
    }

    fn var(&self, a: usize, b: usize) -> VarId {
        VarId(pair_index(self.n, a.min(b), a.max(b)))
    }

    /// Add the twelve path rows of a 4-set (one per path up to reversal).
    fn add_quad(&mut self, q: [usize; 4]) {
        if !self.quads.insert(q) {
            return;
        }
        for p in permutations(q) {
            let [w, x, y, z] = p;
            if w > z {
                continue;
            }
            let terms = [
                (self.var(w, x), 1.0),
                (self.var(x, y), 1.0),
                (self.var(y, z), 1.0),
                (self.var(x, z), -1.0),
                (self.var(w, y), -1.0),
                (self.var(w, z), -1.0),
            ];
            self.model.add_constraint(format!("p4_{w}_{x}_{y}_{z}"), terms, Cmp::Le, 2.0).expect("valid row");
        }
    }

    fn encode(&self, graph: &Graph) -> Vec<bool> {
        let mut x = vec![false; self.model.num_vars()];
        for (i, j) in graph.edges() {
            x[pair_index(self.n, i, j)] = true;
        }
        x
    }

    fn graph_of(&self, x: &[bool]) -> Graph {
        let mut g = Graph::new(self.n);
        for i in 0..self.n {
            for j in i + 1..self.n {
                if x[pair_index(self.n, i, j)] {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }
}

fn permutations(q: [usize; 4]) -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    if a != b && a != c && a != d && b != c && b != d && c != d {
                        out.push([q[a], q[b], q[c], q[d]]);
                    }
                }
            }
        }
    }
    out
}

/// The full editing program: one variable per gene pair, same-species pairs
/// fixed to zero and path rows for every 4-set.
pub fn edit_model(g: &OrthologyEstimate) -> IlpModel {
    let mut m = EditModel::new(g);
    let n = m.n;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    m.add_quad([a, b, c, d]);
                }
            }
        }
    }
    m.model
}

/// Thresholded graph with same-species edges removed.
fn start_graph(g: &OrthologyEstimate) -> Graph {
    let mut graph = g.binary_graph();
    for (i, j) in graph.edges() {
        if g.species_of(&g.genes()[i]) == g.species_of(&g.genes()[j]) {
            graph.remove_edge(i, j);
        }
    }
    graph
}

/// Delete edges until no induced P4 remains, each time removing the
/// lightest edge of the path found (the middle edge on ties).
pub fn destroy_p4s(g: &OrthologyEstimate, graph: &mut Graph) {
    while let Some([w, x, y, z]) = graph.find_p4() {
        let mut pick = (x, y);
        let mut best = g.weight_at(x, y);
        for (a, b) in [(w, x), (y, z)] {
            let wt = g.weight_at(a, b);
            if wt < best {
                best = wt;
                pick = (a, b);
            }
        }
        graph.remove_edge(pick.0, pick.1);
    }
}

/// Cheaper of the cut heuristic and P4 destruction.
fn heuristic(g: &OrthologyEstimate, start: &Graph) -> Graph {
    let mut destroyed = start.clone();
    destroy_p4s(g, &mut destroyed);
    let cut = cut_edit(g);
    if edit_cost(g, &cut) < edit_cost(g, &destroyed) {
        cut
    } else {
        destroyed
    }
}

/// Edit one component of the relation to a nearest cograph without
/// same-species edges.
///
/// The thresholded graph minus same-species edges minimises every pair's
/// cost individually, so when it is already a cograph it is returned as is.
/// Small components are solved by subset recursion. Otherwise path rows are
/// generated lazily: the program is solved with the rows of all induced P4s
/// seen so far, starting from the best cograph known, until the optimum is
/// P4-free or no better than that cograph.
pub fn cograph_edit(g: &OrthologyEstimate, opts: &EditOptions) -> EditedCograph {
    let start = Instant::now();
    let n = g.genes().len();
    let graph = start_graph(g);
    if graph.is_cograph() {
        return finish(g, graph, EditStatus::Optimal, EditMethod::Unchanged, 0);
    }
    if n <= opts.exact_limit.min(24) {
        return finish(g, subset_edit(g), EditStatus::Optimal, EditMethod::SubsetRecursion, 0);
    }
    let mut best = heuristic(g, &graph);
    if n > opts.size_limit {
        return finish(g, best, EditStatus::SkippedTooLarge, EditMethod::Heuristic, 0);
    }
    let mut best_cost = edit_cost(g, &best);
    let mut m = EditModel::new(g);
    let mut pending = graph.p4_sets();
    let mut nodes = 0;
    loop {
        for q in pending {
            m.add_quad(q);
        }
        let remaining = opts.time_limit.map(|t| t.saturating_sub(start.elapsed()));
        let node_limit = opts.node_limit.map(|l| l.saturating_sub(nodes));
        let out = solve_from(&m.model, SolveOptions { time_limit: remaining, node_limit }, &m.encode(&best));
        nodes += out.nodes;
        let Some(x) = out.assignment.as_ref() else {
            // the warm start is feasible, so this only happens on a limit
            return finish(g, best, EditStatus::TimeLimitedIncumbent, EditMethod::Heuristic, nodes);
        };
        let mut cand = m.graph_of(x);
        let optimal = out.status == SolveStatus::Optimal;
        if optimal && out.objective.is_some_and(|v| v >= best_cost - 1e-9) {
            // a lower bound on the full program that the known cograph attains
            return finish(g, best, EditStatus::Optimal, EditMethod::Ilp, nodes);
        }
        pending = cand.p4_sets();
        if pending.is_empty() {
            let status = if optimal { EditStatus::Optimal } else { EditStatus::TimeLimitedIncumbent };
            return finish(g, cand, status, EditMethod::Ilp, nodes);
        }
        destroy_p4s(g, &mut cand);
        let cost = edit_cost(g, &cand);
        if cost < best_cost {
            best = cand;
            best_cost = cost;
        }
        if !optimal {
            return finish(g, best, EditStatus::TimeLimitedIncumbent, EditMethod::Ilp, nodes);
        }
    }
}

fn finish(g: &OrthologyEstimate, graph: Graph, status: EditStatus, method: EditMethod, nodes: u64) -> EditedCograph {
    let genes = g.genes().to_vec();
    let mut inserted = Vec::new();
    let mut deleted = Vec::new();
    for i in 0..genes.len() {
        for j in i + 1..genes.len() {
            let before = g.weight_at(i, j) >= crate::cograph::BINARIZATION_THRESHOLD;
            match (before, graph.has_edge(i, j)) {
                (false, true) => inserted.push((genes[i].clone(), genes[j].clone())),
                (true, false) => deleted.push((genes[i].clone(), genes[j].clone())),
                _ => {}
            }
        }
    }
    EditedCograph { cost: edit_cost(g, &graph), genes, graph, inserted, deleted, status, method, nodes }
}
