//! Least-resolved species trees.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ilp::{solve, solve_from, Cmp, IlpModel, Sense, SolveOptions, SolveStatus, VarId};
use crate::model::{Label, RootedTree, TripleSet};
use crate::species_tree::{decode_matrix, ClusterMatrix};
use crate::triples::{build, ConsistencyReport};

/// What "least resolved" means for the tree stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TreeMode {
    /// Fewest inner vertices.
    #[default]
    MinVertices,
    /// Fewest displayed triples.
    MinTriples,
    /// The BUILD tree as is.
    Build,
}

impl fmt::Display for TreeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TreeMode::MinVertices => "min-vertices",
            TreeMode::MinTriples => "min-triples",
            TreeMode::Build => "build",
        })
    }
}

impl FromStr for TreeMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "min-vertices" => Ok(TreeMode::MinVertices),
            "min-triples" => Ok(TreeMode::MinTriples),
            "build" => Ok(TreeMode::Build),
            _ => Err(format!("unknown tree mode {s:?}")),
        }
    }
}

/// How the returned tree was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TreeMethod {
    /// BUILD produced a binary tree, which is the unique answer in every mode.
    BinaryBuild,
    Build,
    Ilp,
    /// The program hit a limit without a solution; the BUILD tree is used.
    BuildFallback,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpeciesTreeResult {
    #[serde(skip)]
    pub tree: RootedTree,
    pub mode: TreeMode,
    pub method: TreeMethod,
    /// Inner vertices (min-vertices, build) or displayed triples (min-triples).
    pub objective: f64,
    pub exact: bool,
    pub nodes: u64,
}

/// Objective of `tree` under `mode`.
pub fn tree_objective(tree: &RootedTree, mode: TreeMode) -> f64 {
    match mode {
        TreeMode::MinTriples => tree.displayed_triples().len() as f64,
        TreeMode::MinVertices | TreeMode::Build => tree.inner_count() as f64,
    }
}

/// A tree on the universe of `sstar` that displays every triple of it and is
/// least resolved in the sense of `mode`.
pub fn least_resolved_tree(sstar: &TripleSet, mode: TreeMode, opts: SolveOptions) -> Result<SpeciesTreeResult> {
    let species: Vec<Label> = sstar.universe().iter().cloned().collect();
    if species.is_empty() {
        return Err(Error::Internal("species tree on an empty species set".into()));
    }
    let aho = match build(sstar, sstar.universe()) {
        ConsistencyReport::Consistent(t) => t,
        ConsistencyReport::Inconsistent(w) => {
            return Err(Error::Internal(format!("selected triples are inconsistent: {}", Error::Inconsistent(w))))
        }
    };
    let done = |tree: RootedTree, method, exact, nodes| {
        Ok(SpeciesTreeResult { objective: tree_objective(&tree, mode), tree, mode, method, exact, nodes })
    };
    if aho.is_binary() {
        return done(aho, TreeMethod::BinaryBuild, true, 0);
    }
    if mode == TreeMode::Build {
        return done(aho, TreeMethod::Build, true, 0);
    }
    if sstar.is_empty() {
        // the star displays nothing and has a single inner vertex
        return done(aho, TreeMethod::Build, true, 0);
    }
    match mode {
        TreeMode::MinVertices => {
            // an improvement on BUILD needs fewer non-trivial clusters than it has
            let k = aho.inner_count() - 1;
            if k == 0 {
                return done(aho, TreeMethod::Build, true, 0);
            }
            let lm = TreeModel::with_columns(sstar, &species, mode, k - 1);
            let out = solve(&lm.model, opts);
            match &out.assignment {
                Some(x) => done(lm.decode(x, sstar, &species)?, TreeMethod::Ilp, out.is_optimal(), out.nodes),
                None if out.status == SolveStatus::Infeasible => done(aho, TreeMethod::Ilp, true, out.nodes),
                None => done(aho, TreeMethod::BuildFallback, false, out.nodes),
            }
        }
        _ => {
            let lm = TreeModel::new(sstar, &species, mode);
            let out = solve_from(&lm.model, opts, &lm.encode(&aho, &species));
            match &out.assignment {
                Some(x) => done(lm.decode(x, sstar, &species)?, TreeMethod::Ilp, out.is_optimal(), out.nodes),
                None if out.status == SolveStatus::Infeasible => {
                    Err(Error::Internal("tree program infeasible for a consistent triple set".into()))
                }
                None => done(aho, TreeMethod::BuildFallback, false, out.nodes),
            }
        }
    }
}

/// Cluster-matrix program for the tree stage.
pub struct TreeModel {
    pub model: IlpModel,
    n: usize,
    cols: usize,
    m: Vec<VarId>,
}

impl TreeModel {
    /// The full program with n - 2 cluster columns.
    pub fn new(sstar: &TripleSet, species: &[Label], mode: TreeMode) -> Self {
        Self::with_columns(sstar, species, mode, species.len().saturating_sub(2))
    }

    /// The program restricted to trees with at most `cols` non-trivial clusters.
    pub fn with_columns(sstar: &TripleSet, species: &[Label], mode: TreeMode, cols: usize) -> Self {
        let n = species.len();
        let mut model = IlpModel::new();
        let mut m = Vec::with_capacity(n * cols);
        for a in 0..n {
            for p in 0..cols {
                m.push(model.add_var(format!("M_{a}_{p}")).expect("fresh"));
            }
        }
        let mv = |a: usize, p: usize| m[a * cols + p];
        let pair = |a: usize, b: usize| (a.min(b), a.max(b));
        let mut nv = std::collections::HashMap::new();
        for a in 0..n {
            for b in a + 1..n {
                for p in 0..cols {
                    let v = model.add_var(format!("N_{a}_{b}_{p}")).expect("fresh");
                    nv.insert((a, b, p), v);
                    // N_abp = 1 iff both a and b are in cluster p
                    let t = [(mv(a, p), 1.0), (mv(b, p), 1.0), (v, -2.0)];
                    model.add_constraint(format!("n_lo_{a}_{b}_{p}"), t, Cmp::Ge, 0.0).expect("row");
                    model.add_constraint(format!("n_hi_{a}_{b}_{p}"), t, Cmp::Le, 1.0).expect("row");
                }
            }
        }
        let index: std::collections::HashMap<&Label, usize> =
            species.iter().enumerate().map(|(i, l)| (l, i)).collect();
        for t in sstar.triples() {
            let (x, y) = t.pair();
            let (a, b, c) = (index[x], index[y], index[t.outgroup()]);
            let mut terms = Vec::with_capacity(3 * cols);
            for p in 0..cols {
                terms.push((nv[&(a, b, p)], 1.0));
                let (ac0, ac1) = pair(a, c);
                let (bc0, bc1) = pair(b, c);
                terms.push((nv[&(ac0, ac1, p)], -0.5));
                terms.push((nv[&(bc0, bc1, p)], -0.5));
            }
            model.add_constraint(format!("display_{a}_{b}_{c}"), terms, Cmp::Ge, 1.0).expect("row");
        }
        // three-gamete condition for ordered column pairs
        for p in 0..cols {
            for q in 0..cols {
                if p == q {
                    continue;
                }
                let c01 = model.add_var(format!("C01_{p}_{q}")).expect("fresh");
                let c10 = model.add_var(format!("C10_{p}_{q}")).expect("fresh");
                let c11 = model.add_var(format!("C11_{p}_{q}")).expect("fresh");
                for a in 0..n {
                    let (mp, mq) = (mv(a, p), mv(a, q));
                    model.add_constraint(format!("g01_{p}_{q}_{a}"), [(c01, 1.0), (mp, 1.0), (mq, -1.0)], Cmp::Ge, 0.0).expect("row");
                    model.add_constraint(format!("g10_{p}_{q}_{a}"), [(c10, 1.0), (mp, -1.0), (mq, 1.0)], Cmp::Ge, 0.0).expect("row");
                    model.add_constraint(format!("g11_{p}_{q}_{a}"), [(c11, 1.0), (mp, -1.0), (mq, -1.0)], Cmp::Ge, -1.0).expect("row");
                }
                model.add_constraint(format!("compat_{p}_{q}"), [(c01, 1.0), (c10, 1.0), (c11, 1.0)], Cmp::Le, 2.0).expect("row");
            }
        }
        // columns in non-increasing lexicographic order; weights stay exact in f64
        if n <= 50 {
            for p in 0..cols.saturating_sub(1) {
                let terms: Vec<(VarId, f64)> = (0..n)
                    .flat_map(|a| {
                        let w = 2f64.powi((n - 1 - a) as i32);
                        [(mv(a, p), w), (mv(a, p + 1), -w)]
                    })
                    .collect();
                model.add_constraint(format!("lex_{p}"), terms, Cmp::Ge, 0.0).expect("row");
            }
        }
        match mode {
            TreeMode::MinTriples => {
                let mut obj = Vec::new();
                for a in 0..n {
                    for b in a + 1..n {
                        for c in 0..n {
                            if c == a || c == b {
                                continue;
                            }
                            let th = model.add_var(format!("That_{a}_{b}_{c}")).expect("fresh");
                            obj.push((th, 1.0));
                            for p in 0..cols {
                                // M_ap + M_bp + (1 − M_cp) − T̂ ≤ 2
                                let t = [(mv(a, p), 1.0), (mv(b, p), 1.0), (mv(c, p), -1.0), (th, -1.0)];
                                model.add_constraint(format!("that_{a}_{b}_{c}_{p}"), t, Cmp::Le, 1.0).expect("row");
                            }
                        }
                    }
                }
                model.set_objective(Sense::Minimize, obj, 0.0).expect("objective");
            }
            TreeMode::MinVertices | TreeMode::Build => {
                let mut obj = Vec::new();
                for p in 0..cols {
                    let y = model.add_var(format!("Y_{p}")).expect("fresh");
                    obj.push((y, 1.0));
                    // Y_p = 1 iff column p is non-trivial
                    let mut t: Vec<(VarId, f64)> = vec![(y, n as f64)];
                    t.extend((0..n).map(|a| (mv(a, p), -1.0)));
                    model.add_constraint(format!("y_lo_{p}"), t.clone(), Cmp::Ge, 0.0).expect("row");
                    model.add_constraint(format!("y_hi_{p}"), t, Cmp::Le, (n - 1) as f64).expect("row");
                }
                model.set_objective(Sense::Minimize, obj, 0.0).expect("objective");
            }
        }
        TreeModel { model, n, cols, m }
    }

    fn var(&self, name: String) -> usize {
        self.model.var(&name).expect("declared variable").0
    }

    /// A feasible assignment describing `tree`, whose non-trivial clusters
    /// must fit into the columns.
    pub fn encode(&self, tree: &RootedTree, species: &[Label]) -> Vec<bool> {
        let (n, cols) = (self.n, self.cols);
        let mut columns: Vec<Vec<bool>> = tree
            .hierarchy()
            .nontrivial()
            .map(|c| species.iter().map(|l| c.contains(l)).collect())
            .collect();
        columns.sort_by(|a, b| b.cmp(a));
        columns.resize(cols.max(columns.len()), vec![false; n]);
        columns.truncate(cols);
        let mut x = vec![false; self.model.num_vars()];
        let col = |a: usize, p: usize| columns[p][a];
        for p in 0..cols {
            for a in 0..n {
                x[self.m[a * cols + p].0] = col(a, p);
                for b in a + 1..n {
                    x[self.var(format!("N_{a}_{b}_{p}"))] = col(a, p) && col(b, p);
                }
            }
            for q in 0..cols {
                if p != q {
                    let any = |f: &dyn Fn(bool, bool) -> bool| (0..n).any(|a| f(col(a, p), col(a, q)));
                    x[self.var(format!("C01_{p}_{q}"))] = any(&|mp, mq| !mp && mq);
                    x[self.var(format!("C10_{p}_{q}"))] = any(&|mp, mq| mp && !mq);
                    x[self.var(format!("C11_{p}_{q}"))] = any(&|mp, mq| mp && mq);
                }
            }
            if let Some(y) = self.model.var(&format!("Y_{p}")) {
                x[y.0] = (0..n).any(|a| col(a, p));
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                for c in 0..n {
                    if let Some(t) = self.model.var(&format!("That_{a}_{b}_{c}")) {
                        x[t.0] = (0..cols).any(|p| col(a, p) && col(b, p) && !col(c, p));
                    }
                }
            }
        }
        x
    }

    /// The tree of a solution, checked to display `sstar`.
    fn decode(&self, x: &[bool], sstar: &TripleSet, species: &[Label]) -> Result<RootedTree> {
        let tree = decode_matrix(&self.matrix(x), species)?;
        let shown = tree.displayed_triples();
        if !sstar.triples().all(|t| shown.contains(t)) {
            return Err(Error::Internal("decoded tree misses a selected triple".into()));
        }
        Ok(tree)
    }

    pub fn matrix(&self, x: &[bool]) -> ClusterMatrix {
        let mut out = ClusterMatrix::new(self.n, self.cols);
        for a in 0..self.n {
            for p in 0..self.cols {
                out.set(a, p, x[self.m[a * self.cols + p].0]);
            }
        }
        out
    }
}
