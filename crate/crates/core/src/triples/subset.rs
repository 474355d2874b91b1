//! Maximum-weight consistent subset of a species triple set.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::ilp::{solve, Cmp, IlpModel, Sense, SolveOptions, SolveStatus, VarId};
use crate::model::{Label, Triple, TripleSet};
use crate::triples::build::{build, ConsistencyReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubsetStatus {
    /// The input was consistent and is returned unchanged.
    AlreadyConsistent,
    Optimal,
    TimeLimited,
    /// Fewer than three species.
    NoSignal,
}

#[derive(Debug, Clone)]
pub struct SubsetResult {
    /// S* = S' ∩ S, weights from S.
    pub selected: TripleSet,
    /// The strictly dense consistent set S'.
    pub dense: TripleSet,
    pub status: SubsetStatus,
    pub nodes: u64,
}

impl SubsetResult {
    pub fn is_exact(&self) -> bool {
        self.status != SubsetStatus::TimeLimited
    }
}

/// Variables of the subset program: T'(αβ|γ) for every orientation of every
/// trio, T*(αβ|γ) for the orientations present in S.
pub struct SubsetModel {
    pub model: IlpModel,
    pub species: Vec<Label>,
    orientations: Vec<(Triple, VarId)>,
}

pub fn subset_model(s: &TripleSet) -> SubsetModel {
    let species: Vec<Label> = s.universe().iter().cloned().collect();
    let n = species.len();
    let mut model = IlpModel::new();
    let mut tp: HashMap<(usize, usize, usize), VarId> = HashMap::new();
    let mut orientations = Vec::new();
    let key = |a: usize, b: usize, c: usize| (a.min(b), a.max(b), c);
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut row = Vec::with_capacity(3);
                for (a, b, c) in [(i, j, k), (i, k, j), (j, k, i)] {
                    let v = model.add_var(format!("Tp_{a}_{b}_{c}")).expect("fresh name");
                    tp.insert((a, b, c), v);
                    row.push((v, 1.0));
                    let t = Triple::new(species[a].clone(), species[b].clone(), species[c].clone()).expect("distinct");
                    orientations.push((t, v));
                }
                model.add_constraint(format!("dense_{i}_{j}_{k}"), row, Cmp::Eq, 1.0).expect("valid row");
            }
        }
    }
    // 2T'(αβ|γ) + 2T'(αδ|β) − T'(βδ|γ) − T'(αδ|γ) ≤ 2 over ordered 4-tuples
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    if a == b || a == c || a == d || b == c || b == d || c == d {
                        continue;
                    }
                    let terms = [
                        (tp[&key(a, b, c)], 2.0),
                        (tp[&key(a, d, b)], 2.0),
                        (tp[&key(b, d, c)], -1.0),
                        (tp[&key(a, d, c)], -1.0),
                    ];
                    model.add_constraint(format!("rule_{a}_{b}_{c}_{d}"), terms, Cmp::Le, 2.0).expect("valid row");
                }
            }
        }
    }
    let index: HashMap<&Label, usize> = species.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let mut obj = Vec::new();
    for (t, &w) in s {
        let (x, y) = t.pair();
        let (a, b, c) = key(index[x], index[y], index[t.outgroup()]);
        let v = tp[&(a, b, c)];
        let star = model.add_var(format!("Ts_{a}_{b}_{c}")).expect("fresh name");
        // 0 ≤ T' + T − 2T* ≤ 1 with the constant T = 1
        let link = [(v, 1.0), (star, -2.0)];
        model.add_constraint(format!("link_lo_{a}_{b}_{c}"), link, Cmp::Ge, -1.0).expect("valid row");
        model.add_constraint(format!("link_hi_{a}_{b}_{c}"), link, Cmp::Le, 0.0).expect("valid row");
        obj.push((v, w));
    }
    model.set_objective(Sense::Maximize, obj, 0.0).expect("valid objective");
    SubsetModel { model, species, orientations }
}

/// Select a maximum-weight consistent subset S* ⊆ S together with a strictly
/// dense consistent S' ⊇ S*.
pub fn max_consistent_subset(s: &TripleSet, opts: SolveOptions) -> SubsetResult {
    let universe = s.universe().clone();
    if universe.len() < 3 {
        return SubsetResult {
            selected: TripleSet::with_universe(universe.iter().cloned()),
            dense: TripleSet::with_universe(universe),
            status: SubsetStatus::NoSignal,
            nodes: 0,
        };
    }
    if let ConsistencyReport::Consistent(tree) = build(s, &universe) {
        let mut dense = tree.refine_binary().displayed_triples();
        dense.extend_universe(universe);
        return SubsetResult { selected: s.clone(), dense, status: SubsetStatus::AlreadyConsistent, nodes: 0 };
    }
    let m = subset_model(s);
    let out = solve(&m.model, opts);
    let (chosen, status) = match (&out.status, &out.assignment) {
        (SolveStatus::Optimal, Some(x)) => (chosen_triples(&m, x), SubsetStatus::Optimal),
        (_, Some(x)) => (chosen_triples(&m, x), SubsetStatus::TimeLimited),
        _ => (greedy_dense(s), SubsetStatus::TimeLimited),
    };
    let mut dense = TripleSet::with_universe(universe.iter().cloned());
    for t in chosen {
        dense.insert(t, 1.0);
    }
    let mut selected = TripleSet::with_universe(universe);
    for (t, &w) in s {
        if dense.contains(t) {
            selected.insert(t.clone(), w);
        }
    }
    SubsetResult { selected, dense, status, nodes: out.nodes }
}

fn chosen_triples(m: &SubsetModel, x: &[bool]) -> Vec<Triple> {
    m.orientations.iter().filter(|(_, v)| x[v.0]).map(|(t, _)| t.clone()).collect()
}

/// Fallback when the solver finds nothing in time: add triples by decreasing
/// weight while the set stays consistent, then complete via a binary tree.
fn greedy_dense(s: &TripleSet) -> Vec<Triple> {
    let mut order: Vec<(&Triple, f64)> = s.iter().map(|(t, &w)| (t, w)).collect();
    order.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let mut kept = TripleSet::with_universe(s.universe().iter().cloned());
    for (t, _) in order {
        kept.insert(t.clone(), 1.0);
        if !build(&kept, &BTreeSet::new()).is_consistent() {
            kept.remove(t);
        }
    }
    let tree = build(&kept, &BTreeSet::new()).into_result().expect("kept set is consistent");
    tree.refine_binary().displayed_triples().triples().cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::tr;

    fn weighted(ts: &[(Triple, f64)]) -> TripleSet {
        let mut s = TripleSet::new();
        for (t, w) in ts {
            s.insert(t.clone(), *w);
        }
        s
    }

    #[test]
    fn heavier_orientation_wins() {
        let s = weighted(&[(tr("a", "b", "c"), 2.0), (tr("b", "c", "a"), 1.0)]);
        let r = max_consistent_subset(&s, SolveOptions::unlimited());
        assert_eq!(r.status, SubsetStatus::Optimal);
        assert_eq!(r.selected.triples().cloned().collect::<Vec<_>>(), vec![tr("a", "b", "c")]);
        assert_eq!(r.dense.len(), 1);
    }

    #[test]
    fn consistent_input_is_kept() {
        let s = weighted(&[(tr("a", "b", "c"), 1.0), (tr("a", "b", "d"), 3.0)]);
        let r = max_consistent_subset(&s, SolveOptions::unlimited());
        assert_eq!(r.status, SubsetStatus::AlreadyConsistent);
        assert_eq!(r.selected, s);
        assert_eq!(r.dense.len(), 4);
    }

    #[test]
    fn three_way_tie_picks_one() {
        let s = weighted(&[(tr("a", "b", "c"), 1.0), (tr("a", "c", "b"), 1.0), (tr("b", "c", "a"), 1.0)]);
        let r = max_consistent_subset(&s, SolveOptions::unlimited());
        assert_eq!(r.selected.len(), 1);
        let again = max_consistent_subset(&s, SolveOptions::unlimited());
        assert_eq!(again.selected, r.selected);
    }

    #[test]
    fn two_species_is_no_signal() {
        let s = TripleSet::with_universe([crate::model::label("a"), crate::model::label("b")]);
        assert_eq!(max_consistent_subset(&s, SolveOptions::unlimited()).status, SubsetStatus::NoSignal);
    }
}
