use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::model::{Label, Triple, TripleSet};
use crate::triples::build::build_indexed;

/// cl(R): every triple displayed by all trees that display R.
///
/// A trio is forced exactly when only one of its orientations can be added
/// to R without losing consistency. Weights of the result are 1.
pub fn closure(r: &TripleSet) -> Result<TripleSet> {
    let labels: Vec<Label> = r.universe().iter().cloned().collect();
    let idx: HashMap<&Label, usize> = labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let mut base: Vec<[usize; 3]> = r
        .triples()
        .map(|t| {
            let (a, b) = t.pair();
            [idx[a], idx[b], idx[t.outgroup()]]
        })
        .collect();
    let n = labels.len();
    if let Err(w) = build_indexed(n.max(1), &base) {
        return Err(Error::Inconsistent(w.into_iter().map(|i| labels[i].clone()).collect()));
    }
    let mut out = TripleSet::with_universe(labels.iter().cloned());
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut ok = Vec::with_capacity(3);
                for o in [[i, j, k], [i, k, j], [j, k, i]] {
                    base.push(o);
                    if build_indexed(n, &base).is_ok() {
                        ok.push(o);
                    }
                    base.pop();
                }
                if let [[x, y, z]] = ok[..] {
                    let t = Triple::new(labels[x].clone(), labels[y].clone(), labels[z].clone())?;
                    out.insert(t, 1.0);
                }
            }
        }
    }
    Ok(out)
}

/// Triples inferred from two triples by the 2-order rules
/// {(ab|c),(ad|c)} ⊢ (bd|c); {(ab|c),(ad|b)} ⊢ (bd|c),(ad|c);
/// {(ab|c),(cd|b)} ⊢ (ab|d),(cd|a).
pub fn infer_2order(r1: &Triple, r2: &Triple) -> TripleSet {
    let mut out = TripleSet::new();
    let shared = r1.leaves().iter().filter(|l| r2.has_leaf(l)).count();
    if shared != 2 {
        return out;
    }
    for (p, q) in [(r1, r2), (r2, r1)] {
        for [a, b] in ingroup_orders(p) {
            let c = p.outgroup();
            for [x, y] in ingroup_orders(q) {
                let z = q.outgroup();
                let mut emit = |u: &Label, v: &Label, w: &Label| {
                    out.insert(Triple::new(u.clone(), v.clone(), w.clone()).expect("distinct leaves"), 1.0)
                };
                // the fourth leaf d is y in every pattern below
                let fresh = y != a && y != b && y != c;
                if !fresh {
                    continue;
                }
                if x == a && z == c {
                    emit(b, y, c);
                } else if x == a && z == b {
                    emit(b, y, c);
                    emit(a, y, c);
                } else if x == c && z == b {
                    emit(a, b, y);
                    emit(c, y, a);
                }
            }
        }
    }
    out
}

fn ingroup_orders(t: &Triple) -> [[&Label; 2]; 2] {
    let (a, b) = t.pair();
    [[a, b], [b, a]]
}

/// Every trio over the universe, with the orientations present in `r`.
fn check_strictly_dense(r: &TripleSet) -> Result<()> {
    let counts = r.trio_counts();
    let labels: Vec<&Label> = r.universe().iter().collect();
    for i in 0..labels.len() {
        for j in i + 1..labels.len() {
            for k in j + 1..labels.len() {
                let key = [labels[i].clone(), labels[j].clone(), labels[k].clone()];
                let c = counts.get(&key).copied().unwrap_or(0);
                if c != 1 {
                    let [a, b, d] = key;
                    return Err(Error::NotStrictlyDense(a, b, d, c));
                }
            }
        }
    }
    Ok(())
}

/// Consistency of a strictly dense set via pairwise closure: R is consistent
/// iff cl(R') ⊆ R for every two-element R' ⊆ R.
pub fn strictly_dense_consistent(r: &TripleSet) -> Result<bool> {
    check_strictly_dense(r)?;
    // only pairs sharing two leaves can infer anything; group by leaf pair
    let mut by_pair: HashMap<(&Label, &Label), Vec<&Triple>> = HashMap::new();
    for t in r.triples() {
        let [a, b, c] = t.leaves();
        for (x, y) in [(a, b), (a, c), (b, c)] {
            let key = if x < y { (x, y) } else { (y, x) };
            by_pair.entry(key).or_default().push(t);
        }
    }
    let mut seen: BTreeSet<(&Triple, &Triple)> = BTreeSet::new();
    for group in by_pair.values() {
        for (i, &t1) in group.iter().enumerate() {
            for &t2 in &group[i + 1..] {
                let key = if t1 < t2 { (t1, t2) } else { (t2, t1) };
                if !seen.insert(key) {
                    continue;
                }
                if !infer_2order(t1, t2).triples().all(|t| r.contains(t)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
