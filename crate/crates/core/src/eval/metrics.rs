use std::collections::{BTreeSet, HashMap};
use std::sync::{Mutex, OnceLock};

use pathfinding::kuhn_munkres::kuhn_munkres_min;
use pathfinding::matrix::Matrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Label, RootedTree};
use crate::sim::{padded_names, yule_tree};

/// One value per metric: matching cluster, Robinson-Foulds, nodal split
/// and triple distance.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Metrics {
    pub mc: f64,
    pub rf: f64,
    pub ns: f64,
    pub tt: f64,
}

impl Metrics {
    pub const NAMES: [&'static str; 4] = ["MC", "RF", "NS", "TT"];

    pub fn values(&self) -> [f64; 4] {
        [self.mc, self.rf, self.ns, self.tt]
    }

    fn zip(self, other: Metrics, f: impl Fn(f64, f64) -> f64) -> Metrics {
        Metrics { mc: f(self.mc, other.mc), rf: f(self.rf, other.rf), ns: f(self.ns, other.ns), tt: f(self.tt, other.tt) }
    }

    /// Divide by `norm`; a zero normalizer leaves the value at 0.
    pub fn normalized_by(self, norm: Metrics) -> Metrics {
        self.zip(norm, |v, d| if d > 0.0 { v / d } else { 0.0 })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistanceReport {
    pub raw: Metrics,
    pub normalized: Metrics,
}

impl DistanceReport {
    /// `metric<TAB>raw<TAB>normalized` rows.
    pub fn to_tsv(&self) -> String {
        let raw = self.raw.values();
        let norm = self.normalized.values();
        Metrics::NAMES
            .iter()
            .enumerate()
            .map(|(i, name)| format!("{name}\t{}\t{}\n", raw[i], norm[i]))
            .collect()
    }
}

fn check_leaves(t1: &RootedTree, t2: &RootedTree) -> Result<Vec<Label>> {
    let a: BTreeSet<Label> = t1.leaf_labels().into_iter().collect();
    let b: BTreeSet<Label> = t2.leaf_labels().into_iter().collect();
    if a != b {
        return Err(Error::LeafSetMismatch(a.difference(&b).cloned().collect(), b.difference(&a).cloned().collect()));
    }
    Ok(a.into_iter().collect())
}

/// Minimum-cost one-to-one matching of the non-trivial clusters, where a
/// pair costs its symmetric difference and an unmatched cluster its size.
pub fn matching_cluster(t1: &RootedTree, t2: &RootedTree) -> Result<f64> {
    check_leaves(t1, t2)?;
    let h1 = t1.hierarchy();
    let h2 = t2.hierarchy();
    let c1: Vec<_> = h1.nontrivial().collect();
    let c2: Vec<_> = h2.nontrivial().collect();
    let k = c1.len().max(c2.len());
    if k == 0 {
        return Ok(0.0);
    }
    let mut w = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            let cost = match (c1.get(i), c2.get(j)) {
                (Some(p), Some(q)) => p.symmetric_difference(q).count(),
                (Some(p), None) => p.len(),
                (None, Some(q)) => q.len(),
                (None, None) => 0,
            };
            w.push(cost as i64);
        }
    }
    let m = Matrix::from_vec(k, k, w).expect("square matrix");
    Ok(kuhn_munkres_min(&m).0 as f64)
}

/// Half the number of clusters found in exactly one tree.
pub fn robinson_foulds(t1: &RootedTree, t2: &RootedTree) -> Result<f64> {
    check_leaves(t1, t2)?;
    let h1 = t1.hierarchy();
    let h2 = t2.hierarchy();
    Ok(h1.clusters().symmetric_difference(h2.clusters()).count() as f64 / 2.0)
}

/// Path lengths from lca(x, y) down to x, over sorted leaf positions.
fn path_matrix(t: &RootedTree) -> Vec<Vec<f64>> {
    let m = t.lca_matrix();
    let n = m.leaves.len();
    let leaf_depth: Vec<usize> = (0..n).map(|i| m.depth_of(m.get(i, i))).collect();
    (0..n).map(|x| (0..n).map(|y| (leaf_depth[x] - m.depth_of(m.get(x, y))) as f64).collect()).collect()
}

/// Entrywise L2 norm of the difference of the path-length matrices.
pub fn nodal_split(t1: &RootedTree, t2: &RootedTree) -> Result<f64> {
    check_leaves(t1, t2)?;
    let a = path_matrix(t1);
    let b = path_matrix(t2);
    let sum: f64 = a.iter().zip(&b).flat_map(|(r, s)| r.iter().zip(s).map(|(x, y)| (x - y) * (x - y))).sum();
    Ok(sum.sqrt())
}

/// Number of trios whose resolution differs between the trees, an
/// unresolved trio counting as its own resolution.
pub fn triple_distance(t1: &RootedTree, t2: &RootedTree) -> Result<f64> {
    check_leaves(t1, t2)?;
    let a = t1.lca_matrix();
    let b = t2.lca_matrix();
    let n = a.leaves.len();
    let mut count = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if a.resolve(i, j, k) != b.resolve(i, j, k) {
                    count += 1;
                }
            }
        }
    }
    Ok(count as f64)
}

pub fn raw_distance(t1: &RootedTree, t2: &RootedTree) -> Result<Metrics> {
    Ok(Metrics {
        mc: matching_cluster(t1, t2)?,
        rf: robinson_foulds(t1, t2)?,
        ns: nodal_split(t1, t2)?,
        tt: triple_distance(t1, t2)?,
    })
}

pub const YULE_SAMPLES: usize = 1000;
pub const YULE_SEED: u64 = 0x5eed;

/// Raw distances together with values normalized by the default Yule
/// averages for the leaf count.
pub fn tree_distance(t1: &RootedTree, t2: &RootedTree) -> Result<DistanceReport> {
    let raw = raw_distance(t1, t2)?;
    let n = t1.leaf_count();
    let normalized = if n >= 4 { raw.normalized_by(yule_normalizer(n, YULE_SAMPLES, YULE_SEED)) } else { raw };
    Ok(DistanceReport { raw, normalized })
}

type NormCache = Mutex<HashMap<(usize, usize, u64), Metrics>>;

/// Mean distance between independent random Yule trees on `n` leaves, over
/// `samples` pairs. Results are cached per argument triple.
pub fn yule_normalizer(n: usize, samples: usize, seed: u64) -> Metrics {
    static CACHE: OnceLock<NormCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(m) = cache.lock().expect("cache lock").get(&(n, samples, seed)) {
        return *m;
    }
    let leaves = padded_names("t", n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = Metrics::default();
    for _ in 0..samples {
        let a = yule_tree(&leaves, &mut rng);
        let b = yule_tree(&leaves, &mut rng);
        sum = sum.zip(raw_distance(&a, &b).expect("same leaves"), |x, y| x + y);
    }
    let mean = if samples == 0 { sum } else { sum.zip(sum, |x, _| x / samples as f64) };
    cache.lock().expect("cache lock").insert((n, samples, seed), mean);
    mean
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::newick::parse;

    #[test]
    fn small_cases() {
        let star = parse("(a,b,c);").unwrap();
        let abc = parse("((a,b),c);").unwrap();
        assert_eq!(triple_distance(&star, &abc).unwrap(), 1.0);
        assert_eq!(triple_distance(&abc, &parse("((a,c),b);").unwrap()).unwrap(), 1.0);
        let t1 = parse("((a,b),c,d);").unwrap();
        let t2 = parse("((a,b),(c,d));").unwrap();
        assert_eq!(robinson_foulds(&t1, &t2).unwrap(), 0.5);
        assert_eq!(matching_cluster(&t1, &t2).unwrap(), 2.0);
        // c and d move one level down, away from a and b
        assert_eq!(nodal_split(&t1, &t2).unwrap(), 2.0);
        assert_eq!(raw_distance(&t2, &t2).unwrap(), Metrics::default());
    }

    #[test]
    fn mismatched_leaves() {
        let e = raw_distance(&parse("(a,b,c);").unwrap(), &parse("(a,b,d);").unwrap()).unwrap_err();
        assert!(matches!(e, Error::LeafSetMismatch(ref x, ref y) if x.len() == 1 && y.len() == 1));
    }

    #[test]
    fn normalizer_is_deterministic() {
        let a = yule_normalizer(6, 50, 1);
        assert_eq!(a, yule_normalizer(6, 50, 1));
        assert!(a.values().iter().all(|v| *v > 0.0));
    }
}
