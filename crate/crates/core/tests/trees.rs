mod common;

use common::{all_trees, leaf_names, Clusters};
use phylotriple::eval::{raw_distance, robinson_foulds, triple_distance};
use phylotriple::model::newick;
use proptest::prelude::*;

#[test]
fn enumeration_counts_rooted_trees() {
    // number of rooted phylogenetic trees on n labelled leaves
    let counts: Vec<usize> = (1..=6).map(|n| all_trees(n).len()).collect();
    assert_eq!(counts, [1, 1, 4, 26, 236, 2752]);
    let distinct: std::collections::BTreeSet<_> = all_trees(5).into_iter().collect();
    assert_eq!(distinct.len(), 236);
}

#[test]
fn newick_and_cluster_round_trip() {
    let names = leaf_names(5);
    for c in all_trees(5) {
        let t = c.to_tree(&names);
        let back = newick::parse(&newick::write(&t)).unwrap();
        assert_eq!(back, t);
        assert_eq!(Clusters::from_tree(&back, &names), c);
        assert_eq!(back.inner_count(), c.inner_count());
    }
}

#[test]
fn displayed_triples_match_clusters() {
    let names = leaf_names(5);
    for c in all_trees(5) {
        let got: std::collections::BTreeSet<_> =
            c.to_tree(&names).displayed_triples().triples().map(|t| common::from_triple(&names, t)).collect();
        assert_eq!(got, c.triples());
    }
}

fn resolution(c: &Clusters, i: usize, j: usize, k: usize) -> Option<usize> {
    [(i, j, k), (i, k, j), (j, k, i)].iter().position(|&(x, y, z)| c.displays(x, y, z))
}

fn trio_disagreements(a: &Clusters, b: &Clusters) -> usize {
    let n = a.n;
    let mut d = 0;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if resolution(a, i, j, k) != resolution(b, i, j, k) {
                    d += 1;
                }
            }
        }
    }
    d
}

proptest! {
    #[test]
    fn distances_are_pseudometrics(i in 0usize..236, j in 0usize..236, k in 0usize..236) {
        let names = leaf_names(5);
        let trees = all_trees(5);
        let (a, b, c) = (trees[i].to_tree(&names), trees[j].to_tree(&names), trees[k].to_tree(&names));
        let ab = raw_distance(&a, &b).unwrap().values();
        let ba = raw_distance(&b, &a).unwrap().values();
        let bc = raw_distance(&b, &c).unwrap().values();
        let ac = raw_distance(&a, &c).unwrap().values();
        let aa = raw_distance(&a, &a).unwrap().values();
        for m in 0..4 {
            prop_assert!(aa[m].abs() < 1e-12);
            prop_assert!((ab[m] - ba[m]).abs() < 1e-9);
            prop_assert!(ab[m] >= 0.0);
        }
        // MC, RF and TT are metrics on trees
        for m in [0, 1, 3] {
            prop_assert!(ac[m] <= ab[m] + bc[m] + 1e-9);
        }
    }

    #[test]
    fn rf_and_tt_match_definitions(i in 0usize..2752, j in 0usize..2752) {
        let names = leaf_names(6);
        let trees = all_trees(6);
        let (ca, cb) = (&trees[i], &trees[j]);
        let (a, b) = (ca.to_tree(&names), cb.to_tree(&names));
        let sym = ca.sets.symmetric_difference(&cb.sets).count();
        prop_assert_eq!(robinson_foulds(&a, &b).unwrap(), sym as f64 / 2.0);
        prop_assert_eq!(triple_distance(&a, &b).unwrap(), trio_disagreements(ca, cb) as f64);
    }
}
