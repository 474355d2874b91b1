//! Acceptance suite. Runs every criterion, prints one line each and exits
//! non-zero when any fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use phylotriple::cograph::{cograph_edit, cotree, EditOptions, OrthologyEstimate};
use phylotriple::eval::{bootstrap, majority_consensus, BootstrapOptions, BootstrapScheme};
use phylotriple::ilp::SolveOptions;
use phylotriple::model::{label, tr, Label, SpeciesMap, TripleSet};
use phylotriple::sim::{simulate, yule_tree, NoiseModel, SimConfig};
use phylotriple::species_tree::{least_resolved_tree, support_values, tree_objective, TreeMode};
use phylotriple::triples::{aho_tree, closure, is_consistent, max_consistent_subset, strictly_dense_consistent};
use phylotriple_cli::{median, reconstruct, run_experiment, ExperimentGrid, StageOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

/// Name, check and time budget in seconds.
type Criterion = (&'static str, fn() -> Outcome, u64);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn edit_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let opts = EditOptions { exact_limit: 0, ..Default::default() };
    for k in 0..300 {
        let n = rng.random_range(2..=7);
        let species = rng.random_range(2..=n.max(2));
        let density = rng.random_range(0.2..0.8);
        let g = random_relation(&mut rng, n, species, density);
        let e = cograph_edit(&g, &opts);
        let want = brute_force_edit_cost(&g);
        if !e.is_exact() || (e.cost - want as f64).abs() > 1e-9 {
            return Err(format!("graph {k}: program cost {} ({:?}), brute force {want}", e.cost, e.status));
        }
    }
    Ok("300 graphs".into())
}

fn cotree_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for k in 0..500 {
        let n = rng.random_range(1..=40);
        let edges = random_cograph(&mut rng, n);
        let genes: Vec<Label> = (0..n).map(|i| label(&format!("g{i:02}"))).collect();
        let map: SpeciesMap = genes.iter().map(|g| (g.clone(), label(&format!("S{g}")))).collect();
        let mut g = OrthologyEstimate::new(map.clone());
        for &(i, j) in &edges {
            g.set(&genes[i], &genes[j], 1.0).map_err(|e| e.to_string())?;
        }
        let t = cotree(g.genes(), &g.binary_graph(), &map).map_err(|e| format!("cograph {k}: {e}"))?;
        let mut back = OrthologyEstimate::new(map);
        for (a, b) in t.orthologous_pairs() {
            back.set(&a, &b, 1.0).map_err(|e| e.to_string())?;
        }
        let pairs = |r: &OrthologyEstimate| r.pairs().map(|(a, b, w)| (a.clone(), b.clone(), w)).collect::<Vec<_>>();
        if pairs(&back) != pairs(&g) {
            return Err(format!("cograph {k} on {n} vertices changed"));
        }
    }
    Ok("500 cographs".into())
}

fn dense_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut consistent = 0;
    for k in 0..500 {
        let n = rng.random_range(4..=6);
        // half of the sets come from binary trees, some with one trio flipped
        let r = if k % 2 == 0 {
            random_strictly_dense(&mut rng, n)
        } else {
            let names = leaf_names(n);
            let t = yule_tree(&names, &mut rng);
            let mut r = t.displayed_triples();
            if rng.random_bool(0.5) {
                let x = r.triples().nth(rng.random_range(0..r.len())).cloned().unwrap();
                r.remove(&x);
                r.insert(x.alternatives()[rng.random_range(0..2)].clone(), 1.0);
            }
            r
        };
        let dense = strictly_dense_consistent(&r).map_err(|e| e.to_string())?;
        let build = is_consistent(&r);
        if dense != build {
            return Err(format!("set {k}: pairwise closure says {dense}, BUILD says {build}"));
        }
        consistent += build as usize;
    }
    Ok(format!("500 sets, {consistent} consistent"))
}

fn displayed_by(c: &Clusters, r: &TripleSet, names: &[Label]) -> bool {
    r.triples().all(|t| {
        let (x, y, z) = from_triple(names, t);
        c.displays(x, y, z)
    })
}

fn closure_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for k in 0..100 {
        let n = rng.random_range(3..=5);
        let names = leaf_names(n);
        let trees = all_trees(n);
        let (r, _) = random_consistent(&mut rng, n, &trees);
        let displaying: Vec<&Clusters> = trees.iter().filter(|c| displayed_by(c, &r, &names)).collect();
        let mut want = BTreeSet::new();
        for i in 0..n {
            for j in i + 1..n {
                for l in 0..n {
                    if l != i && l != j && displaying.iter().all(|c| c.displays(i, j, l)) {
                        want.insert((i, j, l));
                    }
                }
            }
        }
        let got: BTreeSet<_> =
            closure(&r).map_err(|e| e.to_string())?.triples().map(|t| from_triple(&names, t)).collect();
        if got != want {
            return Err(format!("set {k}: closure has {} triples, oracle {}", got.len(), want.len()));
        }
    }
    Ok("100 sets".into())
}

fn subset_optimality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for k in 0..200 {
        let n = rng.random_range(3..=6);
        let names = leaf_names(n);
        let mut s = TripleSet::with_universe(names.iter().cloned());
        let m = rng.random_range(1..=10).min(n * (n - 1) * (n - 2) / 2);
        while s.len() < m {
            let a = rng.random_range(0..n);
            let b = (a + rng.random_range(1..n)) % n;
            let c = rng.random_range(0..n);
            if c == a || c == b {
                continue;
            }
            s.insert(to_triple(&names, (a.min(b), a.max(b), c)), rng.random_range(1..=9) as f64);
        }
        let list: Vec<(usize, usize, usize)> = s.triples().map(|t| from_triple(&names, t)).collect();
        let weights: Vec<f64> = s.iter().map(|(_, w)| *w).collect();
        // masks of input triples displayed together by some tree
        let masks: BTreeSet<u32> = all_trees(n)
            .iter()
            .map(|c| (0..list.len()).filter(|&i| c.displays(list[i].0, list[i].1, list[i].2)).map(|i| 1 << i).sum())
            .collect();
        let mut best = 0.0f64;
        for sub in 0u32..1 << list.len() {
            if masks.iter().any(|&mk| mk & sub == sub) {
                best = best.max((0..list.len()).filter(|&i| sub >> i & 1 == 1).map(|i| weights[i]).sum());
            }
        }
        let got = max_consistent_subset(&s, SolveOptions::unlimited());
        let w = got.selected.total_weight();
        if !got.is_exact() || !is_consistent(&got.selected) || (w - best).abs() > 1e-9 {
            return Err(format!("set {k}: program weight {w}, exhaustive {best}"));
        }
    }
    Ok("200 sets".into())
}

fn least_resolved_optimality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for k in 0..100 {
        let n = rng.random_range(3..=6);
        let names = leaf_names(n);
        let trees = all_trees(n);
        let (r, _) = random_consistent(&mut rng, n, &trees);
        let fit: Vec<&Clusters> = trees.iter().filter(|c| displayed_by(c, &r, &names)).collect();
        let min_v = fit.iter().map(|c| c.inner_count()).min().unwrap() as f64;
        let min_t = fit.iter().map(|c| c.triples().len()).min().unwrap() as f64;
        for (mode, want) in [(TreeMode::MinVertices, min_v), (TreeMode::MinTriples, min_t)] {
            let got = least_resolved_tree(&r, mode, SolveOptions::unlimited()).map_err(|e| e.to_string())?;
            let shown = got.tree.displayed_triples();
            let displays = r.triples().all(|t| shown.contains(t));
            if !got.exact || !displays || got.objective != want || tree_objective(&got.tree, mode) != want {
                return Err(format!("set {k} {mode}: objective {}, brute force {want}", got.objective));
            }
        }
    }
    Ok("100 sets, both objectives".into())
}

fn binary_recovery() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in 0..200 {
        let n = rng.random_range(3..=8);
        let t = yule_tree(&leaf_names(n), &mut rng);
        let r = t.displayed_triples();
        let aho = aho_tree(&r).into_result().map_err(|e| e.to_string())?;
        if aho != t {
            return Err(format!("tree {k}: BUILD differs"));
        }
        for mode in [TreeMode::MinVertices, TreeMode::MinTriples, TreeMode::Build] {
            let got = least_resolved_tree(&r, mode, SolveOptions::unlimited()).map_err(|e| e.to_string())?;
            if got.tree != t {
                return Err(format!("tree {k}: {mode} returned a different tree"));
            }
        }
    }
    Ok("200 trees".into())
}

fn noise_free_recovery() -> Outcome {
    let stages = StageOptions::default();
    let mut tts = Vec::new();
    for seed in 0..50 {
        let cfg = SimConfig { species: 10, families: 200, duplication_rate: 1.0, seed, ..Default::default() };
        let data = simulate(&cfg).map_err(|e| e.to_string())?;
        let r = reconstruct(&data.orthology, &data.species_tree.leaf_labels(), &stages).map_err(|e| e.to_string())?;
        let truth = data.species_tree.displayed_triples();
        if !r.extracted.triples().all(|t| truth.contains(t)) {
            return Err(format!("dataset {seed}: extracted triple not displayed by the true tree"));
        }
        let d = phylotriple::eval::tree_distance(&r.tree.tree, &data.species_tree).map_err(|e| e.to_string())?;
        tts.push(d.normalized.tt);
    }
    let m = median(&tts);
    let worst = tts.iter().copied().fold(0.0, f64::max);
    check(m <= 0.10, format!("50 datasets, median TT {m:.3}, max {worst:.3}"))
}

fn noise_asymmetry() -> Outcome {
    let models = [NoiseModel::Orthologous, NoiseModel::Paralogous];
    let grid = ExperimentGrid {
        species: vec![10],
        families: vec![100],
        noise: models.iter().map(|&m| Some((m, 0.15))).collect(),
        replicates: 30,
        duplication_rate: 0.5,
        stages: StageOptions { time_limit: Some(Duration::from_millis(500)), ..Default::default() },
        ..Default::default()
    };
    let rows = run_experiment(&grid).map_err(|e| e.to_string())?;
    let med = |m: NoiseModel| median(&rows.iter().filter(|r| r.noise == m.name()).map(|r| r.distance.normalized.tt).collect::<Vec<_>>());
    let (ii, iii) = (med(NoiseModel::Orthologous), med(NoiseModel::Paralogous));
    check(ii <= iii, format!("median TT orthologous {ii:.3}, paralogous {iii:.3}"))
}

fn support_sanity() -> Outcome {
    let data = simulate(&SimConfig { species: 8, families: 100, seed: 10, ..Default::default() }).map_err(|e| e.to_string())?;
    let r = reconstruct(&data.orthology, &data.species_tree.leaf_labels(), &StageOptions::default())
        .map_err(|e| e.to_string())?;
    let all_one = r.supports.global.value == 1.0 && r.supports.nodes.iter().flatten().all(|s| s.value == 1.0);
    if !all_one {
        return Err("conflict-free run has support below 1".into());
    }
    let mut s = TripleSet::new();
    s.insert(tr("a", "b", "c"), 3.0);
    s.insert(tr("a", "c", "b"), 1.0);
    s.insert(tr("b", "c", "a"), 1.0);
    let sel = max_consistent_subset(&s, SolveOptions::unlimited()).selected;
    let t = least_resolved_tree(&sel, TreeMode::MinVertices, SolveOptions::unlimited()).map_err(|e| e.to_string())?;
    let sup = support_values(&t.tree, &sel, &s);
    let node = t.tree.inner_nodes().filter_map(|v| sup.nodes[v]).find(|x| x.supported).map(|x| x.value);
    check(
        sup.global.value == 0.6 && node == Some(0.6),
        format!("conflict-free s = 1, 3:1:1 conflict s = {}", sup.global.value),
    )
}

fn bootstrap_regression() -> Outcome {
    let data = simulate(&SimConfig { species: 10, families: 100, seed: 21, ..Default::default() }).map_err(|e| e.to_string())?;
    let r = reconstruct(&data.orthology, &data.species_tree.leaf_labels(), &StageOptions::default())
        .map_err(|e| e.to_string())?;
    let input = r.bootstrap_input();
    for scheme in [BootstrapScheme::Components, BootstrapScheme::Triples] {
        let opts = BootstrapOptions {
            scheme,
            replicates: 100,
            seed: 5,
            mode: TreeMode::MinVertices,
            solve: SolveOptions::unlimited(),
        };
        let trees = bootstrap(&input, &opts).map_err(|e| e.to_string())?;
        let consensus = majority_consensus(&trees).map_err(|e| e.to_string())?;
        if consensus != r.tree.tree {
            return Err(format!("{scheme:?}: consensus differs from the point estimate"));
        }
    }
    Ok("100 replicates, both schemes".into())
}

fn run_cli(args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_phylotriple")).args(args).output().map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(())
    } else {
        Err(format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)))
    }
}

fn artifacts(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap() != phylotriple_cli::run::TIMINGS)
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let sim = tmp.path().join("sim");
    let s = |p: &Path| p.to_string_lossy().into_owned();
    run_cli(&["simulate", "--species", "8", "--families", "60", "--noise", "homologous:0.05", "--seed", "3", "--out", &s(&sim)])?;
    let mut outs = Vec::new();
    for threads in ["1", "8"] {
        let out = tmp.path().join(format!("run{threads}"));
        run_cli(&[
            "--threads",
            threads,
            "run",
            "--orthology",
            &s(&sim.join("orthology.tsv")),
            "--species-map",
            &s(&sim.join("species_map.tsv")),
            "--bootstrap",
            "components",
            "--replicates",
            "20",
            "--out",
            &s(&out),
        ])?;
        outs.push(artifacts(&out));
    }
    let names: Vec<&str> = outs[0].iter().map(|(n, _)| n.as_str()).collect();
    check(outs[0] == outs[1] && !names.is_empty(), format!("{} artifacts identical: {}", names.len(), names.join(" ")))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("cograph editing exactness", edit_exactness, 120),
        ("cotree round trip", cotree_round_trip, 60),
        ("dense pairwise closure vs BUILD", dense_equivalence, 60),
        ("closure oracle", closure_oracle, 120),
        ("max consistent subset optimality", subset_optimality, 180),
        ("least resolved optimality", least_resolved_optimality, 300),
        ("binary tree recovery in all modes", binary_recovery, 120),
        ("noise-free recovery", noise_free_recovery, 900),
        ("noise asymmetry", noise_asymmetry, 1200),
        ("support sanity", support_sanity, 600),
        ("bootstrap consensus", bootstrap_regression, 600),
        ("thread-count determinism", determinism, 600),
    ];
    let filter: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (i, (name, f, budget)) in criteria.iter().enumerate() {
        let k = i + 1;
        if !filter.is_empty() && !filter.contains(&k) {
            continue;
        }
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        let (ok, detail) = match outcome {
            Ok(d) if secs <= *budget as f64 => (true, d),
            Ok(d) => (false, format!("{d}; took {secs:.1}s, budget {budget}s")),
            Err(d) => (false, d),
        };
        failed += !ok as usize;
        println!("criterion {k:2} {}: {name}: {detail} ({secs:.1}s)", if ok { "PASS" } else { "FAIL" });
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
