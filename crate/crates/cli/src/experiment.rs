use std::fmt::Write;

use rayon::prelude::*;
use serde::Serialize;

use phylotriple::cograph::OrthologyEstimate;
use phylotriple::eval::{tree_distance, DistanceReport};
use phylotriple::sim::{add_noise_within, family_genes, simulate, NoiseModel, NoiseSpec, SimConfig, SimulatedData};
use phylotriple::{Label, Result};

use crate::config::StageOptions;
use crate::pipeline::{reconstruct, Reconstruction};

/// Noise applied to a simulated relation; `None` leaves it exact.
pub type NoiseSetting = Option<(NoiseModel, f64)>;

#[derive(Debug, Clone)]
pub struct ExperimentGrid {
    pub species: Vec<usize>,
    pub families: Vec<usize>,
    pub noise: Vec<NoiseSetting>,
    pub replicates: usize,
    pub seed: u64,
    pub duplication_rate: f64,
    pub loss_rate: f64,
    pub loss_increment: f64,
    pub stages: StageOptions,
}

impl Default for ExperimentGrid {
    fn default() -> Self {
        let sim = SimConfig::default();
        ExperimentGrid {
            species: vec![10],
            families: vec![100],
            noise: vec![None],
            replicates: 20,
            seed: 0,
            duplication_rate: sim.duplication_rate,
            loss_rate: sim.loss_rate,
            loss_increment: sim.loss_increment,
            stages: StageOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentRow {
    pub species: usize,
    pub families: usize,
    pub noise: String,
    pub p: f64,
    pub replicate: usize,
    pub distance: DistanceReport,
    pub exact: bool,
}

/// The perturbed relation: pair noise stays inside families.
pub fn noisy_relation(data: &SimulatedData, noise: NoiseSetting, seed: u64) -> Result<OrthologyEstimate> {
    match noise {
        None => Ok(data.orthology.clone()),
        Some((model, p)) => {
            let spec = NoiseSpec::new(model, p, seed)?;
            Ok(add_noise_within(&data.orthology, &family_genes(data), &spec))
        }
    }
}

/// Seed of the noise applied to the dataset simulated from `seed`.
pub fn noise_seed(seed: u64) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(1)
}

/// Simulate, perturb and reconstruct one dataset.
pub fn run_replicate(
    sim: &SimConfig,
    noise: NoiseSetting,
    stages: &StageOptions,
) -> Result<(SimulatedData, Reconstruction, DistanceReport)> {
    let data = simulate(sim)?;
    let g = noisy_relation(&data, noise, noise_seed(sim.seed))?;
    let truth: Vec<Label> = data.species_tree.leaf_labels();
    let r = reconstruct(&g, &truth, stages)?;
    let d = tree_distance(&r.tree.tree, &data.species_tree)?;
    Ok((data, r, d))
}

/// Distances between reconstructed and true species trees over the grid.
/// Replicate `k` of every cell simulates from seed `seed + k`, so cells that
/// differ only in noise share their datasets.
pub fn run_experiment(grid: &ExperimentGrid) -> Result<Vec<ExperimentRow>> {
    let mut jobs = Vec::new();
    for &species in &grid.species {
        for &families in &grid.families {
            for &noise in &grid.noise {
                for replicate in 0..grid.replicates {
                    jobs.push((species, families, noise, replicate));
                }
            }
        }
    }
    jobs.par_iter()
        .map(|&(species, families, noise, replicate)| {
            let sim = SimConfig {
                species,
                species_tree: None,
                families,
                duplication_rate: grid.duplication_rate,
                loss_rate: grid.loss_rate,
                loss_increment: grid.loss_increment,
                seed: grid.seed.wrapping_add(replicate as u64),
            };
            let (_, r, distance) = run_replicate(&sim, noise, &grid.stages)?;
            Ok(ExperimentRow {
                species,
                families,
                noise: noise.map_or("none".to_string(), |(m, _)| m.to_string()),
                p: noise.map_or(0.0, |(_, p)| p),
                replicate,
                distance,
                exact: r.is_exact(),
            })
        })
        .collect()
}

/// One row per dataset with the normalized distances.
pub fn experiment_tsv(rows: &[ExperimentRow]) -> String {
    let mut out = String::from("species\tfamilies\tnoise\tp\treplicate\tMC\tRF\tNS\tTT\texact\n");
    for r in rows {
        let n = r.distance.normalized;
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{}",
            r.species, r.families, r.noise, r.p, r.replicate, n.mc, n.rf, n.ns, n.tt, r.exact
        );
    }
    out
}

/// Median of the values; `NaN` for an empty slice.
pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    }
}
