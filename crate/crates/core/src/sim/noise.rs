use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cograph::OrthologyEstimate;
use crate::error::{Error, Result};
use crate::model::{GeneId, SpeciesMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseModel {
    /// Every pair flips.
    Homologous,
    /// Non-edges between different species become edges.
    Orthologous,
    /// Edges are deleted.
    Paralogous,
    /// Genes move to another species; edges are untouched.
    Xenologous,
}

impl NoiseModel {
    pub const ALL: [NoiseModel; 4] =
        [NoiseModel::Homologous, NoiseModel::Orthologous, NoiseModel::Paralogous, NoiseModel::Xenologous];

    pub fn name(self) -> &'static str {
        match self {
            NoiseModel::Homologous => "homologous",
            NoiseModel::Orthologous => "orthologous",
            NoiseModel::Paralogous => "paralogous",
            NoiseModel::Xenologous => "xenologous",
        }
    }
}

impl fmt::Display for NoiseModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NoiseModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "homologous" | "i" => Ok(NoiseModel::Homologous),
            "orthologous" | "ii" => Ok(NoiseModel::Orthologous),
            "paralogous" | "iii" => Ok(NoiseModel::Paralogous),
            "xenologous" | "iv" => Ok(NoiseModel::Xenologous),
            _ => Err(Error::Simulation(format!("unknown noise model {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub model: NoiseModel,
    pub p: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(model: NoiseModel, p: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Simulation(format!("noise probability {p} outside [0,1]")));
        }
        Ok(NoiseSpec { model, p, seed })
    }
}

fn perturb_pairs(g: &mut OrthologyEstimate, genes: &[GeneId], model: NoiseModel, p: f64, rng: &mut ChaCha8Rng) {
    for (k, a) in genes.iter().enumerate() {
        for b in &genes[k + 1..] {
            let edge = g.is_edge(a, b);
            let cross = g.species_of(a) != g.species_of(b);
            let target = match model {
                NoiseModel::Homologous if edge || cross => !edge,
                NoiseModel::Orthologous if !edge && cross => true,
                NoiseModel::Paralogous if edge => false,
                _ => continue,
            };
            if rng.random::<f64>() < p {
                g.set(a, b, if target { 1.0 } else { 0.0 }).expect("genes of the relation");
            }
        }
    }
}

fn reassign(g: &OrthologyEstimate, p: f64, rng: &mut ChaCha8Rng) -> OrthologyEstimate {
    let species = g.species_map().species();
    let mut map = SpeciesMap::new();
    for (gene, sp) in g.species_map().iter() {
        let mut s = sp.clone();
        if species.len() > 1 && rng.random::<f64>() < p {
            let others: Vec<_> = species.iter().filter(|x| *x != sp).collect();
            s = others[rng.random_range(0..others.len())].clone();
        }
        map.insert(gene.clone(), s);
    }
    g.with_species_map(map).expect("same genes")
}

/// Perturb the relation over all gene pairs.
pub fn add_noise(g: &OrthologyEstimate, spec: &NoiseSpec) -> OrthologyEstimate {
    add_noise_within(g, &[g.genes().to_vec()], spec)
}

/// Perturb pairs only inside each block of genes (usually the gene
/// families); species reassignment still applies to every gene.
pub fn add_noise_within(g: &OrthologyEstimate, blocks: &[Vec<GeneId>], spec: &NoiseSpec) -> OrthologyEstimate {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    if spec.model == NoiseModel::Xenologous {
        return reassign(g, spec.p, &mut rng);
    }
    let mut out = g.clone();
    for block in blocks {
        let mut genes = block.clone();
        genes.sort();
        perturb_pairs(&mut out, &genes, spec.model, spec.p, &mut rng);
    }
    out
}
