//! Shared fixtures for the benchmarks.

use phylotriple::cograph::{connected_components, OrthologyEstimate};
use phylotriple::sim::{add_noise_within, family_genes, simulate, NoiseModel, NoiseSpec, SimConfig, SimulatedData};
use phylotriple::triples::extract_species_triples;
use phylotriple::TripleSet;

pub fn dataset(species: usize, families: usize, seed: u64) -> SimulatedData {
    simulate(&SimConfig { species, families, seed, ..Default::default() }).expect("valid simulation")
}

/// The largest connected component of a relation perturbed by homologous
/// noise whose size lies in `lo..=hi`.
pub fn noisy_component(lo: usize, hi: usize, seed: u64) -> OrthologyEstimate {
    for s in seed.. {
        let data = dataset(8, 20, s);
        let spec = NoiseSpec::new(NoiseModel::Homologous, 0.1, s).expect("valid p");
        let g = add_noise_within(&data.orthology, &family_genes(&data), &spec);
        if let Some(c) = connected_components(&g)
            .into_iter()
            .filter(|c| (lo..=hi).contains(&c.genes().len()))
            .max_by_key(|c| c.genes().len())
        {
            return c;
        }
    }
    unreachable!()
}

/// Species triples of a noise-free dataset.
pub fn extracted_triples(species: usize, families: usize, seed: u64) -> TripleSet {
    let data = dataset(species, families, seed);
    let mut s = extract_species_triples(&data.families);
    s.extend_universe(data.species_tree.leaf_labels());
    s
}
