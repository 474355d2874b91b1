//! Duplication/loss simulation of gene families and orthology noise.

mod family;
mod noise;
mod yule;

pub use family::{family_genes, padded_names, simulate, SimConfig, SimulatedData};
pub use noise::{add_noise, add_noise_within, NoiseModel, NoiseSpec};
pub use yule::{yule_timed_tree, yule_tree, TimedTree};
