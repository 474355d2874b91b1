//! Tree distances, bootstrapping and consensus.

mod bootstrap;
mod consensus;
mod metrics;

pub use bootstrap::{bootstrap, BootstrapInput, BootstrapOptions, BootstrapScheme};
pub use consensus::majority_consensus;
pub use metrics::{
    matching_cluster, nodal_split, raw_distance, robinson_foulds, tree_distance, triple_distance, yule_normalizer,
    DistanceReport, Metrics, YULE_SAMPLES, YULE_SEED,
};
