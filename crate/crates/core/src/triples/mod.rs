//! Rooted triple sets: extraction from gene trees, BUILD, closure and
//! maximum-weight consistent subsets.

mod build;
mod closure;
mod extract;
mod subset;

pub use build::{aho_graph, aho_tree, build, is_consistent, AhoGraph, ConsistencyReport};
pub use closure::{closure, infer_2order, strictly_dense_consistent};
pub use extract::{extract_species_triples, tree_species_triples};
pub use subset::{max_consistent_subset, subset_model, SubsetModel, SubsetResult, SubsetStatus};
