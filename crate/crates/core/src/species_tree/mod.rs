//! Least-resolved species trees and their support values.

mod lrt;
mod matrix;
mod support;

pub use lrt::{least_resolved_tree, tree_objective, SpeciesTreeResult, TreeMethod, TreeMode, TreeModel};
pub use matrix::{decode_matrix, ClusterMatrix};
pub use support::{support_values, Support, Supports};
