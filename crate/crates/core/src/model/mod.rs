//! Core domain types: labels, rooted trees, triples and hierarchies.

mod hierarchy;
mod label;
pub mod newick;
pub mod tree;
mod triple;

pub use hierarchy::{compatible, Hierarchy};
pub use label::{label, GeneId, Label, SpeciesId, SpeciesMap};
pub use tree::{LcaMatrix, NodeId, RootedTree, Subtree};
pub use triple::{tr, Triple, TripleSet};
