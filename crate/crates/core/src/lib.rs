//! Species trees from orthology relations.
//!
//! The pipeline edits each gene family's orthology graph to a nearest
//! cograph, reads event-labelled gene trees off the cotrees, extracts species
//! triples rooted at speciations, keeps a maximum-weight consistent subset
//! and builds a least-resolved species tree displaying it.

pub mod cograph;
pub mod error;
pub mod eval;
pub mod ilp;
pub mod io;
pub mod model;
pub mod sim;
pub mod species_tree;
pub mod triples;

pub use error::{Error, Result};
pub use model::{label, GeneId, Hierarchy, Label, RootedTree, SpeciesId, SpeciesMap, Triple, TripleSet};
