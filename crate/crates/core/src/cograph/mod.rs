//! Orthology graphs: components, cograph recognition, editing and cotrees.

mod cotree;
mod edit;
mod exact;
mod graph;
mod relation;

pub use cotree::{cotree, Event, EventLabeledTree};
pub use edit::{cograph_edit, destroy_p4s, edit_cost, edit_model, EditMethod, EditOptions, EditStatus, EditedCograph};
pub use exact::{cut_edit, subset_edit};
pub use graph::Graph;
pub use relation::{connected_components, OrthologyEstimate, BINARIZATION_THRESHOLD};

use crate::model::GeneId;

/// Some induced path w-x-y-z in the thresholded graph.
pub fn find_p4(g: &OrthologyEstimate) -> Option<[GeneId; 4]> {
    g.binary_graph().find_p4().map(|q| q.map(|i| g.genes()[i].clone()))
}

pub fn is_cograph(g: &OrthologyEstimate) -> bool {
    find_p4(g).is_none()
}

impl EditedCograph {
    /// One cotree per connected component of the edited graph.
    pub fn cotrees(&self, species: &crate::model::SpeciesMap) -> crate::error::Result<Vec<EventLabeledTree>> {
        self.graph
            .components()
            .into_iter()
            .map(|c| {
                let genes: Vec<GeneId> = c.iter().map(|&i| self.genes[i].clone()).collect();
                cotree(&genes, &self.graph.induced(&c), species)
            })
            .collect()
    }
}
