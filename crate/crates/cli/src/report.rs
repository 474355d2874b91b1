use serde::Serialize;

use phylotriple::cograph::{EditMethod, EditStatus};
use phylotriple::eval::BootstrapScheme;
use phylotriple::species_tree::{Support, TreeMethod, TreeMode};
use phylotriple::triples::SubsetStatus;
use phylotriple::Label;

use crate::config::{SolverChoice, StageOptions};
use crate::pipeline::Reconstruction;

/// Wall-clock seconds per stage.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct StageTimings {
    pub editing: f64,
    pub extraction: f64,
    pub subset: f64,
    pub tree: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentReport {
    pub genes: usize,
    pub status: EditStatus,
    pub method: EditMethod,
    pub cost: f64,
    pub inserted: usize,
    pub deleted: usize,
    pub gene_trees: usize,
    pub nodes: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct NodeSupport {
    pub cluster: Vec<Label>,
    pub value: f64,
    pub supported: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BootstrapReport {
    pub scheme: BootstrapScheme,
    pub replicates: usize,
    pub consensus: String,
    pub consensus_matches_point: bool,
}

/// Summary written as `report.json`. Timings live beside it in
/// `timings.json` so that reruns produce identical reports.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub seed: u64,
    pub solver: SolverChoice,
    pub options: StageOptions,
    pub genes: usize,
    pub species: usize,
    pub components: Vec<ComponentReport>,
    pub extracted_triples: usize,
    pub extracted_weight: f64,
    pub selected_triples: usize,
    pub subset_status: Option<SubsetStatus>,
    pub tree_mode: TreeMode,
    pub tree_method: Option<TreeMethod>,
    pub tree_objective: Option<f64>,
    pub species_tree: Option<String>,
    pub global_support: Option<Support>,
    pub node_supports: Vec<NodeSupport>,
    pub exact: bool,
    pub no_signal: bool,
    pub bootstrap: Option<BootstrapReport>,
    #[serde(skip)]
    pub timings: StageTimings,
}

impl RunReport {
    pub fn new(seed: u64, solver: SolverChoice, options: StageOptions, genes: usize, species: usize) -> Self {
        RunReport {
            seed,
            solver,
            options,
            genes,
            species,
            components: Vec::new(),
            extracted_triples: 0,
            extracted_weight: 0.0,
            selected_triples: 0,
            subset_status: None,
            tree_mode: options.tree_mode,
            tree_method: None,
            tree_objective: None,
            species_tree: None,
            global_support: None,
            node_supports: Vec::new(),
            exact: true,
            no_signal: false,
            bootstrap: None,
            timings: StageTimings::default(),
        }
    }

    pub fn record(&mut self, r: &Reconstruction, newick: String) {
        self.components = r
            .components
            .iter()
            .map(|c| ComponentReport {
                genes: c.edited.genes.len(),
                status: c.edited.status,
                method: c.edited.method,
                cost: c.edited.cost,
                inserted: c.edited.inserted.len(),
                deleted: c.edited.deleted.len(),
                gene_trees: c.cotrees.len(),
                nodes: c.edited.nodes,
            })
            .collect();
        self.extracted_triples = r.extracted.len();
        self.extracted_weight = r.extracted.total_weight();
        self.selected_triples = r.subset.selected.len();
        self.subset_status = Some(r.subset.status);
        self.tree_method = Some(r.tree.method);
        self.tree_objective = Some(r.tree.objective);
        self.species_tree = Some(newick);
        self.global_support = Some(r.supports.global);
        let clusters = r.tree.tree.clusters();
        self.node_supports = r
            .supports
            .nodes
            .iter()
            .enumerate()
            .filter_map(|(v, s)| {
                s.map(|s| NodeSupport {
                    cluster: clusters[v].iter().cloned().collect(),
                    value: s.value,
                    supported: s.supported,
                })
            })
            .collect();
        self.exact = r.is_exact();
        self.no_signal = r.no_signal();
        self.timings = r.timings;
    }
}
