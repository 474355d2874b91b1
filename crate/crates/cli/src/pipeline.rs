use std::collections::BTreeSet;
use std::time::Instant;

use rayon::prelude::*;

use phylotriple::cograph::{
    cograph_edit, connected_components, is_cograph, EditOptions, EditedCograph, EventLabeledTree, OrthologyEstimate,
};
use phylotriple::eval::BootstrapInput;
use phylotriple::ilp::SolveOptions;
use phylotriple::species_tree::{least_resolved_tree, support_values, SpeciesTreeResult, Supports};
use phylotriple::triples::{extract_species_triples, max_consistent_subset, SubsetResult};
use phylotriple::{Label, Result, TripleSet};

use crate::config::StageOptions;
use crate::report::StageTimings;

/// One connected component of the input relation after editing.
#[derive(Debug, Clone)]
pub struct EditedComponent {
    pub edited: EditedCograph,
    pub cotrees: Vec<EventLabeledTree>,
}

/// Everything the four stages produce for one relation.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub components: Vec<EditedComponent>,
    /// Triples of each component, for bootstrapping.
    pub component_triples: Vec<TripleSet>,
    pub extracted: TripleSet,
    pub subset: SubsetResult,
    pub tree: SpeciesTreeResult,
    pub supports: Supports,
    pub timings: StageTimings,
}

impl Reconstruction {
    pub fn is_exact(&self) -> bool {
        self.components.iter().all(|c| c.edited.is_exact()) && self.subset.is_exact() && self.tree.exact
    }

    /// No species triple survived extraction, so the tree is a star.
    pub fn no_signal(&self) -> bool {
        self.extracted.is_empty()
    }

    pub fn cotrees(&self) -> impl Iterator<Item = &EventLabeledTree> {
        self.components.iter().flat_map(|c| &c.cotrees)
    }

    /// Edited relation over every gene of `g`.
    pub fn edited_relation(&self, g: &OrthologyEstimate) -> Result<OrthologyEstimate> {
        let mut out = OrthologyEstimate::new(g.species_map().clone());
        for c in &self.components {
            let e = &c.edited;
            for (i, j) in e.graph.edges() {
                out.set(&e.genes[i], &e.genes[j], 1.0)?;
            }
        }
        Ok(out)
    }

    pub fn bootstrap_input(&self) -> BootstrapInput {
        BootstrapInput { components: self.component_triples.clone(), species: self.extracted.universe().clone() }
    }
}

pub fn solve_options(opts: &StageOptions) -> SolveOptions {
    SolveOptions { time_limit: opts.time_limit, node_limit: None }
}

/// Edit every connected component of `g` to a cograph and read off its cotrees.
pub fn edit_stage(g: &OrthologyEstimate, opts: &StageOptions) -> Result<Vec<EditedComponent>> {
    let eo = EditOptions {
        size_limit: opts.component_limit,
        exact_limit: opts.exact_limit,
        time_limit: opts.time_limit,
        node_limit: None,
    };
    connected_components(g)
        .par_iter()
        .map(|c| {
            let edited = cograph_edit(c, &eo);
            let cotrees = edited.cotrees(g.species_map())?;
            Ok(EditedComponent { edited, cotrees })
        })
        .collect()
}

/// Components whose graph needs editing at all.
pub fn non_cograph_components(g: &OrthologyEstimate) -> Vec<OrthologyEstimate> {
    connected_components(g).into_iter().filter(|c| !is_cograph(c)).collect()
}

/// Species triples per component, and their sum over the universe `species`.
pub fn extract_stage(components: &[EditedComponent], species: &BTreeSet<Label>) -> (Vec<TripleSet>, TripleSet) {
    let per: Vec<TripleSet> = components.par_iter().map(|c| extract_species_triples(&c.cotrees)).collect();
    let mut all = TripleSet::with_universe(species.iter().cloned());
    for set in &per {
        for (t, w) in set {
            all.add(t.clone(), *w);
        }
    }
    (per, all)
}

pub fn subset_stage(extracted: &TripleSet, opts: &StageOptions) -> SubsetResult {
    max_consistent_subset(extracted, solve_options(opts))
}

pub fn tree_stage(selected: &TripleSet, opts: &StageOptions) -> Result<SpeciesTreeResult> {
    least_resolved_tree(selected, opts.tree_mode, solve_options(opts))
}

/// Run all stages on `g`. The species tree has a leaf for every species of
/// `g` and of `extra`.
pub fn reconstruct(g: &OrthologyEstimate, extra: &[Label], opts: &StageOptions) -> Result<Reconstruction> {
    let mut species: BTreeSet<Label> = g.species_map().species().into_iter().collect();
    species.extend(extra.iter().cloned());

    let t0 = Instant::now();
    let components = edit_stage(g, opts)?;
    let t1 = Instant::now();
    let (component_triples, extracted) = extract_stage(&components, &species);
    let t2 = Instant::now();
    let subset = subset_stage(&extracted, opts);
    let t3 = Instant::now();
    let tree = tree_stage(&subset.selected, opts)?;
    let supports = support_values(&tree.tree, &subset.selected, &extracted);
    let t4 = Instant::now();

    let timings = StageTimings {
        editing: (t1 - t0).as_secs_f64(),
        extraction: (t2 - t1).as_secs_f64(),
        subset: (t3 - t2).as_secs_f64(),
        tree: (t4 - t3).as_secs_f64(),
    };
    Ok(Reconstruction { components, component_triples, extracted, subset, tree, supports, timings })
}
