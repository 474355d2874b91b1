use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use log::{info, warn};

use phylotriple::cograph::{edit_model, OrthologyEstimate};
use phylotriple::eval::{bootstrap, majority_consensus, BootstrapOptions};
use phylotriple::ilp::export_lp;
use phylotriple::io;
use phylotriple::model::newick;
use phylotriple::species_tree::Supports;
use phylotriple::RootedTree;

use crate::config::{PipelineConfig, SolverChoice};
use crate::pipeline::{non_cograph_components, reconstruct, solve_options, Reconstruction};
use crate::report::{BootstrapReport, RunReport};

pub const EDITED_ORTHOLOGY: &str = "edited_orthology.tsv";
pub const GENE_TREES: &str = "gene_trees.nwk";
pub const SPECIES_TRIPLES: &str = "species_triples.tsv";
pub const SELECTED_TRIPLES: &str = "selected_triples.tsv";
pub const SPECIES_TREE: &str = "species_tree.nwk";
pub const REPORT: &str = "report.json";
pub const TIMINGS: &str = "timings.json";
pub const BOOTSTRAP_TREES: &str = "bootstrap_trees.nwk";
pub const CONSENSUS_TREE: &str = "consensus.nwk";

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("{}: cannot read", path.display()))
}

pub fn write_text(dir: &Path, name: &str, text: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, text).with_context(|| format!("{}: cannot write", path.display()))
}

/// Read the relation and its species map.
pub fn load_relation(orthology: &Path, species_map: &Path) -> Result<OrthologyEstimate> {
    let map = io::read_species_map(&species_map.display().to_string(), &read_text(species_map)?)?;
    let g = io::read_orthology(&orthology.display().to_string(), &read_text(orthology)?, map)?;
    Ok(g)
}

/// Newick with support values on the inner vertices that have any.
pub fn tree_with_supports(tree: &RootedTree, supports: &Supports) -> String {
    newick::write_support(tree, |v| supports.nodes[v].filter(|s| s.supported).map(|s| s.value))
}

pub fn gene_trees_newick(r: &Reconstruction) -> String {
    r.cotrees().map(|t| t.to_newick() + "\n").collect()
}

fn write_reconstruction(dir: &Path, g: &OrthologyEstimate, r: &Reconstruction, species_tree: &str) -> Result<()> {
    write_text(dir, EDITED_ORTHOLOGY, &io::write_orthology(&r.edited_relation(g)?))?;
    write_text(dir, GENE_TREES, &gene_trees_newick(r))?;
    write_text(dir, SPECIES_TRIPLES, &io::write_triples(&r.extracted))?;
    write_text(dir, SELECTED_TRIPLES, &io::write_triples(&r.subset.selected))?;
    write_text(dir, SPECIES_TREE, &format!("{species_tree}\n"))?;
    Ok(())
}

fn write_report(dir: &Path, report: &RunReport) -> Result<()> {
    write_text(dir, REPORT, &(serde_json::to_string_pretty(report)? + "\n"))?;
    write_text(dir, TIMINGS, &(serde_json::to_string_pretty(&report.timings)? + "\n"))
}

/// Write the editing program of every component that is not a cograph.
fn export_only(cfg: &PipelineConfig, g: &OrthologyEstimate, report: &mut RunReport) -> Result<()> {
    let dir = cfg.out.join("lp");
    fs::create_dir_all(&dir).with_context(|| format!("{}: cannot create", dir.display()))?;
    let comps = non_cograph_components(g);
    let mut written = 0;
    for (k, c) in comps.iter().enumerate() {
        if c.genes().len() > cfg.stages.component_limit {
            warn!("component {k} has {} genes, above the limit; not exported", c.genes().len());
            continue;
        }
        write_text(&dir, &format!("edit_{k:04}.lp"), &export_lp(&edit_model(c)))?;
        written += 1;
    }
    info!("wrote {written} editing programs to {}", dir.display());
    report.exact = false;
    write_report(&cfg.out, report)
}

/// Run every stage and write the artifacts into `cfg.out`.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<RunReport> {
    cfg.validate()?;
    let g = load_relation(&cfg.orthology, &cfg.species_map)?;
    fs::create_dir_all(&cfg.out).with_context(|| format!("{}: cannot create", cfg.out.display()))?;
    let species = g.species_map().species().len();
    let mut report = RunReport::new(cfg.seed, cfg.solver, cfg.stages, g.genes().len(), species);
    if cfg.solver == SolverChoice::ExportOnly {
        export_only(cfg, &g, &mut report)?;
        return Ok(report);
    }

    let r = reconstruct(&g, &[], &cfg.stages)?;
    let species_tree = tree_with_supports(&r.tree.tree, &r.supports);
    if r.no_signal() {
        warn!("no species triples were extracted; the species tree is a star");
    }
    if !r.is_exact() {
        warn!("a solver limit was hit; results are not guaranteed optimal");
    }
    write_reconstruction(&cfg.out, &g, &r, &species_tree)?;
    report.record(&r, species_tree);

    if let Some(spec) = cfg.bootstrap {
        let opts = BootstrapOptions {
            scheme: spec.scheme,
            replicates: spec.replicates,
            seed: cfg.seed,
            mode: cfg.stages.tree_mode,
            solve: solve_options(&cfg.stages),
        };
        let trees = bootstrap(&r.bootstrap_input(), &opts)?;
        let consensus = majority_consensus(&trees)?;
        let text: String = trees.iter().map(|t| newick::write(t) + "\n").collect();
        write_text(&cfg.out, BOOTSTRAP_TREES, &text)?;
        write_text(&cfg.out, CONSENSUS_TREE, &(newick::write(&consensus) + "\n"))?;
        report.bootstrap = Some(BootstrapReport {
            scheme: spec.scheme,
            replicates: spec.replicates,
            consensus: newick::write(&consensus),
            consensus_matches_point: consensus == r.tree.tree,
        });
    }
    write_report(&cfg.out, &report)?;
    Ok(report)
}
