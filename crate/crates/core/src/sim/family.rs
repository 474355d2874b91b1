use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use serde::Serialize;

use crate::cograph::{Event, EventLabeledTree, OrthologyEstimate};
use crate::error::{Error, Result};
use crate::model::{label, GeneId, Label, RootedTree, SpeciesMap, Subtree};
use crate::sim::yule::{yule_timed_tree, TimedTree};

#[derive(Debug, Clone, Serialize)]
pub struct SimConfig {
    pub species: usize,
    /// Fixed species topology; a Yule tree is drawn when absent.
    #[serde(skip)]
    pub species_tree: Option<RootedTree>,
    pub families: usize,
    pub duplication_rate: f64,
    pub loss_rate: f64,
    /// Added to the loss rate of both copies after every duplication.
    pub loss_increment: f64,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            species: 10,
            species_tree: None,
            families: 100,
            duplication_rate: 1.0,
            loss_rate: 0.5,
            loss_increment: 0.1,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimulatedData {
    pub species_tree: RootedTree,
    pub families: Vec<EventLabeledTree>,
    pub species_map: SpeciesMap,
    /// Exact orthology: gene pairs whose lca is a speciation.
    pub orthology: OrthologyEstimate,
}

impl SimulatedData {
    /// The exact relation restricted to each family.
    pub fn family_relations(&self) -> Vec<OrthologyEstimate> {
        self.families
            .iter()
            .map(|f| self.orthology.subgraph(&f.tree().leaf_labels()).expect("family genes"))
            .collect()
    }
}

/// Zero-padded names `prefix` + index, all of equal width.
pub fn padded_names(prefix: &str, n: usize) -> Vec<Label> {
    let width = n.to_string().len();
    (1..=n).map(|i| label(&format!("{prefix}{i:0width$}"))).collect()
}

enum Gene {
    Leaf(usize),
    Inner(Event, Vec<Gene>),
}

struct Process<'a> {
    tree: &'a TimedTree,
    cfg: &'a SimConfig,
    species_of_vertex: Vec<Option<usize>>,
}

impl Process<'_> {
    /// Evolve one gene lineage from offset `t` on the edge into `v`.
    fn lineage(&self, v: usize, mut t: f64, loss: f64, rng: &mut ChaCha8Rng) -> Option<Gene> {
        let total = self.cfg.duplication_rate + loss;
        let len = self.tree.length[v];
        if total > 0.0 {
            t += Exp::new(total).expect("positive rate").sample(rng);
        } else {
            t = f64::INFINITY;
        }
        if t < len {
            if rng.random::<f64>() * total < self.cfg.duplication_rate {
                let l2 = loss + self.cfg.loss_increment;
                let kids: Vec<Gene> = (0..2).filter_map(|_| self.lineage(v, t, l2, rng)).collect();
                return join(Event::Duplication, kids);
            }
            return None;
        }
        if let Some(s) = self.species_of_vertex[v] {
            return Some(Gene::Leaf(s));
        }
        let kids: Vec<Gene> = self.tree.children[v].iter().filter_map(|&c| self.lineage(c, 0.0, loss, rng)).collect();
        join(Event::Speciation, kids)
    }
}

/// Combine surviving children: suppress unary vertices and merge children
/// carrying the same event so the result stays discriminating.
fn join(ev: Event, kids: Vec<Gene>) -> Option<Gene> {
    match kids.len() {
        0 => None,
        1 => kids.into_iter().next(),
        _ => {
            let mut flat = Vec::new();
            for k in kids {
                match k {
                    Gene::Inner(e, gs) if e == ev => flat.extend(gs),
                    other => flat.push(other),
                }
            }
            Some(Gene::Inner(ev, flat))
        }
    }
}

fn count_leaves(g: &Gene) -> usize {
    match g {
        Gene::Leaf(_) => 1,
        Gene::Inner(_, ks) => ks.iter().map(count_leaves).sum(),
    }
}

fn to_subtree(g: Gene, names: &mut impl Iterator<Item = Label>, species: &[Label], map: &mut SpeciesMap) -> Subtree<Event> {
    match g {
        Gene::Leaf(s) => {
            let name = names.next().expect("enough names");
            map.insert(name.clone(), species[s].clone());
            Subtree::Leaf(name)
        }
        Gene::Inner(e, ks) => Subtree::Inner(e, ks.into_iter().map(|k| to_subtree(k, names, species, map)).collect()),
    }
}

/// Simulate gene families evolving by duplication and loss inside a species
/// tree. Families that die out completely are redrawn.
pub fn simulate(cfg: &SimConfig) -> Result<SimulatedData> {
    if !(cfg.duplication_rate >= 0.0 && cfg.loss_rate >= 0.0 && cfg.loss_increment >= 0.0) {
        return Err(Error::Simulation("rates must be nonnegative".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let timed = match &cfg.species_tree {
        Some(t) => TimedTree::from_topology(t),
        None => {
            if cfg.species < 3 {
                return Err(Error::Simulation("need at least three species".into()));
            }
            yule_timed_tree(&padded_names("S", cfg.species), &mut rng)
        }
    };
    let species_tree = timed.to_tree();
    let species = species_tree.leaf_labels();
    if species.len() < 3 {
        return Err(Error::Simulation("need at least three species".into()));
    }
    let species_of_vertex =
        timed.name.iter().map(|n| n.as_ref().map(|l| species.binary_search(l).expect("species"))).collect();
    let process = Process { tree: &timed, cfg, species_of_vertex };

    let mut raw = Vec::with_capacity(cfg.families);
    let mut attempts = 0usize;
    let max_attempts = 10 * cfg.families.max(1);
    while raw.len() < cfg.families {
        attempts += 1;
        if attempts > max_attempts {
            return Err(Error::Simulation(format!(
                "only {} of {} families survived after {max_attempts} draws",
                raw.len(),
                cfg.families
            )));
        }
        if let Some(g) = process.lineage(0, 0.0, cfg.loss_rate, &mut rng) {
            raw.push(g);
        }
    }

    let fam_names = padded_names("F", raw.len());
    let mut species_map = SpeciesMap::new();
    let mut families = Vec::with_capacity(raw.len());
    for (g, fname) in raw.into_iter().zip(&fam_names) {
        let n = count_leaves(&g);
        let mut names = padded_names(&format!("{fname}g"), n).into_iter();
        let mut fmap = SpeciesMap::new();
        let shape = to_subtree(g, &mut names, &species, &mut fmap);
        let (tree, events) = RootedTree::with_payload(shape)?;
        for (gene, sp) in fmap.iter() {
            species_map.insert(gene.clone(), sp.clone());
        }
        families.push(EventLabeledTree::new(tree, events, &fmap)?);
    }

    let mut orthology = OrthologyEstimate::new(species_map.clone());
    for f in &families {
        for (a, b) in f.orthologous_pairs() {
            orthology.set(&a, &b, 1.0)?;
        }
    }
    Ok(SimulatedData { species_tree, families, species_map, orthology })
}

/// Genes of each family, for callers that work on one family at a time.
pub fn family_genes(data: &SimulatedData) -> Vec<Vec<GeneId>> {
    data.families.iter().map(|f| f.tree().leaf_labels()).collect()
}
