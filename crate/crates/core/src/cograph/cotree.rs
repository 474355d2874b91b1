use std::fmt;

use serde::Serialize;

use crate::cograph::Graph;
use crate::error::{Error, Result};
use crate::model::{newick, GeneId, NodeId, RootedTree, SpeciesMap, Subtree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Event {
    Speciation,
    Duplication,
}

impl Event {
    /// Inner-vertex label used in Newick output.
    pub fn symbol(self) -> &'static str {
        match self {
            Event::Speciation => "S",
            Event::Duplication => "D",
        }
    }

    fn from_symbol(s: &str) -> Option<Event> {
        match s {
            "S" => Some(Event::Speciation),
            "D" => Some(Event::Duplication),
            _ => None,
        }
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A gene tree whose inner vertices are speciations or duplications.
#[derive(Debug, Clone, PartialEq)]
pub struct EventLabeledTree {
    tree: RootedTree,
    events: Vec<Option<Event>>,
    species: SpeciesMap,
}

impl EventLabeledTree {
    /// `events` is indexed by node id and must be set exactly on inner vertices.
    pub fn new(tree: RootedTree, events: Vec<Option<Event>>, species: &SpeciesMap) -> Result<Self> {
        if events.len() != tree.node_count() || tree.node_ids().any(|v| tree.is_leaf(v) == events[v].is_some()) {
            return Err(Error::Internal("event labels must cover exactly the inner vertices".into()));
        }
        let species = tree
            .leaf_labels()
            .into_iter()
            .map(|g| Ok((g.clone(), species.species_of(&g)?.clone())))
            .collect::<Result<SpeciesMap>>()?;
        Ok(EventLabeledTree { tree, events, species })
    }

    /// Read a Newick tree whose inner vertices are labelled `S` or `D`.
    pub fn parse(text: &str, species: &SpeciesMap) -> Result<Self> {
        let (tree, labels) = newick::parse_labeled(text)?;
        let mut events = vec![None; tree.node_count()];
        for v in tree.inner_nodes() {
            let l = labels[v].as_deref().unwrap_or("");
            events[v] = Some(Event::from_symbol(l).ok_or_else(|| Error::Newick {
                offset: 0,
                message: format!("inner vertex label {l:?} is neither S nor D"),
            })?);
        }
        Self::new(tree, events, species)
    }

    pub fn tree(&self) -> &RootedTree {
        &self.tree
    }

    pub fn event(&self, v: NodeId) -> Option<Event> {
        self.events[v]
    }

    pub fn species(&self) -> &SpeciesMap {
        &self.species
    }

    pub fn to_newick(&self) -> String {
        newick::write_with(&self.tree, |v| self.events[v].map(|e| e.symbol().to_string()))
    }

    /// Adjacent inner vertices carry different events.
    pub fn is_discriminating(&self) -> bool {
        self.tree.inner_nodes().all(|v| match self.tree.parent(v) {
            Some(p) => self.events[p] != self.events[v],
            None => true,
        })
    }

    /// Gene pairs (sorted) whose lca is a speciation.
    pub fn orthologous_pairs(&self) -> Vec<(GeneId, GeneId)> {
        let m = self.tree.lca_matrix();
        let n = m.leaves.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.events[m.get(i, j)] == Some(Event::Speciation) {
                    out.push((m.leaves[i].clone(), m.leaves[j].clone()));
                }
            }
        }
        out
    }
}

/// Cotree of a cograph over `genes`: a speciation wherever the complement is
/// disconnected, a duplication wherever the graph is.
pub fn cotree(genes: &[GeneId], graph: &Graph, species: &SpeciesMap) -> Result<EventLabeledTree> {
    if genes.is_empty() {
        return Err(Error::Internal("cotree of an empty graph".into()));
    }
    if let Some([w, x, y, z]) = graph.find_p4() {
        return Err(Error::NotACograph(genes[w].clone(), genes[x].clone(), genes[y].clone(), genes[z].clone()));
    }
    let all: Vec<usize> = (0..genes.len()).collect();
    let shape = build(&all, graph, genes);
    let (tree, events) = RootedTree::with_payload(shape)?;
    EventLabeledTree::new(tree, events, species)
}

fn build(vs: &[usize], graph: &Graph, genes: &[GeneId]) -> Subtree<Event> {
    if vs.len() == 1 {
        return Subtree::Leaf(genes[vs[0]].clone());
    }
    let comps = graph.components_within(vs, false);
    let (event, parts) = if comps.len() > 1 {
        (Event::Duplication, comps)
    } else {
        (Event::Speciation, graph.components_within(vs, true))
    };
    debug_assert!(parts.len() > 1, "graph and complement both connected");
    Subtree::Inner(event, parts.iter().map(|p| build(p, graph, genes)).collect())
}
