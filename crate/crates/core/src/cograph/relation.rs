use std::collections::{BTreeMap, HashMap};

use crate::cograph::Graph;
use crate::error::{Error, Result};
use crate::model::{GeneId, SpeciesId, SpeciesMap};

/// Pairs with at least this weight are edges of the binary orthology graph.
pub const BINARIZATION_THRESHOLD: f64 = 0.5;

/// A weighted, symmetric, irreflexive orthology relation over the genes of a
/// species map. Absent pairs have weight 0.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthologyEstimate {
    species: SpeciesMap,
    genes: Vec<GeneId>,
    index: HashMap<GeneId, usize>,
    weights: BTreeMap<(usize, usize), f64>,
}

impl OrthologyEstimate {
    /// An empty relation on every gene of `species`.
    pub fn new(species: SpeciesMap) -> Self {
        let genes: Vec<GeneId> = species.genes().cloned().collect();
        let index = genes.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect();
        OrthologyEstimate { species, genes, index, weights: BTreeMap::new() }
    }

    /// Unit-weight relation from a binary graph over `genes` (indices into it).
    pub fn from_graph(species: &SpeciesMap, genes: &[GeneId], graph: &Graph) -> Result<Self> {
        let sub: SpeciesMap = genes
            .iter()
            .map(|g| Ok((g.clone(), species.species_of(g)?.clone())))
            .collect::<Result<_>>()?;
        let mut out = OrthologyEstimate::new(sub);
        for (i, j) in graph.edges() {
            out.set(&genes[i], &genes[j], 1.0)?;
        }
        Ok(out)
    }

    fn key(&self, a: &GeneId, b: &GeneId) -> Result<(usize, usize)> {
        if a == b {
            return Err(Error::SelfPair(a.clone()));
        }
        let i = *self.index.get(a).ok_or_else(|| Error::MissingSpecies(a.clone()))?;
        let j = *self.index.get(b).ok_or_else(|| Error::MissingSpecies(b.clone()))?;
        Ok((i.min(j), i.max(j)))
    }

    fn check_weight(a: &GeneId, b: &GeneId, w: f64) -> Result<()> {
        if (0.0..=1.0).contains(&w) {
            Ok(())
        } else {
            Err(Error::WeightOutOfRange(format!("{a}-{b}"), w))
        }
    }

    /// Set Θ(a,b) = w; a weight of 0 removes the pair.
    pub fn set(&mut self, a: &GeneId, b: &GeneId, w: f64) -> Result<()> {
        Self::check_weight(a, b, w)?;
        let k = self.key(a, b)?;
        if w == 0.0 {
            self.weights.remove(&k);
        } else {
            self.weights.insert(k, w);
        }
        Ok(())
    }

    /// Raise Θ(a,b) to w if it is currently lower.
    pub fn set_max(&mut self, a: &GeneId, b: &GeneId, w: f64) -> Result<()> {
        let cur = self.weight(a, b);
        if w > cur {
            self.set(a, b, w)
        } else {
            Self::check_weight(a, b, w).and(self.key(a, b).map(|_| ()))
        }
    }

    pub fn weight(&self, a: &GeneId, b: &GeneId) -> f64 {
        self.key(a, b).ok().and_then(|k| self.weights.get(&k).copied()).unwrap_or(0.0)
    }

    /// Weight by gene index.
    pub fn weight_at(&self, i: usize, j: usize) -> f64 {
        self.weights.get(&(i.min(j), i.max(j))).copied().unwrap_or(0.0)
    }

    pub fn is_edge(&self, a: &GeneId, b: &GeneId) -> bool {
        self.weight(a, b) >= BINARIZATION_THRESHOLD
    }

    /// Genes in sorted order; positions are the gene indices used by
    /// [`Self::binary_graph`] and [`Self::weight_at`].
    pub fn genes(&self) -> &[GeneId] {
        &self.genes
    }

    pub fn gene_index(&self, g: &GeneId) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn species_map(&self) -> &SpeciesMap {
        &self.species
    }

    pub fn species_of(&self, g: &GeneId) -> &SpeciesId {
        self.species.get(g).expect("gene of the relation")
    }

    /// Nonzero pairs `(a, b, w)` with `a < b`, in sorted order.
    pub fn pairs(&self) -> impl Iterator<Item = (&GeneId, &GeneId, f64)> {
        self.weights.iter().map(|(&(i, j), &w)| (&self.genes[i], &self.genes[j], w))
    }

    pub fn pair_count(&self) -> usize {
        self.weights.len()
    }

    /// The thresholded relation as a graph on gene indices.
    pub fn binary_graph(&self) -> Graph {
        let mut g = Graph::new(self.genes.len());
        for (&(i, j), &w) in &self.weights {
            if w >= BINARIZATION_THRESHOLD {
                g.add_edge(i, j);
            }
        }
        g
    }

    /// Restriction to `genes`, which must all belong to the relation.
    pub fn subgraph(&self, genes: &[GeneId]) -> Result<Self> {
        let sub: SpeciesMap = genes
            .iter()
            .map(|g| Ok((g.clone(), self.species.species_of(g)?.clone())))
            .collect::<Result<_>>()?;
        let mut out = OrthologyEstimate::new(sub);
        let idx: Vec<usize> = out.genes.iter().map(|g| self.index[g]).collect();
        for a in 0..idx.len() {
            for b in a + 1..idx.len() {
                let w = self.weight_at(idx[a], idx[b]);
                if w > 0.0 {
                    out.weights.insert((a, b), w);
                }
            }
        }
        Ok(out)
    }

    /// Same pairs under a different gene-to-species assignment over the same genes.
    pub fn with_species_map(&self, species: SpeciesMap) -> Result<Self> {
        if species.len() != self.species.len() || self.genes.iter().any(|g| !species.contains(g)) {
            return Err(Error::Internal("replacement species map covers different genes".into()));
        }
        Ok(OrthologyEstimate { species, ..self.clone() })
    }
}

/// Components of the thresholded graph, ordered by smallest gene.
pub fn connected_components(g: &OrthologyEstimate) -> Vec<OrthologyEstimate> {
    g.binary_graph()
        .components()
        .into_iter()
        .map(|c| {
            let genes: Vec<GeneId> = c.into_iter().map(|i| g.genes[i].clone()).collect();
            g.subgraph(&genes).expect("genes of the relation")
        })
        .collect()
}
