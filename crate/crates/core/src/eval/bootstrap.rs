use std::collections::BTreeSet;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::ilp::SolveOptions;
use crate::model::{Label, RootedTree, Triple, TripleSet};
use crate::species_tree::{least_resolved_tree, TreeMode};
use crate::triples::max_consistent_subset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BootstrapScheme {
    /// Resample whole orthology components.
    Components,
    /// Resample single triples by relative weight.
    Triples,
}

impl std::str::FromStr for BootstrapScheme {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "components" => Ok(BootstrapScheme::Components),
            "triples" => Ok(BootstrapScheme::Triples),
            _ => Err(crate::Error::Internal(format!("unknown bootstrap scheme {s:?}"))),
        }
    }
}

/// What a point-estimate run leaves behind for resampling.
#[derive(Debug, Clone)]
pub struct BootstrapInput {
    /// Species triples of each connected component of the input relation,
    /// weighted by the number of its gene trees that contribute them.
    pub components: Vec<TripleSet>,
    pub species: BTreeSet<Label>,
}

impl BootstrapInput {
    /// The extracted set of the point estimate.
    pub fn extracted(&self) -> TripleSet {
        let mut all = TripleSet::with_universe(self.species.iter().cloned());
        for c in &self.components {
            for (t, w) in c {
                all.add(t.clone(), *w);
            }
        }
        all
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BootstrapOptions {
    pub scheme: BootstrapScheme,
    pub replicates: usize,
    pub seed: u64,
    pub mode: TreeMode,
    pub solve: SolveOptions,
}

fn resample<R: Rng>(input: &BootstrapInput, scheme: BootstrapScheme, rng: &mut R) -> TripleSet {
    let mut out = TripleSet::with_universe(input.species.iter().cloned());
    match scheme {
        BootstrapScheme::Components => {
            let m = input.components.len();
            for _ in 0..m {
                for (t, w) in &input.components[rng.random_range(0..m)] {
                    out.add(t.clone(), *w);
                }
            }
        }
        BootstrapScheme::Triples => {
            let all = input.extracted();
            let items: Vec<(&Triple, f64)> = all.iter().map(|(t, w)| (t, *w)).collect();
            let n = all.total_weight().round() as usize;
            if let Ok(dist) = WeightedIndex::new(items.iter().map(|(_, w)| *w)) {
                for _ in 0..n {
                    out.add(items[dist.sample(rng)].0.clone(), 1.0);
                }
            }
        }
    }
    out
}

/// Species trees of resampled data; replicate `i` uses seed `seed + i`.
pub fn bootstrap(input: &BootstrapInput, opts: &BootstrapOptions) -> Result<Vec<RootedTree>> {
    (0..opts.replicates)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(i as u64));
            let sample = resample(input, opts.scheme, &mut rng);
            let subset = max_consistent_subset(&sample, opts.solve);
            Ok(least_resolved_tree(&subset.selected, opts.mode, opts.solve)?.tree)
        })
        .collect()
}
