use thiserror::Error;

use crate::model::Label;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid label {0:?}: labels must be non-empty and contain no whitespace or any of \"(),;:\"")]
    InvalidLabel(String),

    #[error("triple needs three distinct leaves, got ({0},{1}|{2})")]
    DegenerateTriple(Label, Label, Label),

    #[error("newick parse error at byte {offset}: {message}")]
    Newick { offset: usize, message: String },

    #[error("unknown leaf {0}")]
    UnknownLeaf(Label),

    #[error("duplicate leaf label {0}")]
    DuplicateLeaf(Label),

    #[error("inner vertex with a single child")]
    UnaryVertex,

    #[error("incompatible clusters {{{}}} and {{{}}}", join(.0), join(.1))]
    IncompatibleClusters(Vec<Label>, Vec<Label>),

    #[error("cluster {{{}}} is not a subset of the leaf universe", join(.0))]
    ClusterOutsideUniverse(Vec<Label>),

    #[error("graph is not a cograph: induced path {0}-{1}-{2}-{3}")]
    NotACograph(Label, Label, Label, Label),

    #[error("triple set is inconsistent (connected Aho graph on {{{}}})", join(.0))]
    Inconsistent(Vec<Label>),

    #[error("triple set is not strictly dense: trio {{{0},{1},{2}}} has {3} orientations")]
    NotStrictlyDense(Label, Label, Label, usize),

    #[error("leaf sets differ; only in first: {{{}}}, only in second: {{{}}}", join(.0), join(.1))]
    LeafSetMismatch(Vec<Label>, Vec<Label>),

    #[error("gene {0} has no species assignment")]
    MissingSpecies(Label),

    #[error("self-pair {0}-{0} in orthology relation")]
    SelfPair(Label),

    #[error("orthology weight {1} for pair {0} is outside [0,1]")]
    WeightOutOfRange(String, f64),

    #[error("incompatible cluster columns {p} and {q}: gametes 01, 10 and 11 all present")]
    GameteConflict { p: usize, q: usize },

    #[error("ILP model error: {0}")]
    Model(String),

    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: usize, message: String },

    #[error("simulation failed: {0}")]
    Simulation(String),

    #[error("internal contract violation: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn join(labels: &[Label]) -> String {
    labels.iter().map(|l| l.as_str()).collect::<Vec<_>>().join(",")
}
