use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use phylotriple::cograph::EventLabeledTree;
use phylotriple::eval::{raw_distance, yule_normalizer, BootstrapScheme, DistanceReport};
use phylotriple::model::newick;
use phylotriple::sim::{simulate, NoiseModel, SimConfig};
use phylotriple::species_tree::{support_values, TreeMode};
use phylotriple::{io, TripleSet};
use phylotriple_cli::experiment::{experiment_tsv, noise_seed, noisy_relation, run_experiment, ExperimentGrid, NoiseSetting};
use phylotriple_cli::pipeline::{edit_stage, subset_stage, tree_stage, EditedComponent};
use phylotriple_cli::run::{self, load_relation, read_text, tree_with_supports, write_text};
use phylotriple_cli::{run_pipeline, BootstrapSpec, PipelineConfig, SolverChoice, StageOptions};

#[derive(Parser)]
#[command(name = "phylotriple", version, about = "Species trees from orthology relations")]
struct Cli {
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true, env = "PT_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Edit every component of the relation to a cograph.
    Edit(EditArgs),
    /// Species triples from event-labelled gene trees.
    Extract(ExtractArgs),
    /// Maximum-weight consistent subset of a triple set.
    Subset(SubsetArgs),
    /// Least-resolved species tree displaying a consistent triple set.
    Tree(TreeArgs),
    /// Simulate gene families along a species tree.
    Simulate(SimulateArgs),
    /// Distances between two trees on the same leaves.
    Distance(DistanceArgs),
    /// Full pipeline followed by bootstrap replicates.
    Bootstrap(RunArgs),
    /// Full pipeline.
    Run(RunArgs),
    /// Simulation grid with reconstruction distances.
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    MinVertices,
    MinTriples,
    Build,
}

impl From<ModeArg> for TreeMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::MinVertices => TreeMode::MinVertices,
            ModeArg::MinTriples => TreeMode::MinTriples,
            ModeArg::Build => TreeMode::Build,
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum SolverArg {
    Builtin,
    ExportOnly,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum BootstrapArg {
    None,
    Components,
    Triples,
}

#[derive(Args, Clone)]
struct StageArgs {
    /// Components with more genes are repaired heuristically.
    #[arg(long, env = "PT_COMPONENT_LIMIT", default_value_t = 50)]
    component_limit: usize,
    /// Components up to this size are edited by exact subset recursion.
    #[arg(long, env = "PT_EXACT_LIMIT", default_value_t = 16)]
    exact_limit: usize,
    /// Limit for each solver call, in seconds.
    #[arg(long, env = "PT_TIME_LIMIT_SECS", default_value_t = 1800.0)]
    time_limit_secs: f64,
    #[arg(long, env = "PT_TREE_MODE", value_enum, default_value = "min-vertices")]
    tree_mode: ModeArg,
}

impl StageArgs {
    fn options(&self) -> Result<StageOptions> {
        if !(self.time_limit_secs > 0.0 && self.time_limit_secs.is_finite()) {
            bail!("time limit must be a positive number of seconds");
        }
        Ok(StageOptions {
            component_limit: self.component_limit,
            exact_limit: self.exact_limit,
            time_limit: Some(Duration::from_secs_f64(self.time_limit_secs)),
            tree_mode: self.tree_mode.into(),
        })
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, env = "PT_ORTHOLOGY")]
    orthology: PathBuf,
    #[arg(long, env = "PT_SPECIES_MAP")]
    species_map: PathBuf,
    #[arg(long, env = "PT_OUT")]
    out: PathBuf,
    #[arg(long, env = "PT_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, env = "PT_SOLVER", value_enum, default_value = "builtin")]
    solver: SolverArg,
    #[arg(long, env = "PT_BOOTSTRAP", value_enum, default_value = "none")]
    bootstrap: BootstrapArg,
    #[arg(long, env = "PT_REPLICATES", default_value_t = 100)]
    replicates: usize,
    #[command(flatten)]
    stages: StageArgs,
}

#[derive(Args)]
struct EditArgs {
    #[arg(long, env = "PT_ORTHOLOGY")]
    orthology: PathBuf,
    #[arg(long, env = "PT_SPECIES_MAP")]
    species_map: PathBuf,
    #[arg(long, env = "PT_OUT")]
    out: PathBuf,
    #[command(flatten)]
    stages: StageArgs,
}

#[derive(Args)]
struct ExtractArgs {
    /// One S/D-labelled Newick gene tree per line.
    #[arg(long)]
    gene_trees: PathBuf,
    #[arg(long, env = "PT_SPECIES_MAP")]
    species_map: PathBuf,
    #[arg(long, env = "PT_OUT")]
    out: PathBuf,
}

#[derive(Args)]
struct SubsetArgs {
    #[arg(long)]
    triples: PathBuf,
    #[arg(long, env = "PT_OUT")]
    out: PathBuf,
    #[command(flatten)]
    stages: StageArgs,
}

#[derive(Args)]
struct TreeArgs {
    /// A consistent triple set.
    #[arg(long)]
    triples: PathBuf,
    /// Extracted triples whose weights give support values.
    #[arg(long)]
    extracted: Option<PathBuf>,
    #[arg(long, env = "PT_OUT")]
    out: PathBuf,
    #[command(flatten)]
    stages: StageArgs,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, default_value_t = 10)]
    species: usize,
    /// Newick species tree to use instead of a random one.
    #[arg(long)]
    species_tree: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    families: usize,
    #[arg(long, default_value_t = 1.0)]
    duplication_rate: f64,
    #[arg(long, default_value_t = 0.5)]
    loss_rate: f64,
    #[arg(long, default_value_t = 0.1)]
    loss_increment: f64,
    /// Noise as `model:p`, e.g. `orthologous:0.1`.
    #[arg(long, value_parser = parse_noise)]
    noise: Option<NoiseSetting>,
    #[arg(long, env = "PT_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, env = "PT_OUT")]
    out: PathBuf,
}

#[derive(Args)]
struct DistanceArgs {
    tree1: PathBuf,
    tree2: PathBuf,
    /// Random tree pairs behind the normalization.
    #[arg(long, default_value_t = phylotriple::eval::YULE_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = phylotriple::eval::YULE_SEED)]
    normalizer_seed: u64,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, value_delimiter = ',', default_value = "10")]
    species: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "100")]
    families: Vec<usize>,
    /// Comma-separated `none` or `model:p` settings.
    #[arg(long, value_delimiter = ',', value_parser = parse_noise, default_value = "none")]
    noise: Vec<NoiseSetting>,
    #[arg(long, default_value_t = 20)]
    replicates: usize,
    #[arg(long, default_value_t = 1.0)]
    duplication_rate: f64,
    #[arg(long, default_value_t = 0.5)]
    loss_rate: f64,
    #[arg(long, default_value_t = 0.1)]
    loss_increment: f64,
    #[arg(long, env = "PT_SEED", default_value_t = 0)]
    seed: u64,
    /// Output TSV; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    stages: StageArgs,
}

fn parse_noise(s: &str) -> std::result::Result<NoiseSetting, String> {
    if s == "none" {
        return Ok(None);
    }
    let (m, p) = s.split_once(':').ok_or_else(|| format!("expected model:p, found {s:?}"))?;
    let model: NoiseModel = m.parse().map_err(|e: phylotriple::Error| e.to_string())?;
    let p: f64 = p.parse().map_err(|_| format!("invalid probability {p:?}"))?;
    if !(0.0..=1.0).contains(&p) {
        return Err(format!("probability {p} outside [0,1]"));
    }
    Ok(Some((model, p)))
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("{}: cannot create", dir.display()))
}

fn run_cmd(args: RunArgs, force_bootstrap: bool) -> Result<ExitCode> {
    let scheme = match (args.bootstrap, force_bootstrap) {
        (BootstrapArg::Components, _) | (BootstrapArg::None, true) => Some(BootstrapScheme::Components),
        (BootstrapArg::Triples, _) => Some(BootstrapScheme::Triples),
        (BootstrapArg::None, false) => None,
    };
    let cfg = PipelineConfig {
        stages: args.stages.options()?,
        solver: if args.solver == SolverArg::ExportOnly { SolverChoice::ExportOnly } else { SolverChoice::Builtin },
        bootstrap: scheme.map(|scheme| BootstrapSpec { scheme, replicates: args.replicates }),
        seed: args.seed,
        ..PipelineConfig::new(args.orthology, args.species_map, args.out)
    };
    let report = run_pipeline(&cfg)?;
    if let Some(t) = &report.species_tree {
        println!("{t}");
    }
    Ok(if report.no_signal { ExitCode::from(2) } else { ExitCode::SUCCESS })
}

fn edit_cmd(args: EditArgs) -> Result<ExitCode> {
    let g = load_relation(&args.orthology, &args.species_map)?;
    let opts = args.stages.options()?;
    let comps = edit_stage(&g, &opts)?;
    create_dir(&args.out)?;
    let mut edited = phylotriple::cograph::OrthologyEstimate::new(g.species_map().clone());
    let mut trees = String::new();
    for EditedComponent { edited: e, cotrees } in &comps {
        for (i, j) in e.graph.edges() {
            edited.set(&e.genes[i], &e.genes[j], 1.0)?;
        }
        for t in cotrees {
            trees.push_str(&t.to_newick());
            trees.push('\n');
        }
    }
    write_text(&args.out, run::EDITED_ORTHOLOGY, &io::write_orthology(&edited))?;
    write_text(&args.out, run::GENE_TREES, &trees)?;
    let exact = comps.iter().filter(|c| c.edited.is_exact()).count();
    println!("{} components, {exact} solved exactly", comps.len());
    Ok(ExitCode::SUCCESS)
}

fn extract_cmd(args: ExtractArgs) -> Result<ExitCode> {
    let path = args.species_map.display().to_string();
    let map = io::read_species_map(&path, &read_text(&args.species_map)?)?;
    let text = read_text(&args.gene_trees)?;
    let trees = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            EventLabeledTree::parse(l, &map).with_context(|| format!("{}:{}", args.gene_trees.display(), i + 1))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut triples = phylotriple::triples::extract_species_triples(&trees);
    triples.extend_universe(map.species());
    create_dir(&args.out)?;
    write_text(&args.out, run::SPECIES_TRIPLES, &io::write_triples(&triples))?;
    println!("{} triples", triples.len());
    Ok(if triples.is_empty() { ExitCode::from(2) } else { ExitCode::SUCCESS })
}

fn read_triples(path: &Path) -> Result<TripleSet> {
    Ok(io::read_triples(&path.display().to_string(), &read_text(path)?)?)
}

fn subset_cmd(args: SubsetArgs) -> Result<ExitCode> {
    let s = read_triples(&args.triples)?;
    let r = subset_stage(&s, &args.stages.options()?);
    create_dir(&args.out)?;
    write_text(&args.out, run::SELECTED_TRIPLES, &io::write_triples(&r.selected))?;
    println!("{} of {} triples selected", r.selected.len(), s.len());
    Ok(if s.is_empty() { ExitCode::from(2) } else { ExitCode::SUCCESS })
}

fn tree_cmd(args: TreeArgs) -> Result<ExitCode> {
    let selected = read_triples(&args.triples)?;
    let r = tree_stage(&selected, &args.stages.options()?)?;
    let text = match &args.extracted {
        Some(p) => tree_with_supports(&r.tree, &support_values(&r.tree, &selected, &read_triples(p)?)),
        None => newick::write(&r.tree),
    };
    create_dir(&args.out)?;
    write_text(&args.out, run::SPECIES_TREE, &format!("{text}\n"))?;
    println!("{text}");
    Ok(if selected.is_empty() { ExitCode::from(2) } else { ExitCode::SUCCESS })
}

fn simulate_cmd(args: SimulateArgs) -> Result<ExitCode> {
    let species_tree = match &args.species_tree {
        Some(p) => Some(newick::parse(read_text(p)?.trim())?),
        None => None,
    };
    let cfg = SimConfig {
        species: args.species,
        species_tree,
        families: args.families,
        duplication_rate: args.duplication_rate,
        loss_rate: args.loss_rate,
        loss_increment: args.loss_increment,
        seed: args.seed,
    };
    let data = simulate(&cfg)?;
    let noisy = noisy_relation(&data, args.noise.flatten(), noise_seed(args.seed))?;
    let fam_dir = args.out.join("families");
    create_dir(&fam_dir)?;
    write_text(&args.out, "species_map.tsv", &io::write_species_map(noisy.species_map()))?;
    write_text(&args.out, "orthology.tsv", &io::write_orthology(&noisy))?;
    write_text(&args.out, "true_orthology.tsv", &io::write_orthology(&data.orthology))?;
    write_text(&args.out, "true_species_tree.nwk", &(newick::write(&data.species_tree) + "\n"))?;
    let trees: String = data.families.iter().map(|f| f.to_newick() + "\n").collect();
    write_text(&args.out, "true_gene_trees.nwk", &trees)?;
    let width = data.families.len().to_string().len();
    for (k, rel) in data.family_relations().iter().enumerate() {
        write_text(&fam_dir, &format!("F{:0width$}.tsv", k + 1), &io::write_orthology(rel))?;
    }
    println!("{} families, {} genes", data.families.len(), data.species_map.len());
    Ok(ExitCode::SUCCESS)
}

fn distance_cmd(args: DistanceArgs) -> Result<ExitCode> {
    let t1 = newick::parse(read_text(&args.tree1)?.trim())?;
    let t2 = newick::parse(read_text(&args.tree2)?.trim())?;
    let raw = raw_distance(&t1, &t2)?;
    let normalized = if t1.leaf_count() >= 4 {
        raw.normalized_by(yule_normalizer(t1.leaf_count(), args.samples, args.normalizer_seed))
    } else {
        raw
    };
    print!("{}", DistanceReport { raw, normalized }.to_tsv());
    Ok(ExitCode::SUCCESS)
}

fn experiment_cmd(args: ExperimentArgs) -> Result<ExitCode> {
    let grid = ExperimentGrid {
        species: args.species,
        families: args.families,
        noise: args.noise,
        replicates: args.replicates,
        seed: args.seed,
        duplication_rate: args.duplication_rate,
        loss_rate: args.loss_rate,
        loss_increment: args.loss_increment,
        stages: args.stages.options()?,
    };
    let text = experiment_tsv(&run_experiment(&grid)?);
    match &args.out {
        Some(p) => fs::write(p, text).with_context(|| format!("{}: cannot write", p.display()))?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match cli.command {
        Command::Edit(a) => edit_cmd(a),
        Command::Extract(a) => extract_cmd(a),
        Command::Subset(a) => subset_cmd(a),
        Command::Tree(a) => tree_cmd(a),
        Command::Simulate(a) => simulate_cmd(a),
        Command::Distance(a) => distance_cmd(a),
        Command::Bootstrap(a) => run_cmd(a, true),
        Command::Run(a) => run_cmd(a, false),
        Command::Experiment(a) => experiment_cmd(a),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::from(1)
    })
}
