use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use ihs::experiment::{
    instance_row, run_experiment, solve_fvs_row, solve_generic_row, solve_planted_row, ExperimentConfig, FvsOptions,
    GenericInput, GenericOptions, OracleKind, Recipe, RunError,
};
use ihs::format::{parse_family, GraphData, Instance, InstanceParams};
use ihs::fvs_random::{check_lemma1_bounds, edge_density, grow_induced_bfs_with, sample_acyclic_fraction, Depth, Lemma1Report};
use ihs::generic::GenericSolverConfig;
use ihs::models::{gen_dnp_with, gen_gnp_with, gen_planted, ModelParams, Sampling};
use ihs::planted::{verify_planted_theorems, DEFAULT_CYCLE_CAP};
use ihs::report::{write_csv, MatchCell, ResultRow};

#[derive(Parser)]
#[command(name = "ihs", version, about = "Implicit hitting set and feedback vertex set experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random instance file.
    Generate(GenerateArgs),
    /// Grow-induced-BFS feedback vertex set.
    SolveFvs(SolveFvsArgs),
    /// Recover a planted feedback vertex set from short cycles.
    SolvePlanted(SolvePlantedArgs),
    /// Exact implicit hitting set solver with a cycle or explicit oracle.
    SolveGeneric(SolveGenericArgs),
    /// Per-level concentration bounds for one run of Grow-induced-BFS.
    CheckLemma1(CheckLemma1Args),
    /// Fraction of random r-subsets inducing a forest.
    ScanLowerbound(ScanArgs),
    /// Cycle and greedy-size diagnostics on a planted instance.
    VerifyPlanted(VerifyPlantedArgs),
    /// Seeded experiment sweep with an aggregate row.
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    Gnp,
    Dnp,
    Planted,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SamplingArg {
    Naive,
    Skip,
}

impl From<SamplingArg> for Sampling {
    fn from(s: SamplingArg) -> Sampling {
        match s {
            SamplingArg::Naive => Sampling::Naive,
            SamplingArg::Skip => Sampling::GeometricSkip,
        }
    }
}

/// Either an instance file or model parameters.
#[derive(Args, Clone)]
struct SourceArgs {
    /// Instance file to read instead of generating one.
    #[arg(long = "in", value_name = "PATH", conflicts_with = "model")]
    input: Option<PathBuf>,
    #[arg(long, value_enum)]
    model: Option<Model>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, conflicts_with = "seeds")]
    seed: Option<u64>,
    /// Seed range `a..b` (exclusive) or `a..=b`.
    #[arg(long, value_parser = parse_seed_range)]
    seeds: Option<SeedRange>,
    #[arg(long, value_enum, default_value = "naive")]
    sampling: SamplingArg,
}

#[derive(Args)]
struct OutArgs {
    /// Output file; standard output when absent.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct SolveFvsArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, default_value_t = 0)]
    root: usize,
    /// Move vertices back from the solution while the rest stays a forest.
    #[arg(long)]
    prune: bool,
    /// Number of levels, or `exhaustive`; chosen from n and p by default.
    #[arg(long, value_parser = parse_depth)]
    depth: Option<Depth>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct SolvePlantedArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, default_value_t = DEFAULT_CYCLE_CAP)]
    cycle_cap: usize,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct SolveGenericArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, value_parser = |s: &str| s.parse::<OracleKind>())]
    oracle: OracleKind,
    /// Largest swap-out size in the local search.
    #[arg(long, default_value_t = 2)]
    ymax: usize,
    #[arg(long)]
    max_iterations: Option<usize>,
    /// Use the add-only online variant.
    #[arg(long)]
    online: bool,
    #[arg(long, default_value_t = 0)]
    root: usize,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct CheckLemma1Args {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, default_value_t = 0)]
    root: usize,
    #[arg(long, value_parser = parse_depth)]
    depth: Option<Depth>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Subset size; defaults to ceil((2/p) ln(np)) + 1.
    #[arg(long)]
    r: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Seed for the subset sampler.
    #[arg(long, default_value_t = 0)]
    sample_seed: u64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct VerifyPlantedArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, default_value_t = 5)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    sample_seed: u64,
    #[arg(long, default_value_t = DEFAULT_CYCLE_CAP)]
    cycle_cap: usize,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, value_parser = |s: &str| s.parse::<Recipe>())]
    recipe: Recipe,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: f64,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Seed range `a..b` (exclusive) or `a..=b`. Required.
    #[arg(long, value_parser = parse_seed_range, required_unless_present = "seed")]
    seeds: Option<SeedRange>,
    #[arg(long, conflicts_with = "seeds")]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, value_enum, default_value = "naive")]
    sampling: SamplingArg,
    #[arg(long, default_value_t = 0)]
    root: usize,
    #[arg(long, default_value_t = DEFAULT_CYCLE_CAP)]
    cycle_cap: usize,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Clone)]
struct SeedRange(Vec<u64>);

fn parse_seed_range(s: &str) -> Result<SeedRange, String> {
    let bad = || format!("expected a seed range `a..b` or `a..=b`, got `{s}`");
    let (a, b, inclusive) = if let Some((a, b)) = s.split_once("..=") {
        (a, b, true)
    } else if let Some((a, b)) = s.split_once("..") {
        (a, b, false)
    } else {
        return Err(bad());
    };
    let a: u64 = a.trim().parse().map_err(|_| bad())?;
    let b: u64 = b.trim().parse().map_err(|_| bad())?;
    let seeds: Vec<u64> = if inclusive { (a..=b).collect() } else { (a..b).collect() };
    if seeds.is_empty() {
        return Err(format!("seed range `{s}` is empty"));
    }
    Ok(SeedRange(seeds))
}

fn parse_depth(s: &str) -> Result<Depth, String> {
    if s == "exhaustive" {
        return Ok(Depth::Exhaustive);
    }
    s.parse()
        .map(Depth::Levels)
        .map_err(|_| format!("expected a level count or `exhaustive`, got `{s}`"))
}

/// Error with the process exit code attached.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(error: E) -> Self {
        Failure { code: 2, error: error.into() }
    }
}

fn abort(error: RunError) -> Failure {
    let code = if error.is_abort() { 3 } else { 2 };
    Failure {
        code,
        error: error.into(),
    }
}

struct Loaded {
    run_id: String,
    instance: Instance,
}

impl Loaded {
    fn params(&self) -> InstanceParams {
        self.instance.params.unwrap_or_default()
    }
}

fn model_params(src: &SourceArgs, seed: u64) -> anyhow::Result<ModelParams> {
    let n = src.n.context("--n is required with --model")?;
    let p = src.p.context("--p is required with --model")?;
    Ok(match src.model {
        Some(Model::Planted) => {
            let delta = src.delta.context("--delta is required for the planted model")?;
            let k = src.k.context("--k is required for the planted model")?;
            ModelParams::planted(n, delta, p, k, seed)
        }
        _ => ModelParams::new(n, p, seed),
    })
}

fn generate(src: &SourceArgs, seed: u64) -> anyhow::Result<Instance> {
    let params = model_params(src, seed)?;
    let sampling = Sampling::from(src.sampling);
    Ok(match src.model.context("--model or --in is required")? {
        Model::Gnp => Instance::undirected(gen_gnp_with(&params, sampling)?).with_params(InstanceParams::from(&params)),
        Model::Dnp => Instance::directed(gen_dnp_with(&params, sampling)?).with_params(InstanceParams::from(&params)),
        Model::Planted => Instance::from_planted(&gen_planted(&params)?),
    })
}

/// The file, or one generated instance per seed.
fn load(src: &SourceArgs) -> anyhow::Result<Vec<Loaded>> {
    if let Some(path) = &src.input {
        let instance = Instance::read(path).with_context(|| format!("reading {}", path.display()))?;
        return Ok(vec![Loaded {
            run_id: path.file_stem().map_or("input".into(), |s| s.to_string_lossy().into_owned()),
            instance,
        }]);
    }
    let seeds = match (&src.seeds, src.seed) {
        (Some(seeds), _) => seeds.0.clone(),
        (None, Some(seed)) => vec![seed],
        (None, None) => bail!("--seed or --seeds is required with --model"),
    };
    seeds
        .into_iter()
        .map(|seed| {
            Ok(Loaded {
                run_id: format!("seed-{seed}"),
                instance: generate(src, seed)?,
            })
        })
        .collect()
}

fn open_out(out: &OutArgs) -> anyhow::Result<Box<dyn Write>> {
    Ok(match &out.out {
        Some(path) => Box::new(File::create(path).with_context(|| format!("creating {}", path.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

/// Runs `solve` on every instance, writes the rows, and fails with the
/// first error after writing (aborted runs keep their instance columns).
fn sweep<F>(src: &SourceArgs, out: &OutArgs, algorithm: &str, mut solve: F) -> Result<(), Failure>
where
    F: FnMut(&Loaded) -> Result<ResultRow, RunError>,
{
    let loaded = load(src)?;
    let mut rows = Vec::with_capacity(loaded.len());
    let mut failure = None;
    for item in &loaded {
        match solve(item) {
            Ok(row) => rows.push(row),
            Err(e) if e.is_abort() => {
                eprintln!("{}: {e}", item.run_id);
                rows.push(instance_row(&item.run_id, algorithm, item.instance.graph.vertex_count(), &item.params()));
                failure.get_or_insert(abort(e));
            }
            Err(e) => return Err(abort(e)),
        }
    }
    write_csv(open_out(out)?, &rows)?;
    failure.map_or(Ok(()), Err)
}

fn cmd_generate(args: &GenerateArgs) -> Result<(), Failure> {
    if args.source.input.is_some() {
        return Err(anyhow!("generate takes --model, not --in").into());
    }
    let seed = args.source.seed.context("--seed is required")?;
    let text = generate(&args.source, seed)?.to_text();
    open_out(&args.out)?.write_all(text.as_bytes())?;
    Ok(())
}

fn cmd_solve_fvs(args: &SolveFvsArgs) -> Result<(), Failure> {
    let opts = FvsOptions {
        root: args.root,
        depth: args.depth,
        prune: args.prune,
    };
    sweep(&args.source, &args.out, "grow-induced-bfs", |item| {
        solve_fvs_row(&item.run_id, &item.instance.graph, &item.params(), opts)
    })
}

fn cmd_solve_planted(args: &SolvePlantedArgs) -> Result<(), Failure> {
    sweep(&args.source, &args.out, "recover-planted-fvs", |item| {
        let GraphData::Directed(d) = &item.instance.graph else {
            return Err(RunError::Input("solve-planted needs a directed instance".into()));
        };
        let k = args
            .source
            .k
            .or(item.params().k)
            .ok_or_else(|| RunError::Input("--k is required (or k= in the params trailer)".into()))?;
        solve_planted_row(&item.run_id, d, item.instance.planted.as_ref(), &item.params(), k, args.cycle_cap)
    })
}

fn cmd_solve_generic(args: &SolveGenericArgs) -> Result<(), Failure> {
    let opts = GenericOptions {
        oracle: args.oracle,
        config: GenericSolverConfig {
            max_swap_out: args.ymax,
            max_iterations: args.max_iterations,
        },
        root: args.root,
        online: args.online,
    };
    if args.oracle == OracleKind::Explicit {
        let path = args.source.input.as_deref().context("--oracle explicit needs --in with a family file")?;
        let family = read_family(path)?;
        let row = match solve_generic_row("family", GenericInput::Family(&family), &InstanceParams::default(), opts) {
            Ok(row) => row,
            Err(e) if e.is_abort() => {
                eprintln!("{e}");
                let row = instance_row("family", "generic/explicit", family.universe_size(), &InstanceParams::default());
                write_csv(open_out(&args.out)?, &[row])?;
                return Err(abort(e));
            }
            Err(e) => return Err(abort(e)),
        };
        write_csv(open_out(&args.out)?, &[row])?;
        return Ok(());
    }
    sweep(&args.source, &args.out, "generic", |item| {
        solve_generic_row(&item.run_id, GenericInput::Graph(&item.instance.graph), &item.params(), opts)
    })
}

fn read_family(path: &Path) -> anyhow::Result<ihs::SubsetFamily> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(parse_family(&text)?)
}

fn single(src: &SourceArgs) -> anyhow::Result<Loaded> {
    let mut loaded = load(src)?;
    if loaded.len() != 1 {
        bail!("this command takes a single instance; use --seed rather than --seeds");
    }
    Ok(loaded.remove(0))
}

fn cmd_check_lemma1(args: &CheckLemma1Args) -> Result<(), Failure> {
    let item = single(&args.source)?;
    let GraphData::Undirected(g) = &item.instance.graph else {
        return Err(anyhow!("check-lemma1 needs an undirected instance").into());
    };
    let n = g.vertex_count();
    let p = item.params().p.unwrap_or_else(|| edge_density(g));
    let depth = args.depth.unwrap_or_else(|| Depth::for_params(n, p));
    let res = grow_induced_bfs_with(g, args.root, depth).map_err(|e| abort(e.into()))?;
    let mut out = open_out(&args.out)?;
    match check_lemma1_bounds(&res.stats, n, p, depth) {
        Lemma1Report::NotApplicable { c, horizon } => {
            writeln!(out, "# not applicable: c = {c}, c - 20 sqrt(c) = {}, horizon = {horizon}", c - 20.0 * c.sqrt())?;
        }
        Lemma1Report::Checked {
            c,
            horizon,
            depth_within_horizon,
            levels,
        } => {
            let within = depth_within_horizon.map_or("n/a".to_string(), |b| b.to_string());
            writeln!(out, "# c = {c}, horizon = {horizon}, depth within horizon = {within}")?;
            writeln!(out, "t,quantity,lower,value,upper,holds")?;
            for level in &levels {
                let checks = [
                    ("u", Some(level.unexposed)),
                    ("l", Some(level.survivors)),
                    ("r", level.unique),
                ];
                for (name, check) in checks {
                    if let Some(b) = check {
                        writeln!(out, "{},{name},{},{},{},{}", level.t, b.lower, b.value, b.upper, u8::from(b.holds()))?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn cmd_scan(args: &ScanArgs) -> Result<(), Failure> {
    let item = single(&args.source)?;
    let GraphData::Undirected(g) = &item.instance.graph else {
        return Err(anyhow!("scan-lowerbound needs an undirected instance").into());
    };
    let n = g.vertex_count();
    let p = item.params().p.unwrap_or_else(|| edge_density(g));
    let r = args.r.unwrap_or_else(|| ihs::fvs_random::lower_bound_subset_size(n, p));
    let sample = sample_acyclic_fraction(g, r, args.samples, args.sample_seed).map_err(|e| abort(e.into()))?;
    let row = ResultRow {
        bound_value: Some(r as f64),
        exact_match: Some(MatchCell::Fraction(sample.fraction())),
        ..instance_row(&item.run_id, "acyclic-sampler", n, &item.params())
    };
    write_csv(open_out(&args.out)?, &[row])?;
    Ok(())
}

fn cmd_verify_planted(args: &VerifyPlantedArgs) -> Result<(), Failure> {
    let item = single(&args.source)?;
    let (GraphData::Directed(d), Some(planted)) = (&item.instance.graph, &item.instance.planted) else {
        return Err(anyhow!("verify-planted needs a directed instance with a planted trailer").into());
    };
    let params = item.params();
    let k = args.source.k.or(params.k).context("--k is required (or k= in the params trailer)")?;
    let inst = ihs::models::PlantedInstance {
        digraph: d.clone(),
        planted: planted.clone(),
        params: ModelParams {
            n: d.vertex_count(),
            p: params.p.unwrap_or(0.0),
            delta: params.delta,
            k: Some(k),
            seed: params.seed.unwrap_or(0),
        },
        dag_order: planted.complement(d.vertex_count()).into_vec(),
    };
    let diag = verify_planted_theorems(&inst, k, args.samples, args.cycle_cap, args.sample_seed)
        .map_err(|e| abort(e.into()))?;
    let mut out = open_out(&args.out)?;
    writeln!(out, "sample_size={}", diag.sample_size)?;
    for (i, failed) in diag.cycle_failures.iter().enumerate() {
        writeln!(out, "sample {i}: {} of {} planted vertices without a {k}-cycle", failed.len(), planted.len())?;
    }
    writeln!(out, "greedy_size={} bound={} ok={}", diag.greedy_size, diag.greedy_bound, diag.greedy_ok())?;
    if let Some(warning) = &diag.warning {
        writeln!(out, "warning: {warning}")?;
    }
    Ok(())
}

fn cmd_experiment(args: &ExperimentArgs) -> Result<(), Failure> {
    let seeds = match (&args.seeds, args.seed) {
        (Some(seeds), _) => seeds.0.clone(),
        (None, Some(seed)) => vec![seed],
        (None, None) => return Err(anyhow!("--seeds is required").into()),
    };
    let cfg = ExperimentConfig {
        delta: args.delta,
        k: args.k,
        r: args.r,
        samples: args.samples,
        jobs: args.jobs,
        sampling: args.sampling.into(),
        root: args.root,
        cycle_cap: args.cycle_cap,
        ..ExperimentConfig::new(args.recipe, args.n, args.p, seeds)
    };
    let rows = run_experiment(&cfg).map_err(abort)?;
    write_csv(open_out(&args.out)?, &rows)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::SolveFvs(a) => cmd_solve_fvs(a),
        Command::SolvePlanted(a) => cmd_solve_planted(a),
        Command::SolveGeneric(a) => cmd_solve_generic(a),
        Command::CheckLemma1(a) => cmd_check_lemma1(a),
        Command::ScanLowerbound(a) => cmd_scan(a),
        Command::VerifyPlanted(a) => cmd_verify_planted(a),
        Command::Experiment(a) => cmd_experiment(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure { code, error }) => {
            eprintln!("error: {error:#}");
            ExitCode::from(code)
        }
    }
}
