//! Single solver runs turned into [`ResultRow`]s, and seeded experiment
//! recipes that sweep them over seeds.

use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::format::{GraphData, InstanceParams};
use crate::fvs_random::{
    check_lemma1_bounds, directed_upper_bound_target, grow_induced_bfs_with, lower_bound_subset_size,
    prune_fvs, sample_acyclic_fraction, upper_bound_target, Depth, FvsError,
};
use crate::generic::{generic_solve, online_augment, pick_min, GenericSolverConfig, SolveError};
use crate::graph::{Digraph, VertexSet};
use crate::hitting_set::{gamma_feasible, SubsetFamily};
use crate::models::{gen_gnp_with, gen_planted, ModelError, ModelParams, Sampling};
use crate::oracle::{BfsCycleOracle, ExplicitFamilyOracle, Oracle, OracleError, ShortestCycleOracle};
use crate::planted::{recover_planted, recover_planted_fvs, PlantedError};
use crate::report::{MatchCell, ResultRow};

/// Factor standing in for `1 - o(1)` in the size targets.
pub const BOUND_SLACK: f64 = 0.9;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Fvs(#[from] FvsError),
    #[error(transparent)]
    Planted(#[from] PlantedError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("{0}")]
    Input(String),
}

impl RunError {
    /// Solver gave up (iteration cap or cycle cap) on otherwise valid input.
    pub fn is_abort(&self) -> bool {
        matches!(
            self,
            RunError::Solve(SolveError::IterationCap { .. }) | RunError::Planted(PlantedError::CycleCapExceeded { .. })
        )
    }
}

fn elapsed_ms(start: Instant) -> Option<u128> {
    Some(start.elapsed().as_millis())
}

/// A row with the instance columns filled in.
pub fn instance_row(run_id: &str, algorithm: &str, n: usize, params: &InstanceParams) -> ResultRow {
    ResultRow {
        seed: params.seed,
        n: Some(n),
        p: params.p,
        delta: params.delta,
        k: params.k,
        ..ResultRow::new(run_id, algorithm)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FvsOptions {
    pub root: usize,
    /// `None` picks the depth from the recorded `p`, or from the edge
    /// density when `p` is unknown.
    pub depth: Option<Depth>,
    pub prune: bool,
}

/// Grow-induced-BFS on an undirected graph, or on the shadow of a digraph.
pub fn solve_fvs_row(
    run_id: &str,
    graph: &GraphData,
    params: &InstanceParams,
    opts: FvsOptions,
) -> Result<ResultRow, RunError> {
    let start = Instant::now();
    let n = graph.vertex_count();
    let shadow;
    let (g, directed) = match graph {
        GraphData::Undirected(g) => (g, false),
        GraphData::Directed(d) => {
            shadow = d.shadow();
            (&shadow, true)
        }
    };
    let depth = opts.depth.unwrap_or_else(|| match params.p {
        Some(p) => Depth::for_params(n, p),
        None => Depth::for_graph(g),
    });
    let mut fvs = grow_induced_bfs_with(g, opts.root, depth)?.fvs;
    if opts.prune {
        fvs = prune_fvs(g, &fvs);
    }
    let acyclic = match graph {
        GraphData::Undirected(g) => g.is_acyclic(&fvs),
        GraphData::Directed(d) => d.is_acyclic(&fvs),
    }
    .expect("solution ids are vertices");
    let mut algorithm = String::from(if directed { "grow-induced-bfs-directed" } else { "grow-induced-bfs" });
    if opts.prune {
        algorithm.push_str("+prune");
    }
    let bound = |p: f64| {
        if directed {
            directed_upper_bound_target(n, p, BOUND_SLACK)
        } else {
            upper_bound_target(n, p, BOUND_SLACK)
        }
    };
    Ok(ResultRow {
        fvs_size: Some(fvs.len()),
        bound_value: params.p.map(bound),
        acyclic_ok: Some(acyclic),
        runtime_ms: elapsed_ms(start),
        ..instance_row(run_id, &algorithm, n, params)
    })
}

/// Cycle enumeration plus greedy and filter, compared against the planted
/// set when one is given.
pub fn solve_planted_row(
    run_id: &str,
    d: &Digraph,
    planted: Option<&VertexSet>,
    params: &InstanceParams,
    k: usize,
    cycle_cap: usize,
) -> Result<ResultRow, RunError> {
    let start = Instant::now();
    let report = recover_planted_fvs(d, k, cycle_cap)?;
    let acyclic = d.is_acyclic(&report.recovered).expect("solution ids are vertices");
    let planted_size = match (params.delta, planted) {
        (Some(delta), _) => Some(ModelParams::planted(d.vertex_count(), delta, 0.0, k, 0).planted_size().unwrap_or(0)),
        (None, Some(p)) => Some(p.len()),
        (None, None) => None,
    };
    Ok(ResultRow {
        k: Some(k),
        fvs_size: Some(report.recovered.len()),
        bound_value: planted_size.map(|s| s as f64),
        acyclic_ok: Some(acyclic),
        exact_match: planted.map(|p| MatchCell::Flag(*p == report.recovered)),
        cycles_found: Some(report.cycles_found),
        runtime_ms: elapsed_ms(start),
        ..instance_row(run_id, "recover-planted-fvs", d.vertex_count(), params)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleKind {
    BfsCycle,
    ShortestCycle,
    Explicit,
}

impl FromStr for OracleKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "bfs-cycle" => Ok(OracleKind::BfsCycle),
            "shortest-cycle" => Ok(OracleKind::ShortestCycle),
            "explicit" => Ok(OracleKind::Explicit),
            other => Err(format!("unknown oracle `{other}` (bfs-cycle, shortest-cycle, explicit)")),
        }
    }
}

/// What the generic solver works on.
pub enum GenericInput<'a> {
    Graph(&'a GraphData),
    Family(&'a SubsetFamily),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenericOptions {
    pub oracle: OracleKind,
    pub config: GenericSolverConfig,
    pub root: usize,
    /// Run the add-only online variant instead of the exact solver.
    pub online: bool,
}

pub fn solve_generic_row(
    run_id: &str,
    input: GenericInput<'_>,
    params: &InstanceParams,
    opts: GenericOptions,
) -> Result<ResultRow, RunError> {
    let start = Instant::now();
    let explicit;
    let bfs;
    let shortest;
    let oracle: &dyn Oracle = match (&input, opts.oracle) {
        (GenericInput::Family(f), OracleKind::Explicit) => {
            explicit = ExplicitFamilyOracle::new((*f).clone());
            &explicit
        }
        (GenericInput::Graph(GraphData::Undirected(g)), OracleKind::BfsCycle) => {
            bfs = BfsCycleOracle::new(g, opts.root)?;
            &bfs
        }
        (GenericInput::Graph(GraphData::Undirected(g)), OracleKind::ShortestCycle) => {
            shortest = ShortestCycleOracle::undirected(g);
            &shortest
        }
        (GenericInput::Graph(GraphData::Directed(d)), OracleKind::ShortestCycle) => {
            shortest = ShortestCycleOracle::directed(d);
            &shortest
        }
        (GenericInput::Graph(GraphData::Directed(_)), OracleKind::BfsCycle) => {
            return Err(RunError::Input("the bfs-cycle oracle needs an undirected graph".into()))
        }
        (GenericInput::Graph(_), OracleKind::Explicit) => {
            return Err(RunError::Input("the explicit oracle needs a family file".into()))
        }
        (GenericInput::Family(_), _) => {
            return Err(RunError::Input("family files only work with the explicit oracle".into()))
        }
    };
    let (solution, oracle_calls) = if opts.online {
        let run = online_augment(oracle, pick_min)?;
        (run.solution, run.oracle_calls)
    } else {
        let cert = generic_solve(oracle, &opts.config)?;
        (cert.solution, cert.oracle_calls)
    };
    let (n, valid) = match input {
        GenericInput::Graph(GraphData::Undirected(g)) => (g.vertex_count(), g.is_acyclic(&solution)),
        GenericInput::Graph(GraphData::Directed(d)) => (d.vertex_count(), d.is_acyclic(&solution)),
        GenericInput::Family(f) => (f.universe_size(), Ok(gamma_feasible(&solution, f))),
    };
    let algorithm = match (opts.online, opts.oracle) {
        (false, OracleKind::BfsCycle) => "generic/bfs-cycle",
        (false, OracleKind::ShortestCycle) => "generic/shortest-cycle",
        (false, OracleKind::Explicit) => "generic/explicit",
        (true, OracleKind::BfsCycle) => "online/bfs-cycle",
        (true, OracleKind::ShortestCycle) => "online/shortest-cycle",
        (true, OracleKind::Explicit) => "online/explicit",
    };
    Ok(ResultRow {
        fvs_size: Some(solution.len()),
        acyclic_ok: Some(valid.expect("solution ids are in range")),
        oracle_calls: Some(oracle_calls),
        runtime_ms: elapsed_ms(start),
        ..instance_row(run_id, algorithm, n, params)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recipe {
    Theorem1,
    Lemma1,
    Theorem2,
    Theorem5,
}

impl FromStr for Recipe {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "theorem1" => Ok(Recipe::Theorem1),
            "lemma1" => Ok(Recipe::Lemma1),
            "theorem2" => Ok(Recipe::Theorem2),
            "theorem5" => Ok(Recipe::Theorem5),
            other => Err(format!("unknown recipe `{other}` (theorem1, lemma1, theorem2, theorem5)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub recipe: Recipe,
    pub n: usize,
    pub p: f64,
    pub delta: Option<f64>,
    pub k: Option<usize>,
    /// Subset size for the sampler; defaults to `ceil((2/p) ln(np)) + 1`.
    pub r: Option<usize>,
    pub samples: usize,
    pub seeds: Vec<u64>,
    pub jobs: usize,
    pub sampling: Sampling,
    pub root: usize,
    pub cycle_cap: usize,
}

impl ExperimentConfig {
    pub fn new(recipe: Recipe, n: usize, p: f64, seeds: Vec<u64>) -> Self {
        ExperimentConfig {
            recipe,
            n,
            p,
            delta: None,
            k: None,
            r: None,
            samples: 1000,
            seeds,
            jobs: 1,
            sampling: Sampling::Naive,
            root: 0,
            cycle_cap: crate::planted::DEFAULT_CYCLE_CAP,
        }
    }
}

/// Lower median.
fn median(values: &mut [usize]) -> Option<usize> {
    values.sort_unstable();
    values.get(values.len().saturating_sub(1) / 2).copied()
}

fn one_run(cfg: &ExperimentConfig, seed: u64, applicable: bool) -> Result<ResultRow, RunError> {
    let start = Instant::now();
    let run_id = format!("{:?}-{seed}", cfg.recipe).to_lowercase();
    let model = ModelParams::new(cfg.n, cfg.p, seed);
    let params = InstanceParams::from(&model);
    let mut row = match cfg.recipe {
        Recipe::Theorem1 | Recipe::Lemma1 => {
            let g = gen_gnp_with(&model, cfg.sampling)?;
            let depth = Depth::for_params(cfg.n, cfg.p);
            let res = grow_induced_bfs_with(&g, cfg.root, depth)?;
            let acyclic = g.is_acyclic(&res.fvs).expect("solution ids are vertices");
            let (bound, verdict) = if cfg.recipe == Recipe::Theorem1 {
                let bound = upper_bound_target(cfg.n, cfg.p, BOUND_SLACK);
                (bound, Some(res.fvs.len() as f64 <= bound))
            } else {
                let c = model.mean_degree();
                let report = check_lemma1_bounds(&res.stats, cfg.n, cfg.p, depth);
                (c - 20.0 * c.sqrt(), applicable.then(|| report.all_pass()))
            };
            ResultRow {
                fvs_size: Some(res.fvs.len()),
                bound_value: Some(bound),
                acyclic_ok: Some(acyclic),
                exact_match: verdict.map(MatchCell::Flag),
                ..instance_row(&run_id, "grow-induced-bfs", cfg.n, &params)
            }
        }
        Recipe::Theorem2 => {
            let g = gen_gnp_with(&model, cfg.sampling)?;
            let r = cfg.r.unwrap_or_else(|| lower_bound_subset_size(cfg.n, cfg.p));
            let sample = sample_acyclic_fraction(&g, r, cfg.samples, seed ^ 0x5851_f42d_4c95_7f2d)?;
            ResultRow {
                bound_value: Some(r as f64),
                exact_match: Some(MatchCell::Fraction(sample.fraction())),
                ..instance_row(&run_id, "acyclic-sampler", cfg.n, &params)
            }
        }
        Recipe::Theorem5 => {
            let delta = cfg.delta.ok_or_else(|| RunError::Input("theorem5 needs --delta".into()))?;
            let k = cfg.k.ok_or_else(|| RunError::Input("theorem5 needs --k".into()))?;
            let model = ModelParams::planted(cfg.n, delta, cfg.p, k, seed);
            let inst = gen_planted(&model)?;
            let report = recover_planted(&inst, k, cfg.cycle_cap)?;
            let acyclic = inst.digraph.is_acyclic(&report.recovered).expect("solution ids are vertices");
            ResultRow {
                fvs_size: Some(report.recovered.len()),
                bound_value: Some(inst.planted.len() as f64),
                acyclic_ok: Some(acyclic),
                exact_match: report.exact_match.map(MatchCell::Flag),
                cycles_found: Some(report.cycles_found),
                ..instance_row(&run_id, "recover-planted-fvs", cfg.n, &InstanceParams::from(&model))
            }
        }
    };
    row.runtime_ms = elapsed_ms(start);
    Ok(row)
}

/// Runs the recipe once per seed (in parallel with `jobs > 1`) and appends
/// an aggregate row. Rows come back in seed order.
///
/// The aggregate row has run id `aggregate`, the lower median of
/// `fvs_size`, the common bound value, `acyclic_ok = 1` when every run
/// passed that check, and in `exact_match` the fraction of runs meeting the
/// recipe's target (size bound for `theorem1`, all tracked bounds for
/// `lemma1`, exact recovery for `theorem5`) or, for `theorem2`, the mean
/// acyclic fraction. A `lemma1` run outside the regime `c > 400` starts with
/// a `warning` row and leaves the pass cells empty.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>, RunError> {
    if cfg.seeds.is_empty() {
        return Err(RunError::Input("at least one seed is required".into()));
    }
    let mut rows = Vec::new();
    let c = cfg.n as f64 * cfg.p;
    let applicable = cfg.recipe != Recipe::Lemma1 || (c - 20.0 * c.sqrt() > 0.0 && crate::fvs_random::lemma1_horizon(cfg.n, cfg.p) > 0);
    if !applicable {
        rows.push(ResultRow {
            n: Some(cfg.n),
            p: Some(cfg.p),
            bound_value: Some(c - 20.0 * c.sqrt()),
            ..ResultRow::new("warning", "lemma1: c - 20 sqrt(c) <= 0 or empty horizon, bounds not applicable")
        });
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| RunError::Input(e.to_string()))?;
    let runs: Vec<ResultRow> = pool
        .install(|| cfg.seeds.par_iter().map(|&seed| one_run(cfg, seed, applicable)).collect::<Result<_, _>>())?;

    let mut sizes: Vec<usize> = runs.iter().filter_map(|r| r.fvs_size).collect();
    let acyclic: Vec<bool> = runs.iter().filter_map(|r| r.acyclic_ok).collect();
    let verdict = match cfg.recipe {
        Recipe::Theorem2 => {
            let fractions: Vec<f64> = runs
                .iter()
                .filter_map(|r| match r.exact_match {
                    Some(MatchCell::Fraction(f)) => Some(f),
                    _ => None,
                })
                .collect();
            Some(fractions.iter().sum::<f64>() / fractions.len() as f64)
        }
        _ if !applicable => None,
        _ => {
            let passed = runs
                .iter()
                .filter(|r| r.exact_match == Some(MatchCell::Flag(true)))
                .count();
            Some(passed as f64 / runs.len() as f64)
        }
    };
    let first = &runs[0];
    let aggregate = ResultRow {
        n: first.n,
        p: first.p,
        delta: first.delta,
        k: first.k,
        fvs_size: median(&mut sizes),
        bound_value: first.bound_value,
        acyclic_ok: (!acyclic.is_empty()).then(|| acyclic.iter().all(|&ok| ok)),
        exact_match: verdict.map(MatchCell::Fraction),
        cycles_found: None,
        ..ResultRow::new("aggregate", first.algorithm.clone())
    };
    rows.extend(runs);
    rows.push(aggregate);
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn triangle() -> GraphData {
        GraphData::Undirected(Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap())
    }

    #[test]
    fn fvs_row_on_triangle() {
        let row = solve_fvs_row("t", &triangle(), &InstanceParams::default(), FvsOptions::default()).unwrap();
        assert_eq!(row.fvs_size, Some(1));
        assert_eq!(row.acyclic_ok, Some(true));
        assert_eq!(row.bound_value, None);
    }

    #[test]
    fn generic_row_on_triangle() {
        let opts = GenericOptions {
            oracle: OracleKind::BfsCycle,
            config: GenericSolverConfig::default(),
            root: 0,
            online: false,
        };
        let row = solve_generic_row("t", GenericInput::Graph(&triangle()), &InstanceParams::default(), opts).unwrap();
        assert_eq!(row.fvs_size, Some(1));
        assert!(row.oracle_calls.unwrap() >= 1);
        let bad = solve_generic_row(
            "t",
            GenericInput::Graph(&triangle()),
            &InstanceParams::default(),
            GenericOptions {
                oracle: OracleKind::Explicit,
                ..opts
            },
        );
        assert!(matches!(bad, Err(RunError::Input(_))));
    }

    #[test]
    fn theorem2_with_single_vertices() {
        let cfg = ExperimentConfig {
            r: Some(1),
            samples: 20,
            ..ExperimentConfig::new(Recipe::Theorem2, 50, 0.1, vec![1, 2])
        };
        let rows = run_experiment(&cfg).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[2].exact_match, Some(MatchCell::Fraction(1.0)));
    }

    #[test]
    fn theorem1_aggregate_bound() {
        let cfg = ExperimentConfig::new(Recipe::Theorem1, 200, 0.05, vec![1, 2, 3]);
        let rows = run_experiment(&cfg).unwrap();
        let agg = rows.last().unwrap();
        assert_eq!(agg.run_id, "aggregate");
        assert_eq!(agg.bound_value, Some(upper_bound_target(200, 0.05, 0.9)));
        assert_eq!(agg.acyclic_ok, Some(true));
    }

    #[test]
    fn lemma1_outside_regime_warns() {
        let rows = run_experiment(&ExperimentConfig::new(Recipe::Lemma1, 300, 0.05, vec![4])).unwrap();
        assert_eq!(rows[0].run_id, "warning");
        assert_eq!(rows[1].exact_match, None);
        assert_eq!(rows[2].exact_match, None);
    }

    #[test]
    fn parallel_rows_match_sequential() {
        let cfg = ExperimentConfig::new(Recipe::Theorem1, 150, 0.05, (0..6).collect());
        let strip = |rows: Vec<ResultRow>| rows.iter().map(ResultRow::without_runtime).collect::<Vec<_>>();
        let sequential = strip(run_experiment(&cfg).unwrap());
        let parallel = strip(run_experiment(&ExperimentConfig { jobs: 3, ..cfg }).unwrap());
        assert_eq!(sequential, parallel);
    }

    #[test]
    fn median_is_lower() {
        assert_eq!(median(&mut [4, 1, 3, 2]), Some(2));
        assert_eq!(median(&mut [5]), Some(5));
        assert_eq!(median(&mut []), None);
    }
}
