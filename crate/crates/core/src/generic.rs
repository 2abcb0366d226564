//! Exact oracle-driven solver for implicit hitting set problems, and the
//! online add-only variant.
//!
//! The exact solver keeps a list `gamma` of subsets returned by the oracle.
//! Each round starts from the whole universe, shrinks it by swaps
//! `H' = (H + X) - Y` with `|X| < |Y|` while `H'` hits `gamma`, asking the
//! oracle about each candidate. When no swap applies, a minimum hitting set
//! `K` of `gamma` is computed. Since `gamma` is a subfamily of the implicit
//! family, `|K|` is a lower bound on the optimum; the solver stops once
//! `|H| = |K|` or `K` itself is feasible.

use itertools::Itertools;
use thiserror::Error;

use crate::graph::VertexSet;
use crate::hitting_set::{exact_min_hitting_set, gamma_feasible, FamilyError, HittingSet, SubsetFamily};
use crate::oracle::{Oracle, OracleVerdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenericSolverConfig {
    /// Largest `|Y|` tried by the swap search. Must be at least 1.
    pub max_swap_out: usize,
    /// Cap on oracle calls; `None` means `10 * |U| + 1000`.
    pub max_iterations: Option<usize>,
}

impl Default for GenericSolverConfig {
    fn default() -> Self {
        Self {
            max_swap_out: 2,
            max_iterations: None,
        }
    }
}

impl GenericSolverConfig {
    pub fn iteration_cap(&self, universe_size: usize) -> usize {
        self.max_iterations
            .unwrap_or(10 * universe_size + 1000)
    }
}

/// Why the returned solution is optimal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Optimality {
    /// The feasible `H` has the size of a minimum hitting set of `gamma`.
    SizeMatch,
    /// A minimum hitting set of `gamma` turned out to be feasible.
    FeasibleOptimum,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveCertificate {
    pub solution: HittingSet,
    pub gamma: SubsetFamily,
    pub proof: Optimality,
    pub oracle_calls: usize,
    /// Calls to the exact explicit solver.
    pub subroutine_calls: usize,
}

/// Solver state at the moment a run was aborted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialSolve {
    pub best_feasible: HittingSet,
    pub gamma: SubsetFamily,
    pub oracle_calls: usize,
    pub subroutine_calls: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("universe is empty")]
    EmptyUniverse,
    #[error("swap bound must be at least 1")]
    InvalidSwapBound,
    #[error("the whole universe is not a hitting set")]
    InfeasibleUniverse,
    #[error("iteration cap of {cap} oracle calls reached")]
    IterationCap { cap: usize, partial: Box<PartialSolve> },
    #[error("oracle returned {0:?}, which is already in gamma")]
    DuplicateSubset(VertexSet),
    #[error("oracle returned {subset:?}, which intersects the queried set")]
    SubsetNotMissed { subset: VertexSet },
    #[error("oracle returned an invalid subset: {0}")]
    InvalidSubset(#[from] FamilyError),
}

struct Run<'o, O: Oracle + ?Sized> {
    oracle: &'o O,
    gamma: SubsetFamily,
    oracle_calls: usize,
    subroutine_calls: usize,
    cap: usize,
}

impl<O: Oracle + ?Sized> Run<'_, O> {
    /// Queries the oracle; a miss is validated and appended to gamma.
    fn query(&mut self, h: &HittingSet, best: &HittingSet) -> Result<bool, SolveError> {
        if self.oracle_calls >= self.cap {
            return Err(SolveError::IterationCap {
                cap: self.cap,
                partial: Box::new(PartialSolve {
                    best_feasible: best.clone(),
                    gamma: self.gamma.clone(),
                    oracle_calls: self.oracle_calls,
                    subroutine_calls: self.subroutine_calls,
                }),
            });
        }
        self.oracle_calls += 1;
        match self.oracle.check(h) {
            OracleVerdict::Feasible => Ok(true),
            OracleVerdict::Missed(subset) => {
                if subset.intersects(h) {
                    return Err(SolveError::SubsetNotMissed { subset });
                }
                // `h` hit all of gamma, so a sound oracle never repeats a member.
                if !self.gamma.insert(subset.clone())? {
                    return Err(SolveError::DuplicateSubset(subset));
                }
                Ok(false)
            }
        }
    }
}

/// First gamma-feasible `(H + X) - Y` with `X` outside `H`, `Y` inside `H`
/// and `|X| < |Y| <= max_swap_out`. Candidates are ordered by `|Y|`, then
/// `Y` lexicographically, then `|X|`, then `X` lexicographically.
fn find_swap(h: &HittingSet, gamma: &SubsetFamily, universe: usize, max_swap_out: usize) -> Option<HittingSet> {
    let inside = h.as_slice();
    let outside = h.complement(universe).into_vec();
    let mut mask = h.mask(universe);
    for y_size in 1..=max_swap_out.min(inside.len()) {
        for y in inside.iter().copied().combinations(y_size) {
            y.iter().for_each(|&e| mask[e] = false);
            for x_size in 0..y_size.min(outside.len() + 1) {
                for x in outside.iter().copied().combinations(x_size) {
                    x.iter().for_each(|&e| mask[e] = true);
                    let hits_all = gamma
                        .subsets()
                        .iter()
                        .all(|s| s.iter().any(|e| mask[e]));
                    if hits_all {
                        return Some((0..universe).filter(|&e| mask[e]).collect());
                    }
                    x.iter().for_each(|&e| mask[e] = false);
                }
            }
            y.iter().for_each(|&e| mask[e] = true);
        }
    }
    None
}

/// Runs the exact solver to a certified optimum.
pub fn generic_solve<O: Oracle + ?Sized>(oracle: &O, config: &GenericSolverConfig) -> Result<SolveCertificate, SolveError> {
    let universe = oracle.universe_size();
    if universe == 0 {
        return Err(SolveError::EmptyUniverse);
    }
    if config.max_swap_out == 0 {
        return Err(SolveError::InvalidSwapBound);
    }
    let mut run = Run {
        oracle,
        gamma: SubsetFamily::new(universe),
        oracle_calls: 0,
        subroutine_calls: 0,
        cap: config.iteration_cap(universe),
    };
    let everything = VertexSet::full(universe);
    if !run.query(&everything, &everything)? {
        return Err(SolveError::InfeasibleUniverse);
    }

    loop {
        let mut current = everything.clone();
        while let Some(candidate) = find_swap(&current, &run.gamma, universe, config.max_swap_out) {
            if run.query(&candidate, &current)? {
                current = candidate;
            }
        }

        let relaxed = exact_min_hitting_set(&run.gamma);
        run.subroutine_calls += 1;
        debug_assert!(gamma_feasible(&relaxed, &run.gamma));
        let (solution, proof) = if current.len() == relaxed.len() {
            (current, Optimality::SizeMatch)
        } else if run.query(&relaxed, &current)? {
            (relaxed, Optimality::FeasibleOptimum)
        } else {
            continue;
        };
        return Ok(SolveCertificate {
            solution,
            gamma: run.gamma,
            proof,
            oracle_calls: run.oracle_calls,
            subroutine_calls: run.subroutine_calls,
        });
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OnlineRun {
    pub solution: HittingSet,
    pub oracle_calls: usize,
    /// Subsets revealed by the oracle, in order.
    pub revealed: Vec<VertexSet>,
}

/// Add-only online algorithm: start from the empty set and, for every
/// missed subset the oracle reveals, commit to one element chosen by `pick`.
/// `pick` receives the missed subset and the current set and must return a
/// member of the subset.
pub fn online_augment<O, P>(oracle: &O, mut pick: P) -> Result<OnlineRun, SolveError>
where
    O: Oracle + ?Sized,
    P: FnMut(&VertexSet, &HittingSet) -> usize,
{
    let mut solution = HittingSet::new();
    let mut revealed = Vec::new();
    let mut oracle_calls = 0;
    loop {
        oracle_calls += 1;
        match oracle.check(&solution) {
            OracleVerdict::Feasible => {
                return Ok(OnlineRun {
                    solution,
                    oracle_calls,
                    revealed,
                })
            }
            OracleVerdict::Missed(subset) => {
                if subset.is_empty() {
                    return Err(FamilyError::EmptySubset.into());
                }
                if subset.intersects(&solution) {
                    return Err(SolveError::SubsetNotMissed { subset });
                }
                let choice = pick(&subset, &solution);
                assert!(subset.contains(choice), "pick must return a member of the missed subset");
                solution.insert(choice);
                revealed.push(subset);
            }
        }
    }
}

/// The default pick rule: the smallest id of the missed subset.
pub fn pick_min(subset: &VertexSet, _current: &HittingSet) -> usize {
    subset.as_slice()[0]
}
