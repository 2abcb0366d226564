//! Recovering a planted feedback vertex set from short cycles.
//!
//! Cycles of length `2, 3, ..., k` are enumerated in canonical order and fed
//! to the take-all greedy hitting set. The greedy set `S` is then filtered:
//! a vertex `u` of `S` is kept when some `k`-cycle through `u` avoids the
//! rest of `S`.

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Digraph, VertexSet};
use crate::models::PlantedInstance;
use crate::oracle::{find_k_cycle_through, for_each_k_cycle};

/// Default bound on the number of short cycles enumerated before giving up.
pub const DEFAULT_CYCLE_CAP: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlantedError {
    #[error("cycle length k must be at least 3, got {0}")]
    CycleLength(usize),
    #[error(
        "more than {cap} cycles of length at most {k}; the parameters are far outside \
         the recoverable regime (lower p or k, or raise the cap)"
    )]
    CycleCapExceeded { cap: usize, k: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecoveryReport {
    /// The filtered set `H`.
    pub recovered: VertexSet,
    /// The greedy hitting set `S` of all enumerated cycles.
    pub greedy_set: VertexSet,
    /// Number of cycles of length at most `k` enumerated.
    pub cycles_found: usize,
    /// `H == P`, when the planted set is known.
    pub exact_match: Option<bool>,
}

pub fn recover_planted_fvs(d: &Digraph, k: usize, cycle_cap: usize) -> Result<RecoveryReport, PlantedError> {
    if k < 3 {
        return Err(PlantedError::CycleLength(k));
    }
    let n = d.vertex_count();
    let mut in_greedy = vec![false; n];
    let mut cycles_found = 0usize;
    for len in 2..=k {
        let finished = for_each_k_cycle(d, len, |cycle| {
            cycles_found += 1;
            if cycles_found > cycle_cap {
                return false;
            }
            if !cycle.iter().any(|&v| in_greedy[v]) {
                for &v in cycle {
                    in_greedy[v] = true;
                }
            }
            true
        });
        if finished.is_err() {
            return Err(PlantedError::CycleCapExceeded { cap: cycle_cap, k });
        }
    }
    let greedy_set: VertexSet = (0..n).filter(|&v| in_greedy[v]).collect();
    let recovered = greedy_set
        .iter()
        .filter(|&u| find_k_cycle_through(d, u, k, |x| !in_greedy[x]).is_some())
        .collect();
    Ok(RecoveryReport {
        recovered,
        greedy_set,
        cycles_found,
        exact_match: None,
    })
}

/// Runs the recovery on a model instance and compares against its planted set.
pub fn recover_planted(inst: &PlantedInstance, k: usize, cycle_cap: usize) -> Result<RecoveryReport, PlantedError> {
    let mut report = recover_planted_fvs(&inst.digraph, k, cycle_cap)?;
    report.exact_match = Some(report.recovered == inst.planted);
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlantedDiagnostics {
    /// Size of each sampled subset `S'` of `V \ P`.
    pub sample_size: usize,
    /// For each sample, the planted vertices with no `k`-cycle inside
    /// `S' + v`.
    pub cycle_failures: Vec<VertexSet>,
    pub greedy_size: usize,
    /// `k |P|`.
    pub greedy_bound: usize,
    /// Set when some planted vertex failed the cycle check.
    pub warning: Option<String>,
}

impl PlantedDiagnostics {
    pub fn cycles_ok(&self) -> bool {
        self.cycle_failures.iter().all(VertexSet::is_empty)
    }

    pub fn greedy_ok(&self) -> bool {
        self.greedy_size <= self.greedy_bound
    }
}

/// Samples `samples` subsets `S'` of `V \ P` with `|S'| = ceil(|V \ P| / 10)`
/// and checks that each planted vertex lies on a `k`-cycle inside `S' + v`;
/// also checks the greedy set stays within `k |P|`.
pub fn verify_planted_theorems(
    inst: &PlantedInstance,
    k: usize,
    samples: usize,
    cycle_cap: usize,
    seed: u64,
) -> Result<PlantedDiagnostics, PlantedError> {
    let report = recover_planted(inst, k, cycle_cap)?;
    let d = &inst.digraph;
    let n = d.vertex_count();
    let rest = inst.planted.complement(n);
    let sample_size = rest.len().div_ceil(10);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut in_sample = vec![false; n];
    let mut cycle_failures = Vec::with_capacity(samples);
    for _ in 0..samples {
        let chosen: Vec<usize> = index::sample(&mut rng, rest.len(), sample_size)
            .into_iter()
            .map(|i| rest.as_slice()[i])
            .collect();
        for &v in &chosen {
            in_sample[v] = true;
        }
        let failed: VertexSet = inst
            .planted
            .iter()
            .filter(|&v| find_k_cycle_through(d, v, k, |x| in_sample[x]).is_none())
            .collect();
        for &v in &chosen {
            in_sample[v] = false;
        }
        cycle_failures.push(failed);
    }
    let warning = cycle_failures.iter().any(|f| !f.is_empty()).then(|| {
        format!(
            "some planted vertices have no {k}-cycle in a sampled subset; \
             the density condition p >= C / n^(1 - 2/{k}) is likely violated (p = {})",
            inst.params.p
        )
    });
    Ok(PlantedDiagnostics {
        sample_size,
        cycle_failures,
        greedy_size: report.greedy_set.len(),
        greedy_bound: k * inst.planted.len(),
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{gen_planted, ModelParams};

    #[test]
    fn acyclic_input() {
        let d = Digraph::from_arcs(4, [(0, 1), (1, 2), (0, 3)]).unwrap();
        let report = recover_planted_fvs(&d, 3, DEFAULT_CYCLE_CAP).unwrap();
        assert_eq!(report.cycles_found, 0);
        assert!(report.greedy_set.is_empty());
        assert!(report.recovered.is_empty());
    }

    #[test]
    fn three_triangles_through_hub() {
        let arcs = [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0), (0, 5), (5, 6), (6, 0)];
        let d = Digraph::from_arcs(7, arcs).unwrap();
        let report = recover_planted_fvs(&d, 3, DEFAULT_CYCLE_CAP).unwrap();
        assert_eq!(report.cycles_found, 3);
        assert_eq!(report.greedy_set, [0, 1, 2].into());
        assert_eq!(report.recovered, [0].into());
    }

    #[test]
    fn two_cycles_are_enumerated_first() {
        // The 2-cycle {1,2} is taken before the triangle 0->1->2->0.
        let d = Digraph::from_arcs(3, [(1, 2), (2, 1), (0, 1), (2, 0)]).unwrap();
        let report = recover_planted_fvs(&d, 3, DEFAULT_CYCLE_CAP).unwrap();
        assert_eq!(report.cycles_found, 2);
        assert_eq!(report.greedy_set, [1, 2].into());
    }

    #[test]
    fn cap_and_parameter_errors() {
        let d = Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(recover_planted_fvs(&d, 2, 10), Err(PlantedError::CycleLength(2)));
        assert_eq!(
            recover_planted_fvs(&d, 3, 0),
            Err(PlantedError::CycleCapExceeded { cap: 0, k: 3 })
        );
    }

    #[test]
    fn empty_model_warns() {
        let inst = gen_planted(&ModelParams::planted(60, 0.1, 0.0, 3, 1)).unwrap();
        let diag = verify_planted_theorems(&inst, 3, 2, DEFAULT_CYCLE_CAP, 5).unwrap();
        assert_eq!(diag.sample_size, 6);
        assert!(!diag.cycles_ok());
        assert_eq!(diag.cycle_failures[0].len(), 6);
        assert!(diag.warning.is_some());
        assert!(diag.greedy_ok());
    }

    #[test]
    fn dense_model_recovers() {
        let inst = gen_planted(&ModelParams::planted(120, 0.05, 0.6, 3, 3)).unwrap();
        let report = recover_planted(&inst, 3, DEFAULT_CYCLE_CAP).unwrap();
        assert!(report.recovered.is_subset(&report.greedy_set));
        assert_eq!(report.exact_match, Some(true));
    }
}
