//! Seeded random graph models: `G(n,p)`, the uniformly oriented `D(n,p)`,
//! and the planted feedback vertex set model.
//!
//! All randomness comes from [`ChaCha8Rng`] seeded with
//! `ChaCha8Rng::seed_from_u64(seed)`. Pairs `{u, v}` with `u < v` are
//! visited in lexicographic order and the draw sequence per pair is part of
//! the output contract: the same parameters always give the same instance.

use rand::distr::{Bernoulli, Distribution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Digraph, Graph, VertexSet};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("edge probability {0} outside [0, 1]")]
    Probability(f64),
    #[error("directed model needs 2p <= 1, got p = {0}")]
    DirectedDensity(f64),
    #[error("planted fraction delta must lie in (0, 1], got {0:?}")]
    Delta(Option<f64>),
    #[error("planted set is empty: floor(delta * n) = 0")]
    EmptyPlantedSet,
    #[error("vertex count {0} is not supported")]
    VertexCount(usize),
}

/// Parameters shared by the generators. `delta` and `k` only matter for the
/// planted model and its recovery algorithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub n: usize,
    pub p: f64,
    pub delta: Option<f64>,
    pub k: Option<usize>,
    pub seed: u64,
}

impl ModelParams {
    pub fn new(n: usize, p: f64, seed: u64) -> Self {
        Self {
            n,
            p,
            delta: None,
            k: None,
            seed,
        }
    }

    pub fn planted(n: usize, delta: f64, p: f64, k: usize, seed: u64) -> Self {
        Self {
            n,
            p,
            delta: Some(delta),
            k: Some(k),
            seed,
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    /// `c = n p`.
    pub fn mean_degree(&self) -> f64 {
        self.n as f64 * self.p
    }

    /// `floor(delta * n)`; a tiny tolerance absorbs products such as
    /// `0.29 * 100 = 28.999999999999996`.
    pub fn planted_size(&self) -> Option<usize> {
        self.delta
            .map(|delta| (delta * self.n as f64 + 1e-9).floor() as usize)
    }

    fn check_probability(&self) -> Result<(), ModelError> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(ModelError::Probability(self.p));
        }
        if self.n > u32::MAX as usize {
            return Err(ModelError::VertexCount(self.n));
        }
        Ok(())
    }
}

/// How `G(n,p)` pairs are sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sampling {
    /// One Bernoulli draw per pair in lexicographic order. The reference mode.
    #[default]
    Naive,
    /// Jump between selected pairs with geometric gaps. Same distribution as
    /// `Naive`, different random stream; intended for large sparse graphs.
    GeometricSkip,
}

/// A planted instance together with its ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedInstance {
    pub digraph: Digraph,
    /// `P = {0, ..., floor(delta n) - 1}`.
    pub planted: VertexSet,
    pub params: ModelParams,
    /// Order of `V \ P` in which every arc among non-planted vertices points
    /// forward.
    pub dag_order: Vec<usize>,
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn bernoulli(p: f64) -> Bernoulli {
    Bernoulli::new(p).expect("probability validated by caller")
}

/// Every pair `(u, v)`, `u < v`, in lexicographic order.
fn lex_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |u| (u + 1..n).map(move |v| (u, v)))
}

/// Failures before the next success in Bernoulli(p) trials, by inverting
/// the geometric CDF: `floor(ln(1 - U) / ln(1 - p))`.
struct GeometricGap {
    log_q: f64,
}

impl GeometricGap {
    fn new(p: f64) -> Option<Self> {
        (p > 0.0).then(|| GeometricGap { log_q: (-p).ln_1p() })
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> u64 {
        if self.log_q == f64::NEG_INFINITY {
            return 0;
        }
        let u: f64 = rng.random();
        let gap = (-u).ln_1p() / self.log_q;
        // Saturating cast: huge gaps simply run off the end of the pairs.
        gap as u64
    }
}

/// Selected pairs of `G(n,p)` via geometric gaps between successes.
struct SkipPairs {
    rng: ChaCha8Rng,
    gap: Option<GeometricGap>,
    n: u64,
    u: u64,
    v: u64,
}

impl SkipPairs {
    fn new(n: usize, p: f64, seed: u64) -> Self {
        Self {
            rng: rng_for(seed),
            gap: GeometricGap::new(p),
            n: n as u64,
            u: 0,
            v: 1,
        }
    }
}

impl Iterator for SkipPairs {
    type Item = (u32, u32);

    fn next(&mut self) -> Option<(u32, u32)> {
        let gap = self.gap.as_ref()?;
        if self.n < 2 || self.u >= self.n - 1 {
            return None;
        }
        let mut skip = gap.sample(&mut self.rng);
        // Walk `skip` failures forward from the current candidate pair.
        loop {
            let left_in_row = self.n - self.v;
            if skip < left_in_row {
                self.v += skip;
                break;
            }
            skip -= left_in_row;
            self.u += 1;
            self.v = self.u + 1;
            if self.u >= self.n - 1 {
                return None;
            }
        }
        let pair = (self.u as u32, self.v as u32);
        self.v += 1;
        if self.v == self.n {
            self.u += 1;
            self.v = self.u + 1;
        }
        Some(pair)
    }
}

/// `G(n,p)` with the reference (naive) sampler.
pub fn gen_gnp(params: &ModelParams) -> Result<Graph, ModelError> {
    gen_gnp_with(params, Sampling::Naive)
}

pub fn gen_gnp_with(params: &ModelParams, sampling: Sampling) -> Result<Graph, ModelError> {
    params.check_probability()?;
    let n = params.n;
    match sampling {
        Sampling::Naive => {
            let mut rng = rng_for(params.seed);
            let coin = bernoulli(params.p);
            let edges: Vec<(u32, u32)> = lex_pairs(n)
                .filter(|_| coin.sample(&mut rng))
                .map(|(u, v)| (u as u32, v as u32))
                .collect();
            Ok(Graph::from_lex_pairs(n, || edges.iter().copied()))
        }
        Sampling::GeometricSkip => Ok(Graph::from_lex_pairs(n, || {
            SkipPairs::new(n, params.p, params.seed)
        })),
    }
}

/// `D(n,p)`: each pair joins with probability `2p`, then a fair coin picks
/// the orientation (heads: `u -> v` for `u < v`). Never emits antiparallel arcs.
pub fn gen_dnp(params: &ModelParams) -> Result<Digraph, ModelError> {
    gen_dnp_with(params, Sampling::Naive)
}

pub fn gen_dnp_with(params: &ModelParams, sampling: Sampling) -> Result<Digraph, ModelError> {
    params.check_probability()?;
    if 2.0 * params.p > 1.0 {
        return Err(ModelError::DirectedDensity(params.p));
    }
    let n = params.n;
    let orient = bernoulli(0.5);
    let arcs: Vec<(usize, usize)> = match sampling {
        Sampling::Naive => {
            let mut rng = rng_for(params.seed);
            let join = bernoulli(2.0 * params.p);
            lex_pairs(n)
                .filter_map(|(u, v)| {
                    if !join.sample(&mut rng) {
                        return None;
                    }
                    Some(if orient.sample(&mut rng) { (u, v) } else { (v, u) })
                })
                .collect()
        }
        Sampling::GeometricSkip => {
            // The orientation stream is derived from the seed but kept apart
            // from the gap stream.
            let mut coins = rng_for(params.seed ^ 0x9e37_79b9_7f4a_7c15);
            SkipPairs::new(n, 2.0 * params.p, params.seed)
                .map(|(u, v)| {
                    let (u, v) = (u as usize, v as usize);
                    if orient.sample(&mut coins) {
                        (u, v)
                    } else {
                        (v, u)
                    }
                })
                .collect()
        }
    };
    Ok(Digraph::from_arcs(n, arcs).expect("generated arcs are valid"))
}

/// The planted model. Pairs touching `P` join with probability
/// `min(2p, 1)` and are oriented by a fair coin; pairs inside `V \ P` get
/// the forward arc `u -> v` (`u < v`) with probability `p`.
pub fn gen_planted(params: &ModelParams) -> Result<PlantedInstance, ModelError> {
    params.check_probability()?;
    if !matches!(params.delta, Some(d) if d > 0.0 && d <= 1.0) {
        return Err(ModelError::Delta(params.delta));
    }
    let planted_size = params.planted_size().unwrap_or(0);
    if planted_size == 0 {
        return Err(ModelError::EmptyPlantedSet);
    }
    let n = params.n;
    let mut rng = rng_for(params.seed);
    let join = bernoulli((2.0 * params.p).min(1.0));
    let forward = bernoulli(params.p);
    let orient = bernoulli(0.5);

    let mut arcs = Vec::new();
    for (u, v) in lex_pairs(n) {
        if u < planted_size {
            if join.sample(&mut rng) {
                arcs.push(if orient.sample(&mut rng) { (u, v) } else { (v, u) });
            }
        } else if forward.sample(&mut rng) {
            arcs.push((u, v));
        }
    }
    Ok(PlantedInstance {
        digraph: Digraph::from_arcs(n, arcs).expect("generated arcs are valid"),
        planted: VertexSet::full(planted_size),
        params: *params,
        dag_order: (planted_size..n).collect(),
    })
}
