//! Feedback vertex sets for random graphs by growing an induced BFS tree.
//!
//! Starting from a root, each round exposes the unexplored neighbors `K` of
//! the current survivor level `L`, keeps only the *unique* neighbors `R`
//! (adjacent to exactly one vertex of `L`), and thins `R` to an independent
//! set that becomes the next level. The union of all levels induces a tree;
//! every other vertex goes into the feedback vertex set.
//!
//! Intermediate levels are thinned by deleting the larger endpoint of each
//! surviving edge inside `R`; the final level uses a sequential greedy
//! independent set in ascending id order.

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Digraph, DisjointSets, Graph, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FvsError {
    #[error("root {root} out of range for graph on {n} vertices")]
    RootOutOfRange { root: usize, n: usize },
    #[error("sample size {r} exceeds vertex count {n}")]
    SampleTooLarge { r: usize, n: usize },
    #[error("at least one sample is required")]
    NoSamples,
}

/// Outside the parameter range where the closed-form depth is defined.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("depth formula undefined for n = {n}, p = {p}: needs 0 < p < 1/(16e)")]
pub struct DepthOutOfRegime {
    pub n: usize,
    pub p: f64,
}

/// `T = ceil((ln(1/16p) - ln ln(1/16p)) / ln(c + 20 sqrt(c)))` with `c = np`.
pub fn depth_cap(n: usize, p: f64) -> Result<usize, DepthOutOfRegime> {
    let c = n as f64 * p;
    let inv = 1.0 / (16.0 * p);
    let growth = (c + 20.0 * c.sqrt()).ln();
    let in_regime = p > 0.0 && inv.ln() > 1.0 && growth > 0.0;
    if !in_regime {
        return Err(DepthOutOfRegime { n, p });
    }
    let t = ((inv.ln() - inv.ln().ln()) / growth).ceil();
    Ok(t as usize)
}

/// How many BFS levels to grow.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Depth {
    /// Grow exactly this many levels (fewer if the tree dies out); the
    /// last one is thinned with the greedy independent set.
    Levels(usize),
    /// Keep growing until a level comes out empty, thinning every level
    /// with the greedy independent set.
    Exhaustive,
}

impl Depth {
    /// `Levels(depth_cap(n, p))` when `c - 20 sqrt(c) > 0` and the formula
    /// is defined, `Exhaustive` otherwise.
    pub fn for_params(n: usize, p: f64) -> Depth {
        let c = n as f64 * p;
        match depth_cap(n, p) {
            Ok(t) if c - 20.0 * c.sqrt() > 0.0 => Depth::Levels(t),
            _ => Depth::Exhaustive,
        }
    }

    /// As [`Depth::for_params`] with `p` estimated as `m / C(n, 2)`.
    pub fn for_graph(g: &Graph) -> Depth {
        Depth::for_params(g.vertex_count(), edge_density(g))
    }
}

/// `m / C(n, 2)`, or 0 for graphs with fewer than two vertices.
pub fn edge_density(g: &Graph) -> f64 {
    let n = g.vertex_count() as f64;
    if n < 2.0 {
        return 0.0;
    }
    g.edge_count() as f64 / (n * (n - 1.0) / 2.0)
}

/// Counts for one BFS level. Level 0 is the root alone (`survivors =
/// unique = exposed = 1`); level `t > 0` describes `K_t`, `R_t`, `W_t` and
/// `L_t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Level {
    /// `l_t = |L_t|`.
    pub survivors: usize,
    /// `u_t`: vertices still unexposed after this level.
    pub unexposed: usize,
    /// `r_t = |R_t|`.
    pub unique: usize,
    /// Edges with both endpoints in `R_t`.
    pub internal_edges: usize,
    /// `|W_t| = r_t - l_t`, vertices of `R_t` dropped by the thinning.
    pub deleted: usize,
    /// `k_t = |K_t|`.
    pub exposed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LevelStats {
    pub levels: Vec<Level>,
}

impl LevelStats {
    /// Checks `l <= r <= k`, `u` non-increasing, `l = r - |W|` and
    /// `|W| <= m` on every level.
    pub fn is_consistent(&self) -> bool {
        let per_level = self.levels.iter().all(|lv| {
            lv.survivors <= lv.unique
                && lv.unique <= lv.exposed
                && lv.survivors + lv.deleted == lv.unique
                && lv.deleted <= lv.internal_edges
        });
        let monotone = self
            .levels
            .windows(2)
            .all(|w| w[1].unexposed <= w[0].unexposed);
        per_level && monotone
    }

    pub fn total_survivors(&self) -> usize {
        self.levels.iter().map(|lv| lv.survivors).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FvsResult {
    pub fvs: VertexSet,
    /// Union of all levels; induces a tree containing the root.
    pub survivors: VertexSet,
    /// The levels `L_0, L_1, ...` themselves.
    pub layers: Vec<VertexSet>,
    pub stats: LevelStats,
    pub depth: Depth,
    /// Expansion rounds actually performed.
    pub levels_used: usize,
}

/// Grows the induced BFS tree with the depth chosen from the edge density.
pub fn grow_induced_bfs(g: &Graph, root: usize) -> Result<FvsResult, FvsError> {
    grow_induced_bfs_with(g, root, Depth::for_graph(g))
}

pub fn grow_induced_bfs_with(g: &Graph, root: usize, depth: Depth) -> Result<FvsResult, FvsError> {
    let n = g.vertex_count();
    if root >= n {
        return Err(FvsError::RootOutOfRange { root, n });
    }
    let rounds = match depth {
        Depth::Levels(t) => t,
        Depth::Exhaustive => usize::MAX,
    };

    let mut exposed = vec![false; n];
    let mut hits = vec![0u32; n];
    let mut in_unique = vec![false; n];
    let mut dropped = vec![false; n];
    let mut frontier = Vec::new();
    exposed[root] = true;
    let mut unexposed = n - 1;

    let mut layers = vec![VertexSet::from(vec![root])];
    let mut levels = vec![Level {
        survivors: 1,
        unexposed,
        unique: 1,
        internal_edges: 0,
        deleted: 0,
        exposed: 1,
    }];

    let mut round = 0;
    while round < rounds {
        let current = layers.last().expect("root layer");
        if current.is_empty() {
            break;
        }
        round += 1;

        frontier.clear();
        for x in current.iter() {
            for y in g.neighbors(x) {
                if exposed[y] {
                    continue;
                }
                if hits[y] == 0 {
                    frontier.push(y);
                }
                hits[y] += 1;
            }
        }
        frontier.sort_unstable();
        unexposed -= frontier.len();
        let mut unique = Vec::new();
        for &y in &frontier {
            exposed[y] = true;
            if hits[y] == 1 {
                unique.push(y);
                in_unique[y] = true;
            }
            hits[y] = 0;
        }

        let internal_edges = unique
            .iter()
            .map(|&u| g.neighbors(u).filter(|&v| v > u && in_unique[v]).count())
            .sum();

        let greedy = matches!(depth, Depth::Exhaustive) || round == rounds;
        let mut next = Vec::with_capacity(unique.len());
        if greedy {
            for &v in &unique {
                if dropped[v] {
                    continue;
                }
                next.push(v);
                for w in g.neighbors(v) {
                    if in_unique[w] {
                        dropped[w] = true;
                    }
                }
            }
        } else {
            // Scan edges inside R in lexicographic order; an edge still
            // intact loses its larger endpoint.
            for &u in &unique {
                for v in g.neighbors(u) {
                    if v > u && in_unique[v] && !dropped[u] && !dropped[v] {
                        dropped[v] = true;
                    }
                }
            }
            next.extend(unique.iter().copied().filter(|&v| !dropped[v]));
        }
        for &v in &unique {
            in_unique[v] = false;
            dropped[v] = false;
        }

        levels.push(Level {
            survivors: next.len(),
            unexposed,
            unique: unique.len(),
            internal_edges,
            deleted: unique.len() - next.len(),
            exposed: frontier.len(),
        });
        layers.push(VertexSet::from_unsorted(next));
    }

    let survivors: VertexSet = layers.iter().flat_map(|l| l.iter()).collect();
    Ok(FvsResult {
        fvs: survivors.complement(n),
        survivors,
        layers,
        stats: LevelStats { levels },
        depth,
        levels_used: round,
    })
}

/// Runs the undirected algorithm on the shadow of `d`; the result is a
/// feedback vertex set of `d` as well.
///
/// A pair of opposite arcs is a 2-cycle that the shadow cannot see, so one
/// endpoint of each such pair (the larger id, unless it is the root) is
/// put into the solution first and the algorithm runs on the shadow of the
/// rest. Model instances never contain such pairs.
pub fn fvs_directed(d: &Digraph, root: usize) -> Result<FvsResult, FvsError> {
    let n = d.vertex_count();
    if root >= n {
        return Err(FvsError::RootOutOfRange { root, n });
    }
    let shadow = d.shadow();
    let mut breakers = vec![false; n];
    for (u, v) in d.arcs().filter(|&(u, v)| u < v && d.has_arc(v, u)) {
        if !breakers[u] && !breakers[v] {
            breakers[if v == root { u } else { v }] = true;
        }
    }
    if !breakers.contains(&true) {
        return grow_induced_bfs(&shadow, root);
    }
    let keep: VertexSet = (0..n).filter(|&v| !breakers[v]).collect();
    let (sub, map) = shadow.induced_subgraph(&keep).expect("kept ids are in range");
    let sub_root = map.binary_search(&root).expect("root is never a breaker");
    let res = grow_induced_bfs(&sub, sub_root)?;
    let lift = |set: &VertexSet| set.iter().map(|v| map[v]).collect::<VertexSet>();
    let survivors = lift(&res.survivors);
    Ok(FvsResult {
        fvs: survivors.complement(n),
        survivors,
        layers: res.layers.iter().map(lift).collect(),
        ..res
    })
}

/// Moves vertices of `fvs` back into the graph in ascending id order
/// whenever doing so keeps `G - fvs` a forest.
pub fn prune_fvs(g: &Graph, fvs: &VertexSet) -> VertexSet {
    let n = g.vertex_count();
    let mut removed = fvs.mask(n);
    let mut forest = DisjointSets::new(n);
    for (u, v) in g.edges() {
        if !removed[u] && !removed[v] {
            forest.union(u, v);
        }
    }
    let mut roots = Vec::new();
    for v in fvs.iter() {
        roots.clear();
        roots.extend(g.neighbors(v).filter(|&w| !removed[w]).map(|w| forest.find(w)));
        roots.sort_unstable();
        if roots.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        removed[v] = false;
        for w in g.neighbors(v).filter(|&w| !removed[w] && w != v) {
            forest.union(v, w);
        }
    }
    (0..n).filter(|&v| removed[v]).collect()
}

/// Outcome of one inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

impl BoundCheck {
    pub fn holds(&self) -> bool {
        self.lower <= self.value && self.value <= self.upper
    }
}

/// The three concentration checks at level `t`. `unique` compares `r` of
/// the *next* level, i.e. the unique neighbors of `L_t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelCheck {
    pub t: usize,
    pub unexposed: BoundCheck,
    pub survivors: BoundCheck,
    pub unique: Option<BoundCheck>,
}

impl LevelCheck {
    pub fn holds(&self) -> bool {
        self.unexposed.holds() && self.survivors.holds() && self.unique.is_none_or(|r| r.holds())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Lemma1Report {
    /// `c - 20 sqrt(c) <= 0` or the horizon is empty: the bounds say nothing.
    NotApplicable { c: f64, horizon: usize },
    Checked {
        c: f64,
        /// Largest `T` with `16 T p (c + 20 sqrt c)^(T-1) <= 1/2`.
        horizon: usize,
        /// Whether the depth used by the algorithm satisfies that inequality.
        depth_within_horizon: Option<bool>,
        levels: Vec<LevelCheck>,
    },
}

impl Lemma1Report {
    pub fn is_applicable(&self) -> bool {
        matches!(self, Lemma1Report::Checked { .. })
    }

    /// All tracked bounds hold (false when not applicable).
    pub fn all_pass(&self) -> bool {
        match self {
            Lemma1Report::NotApplicable { .. } => false,
            Lemma1Report::Checked { levels, .. } => levels.iter().all(LevelCheck::holds),
        }
    }

    /// Only the `u_t` bounds hold.
    pub fn unexposed_pass(&self) -> bool {
        match self {
            Lemma1Report::NotApplicable { .. } => false,
            Lemma1Report::Checked { levels, .. } => levels.iter().all(|l| l.unexposed.holds()),
        }
    }
}

/// Largest `T >= 1` with `16 T p (c + 20 sqrt c)^(T-1) <= 1/2`, or 0 when
/// even `T = 1` fails.
pub fn lemma1_horizon(n: usize, p: f64) -> usize {
    let c = n as f64 * p;
    let growth = c + 20.0 * c.sqrt();
    let holds = |t: usize| 16.0 * t as f64 * p * growth.powi(t as i32 - 1) <= 0.5;
    let mut t = 0;
    while t < 64 && holds(t + 1) {
        t += 1;
    }
    t
}

/// Evaluates the concentration bounds on `u_t`, `l_t` and the unique
/// neighbor count of `L_t`, for `t` below the horizon.
pub fn check_lemma1_bounds(stats: &LevelStats, n: usize, p: f64, depth: Depth) -> Lemma1Report {
    let c = n as f64 * p;
    let horizon = lemma1_horizon(n, p);
    let shrink = c - 20.0 * c.sqrt();
    if shrink <= 0.0 || horizon == 0 {
        return Lemma1Report::NotApplicable { c, horizon };
    }
    let grow = c + 20.0 * c.sqrt();
    let nf = n as f64;
    let eps = ((nf.ln().ln()).max(0.0) / nf).sqrt();
    let geometric = |base: f64, upto: usize| (0..=upto).map(|i| base.powi(i as i32)).sum::<f64>();
    let tf = horizon as f64;

    let mut levels = Vec::new();
    for t in 0..horizon {
        let Some(level) = stats.levels.get(t) else {
            break;
        };
        let ti = t as i32;
        let unexposed = BoundCheck {
            value: level.unexposed as f64,
            lower: (nf - geometric(grow, t)) * (1.0 - eps),
            upper: (nf - 0.25 * geometric(shrink, t)) * (1.0 + eps),
        };
        let survivors = BoundCheck {
            value: level.survivors as f64,
            lower: shrink.powi(ti)
                * (1.0 - 16.0 * tf * p * grow.powi(ti))
                * (1.0 - geometric(grow, t) / nf),
            upper: grow.powi(ti),
        };
        let unique = stats.levels.get(t + 1).map(|next| BoundCheck {
            value: next.unique as f64,
            lower: shrink.powi(ti + 1) / 4.0 * (1.0 - geometric(grow, t + 1) / nf) * (1.0 - eps),
            upper: grow.powi(ti + 1) * (1.0 + eps),
        });
        levels.push(LevelCheck {
            t,
            unexposed,
            survivors,
            unique,
        });
    }
    let depth_within_horizon = match depth {
        Depth::Levels(t) => Some(t <= horizon),
        Depth::Exhaustive => None,
    };
    Lemma1Report::Checked {
        c,
        horizon,
        depth_within_horizon,
        levels,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AcyclicSample {
    pub samples: usize,
    pub acyclic: usize,
}

impl AcyclicSample {
    pub fn fraction(&self) -> f64 {
        self.acyclic as f64 / self.samples as f64
    }
}

/// Draws `samples` uniform `r`-subsets and counts those inducing a forest.
pub fn sample_acyclic_fraction(g: &Graph, r: usize, samples: usize, seed: u64) -> Result<AcyclicSample, FvsError> {
    let n = g.vertex_count();
    if r > n {
        return Err(FvsError::SampleTooLarge { r, n });
    }
    if samples == 0 {
        return Err(FvsError::NoSamples);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut slot = vec![usize::MAX; n];
    let mut acyclic = 0;
    for _ in 0..samples {
        let chosen = index::sample(&mut rng, n, r).into_vec();
        for (i, &v) in chosen.iter().enumerate() {
            slot[v] = i;
        }
        let mut forest = DisjointSets::new(r);
        let is_forest = chosen.iter().all(|&v| {
            g.neighbors(v)
                .filter(|&w| w > v && slot[w] != usize::MAX)
                .all(|w| forest.union(slot[v], slot[w]))
        });
        if is_forest {
            acyclic += 1;
        }
        for &v in &chosen {
            slot[v] = usize::MAX;
        }
    }
    Ok(AcyclicSample { samples, acyclic })
}

/// `n - slack * (1/p) ln(np)`: the upper-bound target for the undirected
/// algorithm, with `slack` standing in for the `1 - o(1)` factor.
pub fn upper_bound_target(n: usize, p: f64, slack: f64) -> f64 {
    n as f64 - slack * (n as f64 * p).ln() / p
}

/// `n - slack * (1/2p) ln(np)` for the directed model.
pub fn directed_upper_bound_target(n: usize, p: f64, slack: f64) -> f64 {
    n as f64 - slack * (n as f64 * p).ln() / (2.0 * p)
}

/// `ceil((2/p) ln(np)) + 1`: subsets this large should almost never be acyclic.
pub fn lower_bound_subset_size(n: usize, p: f64) -> usize {
    (2.0 / p * (n as f64 * p).ln()).ceil() as usize + 1
}
