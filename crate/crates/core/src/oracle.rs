//! Oracles for implicit hitting set problems.
//!
//! An oracle either certifies that a candidate set hits every subset of the
//! (implicit) family, or returns one subset it misses. For feedback vertex
//! sets the family is the vertex sets of all simple cycles, and the oracles
//! here differ only in which missed cycle they report.

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::{Digraph, Graph, VertexSet};
use crate::hitting_set::{HittingSet, SubsetFamily};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleVerdict {
    Feasible,
    /// A member of the family disjoint from the queried set.
    Missed(VertexSet),
}

impl OracleVerdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, OracleVerdict::Feasible)
    }

    pub fn missed(self) -> Option<VertexSet> {
        match self {
            OracleVerdict::Feasible => None,
            OracleVerdict::Missed(s) => Some(s),
        }
    }
}

/// The oracle side of an implicit hitting set instance.
///
/// `check` must be sound: `Feasible` only if no member of the family avoids
/// `h`, and a `Missed` subset must belong to the family and avoid `h`.
pub trait Oracle {
    fn universe_size(&self) -> usize;

    fn check(&self, h: &HittingSet) -> OracleVerdict;
}

impl<O: Oracle + ?Sized> Oracle for &O {
    fn universe_size(&self) -> usize {
        (**self).universe_size()
    }

    fn check(&self, h: &HittingSet) -> OracleVerdict {
        (**self).check(h)
    }
}

impl<O: Oracle + ?Sized> Oracle for Box<O> {
    fn universe_size(&self) -> usize {
        (**self).universe_size()
    }

    fn check(&self, h: &HittingSet) -> OracleVerdict {
        (**self).check(h)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("root {root} out of range for graph on {n} vertices")]
    RootOutOfRange { root: usize, n: usize },
}

/// Wraps an explicit family; reports the first unhit subset in family order.
#[derive(Debug, Clone)]
pub struct ExplicitFamilyOracle {
    family: SubsetFamily,
}

impl ExplicitFamilyOracle {
    pub fn new(family: SubsetFamily) -> Self {
        Self { family }
    }

    pub fn family(&self) -> &SubsetFamily {
        &self.family
    }
}

impl Oracle for ExplicitFamilyOracle {
    fn universe_size(&self) -> usize {
        self.family.universe_size()
    }

    fn check(&self, h: &HittingSet) -> OracleVerdict {
        match self.family.subsets().iter().find(|s| !s.intersects(h)) {
            Some(s) => OracleVerdict::Missed(s.clone()),
            None => OracleVerdict::Feasible,
        }
    }
}

/// Cycle oracle driven by breadth-first search on `G - h`.
///
/// The search starts at `root` (or, if `root` was removed, the smallest
/// surviving id), then restarts from the smallest unvisited id of each
/// remaining component. Neighbors are scanned in ascending order. The first
/// non-tree edge met closes a cycle with the two tree paths up to their
/// lowest common ancestor; that cycle's vertex set is reported.
#[derive(Debug, Clone, Copy)]
pub struct BfsCycleOracle<'g> {
    graph: &'g Graph,
    root: usize,
}

impl<'g> BfsCycleOracle<'g> {
    pub fn new(graph: &'g Graph, root: usize) -> Result<Self, OracleError> {
        let n = graph.vertex_count();
        if root >= n && n > 0 {
            return Err(OracleError::RootOutOfRange { root, n });
        }
        Ok(Self { graph, root })
    }
}

const UNSEEN: usize = usize::MAX;

impl Oracle for BfsCycleOracle<'_> {
    fn universe_size(&self) -> usize {
        self.graph.vertex_count()
    }

    fn check(&self, h: &HittingSet) -> OracleVerdict {
        let g = self.graph;
        let n = g.vertex_count();
        let removed = h.mask(n.max(h.largest().map_or(0, |m| m + 1)));
        let mut parent = vec![UNSEEN; n];
        let mut depth = vec![0usize; n];
        let starts = std::iter::once(self.root)
            .filter(|&r| r < n)
            .chain(0..n);
        let mut queue = VecDeque::new();
        for start in starts {
            if removed[start] || parent[start] != UNSEEN {
                continue;
            }
            parent[start] = start;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for w in g.neighbors(u) {
                    if removed[w] {
                        continue;
                    }
                    if parent[w] == UNSEEN {
                        parent[w] = u;
                        depth[w] = depth[u] + 1;
                        queue.push_back(w);
                    } else if w != parent[u] {
                        return OracleVerdict::Missed(tree_cycle(&parent, &depth, u, w));
                    }
                }
            }
        }
        OracleVerdict::Feasible
    }
}

/// Vertices on the tree paths from `u` and `w` to their common ancestor.
fn tree_cycle(parent: &[usize], depth: &[usize], mut u: usize, mut w: usize) -> VertexSet {
    let mut members = vec![u, w];
    while depth[u] > depth[w] {
        u = parent[u];
        members.push(u);
    }
    while depth[w] > depth[u] {
        w = parent[w];
        members.push(w);
    }
    while u != w {
        u = parent[u];
        w = parent[w];
        members.push(u);
        members.push(w);
    }
    VertexSet::from_unsorted(members)
}

#[derive(Debug, Clone, Copy)]
enum Host<'g> {
    Undirected(&'g Graph),
    Directed(&'g Digraph),
}

impl<'g> Host<'g> {
    fn n(&self) -> usize {
        match self {
            Host::Undirected(g) => g.vertex_count(),
            Host::Directed(d) => d.vertex_count(),
        }
    }

    fn successors(&self, v: usize) -> &'g [u32] {
        match *self {
            Host::Undirected(g) => g.adjacency(v),
            Host::Directed(d) => d.out_adjacency(v),
        }
    }
}

/// Reports a shortest cycle of the surviving (di)graph. Among shortest
/// cycles it picks the one whose vertex sequence, rotated to start at its
/// minimum vertex, is lexicographically smallest.
#[derive(Debug, Clone, Copy)]
pub struct ShortestCycleOracle<'g> {
    host: Host<'g>,
}

impl<'g> ShortestCycleOracle<'g> {
    pub fn undirected(graph: &'g Graph) -> Self {
        Self {
            host: Host::Undirected(graph),
        }
    }

    pub fn directed(digraph: &'g Digraph) -> Self {
        Self {
            host: Host::Directed(digraph),
        }
    }

    /// The canonical shortest cycle of `G - h` as a vertex sequence.
    pub fn shortest_cycle(&self, h: &HittingSet) -> Option<Vec<usize>> {
        let n = self.host.n();
        let removed = h.mask(n.max(h.largest().map_or(0, |m| m + 1)));
        let girth = self.girth(&removed)?;
        let mut on_path = vec![false; n];
        for anchor in (0..n).filter(|&a| !removed[a]) {
            let admissible = |v: usize| v > anchor && !removed[v];
            let to_anchor = self.distances_to(anchor, &admissible, girth);
            let mut found = None;
            search_closed_paths(
                anchor,
                girth,
                |v| self.host.successors(v),
                |v, len| admissible(v) && to_anchor[v] <= girth - (len - 1),
                &mut on_path,
                |path| {
                    found = Some(path.to_vec());
                    true
                },
            );
            if found.is_some() {
                return found;
            }
        }
        unreachable!("a cycle of length {girth} exists")
    }

    /// Length of a shortest cycle avoiding removed vertices.
    fn girth(&self, removed: &[bool]) -> Option<usize> {
        let n = self.host.n();
        let mut best = usize::MAX;
        let mut dist = vec![UNSEEN; n];
        let mut parent = vec![UNSEEN; n];
        let mut queue = VecDeque::new();
        let mut touched = Vec::new();
        for s in (0..n).filter(|&s| !removed[s]) {
            dist[s] = 0;
            parent[s] = s;
            touched.push(s);
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                // No cycle found from here on can beat `best`.
                let floor = match self.host {
                    Host::Directed(_) => dist[u] + 1,
                    Host::Undirected(_) => 2 * dist[u],
                };
                if floor >= best {
                    break;
                }
                for &w in self.host.successors(u) {
                    let w = w as usize;
                    if removed[w] {
                        continue;
                    }
                    match self.host {
                        Host::Directed(_) if w == s => best = best.min(dist[u] + 1),
                        Host::Undirected(_) if dist[w] != UNSEEN && w != parent[u] => {
                            best = best.min(dist[u] + dist[w] + 1)
                        }
                        _ => {}
                    }
                    if dist[w] == UNSEEN {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        touched.push(w);
                        queue.push_back(w);
                    }
                }
            }
            queue.clear();
            for v in touched.drain(..) {
                dist[v] = UNSEEN;
                parent[v] = UNSEEN;
            }
        }
        (best != usize::MAX).then_some(best)
    }

    /// Hop distance from each admissible vertex back to `anchor`, capped
    /// at `limit + 1`.
    fn distances_to(&self, anchor: usize, admissible: &dyn Fn(usize) -> bool, limit: usize) -> Vec<usize> {
        let n = self.host.n();
        let mut dist = vec![limit + 1; n];
        dist[anchor] = 0;
        let mut queue = VecDeque::from([anchor]);
        while let Some(u) = queue.pop_front() {
            if dist[u] >= limit {
                continue;
            }
            let preds: Box<dyn Iterator<Item = usize>> = match self.host {
                Host::Undirected(g) => Box::new(g.neighbors(u)),
                Host::Directed(d) => Box::new(d.in_neighbors(u)),
            };
            for w in preds {
                if admissible(w) && dist[w] > dist[u] + 1 {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}

impl Oracle for ShortestCycleOracle<'_> {
    fn universe_size(&self) -> usize {
        self.host.n()
    }

    fn check(&self, h: &HittingSet) -> OracleVerdict {
        match self.shortest_cycle(h) {
            Some(cycle) => OracleVerdict::Missed(VertexSet::from_unsorted(cycle)),
            None => OracleVerdict::Feasible,
        }
    }
}

/// Depth-first search over simple paths `start = p0, p1, ..., p(len-1)`
/// following `successors`, reporting each path that closes back to `start`.
/// `admissible(v, position)` filters the vertex that would become the
/// `position`-th path element (1-based count after insertion). Successors are
/// tried in ascending order, so paths are reported in lexicographic order.
/// Returns true if `visit` asked to stop.
pub(crate) fn search_closed_paths<'a, S, A, V>(
    start: usize,
    len: usize,
    successors: S,
    admissible: A,
    on_path: &mut [bool],
    mut visit: V,
) -> bool
where
    S: Fn(usize) -> &'a [u32],
    A: Fn(usize, usize) -> bool,
    V: FnMut(&[usize]) -> bool,
{
    debug_assert!(len >= 2);
    let mut path = vec![start];
    let mut cursors = vec![0usize];
    on_path[start] = true;
    let mut stopped = false;
    while let Some(&cursor) = cursors.last() {
        let tip = *path.last().expect("path is nonempty while cursors are");
        let row = successors(tip);
        if path.len() == len {
            if row.binary_search(&(start as u32)).is_ok() && visit(&path) {
                stopped = true;
                break;
            }
        } else if cursor < row.len() {
            *cursors.last_mut().expect("nonempty") += 1;
            let next = row[cursor] as usize;
            if !on_path[next] && admissible(next, path.len() + 1) {
                on_path[next] = true;
                path.push(next);
                cursors.push(0);
            }
            continue;
        }
        cursors.pop();
        on_path[tip] = false;
        path.pop();
    }
    for &v in &path {
        on_path[v] = false;
    }
    stopped
}

/// Every simple directed cycle on exactly `k` vertices, once each, as the
/// vertex sequence starting at its minimum id. Ordered by anchor, then
/// lexicographically by sequence.
pub fn enumerate_k_cycle_sequences(d: &Digraph, k: usize) -> Vec<Vec<usize>> {
    let mut cycles = Vec::new();
    let _ = for_each_k_cycle(d, k, |path| {
        cycles.push(path.to_vec());
        true
    });
    cycles
}

/// Vertex sets of all simple directed `k`-cycles in canonical order. Two
/// distinct cycles on the same vertices appear twice.
pub fn enumerate_k_cycles(d: &Digraph, k: usize) -> Vec<VertexSet> {
    enumerate_k_cycle_sequences(d, k)
        .into_iter()
        .map(VertexSet::from_unsorted)
        .collect()
}

/// Calls `visit` on each canonical `k`-cycle; stops early (returning
/// `Err(())`) as soon as `visit` returns false.
pub(crate) fn for_each_k_cycle<F>(d: &Digraph, k: usize, mut visit: F) -> Result<(), ()>
where
    F: FnMut(&[usize]) -> bool,
{
    if k < 2 {
        return Ok(());
    }
    let mut on_path = vec![false; d.vertex_count()];
    for anchor in 0..d.vertex_count() {
        let stopped = search_closed_paths(
            anchor,
            k,
            |v| d.out_adjacency(v),
            |v, _| v > anchor,
            &mut on_path,
            |path| !visit(path),
        );
        if stopped {
            return Err(());
        }
    }
    Ok(())
}

/// A `k`-cycle through `v` whose other vertices all satisfy `allowed`.
pub fn find_k_cycle_through<A>(d: &Digraph, v: usize, k: usize, allowed: A) -> Option<Vec<usize>>
where
    A: Fn(usize) -> bool,
{
    let mut on_path = vec![false; d.vertex_count()];
    let mut found = None;
    search_closed_paths(
        v,
        k,
        |x| d.out_adjacency(x),
        |x, _| allowed(x),
        &mut on_path,
        |path| {
            found = Some(path.to_vec());
            true
        },
    );
    found
}
