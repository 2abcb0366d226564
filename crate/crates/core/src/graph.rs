//! Vertex-indexed undirected graphs and digraphs.
//!
//! Vertices are the dense ids `0..n`. Both graph types store adjacency in
//! compressed sparse row form with `u32` neighbor ids, so instances with
//! ~10^8 edges stay within a couple of gigabytes.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("{0} vertices exceeds the supported maximum")]
    TooManyVertices(usize),
}

/// A sorted list of distinct vertex ids.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    /// Builds a set from ids in any order; duplicates collapse.
    pub fn from_unsorted(mut ids: Vec<usize>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        Self(ids)
    }

    /// `0..n` as a set.
    pub fn full(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// Inserts `v`, returning whether it was absent.
    pub fn insert(&mut self, v: usize) -> bool {
        match self.0.binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.0.insert(pos, v);
                true
            }
        }
    }

    pub fn remove(&mut self, v: usize) -> bool {
        match self.0.binary_search(&v) {
            Ok(pos) => {
                self.0.remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn largest(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn intersects(&self, other: &VertexSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut ids = Vec::with_capacity(self.len() + other.len());
        ids.extend_from_slice(&self.0);
        ids.extend_from_slice(&other.0);
        Self::from_unsorted(ids)
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        Self(self.iter().filter(|&v| !other.contains(v)).collect())
    }

    /// Fails if any member is `>= n`.
    pub fn check_range(&self, n: usize) -> Result<(), GraphError> {
        match self.largest() {
            Some(vertex) if vertex >= n => Err(GraphError::VertexOutOfRange { vertex, n }),
            _ => Ok(()),
        }
    }

    /// Indicator vector of length `n`. Members must be `< n`.
    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for v in self.iter() {
            mask[v] = true;
        }
        mask
    }

    /// Members of `0..n` not in this set.
    pub fn complement(&self, n: usize) -> VertexSet {
        let mask = self.mask(n);
        Self((0..n).filter(|&v| !mask[v]).collect())
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self::from_unsorted(iter.into_iter().collect())
    }
}

impl<const N: usize> From<[usize; N]> for VertexSet {
    fn from(ids: [usize; N]) -> Self {
        Self::from_unsorted(ids.to_vec())
    }
}

impl From<Vec<usize>> for VertexSet {
    fn from(ids: Vec<usize>) -> Self {
        Self::from_unsorted(ids)
    }
}

/// Compressed adjacency rows, each row sorted ascending.
#[derive(Clone, PartialEq, Eq)]
struct Csr {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Csr {
    fn empty(n: usize) -> Self {
        Self {
            offsets: vec![0; n + 1],
            targets: Vec::new(),
        }
    }

    /// Rows are sorted and checked for duplicates; `pairs` are `(row, target)`.
    fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut offsets = vec![0usize; n + 1];
        for &(row, _) in pairs {
            offsets[row + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut targets = vec![0u32; pairs.len()];
        for &(row, target) in pairs {
            targets[cursor[row]] = target as u32;
            cursor[row] += 1;
        }
        for row in 0..n {
            let slice = &mut targets[offsets[row]..offsets[row + 1]];
            slice.sort_unstable();
            if let Some(w) = slice.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::DuplicateEdge(row, w[0] as usize));
            }
        }
        Ok(Self { offsets, targets })
    }

    fn row(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    fn n(&self) -> usize {
        self.offsets.len() - 1
    }
}

fn check_vertex(v: usize, n: usize) -> Result<(), GraphError> {
    if v >= n {
        Err(GraphError::VertexOutOfRange { vertex: v, n })
    } else {
        Ok(())
    }
}

fn check_order(n: usize) -> Result<(), GraphError> {
    if n > u32::MAX as usize {
        Err(GraphError::TooManyVertices(n))
    } else {
        Ok(())
    }
}

/// Simple undirected graph on `0..n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Csr,
    edge_count: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self {
            adj: Csr::empty(n),
            edge_count: 0,
        }
    }

    /// Builds a graph from unordered pairs. Rejects self-loops, duplicates
    /// (in either orientation) and out-of-range ids.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        check_order(n)?;
        let mut pairs = Vec::new();
        for (u, v) in edges {
            check_vertex(u, n)?;
            check_vertex(v, n)?;
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            pairs.push((u, v));
            pairs.push((v, u));
        }
        let edge_count = pairs.len() / 2;
        let adj = Csr::from_pairs(n, &pairs).map_err(|e| match e {
            GraphError::DuplicateEdge(a, b) => GraphError::DuplicateEdge(a.min(b), a.max(b)),
            other => other,
        })?;
        Ok(Self { adj, edge_count })
    }

    /// Builds a graph from a replayable stream of pairs `(u, v)` with
    /// `u < v`, strictly increasing in lexicographic order. The stream is
    /// consumed twice (degree count, then fill) so no edge list is held.
    pub(crate) fn from_lex_pairs<F, I>(n: usize, mut stream: F) -> Self
    where
        F: FnMut() -> I,
        I: Iterator<Item = (u32, u32)>,
    {
        let mut offsets = vec![0usize; n + 1];
        let mut edge_count = 0usize;
        for (u, v) in stream() {
            offsets[u as usize + 1] += 1;
            offsets[v as usize + 1] += 1;
            edge_count += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut targets = vec![0u32; 2 * edge_count];
        // Lexicographic order fills every row in ascending order: a row `v`
        // first receives its smaller neighbors (rows u < v), then its own.
        for (u, v) in stream() {
            targets[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
            targets[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }
        Self {
            adj: Csr { offsets, targets },
            edge_count,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.n()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj.row(v).len()
    }

    /// Sorted neighbor ids of `v`.
    pub fn adjacency(&self, v: usize) -> &[u32] {
        self.adj.row(v)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj.row(v).iter().map(|&w| w as usize)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.vertex_count() && self.adj.row(u).binary_search(&(v as u32)).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.vertex_count()).flat_map(move |u| {
            self.adj
                .row(u)
                .iter()
                .map(|&v| v as usize)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Whether the subgraph induced on `V \ removed` is a forest.
    pub fn is_acyclic(&self, removed: &VertexSet) -> Result<bool, GraphError> {
        let n = self.vertex_count();
        removed.check_range(n)?;
        Ok(self.is_forest_without(&removed.mask(n)))
    }

    /// Forest check with removed vertices given as an indicator vector.
    pub fn is_forest_without(&self, removed: &[bool]) -> bool {
        let mut dsu = DisjointSets::new(self.vertex_count());
        for (u, v) in self.edges() {
            if removed[u] || removed[v] {
                continue;
            }
            if !dsu.union(u, v) {
                return false;
            }
        }
        true
    }

    /// Subgraph induced on `keep`, relabeled to `0..keep.len()`. The
    /// returned map sends new id `i` to original id `map[i]`.
    pub fn induced_subgraph(&self, keep: &VertexSet) -> Result<(Graph, Vec<usize>), GraphError> {
        let n = self.vertex_count();
        keep.check_range(n)?;
        let mut new_id = vec![u32::MAX; n];
        for (i, v) in keep.iter().enumerate() {
            new_id[v] = i as u32;
        }
        let mut pairs = Vec::new();
        for (i, v) in keep.iter().enumerate() {
            for w in self.neighbors(v) {
                if new_id[w] != u32::MAX {
                    pairs.push((i, new_id[w] as usize));
                }
            }
        }
        let edge_count = pairs.len() / 2;
        let adj = Csr::from_pairs(keep.len(), &pairs)?;
        Ok((Graph { adj, edge_count }, keep.as_slice().to_vec()))
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.vertex_count())
            .field("m", &self.edge_count)
            .finish()
    }
}

/// Directed graph on `0..n` without self-loops or repeated arcs.
/// Antiparallel pairs are allowed.
#[derive(Clone, PartialEq, Eq)]
pub struct Digraph {
    out: Csr,
    inc: Csr,
}

impl Digraph {
    pub fn empty(n: usize) -> Self {
        Self {
            out: Csr::empty(n),
            inc: Csr::empty(n),
        }
    }

    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        check_order(n)?;
        let mut forward = Vec::new();
        for (u, v) in arcs {
            check_vertex(u, n)?;
            check_vertex(v, n)?;
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            forward.push((u, v));
        }
        let backward: Vec<_> = forward.iter().map(|&(u, v)| (v, u)).collect();
        Ok(Self {
            out: Csr::from_pairs(n, &forward)?,
            inc: Csr::from_pairs(n, &backward)?,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.out.n()
    }

    pub fn arc_count(&self) -> usize {
        self.out.targets.len()
    }

    /// Sorted out-neighbor ids of `v`.
    pub fn out_adjacency(&self, v: usize) -> &[u32] {
        self.out.row(v)
    }

    pub fn out_neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.out.row(v).iter().map(|&w| w as usize)
    }

    pub fn in_neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.inc.row(v).iter().map(|&w| w as usize)
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out.row(v).len()
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        u < self.vertex_count() && self.out.row(u).binary_search(&(v as u32)).is_ok()
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.vertex_count())
            .flat_map(move |u| self.out.row(u).iter().map(move |&v| (u, v as usize)))
    }

    /// Whether the sub-digraph induced on `V \ removed` has a topological order.
    pub fn is_acyclic(&self, removed: &VertexSet) -> Result<bool, GraphError> {
        let n = self.vertex_count();
        removed.check_range(n)?;
        Ok(self.is_dag_without(&removed.mask(n)))
    }

    /// Kahn's algorithm restricted to vertices with `removed[v] == false`.
    pub fn is_dag_without(&self, removed: &[bool]) -> bool {
        let n = self.vertex_count();
        let mut indegree = vec![0usize; n];
        let mut remaining = 0usize;
        for v in (0..n).filter(|&v| !removed[v]) {
            remaining += 1;
            indegree[v] = self.in_neighbors(v).filter(|&u| !removed[u]).count();
        }
        let mut queue: VecDeque<usize> = (0..n)
            .filter(|&v| !removed[v] && indegree[v] == 0)
            .collect();
        while let Some(u) = queue.pop_front() {
            remaining -= 1;
            for v in self.out_neighbors(u) {
                if removed[v] {
                    continue;
                }
                indegree[v] -= 1;
                if indegree[v] == 0 {
                    queue.push_back(v);
                }
            }
        }
        remaining == 0
    }

    /// The underlying undirected graph: `{u, v}` is an edge iff `(u, v)` or
    /// `(v, u)` is an arc.
    pub fn shadow(&self) -> Graph {
        let mut edges: Vec<(usize, usize)> =
            self.arcs().map(|(u, v)| (u.min(v), u.max(v))).collect();
        edges.sort_unstable();
        edges.dedup();
        Graph::from_edges(self.vertex_count(), edges).expect("arcs of a valid digraph")
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Digraph")
            .field("n", &self.vertex_count())
            .field("arcs", &self.arc_count())
            .finish()
    }
}

/// Union-find with path halving and union by size.
#[derive(Clone, Debug)]
pub struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; false if they were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}
