//! Brute-force references shared by the integration tests.

#![allow(dead_code)]

use ihs::hitting_set::gamma_feasible;
use ihs::{Digraph, Graph, SubsetFamily, VertexSet};

/// Connected components of `g` restricted to `keep`, by flood fill.
pub fn components(g: &Graph, keep: &[bool]) -> usize {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut count = 0;
    for s in 0..n {
        if !keep[s] || seen[s] {
            continue;
        }
        count += 1;
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(u) = stack.pop() {
            for w in g.neighbors(u) {
                if keep[w] && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    count
}

pub fn induced_edge_count(g: &Graph, keep: &[bool]) -> usize {
    g.edges().filter(|&(u, v)| keep[u] && keep[v]).count()
}

pub fn is_forest_brute(g: &Graph, removed: &VertexSet) -> bool {
    let keep: Vec<bool> = (0..g.vertex_count()).map(|v| !removed.contains(v)).collect();
    let vertices = keep.iter().filter(|&&k| k).count();
    induced_edge_count(g, &keep) + components(g, &keep) == vertices
}

/// A directed graph is acyclic iff repeatedly deleting sinks empties it.
pub fn is_dag_brute(d: &Digraph, removed: &VertexSet) -> bool {
    let n = d.vertex_count();
    let mut alive: Vec<bool> = (0..n).map(|v| !removed.contains(v)).collect();
    loop {
        let sink = (0..n).find(|&v| alive[v] && d.out_neighbors(v).all(|w| !alive[w]));
        match sink {
            Some(v) => alive[v] = false,
            None => return alive.iter().all(|&a| !a),
        }
    }
}

/// Whether a simple cycle on exactly `len` vertices exists among `alive`.
pub fn has_cycle_of_length(succ: &dyn Fn(usize) -> Vec<usize>, n: usize, alive: &[bool], len: usize, undirected: bool) -> bool {
    fn extend(
        path: &mut Vec<usize>,
        len: usize,
        succ: &dyn Fn(usize) -> Vec<usize>,
        alive: &[bool],
        undirected: bool,
    ) -> bool {
        let start = path[0];
        let tip = *path.last().unwrap();
        if path.len() == len {
            return succ(tip).contains(&start) && !(undirected && len < 3);
        }
        for w in succ(tip) {
            if alive[w] && w > start && !path.contains(&w) {
                path.push(w);
                if extend(path, len, succ, alive, undirected) {
                    return true;
                }
                path.pop();
            }
        }
        false
    }
    (0..n).filter(|&s| alive[s]).any(|s| extend(&mut vec![s], len, succ, alive, undirected))
}

pub fn brute_min_hitting_set(family: &SubsetFamily) -> VertexSet {
    let u = family.universe_size();
    let mut best: Option<VertexSet> = None;
    for mask in 0u32..(1u32 << u) {
        let h: VertexSet = (0..u).filter(|&e| mask >> e & 1 == 1).collect();
        if !gamma_feasible(&h, family) {
            continue;
        }
        let better = match &best {
            None => true,
            Some(b) => h.len() < b.len() || (h.len() == b.len() && h.as_slice() < b.as_slice()),
        };
        if better {
            best = Some(h);
        }
    }
    best.unwrap()
}

pub fn brute_min_fvs_size(g: &Graph) -> usize {
    let n = g.vertex_count();
    (0u32..(1u32 << n))
        .map(|mask| (0..n).filter(|&v| mask >> v & 1 == 1).collect::<VertexSet>())
        .filter(|h| is_forest_brute(g, h))
        .map(|h| h.len())
        .min()
        .unwrap()
}

/// Every simple directed `k`-cycle, rotated to start at its minimum, by
/// trying all orderings of all `k`-subsets.
pub fn brute_k_cycles(d: &Digraph, k: usize) -> Vec<Vec<usize>> {
    fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
        if items.len() <= 1 {
            return vec![items.to_vec()];
        }
        let mut out = Vec::new();
        for i in 0..items.len() {
            let mut rest = items.to_vec();
            let head = rest.remove(i);
            for mut tail in permutations(&rest) {
                tail.insert(0, head);
                out.push(tail);
            }
        }
        out
    }
    let n = d.vertex_count();
    let mut cycles = Vec::new();
    for mask in 0u32..(1u32 << n) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        for tail in permutations(&members[1..]) {
            let mut seq = vec![members[0]];
            seq.extend(tail);
            if (0..k).all(|i| d.has_arc(seq[i], seq[(i + 1) % k])) {
                cycles.push(seq);
            }
        }
    }
    cycles.sort();
    cycles
}

