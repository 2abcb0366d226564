//! Explicit hitting set machinery: the collected family of subsets, the
//! feasibility test, an exact minimum solver and the take-everything greedy.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::VertexSet;

/// A hitting set is just a set of universe elements.
pub type HittingSet = VertexSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("empty subset can never be hit")]
    EmptySubset,
    #[error("element {element} outside universe of size {universe_size}")]
    OutOfRange { element: usize, universe_size: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A growing list of nonempty subsets of `0..universe_size`.
#[derive(Debug, Clone, Default)]
pub struct SubsetFamily {
    universe_size: usize,
    subsets: Vec<VertexSet>,
    seen: HashSet<VertexSet>,
}

impl PartialEq for SubsetFamily {
    fn eq(&self, other: &Self) -> bool {
        self.universe_size == other.universe_size && self.subsets == other.subsets
    }
}

impl Eq for SubsetFamily {}

impl SubsetFamily {
    pub fn new(universe_size: usize) -> Self {
        Self {
            universe_size,
            subsets: Vec::new(),
            seen: HashSet::new(),
        }
    }

    pub fn from_subsets<I>(universe_size: usize, subsets: I) -> Result<Self, FamilyError>
    where
        I: IntoIterator,
        I::Item: Into<VertexSet>,
    {
        let mut family = Self::new(universe_size);
        for s in subsets {
            family.insert(s.into())?;
        }
        Ok(family)
    }

    /// Appends `subset`. Returns `Ok(false)` (and keeps the family
    /// unchanged) when the subset is already present.
    pub fn insert(&mut self, subset: VertexSet) -> Result<bool, FamilyError> {
        if subset.is_empty() {
            return Err(FamilyError::EmptySubset);
        }
        if let Some(element) = subset.largest().filter(|&e| e >= self.universe_size) {
            return Err(FamilyError::OutOfRange {
                element,
                universe_size: self.universe_size,
            });
        }
        if !self.seen.insert(subset.clone()) {
            return Ok(false);
        }
        self.subsets.push(subset);
        Ok(true)
    }

    pub fn contains(&self, subset: &VertexSet) -> bool {
        self.seen.contains(subset)
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn subsets(&self) -> &[VertexSet] {
        &self.subsets
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    /// Largest subset size (0 for an empty family).
    pub fn max_subset_size(&self) -> usize {
        self.subsets.iter().map(VertexSet::len).max().unwrap_or(0)
    }

    /// Parses one subset per line as space-separated ids. Blank lines and
    /// lines starting with `#` are skipped; duplicates are ignored.
    pub fn parse(universe_size: usize, text: &str) -> Result<Self, FamilyError> {
        let mut family = Self::new(universe_size);
        for (index, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let ids = line
                .split_whitespace()
                .map(|tok| tok.parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| FamilyError::Parse {
                    line: index + 1,
                    message: e.to_string(),
                })?;
            family
                .insert(VertexSet::from_unsorted(ids))
                .map_err(|e| FamilyError::Parse {
                    line: index + 1,
                    message: e.to_string(),
                })?;
        }
        Ok(family)
    }

    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for s in &self.subsets {
            let ids: Vec<String> = s.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{}", ids.join(" "));
        }
        out
    }
}

/// Whether `h` intersects every subset of `family`.
pub fn gamma_feasible(h: &HittingSet, family: &SubsetFamily) -> bool {
    family.subsets().iter().all(|s| s.intersects(h))
}

/// Processes `subsets` in order; each subset not yet hit contributes all of
/// its elements. With subsets of size at most `k` the result is within a
/// factor `k` of optimal: the subsets taken are pairwise disjoint, so any
/// hitting set needs one element per taken subset.
pub fn greedy_hitting_set<'a, I>(subsets: I) -> HittingSet
where
    I: IntoIterator<Item = &'a VertexSet>,
{
    let mut taken: Vec<bool> = Vec::new();
    let mut members = Vec::new();
    for s in subsets {
        if s.iter().any(|e| taken.get(e).copied().unwrap_or(false)) {
            continue;
        }
        for e in s.iter() {
            if e >= taken.len() {
                taken.resize(e + 1, false);
            }
            taken[e] = true;
            members.push(e);
        }
    }
    VertexSet::from_unsorted(members)
}

/// Minimum-cardinality hitting set of `family`; among all optima, the one
/// whose sorted member list is lexicographically smallest.
pub fn exact_min_hitting_set(family: &SubsetFamily) -> HittingSet {
    if family.is_empty() {
        return HittingSet::new();
    }
    let compact = Compact::new(family);
    let none_chosen = vec![false; compact.elements.len()];
    let optimum = compact
        .min_completion(&none_chosen, &none_chosen, usize::MAX)
        .expect("every subset is nonempty")
        .len();

    // Fix members left to right: the smallest next element that still
    // admits an optimal completion using only larger elements.
    let mut chosen = vec![false; compact.elements.len()];
    let mut excluded = vec![false; compact.elements.len()];
    let mut prefix = Vec::with_capacity(optimum);
    while compact.unhit(&chosen).next().is_some() {
        let slots_after = optimum - prefix.len() - 1;
        let start = prefix.last().map_or(0, |&last| last + 1);
        let next = (start..compact.elements.len())
            .find(|&e| {
                chosen[e] = true;
                let mut limited = excluded.clone();
                limited[..=e].iter_mut().for_each(|x| *x = true);
                let ok = compact
                    .min_completion(&chosen, &limited, slots_after + 1)
                    .is_some();
                chosen[e] = false;
                ok
            })
            .expect("an optimal completion exists");
        chosen[next] = true;
        excluded[..=next].iter_mut().for_each(|x| *x = true);
        prefix.push(next);
    }
    debug_assert_eq!(prefix.len(), optimum);
    prefix.iter().map(|&e| compact.elements[e]).collect()
}

/// The family re-indexed over the elements that occur in it. The element
/// map is increasing, so lexicographic order is preserved.
struct Compact {
    elements: Vec<usize>,
    subsets: Vec<Vec<usize>>,
    covering: Vec<Vec<usize>>,
}

impl Compact {
    fn new(family: &SubsetFamily) -> Self {
        let elements: Vec<usize> = family
            .subsets()
            .iter()
            .flat_map(|s| s.iter())
            .collect::<VertexSet>()
            .into_vec();
        let index = |e: usize| elements.binary_search(&e).expect("element present");
        let subsets: Vec<Vec<usize>> = family
            .subsets()
            .iter()
            .map(|s| s.iter().map(index).collect())
            .collect();
        let mut covering = vec![Vec::new(); elements.len()];
        for (i, s) in subsets.iter().enumerate() {
            for &e in s {
                covering[e].push(i);
            }
        }
        Self {
            elements,
            subsets,
            covering,
        }
    }

    fn unhit<'a>(&'a self, chosen: &'a [bool]) -> impl Iterator<Item = usize> + 'a {
        (0..self.subsets.len()).filter(move |&i| !self.subsets[i].iter().any(|&e| chosen[e]))
    }

    /// Smallest set of extra elements, avoiding `excluded`, that hits every
    /// subset missed by `chosen`, provided one exists with fewer than
    /// `limit` elements.
    fn min_completion(&self, chosen: &[bool], excluded: &[bool], limit: usize) -> Option<Vec<usize>> {
        let mut hits = vec![0usize; self.subsets.len()];
        for (i, s) in self.subsets.iter().enumerate() {
            hits[i] = s.iter().filter(|&&e| chosen[e]).count();
        }
        let mut search = Search {
            compact: self,
            hits,
            excluded: excluded.to_vec(),
            taken: chosen.to_vec(),
            stack: Vec::new(),
            best: None,
            limit,
        };
        search.seed_with_greedy();
        search.run();
        search.best
    }
}

struct Search<'a> {
    compact: &'a Compact,
    hits: Vec<usize>,
    excluded: Vec<bool>,
    taken: Vec<bool>,
    stack: Vec<usize>,
    best: Option<Vec<usize>>,
    /// Only completions strictly smaller than this are of interest.
    limit: usize,
}

impl Search<'_> {
    fn usable(&self, e: usize) -> bool {
        !self.excluded[e] && !self.taken[e]
    }

    fn open_subsets(&self) -> Vec<usize> {
        (0..self.hits.len()).filter(|&i| self.hits[i] == 0).collect()
    }

    fn take(&mut self, e: usize) {
        self.taken[e] = true;
        self.stack.push(e);
        for &i in &self.compact.covering[e] {
            self.hits[i] += 1;
        }
    }

    fn untake(&mut self, e: usize) {
        self.taken[e] = false;
        self.stack.pop();
        for &i in &self.compact.covering[e] {
            self.hits[i] -= 1;
        }
    }

    fn record(&mut self) {
        if self.stack.len() < self.limit {
            self.limit = self.stack.len();
            self.best = Some(self.stack.clone());
        }
    }

    /// Max-coverage greedy, used only to tighten the initial bound.
    fn seed_with_greedy(&mut self) {
        let mut added = Vec::new();
        loop {
            let open = self.open_subsets();
            if open.is_empty() {
                break;
            }
            match self.most_covering(&open) {
                Some(e) => {
                    self.take(e);
                    added.push(e);
                }
                None => break,
            }
        }
        if self.open_subsets().is_empty() {
            self.record();
        }
        for e in added.into_iter().rev() {
            self.untake(e);
        }
    }

    /// Usable element hitting the most open subsets; ties go to the smaller id.
    fn most_covering(&self, open: &[usize]) -> Option<usize> {
        let mut counts = vec![0usize; self.taken.len()];
        for &i in open {
            for &e in &self.compact.subsets[i] {
                if self.usable(e) {
                    counts[e] += 1;
                }
            }
        }
        let (e, &count) = counts
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))?;
        (count > 0).then_some(e)
    }

    /// Number of pairwise disjoint open subsets found greedily (smallest
    /// first), counting usable elements only.
    fn disjoint_lower_bound(&self, open: &[usize]) -> usize {
        let mut order: Vec<(usize, usize)> = open
            .iter()
            .map(|&i| {
                let size = self.compact.subsets[i].iter().filter(|&&e| self.usable(e)).count();
                (size, i)
            })
            .collect();
        order.sort_unstable();
        let mut used = vec![false; self.taken.len()];
        let mut bound = 0;
        for (_, i) in order {
            let s = &self.compact.subsets[i];
            if s.iter().any(|&e| self.usable(e) && used[e]) {
                continue;
            }
            for &e in s {
                used[e] = true;
            }
            bound += 1;
        }
        bound
    }

    fn run(&mut self) {
        let open = self.open_subsets();
        if open.is_empty() {
            self.record();
            return;
        }
        let stuck = open
            .iter()
            .any(|&i| !self.compact.subsets[i].iter().any(|&e| self.usable(e)));
        if stuck || self.stack.len() + self.disjoint_lower_bound(&open) >= self.limit {
            return;
        }
        let Some(e) = self.most_covering(&open) else {
            return;
        };
        self.take(e);
        self.run();
        self.untake(e);

        self.excluded[e] = true;
        self.run();
        self.excluded[e] = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn family(universe: usize, subsets: &[&[usize]]) -> SubsetFamily {
        SubsetFamily::from_subsets(universe, subsets.iter().map(|s| s.to_vec())).unwrap()
    }

    #[test]
    fn feasibility() {
        assert!(gamma_feasible(&HittingSet::new(), &SubsetFamily::new(4)));
        let f = family(4, &[&[1, 2], &[2, 3]]);
        assert!(gamma_feasible(&[2].into(), &f));
        let f = family(4, &[&[1], &[3]]);
        assert!(!gamma_feasible(&[1].into(), &f));
    }

    #[test]
    fn exact_solver_examples() {
        assert_eq!(exact_min_hitting_set(&SubsetFamily::new(3)), HittingSet::new());
        let f = family(4, &[&[1], &[2], &[3]]);
        assert_eq!(exact_min_hitting_set(&f), [1, 2, 3].into());
        // Optima of size 2: {1,3}, {2,3}, {2,4}; the smallest list wins.
        let f = family(5, &[&[1, 2], &[2, 3], &[3, 4]]);
        assert_eq!(exact_min_hitting_set(&f), [1, 3].into());
    }

    #[test]
    fn greedy_examples() {
        let f = family(6, &[&[1, 2, 3], &[3, 4, 5]]);
        assert_eq!(greedy_hitting_set(f.subsets()), [1, 2, 3].into());
        assert_eq!(greedy_hitting_set(SubsetFamily::new(3).subsets()), HittingSet::new());
    }

    #[test]
    fn family_insertion_rules() {
        let mut f = SubsetFamily::new(4);
        assert_eq!(f.insert([1, 2].into()), Ok(true));
        assert_eq!(f.insert([2, 1].into()), Ok(false));
        assert_eq!(f.len(), 1);
        assert_eq!(f.insert(VertexSet::new()), Err(FamilyError::EmptySubset));
        assert_eq!(
            f.insert([4].into()),
            Err(FamilyError::OutOfRange {
                element: 4,
                universe_size: 4
            })
        );
    }

    #[test]
    fn family_text_format() {
        let f = SubsetFamily::parse(5, "# triangle-ish\n1 2\n\n3 2 4\n").unwrap();
        assert_eq!(f.subsets(), &[[1, 2].into(), [2, 3, 4].into()]);
        assert_eq!(f.to_lines(), "1 2\n2 3 4\n");
        assert!(matches!(
            SubsetFamily::parse(5, "1 x"),
            Err(FamilyError::Parse { line: 1, .. })
        ));
    }
}
