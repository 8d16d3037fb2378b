//! Finite strict partial orders and the algorithms the rest of the crate
//! leans on: transitive closure with cycle witnesses, transitive reduction,
//! width through bipartite matching, linear extensions, order dimension,
//! and synthesis of a distributed execution out of a poset.

use std::fmt;

use thiserror::Error;

mod extensions;
mod synthesis;

pub use extensions::{bijective_multiutility, Realizer};
pub use synthesis::{enumerate_decompositions, synthesize_system, SynthesisError};

/// A directed cycle, listed as a path whose last entry repeats the first,
/// e.g. `c, a, d, b, c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleWitness<T> {
    pub path: Vec<T>,
}

impl<T: Ord + Clone> CycleWitness<T> {
    /// The cycle's members, each listed once, sorted.
    pub fn distinct(&self) -> Vec<T> {
        let mut v: Vec<T> = self.path[..self.path.len().saturating_sub(1)].to_vec();
        v.sort();
        v.dedup();
        v
    }
}

impl<T: fmt::Display> fmt::Display for CycleWitness<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.path.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[derive(Error, Clone, Debug, PartialEq, Eq)]
pub enum PosetError {
    #[error("{0} elements exceed the exhaustive bound of {1}")]
    TooLarge(usize, usize),
    #[error("search budget exhausted")]
    BudgetExhausted,
}

/// A finite strict partial order, stored as a transitively closed
/// irreflexive matrix over a sorted element list.
///
/// Elements are canonicalized (sorted, deduplicated) on construction, so two
/// posets compare equal exactly when they have the same elements and the
/// same order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictPoset<T: Ord + Clone> {
    pub(crate) elements: Vec<T>,
    pub(crate) lt: Vec<Vec<bool>>,
}

impl<T: Ord + Clone> StrictPoset<T> {
    /// Transitive closure of the given pairs over the union of `elements`
    /// and all pair endpoints. Fails with a cycle witness when the pairs
    /// admit one; the witness is deterministic given the input order.
    pub fn from_pairs<I, P>(elements: I, pairs: P) -> Result<Self, CycleWitness<T>>
    where
        I: IntoIterator<Item = T>,
        P: IntoIterator<Item = (T, T)>,
    {
        let pairs: Vec<(T, T)> = pairs.into_iter().collect();
        let mut set: std::collections::BTreeSet<T> = elements.into_iter().collect();
        for (a, b) in &pairs {
            set.insert(a.clone());
            set.insert(b.clone());
        }
        let elements: Vec<T> = set.into_iter().collect();
        let index = |t: &T| elements.binary_search(t).expect("endpoint collected above");

        let n = elements.len();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (a, b) in &pairs {
            adj[index(a)].push(index(b));
        }

        if let Some(cycle) = find_cycle(&adj) {
            return Err(CycleWitness {
                path: cycle.into_iter().map(|i| elements[i].clone()).collect(),
            });
        }

        let lt = close(&adj);
        Ok(StrictPoset { elements, lt })
    }

    /// The total order `elements[0] < elements[1] < ...`.
    pub fn chain(elements: Vec<T>) -> Self {
        let pairs: Vec<(T, T)> = elements
            .windows(2)
            .map(|w| (w[0].clone(), w[1].clone()))
            .collect();
        StrictPoset::from_pairs(elements, pairs)
            .unwrap_or_else(|_| unreachable!("a chain has no cycle"))
    }

    /// The empty order on the given elements.
    pub fn antichain(elements: Vec<T>) -> Self {
        StrictPoset::from_pairs(elements, Vec::new())
            .unwrap_or_else(|_| unreachable!("no pairs, no cycle"))
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[T] {
        &self.elements
    }

    pub fn contains(&self, t: &T) -> bool {
        self.elements.binary_search(t).is_ok()
    }

    pub(crate) fn index_of(&self, t: &T) -> Option<usize> {
        self.elements.binary_search(t).ok()
    }

    /// Strict precedence.
    pub fn lt(&self, a: &T, b: &T) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => self.lt[i][j],
            _ => false,
        }
    }

    pub fn comparable(&self, a: &T, b: &T) -> bool {
        self.lt(a, b) || self.lt(b, a)
    }

    /// All strict pairs `(a, b)` with `a < b`, sorted.
    pub fn strict_pairs(&self) -> Vec<(T, T)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in 0..self.len() {
                if self.lt[i][j] {
                    out.push((self.elements[i].clone(), self.elements[j].clone()));
                }
            }
        }
        out
    }

    /// Ordered incomparable pairs `(a, b)`, a != b, both directions, sorted.
    pub fn incomparable_pairs(&self) -> Vec<(T, T)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in 0..self.len() {
                if i != j && !self.lt[i][j] && !self.lt[j][i] {
                    out.push((self.elements[i].clone(), self.elements[j].clone()));
                }
            }
        }
        out
    }

    pub(crate) fn incomparable_index_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in 0..self.len() {
                if i != j && !self.lt[i][j] && !self.lt[j][i] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Transitive reduction: the covering pairs, sorted. Closing them again
    /// reproduces the poset.
    pub fn covers(&self) -> Vec<(T, T)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            'pair: for j in 0..n {
                if !self.lt[i][j] {
                    continue;
                }
                for k in 0..n {
                    if self.lt[i][k] && self.lt[k][j] {
                        continue 'pair;
                    }
                }
                out.push((self.elements[i].clone(), self.elements[j].clone()));
            }
        }
        out
    }

    /// Maximum antichain size, computed as a minimum chain cover via
    /// bipartite matching (chains = elements - maximum matching).
    pub fn width(&self) -> usize {
        let n = self.len();
        if n == 0 {
            return 0;
        }
        let adj: Vec<Vec<usize>> = (0..n)
            .map(|i| (0..n).filter(|&j| self.lt[i][j]).collect())
            .collect();
        n - maximum_matching(&adj, n, &(0..n).collect::<Vec<_>>()).len()
    }

}

/// Depth-first search over raw adjacency; returns the first cycle found,
/// expressed as indices with the start repeated at the end. Roots are tried
/// in ascending order and edges in insertion order, so the result is a pure
/// function of the input.
pub(crate) fn find_cycle(adj: &[Vec<usize>]) -> Option<Vec<usize>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Color {
        White,
        Gray,
        Black,
    }

    fn visit(
        v: usize,
        adj: &[Vec<usize>],
        color: &mut [Color],
        stack: &mut Vec<usize>,
    ) -> Option<Vec<usize>> {
        color[v] = Color::Gray;
        stack.push(v);
        for &w in &adj[v] {
            match color[w] {
                Color::White => {
                    if let Some(c) = visit(w, adj, color, stack) {
                        return Some(c);
                    }
                }
                Color::Gray => {
                    let pos = stack.iter().position(|&x| x == w).expect("gray is on stack");
                    let mut cycle: Vec<usize> = stack[pos..].to_vec();
                    cycle.push(w);
                    return Some(cycle);
                }
                Color::Black => {}
            }
        }
        stack.pop();
        color[v] = Color::Black;
        None
    }

    let n = adj.len();
    let mut color = vec![Color::White; n];
    let mut stack = Vec::new();
    for v in 0..n {
        if color[v] == Color::White {
            if let Some(c) = visit(v, adj, &mut color, &mut stack) {
                return Some(c);
            }
        }
    }
    None
}

/// Reachability closure of an acyclic adjacency list.
fn close(adj: &[Vec<usize>]) -> Vec<Vec<bool>> {
    let n = adj.len();
    let mut lt = vec![vec![false; n]; n];
    let mut stack = Vec::new();
    for start in 0..n {
        stack.extend(adj[start].iter().copied());
        while let Some(v) = stack.pop() {
            if !lt[start][v] {
                lt[start][v] = true;
                stack.extend(adj[v].iter().copied());
            }
        }
    }
    lt
}

/// Kuhn's augmenting-path maximum matching. `lefts` fixes the order in which
/// left vertices are processed, which in turn fixes which maximum matching
/// is produced; adjacency order breaks remaining ties. Returns pairs
/// `(left, right)`.
pub(crate) fn maximum_matching(
    adj: &[Vec<usize>],
    n_right: usize,
    lefts: &[usize],
) -> Vec<(usize, usize)> {
    fn try_augment(
        v: usize,
        adj: &[Vec<usize>],
        matched_to: &mut [Option<usize>],
        used: &mut [bool],
    ) -> bool {
        for &u in &adj[v] {
            if used[u] {
                continue;
            }
            used[u] = true;
            if matched_to[u].is_none()
                || try_augment(matched_to[u].unwrap(), adj, matched_to, used)
            {
                matched_to[u] = Some(v);
                return true;
            }
        }
        false
    }

    let mut matched_to: Vec<Option<usize>> = vec![None; n_right];
    for &v in lefts {
        let mut used = vec![false; n_right];
        try_augment(v, adj, &mut matched_to, &mut used);
    }
    let mut out = Vec::new();
    for (right, left) in matched_to.iter().enumerate() {
        if let Some(l) = left {
            out.push((*l, right));
        }
    }
    out
}
