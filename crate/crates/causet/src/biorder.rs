//! Relations between two chains, induced from a system's messages.
//!
//! A [`Biorder`] holds an arbitrary set of pairs between a domain chain and a
//! codomain chain. The interesting ones satisfy the Ferrers property (any two
//! pairs share a corner), which is equivalent to the up-sets of domain
//! elements being nested. Such relations carry a pair of total preorders, the
//! traces, and collapse to a quotient relation on trace classes.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::poset::StrictPoset;
use crate::system::{DistributedSystem, EventId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BiorderError {
    #[error("element {0} appears twice in one chain")]
    DuplicateElement(String),
    #[error("unknown element {0}")]
    UnknownElement(String),
    #[error("codomain of the first relation differs from domain of the second")]
    ChainMismatch,
    #[error("relation is not Ferrers")]
    NotFerrers,
    #[error("unknown process {0}")]
    UnknownProcess(String),
}

/// A binary relation from one chain to another. Chains are given as element
/// lists in chain order; the relation itself is a set of index pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Biorder<T: Ord + Clone> {
    domain: Vec<T>,
    codomain: Vec<T>,
    pairs: BTreeSet<(usize, usize)>,
}

impl<T: Ord + Clone + fmt::Display> Biorder<T> {
    pub fn new<P>(domain: Vec<T>, codomain: Vec<T>, pairs: P) -> Result<Self, BiorderError>
    where
        P: IntoIterator<Item = (T, T)>,
    {
        check_distinct(&domain)?;
        check_distinct(&codomain)?;
        let mut index_pairs = BTreeSet::new();
        for (x, y) in pairs {
            let i = position(&domain, &x)?;
            let j = position(&codomain, &y)?;
            index_pairs.insert((i, j));
        }
        Ok(Biorder {
            domain,
            codomain,
            pairs: index_pairs,
        })
    }
}

impl<T: Ord + Clone> Biorder<T> {
    /// Builds from index pairs directly; out-of-range indices are rejected.
    pub fn from_index_pairs(
        domain: Vec<T>,
        codomain: Vec<T>,
        pairs: BTreeSet<(usize, usize)>,
    ) -> Result<Self, BiorderError> {
        for &(i, j) in &pairs {
            if i >= domain.len() || j >= codomain.len() {
                return Err(BiorderError::UnknownElement(format!(
                    "index pair ({i}, {j})"
                )));
            }
        }
        Ok(Biorder {
            domain,
            codomain,
            pairs,
        })
    }

    pub fn domain(&self) -> &[T] {
        &self.domain
    }

    pub fn codomain(&self) -> &[T] {
        &self.codomain
    }

    pub fn index_pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.pairs
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&T, &T)> {
        self.pairs
            .iter()
            .map(|&(i, j)| (&self.domain[i], &self.codomain[j]))
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, x: &T, y: &T) -> bool {
        match (
            self.domain.iter().position(|e| e == x),
            self.codomain.iter().position(|e| e == y),
        ) {
            (Some(i), Some(j)) => self.pairs.contains(&(i, j)),
            _ => false,
        }
    }

    /// Codomain elements related to `x`, in codomain order.
    pub fn up_set(&self, x: &T) -> Option<Vec<&T>> {
        let i = self.domain.iter().position(|e| e == x)?;
        Some(
            self.up_set_indices(i)
                .into_iter()
                .map(|j| &self.codomain[j])
                .collect(),
        )
    }

    /// Domain elements related to `y`, in domain order.
    pub fn down_set(&self, y: &T) -> Option<Vec<&T>> {
        let j = self.codomain.iter().position(|e| e == y)?;
        Some(
            self.down_set_indices(j)
                .into_iter()
                .map(|i| &self.domain[i])
                .collect(),
        )
    }

    pub(crate) fn up_set_indices(&self, i: usize) -> BTreeSet<usize> {
        self.pairs
            .iter()
            .filter(|&&(a, _)| a == i)
            .map(|&(_, b)| b)
            .collect()
    }

    pub(crate) fn down_set_indices(&self, j: usize) -> BTreeSet<usize> {
        self.pairs
            .iter()
            .filter(|&&(_, b)| b == j)
            .map(|&(a, _)| a)
            .collect()
    }

    /// Any two pairs share a corner: `(a, b)` and `(c, d)` in the relation
    /// force `(a, d)` or `(c, b)` in as well. Checked pairwise, so the test
    /// does not depend on the chain orders at all.
    pub fn is_ferrers(&self) -> bool {
        for &(a, b) in &self.pairs {
            for &(c, d) in &self.pairs {
                if !self.pairs.contains(&(a, d)) && !self.pairs.contains(&(c, b)) {
                    return false;
                }
            }
        }
        true
    }

    /// The relation absorbs chain moves: lowering the domain side or raising
    /// the codomain side of a related pair stays related.
    pub fn respects_chains(&self) -> bool {
        for &(i, j) in &self.pairs {
            if i > 0 && !self.pairs.contains(&(i - 1, j)) {
                return false;
            }
            if j + 1 < self.codomain.len() && !self.pairs.contains(&(i, j + 1)) {
                return false;
            }
        }
        true
    }

    /// Groups both sides by their traces. Domain elements are equivalent when
    /// their up-sets agree, and are ranked by shrinking up-set; codomain
    /// elements are equivalent when their down-sets agree, ranked by growing
    /// down-set. Nestedness of the sets, and hence the ranking, is exactly
    /// the Ferrers property, so anything non-Ferrers is rejected.
    pub fn traces(&self) -> Result<TracePair<T>, BiorderError> {
        if !self.is_ferrers() {
            return Err(BiorderError::NotFerrers);
        }
        let ups: Vec<BTreeSet<usize>> = (0..self.domain.len())
            .map(|i| self.up_set_indices(i))
            .collect();
        let downs: Vec<BTreeSet<usize>> = (0..self.codomain.len())
            .map(|j| self.down_set_indices(j))
            .collect();
        let left = rank_by(&self.domain, &ups, |a, b| b.len().cmp(&a.len()));
        let right = rank_by(&self.codomain, &downs, |a, b| a.len().cmp(&b.len()));
        debug_assert!(nested(&ups) && nested(&downs));
        Ok(TracePair { left, right })
    }

    /// Collapses to the relation between trace classes. Membership is
    /// uniform: one related pair between two classes means every pair is.
    pub fn quotient(&self) -> Result<BiorderQuotient<T>, BiorderError> {
        let TracePair { left, right } = self.traces()?;
        let mut class_pairs = BTreeSet::new();
        for &(i, j) in &self.pairs {
            let r = left.rank_of(&self.domain[i]).unwrap();
            let s = right.rank_of(&self.codomain[j]).unwrap();
            class_pairs.insert((r, s));
        }
        if cfg!(debug_assertions) {
            for &(r, s) in &class_pairs {
                for x in &left.classes[r] {
                    for y in &right.classes[s] {
                        debug_assert!(self.contains(x, y));
                    }
                }
            }
        }
        let relation = Biorder::from_index_pairs(
            (0..left.class_count()).collect(),
            (0..right.class_count()).collect(),
            class_pairs,
        )
        .unwrap();
        Ok(BiorderQuotient {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            domain_classes: left,
            codomain_classes: right,
            relation,
        })
    }

    /// Relational composition: `(x, z)` related when some middle element is
    /// above `x` here and below `z` there. The middle chains must agree.
    pub fn compose(&self, other: &Biorder<T>) -> Result<Biorder<T>, BiorderError> {
        if self.codomain != other.domain {
            return Err(BiorderError::ChainMismatch);
        }
        let mut pairs = BTreeSet::new();
        for &(i, j) in &self.pairs {
            for &(k, l) in &other.pairs {
                if j == k {
                    pairs.insert((i, l));
                }
            }
        }
        Ok(Biorder {
            domain: self.domain.clone(),
            codomain: other.codomain.clone(),
            pairs,
        })
    }
}

fn check_distinct<T: Ord + Clone + fmt::Display>(chain: &[T]) -> Result<(), BiorderError> {
    let mut seen = BTreeSet::new();
    for t in chain {
        if !seen.insert(t) {
            return Err(BiorderError::DuplicateElement(t.to_string()));
        }
    }
    Ok(())
}

fn position<T: PartialEq + fmt::Display>(chain: &[T], t: &T) -> Result<usize, BiorderError> {
    chain
        .iter()
        .position(|e| e == t)
        .ok_or_else(|| BiorderError::UnknownElement(t.to_string()))
}

fn rank_by<T: Clone>(
    elements: &[T],
    sets: &[BTreeSet<usize>],
    cmp: impl Fn(&BTreeSet<usize>, &BTreeSet<usize>) -> std::cmp::Ordering,
) -> RankedPartition<T> {
    let mut order: Vec<usize> = (0..elements.len()).collect();
    order.sort_by(|&a, &b| cmp(&sets[a], &sets[b]).then(a.cmp(&b)));
    let mut classes: Vec<Vec<T>> = Vec::new();
    let mut prev: Option<&BTreeSet<usize>> = None;
    for idx in order {
        if prev != Some(&sets[idx]) {
            classes.push(Vec::new());
        }
        classes.last_mut().unwrap().push(elements[idx].clone());
        prev = Some(&sets[idx]);
    }
    RankedPartition { classes }
}

fn nested(sets: &[BTreeSet<usize>]) -> bool {
    for a in sets {
        for b in sets {
            if !a.is_subset(b) && !b.is_subset(a) {
                return false;
            }
        }
    }
    true
}

/// An ordered partition: class 0 first, class 1 next, and so on. Elements
/// within a class keep the order of the chain they came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedPartition<T> {
    classes: Vec<Vec<T>>,
}

impl<T: PartialEq> RankedPartition<T> {
    pub fn classes(&self) -> &[Vec<T>] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn rank_of(&self, t: &T) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(t))
    }

    pub fn same_class(&self, a: &T, b: &T) -> bool {
        matches!((self.rank_of(a), self.rank_of(b)), (Some(r), Some(s)) if r == s)
    }

    /// True when every class is a singleton.
    pub fn is_discrete(&self) -> bool {
        self.classes.iter().all(|c| c.len() == 1)
    }
}

/// Both trace preorders of a Ferrers relation, as ranked partitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TracePair<T> {
    pub left: RankedPartition<T>,
    pub right: RankedPartition<T>,
}

/// A Ferrers relation collapsed onto its trace classes, together with the
/// class structure needed to expand it back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiorderQuotient<T: Ord + Clone> {
    domain: Vec<T>,
    codomain: Vec<T>,
    pub domain_classes: RankedPartition<T>,
    pub codomain_classes: RankedPartition<T>,
    /// Relation between class ranks. Always respects the rank chains.
    pub relation: Biorder<usize>,
}

impl<T: Ord + Clone> BiorderQuotient<T> {
    /// Re-expands the class relation over the original chains. Round-trips
    /// exactly: `b.quotient().expand() == b`.
    pub fn expand(&self) -> Biorder<T> {
        let mut pairs = BTreeSet::new();
        for &(r, s) in self.relation.index_pairs() {
            for x in &self.domain_classes.classes()[r] {
                for y in &self.codomain_classes.classes()[s] {
                    let i = self.domain.iter().position(|e| e == x).unwrap();
                    let j = self.codomain.iter().position(|e| e == y).unwrap();
                    pairs.insert((i, j));
                }
            }
        }
        Biorder {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            pairs,
        }
    }
}

/// The relation a system's messages induce between two of its chains:
/// `x` relates to `y` when some message goes from at-or-after `x` on the
/// first chain to at-or-before `y` on the second. With no channel between
/// the two, the relation is empty.
pub fn induced_biorder(
    sys: &DistributedSystem,
    from: &str,
    to: &str,
) -> Result<Biorder<EventId>, BiorderError> {
    let chain_i = sys
        .process(from)
        .ok_or_else(|| BiorderError::UnknownProcess(from.to_string()))?;
    let chain_j = sys
        .process(to)
        .ok_or_else(|| BiorderError::UnknownProcess(to.to_string()))?;
    let mut pairs = BTreeSet::new();
    if let Some(comm) = sys.communication(from, to) {
        for (s, r) in comm.index_pairs() {
            for i in 0..=s {
                for j in r..chain_j.len() {
                    pairs.insert((i, j));
                }
            }
        }
    }
    Biorder::from_index_pairs(
        chain_i.event_ids().collect(),
        chain_j.event_ids().collect(),
        pairs,
    )
}

/// Checks the causal condition for a pair set between two posets: for any
/// two pairs `(a, b)` and `(c, d)`, either `a` reaches `d` or `c` reaches
/// `b` in the graph combining both orders with the pairs themselves.
#[allow(clippy::needless_range_loop)] // index pairs walk a square matrix
pub fn is_causal_biorder<T: Ord + Clone + fmt::Display>(
    left: &StrictPoset<T>,
    right: &StrictPoset<T>,
    pairs: &[(T, T)],
) -> Result<bool, BiorderError> {
    let n = left.len();
    let m = right.len();
    let indexed: Vec<(usize, usize)> = pairs
        .iter()
        .map(|(x, y)| {
            let i = position(left.elements(), x)?;
            let j = position(right.elements(), y)?;
            Ok((i, j))
        })
        .collect::<Result<_, BiorderError>>()?;

    // Reachability over left nodes 0..n and right nodes n..n+m.
    let total = n + m;
    let mut reach = vec![vec![false; total]; total];
    for (v, row) in reach.iter_mut().enumerate() {
        row[v] = true;
    }
    for a in 0..n {
        for b in 0..n {
            if left.lt(&left.elements()[a], &left.elements()[b]) {
                reach[a][b] = true;
            }
        }
    }
    for a in 0..m {
        for b in 0..m {
            if right.lt(&right.elements()[a], &right.elements()[b]) {
                reach[n + a][n + b] = true;
            }
        }
    }
    for &(i, j) in &indexed {
        reach[i][n + j] = true;
    }
    for k in 0..total {
        for a in 0..total {
            if reach[a][k] {
                for b in 0..total {
                    if reach[k][b] {
                        reach[a][b] = true;
                    }
                }
            }
        }
    }

    for &(a, b) in &indexed {
        for &(c, d) in &indexed {
            if !reach[a][n + d] && !reach[c][n + b] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
