//! Linear extensions, order dimension, and realizer construction.

use std::collections::BTreeSet;

use crate::utility::{whole, MultiUtility};

use super::{PosetError, StrictPoset};

/// Elements at or above this count refuse exhaustive extension enumeration.
const EXHAUSTIVE_MAX: usize = 12;
/// Dimension search is exact and exponential; cap the instance size.
const DIMENSION_MAX: usize = 10;

struct Budget(Option<u64>);

impl Budget {
    fn spend(&mut self, amount: u64) -> Result<(), PosetError> {
        if let Some(left) = self.0.as_mut() {
            if *left < amount {
                return Err(PosetError::BudgetExhausted);
            }
            *left -= amount;
        }
        Ok(())
    }
}

/// A family of linear extensions whose intersection is meant to reproduce
/// the poset it was built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realizer<T> {
    extensions: Vec<Vec<T>>,
}

impl<T: Ord + Clone> Realizer<T> {
    pub fn size(&self) -> usize {
        self.extensions.len()
    }

    pub fn extensions(&self) -> &[Vec<T>] {
        &self.extensions
    }

    /// True when every member is a linear extension of `p` and the
    /// intersection of the members is exactly `p`.
    pub fn is_realizer_of(&self, p: &StrictPoset<T>) -> bool {
        for ext in &self.extensions {
            if ext.len() != p.len() {
                return false;
            }
            let mut pos = vec![usize::MAX; p.len()];
            for (at, t) in ext.iter().enumerate() {
                match p.index_of(t) {
                    Some(i) => pos[i] = at,
                    None => return false,
                }
            }
            for i in 0..p.len() {
                for j in 0..p.len() {
                    if p.lt[i][j] && pos[i] > pos[j] {
                        return false;
                    }
                }
            }
        }
        // Intersection check: pairs ordered the same way everywhere must be
        // exactly the strict pairs.
        for i in 0..p.len() {
            for j in 0..p.len() {
                if i == j {
                    continue;
                }
                let everywhere = self.extensions.iter().all(|ext| {
                    let pi = ext.iter().position(|t| *t == p.elements[i]).unwrap();
                    let pj = ext.iter().position(|t| *t == p.elements[j]).unwrap();
                    pi < pj
                });
                if everywhere != p.lt[i][j] {
                    return false;
                }
            }
        }
        true
    }
}

/// Turns a realizer into its family of rank functions: the k-th function
/// maps an element to its 1-based position in the k-th extension. For a
/// realizer this family is a bijective multi-utility of the poset.
pub fn bijective_multiutility<T: Ord + Clone>(r: &Realizer<T>) -> MultiUtility<T> {
    let functions = r
        .extensions
        .iter()
        .map(|ext| {
            ext.iter()
                .enumerate()
                .map(|(at, t)| (t.clone(), whole(at as i64 + 1)))
                .collect()
        })
        .collect();
    MultiUtility::new(functions)
}

impl<T: Ord + Clone> StrictPoset<T> {
    /// All linear extensions in lexicographic element order, or the first
    /// `limit` of them. Exhaustive mode (no limit) is refused above
    /// 12 elements.
    pub fn linear_extensions(&self, limit: Option<usize>) -> Result<Vec<Vec<T>>, PosetError> {
        if limit.is_none() && self.len() > EXHAUSTIVE_MAX {
            return Err(PosetError::TooLarge(self.len(), EXHAUSTIVE_MAX));
        }
        let mut out = Vec::new();
        let mut budget = Budget(None);
        self.enumerate_extensions(limit, &mut budget, &mut |ext: &[usize]| {
            out.push(ext.iter().map(|&i| self.elements[i].clone()).collect());
        })?;
        Ok(out)
    }

    fn enumerate_extensions(
        &self,
        limit: Option<usize>,
        budget: &mut Budget,
        sink: &mut dyn FnMut(&[usize]),
    ) -> Result<(), PosetError> {
        let n = self.len();
        let mut placed = vec![false; n];
        let mut prefix: Vec<usize> = Vec::with_capacity(n);
        let mut emitted = 0usize;

        fn step<T: Ord + Clone>(
            p: &StrictPoset<T>,
            placed: &mut Vec<bool>,
            prefix: &mut Vec<usize>,
            emitted: &mut usize,
            limit: Option<usize>,
            budget: &mut Budget,
            sink: &mut dyn FnMut(&[usize]),
        ) -> Result<(), PosetError> {
            if let Some(l) = limit {
                if *emitted >= l {
                    return Ok(());
                }
            }
            budget.spend(1)?;
            let n = p.len();
            if prefix.len() == n {
                sink(prefix);
                *emitted += 1;
                return Ok(());
            }
            for cand in 0..n {
                if placed[cand] {
                    continue;
                }
                let ready = (0..n).all(|pred| !p.lt[pred][cand] || placed[pred]);
                if !ready {
                    continue;
                }
                placed[cand] = true;
                prefix.push(cand);
                step(p, placed, prefix, emitted, limit, budget, sink)?;
                prefix.pop();
                placed[cand] = false;
            }
            Ok(())
        }

        step(self, &mut placed, &mut prefix, &mut emitted, limit, budget, sink)
    }

    /// Exact order dimension: the smallest realizer, found by covering every
    /// ordered incomparable pair with extension "reversals". Refused above
    /// 10 elements; pass a step budget to bail out of adversarial searches.
    /// The search runs k = 1, 2, ... so the returned realizer is minimal.
    pub fn order_dimension(&self, budget: Option<u64>) -> Result<Realizer<T>, PosetError> {
        if self.len() > DIMENSION_MAX {
            return Err(PosetError::TooLarge(self.len(), DIMENSION_MAX));
        }
        let mut budget = Budget(budget);
        let inc = self.incomparable_index_pairs();
        if inc.is_empty() {
            let only = self.linear_extensions(Some(1))?;
            return Ok(Realizer { extensions: only });
        }
        debug_assert!(inc.len() <= 128, "10 elements give at most 90 ordered pairs");

        // Coverage mask per extension: bit p set when the extension places
        // inc[p].1 before inc[p].0, i.e. it kills that spurious pair.
        let mut masks: Vec<u128> = Vec::new();
        let mut exts: Vec<Vec<usize>> = Vec::new();
        self.enumerate_extensions(None, &mut budget, &mut |ext: &[usize]| {
            let mut pos = vec![0usize; self.len()];
            for (at, &i) in ext.iter().enumerate() {
                pos[i] = at;
            }
            let mut mask = 0u128;
            for (p, &(i, j)) in inc.iter().enumerate() {
                if pos[j] < pos[i] {
                    mask |= 1 << p;
                }
            }
            masks.push(mask);
            exts.push(ext.to_vec());
        })?;

        // Dominated reversal sets can never help a minimum cover.
        if masks.len() <= 4096 {
            let mut keep = vec![true; masks.len()];
            for a in 0..masks.len() {
                for b in 0..masks.len() {
                    if a != b && keep[b] && masks[a] & masks[b] == masks[a] {
                        // a is dominated by b: drop it, keeping the first
                        // copy when the two cover the same pairs.
                        if masks[a] != masks[b] || a > b {
                            keep[a] = false;
                            break;
                        }
                    }
                }
            }
            let mut m = Vec::new();
            let mut e = Vec::new();
            for (i, k) in keep.into_iter().enumerate() {
                if k {
                    m.push(masks[i]);
                    e.push(std::mem::take(&mut exts[i]));
                }
            }
            masks = m;
            exts = e;
        }

        let full: u128 = if inc.len() == 128 {
            u128::MAX
        } else {
            (1u128 << inc.len()) - 1
        };
        let by_pair: Vec<Vec<usize>> = (0..inc.len())
            .map(|p| {
                (0..masks.len())
                    .filter(|&c| masks[c] & (1 << p) != 0)
                    .collect()
            })
            .collect();

        fn search(
            masks: &[u128],
            by_pair: &[Vec<usize>],
            full: u128,
            covered: u128,
            left: usize,
            chosen: &mut Vec<usize>,
            budget: &mut Budget,
        ) -> Result<Option<Vec<usize>>, PosetError> {
            budget.spend(1)?;
            if covered == full {
                return Ok(Some(chosen.clone()));
            }
            if left == 0 {
                return Ok(None);
            }
            // Branch on the uncovered pair with the fewest candidates.
            let mut pick = usize::MAX;
            let mut pick_count = usize::MAX;
            for (p, cands) in by_pair.iter().enumerate() {
                if covered & (1 << p) == 0 {
                    let count = cands
                        .iter()
                        .filter(|&&c| masks[c] & !covered != 0)
                        .count();
                    if count < pick_count {
                        pick_count = count;
                        pick = p;
                    }
                }
            }
            if pick == usize::MAX || pick_count == 0 {
                return Ok(None);
            }
            for &c in &by_pair[pick] {
                chosen.push(c);
                if let Some(sol) = search(
                    masks,
                    by_pair,
                    full,
                    covered | masks[c],
                    left - 1,
                    chosen,
                    budget,
                )? {
                    return Ok(Some(sol));
                }
                chosen.pop();
            }
            Ok(None)
        }

        for k in 1..=inc.len() {
            let mut chosen = Vec::new();
            if let Some(sol) = search(&masks, &by_pair, full, 0, k, &mut chosen, &mut budget)? {
                let extensions = sol
                    .into_iter()
                    .map(|c| exts[c].iter().map(|&i| self.elements[i].clone()).collect())
                    .collect();
                let r = Realizer { extensions };
                debug_assert!(r.is_realizer_of(self));
                return Ok(r);
            }
        }
        unreachable!("one extension per ordered incomparable pair always covers");
    }

    /// A realizer that covers ordered incomparable pairs greedily, batching
    /// as many reversals as stay consistent into each extension. Not minimal
    /// in general, but works beyond the exact-search bound; the result is
    /// asserted to be a realizer.
    #[allow(clippy::needless_range_loop)] // transitive update walks a square matrix
    pub fn greedy_realizer(&self) -> Realizer<T> {
        let n = self.len();
        let mut uncovered: BTreeSet<(usize, usize)> =
            self.incomparable_index_pairs().into_iter().collect();
        let mut extensions: Vec<Vec<T>> = Vec::new();

        if uncovered.is_empty() {
            extensions.push(linearize(&self.lt).into_iter().map(|i| self.elements[i].clone()).collect());
        }

        while !uncovered.is_empty() {
            let mut cur = self.lt.clone();
            for &(i, j) in uncovered.iter() {
                // Covering (i, j) means placing j before i.
                if cur[i][j] {
                    continue; // contradicts constraints already taken this round
                }
                if !cur[j][i] {
                    for a in 0..n {
                        if a != j && !cur[a][j] {
                            continue;
                        }
                        for b in 0..n {
                            if (b == i || cur[i][b]) && a != b {
                                cur[a][b] = true;
                            }
                        }
                    }
                }
            }
            let order = linearize(&cur);
            let mut pos = vec![0usize; n];
            for (at, &i) in order.iter().enumerate() {
                pos[i] = at;
            }
            uncovered.retain(|&(i, j)| pos[j] >= pos[i]);
            extensions.push(order.into_iter().map(|i| self.elements[i].clone()).collect());
        }

        let r = Realizer { extensions };
        assert!(r.is_realizer_of(self), "greedy batching must yield a realizer");
        r
    }
}

/// Lexicographically least topological order of a closed strict matrix.
pub(super) fn linearize(lt: &[Vec<bool>]) -> Vec<usize> {
    let n = lt.len();
    let mut placed = vec![false; n];
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let next = (0..n)
            .find(|&c| !placed[c] && (0..n).all(|p| !lt[p][c] || placed[p]))
            .expect("closed irreflexive matrix always has a minimal element");
        placed[next] = true;
        out.push(next);
    }
    out
}
