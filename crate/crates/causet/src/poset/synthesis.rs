//! Turning a finite poset back into a distributed execution: partition the
//! elements into chains, keep within-chain covers implicit, and send every
//! cross-chain cover as a message.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::system::{DistributedSystem, EventId, ProcessChain};

use super::extensions::linearize;
use super::{maximum_matching, StrictPoset};

#[derive(Error, Clone, Debug, PartialEq, Eq)]
pub enum SynthesisError {
    #[error("element labels collide after rendering: `{0}`")]
    DuplicateLabel(String),
    #[error("no bijective decomposition found within bounds")]
    NoBijectiveDecomposition,
    #[error("{0} elements exceed the decomposition bound of {1}")]
    TooLarge(usize, usize),
}

/// Builds an execution whose happened-before order is exactly `p`.
///
/// The chains come from a minimum chain cover (elements minus a maximum
/// matching over comparability); matching order processes elements bottom-up
/// with lexicographic ties, which keeps chains along covering edges where
/// possible. Cross-chain covering pairs become messages. Covers of one
/// element are pairwise incomparable, so they land in pairwise distinct
/// chains and the per-channel bijectivity holds by construction; the
/// exhaustive fallback below is retained for safety, not because a failing
/// case is known.
pub fn synthesize_system<T>(p: &StrictPoset<T>) -> Result<DistributedSystem, SynthesisError>
where
    T: Ord + Clone + fmt::Display,
{
    let labels = render_labels(p)?;
    let chains = minimum_chain_cover(p);
    let sys = build_system(p, &labels, &chains);
    if sys.validate().is_empty() {
        return Ok(sys);
    }
    if p.len() <= 10 {
        for alt in enumerate_decompositions(p, 10_000)? {
            if alt.validate().is_empty() {
                return Ok(alt);
            }
        }
    }
    Err(SynthesisError::NoBijectiveDecomposition)
}

/// Every partition of `p` into `width(p)` chains, rendered as executions,
/// truncated to `limit`. Useful for exhibiting that a poset does not pin
/// down the execution it came from. Bounded to 10 elements.
pub fn enumerate_decompositions<T>(
    p: &StrictPoset<T>,
    limit: usize,
) -> Result<Vec<DistributedSystem>, SynthesisError>
where
    T: Ord + Clone + fmt::Display,
{
    if p.len() > 10 {
        return Err(SynthesisError::TooLarge(p.len(), 10));
    }
    let labels = render_labels(p)?;
    let width = p.width();
    let order = linearize(&p.lt);
    let mut chains: Vec<Vec<usize>> = Vec::new();
    let mut out = Vec::new();

    #[allow(clippy::too_many_arguments)] // plain backtracking state, not worth a struct
    fn assign<T: Ord + Clone + fmt::Display>(
        p: &StrictPoset<T>,
        labels: &[String],
        order: &[usize],
        at: usize,
        width: usize,
        chains: &mut Vec<Vec<usize>>,
        out: &mut Vec<DistributedSystem>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        if at == order.len() {
            out.push(build_system(p, labels, chains));
            return;
        }
        let element = order[at];
        for c in 0..chains.len() {
            let last = *chains[c].last().expect("chains are never empty");
            if p.lt[last][element] {
                chains[c].push(element);
                assign(p, labels, order, at + 1, width, chains, out, limit);
                chains[c].pop();
            }
        }
        if chains.len() < width {
            chains.push(vec![element]);
            assign(p, labels, order, at + 1, width, chains, out, limit);
            chains.pop();
        }
    }

    assign(p, &labels, &order, 0, width, &mut chains, &mut out, limit);
    Ok(out)
}

fn render_labels<T: Ord + Clone + fmt::Display>(
    p: &StrictPoset<T>,
) -> Result<Vec<String>, SynthesisError> {
    let labels: Vec<String> = p.elements().iter().map(|t| t.to_string()).collect();
    let mut seen = BTreeSet::new();
    for l in &labels {
        if !seen.insert(l) {
            return Err(SynthesisError::DuplicateLabel(l.clone()));
        }
    }
    Ok(labels)
}

/// Minimum chain cover of the comparability relation, via Kuhn matching.
/// Lefts run bottom-up (lexicographically least topological order) and
/// adjacency ascending, so the cover is deterministic.
fn minimum_chain_cover<T: Ord + Clone>(p: &StrictPoset<T>) -> Vec<Vec<usize>> {
    let n = p.len();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| p.lt[i][j]).collect())
        .collect();
    let order = linearize(&p.lt);
    let matching = maximum_matching(&adj, n, &order);

    let mut succ: Vec<Option<usize>> = vec![None; n];
    let mut is_tail = vec![false; n];
    for (l, r) in matching {
        succ[l] = Some(r);
        is_tail[r] = true;
    }
    let mut chains = Vec::new();
    for head in (0..n).filter(|&i| !is_tail[i]) {
        let mut chain = vec![head];
        let mut cur = head;
        while let Some(next) = succ[cur] {
            chain.push(next);
            cur = next;
        }
        chains.push(chain);
    }
    chains
}

/// Renders a chain partition as an execution: processes named `P1..Pk` in
/// order of their first element, events labeled by their poset elements,
/// messages from the cross-chain covering pairs.
fn build_system<T: Ord + Clone>(
    p: &StrictPoset<T>,
    labels: &[String],
    chains: &[Vec<usize>],
) -> DistributedSystem {
    let mut ordered: Vec<&Vec<usize>> = chains.iter().collect();
    ordered.sort_by_key(|chain| chain[0]);

    let mut place = vec![(0usize, 0usize); p.len()];
    let mut sys = DistributedSystem::new();
    for (c, chain) in ordered.iter().enumerate() {
        let pid = format!("P{}", c + 1);
        for (pos, &el) in chain.iter().enumerate() {
            place[el] = (c, pos);
        }
        sys.add_process(ProcessChain::with_labels(
            &pid,
            chain.iter().map(|&el| labels[el].clone()),
        ))
        .expect("process names P1..Pk are distinct");
    }

    let n = p.len();
    for i in 0..n {
        'cover: for j in 0..n {
            if !p.lt[i][j] {
                continue;
            }
            for k in 0..n {
                if p.lt[i][k] && p.lt[k][j] {
                    continue 'cover;
                }
            }
            let (ci, pi) = place[i];
            let (cj, pj) = place[j];
            if ci != cj {
                sys.add_message(
                    EventId::new(format!("P{}", ci + 1), pi),
                    EventId::new(format!("P{}", cj + 1), pj),
                )
                .expect("distinct chains, distinct processes");
            }
        }
    }
    sys
}
