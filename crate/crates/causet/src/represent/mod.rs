//! Numerical representations of causal precedence.
//!
//! Everything here is exact rational arithmetic. The representations come in
//! grades: chain utilities order one process, biorder representations order
//! one channel, aggregated weak clocks and Lamport clocks order the whole
//! system one-way, vector clocks and multi-utilities capture it exactly.

mod aggregate;
mod clocks;
mod multiutility;
mod operators;

pub use aggregate::{
    aggregate_line_weak, build_line3_representations, build_line_representations,
    partial_representation_line3, Line3Representations,
};
pub use clocks::{lamport_clocks, vector_clocks, ClockAssignment, ClockKind, VectorClock};
pub use multiutility::{
    glue_per_process, rp_multiutility_from_quotient, split_per_process, QuotientMultiUtility,
};
pub use operators::{op_lower, op_lower_total, op_upper, op_upper_total};

use std::collections::BTreeMap;

use num::Zero;
use thiserror::Error;

use crate::biorder::Biorder;
use crate::poset::CycleWitness;
use crate::quotient::QuotientError;
use crate::system::{EventId, ProcessChain};
use crate::utility::{ratio, whole, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReprError {
    #[error("relation is not Ferrers")]
    NotFerrers,
    #[error("relation does not respect its chains")]
    NotChainCompatible,
    #[error("value {0} lies outside the open unit interval")]
    ValueOutOfRange(String),
    #[error("function is not increasing along its chain at {0}")]
    NotIncreasing(String),
    #[error("function has no value at {0}")]
    MissingValue(String),
    #[error("communications do not form a line")]
    NotLine,
    #[error("expected a line of exactly 3 processes, got {0}")]
    NotThreeProcesses(usize),
    #[error("expected {expected} representation pairs, got {got}")]
    WrongRepCount { expected: usize, got: usize },
    #[error("{0} does not represent its relation")]
    NotRepresenting(String),
    #[error("causal precedence is cyclic: {0}")]
    Cycle(CycleWitness<EventId>),
    #[error("per-process families do not fit together: {0}")]
    DomainMismatch(String),
    #[error(transparent)]
    Quotient(#[from] QuotientError),
}

/// Whether a pair of functions captures a relation through `<` or `≤`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepMode {
    Strict,
    Weak,
}

/// A pair of functions, one per chain, standing for a relation between the
/// chains: `x` relates to `y` exactly when `u(x)` is below `v(y)` in the
/// sense of the mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiorderRep<T: Ord> {
    pub u: BTreeMap<T, Rational>,
    pub v: BTreeMap<T, Rational>,
    pub mode: RepMode,
}

impl<T: Ord + Clone> BiorderRep<T> {
    /// Exhaustive check of the defining equivalence over all pairs. False
    /// also when some element has no value.
    pub fn represents(&self, rel: &Biorder<T>) -> bool {
        for x in rel.domain() {
            for y in rel.codomain() {
                let (Some(ux), Some(vy)) = (self.u.get(x), self.v.get(y)) else {
                    return false;
                };
                let holds = match self.mode {
                    RepMode::Strict => ux < vy,
                    RepMode::Weak => ux <= vy,
                };
                if holds != rel.contains(x, y) {
                    return false;
                }
            }
        }
        true
    }
}

/// The canonical utility of a chain: the event at index `k` of a chain of
/// length `m` gets `(k+1)/(m+1)`. Strictly increasing, inside (0, 1).
pub fn chain_utility(chain: &ProcessChain) -> BTreeMap<EventId, Rational> {
    let m = chain.len() as i64;
    chain
        .event_ids()
        .enumerate()
        .map(|(k, id)| (id, ratio(k as i64 + 1, m + 1)))
        .collect()
}

/// Builds a strict representation of a relation between chains. The domain
/// function is the chain utility; the codomain function packs each down-set
/// size together with a chain-utility tie-break, scaled back into (0, 1):
/// with `m` domain and `m'` codomain elements, `v(y) = (|L(y)| +
/// rank(y)/(m'+1)) / (m+1)`.
///
/// This is exact, not approximate: a relation that respects its chains has
/// down-sets that are initial segments of the domain, so `u(x) < v(y)`
/// collapses to `rank(x) ≤ |L(y)|`, which is membership. Ferrers alone is
/// not enough; a relation that relates a later domain element but not an
/// earlier one admits no chain-increasing representation at all, so such
/// input is rejected rather than misrepresented.
pub fn build_biorder_representation<T: Ord + Clone>(
    rel: &Biorder<T>,
) -> Result<BiorderRep<T>, ReprError> {
    if !rel.is_ferrers() {
        return Err(ReprError::NotFerrers);
    }
    if !rel.respects_chains() {
        return Err(ReprError::NotChainCompatible);
    }
    let m = rel.domain().len() as i64;
    let mp = rel.codomain().len() as i64;
    let u = rel
        .domain()
        .iter()
        .enumerate()
        .map(|(k, x)| (x.clone(), ratio(k as i64 + 1, m + 1)))
        .collect();
    let v = rel
        .codomain()
        .iter()
        .enumerate()
        .map(|(j, y)| {
            let down = rel.down_set_indices(j).len() as i64;
            let value = (whole(down) + ratio(j as i64 + 1, mp + 1)) / whole(m + 1);
            (y.clone(), value)
        })
        .collect();
    Ok(BiorderRep {
        u,
        v,
        mode: RepMode::Strict,
    })
}

pub(crate) fn in_open_unit(value: &Rational) -> bool {
    value > &Rational::zero() && value < &whole(1)
}

/// Checks a chain-indexed function: defined everywhere, increasing along the
/// chain (strictly if asked), and inside (0,1) if asked.
pub(crate) fn check_chain_function(
    chain: &ProcessChain,
    f: &BTreeMap<EventId, Rational>,
    strict: bool,
    open_unit: bool,
) -> Result<(), ReprError> {
    let mut prev: Option<&Rational> = None;
    for id in chain.event_ids() {
        let value = f
            .get(&id)
            .ok_or_else(|| ReprError::MissingValue(id.to_string()))?;
        if open_unit && !in_open_unit(value) {
            return Err(ReprError::ValueOutOfRange(crate::utility::render_rational(
                value,
            )));
        }
        if let Some(p) = prev {
            let ok = if strict { p < value } else { p <= value };
            if !ok {
                return Err(ReprError::NotIncreasing(id.to_string()));
            }
        }
        prev = Some(value);
    }
    Ok(())
}
