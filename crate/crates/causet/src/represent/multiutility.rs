//! Finite multi-utility representations through the trace quotient.
//!
//! The quotient poset is finite even when chains are long, so it admits a
//! bijective multi-utility from a realizer. Adding each process's chain
//! utility on top (integer class ranks plus a fractional position) yields
//! finitely many functions that capture causal precedence exactly: x
//! precedes y if and only if every function strictly increases.

use std::collections::BTreeMap;

use crate::poset::{bijective_multiutility, Realizer, StrictPoset};
use crate::quotient::{quotient_system, QuotientError, QuotientSystem};
use crate::system::{DistributedSystem, EventId};
use crate::utility::{MultiUtility, Rational};

use super::{chain_utility, ReprError};

/// The full output of the quotient construction: the event-level family,
/// the class-level family it was built from, and the quotient itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientMultiUtility {
    pub functions: MultiUtility<EventId>,
    pub class_functions: MultiUtility<String>,
    pub quotient: QuotientSystem,
}

/// Builds a finite multi-utility of causal precedence. Small quotient
/// posets get an exact minimum-size realizer; larger ones fall back to the
/// greedy realizer, which is still sound, just possibly larger.
pub fn rp_multiutility_from_quotient(
    sys: &DistributedSystem,
) -> Result<QuotientMultiUtility, ReprError> {
    let quotient = quotient_system(sys).map_err(|e| match e {
        QuotientError::Cycle(w) => ReprError::Cycle(w),
        other => ReprError::Quotient(other),
    })?;
    if quotient.class_count() == 0 {
        return Ok(QuotientMultiUtility {
            functions: MultiUtility::new(Vec::new()),
            class_functions: MultiUtility::new(Vec::new()),
            quotient,
        });
    }
    let realizer = realizer_for(quotient.poset());
    let class_functions = bijective_multiutility(&realizer);
    let functions = multiutility_from_class_functions(sys, &quotient, &class_functions)?;
    Ok(QuotientMultiUtility {
        functions,
        class_functions,
        quotient,
    })
}

fn realizer_for(poset: &StrictPoset<String>) -> Realizer<String> {
    const DIMENSION_MAX: usize = 10;
    const BUDGET: u64 = 200_000;
    if poset.len() <= DIMENSION_MAX {
        if let Ok(r) = poset.order_dimension(Some(BUDGET)) {
            return r;
        }
    }
    poset.greedy_realizer()
}

/// Spreads class-level functions over the events: an event's value is its
/// class value plus its chain utility, so it sits strictly between the
/// class rank and the next integer.
pub fn multiutility_from_class_functions(
    sys: &DistributedSystem,
    quotient: &QuotientSystem,
    class_functions: &MultiUtility<String>,
) -> Result<MultiUtility<EventId>, ReprError> {
    let utilities: BTreeMap<String, BTreeMap<EventId, Rational>> = sys
        .processes()
        .iter()
        .map(|chain| (chain.id().to_string(), chain_utility(chain)))
        .collect();
    let mut functions = Vec::with_capacity(class_functions.len());
    for class_fn in &class_functions.functions {
        let mut event_fn = BTreeMap::new();
        for id in sys.events() {
            let class = quotient
                .class_of(&id)
                .ok_or_else(|| ReprError::MissingValue(id.to_string()))?;
            let base = class_fn
                .get(class)
                .ok_or_else(|| ReprError::MissingValue(class.to_string()))?;
            let w = &utilities[id.process.as_str()][&id];
            event_fn.insert(id.clone(), base.clone() + w.clone());
        }
        functions.push(event_fn);
    }
    Ok(MultiUtility::new(functions))
}

/// Glues per-process families into global functions, position by position.
/// Every process must contribute the same number of functions, and each
/// value must sit on an event of its own process.
pub fn glue_per_process(
    parts: &BTreeMap<String, MultiUtility<EventId>>,
) -> Result<MultiUtility<EventId>, ReprError> {
    let mut counts = parts.values().map(|m| m.len());
    let k = counts.next().unwrap_or(0);
    if counts.any(|c| c != k) {
        return Err(ReprError::DomainMismatch(
            "function counts differ across processes".to_string(),
        ));
    }
    let mut functions = vec![BTreeMap::new(); k];
    for (process, part) in parts {
        for (l, f) in part.functions.iter().enumerate() {
            for (id, value) in f {
                if &id.process != process {
                    return Err(ReprError::DomainMismatch(format!(
                        "event {id} filed under process {process}"
                    )));
                }
                functions[l].insert(id.clone(), value.clone());
            }
        }
    }
    Ok(MultiUtility::new(functions))
}

/// Restricts each global function to one map per process. Gluing the result
/// back reproduces the input exactly.
pub fn split_per_process(mu: &MultiUtility<EventId>) -> BTreeMap<String, MultiUtility<EventId>> {
    let processes: std::collections::BTreeSet<String> = mu
        .functions
        .iter()
        .flat_map(|f| f.keys().map(|id| id.process.clone()))
        .collect();
    processes
        .into_iter()
        .map(|process| {
            let functions = mu
                .functions
                .iter()
                .map(|f| {
                    f.iter()
                        .filter(|(id, _)| id.process == process)
                        .map(|(id, v)| (id.clone(), v.clone()))
                        .collect()
                })
                .collect();
            (process, MultiUtility::new(functions))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::system::ProcessChain;
    use crate::utility::{ratio, whole};

    fn check_rp_contract(sys: &DistributedSystem, mu: &MultiUtility<EventId>) {
        assert!(!mu.functions.is_empty());
        let closure = sys.causal_closure().unwrap();
        for x in sys.events() {
            for y in sys.events() {
                if x == y {
                    continue;
                }
                let all_increase = mu.functions.iter().all(|f| f[&x] < f[&y]);
                assert_eq!(closure.lt(&x, &y), all_increase, "{x} vs {y}");
            }
        }
    }

    #[test]
    fn funnel_with_hand_ranked_classes() {
        let sys = fixtures::funnel_system();
        let quotient = quotient_system(&sys).unwrap();
        let ranks = |table: &[(&str, i64)]| -> BTreeMap<String, Rational> {
            table
                .iter()
                .map(|&(name, r)| (name.to_string(), whole(r)))
                .collect()
        };
        let class_functions = MultiUtility::new(vec![
            ranks(&[("P3#0", 1), ("P1#0", 2), ("P3#1", 3), ("P1#1", 4), ("P2#0", 5)]),
            ranks(&[("P1#0", 1), ("P1#1", 2), ("P3#0", 3), ("P3#1", 4), ("P2#0", 5)]),
        ]);
        let mu = multiutility_from_class_functions(&sys, &quotient, &class_functions).unwrap();
        // Bottom event of the third chain: class rank 1 plus chain utility 1/4.
        let y3 = sys.find_by_label("y3").unwrap();
        assert_eq!(mu.functions[0][&y3], ratio(5, 4));
        check_rp_contract(&sys, &mu);
    }

    #[test]
    fn funnel_needs_exactly_two_functions() {
        let sys = fixtures::funnel_system();
        let result = rp_multiutility_from_quotient(&sys).unwrap();
        assert_eq!(result.functions.len(), 2);
        assert_eq!(result.class_functions.len(), 2);
        check_rp_contract(&sys, &result.functions);
    }

    #[test]
    fn line3_uses_the_dimension_of_its_closure() {
        let sys = fixtures::line3();
        let result = rp_multiutility_from_quotient(&sys).unwrap();
        assert_eq!(result.quotient.class_count(), 6);
        assert_eq!(result.functions.len(), 2);
        check_rp_contract(&sys, &result.functions);
    }

    #[test]
    fn single_chain_reduces_to_a_shifted_utility() {
        let mut sys = DistributedSystem::new();
        sys.add_process(ProcessChain::new("P", 3)).unwrap();
        let result = rp_multiutility_from_quotient(&sys).unwrap();
        assert_eq!(result.functions.len(), 1);
        for (k, id) in sys.processes()[0].event_ids().enumerate() {
            assert_eq!(
                result.functions.functions[0][&id],
                whole(1) + ratio(k as i64 + 1, 4)
            );
        }
    }

    #[test]
    fn values_sit_between_class_rank_and_next_integer() {
        let sys = fixtures::funnel_system();
        let result = rp_multiutility_from_quotient(&sys).unwrap();
        for (class_fn, event_fn) in result
            .class_functions
            .functions
            .iter()
            .zip(&result.functions.functions)
        {
            for id in sys.events() {
                let class = result.quotient.class_of(&id).unwrap();
                let base = &class_fn[class];
                let value = &event_fn[&id];
                assert!(base < value && value < &(base.clone() + whole(1)));
            }
        }
    }

    #[test]
    fn duality_round_trips() {
        let sys = fixtures::funnel_system();
        let mu = rp_multiutility_from_quotient(&sys).unwrap().functions;
        let parts = split_per_process(&mu);
        assert_eq!(parts.len(), 3);
        for (process, part) in &parts {
            let chain = sys.process(process).unwrap();
            for f in &part.functions {
                let mut prev: Option<&Rational> = None;
                for id in chain.event_ids() {
                    let value = &f[&id];
                    if let Some(p) = prev {
                        assert!(p < value);
                    }
                    prev = Some(value);
                }
            }
        }
        assert_eq!(glue_per_process(&parts).unwrap(), mu);
    }

    #[test]
    fn glue_rejects_misfits() {
        let sys = fixtures::funnel_system();
        let mu = rp_multiutility_from_quotient(&sys).unwrap().functions;
        let mut parts = split_per_process(&mu);
        parts.insert("P9".to_string(), MultiUtility::new(Vec::new()));
        assert!(matches!(
            glue_per_process(&parts),
            Err(ReprError::DomainMismatch(_))
        ));
        let mut swapped = split_per_process(&mu);
        let p1 = swapped.remove("P1").unwrap();
        swapped.insert("P2".to_string(), p1);
        assert!(matches!(
            glue_per_process(&swapped),
            Err(ReprError::DomainMismatch(_))
        ));
    }

    #[test]
    fn empty_system_yields_an_empty_family() {
        let sys = DistributedSystem::new();
        let result = rp_multiutility_from_quotient(&sys).unwrap();
        assert!(result.functions.is_empty());
        let glued = glue_per_process(&BTreeMap::new()).unwrap();
        assert!(glued.is_empty());
    }

    #[test]
    fn cycles_are_reported() {
        let sys = fixtures::deadlock();
        assert!(matches!(
            rp_multiutility_from_quotient(&sys),
            Err(ReprError::Cycle(_))
        ));
    }
}
