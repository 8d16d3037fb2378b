//! Builds one weak clock per process on a line topology by summing hop
//! representations, pushed into place with the lower and upper operators.
//! Simply concatenating the hop functions is not sound; the operator terms
//! are what keep values on far-apart chains comparable.

use std::collections::BTreeMap;

use num::Zero;

use crate::biorder::{induced_biorder, Biorder};
use crate::system::{DistributedSystem, EventId};
use crate::utility::{whole, Rational};

use super::operators::{op_lower_total, op_upper_total};
use super::{
    build_biorder_representation, chain_utility, check_chain_function, BiorderRep, ClockAssignment,
    ClockKind, RepMode, ReprError,
};

/// Strict representations of every hop relation along the line, built with
/// [`build_biorder_representation`]. Ready to feed to [`aggregate_line_weak`].
pub fn build_line_representations(
    sys: &DistributedSystem,
) -> Result<Vec<BiorderRep<EventId>>, ReprError> {
    if !sys.has_line_communication() {
        return Err(ReprError::NotLine);
    }
    let ids: Vec<&str> = sys.processes().iter().map(|p| p.id()).collect();
    ids.windows(2)
        .map(|w| {
            let rel = induced_biorder(sys, w[0], w[1]).expect("processes exist");
            build_biorder_representation(&rel)
        })
        .collect()
}

/// Sums the hop representations into one weak clock per process. For the
/// chain at position `j` (0-based, `n` chains total), writing `B_s` for the
/// hop relation from chain `s` to `s+1`:
///
/// ```text
/// w_j = Σ_{t ≤ j-2} op̄_{B_{j-1}}(… op̄_{B_{t+1}}(v_t) …)   earlier hops, pushed up
///     + v_{j-1} + u_j                                      the adjacent hops
///     + Σ_{k ≥ 1, j+k ≤ n-2} op̲_{B_j}(… op̲_{B_{j+k-1}}(u_{j+k}) …)   later hops, pulled back
/// ```
///
/// Out-of-range terms drop out; with two chains this is just `(u_0, v_0)`.
/// The result strictly increases along every chain and strictly increases
/// across every causal pair, but unrelated events may still compare.
pub fn aggregate_line_weak(
    sys: &DistributedSystem,
    reps: &[BiorderRep<EventId>],
) -> Result<Vec<ClockAssignment>, ReprError> {
    sys.causal_closure().map_err(ReprError::Cycle)?;
    if !sys.has_line_communication() {
        return Err(ReprError::NotLine);
    }
    let n = sys.processes().len();
    if n == 0 {
        if reps.is_empty() {
            return Ok(Vec::new());
        }
        return Err(ReprError::WrongRepCount {
            expected: 0,
            got: reps.len(),
        });
    }
    if n == 1 {
        // A lone chain needs no hop data; its chain utility already is a
        // weak representation.
        if !reps.is_empty() {
            return Err(ReprError::WrongRepCount {
                expected: 0,
                got: reps.len(),
            });
        }
        return Ok(vec![ClockAssignment::new(
            ClockKind::Weak,
            chain_utility(&sys.processes()[0]),
        )]);
    }
    if reps.len() != n - 1 {
        return Err(ReprError::WrongRepCount {
            expected: n - 1,
            got: reps.len(),
        });
    }

    let rels: Vec<Biorder<EventId>> = (0..n - 1)
        .map(|t| {
            induced_biorder(sys, sys.processes()[t].id(), sys.processes()[t + 1].id())
                .expect("processes exist")
        })
        .collect();
    for (t, rep) in reps.iter().enumerate() {
        if rep.mode != RepMode::Strict {
            return Err(ReprError::NotRepresenting(format!(
                "hop {t} (weak mode given)"
            )));
        }
        check_chain_function(&sys.processes()[t], &rep.u, true, true)?;
        check_chain_function(&sys.processes()[t + 1], &rep.v, true, true)?;
        if !rep.represents(&rels[t]) {
            return Err(ReprError::NotRepresenting(format!("hop {t}")));
        }
    }

    let mut out = Vec::with_capacity(n);
    for p in 0..n {
        let chain = &sys.processes()[p];
        let mut total: BTreeMap<EventId, Rational> = chain
            .event_ids()
            .map(|id| (id, Rational::zero()))
            .collect();
        if p >= 2 {
            for t in 0..=p - 2 {
                let mut f = reps[t].v.clone();
                for rel in &rels[t + 1..=p - 1] {
                    f = op_upper_total(rel, &f);
                }
                add_into(&mut total, &f);
            }
        }
        if p >= 1 {
            add_into(&mut total, &reps[p - 1].v);
        }
        if p + 2 <= n {
            add_into(&mut total, &reps[p].u);
        }
        if p + 3 <= n {
            for k in 1..=n - p - 2 {
                let mut f = reps[p + k].u.clone();
                for rel in rels[p..p + k].iter().rev() {
                    f = op_lower_total(rel, &f);
                }
                add_into(&mut total, &f);
            }
        }
        out.push(ClockAssignment::new(ClockKind::Weak, total));
    }
    Ok(out)
}

fn add_into(total: &mut BTreeMap<EventId, Rational>, term: &BTreeMap<EventId, Rational>) {
    for (id, slot) in total.iter_mut() {
        *slot += term[id].clone();
    }
}

/// Three overlapping functions covering a 3-chain line. `sigma3` has no
/// values on the middle chain; the other two are total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line3Representations {
    pub sigma1: BTreeMap<EventId, Rational>,
    pub sigma2: BTreeMap<EventId, Rational>,
    pub sigma3: BTreeMap<EventId, Rational>,
}

impl Line3Representations {
    pub fn sigmas(&self) -> [&BTreeMap<EventId, Rational>; 3] {
        [&self.sigma1, &self.sigma2, &self.sigma3]
    }
}

/// Assembles the three partial functions for a 3-process line from strict
/// hop representations `rep12`, `rep23` plus `rep13` for the composed
/// first-to-third relation. The contract they satisfy together: `x`
/// causally precedes `y` exactly when every sigma defined on both strictly
/// increases (and at least one is defined on both, which `sigma1` always
/// is). Unlike a weak clock, the family detects unrelated pairs; unlike a
/// full representation, no single total function does it alone.
pub fn partial_representation_line3(
    sys: &DistributedSystem,
    rep12: &BiorderRep<EventId>,
    rep23: &BiorderRep<EventId>,
    rep13: &BiorderRep<EventId>,
) -> Result<Line3Representations, ReprError> {
    sys.causal_closure().map_err(ReprError::Cycle)?;
    if sys.processes().len() != 3 {
        return Err(ReprError::NotThreeProcesses(sys.processes().len()));
    }
    if !sys.has_line_communication() {
        return Err(ReprError::NotLine);
    }
    let first = induced_biorder(sys, sys.processes()[0].id(), sys.processes()[1].id())
        .expect("processes exist");
    let second = induced_biorder(sys, sys.processes()[1].id(), sys.processes()[2].id())
        .expect("processes exist");
    let through = first.compose(&second).expect("chains line up");
    if !through.is_ferrers() {
        return Err(ReprError::NotFerrers);
    }

    for (name, rep, rel, dom, cod) in [
        ("first hop", rep12, &first, 0, 1),
        ("second hop", rep23, &second, 1, 2),
        ("composition", rep13, &through, 0, 2),
    ] {
        if rep.mode != RepMode::Strict {
            return Err(ReprError::NotRepresenting(format!(
                "{name} (weak mode given)"
            )));
        }
        check_chain_function(&sys.processes()[dom], &rep.u, true, true)?;
        check_chain_function(&sys.processes()[cod], &rep.v, true, true)?;
        if !rep.represents(rel) {
            return Err(ReprError::NotRepresenting(name.to_string()));
        }
    }

    let shift = |f: &BTreeMap<EventId, Rational>| -> BTreeMap<EventId, Rational> {
        f.iter()
            .map(|(id, r)| (id.clone(), r.clone() + whole(1)))
            .collect()
    };
    let union = |parts: &[BTreeMap<EventId, Rational>]| -> BTreeMap<EventId, Rational> {
        parts.iter().flatten().map(|(k, v)| (k.clone(), v.clone())).collect()
    };

    Ok(Line3Representations {
        sigma1: union(&[rep12.u.clone(), rep12.v.clone(), shift(&rep23.v)]),
        sigma2: union(&[rep12.u.clone(), shift(&rep23.u), shift(&rep23.v)]),
        sigma3: union(&[rep13.u.clone(), rep13.v.clone()]),
    })
}

/// Builds the hop and composition representations of a 3-process line with
/// [`build_biorder_representation`] and assembles the partial family.
pub fn build_line3_representations(
    sys: &DistributedSystem,
) -> Result<Line3Representations, ReprError> {
    if sys.processes().len() != 3 {
        return Err(ReprError::NotThreeProcesses(sys.processes().len()));
    }
    if !sys.has_line_communication() {
        return Err(ReprError::NotLine);
    }
    let first = induced_biorder(sys, sys.processes()[0].id(), sys.processes()[1].id())
        .expect("processes exist");
    let second = induced_biorder(sys, sys.processes()[1].id(), sys.processes()[2].id())
        .expect("processes exist");
    let through = first.compose(&second).expect("chains line up");
    let rep12 = build_biorder_representation(&first)?;
    let rep23 = build_biorder_representation(&second)?;
    let rep13 = build_biorder_representation(&through)?;
    partial_representation_line3(sys, &rep12, &rep23, &rep13)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::system::ProcessChain;
    use crate::utility::ratio;

    fn ev(sys: &DistributedSystem, label: &str) -> EventId {
        sys.find_by_label(label).unwrap()
    }

    fn hand_reps(sys: &DistributedSystem) -> Vec<BiorderRep<EventId>> {
        let u1 = [(ev(sys, "a"), ratio(1, 5)), (ev(sys, "b"), ratio(3, 5))];
        let v1 = [(ev(sys, "x"), ratio(2, 5)), (ev(sys, "y"), ratio(4, 5))];
        let u2 = [(ev(sys, "x"), ratio(2, 5)), (ev(sys, "y"), ratio(4, 5))];
        let v2 = [
            (ev(sys, "alpha"), ratio(3, 10)),
            (ev(sys, "beta"), ratio(3, 5)),
        ];
        vec![
            BiorderRep {
                u: u1.into(),
                v: v1.into(),
                mode: RepMode::Strict,
            },
            BiorderRep {
                u: u2.into(),
                v: v2.into(),
                mode: RepMode::Strict,
            },
        ]
    }

    #[test]
    fn aggregates_the_line_exactly_as_expected() {
        let sys = fixtures::line3();
        let w = aggregate_line_weak(&sys, &hand_reps(&sys)).unwrap();
        let expected = [
            ("a", ratio(3, 5)),
            ("b", ratio(7, 5)),
            ("x", ratio(4, 5)),
            ("y", ratio(8, 5)),
            ("alpha", ratio(3, 10)),
            ("beta", whole(1)),
        ];
        for (label, value) in expected {
            let id = ev(&sys, label);
            let got = w
                .iter()
                .find_map(|clock| clock.value(&id))
                .unwrap_or_else(|| panic!("no value for {label}"));
            assert_eq!(got, &value, "at {label}");
        }
        // Every causal pair strictly increases across the whole family.
        let closure = sys.causal_closure().unwrap();
        let all: BTreeMap<EventId, Rational> = w
            .iter()
            .flat_map(|c| c.values().clone())
            .collect();
        for (x, y) in closure.strict_pairs() {
            assert!(all[&x] < all[&y], "{x} vs {y}");
        }
    }

    #[test]
    fn two_chains_pass_through_unchanged() {
        let mut sys = DistributedSystem::new();
        sys.add_process(ProcessChain::with_labels("P", ["p1", "p2"]))
            .unwrap();
        sys.add_process(ProcessChain::with_labels("Q", ["q1", "q2"]))
            .unwrap();
        sys.add_message(EventId::new("P", 0), EventId::new("Q", 1))
            .unwrap();
        let reps = build_line_representations(&sys).unwrap();
        let w = aggregate_line_weak(&sys, &reps).unwrap();
        assert_eq!(w[0].values(), &reps[0].u);
        assert_eq!(w[1].values(), &reps[0].v);
    }

    #[test]
    fn single_chain_falls_back_to_chain_utility() {
        let mut sys = DistributedSystem::new();
        sys.add_process(ProcessChain::new("P", 3)).unwrap();
        let w = aggregate_line_weak(&sys, &[]).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].values(), &chain_utility(&sys.processes()[0]));
    }

    #[test]
    fn aggregation_avoids_the_naive_false_signal() {
        // Gluing the hop functions end to end claims alpha is above a even
        // though they are concurrent. The operator terms prevent that here:
        // the pair comes out reversed instead of falsely ordered.
        let sys = fixtures::line3();
        let naive: BTreeMap<EventId, Rational> = [
            (ev(&sys, "a"), whole(0)),
            (ev(&sys, "b"), whole(1)),
            (ev(&sys, "x"), whole(1)),
            (ev(&sys, "y"), whole(2)),
            (ev(&sys, "alpha"), whole(1)),
            (ev(&sys, "beta"), whole(2)),
        ]
        .into();
        let closure = sys.causal_closure().unwrap();
        let a = ev(&sys, "a");
        let alpha = ev(&sys, "alpha");
        assert!(!closure.lt(&a, &alpha));
        assert!(naive[&a] < naive[&alpha]);

        let w = aggregate_line_weak(&sys, &hand_reps(&sys)).unwrap();
        assert!(w[0].value(&a).unwrap() > w[2].value(&alpha).unwrap());
    }

    #[test]
    fn built_representations_aggregate_cleanly() {
        let sys = fixtures::line3();
        let reps = build_line_representations(&sys).unwrap();
        let w = aggregate_line_weak(&sys, &reps).unwrap();
        for (chain, clock) in sys.processes().iter().zip(&w) {
            let mut prev: Option<Rational> = None;
            for id in chain.event_ids() {
                let value = clock.value(&id).unwrap().clone();
                if let Some(p) = &prev {
                    assert!(p < &value);
                }
                prev = Some(value);
            }
        }
    }

    #[test]
    fn bad_inputs_are_rejected() {
        let sys = fixtures::line3();
        let reps = build_line_representations(&sys).unwrap();
        assert_eq!(
            aggregate_line_weak(&sys, &reps[..1]),
            Err(ReprError::WrongRepCount {
                expected: 2,
                got: 1
            })
        );
        assert_eq!(
            aggregate_line_weak(&fixtures::funnel_system(), &[]),
            Err(ReprError::NotLine)
        );
        assert!(matches!(
            aggregate_line_weak(&fixtures::deadlock(), &[]),
            Err(ReprError::Cycle(_))
        ));
        let mut broken = reps.clone();
        broken[0].u.insert(ev(&sys, "a"), ratio(9, 10));
        assert!(matches!(
            aggregate_line_weak(&sys, &broken),
            Err(ReprError::NotIncreasing(_)) | Err(ReprError::NotRepresenting(_))
        ));
    }

    #[test]
    fn partial_family_matches_the_closure() {
        let sys = fixtures::line3();
        let sigmas = build_line3_representations(&sys).unwrap();
        assert_eq!(sigmas.sigma1[&ev(&sys, "alpha")], ratio(10, 9));
        assert_eq!(sigmas.sigma2[&ev(&sys, "x")], ratio(4, 3));
        assert!(!sigmas.sigma3.contains_key(&ev(&sys, "x")));
        assert!(!sigmas.sigma3.contains_key(&ev(&sys, "y")));
        check_contract(&sys, &sigmas);
    }

    #[test]
    fn partial_family_handles_an_unreachable_end() {
        // Without the x -> beta message nothing flows from the first chain
        // to the third, so the composed relation is empty.
        let mut sys = DistributedSystem::new();
        sys.add_process(ProcessChain::with_labels("A", ["a", "b"]))
            .unwrap();
        sys.add_process(ProcessChain::with_labels("X", ["x", "y"]))
            .unwrap();
        sys.add_process(ProcessChain::with_labels("L", ["alpha", "beta"]))
            .unwrap();
        sys.add_message(EventId::new("A", 0), EventId::new("X", 0))
            .unwrap();
        let sigmas = build_line3_representations(&sys).unwrap();
        check_contract(&sys, &sigmas);
    }

    fn check_contract(sys: &DistributedSystem, sigmas: &Line3Representations) {
        let closure = sys.causal_closure().unwrap();
        for x in sys.events() {
            for y in sys.events() {
                if x == y {
                    continue;
                }
                let mut any = false;
                let mut all_increase = true;
                for sigma in sigmas.sigmas() {
                    if let (Some(vx), Some(vy)) = (sigma.get(&x), sigma.get(&y)) {
                        any = true;
                        all_increase &= vx < vy;
                    }
                }
                assert_eq!(closure.lt(&x, &y), any && all_increase, "{x} vs {y}");
            }
        }
    }
}
