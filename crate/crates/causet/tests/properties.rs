//! Randomized invariants. Inputs come from the seeded generators in
//! `common`, with proptest supplying and shrinking the seeds.

mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;

use causet::biorder::induced_biorder;
use causet::io;
use causet::oracle;
use causet::poset::enumerate_decompositions;
use causet::represent::{
    aggregate_line_weak, build_line_representations, lamport_clocks, op_lower, op_upper,
    rp_multiutility_from_quotient, vector_clocks, BiorderRep, RepMode,
};
use causet::{quotient_system, synthesize_system, EventId, Rational};

fn merge(clocks: &[causet::represent::ClockAssignment]) -> BTreeMap<EventId, Rational> {
    let mut merged = BTreeMap::new();
    for c in clocks {
        merged.extend(c.values().clone());
    }
    merged
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn closure_is_a_strict_partial_order(seed in any::<u64>()) {
        let sys = common::random_system(&mut common::rng(seed), 5, 6, false);
        let p = sys.causal_closure().expect("generator output is acyclic");
        let ids: Vec<EventId> = p.elements().to_vec();
        for a in &ids {
            prop_assert!(!p.lt(a, a));
            for b in &ids {
                prop_assert!(!(p.lt(a, b) && p.lt(b, a)));
                for c in &ids {
                    if p.lt(a, b) && p.lt(b, c) {
                        prop_assert!(p.lt(a, c));
                    }
                }
            }
        }
        prop_assert!(p.width() <= sys.processes().len().max(1));
    }

    #[test]
    fn induced_relations_are_ferrers_and_quotient_cleanly(seed in any::<u64>()) {
        let sys = common::random_system(&mut common::rng(seed), 4, 5, false);
        let ids: Vec<String> = sys.processes().iter().map(|p| p.id().to_string()).collect();
        for i in &ids {
            for j in &ids {
                if i == j {
                    continue;
                }
                let rel = induced_biorder(&sys, i, j).unwrap();
                prop_assert!(rel.respects_chains());
                prop_assert!(rel.is_ferrers());
                let traces = rel.traces().unwrap();
                let q = rel.quotient().unwrap();
                let expanded = q.expand();
                prop_assert_eq!(
                    expanded.pairs().collect::<Vec<_>>(),
                    rel.pairs().collect::<Vec<_>>()
                );
                // ranks are finer than nothing: classes partition the sides
                let dom_classes: usize = traces.left.classes().iter().map(Vec::len).sum();
                prop_assert_eq!(dom_classes, rel.domain().len());
            }
        }
    }

    #[test]
    fn clock_builders_pass_their_oracles(seed in any::<u64>()) {
        let sys = common::random_system(&mut common::rng(seed), 5, 6, false);
        let lamport = lamport_clocks(&sys).unwrap();
        prop_assert!(oracle::verify_weak_representation(&sys, lamport.values()).is_ok());
        let vectors = vector_clocks(&sys).unwrap();
        prop_assert!(oracle::verify_vector_representation(&sys, &vectors).is_ok());
    }

    #[test]
    fn aggregation_is_a_weak_representation_on_lines(seed in any::<u64>()) {
        let sys = common::random_system(&mut common::rng(seed), 6, 8, true);
        let reps = build_line_representations(&sys).unwrap();
        let clocks = aggregate_line_weak(&sys, &reps).unwrap();
        prop_assert_eq!(clocks.len(), sys.processes().len());
        prop_assert!(oracle::verify_weak_representation(&sys, &merge(&clocks)).is_ok());
    }

    #[test]
    fn operators_represent_their_relation(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let rel = common::staircase_biorder(&mut r);
        let u_vals = common::random_increasing(&mut r, rel.domain().len());
        let v_vals = common::random_increasing(&mut r, rel.codomain().len());
        let u: BTreeMap<String, Rational> =
            rel.domain().iter().cloned().zip(u_vals).collect();
        let v: BTreeMap<String, Rational> =
            rel.codomain().iter().cloned().zip(v_vals).collect();

        let lo = op_lower(&rel, &v).unwrap();
        let lo_rep = BiorderRep { u: lo.clone(), v: v.clone(), mode: RepMode::Weak };
        prop_assert!(lo_rep.represents(&rel));

        let up = op_upper(&rel, &u).unwrap();
        let up_rep = BiorderRep { u: u.clone(), v: up.clone(), mode: RepMode::Weak };
        prop_assert!(up_rep.represents(&rel));

        let traces = rel.traces().unwrap();
        for class in traces.left.classes() {
            for pair in class.windows(2) {
                prop_assert_eq!(&lo[&pair[0]], &lo[&pair[1]]);
            }
        }
        for class in traces.right.classes() {
            for pair in class.windows(2) {
                prop_assert_eq!(&up[&pair[0]], &up[&pair[1]]);
            }
        }
        let dom = rel.domain().to_vec();
        for pair in dom.windows(2) {
            prop_assert!(lo[&pair[0]] <= lo[&pair[1]]);
        }
        let cod = rel.codomain().to_vec();
        for pair in cod.windows(2) {
            prop_assert!(up[&pair[0]] <= up[&pair[1]]);
        }
    }

    #[test]
    fn quotients_project_the_closure_exactly(seed in any::<u64>()) {
        let sys = common::random_system(&mut common::rng(seed), 4, 6, false);
        let q = quotient_system(&sys).unwrap();
        let closure = sys.causal_closure().unwrap();
        let ids: Vec<EventId> = closure.elements().to_vec();
        for x in &ids {
            for y in &ids {
                if x == y {
                    continue;
                }
                let (cx, cy) = (q.class_of(x).unwrap(), q.class_of(y).unwrap());
                let related = if cx == cy {
                    x.process == y.process && x.index < y.index
                } else {
                    q.poset().lt(&cx.to_string(), &cy.to_string())
                };
                prop_assert_eq!(closure.lt(x, y), related);
            }
        }
        for chain in sys.processes() {
            let degree: usize = sys
                .communications()
                .filter(|c| c.from_process() == chain.id() || c.to_process() == chain.id())
                .map(|c| c.len())
                .sum();
            let classes = q.classes_of_process(chain.id()).unwrap().len();
            prop_assert!(chain.is_empty() || classes <= 2 * degree + 1);
        }
    }

    #[test]
    fn quotient_multiutility_represents_the_closure(seed in any::<u64>()) {
        let sys = common::random_system(&mut common::rng(seed), 4, 5, false);
        let built = rp_multiutility_from_quotient(&sys).unwrap();
        let closure = sys.causal_closure().unwrap();
        prop_assert!(oracle::verify_rp_multiutility(&closure, &built.functions).is_ok());
        prop_assert!(oracle::verify_representation(&sys, &built.functions).is_ok());
    }

    #[test]
    fn synthesis_round_trips_random_posets(seed in any::<u64>()) {
        let p = common::random_poset(&mut common::rng(seed), 8);
        let sys = synthesize_system(&p).unwrap();
        let closure = sys.causal_closure().unwrap();
        let mut got: Vec<(String, String)> = closure
            .strict_pairs()
            .into_iter()
            .map(|(a, b)| (sys.display_event(&a), sys.display_event(&b)))
            .collect();
        got.sort();
        let mut want = p.strict_pairs();
        want.sort();
        prop_assert_eq!(got, want);
        prop_assert_eq!(sys.processes().len(), p.width());
    }

    #[test]
    fn every_enumerated_decomposition_has_the_same_closure(seed in any::<u64>()) {
        let p = common::random_poset(&mut common::rng(seed), 6);
        let all = enumerate_decompositions(&p, 40).unwrap();
        prop_assert!(!all.is_empty() || p.is_empty());
        for sys in all {
            let closure = sys.causal_closure().unwrap();
            let mut got: Vec<(String, String)> = closure
                .strict_pairs()
                .into_iter()
                .map(|(a, b)| (sys.display_event(&a), sys.display_event(&b)))
                .collect();
            got.sort();
            let mut want = p.strict_pairs();
            want.sort();
            prop_assert_eq!(got, want);
        }
    }

    #[test]
    fn realizers_realize(seed in any::<u64>()) {
        let p = common::random_poset(&mut common::rng(seed), 6);
        let realizer = p.order_dimension(Some(200_000)).unwrap();
        prop_assert!(realizer.is_realizer_of(&p));
        let chainlike = p.incomparable_pairs().is_empty();
        prop_assert_eq!(realizer.size() == 1, chainlike || p.is_empty());
    }

    #[test]
    fn documents_round_trip(seed in any::<u64>()) {
        let sys = common::random_system(&mut common::rng(seed), 5, 6, false);
        let text = io::emit_system(&sys).unwrap();
        let back = io::parse_system(&text).unwrap();
        prop_assert_eq!(&back, &sys);
        prop_assert_eq!(io::emit_system(&back).unwrap(), text);

        let p = common::random_poset(&mut common::rng(seed.wrapping_add(1)), 7);
        let ptext = io::emit_poset(&p);
        prop_assert_eq!(&io::parse_poset(&ptext).unwrap(), &p);
    }
}
