//! Small example systems and posets used throughout the test suites and the
//! documentation. Each is built directly, so tests can treat the shapes as
//! ground truth rather than as output of the machinery under test.

use crate::poset::StrictPoset;
use crate::system::{DistributedSystem, EventId, ProcessChain};

fn id(process: &str, index: usize) -> EventId {
    EventId::new(process, index)
}

/// Three processes in a line: `A = a,b`, `X = x,y`, `L = alpha,beta`, with
/// messages `a -> x`, `b -> y`, `x -> beta`. Clean, acyclic, and rich enough
/// to exercise closure, concurrency, quotients, clocks, and aggregation.
pub fn line3() -> DistributedSystem {
    let mut sys = DistributedSystem::new();
    sys.add_process(ProcessChain::with_labels("A", ["a", "b"]))
        .unwrap();
    sys.add_process(ProcessChain::with_labels("X", ["x", "y"]))
        .unwrap();
    sys.add_process(ProcessChain::with_labels("L", ["alpha", "beta"]))
        .unwrap();
    sys.add_message(id("A", 0), id("X", 0)).unwrap();
    sys.add_message(id("A", 1), id("X", 1)).unwrap();
    sys.add_message(id("X", 0), id("L", 1)).unwrap();
    sys
}

/// Two processes waiting on each other: `P1 = c,a`, `P2 = d,b` with messages
/// `a -> d` and `b -> c`. The chain edges plus messages form the cycle
/// `c, a, d, b, c`.
pub fn deadlock() -> DistributedSystem {
    let mut sys = DistributedSystem::new();
    sys.add_process(ProcessChain::with_labels("P1", ["c", "a"]))
        .unwrap();
    sys.add_process(ProcessChain::with_labels("P2", ["d", "b"]))
        .unwrap();
    sys.add_message(id("P1", 1), id("P2", 0)).unwrap();
    sys.add_message(id("P2", 1), id("P1", 0)).unwrap();
    sys
}

/// One channel delivering against its send order: `a1 -> b2` is sent first
/// and received second, `a2 -> b1` sent second and received first.
pub fn crossed_messages() -> DistributedSystem {
    let mut sys = DistributedSystem::new();
    sys.add_process(ProcessChain::with_labels("A", ["a1", "a2"]))
        .unwrap();
    sys.add_process(ProcessChain::with_labels("B", ["b1", "b2"]))
        .unwrap();
    sys.add_message(id("A", 0), id("B", 1)).unwrap();
    sys.add_message(id("A", 1), id("B", 0)).unwrap();
    sys
}

/// Four elements: `c < b < a` with a side branch `b < d`. The smallest poset
/// on which chain decomposition is visibly not unique.
pub fn branching_poset() -> StrictPoset<String> {
    StrictPoset::from_pairs(
        Vec::new(),
        vec![
            ("c".to_string(), "b".to_string()),
            ("b".to_string(), "a".to_string()),
            ("b".to_string(), "d".to_string()),
        ],
    )
    .unwrap()
}

/// [`branching_poset`] realized as one long chain plus a singleton:
/// `P1 = c,b,a`, `P2 = d`, message `b -> d`.
pub fn branching_decomposition_chain() -> DistributedSystem {
    let mut sys = DistributedSystem::new();
    sys.add_process(ProcessChain::with_labels("P1", ["c", "b", "a"]))
        .unwrap();
    sys.add_process(ProcessChain::with_labels("P2", ["d"]))
        .unwrap();
    sys.add_message(id("P1", 1), id("P2", 0)).unwrap();
    sys
}

/// [`branching_poset`] realized as two two-event chains:
/// `P1 = c,a`, `P2 = b,d`, messages `c -> b` and `b -> a`.
pub fn branching_decomposition_split() -> DistributedSystem {
    let mut sys = DistributedSystem::new();
    sys.add_process(ProcessChain::with_labels("P1", ["c", "a"]))
        .unwrap();
    sys.add_process(ProcessChain::with_labels("P2", ["b", "d"]))
        .unwrap();
    sys.add_message(id("P1", 0), id("P2", 0)).unwrap();
    sys.add_message(id("P2", 0), id("P1", 1)).unwrap();
    sys
}

/// Three processes funneling into the middle one: `P1 = w1,y1,x1`,
/// `P2 = y2,x2`, `P3 = y3,z3,x3`, with `y1 -> z3`, `x1 -> y2`, `x3 -> y2`.
/// Its trace quotient has five classes: `{w1,y1}`, `{x1}`, `{y2,x2}`,
/// `{y3}`, `{z3,x3}`.
pub fn funnel_system() -> DistributedSystem {
    let mut sys = DistributedSystem::new();
    sys.add_process(ProcessChain::with_labels("P1", ["w1", "y1", "x1"]))
        .unwrap();
    sys.add_process(ProcessChain::with_labels("P2", ["y2", "x2"]))
        .unwrap();
    sys.add_process(ProcessChain::with_labels("P3", ["y3", "z3", "x3"]))
        .unwrap();
    sys.add_message(id("P1", 1), id("P3", 1)).unwrap();
    sys.add_message(id("P1", 2), id("P2", 0)).unwrap();
    sys.add_message(id("P3", 2), id("P2", 0)).unwrap();
    sys
}

/// The five-element poset of [`funnel_system`]'s quotient classes, built
/// directly: `y1 < x1 < x2`, `y3 < x3 < x2`, `y1 < x3`.
pub fn funnel_quotient_poset() -> StrictPoset<String> {
    StrictPoset::from_pairs(
        Vec::new(),
        vec![
            ("y1".to_string(), "x1".to_string()),
            ("x1".to_string(), "x2".to_string()),
            ("y1".to_string(), "x3".to_string()),
            ("y3".to_string(), "x3".to_string()),
            ("x3".to_string(), "x2".to_string()),
        ],
    )
    .unwrap()
}

/// Two fork-shaped partial orders: `a2 < a1, a3 < a1` and
/// `b2 < b1, b3 < b1`. Used with the pair sets below to exercise the causal
/// condition on communications between general posets.
pub fn fork_posets() -> (StrictPoset<String>, StrictPoset<String>) {
    let a = StrictPoset::from_pairs(
        Vec::new(),
        vec![
            ("a2".to_string(), "a1".to_string()),
            ("a3".to_string(), "a1".to_string()),
        ],
    )
    .unwrap();
    let b = StrictPoset::from_pairs(
        Vec::new(),
        vec![
            ("b2".to_string(), "b1".to_string()),
            ("b3".to_string(), "b1".to_string()),
        ],
    )
    .unwrap();
    (a, b)
}

/// Pairs `{(a2, b1), (a3, b3)}`: causal between the fork posets.
pub fn fork_pairs_causal() -> Vec<(String, String)> {
    vec![
        ("a2".to_string(), "b1".to_string()),
        ("a3".to_string(), "b3".to_string()),
    ]
}

/// Pairs `{(a2, b2), (a3, b3)}`: not causal between the fork posets.
pub fn fork_pairs_not_causal() -> Vec<(String, String)> {
    vec![
        ("a2".to_string(), "b2".to_string()),
        ("a3".to_string(), "b3".to_string()),
    ]
}
