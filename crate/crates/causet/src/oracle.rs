//! Brute-force verifiers, kept deliberately independent of the builders:
//! reachability is a fresh breadth-first search over the raw system, channel
//! relations are rescanned from the message definition, and every contract
//! is checked pair by pair. Slow and obvious on purpose; these are the
//! ground truth the fast constructions are tested against.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::biorder::Biorder;
use crate::represent::{BiorderRep, RepMode, VectorClock};
use crate::system::{DistributedSystem, EventId};
use crate::utility::{render_rational, MultiUtility, Rational};
use crate::StrictPoset;

/// A concrete failing pair with both sides' values spelled out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness<T> {
    pub x: T,
    pub y: T,
    pub detail: String,
}

impl<T: fmt::Display> fmt::Display for Witness<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}): {}", self.x, self.y, self.detail)
    }
}

fn witness<T>(x: T, y: T, detail: String) -> Result<(), Witness<T>> {
    Err(Witness { x, y, detail })
}

/// Strict reachability recomputed from scratch: chain successors plus
/// message edges, explored breadth-first from every event.
fn reach_sets(sys: &DistributedSystem) -> BTreeMap<EventId, BTreeSet<EventId>> {
    let mut succs: BTreeMap<EventId, Vec<EventId>> =
        sys.events().map(|e| (e, Vec::new())).collect();
    for chain in sys.processes() {
        for k in 1..chain.len() {
            succs
                .get_mut(&chain.event_id(k - 1).unwrap())
                .unwrap()
                .push(chain.event_id(k).unwrap());
        }
    }
    for comm in sys.communications() {
        for (s, r) in comm.pair_ids() {
            succs.get_mut(&s).unwrap().push(r);
        }
    }
    let mut out = BTreeMap::new();
    for start in sys.events() {
        let mut seen = BTreeSet::new();
        let mut queue: VecDeque<EventId> = succs[&start].iter().cloned().collect();
        while let Some(e) = queue.pop_front() {
            if seen.insert(e.clone()) {
                queue.extend(succs[&e].iter().cloned());
            }
        }
        out.insert(start, seen);
    }
    out
}

/// The channel relation by definition: `x` relates to `y` when some message
/// of the channel is sent at or after `x` and received at or before `y`.
fn channel_related(sys: &DistributedSystem, x: &EventId, y: &EventId) -> bool {
    match sys.communication(&x.process, &y.process) {
        Some(comm) => comm
            .index_pairs()
            .any(|(s, r)| x.index <= s && r <= y.index),
        None => false,
    }
}

/// Sorted process ids, the deterministic scan order for cross-process pairs.
fn sorted_processes(sys: &DistributedSystem) -> Vec<&str> {
    let mut ids: Vec<&str> = sys.processes().iter().map(|p| p.id()).collect();
    ids.sort_unstable();
    ids
}

fn value_of<'a>(
    values: &'a BTreeMap<EventId, Rational>,
    id: &EventId,
) -> Result<&'a Rational, Witness<EventId>> {
    values.get(id).ok_or_else(|| Witness {
        x: id.clone(),
        y: id.clone(),
        detail: "no value assigned".to_string(),
    })
}

/// Weak representation: strictly increasing along every chain, and strictly
/// increasing across every related channel pair. Nothing is claimed about
/// unrelated pairs.
pub fn verify_weak_representation(
    sys: &DistributedSystem,
    values: &BTreeMap<EventId, Rational>,
) -> Result<(), Witness<EventId>> {
    for chain in sys.processes() {
        let ids: Vec<EventId> = chain.event_ids().collect();
        for w in ids.windows(2) {
            let (a, b) = (value_of(values, &w[0])?, value_of(values, &w[1])?);
            if a >= b {
                return witness(
                    w[0].clone(),
                    w[1].clone(),
                    format!(
                        "chain order not respected: {} >= {}",
                        render_rational(a),
                        render_rational(b)
                    ),
                );
            }
        }
    }
    for from in sorted_processes(sys) {
        for to in sorted_processes(sys) {
            if from == to {
                continue;
            }
            for x in sys.process(from).unwrap().event_ids() {
                for y in sys.process(to).unwrap().event_ids() {
                    if !channel_related(sys, &x, &y) {
                        continue;
                    }
                    let (a, b) = (value_of(values, &x)?, value_of(values, &y)?);
                    if a >= b {
                        return witness(
                            x.clone(),
                            y,
                            format!(
                                "channel pair not increased: {} >= {}",
                                render_rational(a),
                                render_rational(b)
                            ),
                        );
                    }
                }
            }
        }
    }
    Ok(())
}

/// Full representation by a family: every member is a weak representation,
/// and for events on different processes, causal precedence holds exactly
/// when every member strictly increases.
pub fn verify_representation(
    sys: &DistributedSystem,
    family: &MultiUtility<EventId>,
) -> Result<(), Witness<EventId>> {
    for member in &family.functions {
        verify_weak_representation(sys, member)?;
    }
    let reach = reach_sets(sys);
    for from in sorted_processes(sys) {
        for to in sorted_processes(sys) {
            if from == to {
                continue;
            }
            for x in sys.process(from).unwrap().event_ids() {
                for y in sys.process(to).unwrap().event_ids() {
                    let mut all_increase = true;
                    for member in &family.functions {
                        all_increase &= value_of(member, &x)? < value_of(member, &y)?;
                    }
                    let precedes = reach[&x].contains(&y);
                    if precedes != all_increase {
                        let shown: Vec<String> = family
                            .functions
                            .iter()
                            .map(|f| {
                                format!("{}<{}", render_rational(&f[&x]), render_rational(&f[&y]))
                            })
                            .collect();
                        return witness(
                            x.clone(),
                            y,
                            format!(
                                "precedence {} but member comparisons [{}]",
                                if precedes { "holds" } else { "fails" },
                                shown.join(", ")
                            ),
                        );
                    }
                }
            }
        }
    }
    Ok(())
}

/// Vector representation: own component strictly increasing and the rest
/// monotone along each chain, every related channel pair strictly below,
/// and componentwise strict-below matching causal precedence exactly.
pub fn verify_vector_representation(
    sys: &DistributedSystem,
    vc: &VectorClock,
) -> Result<(), Witness<EventId>> {
    let missing = |id: &EventId| Witness {
        x: id.clone(),
        y: id.clone(),
        detail: "no vector assigned".to_string(),
    };
    let own = |id: &EventId| {
        vc.processes()
            .iter()
            .position(|p| p == &id.process)
            .ok_or_else(|| missing(id))
    };
    for chain in sys.processes() {
        let ids: Vec<EventId> = chain.event_ids().collect();
        for w in ids.windows(2) {
            let a = vc.value(&w[0]).ok_or_else(|| missing(&w[0]))?;
            let b = vc.value(&w[1]).ok_or_else(|| missing(&w[1]))?;
            let slot = own(&w[1])?;
            if a.iter().zip(b).any(|(p, q)| p > q) || a[slot] >= b[slot] {
                return witness(
                    w[0].clone(),
                    w[1].clone(),
                    format!("chain step not monotone: {a:?} then {b:?}"),
                );
            }
        }
    }
    let reach = reach_sets(sys);
    for x in sys.events() {
        for y in sys.events() {
            if x == y {
                continue;
            }
            let a = vc.value(&x).ok_or_else(|| missing(&x))?;
            let b = vc.value(&y).ok_or_else(|| missing(&y))?;
            let below = a.iter().zip(b).all(|(p, q)| p <= q) && a != b;
            if channel_related(sys, &x, &y) && !below {
                return witness(
                    x.clone(),
                    y.clone(),
                    format!("channel pair not below: {a:?} vs {b:?}"),
                );
            }
            if reach[&x].contains(&y) != below {
                return witness(
                    x.clone(),
                    y.clone(),
                    format!(
                        "precedence {} but vectors {a:?} vs {b:?}",
                        if reach[&x].contains(&y) { "holds" } else { "fails" },
                    ),
                );
            }
        }
    }
    Ok(())
}

/// Richter-Peleg contract against an explicit poset: strictly below exactly
/// when every function strictly increases.
pub fn verify_rp_multiutility<T: Ord + Clone + fmt::Display>(
    poset: &StrictPoset<T>,
    family: &MultiUtility<T>,
) -> Result<(), Witness<T>> {
    for x in poset.elements() {
        for y in poset.elements() {
            if x == y {
                continue;
            }
            let mut all_increase = true;
            for f in &family.functions {
                let (Some(a), Some(b)) = (f.get(x), f.get(y)) else {
                    return witness(x.clone(), y.clone(), "no value assigned".to_string());
                };
                all_increase &= a < b;
            }
            if poset.lt(x, y) != all_increase {
                let shown: Vec<String> = family
                    .functions
                    .iter()
                    .map(|f| {
                        format!("{}<{}", render_rational(&f[x]), render_rational(&f[y]))
                    })
                    .collect();
                return witness(
                    x.clone(),
                    y.clone(),
                    format!(
                        "order {} but comparisons [{}]",
                        if poset.lt(x, y) { "holds" } else { "fails" },
                        shown.join(", ")
                    ),
                );
            }
        }
    }
    Ok(())
}

/// Exact iff check of a two-function representation in its declared mode.
pub fn verify_biorder_representation<T: Ord + Clone + fmt::Display>(
    rel: &Biorder<T>,
    rep: &BiorderRep<T>,
) -> Result<(), Witness<T>> {
    for x in rel.domain() {
        for y in rel.codomain() {
            let (Some(a), Some(b)) = (rep.u.get(x), rep.v.get(y)) else {
                return witness(x.clone(), y.clone(), "no value assigned".to_string());
            };
            let holds = match rep.mode {
                RepMode::Strict => a < b,
                RepMode::Weak => a <= b,
            };
            if holds != rel.contains(x, y) {
                return witness(
                    x.clone(),
                    y.clone(),
                    format!(
                        "relation {} but {} {} {}",
                        if rel.contains(x, y) { "holds" } else { "fails" },
                        render_rational(a),
                        match rep.mode {
                            RepMode::Strict => "<",
                            RepMode::Weak => "<=",
                        },
                        render_rational(b)
                    ),
                );
            }
        }
    }
    Ok(())
}
