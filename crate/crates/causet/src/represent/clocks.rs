//! Lamport and vector clocks, computed by dynamic programming over the
//! event graph in a fixed topological order (event id order breaks ties, so
//! runs are reproducible even though the values do not depend on it).

use std::collections::BTreeMap;

use crate::system::{DistributedSystem, EventId};
use crate::utility::{whole, Rational};

use super::ReprError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClockKind {
    /// One-way: causally ordered events get increasing values, no converse.
    Weak,
    /// One member function of a family that captures the order exactly.
    FullMember,
    /// Integer-valued weak clock computed by the classic max-plus-one rule.
    Lamport,
}

/// A single event-to-value function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClockAssignment {
    pub kind: ClockKind,
    values: BTreeMap<EventId, Rational>,
}

impl ClockAssignment {
    pub fn new(kind: ClockKind, values: BTreeMap<EventId, Rational>) -> Self {
        ClockAssignment { kind, values }
    }

    pub fn value(&self, id: &EventId) -> Option<&Rational> {
        self.values.get(id)
    }

    pub fn values(&self) -> &BTreeMap<EventId, Rational> {
        &self.values
    }
}

/// An integer vector per event, one component per process, in process list
/// order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorClock {
    processes: Vec<String>,
    values: BTreeMap<EventId, Vec<u64>>,
}

impl VectorClock {
    /// Wraps raw values without any checking; counterexamples for the
    /// verifiers are built this way.
    pub fn from_values(processes: Vec<String>, values: BTreeMap<EventId, Vec<u64>>) -> Self {
        VectorClock { processes, values }
    }

    pub fn processes(&self) -> &[String] {
        &self.processes
    }

    pub fn value(&self, id: &EventId) -> Option<&[u64]> {
        self.values.get(id).map(Vec::as_slice)
    }

    pub fn values(&self) -> &BTreeMap<EventId, Vec<u64>> {
        &self.values
    }

    /// Componentwise `≤`.
    pub fn leq(&self, a: &EventId, b: &EventId) -> Option<bool> {
        let (va, vb) = (self.values.get(a)?, self.values.get(b)?);
        Some(va.iter().zip(vb).all(|(x, y)| x <= y))
    }

    /// Componentwise `≤` with strict inequality somewhere.
    pub fn strictly_less(&self, a: &EventId, b: &EventId) -> Option<bool> {
        let (va, vb) = (self.values.get(a)?, self.values.get(b)?);
        Some(va.iter().zip(vb).all(|(x, y)| x <= y) && va != vb)
    }
}

/// Topological order over all events plus each event's direct predecessors.
type TopoPreds = (Vec<EventId>, BTreeMap<EventId, Vec<EventId>>);

/// Predecessors of each event in the event graph, plus a topological order
/// over all events. Fails with the cycle witness when there is no order.
fn topo_with_predecessors(sys: &DistributedSystem) -> Result<TopoPreds, ReprError> {
    sys.causal_closure().map_err(ReprError::Cycle)?;
    let mut preds: BTreeMap<EventId, Vec<EventId>> = sys.events().map(|e| (e, Vec::new())).collect();
    for chain in sys.processes() {
        for k in 1..chain.len() {
            preds
                .get_mut(&chain.event_id(k).unwrap())
                .unwrap()
                .push(chain.event_id(k - 1).unwrap());
        }
    }
    for comm in sys.communications() {
        for (s, r) in comm.pair_ids() {
            preds.get_mut(&r).unwrap().push(s);
        }
    }
    let mut remaining: BTreeMap<EventId, usize> =
        preds.iter().map(|(e, p)| (e.clone(), p.len())).collect();
    let mut ready: std::collections::BTreeSet<EventId> = remaining
        .iter()
        .filter(|(_, &n)| n == 0)
        .map(|(e, _)| e.clone())
        .collect();
    let mut order = Vec::with_capacity(preds.len());
    let mut succs: BTreeMap<EventId, Vec<EventId>> = BTreeMap::new();
    for (e, ps) in &preds {
        for p in ps {
            succs.entry(p.clone()).or_default().push(e.clone());
        }
    }
    while let Some(next) = ready.iter().next().cloned() {
        ready.remove(&next);
        order.push(next.clone());
        for succ in succs.get(&next).into_iter().flatten() {
            let n = remaining.get_mut(succ).unwrap();
            *n -= 1;
            if *n == 0 {
                ready.insert(succ.clone());
            }
        }
    }
    debug_assert_eq!(order.len(), preds.len(), "closure already ruled out cycles");
    Ok((order, preds))
}

/// The classic rule: first event of a chain ticks to 1, later events tick
/// past their chain predecessor, and a receive also ticks past every sender
/// it hears from.
pub fn lamport_clocks(sys: &DistributedSystem) -> Result<ClockAssignment, ReprError> {
    let (order, preds) = topo_with_predecessors(sys)?;
    let mut clock: BTreeMap<EventId, u64> = BTreeMap::new();
    for e in order {
        let base = preds[&e].iter().map(|p| clock[p]).max().unwrap_or(0);
        clock.insert(e, base + 1);
    }
    Ok(ClockAssignment::new(
        ClockKind::Lamport,
        clock
            .into_iter()
            .map(|(e, c)| (e, whole(c as i64)))
            .collect(),
    ))
}

/// One counter per process: an event copies the componentwise maximum of
/// everything it directly depends on, then advances its own component.
pub fn vector_clocks(sys: &DistributedSystem) -> Result<VectorClock, ReprError> {
    let (order, preds) = topo_with_predecessors(sys)?;
    let processes: Vec<String> = sys.processes().iter().map(|p| p.id().to_string()).collect();
    let position: BTreeMap<&str, usize> = processes
        .iter()
        .enumerate()
        .map(|(i, p)| (p.as_str(), i))
        .collect();
    let mut values: BTreeMap<EventId, Vec<u64>> = BTreeMap::new();
    for e in order {
        let mut v = vec![0; processes.len()];
        for p in &preds[&e] {
            for (slot, x) in v.iter_mut().zip(&values[p]) {
                *slot = (*slot).max(*x);
            }
        }
        let own = position[e.process.as_str()];
        v[own] += 1;
        debug_assert_eq!(v[own] as usize, e.index + 1);
        values.insert(e, v);
    }
    Ok(VectorClock { processes, values })
}
