//! The execution model: processes as finite chains of events, communications
//! as finite sets of message pairs, and the happened-before analysis built
//! from both.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::poset::{self, CycleWitness, StrictPoset};

/// Identifies one event as `(process, index)`; the index is the event's
/// 0-based position inside its process chain. The derived ordering (process
/// id, then index) is the tie-break order used throughout the crate.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EventId {
    pub process: String,
    pub index: usize,
}

impl EventId {
    pub fn new(process: impl Into<String>, index: usize) -> Self {
        EventId {
            process: process.into(),
            index,
        }
    }
}

impl fmt::Display for EventId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.process, self.index)
    }
}

/// One event in a chain, with an optional human-readable label. Labels are
/// cosmetic here; the document layer requires and resolves them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Event {
    id: EventId,
    label: Option<String>,
}

impl Event {
    pub fn id(&self) -> &EventId {
        &self.id
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }
}

/// A process: a finite, totally ordered chain of events.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProcessChain {
    id: String,
    events: Vec<Event>,
}

impl ProcessChain {
    /// A chain of `len` unlabeled events.
    pub fn new(id: impl Into<String>, len: usize) -> Self {
        let id = id.into();
        let events = (0..len)
            .map(|index| Event {
                id: EventId::new(id.clone(), index),
                label: None,
            })
            .collect();
        ProcessChain { id, events }
    }

    /// A chain whose events carry the given labels, in chain order.
    pub fn with_labels<I, S>(id: impl Into<String>, labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let id = id.into();
        let events = labels
            .into_iter()
            .enumerate()
            .map(|(index, label)| Event {
                id: EventId::new(id.clone(), index),
                label: Some(label.into()),
            })
            .collect();
        ProcessChain { id, events }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn event_id(&self, index: usize) -> Option<EventId> {
        (index < self.events.len()).then(|| EventId::new(self.id.clone(), index))
    }

    pub fn event_ids(&self) -> impl Iterator<Item = EventId> + '_ {
        self.events.iter().map(|e| e.id.clone())
    }
}

/// The message pairs exchanged from one process to another. Stored as raw
/// index pairs so that systems violating bijectivity or referencing missing
/// events can be represented and then diagnosed by [`DistributedSystem::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Communication {
    from: String,
    to: String,
    pairs: BTreeSet<(usize, usize)>,
}

impl Communication {
    pub fn from_process(&self) -> &str {
        &self.from
    }

    pub fn to_process(&self) -> &str {
        &self.to
    }

    /// Message pairs as `(sender index, receiver index)`, ascending.
    pub fn index_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn pair_ids(&self) -> impl Iterator<Item = (EventId, EventId)> + '_ {
        self.pairs.iter().map(move |&(s, r)| {
            (
                EventId::new(self.from.clone(), s),
                EventId::new(self.to.clone(), r),
            )
        })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

#[derive(Error, Clone, Debug, PartialEq, Eq)]
pub enum BuildError {
    #[error("duplicate process id `{0}`")]
    DuplicateProcess(String),
    #[error("message endpoints lie in the same process `{0}`")]
    SameProcess(String),
}

/// A structural defect reported by [`DistributedSystem::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// One sender appears in two pairs of the same communication.
    DuplicateSender {
        from: String,
        to: String,
        sender: EventId,
    },
    /// One receiver appears in two pairs of the same communication.
    DuplicateReceiver {
        from: String,
        to: String,
        receiver: EventId,
    },
    /// A message endpoint names a missing process or an index past the end
    /// of its chain.
    DanglingEvent {
        from: String,
        to: String,
        event: EventId,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateSender { from, to, sender } => {
                write!(f, "sender {sender} duplicated in channel {from}->{to}")
            }
            Violation::DuplicateReceiver { from, to, receiver } => {
                write!(f, "receiver {receiver} duplicated in channel {from}->{to}")
            }
            Violation::DanglingEvent { from, to, event } => {
                write!(f, "dangling event {event} in channel {from}->{to}")
            }
        }
    }
}

/// Two messages of one channel delivered against their send order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderingViolation {
    pub from: String,
    pub to: String,
    /// Sent first, received second.
    pub first: (EventId, EventId),
    /// Sent second, received first.
    pub second: (EventId, EventId),
}

impl fmt::Display for OrderingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "channel {}->{} delivers ({} -> {}) after the later ({} -> {})",
            self.from, self.to, self.first.0, self.first.1, self.second.0, self.second.1
        )
    }
}

/// Everything the structural analysis has to say about one system.
#[derive(Clone, Debug)]
pub struct CausalReport {
    pub structural: Vec<Violation>,
    pub ordering: Vec<OrderingViolation>,
    /// The happened-before order, or the deadlock cycle preventing it.
    pub closure: Result<StrictPoset<EventId>, CycleWitness<EventId>>,
}

impl CausalReport {
    pub fn is_clean(&self) -> bool {
        self.structural.is_empty() && self.ordering.is_empty() && self.closure.is_ok()
    }
}

/// A distributed execution: an ordered list of process chains plus one
/// optional communication per ordered process pair. Process order is the
/// order of insertion and fixes vector clock components and what counts as
/// a line topology.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DistributedSystem {
    processes: Vec<ProcessChain>,
    communications: BTreeMap<(String, String), Communication>,
}

impl DistributedSystem {
    pub fn new() -> Self {
        DistributedSystem::default()
    }

    pub fn add_process(&mut self, chain: ProcessChain) -> Result<&mut Self, BuildError> {
        if self.processes.iter().any(|p| p.id == chain.id) {
            return Err(BuildError::DuplicateProcess(chain.id));
        }
        self.processes.push(chain);
        Ok(self)
    }

    /// Records a message pair. Dangling endpoints are allowed here on
    /// purpose; [`DistributedSystem::validate`] reports them.
    pub fn add_message(&mut self, from: EventId, to: EventId) -> Result<&mut Self, BuildError> {
        if from.process == to.process {
            return Err(BuildError::SameProcess(from.process));
        }
        let key = (from.process.clone(), to.process.clone());
        let comm = self
            .communications
            .entry(key)
            .or_insert_with(|| Communication {
                from: from.process.clone(),
                to: to.process.clone(),
                pairs: BTreeSet::new(),
            });
        comm.pairs.insert((from.index, to.index));
        Ok(self)
    }

    pub fn processes(&self) -> &[ProcessChain] {
        &self.processes
    }

    pub fn process(&self, id: &str) -> Option<&ProcessChain> {
        self.processes.iter().find(|p| p.id == id)
    }

    pub fn process_position(&self, id: &str) -> Option<usize> {
        self.processes.iter().position(|p| p.id == id)
    }

    pub fn communication(&self, from: &str, to: &str) -> Option<&Communication> {
        self.communications
            .get(&(from.to_string(), to.to_string()))
    }

    /// All communications, keyed order (`from`, `to`) ascending.
    pub fn communications(&self) -> impl Iterator<Item = &Communication> {
        self.communications.values()
    }

    /// Every event in system order: processes as inserted, indices ascending.
    pub fn events(&self) -> impl Iterator<Item = EventId> + '_ {
        self.processes.iter().flat_map(|p| p.event_ids())
    }

    pub fn event_count(&self) -> usize {
        self.processes.iter().map(|p| p.len()).sum()
    }

    pub fn label_of(&self, id: &EventId) -> Option<&str> {
        self.process(&id.process)?.events.get(id.index)?.label()
    }

    /// Label when present, `process#index` otherwise.
    pub fn display_event(&self, id: &EventId) -> String {
        self.label_of(id)
            .map(str::to_string)
            .unwrap_or_else(|| id.to_string())
    }

    pub fn find_by_label(&self, label: &str) -> Option<EventId> {
        for p in &self.processes {
            for e in &p.events {
                if e.label() == Some(label) {
                    return Some(e.id.clone());
                }
            }
        }
        None
    }

    /// True when every nonempty communication goes from a process to its
    /// immediate successor in the process list.
    pub fn has_line_communication(&self) -> bool {
        self.communications.values().all(|c| {
            c.is_empty()
                || matches!(
                    (self.process_position(&c.from), self.process_position(&c.to)),
                    (Some(i), Some(j)) if j == i + 1
                )
        })
    }

    /// Bijectivity and dangling-reference diagnostics, in channel order.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for comm in self.communications.values() {
            let from_len = self.process(&comm.from).map(|p| p.len());
            let to_len = self.process(&comm.to).map(|p| p.len());
            let mut senders: BTreeMap<usize, usize> = BTreeMap::new();
            let mut receivers: BTreeMap<usize, usize> = BTreeMap::new();
            for &(s, r) in &comm.pairs {
                *senders.entry(s).or_default() += 1;
                *receivers.entry(r).or_default() += 1;
                if from_len.is_none_or(|len| s >= len) {
                    out.push(Violation::DanglingEvent {
                        from: comm.from.clone(),
                        to: comm.to.clone(),
                        event: EventId::new(comm.from.clone(), s),
                    });
                }
                if to_len.is_none_or(|len| r >= len) {
                    out.push(Violation::DanglingEvent {
                        from: comm.from.clone(),
                        to: comm.to.clone(),
                        event: EventId::new(comm.to.clone(), r),
                    });
                }
            }
            for (&s, &count) in &senders {
                if count > 1 {
                    out.push(Violation::DuplicateSender {
                        from: comm.from.clone(),
                        to: comm.to.clone(),
                        sender: EventId::new(comm.from.clone(), s),
                    });
                }
            }
            for (&r, &count) in &receivers {
                if count > 1 {
                    out.push(Violation::DuplicateReceiver {
                        from: comm.from.clone(),
                        to: comm.to.clone(),
                        receiver: EventId::new(comm.to.clone(), r),
                    });
                }
            }
        }
        out
    }

    /// Raw event graph in system order: chain successor edges first, then
    /// message edges channel by channel. The edge order makes cycle
    /// witnesses deterministic.
    pub(crate) fn event_graph(&self) -> EventGraph {
        let events: Vec<EventId> = self.events().collect();
        let index: BTreeMap<EventId, usize> = events
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); events.len()];
        for p in &self.processes {
            for k in 1..p.len() {
                let a = index[&EventId::new(p.id.clone(), k - 1)];
                let b = index[&EventId::new(p.id.clone(), k)];
                adj[a].push(b);
            }
        }
        for comm in self.communications.values() {
            for (s, r) in comm.pair_ids() {
                if let (Some(&a), Some(&b)) = (index.get(&s), index.get(&r)) {
                    adj[a].push(b);
                }
            }
        }
        EventGraph { events, adj }
    }

    /// Happened-before: the transitive closure of the chain orders together
    /// with all message pairs. A cyclic system is a deadlock and yields the
    /// witness instead. Dangling message endpoints are ignored here;
    /// [`DistributedSystem::validate`] reports them.
    pub fn causal_closure(&self) -> Result<StrictPoset<EventId>, CycleWitness<EventId>> {
        let graph = self.event_graph();
        if let Some(cycle) = poset::find_cycle(&graph.adj) {
            return Err(CycleWitness {
                path: cycle.into_iter().map(|i| graph.events[i].clone()).collect(),
            });
        }
        let mut pairs = Vec::new();
        for (v, outs) in graph.adj.iter().enumerate() {
            for &w in outs {
                pairs.push((graph.events[v].clone(), graph.events[w].clone()));
            }
        }
        StrictPoset::from_pairs(graph.events, pairs)
    }

    /// Per-channel delivery diagnostics: pairs of messages sent in one order
    /// and received in the other. Requires per-channel bijectivity to be
    /// meaningful, so run [`DistributedSystem::validate`] first.
    pub fn message_ordering_violations(&self) -> Vec<OrderingViolation> {
        let mut out = Vec::new();
        for comm in self.communications.values() {
            let pairs: Vec<(usize, usize)> = comm.index_pairs().collect();
            for (a, &(s1, r1)) in pairs.iter().enumerate() {
                for &(s2, r2) in &pairs[a + 1..] {
                    // pairs are sorted by sender index, so s1 < s2 here
                    if s1 < s2 && r2 < r1 {
                        out.push(OrderingViolation {
                            from: comm.from.clone(),
                            to: comm.to.clone(),
                            first: (
                                EventId::new(comm.from.clone(), s1),
                                EventId::new(comm.to.clone(), r1),
                            ),
                            second: (
                                EventId::new(comm.from.clone(), s2),
                                EventId::new(comm.to.clone(), r2),
                            ),
                        });
                    }
                }
            }
        }
        out
    }

    /// Unordered pairs of distinct events with no causal precedence either
    /// way, each reported once with its smaller event first.
    pub fn concurrent_pairs(&self) -> Result<BTreeSet<(EventId, EventId)>, CycleWitness<EventId>> {
        let closure = self.causal_closure()?;
        let mut out = BTreeSet::new();
        let events = closure.elements();
        for (i, a) in events.iter().enumerate() {
            for b in &events[i + 1..] {
                if !closure.lt(a, b) && !closure.lt(b, a) {
                    out.insert((a.clone(), b.clone()));
                }
            }
        }
        Ok(out)
    }

    /// Full structural report: validation, delivery ordering, closure.
    pub fn causal_report(&self) -> CausalReport {
        CausalReport {
            structural: self.validate(),
            ordering: self.message_ordering_violations(),
            closure: self.causal_closure(),
        }
    }
}

pub(crate) struct EventGraph {
    pub events: Vec<EventId>,
    pub adj: Vec<Vec<usize>>,
}

/// Why two same-shape systems with equal happened-before may still differ
/// in their communications, or the assertion that they cannot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CommVerdict {
    /// The happened-before orders differ; the pair is ordered in exactly one
    /// of the two systems.
    ClosuresDiffer { example: (EventId, EventId) },
    /// Equal closures and equal communications.
    EqualCommunications,
    /// Equal closures, different communications, and at least one structural
    /// or delivery-order defect that accounts for the difference.
    DifferentCommsExplained { causes: Vec<DifferenceCause> },
    /// Equal closures and different communications with both systems clean.
    /// Cannot occur between two-process systems; reachable with three or
    /// more processes where messages can be implied by longer paths.
    DifferentCommsUnexplained { channel: (String, String) },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DifferenceCause {
    Bijectivity { system: usize, violation: Violation },
    Ordering { system: usize, violation: OrderingViolation },
}

#[derive(Error, Clone, Debug, PartialEq, Eq)]
pub enum CommCompareError {
    #[error("the two systems have different process sets")]
    ProcessMismatch,
    #[error("system {0} deadlocks: {1}")]
    Cycle(usize, CycleWitness<EventId>),
}

/// Compares two executions over identical process chains: equal
/// happened-before forces equal communications unless a bijectivity or
/// delivery-order defect explains the difference.
pub fn same_causal_implies_same_comm(
    a: &DistributedSystem,
    b: &DistributedSystem,
) -> Result<CommVerdict, CommCompareError> {
    if a.processes != b.processes {
        return Err(CommCompareError::ProcessMismatch);
    }
    let ca = a
        .causal_closure()
        .map_err(|w| CommCompareError::Cycle(1, w))?;
    let cb = b
        .causal_closure()
        .map_err(|w| CommCompareError::Cycle(2, w))?;
    if ca != cb {
        let example = ca
            .strict_pairs()
            .into_iter()
            .find(|(x, y)| !cb.lt(x, y))
            .or_else(|| cb.strict_pairs().into_iter().find(|(x, y)| !ca.lt(x, y)))
            .expect("unequal closures over one element set differ in some pair");
        return Ok(CommVerdict::ClosuresDiffer { example });
    }
    if a.communications == b.communications {
        return Ok(CommVerdict::EqualCommunications);
    }

    let mut causes = Vec::new();
    for (tag, sys) in [(1usize, a), (2usize, b)] {
        for violation in sys.validate() {
            causes.push(DifferenceCause::Bijectivity {
                system: tag,
                violation,
            });
        }
        for violation in sys.message_ordering_violations() {
            causes.push(DifferenceCause::Ordering {
                system: tag,
                violation,
            });
        }
    }
    if !causes.is_empty() {
        return Ok(CommVerdict::DifferentCommsExplained { causes });
    }
    let channel = a
        .communications
        .iter()
        .find(|(k, c)| b.communications.get(k) != Some(c))
        .map(|(k, _)| k.clone())
        .or_else(|| {
            b.communications
                .iter()
                .find(|(k, _)| !a.communications.contains_key(*k))
                .map(|(k, _)| k.clone())
        })
        .expect("communications differ");
    Ok(CommVerdict::DifferentCommsUnexplained { channel })
}
