//! Collapses a system onto the classes no trace can tell apart.
//!
//! For each process, every channel it touches contributes a trace preorder
//! over its events (the domain trace for outgoing channels, the codomain
//! trace for incoming ones). Intersecting all of them yields finitely many
//! classes per process, each a contiguous run of the chain, and causal
//! precedence projects cleanly onto those classes. Chains may be infinite in
//! principle; the class count never is, which is the point.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::biorder::induced_biorder;
use crate::poset::{CycleWitness, StrictPoset};
use crate::system::{DistributedSystem, EventId, ProcessChain};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error("causal precedence is cyclic: {0}")]
    Cycle(CycleWitness<EventId>),
    #[error(
        "projection onto classes is ill-defined: {} precedes {} but {} does not precede {}",
        .0.related.0, .0.related.1, .0.unrelated.0, .0.unrelated.1
    )]
    Projection(Box<ProjectionWitness>),
    #[error("unknown process {0}")]
    UnknownProcess(String),
}

/// Two event pairs between the same two classes that disagree about causal
/// precedence, which would make the class relation ambiguous.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionWitness {
    pub related: (EventId, EventId),
    pub unrelated: (EventId, EventId),
}

/// One quotient class: a contiguous run of events on a single chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientClass {
    name: String,
    process: String,
    members: Vec<EventId>,
}

impl QuotientClass {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn process(&self) -> &str {
        &self.process
    }

    pub fn members(&self) -> &[EventId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// A system collapsed to its trace classes. Classes are named
/// `<process>#<ordinal>` with ordinals following the chain, so the names are
/// stable across runs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientSystem {
    processes: Vec<String>,
    classes: Vec<QuotientClass>,
    class_of: BTreeMap<EventId, String>,
    poset: StrictPoset<String>,
    projected_messages: BTreeSet<(String, String)>,
}

impl QuotientSystem {
    /// All classes, processes in system order and chain order within each.
    pub fn classes(&self) -> &[QuotientClass] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class(&self, name: &str) -> Option<&QuotientClass> {
        self.classes.iter().find(|c| c.name == name)
    }

    pub fn class_of(&self, event: &EventId) -> Option<&str> {
        self.class_of.get(event).map(String::as_str)
    }

    pub fn classes_of_process(&self, process: &str) -> Result<Vec<&QuotientClass>, QuotientError> {
        if !self.processes.iter().any(|p| p == process) {
            return Err(QuotientError::UnknownProcess(process.to_string()));
        }
        Ok(self
            .classes
            .iter()
            .filter(|c| c.process == process)
            .collect())
    }

    /// Causal precedence between classes.
    pub fn poset(&self) -> &StrictPoset<String> {
        &self.poset
    }

    /// Re-encodes the quotient as a system with one event per class, labeled
    /// by class name, and messages projected through the class map. For a
    /// system that delivers in send order the result is clean; crossing
    /// deliveries can collapse onto repeated channel endpoints, which
    /// `validate` on the result will report.
    pub fn as_system(&self) -> DistributedSystem {
        let mut sys = DistributedSystem::new();
        for process in &self.processes {
            let labels: Vec<&str> = self
                .classes
                .iter()
                .filter(|c| &c.process == process)
                .map(|c| c.name.as_str())
                .collect();
            sys.add_process(ProcessChain::with_labels(process.clone(), labels))
                .expect("process ids were distinct in the source system");
        }
        for (from_class, to_class) in &self.projected_messages {
            let from = self.class_event(from_class);
            let to = self.class_event(to_class);
            sys.add_message(from, to)
                .expect("projected messages stay cross-process");
        }
        sys
    }

    fn class_event(&self, name: &str) -> EventId {
        let class = self.class(name).expect("projected class exists");
        let ordinal = self
            .classes
            .iter()
            .filter(|c| c.process == class.process)
            .position(|c| c.name == name)
            .unwrap();
        EventId::new(class.process.clone(), ordinal)
    }
}

/// The partition of one process's events into trace classes, in chain order.
pub fn class_partition(
    sys: &DistributedSystem,
    process: &str,
) -> Result<Vec<Vec<EventId>>, QuotientError> {
    if sys.process(process).is_none() {
        return Err(QuotientError::UnknownProcess(process.to_string()));
    }
    sys.causal_closure().map_err(QuotientError::Cycle)?;
    Ok(partition_unchecked(sys, process))
}

fn partition_unchecked(sys: &DistributedSystem, process: &str) -> Vec<Vec<EventId>> {
    let chain = sys.process(process).expect("caller checked the process");
    let ids: Vec<EventId> = chain.event_ids().collect();
    let mut signatures: Vec<Vec<usize>> = vec![Vec::new(); ids.len()];
    for comm in sys.communications() {
        if comm.is_empty() {
            continue;
        }
        if comm.from_process() == process {
            let traces = induced_biorder(sys, process, comm.to_process())
                .expect("processes exist")
                .traces()
                .expect("induced relations respect chains, hence are Ferrers");
            for (k, id) in ids.iter().enumerate() {
                signatures[k].push(traces.left.rank_of(id).unwrap());
            }
        }
        if comm.to_process() == process {
            let traces = induced_biorder(sys, comm.from_process(), process)
                .expect("processes exist")
                .traces()
                .expect("induced relations respect chains, hence are Ferrers");
            for (k, id) in ids.iter().enumerate() {
                signatures[k].push(traces.right.rank_of(id).unwrap());
            }
        }
    }
    // Trace ranks never decrease along the chain, so equal signatures sit in
    // contiguous runs and consecutive grouping recovers the intersection.
    debug_assert!(signatures.windows(2).all(|w| w[0] <= w[1]));
    let mut classes: Vec<Vec<EventId>> = Vec::new();
    for (k, id) in ids.iter().enumerate() {
        if k == 0 || signatures[k] != signatures[k - 1] {
            classes.push(Vec::new());
        }
        classes.last_mut().unwrap().push(id.clone());
    }
    classes
}

/// Partitions every process and projects causal precedence onto the classes.
/// Well-definedness of the projection is checked pair by pair rather than
/// assumed: if two members of a class disagree about another class, the
/// construction stops with a [`QuotientError::Projection`].
pub fn quotient_system(sys: &DistributedSystem) -> Result<QuotientSystem, QuotientError> {
    let closure = sys.causal_closure().map_err(QuotientError::Cycle)?;

    let mut processes = Vec::new();
    let mut classes = Vec::new();
    let mut class_of = BTreeMap::new();
    for chain in sys.processes() {
        processes.push(chain.id().to_string());
        for (ordinal, members) in partition_unchecked(sys, chain.id()).into_iter().enumerate() {
            let name = format!("{}#{}", chain.id(), ordinal);
            for member in &members {
                class_of.insert(member.clone(), name.clone());
            }
            classes.push(QuotientClass {
                name,
                process: chain.id().to_string(),
                members,
            });
        }
    }

    let mut pairs = Vec::new();
    for c in &classes {
        for d in &classes {
            if c.name == d.name {
                continue;
            }
            let mut related: Option<(EventId, EventId)> = None;
            let mut unrelated: Option<(EventId, EventId)> = None;
            for x in &c.members {
                for y in &d.members {
                    if closure.lt(x, y) {
                        related.get_or_insert_with(|| (x.clone(), y.clone()));
                    } else {
                        unrelated.get_or_insert_with(|| (x.clone(), y.clone()));
                    }
                }
            }
            match (related, unrelated) {
                (Some(r), Some(u)) => {
                    return Err(QuotientError::Projection(Box::new(ProjectionWitness {
                        related: r,
                        unrelated: u,
                    })))
                }
                (Some(_), None) => pairs.push((c.name.clone(), d.name.clone())),
                _ => {}
            }
        }
    }

    let poset = StrictPoset::from_pairs(classes.iter().map(|c| c.name.clone()), pairs)
        .expect("projection of an acyclic order cannot cycle");

    let mut projected_messages = BTreeSet::new();
    for comm in sys.communications() {
        for (s, r) in comm.pair_ids() {
            projected_messages.insert((class_of[&s].clone(), class_of[&r].clone()));
        }
    }

    Ok(QuotientSystem {
        processes,
        classes,
        class_of,
        poset,
        projected_messages,
    })
}
