//! Distributed executions modeled as totally ordered process chains stitched
//! together by message communications, plus the numerical representations of
//! the resulting happened-before order.
//!
//! The crate is organized around a small pipeline:
//!
//! * [`system`] holds the execution model (chains, communications) and the
//!   happened-before analysis: closure, deadlock witnesses, message-ordering
//!   diagnostics, concurrency reports.
//! * [`biorder`] covers the relation a communication induces between two
//!   chains: Ferrers checks, traces, and quotients of a single relation.
//! * [`quotient`] intersects every trace touching a process and projects the
//!   whole execution onto a finite poset of event classes.
//! * [`poset`] is the finite strict-order toolbox: closure, reduction, width,
//!   linear extensions, order dimension, realizers, and synthesis of an
//!   execution back out of a poset.
//! * [`represent`] builds the numeric artifacts: chain utilities, biorder
//!   representations, lower/upper operator aggregation for line topologies,
//!   Lamport and vector clocks, and multi-utility families on events.
//! * [`oracle`] re-checks everything the builders produce by brute force.
//! * [`io`] reads and writes the line-oriented document formats and Graphviz
//!   exports used by the command line tool.

pub mod biorder;
pub mod fixtures;
pub mod io;
pub mod oracle;
pub mod poset;
pub mod quotient;
pub mod represent;
pub mod system;
pub mod utility;

pub use poset::{synthesize_system, CycleWitness, Realizer, StrictPoset};
pub use quotient::{quotient_system, QuotientError, QuotientSystem};
pub use system::{DistributedSystem, Event, EventId, ProcessChain};
pub use utility::{render_rational, MultiUtility, Rational};
