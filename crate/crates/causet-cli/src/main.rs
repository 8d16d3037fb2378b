//! Command line front end. Exit codes are a stable contract: 0 clean,
//! 1 witness or violation found, 2 usage or parse error.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use causet::io::{self, DocError, DotMode};
use causet::oracle;
use causet::represent::{
    aggregate_line_weak, build_line_representations, lamport_clocks, rp_multiutility_from_quotient,
    vector_clocks, ReprError,
};
use causet::{
    quotient_system, render_rational, synthesize_system, CycleWitness, DistributedSystem, EventId,
    QuotientError, Rational, StrictPoset,
};

/// Search budget for the exact dimension computation.
const DIMENSION_BUDGET: u64 = 200_000;

#[derive(Parser)]
#[command(name = "causet", version, about = "Causal analysis of distributed executions")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a system document for structural and delivery-order defects.
    Validate { file: PathBuf },
    /// Print the happened-before pairs of a system.
    Closure { file: PathBuf },
    /// Print the trace-quotient classes and their Hasse diagram.
    Quotient { file: PathBuf },
    /// Print Lamport clocks.
    Lamport {
        file: PathBuf,
        /// Verify the clocks against the weak-representation oracle.
        #[arg(long)]
        check: bool,
    },
    /// Print vector clocks.
    Vector {
        file: PathBuf,
        /// Verify the clocks against the exact-representation oracle.
        #[arg(long)]
        check: bool,
    },
    /// Aggregate hop representations of a line system into one weak clock.
    Aggregate {
        file: PathBuf,
        /// Verify the result against the weak-representation oracle.
        #[arg(long)]
        check: bool,
    },
    /// Build the finite multi-utility representation via the quotient.
    Multiutility {
        file: PathBuf,
        /// Verify the family against the representation oracle.
        #[arg(long)]
        check: bool,
    },
    /// Print the order dimension of a poset document.
    Dimension { file: PathBuf },
    /// Print the covering pairs (transitive reduction) of a poset document.
    Reduce { file: PathBuf },
    /// Print the width of a poset document.
    Width { file: PathBuf },
    /// Synthesize a system document whose causal order is the given poset.
    Decompose { file: PathBuf },
    /// Render a system or poset document as GraphViz.
    Dot {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Spacetime,
    Hasse,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

const CLEAN: ExitCode = ExitCode::SUCCESS;

fn found() -> ExitCode {
    ExitCode::from(1)
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.cmd {
        Cmd::Validate { file } => validate(&load_system(&file)?),
        Cmd::Closure { file } => closure(&load_system(&file)?),
        Cmd::Quotient { file } => quotient(&load_system(&file)?),
        Cmd::Lamport { file, check } => lamport(&load_system(&file)?, check),
        Cmd::Vector { file, check } => vector(&load_system(&file)?, check),
        Cmd::Aggregate { file, check } => aggregate(&load_system(&file)?, check),
        Cmd::Multiutility { file, check } => multiutility(&load_system(&file)?, check),
        Cmd::Dimension { file } => {
            let p = load_poset(&file)?;
            let realizer = p
                .order_dimension(Some(DIMENSION_BUDGET))
                .map_err(|e| e.to_string())?;
            println!("{}", realizer.size());
            Ok(CLEAN)
        }
        Cmd::Reduce { file } => {
            for (a, b) in load_poset(&file)?.covers() {
                println!("{a} < {b}");
            }
            Ok(CLEAN)
        }
        Cmd::Width { file } => {
            println!("{}", load_poset(&file)?.width());
            Ok(CLEAN)
        }
        Cmd::Decompose { file } => {
            let sys = synthesize_system(&load_poset(&file)?).map_err(|e| e.to_string())?;
            print!("{}", io::emit_system(&sys).map_err(|e| e.to_string())?);
            Ok(CLEAN)
        }
        Cmd::Dot { file, mode } => dot(&file, mode),
    }
}

fn load_system(path: &Path) -> Result<DistributedSystem, String> {
    io::parse_system(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_poset(path: &Path) -> Result<StrictPoset<String>, String> {
    match io::parse_poset(&read(path)?) {
        Ok(p) => Ok(p),
        Err(DocError::Cycle(w)) => Err(format!("{}: the pairs are cyclic: {w}", path.display())),
        Err(e) => Err(format!("{}: {e}", path.display())),
    }
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn deadlock_line(sys: &DistributedSystem, w: &CycleWitness<EventId>) -> String {
    let names: Vec<String> = w.path.iter().map(|id| sys.display_event(id)).collect();
    format!("deadlock: {}", names.join(","))
}

fn counterexample(sys: &DistributedSystem, w: &oracle::Witness<EventId>) -> ExitCode {
    println!(
        "counterexample ({}, {}): {}",
        sys.display_event(&w.x),
        sys.display_event(&w.y),
        w.detail
    );
    found()
}

fn validate(sys: &DistributedSystem) -> Result<ExitCode, String> {
    let report = sys.causal_report();
    for v in &report.structural {
        println!("{v}");
    }
    for v in &report.ordering {
        println!("{v}");
    }
    if let Err(w) = &report.closure {
        println!("{}", deadlock_line(sys, w));
    }
    if report.is_clean() {
        println!("ok");
        Ok(CLEAN)
    } else {
        Ok(found())
    }
}

fn closure(sys: &DistributedSystem) -> Result<ExitCode, String> {
    match sys.causal_closure() {
        Ok(p) => {
            for (a, b) in p.strict_pairs() {
                println!("{} -> {}", sys.display_event(&a), sys.display_event(&b));
            }
            Ok(CLEAN)
        }
        Err(w) => {
            println!("{}", deadlock_line(sys, &w));
            Ok(found())
        }
    }
}

fn quotient(sys: &DistributedSystem) -> Result<ExitCode, String> {
    match quotient_system(sys) {
        Ok(q) => {
            for class in q.classes() {
                let members: Vec<String> =
                    class.members().iter().map(|id| sys.display_event(id)).collect();
                println!("{}: {}", class.name(), members.join(" "));
            }
            for (a, b) in q.poset().covers() {
                println!("{a} -> {b}");
            }
            Ok(CLEAN)
        }
        Err(QuotientError::Cycle(w)) => {
            println!("{}", deadlock_line(sys, &w));
            Ok(found())
        }
        Err(e) => {
            println!("{e}");
            Ok(found())
        }
    }
}

fn lamport(sys: &DistributedSystem, check: bool) -> Result<ExitCode, String> {
    let clock = match lamport_clocks(sys) {
        Ok(c) => c,
        Err(e) => return repr_failure(sys, e),
    };
    if check {
        return match oracle::verify_weak_representation(sys, clock.values()) {
            Ok(()) => {
                println!("ok");
                Ok(CLEAN)
            }
            Err(w) => Ok(counterexample(sys, &w)),
        };
    }
    for id in sys.events() {
        println!(
            "{} {}",
            sys.display_event(&id),
            clock.value(&id).unwrap().to_integer()
        );
    }
    Ok(CLEAN)
}

fn vector(sys: &DistributedSystem, check: bool) -> Result<ExitCode, String> {
    let clocks = match vector_clocks(sys) {
        Ok(c) => c,
        Err(e) => return repr_failure(sys, e),
    };
    if check {
        return match oracle::verify_vector_representation(sys, &clocks) {
            Ok(()) => {
                println!("ok");
                Ok(CLEAN)
            }
            Err(w) => Ok(counterexample(sys, &w)),
        };
    }
    for id in sys.events() {
        let parts: Vec<String> = clocks
            .value(&id)
            .unwrap()
            .iter()
            .map(u64::to_string)
            .collect();
        println!("{} ({})", sys.display_event(&id), parts.join(","));
    }
    Ok(CLEAN)
}

fn aggregate(sys: &DistributedSystem, check: bool) -> Result<ExitCode, String> {
    let clocks = match build_line_representations(sys).and_then(|reps| aggregate_line_weak(sys, &reps))
    {
        Ok(c) => c,
        Err(e) => return repr_failure(sys, e),
    };
    let mut merged: BTreeMap<EventId, Rational> = BTreeMap::new();
    for clock in &clocks {
        merged.extend(clock.values().clone());
    }
    if check {
        return match oracle::verify_weak_representation(sys, &merged) {
            Ok(()) => {
                println!("ok");
                Ok(CLEAN)
            }
            Err(w) => Ok(counterexample(sys, &w)),
        };
    }
    for id in sys.events() {
        println!(
            "{} {}",
            sys.display_event(&id),
            render_rational(&merged[&id])
        );
    }
    Ok(CLEAN)
}

fn multiutility(sys: &DistributedSystem, check: bool) -> Result<ExitCode, String> {
    let built = match rp_multiutility_from_quotient(sys) {
        Ok(b) => b,
        Err(e) => return repr_failure(sys, e),
    };
    let family = &built.functions;
    if check {
        let closure = sys.causal_closure().expect("construction checked acyclicity");
        if let Err(w) = oracle::verify_rp_multiutility(&closure, family) {
            return Ok(counterexample(sys, &w));
        }
        if let Err(w) = oracle::verify_representation(sys, family) {
            return Ok(counterexample(sys, &w));
        }
        println!("ok, {} functions", family.len());
        return Ok(CLEAN);
    }
    for (l, member) in family.functions.iter().enumerate() {
        for id in sys.events() {
            println!(
                "v{} {} {}",
                l + 1,
                sys.display_event(&id),
                render_rational(&member[&id])
            );
        }
    }
    println!("realizer size: {}", family.len());
    Ok(CLEAN)
}

/// Construction errors: a deadlock is a witness (exit 1), a projection
/// failure likewise; anything else means the input does not satisfy the
/// subcommand's preconditions (exit 2).
fn repr_failure(sys: &DistributedSystem, e: ReprError) -> Result<ExitCode, String> {
    match e {
        ReprError::Cycle(w) => {
            println!("{}", deadlock_line(sys, &w));
            Ok(found())
        }
        ReprError::Quotient(q) => {
            println!("{q}");
            Ok(found())
        }
        other => Err(other.to_string()),
    }
}

fn dot(path: &Path, mode: Mode) -> Result<ExitCode, String> {
    let text = read(path)?;
    if io::sniff_poset(&text) {
        if matches!(mode, Mode::Spacetime) {
            return Err("spacetime mode needs a system document".to_string());
        }
        let p = io::parse_poset(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        print!("{}", io::poset_dot(&p));
        return Ok(CLEAN);
    }
    let sys = load_system(path)?;
    let dot_mode = match mode {
        Mode::Spacetime => DotMode::Spacetime,
        Mode::Hasse => DotMode::Hasse,
    };
    match io::system_dot(&sys, dot_mode) {
        Ok(text) => {
            print!("{text}");
            Ok(CLEAN)
        }
        Err(DocError::Cycle(w)) => {
            println!("deadlock: {w}");
            Ok(found())
        }
        Err(e) => Err(e.to_string()),
    }
}
