//! Line-oriented documents and DOT export.
//!
//! Both formats are one JSON object per line, with `#` comments and blank
//! lines allowed. A system document lists processes and then messages,
//! resolved by event label:
//!
//! ```text
//! {"process":"A","events":["a","b"]}
//! {"message":{"from":"a","to":"x"}}
//! ```
//!
//! A poset document lists elements and strict pairs, closed transitively on
//! load:
//!
//! ```text
//! {"element":"c"}
//! {"less":["c","b"]}
//! ```
//!
//! Emission is canonical: processes in system order, messages in channel
//! order, elements and covers sorted; parsing what was emitted reproduces
//! the value exactly, byte for byte in the other direction too.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::Value;
use thiserror::Error;

use crate::poset::{CycleWitness, StrictPoset};
use crate::system::{DistributedSystem, EventId, ProcessChain};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: duplicate label {label}")]
    DuplicateLabel { line: usize, label: String },
    #[error("line {line}: unknown event label {label}")]
    UnknownLabel { line: usize, label: String },
    #[error("event {0} has no label; only fully labeled systems can be written")]
    Unlabeled(EventId),
    #[error("label {0} is used twice; documents need unique labels")]
    AmbiguousLabel(String),
    #[error("the order is cyclic: {0}")]
    Cycle(CycleWitness<String>),
}

fn parse_err(line: usize, message: impl Into<String>) -> DocError {
    DocError::Parse {
        line,
        message: message.into(),
    }
}

/// The records of a document, with their 1-based line numbers.
fn records(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn single_field(line: usize, value: &Value) -> Result<(String, Value), DocError> {
    let obj = value
        .as_object()
        .ok_or_else(|| parse_err(line, "expected a JSON object"))?;
    if obj.len() != 1 {
        return Err(parse_err(line, "expected exactly one record field"));
    }
    let (k, v) = obj.iter().next().unwrap();
    Ok((k.clone(), v.clone()))
}

fn string_item(line: usize, value: &Value, what: &str) -> Result<String, DocError> {
    value
        .as_str()
        .map(str::to_string)
        .ok_or_else(|| parse_err(line, format!("{what} must be a string")))
}

/// Reads a system document. Messages may only refer to labels introduced by
/// earlier `process` records.
pub fn parse_system(text: &str) -> Result<DistributedSystem, DocError> {
    let mut sys = DistributedSystem::new();
    let mut by_label: BTreeMap<String, EventId> = BTreeMap::new();
    for (line, raw) in records(text) {
        let value: Value =
            serde_json::from_str(raw).map_err(|e| parse_err(line, e.to_string()))?;
        let obj = value
            .as_object()
            .ok_or_else(|| parse_err(line, "expected a JSON object"))?;
        if obj.contains_key("process") {
            let mut known = obj.clone();
            let id = known.remove("process").unwrap();
            let events = known
                .remove("events")
                .ok_or_else(|| parse_err(line, "process record needs an events list"))?;
            if let Some(extra) = known.keys().next() {
                return Err(parse_err(line, format!("unknown process field {extra}")));
            }
            let id = string_item(line, &id, "process")?;
            let events = events
                .as_array()
                .ok_or_else(|| parse_err(line, "events must be a list of labels"))?;
            let mut labels = Vec::new();
            for e in events {
                labels.push(string_item(line, e, "event label")?);
            }
            let chain = ProcessChain::with_labels(&id, labels.iter().map(String::as_str));
            for event in chain.events() {
                let label = event.label().unwrap().to_string();
                if by_label.insert(label.clone(), event.id().clone()).is_some() {
                    return Err(DocError::DuplicateLabel { line, label });
                }
            }
            sys.add_process(chain).map_err(|e| parse_err(line, e.to_string()))?;
            continue;
        }
        let (key, body) = single_field(line, &value)?;
        match key.as_str() {
            "message" => {
                let obj = body
                    .as_object()
                    .ok_or_else(|| parse_err(line, "message must be an object"))?;
                let mut known = obj.clone();
                let from = known
                    .remove("from")
                    .ok_or_else(|| parse_err(line, "message needs a from label"))?;
                let to = known
                    .remove("to")
                    .ok_or_else(|| parse_err(line, "message needs a to label"))?;
                if let Some(extra) = known.keys().next() {
                    return Err(parse_err(line, format!("unknown message field {extra}")));
                }
                let from = string_item(line, &from, "from")?;
                let to = string_item(line, &to, "to")?;
                let resolve = |label: &str| {
                    by_label.get(label).cloned().ok_or(DocError::UnknownLabel {
                        line,
                        label: label.to_string(),
                    })
                };
                sys.add_message(resolve(&from)?, resolve(&to)?)
                    .map_err(|e| parse_err(line, e.to_string()))?;
            }
            other => return Err(parse_err(line, format!("unknown record type {other}"))),
        }
    }
    Ok(sys)
}

/// Writes a system document in canonical form. Every event must carry a
/// unique label, since messages are stored by label.
pub fn emit_system(sys: &DistributedSystem) -> Result<String, DocError> {
    let mut by_id: BTreeMap<EventId, String> = BTreeMap::new();
    let mut seen: BTreeMap<String, EventId> = BTreeMap::new();
    for chain in sys.processes() {
        for event in chain.events() {
            let label = event
                .label()
                .ok_or_else(|| DocError::Unlabeled(event.id().clone()))?;
            if seen.insert(label.to_string(), event.id().clone()).is_some() {
                return Err(DocError::AmbiguousLabel(label.to_string()));
            }
            by_id.insert(event.id().clone(), label.to_string());
        }
    }
    let quote = |s: &str| Value::String(s.to_string()).to_string();
    let mut out = String::new();
    for chain in sys.processes() {
        let events: Vec<String> = chain
            .events()
            .iter()
            .map(|e| quote(e.label().unwrap()))
            .collect();
        out.push_str(&format!(
            "{{\"process\":{},\"events\":[{}]}}\n",
            quote(chain.id()),
            events.join(",")
        ));
    }
    for comm in sys.communications() {
        for (s, r) in comm.pair_ids() {
            out.push_str(&format!(
                "{{\"message\":{{\"from\":{},\"to\":{}}}}}\n",
                quote(&by_id[&s]),
                quote(&by_id[&r])
            ));
        }
    }
    Ok(out)
}

/// Reads a poset document and closes the listed pairs transitively. A cycle
/// among the pairs is rejected with its witness.
pub fn parse_poset(text: &str) -> Result<StrictPoset<String>, DocError> {
    let mut elements: Vec<String> = Vec::new();
    let mut pairs: Vec<(String, String)> = Vec::new();
    for (line, raw) in records(text) {
        let value: Value =
            serde_json::from_str(raw).map_err(|e| parse_err(line, e.to_string()))?;
        let (key, body) = single_field(line, &value)?;
        match key.as_str() {
            "element" => elements.push(string_item(line, &body, "element")?),
            "less" => {
                let arr = body
                    .as_array()
                    .ok_or_else(|| parse_err(line, "less must be a two-element array"))?;
                if arr.len() != 2 {
                    return Err(parse_err(line, "less must be a two-element array"));
                }
                pairs.push((
                    string_item(line, &arr[0], "less")?,
                    string_item(line, &arr[1], "less")?,
                ));
            }
            other => return Err(parse_err(line, format!("unknown record type {other}"))),
        }
    }
    StrictPoset::from_pairs(elements, pairs).map_err(DocError::Cycle)
}

/// Writes a poset document: all elements, then the covering pairs only.
pub fn emit_poset(p: &StrictPoset<String>) -> String {
    let quote = |s: &str| Value::String(s.to_string()).to_string();
    let mut out = String::new();
    for e in p.elements() {
        out.push_str(&format!("{{\"element\":{}}}\n", quote(e)));
    }
    for (a, b) in p.covers() {
        out.push_str(&format!("{{\"less\":[{},{}]}}\n", quote(&a), quote(&b)));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DotMode {
    /// One cluster per process, solid chain edges, dashed message edges.
    Spacetime,
    /// Covering edges of the causal closure only.
    Hasse,
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Renders a system to GraphViz. Spacetime mode draws the raw structure and
/// works on any system; Hasse mode needs the causal closure and fails on a
/// cycle.
pub fn system_dot(sys: &DistributedSystem, mode: DotMode) -> Result<String, DocError> {
    match mode {
        DotMode::Spacetime => Ok(spacetime_dot(sys)),
        DotMode::Hasse => {
            let closure = sys.causal_closure().map_err(|w| {
                DocError::Cycle(CycleWitness {
                    path: w.path.iter().map(|id| sys.display_event(id)).collect(),
                })
            })?;
            let mut out = String::from("digraph hasse {\n");
            for id in closure.elements() {
                out.push_str(&format!("  {};\n", dot_quote(&sys.display_event(id))));
            }
            for (a, b) in closure.covers() {
                out.push_str(&format!(
                    "  {} -> {};\n",
                    dot_quote(&sys.display_event(&a)),
                    dot_quote(&sys.display_event(&b))
                ));
            }
            out.push_str("}\n");
            Ok(out)
        }
    }
}

fn spacetime_dot(sys: &DistributedSystem) -> String {
    let mut out = String::from("digraph system {\n  rankdir=TB;\n");
    for chain in sys.processes() {
        out.push_str(&format!(
            "  subgraph cluster_{} {{\n    label={};\n",
            sanitize(chain.id()),
            dot_quote(chain.id())
        ));
        for event in chain.events() {
            out.push_str(&format!(
                "    {};\n",
                dot_quote(&sys.display_event(event.id()))
            ));
        }
        for pair in chain.events().windows(2) {
            out.push_str(&format!(
                "    {} -> {};\n",
                dot_quote(&sys.display_event(pair[0].id())),
                dot_quote(&sys.display_event(pair[1].id()))
            ));
        }
        out.push_str("  }\n");
    }
    for comm in sys.communications() {
        for (s, r) in comm.pair_ids() {
            out.push_str(&format!(
                "  {} -> {} [style=dashed];\n",
                dot_quote(&sys.display_event(&s)),
                dot_quote(&sys.display_event(&r))
            ));
        }
    }
    out.push_str("}\n");
    out
}

/// Renders a poset's covering relation.
pub fn poset_dot<T: Ord + Clone + fmt::Display>(p: &StrictPoset<T>) -> String {
    let mut out = String::from("digraph hasse {\n");
    for e in p.elements() {
        out.push_str(&format!("  {};\n", dot_quote(&e.to_string())));
    }
    for (a, b) in p.covers() {
        out.push_str(&format!(
            "  {} -> {};\n",
            dot_quote(&a.to_string()),
            dot_quote(&b.to_string())
        ));
    }
    out.push_str("}\n");
    out
}

fn sanitize(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect()
}

/// Guesses the document kind from its first record.
pub fn sniff_poset(text: &str) -> bool {
    let Some((_, raw)) = records(text).next() else {
        return false;
    };
    match serde_json::from_str::<Value>(raw) {
        Ok(value) => value
            .as_object()
            .is_some_and(|obj| obj.contains_key("element") || obj.contains_key("less")),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn system_round_trips() {
        for sys in [
            fixtures::line3(),
            fixtures::deadlock(),
            fixtures::funnel_system(),
            fixtures::crossed_messages(),
            DistributedSystem::new(),
        ] {
            let text = emit_system(&sys).unwrap();
            let back = parse_system(&text).unwrap();
            assert_eq!(back, sys);
            assert_eq!(emit_system(&back).unwrap(), text);
        }
    }

    #[test]
    fn documents_read_as_expected() {
        let text = r#"
# the three-chain line
{"process":"A","events":["a","b"]}
{"process":"X","events":["x","y"]}
{"process":"L","events":["alpha","beta"]}
{"message":{"from":"a","to":"x"}}
{"message":{"from":"b","to":"y"}}
{"message":{"from":"x","to":"beta"}}
"#;
        assert_eq!(parse_system(text).unwrap(), fixtures::line3());
    }

    #[test]
    fn bad_documents_are_rejected_with_lines() {
        let unknown = "{\"process\":\"A\",\"events\":[\"a\"]}\n{\"message\":{\"from\":\"a\",\"to\":\"z\"}}";
        assert_eq!(
            parse_system(unknown),
            Err(DocError::UnknownLabel {
                line: 2,
                label: "z".to_string()
            })
        );
        let dup = "{\"process\":\"A\",\"events\":[\"a\",\"a\"]}";
        assert_eq!(
            parse_system(dup),
            Err(DocError::DuplicateLabel {
                line: 1,
                label: "a".to_string()
            })
        );
        let extra = "{\"message\":{\"from\":\"a\",\"to\":\"b\",\"via\":\"c\"}}";
        assert!(matches!(
            parse_system(extra),
            Err(DocError::Parse { line: 1, .. })
        ));
        let stray = "{\"chain\":\"A\"}";
        assert!(matches!(
            parse_system(stray),
            Err(DocError::Parse { line: 1, .. })
        ));
        assert!(parse_system("").unwrap().processes().is_empty());
    }

    #[test]
    fn poset_round_trips_and_rejects_cycles() {
        let p = fixtures::funnel_quotient_poset();
        let text = emit_poset(&p);
        assert_eq!(parse_poset(&text).unwrap(), p);

        let cyclic = "{\"less\":[\"a\",\"b\"]}\n{\"less\":[\"b\",\"a\"]}";
        match parse_poset(cyclic) {
            Err(DocError::Cycle(w)) => assert_eq!(w.path, vec!["a", "b", "a"]),
            other => panic!("expected cycle, got {other:?}"),
        }
    }

    #[test]
    fn spacetime_dot_shows_chains_and_messages() {
        let dot = system_dot(&fixtures::deadlock(), DotMode::Spacetime).unwrap();
        assert_eq!(dot.matches("subgraph cluster_").count(), 2);
        assert_eq!(dot.matches("[style=dashed]").count(), 2);
        let chain_dot = {
            let mut sys = DistributedSystem::new();
            sys.add_process(ProcessChain::with_labels("P", ["p1", "p2", "p3"]))
                .unwrap();
            system_dot(&sys, DotMode::Spacetime).unwrap()
        };
        assert!(chain_dot.contains("\"p1\" -> \"p2\""));
        assert!(chain_dot.contains("\"p2\" -> \"p3\""));
        assert!(!chain_dot.contains("dashed"));
    }

    #[test]
    fn hasse_dot_uses_covers() {
        let dot = poset_dot(&fixtures::funnel_quotient_poset());
        assert_eq!(dot.matches(" -> ").count(), 5);
        assert_eq!(dot.matches(";\n").count(), 10);

        let sys_dot = system_dot(&fixtures::line3(), DotMode::Hasse).unwrap();
        assert!(sys_dot.contains("\"x\" -> \"beta\""));
        assert!(!sys_dot.contains("\"a\" -> \"beta\""));
        assert!(matches!(
            system_dot(&fixtures::deadlock(), DotMode::Hasse),
            Err(DocError::Cycle(_))
        ));
    }

    #[test]
    fn sniffing_tells_documents_apart() {
        assert!(sniff_poset("{\"element\":\"c\"}"));
        assert!(sniff_poset("# note\n\n{\"less\":[\"a\",\"b\"]}"));
        assert!(!sniff_poset("{\"process\":\"A\",\"events\":[]}"));
        assert!(!sniff_poset(""));
    }
}
