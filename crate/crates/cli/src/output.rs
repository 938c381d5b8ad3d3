//! Rendering: the JSON output record, the candidate-matrix view, and DOT
//! export of a net.

use serde::{Deserialize, Serialize};

use prooflink_core::frame::{CandidateMatrix, Linking, ProofFrame};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct OutputRecord {
    pub sequent: String,
    pub proofs: Vec<ProofEntry>,
    pub count: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ProofEntry {
    pub linking: Vec<(String, String)>,
    pub weight: Option<u64>,
    pub valid: bool,
}

/// Candidate matrix in the row-negative/column-positive layout, one block
/// per atom name; `x` marks an admissible cell.
pub fn render_matrix(frame: &ProofFrame, cands: &CandidateMatrix) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    for block in &cands.blocks {
        let col_tags: Vec<String> = block.pos.iter().map(|o| frame.atom_tag(o.id)).collect();
        let row_tags: Vec<String> = block.neg.iter().map(|o| frame.atom_tag(o.id)).collect();
        let row_width = row_tags.iter().map(|t| t.len()).max().unwrap_or(0).max(1);
        let cell_width = col_tags.iter().map(|t| t.len()).max().unwrap_or(1);
        write!(out, "{:row_width$}", "").unwrap();
        for tag in &col_tags {
            write!(out, " {tag:>cell_width$}").unwrap();
        }
        out.push('\n');
        for (r, tag) in row_tags.iter().enumerate() {
            write!(out, "{tag:>row_width$}").unwrap();
            for c in 0..block.pos.len() {
                let mark = if block.get(r, c) { "x" } else { "." };
                write!(out, " {mark:>cell_width$}").unwrap();
            }
            out.push('\n');
        }
    }
    out
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// DOT text for a net: solid structural edges, dashed axiom edges, the
/// output vertex double-circled. Deterministic node order.
pub fn export_dot(frame: &ProofFrame, linking: &Linking, name: &str) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    writeln!(out, "digraph {name} {{").unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    for id in 1..=frame.vertex_count {
        let label = dot_escape(&format!("{}: {}", id, frame.label(id)));
        if id == frame.output {
            writeln!(out, "  v{id} [label=\"{label}\", peripheries=2];").unwrap();
        } else {
            writeln!(out, "  v{id} [label=\"{label}\"];").unwrap();
        }
    }
    for &(a, b) in &frame.ess_edges {
        writeln!(out, "  v{a} -> v{b};").unwrap();
    }
    for link in linking.iter() {
        writeln!(out, "  v{} -> v{} [style=dashed];", link.neg, link.pos).unwrap();
    }
    writeln!(out, "}}").unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use prooflink_core::formula::parse_sequent;
    use prooflink_core::frame::unfold;

    #[test]
    fn output_record_json_roundtrip() {
        let record = OutputRecord {
            sequent: "s |- s".to_string(),
            proofs: vec![ProofEntry {
                linking: vec![("s1".to_string(), "s2".to_string())],
                weight: Some(1),
                valid: true,
            }],
            count: 1,
        };
        let json = serde_json::to_string(&record).unwrap();
        let back: OutputRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, record);
    }

    #[test]
    fn dot_for_axiom_net() {
        let frame = unfold(&parse_sequent("s |- s").unwrap());
        let linking = Linking::from_pairs([(1, 2)]);
        let text = export_dot(&frame, &linking, "net1");
        assert_eq!(text.matches("[label=").count(), 2);
        assert_eq!(text.matches("style=dashed").count(), 1);
        assert_eq!(text, export_dot(&frame, &linking, "net1"));
    }

    #[test]
    fn dot_escapes_backslashes_in_labels() {
        let frame = unfold(&parse_sequent("np, np\\s |- s").unwrap());
        let text = export_dot(&frame, &Linking::new(), "g");
        assert!(text.contains("np\\\\s"));
    }
}
