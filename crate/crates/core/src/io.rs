//! Digraph JSON files and Graphviz export.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::digraph::{Digraph, NamedState, PairState};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum StateTag {
    None,
    Ordinary,
    SpecialToA,
    SpecialToB,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairEntry {
    a: String,
    b: String,
    state: StateTag,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DigraphFile {
    vertices: Vec<String>,
    #[serde(default)]
    pairs: Vec<PairEntry>,
}

fn from_file(file: DigraphFile) -> Result<Digraph> {
    let mut g = Digraph::new(file.vertices)?;
    let mut seen = std::collections::HashSet::new();
    for p in &file.pairs {
        let (a, b) = (g.vertex(&p.a)?, g.vertex(&p.b)?);
        if !seen.insert((a.min(b), a.max(b))) {
            return Err(Error::InvalidInput(format!("pair {{{}, {}}} listed twice", p.a, p.b)));
        }
        let state = match p.state {
            StateTag::None => NamedState::None,
            StateTag::Ordinary => NamedState::Ordinary,
            StateTag::SpecialToA => NamedState::SpecialToA,
            StateTag::SpecialToB => NamedState::SpecialToB,
        };
        g.set_state_by_name(&p.a, &p.b, state)?;
    }
    Ok(g)
}

fn to_file(g: &Digraph) -> DigraphFile {
    let pairs = g
        .pairs()
        .map(|(a, b, s)| PairEntry {
            a: g.name(a).to_string(),
            b: g.name(b).to_string(),
            state: match s {
                PairState::None => StateTag::None,
                PairState::Ordinary => StateTag::Ordinary,
                PairState::SpecialToward(h) if h == a => StateTag::SpecialToA,
                PairState::SpecialToward(_) => StateTag::SpecialToB,
            },
        })
        .collect();
    DigraphFile {
        vertices: g.names().to_vec(),
        pairs,
    }
}

pub fn parse_digraph(text: &str) -> Result<Digraph> {
    let file: DigraphFile =
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("malformed digraph JSON: {e}")))?;
    from_file(file)
}

pub fn digraph_from_value(value: Value) -> Result<Digraph> {
    let file: DigraphFile =
        serde_json::from_value(value).map_err(|e| Error::InvalidInput(format!("malformed digraph JSON: {e}")))?;
    from_file(file)
}

pub fn digraph_to_value(g: &Digraph) -> Value {
    serde_json::to_value(to_file(g)).expect("digraph file serializes")
}

pub fn digraph_to_json(g: &Digraph) -> String {
    serde_json::to_string_pretty(&to_file(g)).expect("digraph file serializes")
}

pub fn read_digraph(path: &Path) -> Result<Digraph> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    parse_digraph(&text)
}

fn quote(id: &str) -> String {
    format!("\"{}\"", id.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz rendering: ordinary pairs as undirected edges, special edges as
/// arrows into their head, special vertices filled black.
pub fn to_dot(g: &Digraph) -> String {
    let mut out = String::from("digraph G {\n  node [shape=circle];\n");
    for v in 0..g.len() {
        let name = quote(g.name(v));
        if g.is_special_vertex(v) {
            let _ = writeln!(out, "  {name} [style=filled, fillcolor=black, fontcolor=white];");
        } else {
            let _ = writeln!(out, "  {name};");
        }
    }
    for (a, b, s) in g.pairs() {
        match s {
            PairState::Ordinary => {
                let _ = writeln!(out, "  {} -> {} [dir=none];", quote(g.name(a)), quote(g.name(b)));
            }
            PairState::SpecialToward(h) => {
                let t = if h == a { b } else { a };
                let _ = writeln!(out, "  {} -> {};", quote(g.name(t)), quote(g.name(h)));
            }
            PairState::None => {}
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_round_trips() {
        let text = r#"{"vertices":["x","y","z"],"pairs":[
            {"a":"z","b":"x","state":"special_to_b"},
            {"a":"x","b":"y","state":"special_to_a"}]}"#;
        let g = parse_digraph(text).unwrap();
        assert_eq!(g.state(0, 2), PairState::SpecialToward(0));
        assert_eq!(g.state(0, 1), PairState::SpecialToward(0));
        assert_eq!(parse_digraph(&digraph_to_json(&g)).unwrap(), g);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_digraph("{").is_err());
        assert!(parse_digraph(r#"{"vertices":["a","a"]}"#).is_err());
        assert!(parse_digraph(r#"{"vertices":["a"],"pairs":[{"a":"a","b":"b","state":"ordinary"}]}"#).is_err());
        assert!(parse_digraph(r#"{"vertices":["a"],"pairs":[{"a":"a","b":"a","state":"ordinary"}]}"#).is_err());
        let twice = r#"{"vertices":["a","b"],"pairs":[
            {"a":"a","b":"b","state":"ordinary"},{"a":"b","b":"a","state":"special_to_a"}]}"#;
        assert!(parse_digraph(twice).is_err());
        assert!(parse_digraph(r#"{"vertices":["a","b"],"pairs":[{"a":"a","b":"b","state":"both"}]}"#).is_err());
    }

    #[test]
    fn dot_marks_special_vertices() {
        let g = Digraph::new(["u", "w", "t"]).unwrap().with_special(0, 1).with_ordinary(0, 2);
        let dot = to_dot(&g);
        assert!(dot.contains("\"w\" [style=filled"));
        assert!(dot.contains("\"u\" -> \"w\";"));
        assert!(dot.contains("\"u\" -> \"t\" [dir=none];"));
    }
}
