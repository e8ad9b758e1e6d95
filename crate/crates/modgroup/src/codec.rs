//! JSON and DOT serialization.
//!
//! The JSON form is `{"n": int, "alpha": [[v,w],...], "beta": [[v,w],...],
//! "root": int|null}` with pairs sorted ascending and each a-edge listed once
//! with v ≤ w. Encoding a graph always produces that canonical form, so
//! decode-encode round-trips are byte-exact.
//!
//! The DOT form writes one statement per line: a node line per vertex (the
//! root with a double circle), a-edges with `dir=none`, b-edges as plain
//! directed edges. [`from_dot`] reads exactly this dialect back.

use crate::graph::ModularGraph;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: u32,
    alpha: Vec<(u32, u32)>,
    beta: Vec<(u32, u32)>,
    root: Option<u32>,
}

pub fn to_json(g: &ModularGraph) -> String {
    let doc = GraphJson {
        n: g.n(),
        alpha: g.alpha_pairs(),
        beta: g.beta_pairs(),
        root: g.root(),
    };
    serde_json::to_string(&doc).expect("graph JSON serialization cannot fail")
}

pub fn from_json(s: &str) -> Result<ModularGraph> {
    let doc: GraphJson = serde_json::from_str(s)?;
    ModularGraph::from_parts(doc.n, &doc.alpha, &doc.beta, doc.root)
}

pub fn to_dot(g: &ModularGraph) -> String {
    let mut out = String::from("digraph modular {\n");
    for v in g.vertices() {
        let shape = if g.root() == Some(v) {
            "doublecircle"
        } else {
            "circle"
        };
        out.push_str(&format!("  {v} [shape={shape}];\n"));
    }
    for (v, w) in g.alpha_pairs() {
        out.push_str(&format!("  {v} -> {w} [label=a, dir=none];\n"));
    }
    for (v, w) in g.beta_pairs() {
        out.push_str(&format!("  {v} -> {w} [label=b];\n"));
    }
    out.push_str("}\n");
    out
}

pub fn from_dot(s: &str) -> Result<ModularGraph> {
    let bad = |line: &str| Error::Malformed(format!("unrecognized DOT line: {line:?}"));
    let mut n = 0u32;
    let mut root = None;
    let mut alpha = Vec::new();
    let mut beta = Vec::new();
    for raw in s.lines() {
        let line = raw.trim();
        if line.is_empty() || line == "}" || line.starts_with("digraph") {
            continue;
        }
        let line = line.strip_suffix(';').ok_or_else(|| bad(raw))?;
        let (head, attrs) = match line.split_once('[') {
            Some((h, a)) => (h.trim(), a.trim_end_matches(']').trim()),
            None => (line, ""),
        };
        if let Some((from, to)) = head.split_once("->") {
            let v: u32 = from.trim().parse().map_err(|_| bad(raw))?;
            let w: u32 = to.trim().parse().map_err(|_| bad(raw))?;
            let fields: Vec<&str> = attrs.split(',').map(str::trim).collect();
            if fields.contains(&"label=a") && fields.contains(&"dir=none") {
                alpha.push((v, w));
            } else if fields.contains(&"label=b") {
                beta.push((v, w));
            } else {
                return Err(bad(raw));
            }
        } else {
            let v: u32 = head.trim().parse().map_err(|_| bad(raw))?;
            match attrs {
                "shape=doublecircle" => {
                    if root.replace(v).is_some() {
                        return Err(Error::Malformed("two root vertices in DOT input".into()));
                    }
                }
                "shape=circle" => {}
                _ => return Err(bad(raw)),
            }
            n += 1;
        }
    }
    ModularGraph::from_parts(n, &alpha, &beta, root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{delta_1, delta_2, delta_3, delta_4};

    fn k_graph() -> ModularGraph {
        ModularGraph::from_parts(
            6,
            &[(1, 4), (3, 5), (2, 6)],
            &[(1, 2), (2, 3), (3, 1), (4, 5), (6, 6)],
            Some(1),
        )
        .unwrap()
    }

    #[test]
    fn json_format_is_stable() {
        assert_eq!(
            to_json(&delta_1()),
            r#"{"n":1,"alpha":[[1,1]],"beta":[[1,1]],"root":null}"#
        );
        assert_eq!(
            to_json(&delta_2().with_root(Some(2)).unwrap()),
            r#"{"n":2,"alpha":[[1,2]],"beta":[[1,2]],"root":2}"#
        );
    }

    #[test]
    fn json_roundtrip() {
        for g in [
            delta_1(),
            delta_2(),
            delta_3(),
            delta_4(),
            k_graph(),
            k_graph().with_root(None).unwrap(),
        ] {
            let s = to_json(&g);
            let back = from_json(&s).unwrap();
            assert_eq!(back, g);
            assert_eq!(to_json(&back), s);
        }
    }

    #[test]
    fn json_rejects_malformed() {
        assert!(from_json(r#"{"n":2,"alpha":[],"beta":[[1,2],[2,1]],"root":null}"#).is_err());
        assert!(from_json("not json at all").is_err());
        assert!(from_json(r#"{"n":0,"alpha":[],"beta":[],"root":null}"#).is_err());
    }

    #[test]
    fn dot_output_shape() {
        let dot = to_dot(&delta_2().with_root(Some(1)).unwrap());
        let expected = "digraph modular {\n  1 [shape=doublecircle];\n  2 [shape=circle];\n  1 -> 2 [label=a, dir=none];\n  1 -> 2 [label=b];\n}\n";
        assert_eq!(dot, expected);
    }

    #[test]
    fn dot_roundtrip() {
        for g in [delta_1(), delta_3(), delta_4(), k_graph()] {
            let back = from_dot(&to_dot(&g)).unwrap();
            assert_eq!(back, g);
        }
    }

    #[test]
    fn dot_rejects_garbage() {
        assert!(from_dot("digraph modular {\n  1 -- 2;\n}\n").is_err());
        assert!(from_dot("digraph modular {\n  1 [shape=circle]\n}\n").is_err());
    }
}
