//! Line-oriented text format for quivers.
//!
//! ```text
//! # comments run to the end of the line
//! quiver chain
//! vertex 1 2 3
//! arrow a: 1 -> 2
//! arrow b: 2 -> 3
//! rel a b          # traverse a, then b; the composite is zero
//! ```
//!
//! Parsing yields a raw [`Quiver`]; gentleness is checked separately so that
//! a validator can report every violation at once.

use std::collections::HashSet;

use crate::error::DslError;
use crate::quiver::{Arrow, Quiver, QuiverData};

fn is_ident(s: &str) -> bool {
    !s.is_empty()
        && s
            .chars()
            .all(|c| c.is_alphanumeric() || c == '_' || c == '\'' || c == '.')
}

struct Line<'a> {
    number: usize,
    text: &'a str,
}

impl Line<'_> {
    /// Tokens with their 1-based columns; `:` and `->` stand alone.
    fn tokens(&self) -> Vec<(usize, &str)> {
        let t = self.text;
        let mut out = Vec::new();
        let mut start = None;
        let mut iter = t.char_indices().peekable();
        while let Some((i, c)) = iter.next() {
            let arrow = c == '-' && iter.peek().is_some_and(|&(_, n)| n == '>');
            if c.is_whitespace() || c == ':' || arrow {
                if let Some(s) = start.take() {
                    out.push((s, &t[s..i]));
                }
                if c == ':' {
                    out.push((i, ":"));
                } else if arrow {
                    iter.next();
                    out.push((i, "->"));
                }
            } else if start.is_none() {
                start = Some(i);
            }
        }
        if let Some(s) = start {
            out.push((s, &t[s..]));
        }
        out.into_iter().map(|(i, tok)| (t[..i].chars().count() + 1, tok)).collect()
    }

    fn parse_err(&self, column: usize, message: impl Into<String>) -> DslError {
        DslError::Parse {
            line: self.number,
            column,
            message: message.into(),
        }
    }

    fn semantic(&self, column: usize, message: impl Into<String>) -> DslError {
        DslError::Semantic {
            line: self.number,
            column,
            message: message.into(),
        }
    }
}

pub fn parse_quiver(text: &str) -> Result<Quiver, DslError> {
    let mut name: Option<String> = None;
    let mut vertices: Vec<String> = Vec::new();
    let mut arrows: Vec<Arrow> = Vec::new();
    let mut relations: Vec<[String; 2]> = Vec::new();
    let mut last_line = 1;

    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let line = Line {
            number: i + 1,
            text: body,
        };
        last_line = i + 1;
        let toks = line.tokens();
        let Some(&(col, keyword)) = toks.first() else {
            continue;
        };
        let ident = |(c, t): (usize, &str)| -> Result<String, DslError> {
            if is_ident(t) {
                Ok(t.to_string())
            } else {
                Err(line.parse_err(c, format!("`{t}` is not an identifier")))
            }
        };
        match keyword {
            "quiver" => {
                if toks.len() != 2 {
                    return Err(line.parse_err(col, "expected `quiver <name>`"));
                }
                if name.is_some() {
                    return Err(line.semantic(col, "quiver name given twice"));
                }
                name = Some(ident(toks[1])?);
            }
            "vertex" | "vertices" => {
                if toks.len() < 2 {
                    return Err(line.parse_err(col, "expected at least one vertex"));
                }
                for &(c, t) in &toks[1..] {
                    let v = ident((c, t))?;
                    if vertices.contains(&v) {
                        return Err(line.semantic(c, format!("duplicate vertex `{v}`")));
                    }
                    vertices.push(v);
                }
            }
            "arrow" => {
                // arrow <label> : <src> -> <tgt>
                let shape: Vec<&str> = toks.iter().map(|t| t.1).collect();
                if toks.len() != 6 || shape[2] != ":" || shape[4] != "->" {
                    let c = toks.get(1).map_or(col, |t| t.0);
                    return Err(line.parse_err(c, "expected `arrow <label>: <source> -> <target>`"));
                }
                let label = ident(toks[1])?;
                if arrows.iter().any(|a| a.label == label) {
                    return Err(line.semantic(toks[1].0, format!("duplicate arrow `{label}`")));
                }
                for &(c, t) in [toks[3], toks[5]].iter() {
                    if !vertices.iter().any(|v| v == t) {
                        return Err(line.semantic(c, format!("unknown vertex `{t}`")));
                    }
                }
                arrows.push(Arrow {
                    label,
                    source: toks[3].1.to_string(),
                    target: toks[5].1.to_string(),
                });
            }
            "rel" => {
                if toks.len() != 3 {
                    return Err(line.parse_err(col, "expected `rel <first> <second>`"));
                }
                let mut ends = Vec::new();
                for &(c, t) in &toks[1..] {
                    let a = arrows
                        .iter()
                        .find(|a| a.label == t)
                        .ok_or_else(|| line.semantic(c, format!("unknown arrow `{t}`")))?;
                    ends.push((a.source.clone(), a.target.clone()));
                }
                if ends[0].1 != ends[1].0 {
                    return Err(line.semantic(
                        toks[2].0,
                        format!("`{}` does not start where `{}` ends", toks[2].1, toks[1].1),
                    ));
                }
                let pair = [toks[1].1.to_string(), toks[2].1.to_string()];
                if relations.contains(&pair) {
                    return Err(line.semantic(col, "duplicate relation"));
                }
                relations.push(pair);
            }
            other => return Err(line.parse_err(col, format!("unknown keyword `{other}`"))),
        }
    }
    let name = name.ok_or(DslError::Semantic {
        line: 1,
        column: 1,
        message: "missing `quiver <name>` line".into(),
    })?;
    Quiver::new(QuiverData {
        name,
        vertices,
        arrows,
        relations,
    })
    .map_err(|e| DslError::Semantic {
        line: last_line,
        column: 1,
        message: e.to_string(),
    })
}

/// Text form accepted by [`parse_quiver`].
pub fn emit_quiver(q: &Quiver) -> String {
    let data = q.data();
    let mut out = format!("quiver {}\nvertex {}\n", data.name, data.vertices.join(" "));
    for a in &data.arrows {
        out.push_str(&format!("arrow {}: {} -> {}\n", a.label, a.source, a.target));
    }
    let mut seen = HashSet::new();
    for [a, b] in &data.relations {
        if seen.insert((a, b)) {
            out.push_str(&format!("rel {a} {b}\n"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const CHAIN: &str = "quiver chain\nvertex 1 2 3\narrow a: 1 -> 2\narrow b:2->3 # tight\nrel a b\n";

    #[test]
    fn parses_and_round_trips() {
        let q = parse_quiver(CHAIN).unwrap();
        assert_eq!(q.vertex_count(), 3);
        assert!(q.is_relation(0, 1));
        let again = parse_quiver(&emit_quiver(&q)).unwrap();
        assert_eq!(again, q);
    }

    #[test]
    fn positions_in_errors() {
        let err = parse_quiver("quiver x\nvertex 1 2\narrow a: 1 -> 7\n").unwrap_err();
        assert_eq!(
            err,
            DslError::Semantic {
                line: 3,
                column: 15,
                message: "unknown vertex `7`".into()
            }
        );
        let err = parse_quiver("quiver x\nvertex 1\n  edge a\n").unwrap_err();
        assert!(matches!(err, DslError::Parse { line: 3, column: 3, .. }));
    }

    #[test]
    fn relation_must_compose() {
        let text = "quiver x\nvertex 1 2 3\narrow a: 1 -> 2\narrow b: 2 -> 3\nrel b a\n";
        assert!(matches!(parse_quiver(text), Err(DslError::Semantic { line: 5, .. })));
    }
}
