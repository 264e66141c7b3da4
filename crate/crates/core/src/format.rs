//! Line-oriented text format for complexes.
//!
//! ```text
//! # comment
//! vertex q1
//! vertex x a in          # labeled vertex: color and orientation
//! edge e1 q1 q2 red
//! face f1 blue e1+,e2-
//! order 0: q1,q2
//! ```
//!
//! A document with `order` lines describes a brane complex; without them it
//! is a plain colored complex.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::complex::{BraneComplex, ColoredComplex, ComplexError, Orientation, RawComplex, Violation};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{}", render_invalid(.0))]
    Invalid(Vec<(Option<usize>, Violation)>),
    #[error(transparent)]
    Complex(ComplexError),
}

fn render_invalid(v: &[(Option<usize>, Violation)]) -> String {
    v.iter()
        .map(|(l, x)| match l {
            Some(l) => format!("line {l}: {x}"),
            None => x.to_string(),
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Parsed sections with source lines of every cell.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ComplexDocument {
    pub raw: RawComplex,
    pub orders: Vec<(String, Vec<String>)>,
    lines: HashMap<String, usize>,
}

/// Result of reading a document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parsed {
    Brane(BraneComplex),
    Plain(ColoredComplex),
}

impl Parsed {
    pub fn complex(&self) -> &ColoredComplex {
        match self {
            Parsed::Brane(b) => b.complex(),
            Parsed::Plain(c) => c,
        }
    }
}

fn column_of(line: &str, token: &str) -> usize {
    line.find(token).map_or(1, |c| c + 1)
}

pub fn parse_document(text: &str) -> Result<ComplexDocument, FormatError> {
    let mut doc = ComplexDocument::default();
    for (i, full) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = full.split('#').next().unwrap();
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        let err = |token: &str, message: String| FormatError::Syntax {
            line: line_no,
            column: column_of(full, token),
            message,
        };
        let expect = |n: &[usize], what: &str| -> Result<(), FormatError> {
            if n.contains(&toks.len()) {
                Ok(())
            } else {
                Err(err(toks[0], format!("`{}` expects {what}", toks[0])))
            }
        };
        match toks[0] {
            "vertex" => {
                expect(&[2, 4], "an id and an optional color and orientation")?;
                if toks.len() == 4 {
                    let o = Orientation::parse(toks[3])
                        .ok_or_else(|| err(toks[3], format!("orientation must be `in` or `out`, found `{}`", toks[3])))?;
                    doc.raw = std::mem::take(&mut doc.raw).labeled_vertex(toks[1], toks[2], o);
                } else {
                    doc.raw = std::mem::take(&mut doc.raw).vertex(toks[1]);
                }
                doc.lines.entry(toks[1].to_string()).or_insert(line_no);
            }
            "edge" => {
                expect(&[5], "an id, a tail, a head and a color")?;
                doc.raw = std::mem::take(&mut doc.raw).edge(toks[1], toks[2], toks[3], toks[4]);
                doc.lines.entry(toks[1].to_string()).or_insert(line_no);
            }
            "face" => {
                expect(&[4], "an id, a color and a boundary list")?;
                let mut bd = Vec::new();
                for s in toks[3].split(',') {
                    let (e, fwd) = if let Some(e) = s.strip_suffix('+') {
                        (e, true)
                    } else if let Some(e) = s.strip_suffix('-') {
                        (e, false)
                    } else {
                        return Err(err(s, format!("boundary entry `{s}` must end in `+` or `-`")));
                    };
                    if e.is_empty() {
                        return Err(err(s, "empty edge id in boundary".into()));
                    }
                    bd.push((e, fwd));
                }
                doc.raw = std::mem::take(&mut doc.raw).face(toks[1], toks[2], &bd);
                doc.lines.entry(toks[1].to_string()).or_insert(line_no);
            }
            "order" => {
                let rest = line.trim_start().strip_prefix("order").unwrap();
                let (comp, list) = rest
                    .split_once(':')
                    .ok_or_else(|| err(toks[0], "`order` expects `<component>: v1,v2,...`".into()))?;
                let vs: Vec<String> = list
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect();
                if vs.is_empty() {
                    return Err(err(toks[0], "empty cyclic order".into()));
                }
                doc.orders.push((comp.trim().to_string(), vs));
            }
            other => return Err(err(other, format!("unknown keyword `{other}`"))),
        }
    }
    Ok(doc)
}

impl ComplexDocument {
    pub fn line_of(&self, id: &str) -> Option<usize> {
        self.lines.get(id).copied()
    }

    /// Validates the cells and, when orders are present, the brane property.
    pub fn build(&self) -> Result<Parsed, FormatError> {
        let c = match self.raw.clone().validate() {
            Ok(c) => c,
            Err(ComplexError::Invalid(v)) => {
                return Err(FormatError::Invalid(
                    v.into_iter().map(|x| (self.line_of(x.cell()), x)).collect(),
                ))
            }
            Err(e) => return Err(FormatError::Complex(e)),
        };
        if self.orders.is_empty() {
            return Ok(Parsed::Plain(c));
        }
        let orders: Vec<Vec<&str>> = self
            .orders
            .iter()
            .map(|(_, o)| o.iter().map(String::as_str).collect())
            .collect();
        BraneComplex::new(c, &orders)
            .map(Parsed::Brane)
            .map_err(FormatError::Complex)
    }
}

/// Parses and validates in one step.
pub fn parse_complex(text: &str) -> Result<Parsed, FormatError> {
    parse_document(text)?.build()
}

pub fn serialize_complex(c: &ColoredComplex) -> String {
    let mut s = String::new();
    for v in c.vertices() {
        match &v.label {
            Some(l) => {
                let _ = writeln!(s, "vertex {} {} {}", v.id, l.color, l.orientation.as_str());
            }
            None => {
                let _ = writeln!(s, "vertex {}", v.id);
            }
        }
    }
    for e in c.edges() {
        let _ = writeln!(
            s,
            "edge {} {} {} {}",
            e.id,
            c.vertices()[e.tail].id,
            c.vertices()[e.head].id,
            e.color
        );
    }
    for f in c.faces() {
        let bd: Vec<String> = f
            .boundary
            .iter()
            .map(|x| format!("{}{}", c.edges()[x.edge].id, if x.forward { '+' } else { '-' }))
            .collect();
        let _ = writeln!(s, "face {} {} {}", f.id, f.color, bd.join(","));
    }
    s
}

pub fn serialize_brane(b: &BraneComplex) -> String {
    let mut s = serialize_complex(b.complex());
    for (i, o) in b.orders().iter().enumerate() {
        let ids: Vec<&str> = o.iter().map(|&v| b.complex().vertices()[v].id.as_str()).collect();
        let _ = writeln!(s, "order {}: {}", i, ids.join(","));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{sphere_complex, theta_graph};

    const BIGON_SPHERE: &str = "\
vertex q1
vertex q2
edge e1 q1 q2 a
edge e2 q1 q2 b
face f1 c e1+,e2-
face f2 d e2+,e1-
order 0: q1,q2
";

    #[test]
    fn bigon_sphere_document() {
        match parse_complex(BIGON_SPHERE).unwrap() {
            Parsed::Brane(b) => assert_eq!(b.complex().cell_counts(), (2, 2, 2)),
            Parsed::Plain(_) => panic!("orders were given"),
        }
    }

    #[test]
    fn loop_edge_reports_its_line() {
        let text = "vertex q1\nvertex q2\nedge e0 q1 q2 blue\nedge e1 q1 q1 red\n";
        let err = parse_complex(text).unwrap_err();
        assert_eq!(
            err,
            FormatError::Invalid(vec![(Some(4), Violation::LoopEdge("e1".into()))])
        );
        assert!(err.to_string().starts_with("line 4:"));
    }

    #[test]
    fn missing_order_gives_plain_complex() {
        let text: String = BIGON_SPHERE.lines().filter(|l| !l.starts_with("order")).collect::<Vec<_>>().join("\n");
        assert!(matches!(parse_complex(&text).unwrap(), Parsed::Plain(_)));
    }

    #[test]
    fn syntax_errors_have_positions() {
        let err = parse_complex("vertex q1\n  face f1 c e1*\n").unwrap_err();
        assert_eq!(
            err,
            FormatError::Syntax {
                line: 2,
                column: 13,
                message: "boundary entry `e1*` must end in `+` or `-`".into()
            }
        );
        assert!(matches!(parse_complex("vertx q1").unwrap_err(), FormatError::Syntax { line: 1, column: 1, .. }));
    }

    #[test]
    fn round_trips() {
        let s = sphere_complex(4);
        let back = parse_complex(&serialize_brane(&s)).unwrap();
        match back {
            Parsed::Brane(b) => assert_eq!(b.canonical_key(), s.canonical_key()),
            Parsed::Plain(_) => panic!(),
        }
        let t = theta_graph();
        let back = parse_complex(&serialize_complex(&t)).unwrap();
        assert_eq!(back.complex(), &t);
    }
}
