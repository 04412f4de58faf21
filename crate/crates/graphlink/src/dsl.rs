//! The line-oriented diagram DSL.
//!
//! One declaration per line, `#` starts a comment, blank lines are skipped,
//! LF and CRLF both accepted:
//!
//! ```text
//! vertex <id>
//! edge <id> <v> <w> <weight_at_v> <weight_at_w>
//! arrow <id> <v> <weight> [m=<int>]
//! stub <id> <v> <weight>
//! ```
//!
//! Vertices must be declared before use; ids are unique across all kinds.
//! Integers are arbitrary precision. An arrow without `m=` defaults to
//! multiplicity 0.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use graphlink_core::{Arrow, InternalEdge, MultiplicityAssignment, SpliceDiagram, Stub};

/// A parsed diagram document: the diagram itself (arrows carry the file's
/// default multiplicities) and the source position of every element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramDocument {
    pub diagram: SpliceDiagram,
    /// (line, column) of each declared element, keyed by id.
    pub source_positions: BTreeMap<String, (usize, usize)>,
}

impl DiagramDocument {
    pub fn default_multiplicities(&self) -> MultiplicityAssignment {
        MultiplicityAssignment::of(&self.diagram)
    }
}

/// A parse failure, at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch == '#' {
            break;
        }
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Token { text: &line[s..i], column: s + 1 });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        let end = line.find('#').unwrap_or(line.len());
        out.push(Token { text: line[s..end].trim_end(), column: s + 1 });
    }
    out
}

fn parse_int(tok: &Token<'_>, line: usize) -> Result<BigInt, ParseError> {
    tok.text.parse::<BigInt>().map_err(|_| ParseError {
        line,
        column: tok.column,
        message: format!("expected an integer, found `{}`", tok.text),
    })
}

fn parse_weight(tok: &Token<'_>, line: usize) -> Result<BigInt, ParseError> {
    let w = parse_int(tok, line)?;
    if w.is_zero() {
        return Err(ParseError {
            line,
            column: tok.column,
            message: "weights must be nonzero".into(),
        });
    }
    Ok(w)
}

/// Parses a document. The resulting diagram is validated (non-strict); a
/// diagram the validator rejects is never returned.
pub fn parse(text: &str) -> Result<DiagramDocument, ParseError> {
    let doc = parse_raw(text)?;
    if let Some(violation) = doc.diagram.validate(false).into_iter().next() {
        return Err(ParseError { line: 1, column: 1, message: violation.to_string() });
    }
    Ok(doc)
}

/// Grammar-only parse: declarations are checked line by line but the final
/// structural validation is skipped, so `validate` can report violations as
/// data instead of refusing the file.
pub fn parse_raw(text: &str) -> Result<DiagramDocument, ParseError> {
    let mut vertices: Vec<String> = Vec::new();
    let mut edges: Vec<InternalEdge> = Vec::new();
    let mut arrows: Vec<Arrow> = Vec::new();
    let mut stubs: Vec<Stub> = Vec::new();
    let mut positions: BTreeMap<String, (usize, usize)> = BTreeMap::new();

    for (lineno, raw_line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw_line.strip_suffix('\r').unwrap_or(raw_line);
        let tokens = tokenize(line);
        if tokens.is_empty() {
            continue;
        }
        let keyword = &tokens[0];
        let args = &tokens[1..];

        let expect_args = |want: usize, usage: &str| -> Result<(), ParseError> {
            if args.len() == want {
                Ok(())
            } else {
                Err(ParseError {
                    line: lineno,
                    column: keyword.column,
                    message: format!("usage: {usage}"),
                })
            }
        };
        let declare = |id: &Token<'_>,
                       positions: &mut BTreeMap<String, (usize, usize)>|
         -> Result<String, ParseError> {
            if positions.contains_key(id.text) {
                return Err(ParseError {
                    line: lineno,
                    column: id.column,
                    message: format!("duplicate id `{}`", id.text),
                });
            }
            positions.insert(id.text.to_string(), (lineno, id.column));
            Ok(id.text.to_string())
        };
        let vertex_ref = |tok: &Token<'_>, vertices: &[String]| -> Result<String, ParseError> {
            if vertices.iter().any(|v| v == tok.text) {
                Ok(tok.text.to_string())
            } else {
                Err(ParseError {
                    line: lineno,
                    column: tok.column,
                    message: format!("undeclared vertex `{}`", tok.text),
                })
            }
        };

        match keyword.text {
            "vertex" => {
                expect_args(1, "vertex <id>")?;
                let id = declare(&args[0], &mut positions)?;
                vertices.push(id);
            }
            "edge" => {
                expect_args(5, "edge <id> <v> <w> <weight_at_v> <weight_at_w>")?;
                let id = declare(&args[0], &mut positions)?;
                let v = vertex_ref(&args[1], &vertices)?;
                let w = vertex_ref(&args[2], &vertices)?;
                let wv = parse_weight(&args[3], lineno)?;
                let ww = parse_weight(&args[4], lineno)?;
                if v == w {
                    return Err(ParseError {
                        line: lineno,
                        column: args[2].column,
                        message: "an edge must join two distinct vertices".into(),
                    });
                }
                edges.push(InternalEdge { id, ends: (v, w), weights: (wv, ww) });
            }
            "arrow" => {
                if args.len() != 3 && args.len() != 4 {
                    return Err(ParseError {
                        line: lineno,
                        column: keyword.column,
                        message: "usage: arrow <id> <v> <weight> [m=<int>]".into(),
                    });
                }
                let id = declare(&args[0], &mut positions)?;
                let base = vertex_ref(&args[1], &vertices)?;
                let weight = parse_weight(&args[2], lineno)?;
                let multiplicity = if let Some(mtok) = args.get(3) {
                    let Some(value) = mtok.text.strip_prefix("m=") else {
                        return Err(ParseError {
                            line: lineno,
                            column: mtok.column,
                            message: format!("expected m=<int>, found `{}`", mtok.text),
                        });
                    };
                    parse_int(&Token { text: value, column: mtok.column + 2 }, lineno)?
                } else {
                    BigInt::zero()
                };
                arrows.push(Arrow { id, base, weight, multiplicity });
            }
            "stub" => {
                expect_args(3, "stub <id> <v> <weight>")?;
                let id = declare(&args[0], &mut positions)?;
                let base = vertex_ref(&args[1], &vertices)?;
                let weight = parse_weight(&args[2], lineno)?;
                stubs.push(Stub { id, base, weight });
            }
            other => {
                return Err(ParseError {
                    line: lineno,
                    column: keyword.column,
                    message: format!(
                        "unknown declaration `{other}` (expected vertex, edge, arrow or stub)"
                    ),
                });
            }
        }
    }

    let diagram = SpliceDiagram::new(vertices, edges, arrows, stubs);
    Ok(DiagramDocument { diagram, source_positions: positions })
}

/// Canonical renderer: declarations sorted by kind then id, every arrow
/// carrying an explicit `m=`. `parse(render(parse(t)))` equals `parse(t)`.
pub fn render(diagram: &SpliceDiagram) -> String {
    let mut out = String::new();
    for v in diagram.vertices() {
        out.push_str(&format!("vertex {v}\n"));
    }
    for e in diagram.edges() {
        out.push_str(&format!(
            "edge {} {} {} {} {}\n",
            e.id, e.ends.0, e.ends.1, e.weights.0, e.weights.1
        ));
    }
    for a in diagram.arrows() {
        out.push_str(&format!("arrow {} {} {} m={}\n", a.id, a.base, a.weight, a.multiplicity));
    }
    for s in diagram.stubs() {
        out.push_str(&format!("stub {} {} {}\n", s.id, s.base, s.weight));
    }
    out
}
