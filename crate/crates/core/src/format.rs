//! The line-oriented instance format.
//!
//! ```text
//! c <comment>
//! p col <n> <m>
//! e <u> <v>
//! l <v> <c1> [<c2> ..]
//! t <k>
//! e <x> <y>
//! ```
//!
//! Vertex and color ids are 1-based. `p` must precede every `e`, `l` and `t`
//! line. A vertex without an `l` line gets the full list. A `t` line turns
//! the file into a list homomorphism instance: the `e` lines after it are the
//! edges of the target `H` on colors `1..=k`, loops allowed. Without a target
//! lists hold at most three colors from `{1,2,3}`; with one they may hold any
//! nonempty subset of `1..=k`. Input may use LF or CRLF line ends, trailing
//! whitespace and blank lines are ignored.

use std::fmt::Write as _;

use crate::color::{Color, ColorSet};
use crate::error::{Error, Result};
use crate::graph::GraphBuilder;
use crate::homsolver::{HomInstance, TargetGraph};
use crate::instance::ColoringInstance;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Coloring(ColoringInstance),
    Hom(HomInstance),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Warning {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed {
    pub instance: Instance,
    pub warnings: Vec<Warning>,
}

struct Header {
    n: usize,
    m: usize,
    line: usize,
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn number(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| err(line, format!("invalid {what} `{tok}`")))
}

pub fn parse(text: &str) -> Result<Parsed> {
    let mut header: Option<Header> = None;
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut lists: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    let mut target: Option<(usize, usize)> = None;
    let mut target_edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut warnings = Vec::new();

    for (i, raw) in text.split('\n').enumerate() {
        let line = i + 1;
        let content = raw.trim_end();
        if content.is_empty() {
            continue;
        }
        let mut toks = content.split_whitespace();
        let kind = toks.next().expect("non-empty line");
        if kind == "c" {
            continue;
        }
        if kind != "p" && header.is_none() {
            return Err(err(line, format!("`{kind}` line before the `p` header")));
        }
        match kind {
            "p" => {
                if header.is_some() {
                    return Err(err(line, "second `p` header"));
                }
                if toks.next() != Some("col") {
                    return Err(err(line, "expected `p col <n> <m>`"));
                }
                let n = number(toks.next(), line, "vertex count")?;
                let m = number(toks.next(), line, "edge count")?;
                header = Some(Header { n, m, line });
            }
            "e" => {
                let a = number(toks.next(), line, "endpoint")?;
                let b = number(toks.next(), line, "endpoint")?;
                if target.is_some() {
                    target_edges.push((line, a, b));
                } else {
                    edges.push((line, a, b));
                }
            }
            "l" => {
                let v = number(toks.next(), line, "vertex")?;
                let colors = toks
                    .by_ref()
                    .map(|t| {
                        t.parse()
                            .map_err(|_| err(line, format!("invalid color `{t}`")))
                    })
                    .collect::<Result<Vec<usize>>>()?;
                if colors.is_empty() {
                    return Err(err(line, "empty list"));
                }
                lists.push((line, v, colors));
            }
            "t" => {
                if target.is_some() {
                    return Err(err(line, "second `t` section"));
                }
                let k = number(toks.next(), line, "target size")?;
                if k == 0 || k > crate::color::MAX_COLORS {
                    return Err(err(
                        line,
                        format!(
                            "target size {k} out of range 1..={}",
                            crate::color::MAX_COLORS
                        ),
                    ));
                }
                target = Some((line, k));
            }
            other => return Err(err(line, format!("unknown line type `{other}`"))),
        }
        if let Some(extra) = toks.next() {
            return Err(err(line, format!("unexpected token `{extra}`")));
        }
    }

    let header = header.ok_or_else(|| err(1, "missing `p col <n> <m>` header"))?;
    let n = header.n;
    let mut g = GraphBuilder::new(n);
    let mut fresh_edges = 0;
    for &(line, a, b) in &edges {
        if a == 0 || a > n || b == 0 || b > n {
            return Err(err(line, format!("edge {a} {b} out of range 1..={n}")));
        }
        if a == b {
            return Err(err(
                line,
                format!("loop at vertex {a} outside a target section"),
            ));
        }
        if g.add_edge(a - 1, b - 1)? {
            fresh_edges += 1;
        } else {
            warnings.push(Warning {
                line,
                message: format!("duplicate edge {a} {b} ignored"),
            });
        }
    }
    if fresh_edges != header.m {
        warnings.push(Warning {
            line: header.line,
            message: format!("header declares {} edges, found {fresh_edges}", header.m),
        });
    }
    let graph = g.build();

    let palette_size = target.map_or(3, |(_, k)| k);
    let full = match target {
        Some((_, k)) => ColorSet::first_k(k),
        None => ColorSet::THREE,
    };
    let mut vertex_lists = vec![full; n];
    let mut seen = vec![false; n];
    for (line, v, colors) in lists {
        if v == 0 || v > n {
            return Err(err(line, format!("vertex {v} out of range 1..={n}")));
        }
        if std::mem::replace(&mut seen[v - 1], true) {
            return Err(err(line, format!("second list for vertex {v}")));
        }
        if target.is_none() && colors.len() > 3 {
            return Err(err(line, "a list holds at most three colors"));
        }
        let mut set = ColorSet::EMPTY;
        for c in colors {
            if c == 0 || c > palette_size {
                return Err(err(
                    line,
                    format!("color {c} out of range 1..={palette_size}"),
                ));
            }
            // Coloring files keep colors 1..=3 as is; targets are 0-based.
            let c = if target.is_some() { c - 1 } else { c } as Color;
            if set.contains(c) {
                return Err(err(line, format!("repeated color in list of vertex {v}")));
            }
            set = set.with(c);
        }
        vertex_lists[v - 1] = set;
    }

    let instance = match target {
        None => Instance::Coloring(ColoringInstance::new(graph, vertex_lists)?),
        Some((_, k)) => {
            let mut h = GraphBuilder::new(k).allow_loops();
            for &(line, x, y) in &target_edges {
                if x == 0 || x > k || y == 0 || y > k {
                    return Err(err(
                        line,
                        format!("target edge {x} {y} out of range 1..={k}"),
                    ));
                }
                if !h.add_edge(x - 1, y - 1)? {
                    warnings.push(Warning {
                        line,
                        message: format!("duplicate target edge {x} {y} ignored"),
                    });
                }
            }
            let target = TargetGraph::new(h.build(), "H")?;
            Instance::Hom(HomInstance::new(graph, vertex_lists, target)?)
        }
    };
    Ok(Parsed { instance, warnings })
}

/// Parses a file that must not contain a target section.
pub fn parse_coloring(text: &str) -> Result<ColoringInstance> {
    match parse(text)?.instance {
        Instance::Coloring(c) => Ok(c),
        Instance::Hom(_) => Err(Error::InvalidArgument(
            "expected a coloring instance, found a target section".into(),
        )),
    }
}

/// Canonical text: header, edges in lexicographic order, then an `l` line for
/// every vertex whose list is not full.
pub fn serialize_coloring(inst: &ColoringInstance) -> String {
    let g = inst.graph();
    let mut out = String::new();
    writeln!(out, "p col {} {}", g.vertex_count(), g.edge_count()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
    }
    for (v, &l) in inst.lists().iter().enumerate() {
        if l != ColorSet::THREE {
            write_list(&mut out, v, l.iter());
        }
    }
    out
}

/// Like [`serialize_coloring`], followed by the target section. List colors
/// are written 1-based.
pub fn serialize_hom(inst: &HomInstance) -> String {
    let g = inst.graph();
    let h = inst.target().graph();
    let full = inst.target().colors();
    let mut out = String::new();
    writeln!(out, "p col {} {}", g.vertex_count(), g.edge_count()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
    }
    for (v, &l) in inst.lists().iter().enumerate() {
        if l != full {
            write_list(&mut out, v, l.iter().map(|c| c + 1));
        }
    }
    writeln!(out, "t {}", h.vertex_count()).unwrap();
    for (x, y) in h.edges() {
        writeln!(out, "e {} {}", x + 1, y + 1).unwrap();
    }
    out
}

fn write_list(out: &mut String, v: usize, colors: impl Iterator<Item = Color>) {
    write!(out, "l {}", v + 1).unwrap();
    for c in colors {
        write!(out, " {c}").unwrap();
    }
    out.push('\n');
}

pub fn serialize(inst: &Instance) -> String {
    match inst {
        Instance::Coloring(c) => serialize_coloring(c),
        Instance::Hom(h) => serialize_hom(h),
    }
}
