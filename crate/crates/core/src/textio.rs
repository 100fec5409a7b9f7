//! Line-oriented text formats.
//!
//! Reals are written with 17 significant digits (`{:.16e}`), which round-trips
//! every `f64` exactly.
//!
//! | artifact | lines |
//! |----------|-------|
//! | edge list | `n m`, then `u v conductance` per edge |
//! | resistance table | `edge_index R_e leverage p_e` |
//! | provenance | `mode`, `epsilon`, `C`, `seed`, `q` header, then `draw_index edge_index conductance` |
//! | similarity | `lambda_min lambda_max achieved_epsilon pass` |
//! | ordering | `vertex position` |
//! | decomposition | `edge_index forest_id` |

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::forests::ForestDecomposition;
use crate::graph::{Edge, MultiGraph};
use crate::resistance::ResistanceTable;
use crate::sampler::{Draw, Mode, SamplerConfig};
use crate::spectral::SimilarityReport;

pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn field<T: FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("bad {what} {tok:?}")))
}

/// Non-blank lines that are not `#` comments, with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn write_edge_list(g: &MultiGraph) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", g.vertex_count(), g.edge_count()).unwrap();
    for e in g.edges() {
        writeln!(out, "{} {} {}", e.u, e.v, fmt_real(e.conductance)).unwrap();
    }
    out
}

pub fn read_edge_list(text: &str) -> Result<MultiGraph> {
    let mut lines = content_lines(text);
    let (ln, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty edge list"))?;
    let mut toks = header.split_whitespace();
    let n: usize = field(toks.next(), ln, "vertex count")?;
    let m: usize = field(toks.next(), ln, "edge count")?;
    let mut edges = Vec::with_capacity(m);
    for (ln, line) in lines {
        let mut toks = line.split_whitespace();
        let u = field(toks.next(), ln, "endpoint")?;
        let v = field(toks.next(), ln, "endpoint")?;
        let c = field(toks.next(), ln, "conductance")?;
        if toks.next().is_some() {
            return Err(parse_err(ln, "trailing tokens"));
        }
        edges.push(Edge::new(u, v, c));
    }
    if edges.len() != m {
        return Err(parse_err(
            ln,
            format!("header promises {m} edges, found {}", edges.len()),
        ));
    }
    MultiGraph::new(n, edges)
}

pub fn write_resistance_table(t: &ResistanceTable) -> String {
    let mut out = String::new();
    for i in 0..t.len() {
        writeln!(
            out,
            "{} {} {} {}",
            i,
            fmt_real(t.resistance()[i]),
            fmt_real(t.leverage()[i]),
            fmt_real(t.probability()[i])
        )
        .unwrap();
    }
    out
}

pub fn write_provenance(cfg: &SamplerConfig, q: usize, draws: &[Draw]) -> String {
    let mut out = String::new();
    writeln!(out, "mode {}", cfg.mode).unwrap();
    writeln!(out, "epsilon {}", fmt_real(cfg.epsilon)).unwrap();
    writeln!(out, "C {}", fmt_real(cfg.c)).unwrap();
    writeln!(out, "seed {}", cfg.seed).unwrap();
    writeln!(out, "q {q}").unwrap();
    for (i, d) in draws.iter().enumerate() {
        writeln!(out, "{} {} {}", i, d.edge, fmt_real(d.conductance)).unwrap();
    }
    out
}

/// Parsed provenance: config (with `merge_output = false`), `q`, draws.
pub fn read_provenance(text: &str) -> Result<(SamplerConfig, usize, Vec<Draw>)> {
    let mut lines = content_lines(text);
    let mut header = |key: &str| -> Result<(usize, String)> {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| parse_err(0, format!("missing {key} header")))?;
        let (k, v) = line
            .split_once(' ')
            .ok_or_else(|| parse_err(ln, "expected `key value`"))?;
        if k != key {
            return Err(parse_err(ln, format!("expected {key}, found {k}")));
        }
        Ok((ln, v.trim().to_string()))
    };
    let (_, mode) = header("mode")?;
    let mode: Mode = mode.parse()?;
    let (ln, eps) = header("epsilon")?;
    let epsilon = field(Some(&eps), ln, "epsilon")?;
    let (ln, c) = header("C")?;
    let c = field(Some(&c), ln, "C")?;
    let (ln, seed) = header("seed")?;
    let seed = field(Some(&seed), ln, "seed")?;
    let (ln, q) = header("q")?;
    let q: usize = field(Some(&q), ln, "q")?;
    let mut draws = Vec::with_capacity(q);
    for (ln, line) in lines {
        let mut toks = line.split_whitespace();
        let idx: usize = field(toks.next(), ln, "draw index")?;
        if idx != draws.len() {
            return Err(parse_err(ln, format!("draw index {idx} out of sequence")));
        }
        let edge = field(toks.next(), ln, "edge index")?;
        let conductance = field(toks.next(), ln, "conductance")?;
        draws.push(Draw { edge, conductance });
    }
    if draws.len() != q {
        return Err(parse_err(0, format!("q = {q} but {} draws", draws.len())));
    }
    Ok((SamplerConfig::new(mode, epsilon, c, seed), q, draws))
}

pub fn write_similarity(r: &SimilarityReport, epsilon: f64) -> String {
    format!(
        "{} {} {} {}\n",
        fmt_real(r.lambda_min),
        fmt_real(r.lambda_max),
        fmt_real(r.achieved_epsilon),
        r.pass(epsilon)
    )
}

pub fn write_ordering(position: &[usize]) -> String {
    let mut out = String::new();
    for (v, p) in position.iter().enumerate() {
        writeln!(out, "{v} {p}").unwrap();
    }
    out
}

pub fn read_ordering(text: &str) -> Result<Vec<usize>> {
    let mut position = Vec::new();
    for (ln, line) in content_lines(text) {
        let mut toks = line.split_whitespace();
        let v: usize = field(toks.next(), ln, "vertex")?;
        let p: usize = field(toks.next(), ln, "position")?;
        if v != position.len() {
            return Err(parse_err(ln, format!("vertex {v} out of sequence")));
        }
        position.push(p);
    }
    let mut seen = vec![false; position.len()];
    for &p in &position {
        if p >= seen.len() || std::mem::replace(&mut seen[p], true) {
            return Err(parse_err(0, "positions are not a permutation"));
        }
    }
    Ok(position)
}

pub fn write_decomposition(d: &ForestDecomposition) -> String {
    let mut out = String::new();
    for (i, f) in d.forest_id.iter().enumerate() {
        writeln!(out, "{i} {f}").unwrap();
    }
    out
}

/// Vertex sets, one per line, whitespace separated. Blank lines are empty sets.
pub fn read_vertex_sets(text: &str) -> Result<Vec<Vec<usize>>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim_start().starts_with('#'))
        .map(|(i, l)| {
            l.split_whitespace()
                .map(|tok| field(Some(tok), i + 1, "vertex"))
                .collect()
        })
        .collect()
}
