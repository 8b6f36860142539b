//! Text formats. All labels on disk are 1-based.
//!
//! Multiplex edge list (`.mx`):
//!
//! ```text
//! # comment
//! n_total c
//! V channel label        # declares membership
//! channel src dst        # an edge (endpoints join the channel)
//! ```
//!
//! Alignment sidecar (`.truth`, also used for hard seeds): one
//! `template_label background_label` pair per line.
//!
//! Soft seeds: CSV rows `template_label,background_label,weight`; each
//! template row is normalized to sum to one, rows without entries are flat.

use std::fmt::Write as _;
use std::path::Path;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::multiplex::{validate_multiplex, MultiplexGraph, RawChannel};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let toks: Vec<&str> = l.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn num(line: usize, tok: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("expected a non-negative integer, got {tok:?}")))
}

fn label(line: usize, tok: &str, what: &str, max: usize) -> Result<usize> {
    let v = num(line, tok)?;
    if v == 0 || v > max {
        return Err(parse_err(line, format!("{what} {v} outside 1..={max}")));
    }
    Ok(v - 1)
}

pub fn parse_mx(text: &str) -> Result<MultiplexGraph> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header `n_total c`"))?;
    if header.len() != 2 {
        return Err(parse_err(hl, "header must be `n_total c`"));
    }
    let n = num(hl, header[0])?;
    let c = num(hl, header[1])?;
    if c == 0 {
        return Err(Error::NoChannels);
    }
    let mut raw: Vec<RawChannel> = (0..c)
        .map(|_| RawChannel {
            vertices: Vec::new(),
            edges: Vec::new(),
        })
        .collect();
    for (ln, toks) in lines {
        if toks[0] == "V" {
            if toks.len() != 3 {
                return Err(parse_err(ln, "membership line must be `V channel label`"));
            }
            let ch = label(ln, toks[1], "channel", c)?;
            // range errors on vertex labels are reported by validation
            let v = num(ln, toks[2])?;
            if v == 0 {
                return Err(parse_err(ln, "labels are 1-based"));
            }
            raw[ch].vertices.push(v - 1);
        } else {
            if toks.len() != 3 {
                return Err(parse_err(ln, "edge line must be `channel src dst`"));
            }
            let ch = label(ln, toks[0], "channel", c)?;
            let (u, v) = (num(ln, toks[1])?, num(ln, toks[2])?);
            if u == 0 || v == 0 {
                return Err(parse_err(ln, "labels are 1-based"));
            }
            raw[ch].edges.push((u - 1, v - 1));
        }
    }
    validate_multiplex(n, raw)
}

/// Writes every member with a `V` line, then the edges, channel by channel.
pub fn format_mx(g: &MultiplexGraph) -> String {
    let mut s = format!("{} {}\n", g.n_total(), g.channel_count());
    for (i, ch) in g.channels().iter().enumerate() {
        for v in ch.vertices() {
            writeln!(s, "V {} {}", i + 1, v + 1).unwrap();
        }
        for (u, v) in ch.edges() {
            writeln!(s, "{} {} {}", i + 1, u + 1, v + 1).unwrap();
        }
    }
    s
}

/// Parses `template_label background_label` pairs.
pub fn parse_pairs(text: &str) -> Result<Vec<(usize, usize)>> {
    content_lines(text)
        .map(|(ln, toks)| {
            if toks.len() != 2 {
                return Err(parse_err(ln, "expected `template_label background_label`"));
            }
            let t = num(ln, toks[0])?;
            let b = num(ln, toks[1])?;
            if t == 0 || b == 0 {
                return Err(parse_err(ln, "labels are 1-based"));
            }
            Ok((t - 1, b - 1))
        })
        .collect()
}

pub fn format_truth(truth: &[usize]) -> String {
    let mut s = String::new();
    for (j, &b) in truth.iter().enumerate() {
        writeln!(s, "{} {}", j + 1, b + 1).unwrap();
    }
    s
}

/// Reads a full truth map (`truth[j]` for every template label `j < m`).
pub fn parse_truth(text: &str, m: usize) -> Result<Vec<usize>> {
    let mut truth = vec![usize::MAX; m];
    for (t, b) in parse_pairs(text)? {
        if t >= m {
            return Err(parse_err(0, format!("template label {} exceeds {m}", t + 1)));
        }
        truth[t] = b;
    }
    if let Some(j) = truth.iter().position(|&b| b == usize::MAX) {
        return Err(parse_err(0, format!("template label {} has no image", j + 1)));
    }
    Ok(truth)
}

/// Reads a soft-seed CSV into an `m × n` row-stochastic matrix.
pub fn parse_soft_seeds(text: &str, m: usize, n: usize) -> Result<Array2<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut soft = Array2::<f64>::zeros((m, n));
    for rec in reader.records() {
        let rec = rec.map_err(|e| {
            parse_err(e.position().map_or(0, |p| p.line() as usize), e.to_string())
        })?;
        let ln = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() != 3 {
            return Err(parse_err(ln, "expected `template_label,background_label,weight`"));
        }
        if rec[0].parse::<usize>().is_err() {
            // a header row
            if ln <= 1 {
                continue;
            }
            return Err(parse_err(ln, format!("bad template label {:?}", &rec[0])));
        }
        let t = label(ln, &rec[0], "template label", m)?;
        let b = label(ln, &rec[1], "background label", n)?;
        let w: f64 = rec[2]
            .parse()
            .map_err(|_| parse_err(ln, format!("bad weight {:?}", &rec[2])))?;
        if !(w >= 0.0) || !w.is_finite() {
            return Err(parse_err(ln, format!("weight {w} must be finite and >= 0")));
        }
        soft[[t, b]] += w;
    }
    for mut row in soft.rows_mut() {
        let s = row.sum();
        if s > 0.0 {
            row /= s;
        } else {
            row.fill(1.0 / n as f64);
        }
    }
    Ok(soft)
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn read_mx(path: &Path) -> Result<MultiplexGraph> {
    parse_mx(&read_text(path)?)
}
