//! Line-oriented text formats for structures and sampled predicates.
//!
//! ```text
//! metric-order v1
//! n 3
//! order p0 p1 p2
//! d p0 p1 3/10
//! d p0 p2 1/2
//! d p1 p2 1/2
//! ```
//!
//! Cyclic orders use the header `cyclic-order v1`, a `points` line in place
//! of `order`, and `ceq a b c` lines. Predicates use `pred v1` followed by
//! `<point> <p>/<q>` lines. Blank lines and lines starting with `#` are
//! ignored.

use std::collections::HashMap;
use std::fmt::Write;

use crate::cyclic::FiniteCyclicOrder;
use crate::error::{Error, Result};
use crate::order::{FiniteMetricOrder, MAX_POINTS};
use crate::rational::{fmt_rat, in_unit, parse_rat, zero, Rational};

/// A structure loaded from text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Structure {
    Linear(FiniteMetricOrder),
    Cyclic(FiniteCyclicOrder),
}

impl Structure {
    pub fn names(&self) -> &[String] {
        match self {
            Structure::Linear(m) => m.names(),
            Structure::Cyclic(c) => c.names(),
        }
    }
}

fn err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("line {line}: {msg}"))
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.trim();
        if l.is_empty() || l.starts_with('#') {
            None
        } else {
            Some((i + 1, l.split_whitespace().collect()))
        }
    })
}

struct Parsed {
    names: Vec<String>,
    dist: Vec<Vec<Rational>>,
    triples: Vec<(usize, usize, usize)>,
}

fn parse_common(text: &str, header: &str, points_kw: &str, allow_large: bool) -> Result<Parsed> {
    let mut lines = content_lines(text);
    match lines.next() {
        Some((_, words)) if words.join(" ") == header => {}
        Some((i, _)) => return Err(err(i, format!("expected header `{header}`"))),
        None => return Err(Error::Parse("empty input".into())),
    }
    let mut count: Option<usize> = None;
    let mut names: Option<Vec<String>> = None;
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut dist: Vec<Vec<Option<Rational>>> = Vec::new();
    let mut triples = Vec::new();
    for (i, words) in lines {
        match words[0] {
            "n" if words.len() == 2 && count.is_none() => {
                let n: usize = words[1].parse().map_err(|_| err(i, "invalid point count"))?;
                if n == 0 {
                    return Err(err(i, "point count must be positive"));
                }
                if n > MAX_POINTS && !allow_large {
                    return Err(Error::TooLarge { n, cap: MAX_POINTS });
                }
                count = Some(n);
            }
            kw if kw == points_kw && names.is_none() => {
                let n = count.ok_or_else(|| err(i, "`n` line must come first"))?;
                if words.len() - 1 != n {
                    return Err(err(i, format!("expected {n} point names, found {}", words.len() - 1)));
                }
                let list: Vec<String> = words[1..].iter().map(|w| w.to_string()).collect();
                for (k, name) in list.iter().enumerate() {
                    if index.insert(name.clone(), k).is_some() {
                        return Err(err(i, format!("duplicate point `{name}`")));
                    }
                }
                dist = vec![vec![None; n]; n];
                for (k, row) in dist.iter_mut().enumerate() {
                    row[k] = Some(zero());
                }
                names = Some(list);
            }
            "d" if words.len() == 4 && names.is_some() => {
                let a = *index.get(words[1]).ok_or_else(|| err(i, format!("unknown point `{}`", words[1])))?;
                let b = *index.get(words[2]).ok_or_else(|| err(i, format!("unknown point `{}`", words[2])))?;
                if a == b {
                    return Err(err(i, "distance line for a single point"));
                }
                let v = parse_rat(words[3]).map_err(|e| err(i, e))?;
                if dist[a][b].is_some() {
                    return Err(err(i, "duplicate distance"));
                }
                dist[a][b] = Some(v.clone());
                dist[b][a] = Some(v);
            }
            "ceq" if words.len() == 4 && names.is_some() && points_kw == "points" => {
                let mut t = [0usize; 3];
                for (slot, w) in t.iter_mut().zip(&words[1..]) {
                    *slot = *index.get(*w).ok_or_else(|| err(i, format!("unknown point `{w}`")))?;
                }
                triples.push((t[0], t[1], t[2]));
            }
            _ => return Err(err(i, format!("unexpected line `{}`", words.join(" ")))),
        }
    }
    let names = names.ok_or_else(|| Error::Parse(format!("missing `{points_kw}` line")))?;
    let mut full = Vec::with_capacity(names.len());
    for (a, row) in dist.into_iter().enumerate() {
        let mut out = Vec::with_capacity(row.len());
        for (b, v) in row.into_iter().enumerate() {
            out.push(v.ok_or_else(|| {
                Error::Parse(format!("missing distance between `{}` and `{}`", names[a], names[b]))
            })?);
        }
        full.push(out);
    }
    Ok(Parsed { names, dist: full, triples })
}

pub fn parse_metric_order(text: &str, allow_large: bool) -> Result<FiniteMetricOrder> {
    let p = parse_common(text, "metric-order v1", "order", allow_large)?;
    FiniteMetricOrder::new_large(p.names, p.dist)
}

pub fn parse_cyclic_order(text: &str, allow_large: bool) -> Result<FiniteCyclicOrder> {
    let p = parse_common(text, "cyclic-order v1", "points", allow_large)?;
    FiniteCyclicOrder::new_large(p.names, p.dist, p.triples)
}

/// Parses either format, dispatching on the header.
pub fn parse_structure(text: &str, allow_large: bool) -> Result<Structure> {
    let header = content_lines(text).next().map(|(_, w)| w.join(" "));
    match header.as_deref() {
        Some("cyclic-order v1") => parse_cyclic_order(text, allow_large).map(Structure::Cyclic),
        _ => parse_metric_order(text, allow_large).map(Structure::Linear),
    }
}

fn write_distances(out: &mut String, names: &[String], d: impl Fn(usize, usize) -> Rational) {
    for i in 0..names.len() {
        for j in i + 1..names.len() {
            writeln!(out, "d {} {} {}", names[i], names[j], fmt_rat(&d(i, j))).unwrap();
        }
    }
}

pub fn write_metric_order(m: &FiniteMetricOrder) -> String {
    let mut out = String::from("metric-order v1\n");
    writeln!(out, "n {}", m.len()).unwrap();
    writeln!(out, "order {}", m.names().join(" ")).unwrap();
    write_distances(&mut out, m.names(), |i, j| m.d(i, j).clone());
    out
}

pub fn write_cyclic_order(c: &FiniteCyclicOrder) -> String {
    let mut out = String::from("cyclic-order v1\n");
    writeln!(out, "n {}", c.len()).unwrap();
    writeln!(out, "points {}", c.names().join(" ")).unwrap();
    write_distances(&mut out, c.names(), |i, j| c.d(i, j).clone());
    for (x, y, z) in c.strict_triples() {
        writeln!(out, "ceq {} {} {}", c.name(x), c.name(y), c.name(z)).unwrap();
    }
    out
}

pub fn write_structure(s: &Structure) -> String {
    match s {
        Structure::Linear(m) => write_metric_order(m),
        Structure::Cyclic(c) => write_cyclic_order(c),
    }
}

/// Parses a predicate file against the point names of a structure. Every
/// point must receive exactly one value in [0,1].
pub fn parse_predicate(text: &str, names: &[String]) -> Result<Vec<Rational>> {
    let mut lines = content_lines(text);
    match lines.next() {
        Some((_, words)) if words.join(" ") == "pred v1" => {}
        Some((i, _)) => return Err(err(i, "expected header `pred v1`")),
        None => return Err(Error::Parse("empty input".into())),
    }
    let mut values: Vec<Option<Rational>> = vec![None; names.len()];
    for (i, words) in lines {
        if words.len() != 2 {
            return Err(err(i, "expected `<point> <p>/<q>`"));
        }
        let k = names
            .iter()
            .position(|n| n == words[0])
            .ok_or_else(|| err(i, format!("unknown point `{}`", words[0])))?;
        let v = parse_rat(words[1]).map_err(|e| err(i, e))?;
        if !in_unit(&v) {
            return Err(err(i, "predicate value outside [0,1]"));
        }
        if values[k].replace(v).is_some() {
            return Err(err(i, format!("duplicate value for `{}`", words[0])));
        }
    }
    values
        .into_iter()
        .zip(names)
        .map(|(v, n)| v.ok_or_else(|| Error::Parse(format!("missing value for `{n}`"))))
        .collect()
}

pub fn write_predicate(names: &[String], values: &[Rational]) -> String {
    let mut out = String::from("pred v1\n");
    for (n, v) in names.iter().zip(values) {
        writeln!(out, "{n} {}", fmt_rat(v)).unwrap();
    }
    out
}
