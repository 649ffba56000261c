//! Text formats for graphs, schemes, weights and matrix dumps.
//!
//! Graph file: one `u v` line per edge, edge id = line order.
//! Scheme file: `v: e_a e_b ...` rotation lines, then optional `e: k1 k2 ...`
//! crosscap lines, written after a `crosscaps N` line.
//! Weight and coupling files: `e value` lines.
//! Blank lines and `#` comments are ignored everywhere.

use crate::algebra::{Multicomplex, Scalar};
use crate::graph::{EmbeddingScheme, Graph};
use crate::pfaffian::SkewMatrix;
use crate::{Error, Result};
use num_complex::Complex64;
use std::fmt::Write;

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn num<T: std::str::FromStr>(line: usize, tok: &str) -> Result<T> {
    tok.parse().map_err(|_| parse_err(line, format!("bad number {tok:?}")))
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut edges = Vec::new();
    for (ln, l) in lines(text) {
        let t: Vec<&str> = l.split_whitespace().collect();
        if t.len() != 2 {
            return Err(parse_err(ln, "expected `u v`"));
        }
        edges.push((num(ln, t[0])?, num(ln, t[1])?));
    }
    let n = edges
        .iter()
        .map(|&(a, b): &(usize, usize)| a.max(b) + 1)
        .max()
        .unwrap_or(0);
    Graph::new(n, edges)
}

pub fn format_graph(g: &Graph) -> String {
    let mut s = String::new();
    for &(a, b) in g.edges() {
        let _ = writeln!(s, "{a} {b}");
    }
    s
}

/// Reads a scheme for `g`. Rotation lines come first; a `crosscaps N` line
/// switches to crosscap lines. Without it the crosscap count is the largest
/// index listed.
pub fn parse_scheme(text: &str, g: &Graph) -> Result<EmbeddingScheme> {
    let mut rotation: Vec<Option<Vec<usize>>> = vec![None; g.n_vertices()];
    let mut crosscaps: Vec<Vec<usize>> = vec![Vec::new(); g.n_edges()];
    let mut declared: Option<usize> = None;
    let mut in_crosscaps = false;
    for (ln, l) in lines(text) {
        if let Some(rest) = l.strip_prefix("crosscaps") {
            declared = Some(num(ln, rest.trim())?);
            in_crosscaps = true;
            continue;
        }
        let (head, tail) = l.split_once(':').ok_or_else(|| parse_err(ln, "expected `id: ...`"))?;
        let id: usize = num(ln, head.trim())?;
        let items: Vec<usize> = tail.split_whitespace().map(|t| num(ln, t)).collect::<Result<_>>()?;
        if in_crosscaps || rotation.get(id).is_some_and(Option::is_some) {
            in_crosscaps = true;
            let slot = crosscaps
                .get_mut(id)
                .ok_or_else(|| parse_err(ln, format!("no edge {id}")))?;
            *slot = items;
        } else {
            let slot = rotation
                .get_mut(id)
                .ok_or_else(|| parse_err(ln, format!("no vertex {id}")))?;
            *slot = Some(items);
        }
    }
    let rotation = rotation
        .into_iter()
        .enumerate()
        .map(|(v, r)| r.ok_or_else(|| Error::InvalidScheme(format!("no rotation for vertex {v}"))))
        .collect::<Result<Vec<_>>>()?;
    let n_crosscaps = declared.unwrap_or_else(|| crosscaps.iter().flatten().copied().max().unwrap_or(0));
    let s = EmbeddingScheme {
        rotation,
        crosscaps,
        n_crosscaps,
    };
    s.validate(g)?;
    Ok(s)
}

pub fn format_scheme(s: &EmbeddingScheme) -> String {
    let mut out = String::new();
    for (v, r) in s.rotation.iter().enumerate() {
        let _ = writeln!(out, "{v}: {}", join(r));
    }
    let _ = writeln!(out, "crosscaps {}", s.n_crosscaps);
    for (e, c) in s.crosscaps.iter().enumerate() {
        if !c.is_empty() {
            let _ = writeln!(out, "{e}: {}", join(c));
        }
    }
    out
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

/// Per-edge values from `e value` lines; every edge must be listed once.
fn parse_edge_values(text: &str, n_edges: usize) -> Result<Vec<f64>> {
    let mut out: Vec<Option<f64>> = vec![None; n_edges];
    for (ln, l) in lines(text) {
        let t: Vec<&str> = l.split_whitespace().collect();
        if t.len() != 2 {
            return Err(parse_err(ln, "expected `e value`"));
        }
        let e: usize = num(ln, t[0])?;
        let x: f64 = num(ln, t[1])?;
        let slot = out.get_mut(e).ok_or_else(|| parse_err(ln, format!("no edge {e}")))?;
        if slot.replace(x).is_some() {
            return Err(parse_err(ln, format!("edge {e} listed twice")));
        }
    }
    out.into_iter()
        .enumerate()
        .map(|(e, x)| x.ok_or_else(|| parse_err(0, format!("no value for edge {e}"))))
        .collect()
}

/// `uniform:x` or the contents of a weights file. Weights must be positive.
pub fn parse_weights(spec_or_text: &str, n_edges: usize) -> Result<Vec<f64>> {
    let w = match spec_or_text.strip_prefix("uniform:") {
        Some(x) => vec![num(0, x.trim())?; n_edges],
        None => parse_edge_values(spec_or_text, n_edges)?,
    };
    if let Some((e, &x)) = w.iter().enumerate().find(|(_, x)| !x.is_finite() || **x <= 0.0) {
        return Err(Error::NonPositiveWeight { edge: e, value: x });
    }
    Ok(w)
}

/// Like [`parse_weights`] but zero couplings are allowed.
pub fn parse_couplings(spec_or_text: &str, n_edges: usize) -> Result<Vec<f64>> {
    let j = match spec_or_text.strip_prefix("uniform:") {
        Some(x) => vec![num(0, x.trim())?; n_edges],
        None => parse_edge_values(spec_or_text, n_edges)?,
    };
    if let Some((e, &x)) = j.iter().enumerate().find(|(_, x)| !x.is_finite() || **x < 0.0) {
        return Err(Error::NonPositiveWeight { edge: e, value: x });
    }
    Ok(j)
}

/// Text form of one matrix entry in a dump.
pub trait DumpValue: Scalar {
    fn dump(&self) -> String;
}

impl DumpValue for f64 {
    fn dump(&self) -> String {
        format!("{self}")
    }
}

impl DumpValue for Complex64 {
    fn dump(&self) -> String {
        format!("{}{:+}i", self.re, self.im)
    }
}

/// Nonzero coefficients as `mask:coeff` pairs.
impl DumpValue for Multicomplex {
    fn dump(&self) -> String {
        let parts: Vec<String> = self
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(s, c)| format!("{s}:{c}"))
            .collect();
        if parts.is_empty() {
            "0:0".into()
        } else {
            parts.join(",")
        }
    }
}

/// Header lines `order`, `ring`, `labels`, then one `i j value` line per
/// nonzero upper-triangle entry.
pub fn dump_matrix<T: DumpValue>(a: &SkewMatrix<T>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "order {}", a.order());
    let _ = writeln!(s, "ring {}", a.ring());
    if let Some(l) = a.labels() {
        let _ = writeln!(s, "labels {}", l.join(" "));
    }
    for (i, j, x) in a.entries() {
        if !x.is_zero() {
            let _ = writeln!(s, "{i} {j} {}", x.dump());
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn graph_round_trip() {
        let g = fixtures::k5();
        assert_eq!(parse_graph(&format_graph(&g)).unwrap(), g);
        let g = parse_graph("# triangle\n0 1\n1 2 # last two\n2 0\n").unwrap();
        assert_eq!(g.n_edges(), 3);
        assert!(matches!(parse_graph("0 1 2"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn scheme_round_trip() {
        for (g, s) in [
            fixtures::k5_projective(),
            fixtures::torus_grid3x3_even(),
            fixtures::k3_planar(),
        ] {
            assert_eq!(parse_scheme(&format_scheme(&s), &g).unwrap(), s);
        }
    }

    #[test]
    fn scheme_without_header_infers_crosscaps() {
        let g = fixtures::k3();
        let s = parse_scheme("0: 0 2\n1: 0 1\n2: 1 2\n1: 1\n", &g).unwrap();
        assert_eq!(s.n_crosscaps, 1);
        assert_eq!(s.crosscaps[1], vec![1]);
    }

    #[test]
    fn weights() {
        assert_eq!(parse_weights("uniform:0.5", 3).unwrap(), vec![0.5; 3]);
        assert_eq!(parse_weights("1 0.2\n0 0.1\n", 2).unwrap(), vec![0.1, 0.2]);
        assert!(matches!(parse_weights("0 0.1\n", 2), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_weights("uniform:0", 2),
            Err(Error::NonPositiveWeight { .. })
        ));
        assert_eq!(parse_couplings("uniform:0", 2).unwrap(), vec![0.0; 2]);
    }

    #[test]
    fn multicomplex_dump() {
        let x = Multicomplex::monomial(2, 3, -2.0) + Multicomplex::real(2, 1.0);
        assert_eq!(x.dump(), "0:1,3:-2");
        let mut a = SkewMatrix::zeros(2, Multicomplex::zero(2));
        a.set(0, 1, x);
        assert_eq!(dump_matrix(&a), "order 2\nring multicomplex(2)\n0 1 0:1,3:-2\n");
    }
}
