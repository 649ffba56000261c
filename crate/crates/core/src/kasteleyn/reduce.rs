//! Weighted matrices and reduction of an incidence matrix to a graph minor.

use super::build::{IncidenceMatrix, Reference};
use crate::algebra::{Invertible, Scalar};
use crate::dart::DartGraph;
use crate::graph::{apply_minor, EdgeRole, MinorTransform};
use crate::pfaffian::{reduce, PfaffianScalar, SkewMatrix};
use crate::{Error, Result};

/// Tolerance below which reduced entries outside the dart-graph pattern
/// are treated as rounding noise.
const PATTERN_TOL: f64 = 1e-9;

/// Scales link entries by `w` (reference without links) or by `1/w`
/// (canonical reference); site entries are unchanged.
pub fn weighted_matrix<T: Scalar>(a: &IncidenceMatrix<T>, w: &[f64]) -> Result<SkewMatrix<T>> {
    let g = &a.graph;
    if w.len() != g.n_edges() {
        return Err(Error::InvalidGraph(format!(
            "{} weights for {} edges",
            w.len(),
            g.n_edges()
        )));
    }
    if let Some((e, &x)) = w.iter().enumerate().find(|(_, x)| !x.is_finite() || **x <= 0.0) {
        return Err(Error::NonPositiveWeight { edge: e, value: x });
    }
    let d = a.dart_graph()?;
    let mut m = a.matrix.clone();
    for (e, &we) in w.iter().enumerate() {
        let (x, y) = d.link(e);
        let f = match a.reference {
            Reference::EvenDegree => we,
            Reference::Canonical => 1.0 / we,
        };
        m.set(x, y, m.get(x, y).scale(f));
    }
    Ok(m)
}

/// `w(M0 & E)`: the product of weights over link edges of the reference.
pub fn reference_weight(reference: Reference, w: &[f64]) -> f64 {
    match reference {
        Reference::EvenDegree => 1.0,
        Reference::Canonical => w.iter().product(),
    }
}

/// Weights on the larger graph of a transform: the image weight on edges
/// that survive, `1` on contracted and deleted edges.
pub fn extend_weights(t: &MinorTransform, w: &[f64]) -> Result<Vec<f64>> {
    (0..t.edge_map.len())
        .map(|e| match t.role(e) {
            EdgeRole::Original(e1) => w
                .get(e1)
                .copied()
                .ok_or_else(|| Error::InvalidTransform(format!("edge {e} maps to missing {e1}"))),
            EdgeRole::Contracted | EdgeRole::Deleted => Ok(1.0),
        })
        .collect()
}

/// Removes every curve through a deleted edge from the Pfaffian expansion.
/// Against the canonical reference the site entries at darts of deleted
/// edges are zeroed, which forces their links into every matching; against
/// the link-free reference the link entries themselves are zeroed.
pub fn modified_matrix<T: Scalar>(a: &IncidenceMatrix<T>, deleted: &[usize]) -> Result<IncidenceMatrix<T>> {
    let d = a.dart_graph()?;
    let g = &a.graph;
    let mut m = a.matrix.clone();
    let zero = m.zero().clone();
    for &e in deleted {
        match a.reference {
            Reference::EvenDegree => {
                let (x, y) = d.link(e);
                m.set(x, y, zero.clone());
            }
            Reference::Canonical => {
                let (v, w) = g.endpoints(e);
                for u in [v, w] {
                    let x = d.index(u, e);
                    for y in d.block(u) {
                        if y != x {
                            m.set(x, y, zero.clone());
                        }
                    }
                }
            }
        }
    }
    Ok(IncidenceMatrix { matrix: m, ..a.clone() })
}

fn permutation_sign(p: &[usize]) -> f64 {
    let mut seen = vec![false; p.len()];
    let mut sign = 1.0;
    for i in 0..p.len() {
        if seen[i] {
            continue;
        }
        let mut len = 0;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            j = p[j];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

fn power<T: Scalar>(x: &T, k: usize) -> T {
    let mut acc = x.one_like();
    for _ in 0..k {
        acc = acc * x.clone();
    }
    acc
}

/// Integrates out the darts of deleted and contracted edges. The result is
/// an incidence matrix on the minor, read against its canonical reference,
/// with constant `lambda_2 / (sgn(pi) Pf(A_K)^{n-p-1})`, where `pi`
/// reorders the surviving darts into the minor's dart order.
pub fn reduce_to_minor<T>(a: &IncidenceMatrix<T>, t: &MinorTransform) -> Result<IncidenceMatrix<T>>
where
    T: PfaffianScalar + Invertible,
{
    let g2 = &a.graph;
    let (g1, t) = apply_minor(g2, t)?;
    let d2 = a.dart_graph()?;
    let d1 = DartGraph::new(&g1)?;
    let check = IncidenceMatrix {
        reference: Reference::Canonical,
        ..a.clone()
    };
    let check = modified_matrix(&check, &t.deleted)?;
    let mut k: Vec<usize> = Vec::new();
    for &e in t.deleted.iter().chain(&t.contracted) {
        let (x, y) = d2.link(e);
        k.push(x);
        k.push(y);
    }
    k.sort_unstable();
    let (pfk, derived) = reduce(&check.matrix, &k).map_err(|e| match e {
        Error::SingularPivot(x) => Error::DegenerateReduction(x),
        other => other,
    })?;
    let kbar: Vec<usize> = (0..d2.n_darts()).filter(|i| k.binary_search(i).is_err()).collect();
    let target: Vec<usize> = kbar
        .iter()
        .map(|&i| {
            let dart = d2.darts()[i];
            let e1 = match t.role(dart.edge) {
                EdgeRole::Original(e1) => e1,
                _ => unreachable!("surviving dart on a removed edge"),
            };
            d1.index(t.vertex_map[dart.vertex], e1)
        })
        .collect();
    let scale = derived.max_magnitude();
    let mut m = SkewMatrix::zeros(d1.n_darts(), derived.zero().clone()).with_labels(d1.labels());
    for ii in 0..kbar.len() {
        for jj in ii + 1..kbar.len() {
            let x = derived.get(ii, jj);
            if x.magnitude() <= PATTERN_TOL * scale {
                continue;
            }
            m.set(target[ii], target[jj], x);
        }
    }
    d1.check_zero_pattern(&m)?;
    let n = d2.n_darts() / 2;
    let p = k.len() / 2;
    let lambda12 = power(&pfk, n - p - 1).scale(permutation_sign(&target));
    Ok(IncidenceMatrix {
        graph: g1,
        matrix: m,
        reference: Reference::Canonical,
        lambda: a.lambda.clone() * lambda12.try_inv()?,
    })
}
