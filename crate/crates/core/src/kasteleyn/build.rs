//! Incidence-matrix construction for 4-regular graphs with a cellular
//! embedding whose faces are cycles, and the crosscap-parity class table.

use super::edge::{assemble, cycle_equation_residuals, principal_image, solve_cycle_equations, solve_edge_equations};
use super::edge::{CycleResidual, EdgeAssignment};
use super::site::{solve_site_equations, SiteAssignment};
use crate::algebra::{Multicomplex, Ring, Scalar};
use crate::dart::{canonical_matching, even_degree_matching, f_weight, f_weight_even, DartGraph, PerfectMatching};
use crate::graph::{
    face_boundary_basis, four_regularize, fundamental_cycle_basis, subdivide_to_cycle_faces, ClosedCurve, CycleBasis,
    EmbeddingScheme, Graph, MinorTransform,
};
use crate::pfaffian::SkewMatrix;
use crate::{Error, Result};
use num_complex::Complex64;
use std::collections::BTreeMap;

const CLASS_TOL: f64 = 1e-9;

/// Reference perfect matching an incidence matrix is read against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reference {
    /// Consecutive darts paired at every vertex; contains no link edge.
    EvenDegree,
    /// All link edges.
    Canonical,
}

/// A dart-indexed skew matrix on `graph` together with the constant
/// `lambda` for which `Z(w) = Re(lambda * w(M0 & E) * Pf(A(w)))`.
#[derive(Clone, Debug, PartialEq)]
pub struct IncidenceMatrix<T> {
    pub graph: Graph,
    pub matrix: SkewMatrix<T>,
    pub reference: Reference,
    pub lambda: T,
}

impl<T: Scalar> IncidenceMatrix<T> {
    pub fn dart_graph(&self) -> Result<DartGraph> {
        DartGraph::new(&self.graph)
    }

    pub fn reference_matching(&self, d: &DartGraph) -> Result<PerfectMatching> {
        match self.reference {
            Reference::EvenDegree => even_degree_matching(d),
            Reference::Canonical => Ok(canonical_matching(d)),
        }
    }

    /// `F_A(M0, C)` by matching enumeration.
    pub fn f_weight(&self, c: &ClosedCurve) -> Result<T> {
        let d = self.dart_graph()?;
        f_weight(&self.matrix, &d, &self.reference_matching(&d)?, c)
    }
}

/// Crosscap-parity mask of a curve: bit `k - 1` is set when the curve
/// passes through crosscap `k` an odd number of times.
pub fn crosscap_parity(s: &EmbeddingScheme, c: &ClosedCurve) -> usize {
    let mut mask = 0usize;
    for e in c.edges().iter() {
        for &k in s.crosscaps.get(e).map(Vec::as_slice).unwrap_or(&[]) {
            mask ^= 1 << (k - 1);
        }
    }
    mask
}

/// One crosscap-parity class: every curve in it has weight
/// `f0 * sign * i_mask`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParityClass {
    pub mask: usize,
    pub sign: f64,
    pub representative: ClosedCurve,
    pub value: Multicomplex,
}

/// Everything produced while building an incidence matrix.
#[derive(Clone, Debug)]
pub struct KasteleynBuild {
    pub graph: Graph,
    pub scheme: EmbeddingScheme,
    pub basis: CycleBasis,
    pub site: SiteAssignment,
    /// Link entries before the cycle-equation sign pass.
    pub raw_edges: EdgeAssignment,
    pub edges: EdgeAssignment,
    /// Cycle equations before the sign pass.
    pub residuals: Vec<CycleResidual>,
    /// Weight of the empty curve, `prod_v Pf(site block)`.
    pub f0: f64,
    pub classes: Vec<ParityClass>,
    /// `None` when every cycle of a full cycle basis has the weight of its
    /// class, otherwise a description of the first mismatch.
    pub class_error: Option<String>,
    pub matrix: IncidenceMatrix<Multicomplex>,
}

impl KasteleynBuild {
    pub fn n_crosscaps(&self) -> usize {
        self.scheme.n_crosscaps
    }

    /// Errors when the class table failed validation.
    pub fn validated(&self) -> Result<&Self> {
        match &self.class_error {
            None => Ok(self),
            Some(msg) => Err(Error::SchemeInvalid(msg.clone())),
        }
    }

    pub fn multicomplex(&self) -> &IncidenceMatrix<Multicomplex> {
        &self.matrix
    }

    /// Image under the character sending every generator to `i`. With no
    /// crosscaps this is a complete representation; otherwise it is one
    /// term of the character expansion.
    pub fn complex(&self) -> IncidenceMatrix<Complex64> {
        let h = crate::algebra::CharacterMap::from_index(self.n_crosscaps(), 0);
        IncidenceMatrix {
            graph: self.graph.clone(),
            matrix: principal_image(&self.matrix.matrix),
            reference: self.matrix.reference,
            lambda: h.apply(&self.matrix.lambda).expect("generator count matches"),
        }
    }

    pub fn real(&self) -> Result<IncidenceMatrix<f64>> {
        if self.n_crosscaps() > 0 {
            return Err(Error::RingMismatch(
                "real entries need a scheme without crosscaps".into(),
            ));
        }
        Ok(IncidenceMatrix {
            graph: self.graph.clone(),
            matrix: self.matrix.matrix.map(0.0, Multicomplex::re),
            reference: self.matrix.reference,
            lambda: self.matrix.lambda.re(),
        })
    }
}

/// Runs the site, edge and cycle solvers over the face-boundary basis and
/// assembles the multicomplex incidence matrix with its constant.
///
/// `g` must be 4-regular and 2-connected, and every face of `s` a cycle.
pub fn build_kasteleyn(g: &Graph, s: &EmbeddingScheme) -> Result<KasteleynBuild> {
    s.validate(g)?;
    if (0..g.n_vertices()).any(|v| g.degree(v) != 4) {
        return Err(Error::NotFourRegular);
    }
    if !g.is_two_connected() {
        return Err(Error::NotTwoConnected);
    }
    let basis = face_boundary_basis(g, s)?;
    let site = solve_site_equations(g, &basis, s)?;
    let raw_edges = solve_edge_equations(g, &site, &basis)?;
    let d = DartGraph::new(g)?;
    let residuals = cycle_equation_residuals(&d, &site, &raw_edges, &basis, s)?;
    let edges = solve_cycle_equations(&d, &site, &raw_edges, &basis, s)?;
    let a = assemble(&d, &site, &edges, s)?;
    let f0 = site.pfaffian_product();
    let (classes, class_error) = class_table(g, s, &d, &a, f0)?;
    let lambda = lambda_from_classes(s.n_crosscaps, f0, &classes);
    Ok(KasteleynBuild {
        graph: g.clone(),
        scheme: s.clone(),
        basis,
        site,
        raw_edges,
        edges,
        residuals,
        f0,
        classes,
        class_error,
        matrix: IncidenceMatrix {
            graph: g.clone(),
            matrix: a,
            reference: Reference::EvenDegree,
            lambda,
        },
    })
}

/// Builds an incidence matrix and returns it in the requested ring.
pub fn build_incidence_matrix(g: &Graph, s: &EmbeddingScheme, ring: Ring) -> Result<AnyIncidence> {
    let b = build_kasteleyn(g, s)?;
    Ok(match ring {
        Ring::Real => AnyIncidence::Real(b.real()?),
        Ring::Complex => AnyIncidence::Complex(b.complex()),
        Ring::Multicomplex(n) => {
            if n != s.n_crosscaps {
                return Err(Error::RingMismatch(format!(
                    "scheme has {} crosscaps, ring asks for {n} generators",
                    s.n_crosscaps
                )));
            }
            AnyIncidence::Multicomplex(b.matrix)
        }
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum AnyIncidence {
    Real(IncidenceMatrix<f64>),
    Complex(IncidenceMatrix<Complex64>),
    Multicomplex(IncidenceMatrix<Multicomplex>),
}

/// Classes reachable from a fundamental cycle basis, each with a
/// representative curve and its weight, plus a consistency check of every
/// fundamental cycle against the weight of its class.
fn class_table(
    g: &Graph,
    s: &EmbeddingScheme,
    d: &DartGraph,
    a: &SkewMatrix<Multicomplex>,
    f0: f64,
) -> Result<(Vec<ParityClass>, Option<String>)> {
    let fundamental = fundamental_cycle_basis(g)?;
    let mut reps: BTreeMap<usize, ClosedCurve> = BTreeMap::new();
    reps.insert(0, ClosedCurve::empty(g));
    for c in &fundamental.cycles {
        let p = crosscap_parity(s, c);
        let known: Vec<(usize, ClosedCurve)> = reps.iter().map(|(m, r)| (*m, r.clone())).collect();
        for (m, r) in known {
            reps.entry(m ^ p).or_insert_with(|| r.sym_diff(c));
        }
    }
    let mut classes = Vec::with_capacity(reps.len());
    let mut error = None;
    for (mask, rep) in reps {
        let value = f_weight_even(a, d, &rep)?;
        let sign = match class_sign(&value, mask, f0) {
            Ok(sg) => sg,
            Err(msg) => {
                error.get_or_insert(format!("class {mask:#b}: {msg}"));
                1.0
            }
        };
        classes.push(ParityClass {
            mask,
            sign,
            representative: rep,
            value,
        });
    }
    if error.is_none() {
        for (idx, c) in fundamental.cycles.iter().enumerate() {
            let mask = crosscap_parity(s, c);
            let class = classes
                .iter()
                .find(|k| k.mask == mask)
                .expect("class of a basis cycle is reachable");
            let value = f_weight_even(a, d, c)?;
            let diff = (&value - &class.value).magnitude();
            if diff > CLASS_TOL * f0.abs() {
                error = Some(format!(
                    "fundamental cycle {idx} has weight {value}, its class {mask:#b} has {}",
                    class.value
                ));
                break;
            }
        }
    }
    Ok((classes, error))
}

fn class_sign(value: &Multicomplex, mask: usize, f0: f64) -> std::result::Result<f64, String> {
    match value.as_monomial(CLASS_TOL) {
        Some((m, c)) if m == mask && ((c / f0).abs() - 1.0).abs() < CLASS_TOL => Ok((c / f0).signum()),
        _ => Err(format!("weight {value} is not +-f0 i_S with f0 = {f0}")),
    }
}

/// `(1/f0) sum_S sign_S (-1)^{|S|} i_S`, so that `Re(lambda * F(C)) = 1`
/// for a curve in any listed class.
fn lambda_from_classes(n: usize, f0: f64, classes: &[ParityClass]) -> Multicomplex {
    let mut lambda = Multicomplex::zero(n);
    for k in classes {
        let sign = if k.mask.count_ones() % 2 == 0 { k.sign } else { -k.sign };
        lambda = &lambda + &Multicomplex::monomial(n, k.mask, sign / f0);
    }
    lambda
}

/// A 4-regular graph with cycle faces on the same surface, containing the
/// input as a minor.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub graph: Graph,
    pub scheme: EmbeddingScheme,
    /// Transform from `graph` back to the input graph.
    pub transform: MinorTransform,
}

/// 4-regularizes and then subdivides until all faces are cycles.
pub fn prepare(g: &Graph, s: &EmbeddingScheme) -> Result<Prepared> {
    let (g1, s1, t1) = four_regularize(g, s)?;
    let (g2, s2, t2) = subdivide_to_cycle_faces(&g1, &s1)?;
    let transform = crate::graph::compose(&t2, &t1)?;
    Ok(Prepared {
        graph: g2,
        scheme: s2,
        transform,
    })
}
