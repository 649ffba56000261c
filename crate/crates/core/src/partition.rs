//! Partition functions of the closed-curve model and of the Ising model.

use crate::algebra::{even_subalgebra_embed, CharacterMap, EvenElement, Multicomplex, RealPart};
use crate::graph::{closed_curves, trace_faces, EmbeddingScheme, Graph};
use crate::kasteleyn::{build_kasteleyn, extend_weights, modified_matrix, prepare, weighted_matrix};
use crate::kasteleyn::{reduce_to_minor, reference_weight, IncidenceMatrix, KasteleynBuild, Prepared};
use crate::pfaffian::{character_image, pfaffian, SkewMatrix};
use crate::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;

/// Largest vertex count for the spin-sum oracle.
pub const MAX_SPIN_VERTICES: usize = 20;

/// `sum_C prod_{e in C} w(e)` over all closed curves.
pub fn z_bruteforce(g: &Graph, w: &[f64]) -> Result<f64> {
    check_len(g, w)?;
    let mut z = 0.0;
    for c in closed_curves(g)? {
        z += c.edges().iter().map(|e| w[e]).product::<f64>();
    }
    Ok(z)
}

fn check_len(g: &Graph, w: &[f64]) -> Result<()> {
    if w.len() != g.n_edges() {
        return Err(Error::InvalidGraph(format!(
            "{} weights for {} edges",
            w.len(),
            g.n_edges()
        )));
    }
    Ok(())
}

fn check_positive(w: &[f64]) -> Result<()> {
    match w.iter().enumerate().find(|(_, x)| !x.is_finite() || **x <= 0.0) {
        Some((e, &x)) => Err(Error::NonPositiveWeight { edge: e, value: x }),
        None => Ok(()),
    }
}

/// Evaluation route.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Brute,
    Planar,
    Multicomplex,
    ComplexSum,
    RealSum,
    Auto,
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "brute" => Method::Brute,
            "planar" => Method::Planar,
            "multicomplex" => Method::Multicomplex,
            "complex-sum" => Method::ComplexSum,
            "real-sum" => Method::RealSum,
            "auto" => Method::Auto,
            _ => return Err(Error::InvalidScheme(format!("unknown method {s:?}"))),
        })
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Brute => "brute",
            Method::Planar => "planar",
            Method::Multicomplex => "multicomplex",
            Method::ComplexSum => "complex-sum",
            Method::RealSum => "real-sum",
            Method::Auto => "auto",
        })
    }
}

/// A built incidence matrix for one graph and scheme, reusable across
/// weight functions.
///
/// The matrix lives on a 4-regular graph `G~` with cycle faces that has the
/// input as a minor. Curves through deleted helper edges are removed from
/// the expansion and the remaining helpers carry weight 1, so the Pfaffian
/// of `G~` already gives the partition function of the input.
#[derive(Clone, Debug)]
pub struct PfaffianEvaluator {
    pub graph: Graph,
    pub prepared: Prepared,
    pub build: KasteleynBuild,
    pub planar: bool,
    matrix: IncidenceMatrix<Multicomplex>,
}

impl PfaffianEvaluator {
    pub fn new(g: &Graph, s: &EmbeddingScheme) -> Result<Self> {
        let planar = trace_faces(g, s)?.is_planar();
        let prepared = prepare(g, s)?;
        let build = build_kasteleyn(&prepared.graph, &prepared.scheme)?;
        let matrix = modified_matrix(&build.matrix, &prepared.transform.deleted)?;
        Ok(PfaffianEvaluator {
            graph: g.clone(),
            prepared,
            build,
            planar,
            matrix,
        })
    }

    pub fn n_crosscaps(&self) -> usize {
        self.build.n_crosscaps()
    }

    fn weighted(&self, w: &[f64]) -> Result<(SkewMatrix<Multicomplex>, f64)> {
        check_len(&self.graph, w)?;
        check_positive(w)?;
        let wt = extend_weights(&self.prepared.transform, w)?;
        Ok((
            weighted_matrix(&self.matrix, &wt)?,
            reference_weight(self.matrix.reference, &wt),
        ))
    }

    /// Single real Pfaffian; genus-0 schemes only.
    pub fn planar(&self, w: &[f64]) -> Result<f64> {
        if !self.planar {
            return Err(Error::NotPlanar);
        }
        let (a, pre) = self.weighted(w)?;
        let real = a.map(0.0, Multicomplex::re);
        Ok(self.matrix.lambda.re() * pre * pfaffian(&real)?)
    }

    /// `Re(lambda * Pf)` with multicomplex entries.
    pub fn multicomplex(&self, w: &[f64]) -> Result<f64> {
        self.build.validated()?;
        let (a, pre) = self.weighted(w)?;
        let pf = pfaffian(&a)?;
        Ok(pre * (&self.matrix.lambda * &pf).real_part())
    }

    /// `Re sum_j H_j(lambda) Pf(H_j(A)) / 2^n` over all complex characters.
    pub fn complex_sum(&self, w: &[f64]) -> Result<f64> {
        Ok(self.complex_terms(w)?.iter().sum::<Complex64>().re)
    }

    /// The `2^n` terms of the complex character expansion.
    pub fn complex_terms(&self, w: &[f64]) -> Result<Vec<Complex64>> {
        self.build.validated()?;
        let (a, pre) = self.weighted(w)?;
        let n = self.n_crosscaps();
        let norm = pre / (1u64 << n) as f64;
        CharacterMap::all(n)
            .par_iter()
            .map(|h| {
                let lam = h.apply(&self.matrix.lambda)?;
                Ok(lam * pfaffian(&character_image(&a, h))? * norm)
            })
            .collect()
    }

    /// Sum of real Pfaffians over the real characters of the even
    /// subalgebra; needs every entry to pass through crosscaps an even
    /// number of times in total.
    pub fn real_sum(&self, w: &[f64]) -> Result<f64> {
        Ok(self.real_terms(w)?.iter().sum())
    }

    pub fn real_terms(&self, w: &[f64]) -> Result<Vec<f64>> {
        self.build.validated()?;
        let (a, pre) = self.weighted(w)?;
        let n = self.n_crosscaps();
        if n == 0 {
            return Ok(vec![
                self.matrix.lambda.re() * pre * pfaffian(&a.map(0.0, Multicomplex::re))?,
            ]);
        }
        let embed = |x: &Multicomplex| even_subalgebra_embed(x).map_err(|_| Error::NotOrientableDerived);
        let lambda = embed(&self.matrix.lambda)?;
        let mut entries: Vec<(usize, usize, EvenElement)> = Vec::new();
        for (i, j, x) in a.entries() {
            entries.push((i, j, embed(x)?));
        }
        let m = n - 1;
        let norm = pre / (1u64 << m) as f64;
        (0..1usize << m)
            .into_par_iter()
            .map(|idx| {
                let signs: Vec<i8> = (0..m).map(|k| if idx >> k & 1 == 1 { -1 } else { 1 }).collect();
                let mut r = SkewMatrix::zeros(a.order(), 0.0);
                for (i, j, x) in &entries {
                    r.set(*i, *j, x.real_character(&signs));
                }
                Ok(lambda.real_character(&signs) * pfaffian(&r)? * norm)
            })
            .collect()
    }

    /// The built matrix reduced onto the dart graph of the input graph.
    pub fn reduced(&self) -> Result<IncidenceMatrix<Multicomplex>> {
        reduce_to_minor(&self.build.matrix, &self.prepared.transform)
    }

    pub fn evaluate(&self, method: Method, w: &[f64]) -> Result<f64> {
        match method {
            Method::Brute => z_bruteforce(&self.graph, w),
            Method::Planar => self.planar(w),
            Method::Multicomplex => self.multicomplex(w),
            Method::ComplexSum => self.complex_sum(w),
            Method::RealSum => self.real_sum(w),
            Method::Auto if self.planar => self.planar(w),
            Method::Auto => self.multicomplex(w),
        }
    }
}

/// `Re(lambda * w(M0 & E) * Pf(A(w)))` for a matrix on any graph, for
/// instance one produced by a minor reduction.
pub fn z_from_incidence(a: &IncidenceMatrix<Multicomplex>, w: &[f64]) -> Result<f64> {
    let m = weighted_matrix(a, w)?;
    Ok(reference_weight(a.reference, w) * (&a.lambda * &pfaffian(&m)?).real_part())
}

/// Planar route: one real Pfaffian.
pub fn z_pfaffian_planar(g: &Graph, s: &EmbeddingScheme, w: &[f64]) -> Result<f64> {
    if !trace_faces(g, s)?.is_planar() {
        return Err(Error::NotPlanar);
    }
    PfaffianEvaluator::new(g, s)?.planar(w)
}

pub fn z_multicomplex(g: &Graph, s: &EmbeddingScheme, w: &[f64]) -> Result<f64> {
    PfaffianEvaluator::new(g, s)?.multicomplex(w)
}

pub fn z_complex_sum(g: &Graph, s: &EmbeddingScheme, w: &[f64]) -> Result<f64> {
    PfaffianEvaluator::new(g, s)?.complex_sum(w)
}

pub fn z_real_sum(g: &Graph, s: &EmbeddingScheme, w: &[f64]) -> Result<f64> {
    PfaffianEvaluator::new(g, s)?.real_sum(w)
}

/// Dispatches on `method`; every route except brute force needs a scheme.
pub fn z_by_method(g: &Graph, s: Option<&EmbeddingScheme>, w: &[f64], method: Method) -> Result<f64> {
    if method == Method::Brute {
        return z_bruteforce(g, w);
    }
    let s = s.ok_or(Error::MissingScheme)?;
    PfaffianEvaluator::new(g, s)?.evaluate(method, w)
}

/// Ferromagnetic Ising model with couplings `J_e >= 0` at inverse
/// temperature `beta > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct IsingModel {
    pub graph: Graph,
    pub couplings: Vec<f64>,
    pub beta: f64,
}

impl IsingModel {
    pub fn new(graph: Graph, couplings: Vec<f64>, beta: f64) -> Result<Self> {
        check_len(&graph, &couplings)?;
        if let Some((e, &j)) = couplings.iter().enumerate().find(|(_, j)| !j.is_finite() || **j < 0.0) {
            return Err(Error::NonPositiveWeight { edge: e, value: j });
        }
        if !beta.is_finite() || beta <= 0.0 {
            return Err(Error::InvalidGraph(format!(
                "inverse temperature must be positive, got {beta}"
            )));
        }
        Ok(IsingModel { graph, couplings, beta })
    }

    /// Curve weights `tanh(beta J_e)`.
    pub fn curve_weights(&self) -> Vec<f64> {
        self.couplings.iter().map(|j| (self.beta * j).tanh()).collect()
    }

    /// `2^|V| prod_e cosh(beta J_e)`.
    pub fn prefactor(&self) -> f64 {
        2f64.powi(self.graph.n_vertices() as i32)
            * self.couplings.iter().map(|j| (self.beta * j).cosh()).product::<f64>()
    }
}

/// `2^|V| prod cosh(beta J_e) Z_G(tanh(beta J))` by the chosen route.
pub fn ising_z(m: &IsingModel, s: Option<&EmbeddingScheme>, method: Method) -> Result<f64> {
    if !m.graph.is_two_connected() {
        return Err(Error::NotTwoConnected);
    }
    Ok(m.prefactor() * z_by_method(&m.graph, s, &m.curve_weights(), method)?)
}

/// Direct sum of `exp(beta sum_e J_e s_v s_w)` over all spin states.
pub fn ising_bruteforce(m: &IsingModel) -> Result<f64> {
    let n = m.graph.n_vertices();
    if n > MAX_SPIN_VERTICES {
        return Err(Error::SizeGuard {
            what: "spin-sum vertex count",
            limit: MAX_SPIN_VERTICES,
            got: n,
        });
    }
    let edges = m.graph.edges();
    let z = (0u32..1 << n)
        .into_par_iter()
        .map(|state| {
            let energy: f64 = edges
                .iter()
                .zip(&m.couplings)
                .map(|(&(a, b), j)| if (state >> a & 1) == (state >> b & 1) { *j } else { -j })
                .sum();
            (m.beta * energy).exp()
        })
        .sum();
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs())
    }

    #[test]
    fn bruteforce_small_cases() {
        assert!(close(z_bruteforce(&fixtures::k3(), &[0.5; 3]).unwrap(), 1.125, 1e-15));
        assert!(close(z_bruteforce(&fixtures::c4(), &[0.5; 4]).unwrap(), 1.0625, 1e-15));
        assert_eq!(z_bruteforce(&fixtures::k5(), &[0.0; 10]).unwrap(), 1.0);
    }

    #[test]
    fn planar_k3_matches_bruteforce() {
        let (g, s) = fixtures::k3_planar();
        let w = [0.3, 0.7, 0.45];
        assert!(close(
            z_pfaffian_planar(&g, &s, &w).unwrap(),
            z_bruteforce(&g, &w).unwrap(),
            1e-9
        ));
    }

    #[test]
    fn small_weights_tend_to_one() {
        let (g, s) = fixtures::grid_planar(3, 3);
        let z = z_pfaffian_planar(&g, &s, &vec![1e-9; g.n_edges()]).unwrap();
        assert!((z - 1.0).abs() < 1e-9);
    }

    #[test]
    fn projective_k5_routes_agree() {
        let (g, s) = fixtures::k5_projective();
        let w: Vec<f64> = (0..10).map(|e| 0.1 + 0.08 * e as f64).collect();
        let ev = PfaffianEvaluator::new(&g, &s).unwrap();
        let brute = z_bruteforce(&g, &w).unwrap();
        assert!(close(ev.multicomplex(&w).unwrap(), brute, 1e-9));
        assert!(close(ev.complex_sum(&w).unwrap(), brute, 1e-9));
        assert_eq!(ev.complex_terms(&w).unwrap().len(), 2);
        assert_eq!(ev.planar(&w).unwrap_err(), Error::NotPlanar);
        assert_eq!(ev.real_sum(&w).unwrap_err(), Error::NotOrientableDerived);
    }

    #[test]
    fn ising_triangle() {
        let m = IsingModel::new(fixtures::k3(), vec![0.8; 3], 0.6).unwrap();
        let bj: f64 = 0.48;
        let expect = 2.0 * ((3.0 * bj).exp() + 3.0 * (-bj).exp());
        assert!(close(ising_bruteforce(&m).unwrap(), expect, 1e-12));
        assert!(close(ising_z(&m, None, Method::Brute).unwrap(), expect, 1e-12));
    }

    #[test]
    fn ising_rejects_bridge() {
        let g = Graph::new(2, vec![(0, 1)]).unwrap();
        let m = IsingModel::new(g, vec![1.0], 1.0).unwrap();
        assert_eq!(ising_z(&m, None, Method::Brute).unwrap_err(), Error::NotTwoConnected);
    }
}
