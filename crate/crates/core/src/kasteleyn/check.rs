//! Curve-by-curve check of the matching-sum weights of an incidence matrix.

use super::build::{crosscap_parity, IncidenceMatrix, Reference};
use crate::algebra::{Multicomplex, RealPart};
use crate::dart::{f_weight_even, f_weight_table, MAX_ENUM_DARTS};
use crate::graph::{closed_curves, EmbeddingScheme};
use crate::{Error, Result};

/// Largest cycle-space dimension for which every curve is checked.
pub const MAX_CHECK_BETTI: usize = 20;

const MONOMIAL_TOL: f64 = 1e-9;

/// Curves sharing one crosscap-parity mask.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveClass {
    pub mask: usize,
    pub curves: usize,
    /// Weight of the first curve of the class.
    pub value: Multicomplex,
    /// Largest `|F(C) - value| / |value|` over the class.
    pub spread: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightReport {
    pub curves: usize,
    pub classes: Vec<CurveClass>,
    /// Every weight is a nonzero multiple of `i_mask` for its class mask.
    pub monomial: bool,
    /// Largest `|Re(lambda F(C)) - 1|`.
    pub lambda_error: f64,
    /// `true` when the weights came from enumerating matchings rather than
    /// from the per-vertex closed form.
    pub enumerated: bool,
}

impl WeightReport {
    pub fn spread(&self) -> f64 {
        self.classes.iter().map(|c| c.spread).fold(0.0, f64::max)
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.monomial && self.spread() <= tol && self.lambda_error <= tol
    }
}

/// Computes `F(C)` for every closed curve of `a.graph` and groups the
/// values by crosscap parity under `s` (a scheme on the same graph).
///
/// Matchings are enumerated when the dart graph is small enough; otherwise
/// the link-free reference allows the per-vertex closed form.
pub fn curve_weight_report(a: &IncidenceMatrix<Multicomplex>, s: &EmbeddingScheme) -> Result<WeightReport> {
    let g = &a.graph;
    let beta = g.first_betti()?;
    if beta > MAX_CHECK_BETTI {
        return Err(Error::SizeGuard {
            what: "cycle-space dimension",
            limit: MAX_CHECK_BETTI,
            got: beta,
        });
    }
    let d = a.dart_graph()?;
    let enumerated = d.n_darts() <= MAX_ENUM_DARTS;
    let table = if enumerated {
        Some(f_weight_table(&a.matrix, &d, &a.reference_matching(&d)?)?)
    } else if a.reference == Reference::EvenDegree {
        None
    } else {
        return Err(Error::SizeGuard {
            what: "dart count",
            limit: MAX_ENUM_DARTS,
            got: d.n_darts(),
        });
    };
    let zero = a.matrix.zero().clone();
    let mut classes: Vec<CurveClass> = Vec::new();
    let mut monomial = true;
    let mut lambda_error: f64 = 0.0;
    let mut curves = 0;
    for c in closed_curves(g)? {
        curves += 1;
        let f = match &table {
            Some(t) => t.get(c.edges()).cloned().unwrap_or_else(|| zero.clone()),
            None => f_weight_even(&a.matrix, &d, &c)?,
        };
        let mask = crosscap_parity(s, &c);
        match f.as_monomial(MONOMIAL_TOL) {
            Some((m, x)) if m == mask && x != 0.0 => {}
            _ => monomial = false,
        }
        lambda_error = lambda_error.max(((&a.lambda * &f).real_part() - 1.0).abs());
        match classes.iter_mut().find(|k| k.mask == mask) {
            Some(k) => {
                k.curves += 1;
                let scale = k.value.coeffs().iter().fold(0.0f64, |m, x| m.max(x.abs()));
                let diff = (&f - &k.value).coeffs().iter().fold(0.0f64, |m, x| m.max(x.abs()));
                k.spread = k.spread.max(if scale > 0.0 { diff / scale } else { f64::INFINITY });
            }
            None => classes.push(CurveClass {
                mask,
                curves: 1,
                value: f,
                spread: 0.0,
            }),
        }
    }
    classes.sort_by_key(|k| k.mask);
    Ok(WeightReport {
        curves,
        classes,
        monomial,
        lambda_error,
        enumerated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::kasteleyn::build_kasteleyn;

    #[test]
    fn projective_k5_has_two_classes() {
        let (g, s) = fixtures::k5_projective();
        let b = build_kasteleyn(&g, &s).unwrap();
        let r = curve_weight_report(&b.matrix, &s).unwrap();
        assert_eq!(r.curves, 64);
        assert!(r.enumerated);
        assert_eq!(r.classes.iter().map(|c| c.mask).collect::<Vec<_>>(), vec![0, 1]);
        assert!(r.holds(1e-9), "{r:?}");
    }

    #[test]
    fn closed_form_path_on_larger_graph() {
        let (g, s) = fixtures::torus_grid3x3_even();
        let b = build_kasteleyn(&g, &s).unwrap();
        let r = curve_weight_report(&b.matrix, &s).unwrap();
        assert!(!r.enumerated);
        assert_eq!(r.curves, 1024);
        assert!(r.holds(1e-9), "{r:?}");
    }

    #[test]
    fn orientable_torus_scheme_fails() {
        let (g, s) = fixtures::torus_grid3x3_orientable();
        let b = build_kasteleyn(&g, &s).unwrap();
        let r = curve_weight_report(&b.matrix, &s).unwrap();
        assert!(!r.holds(1e-9));
    }
}
