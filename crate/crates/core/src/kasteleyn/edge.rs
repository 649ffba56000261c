//! Link entries: edge equations, matrix assembly and the cycle-equation
//! sign pass.

use super::site::{cycle_ratios, reordered_at, CycleWalk, SiteAssignment};
use crate::algebra::{CharacterMap, Multicomplex, Scalar};
use crate::bits::{gf2_solve, BitSet};
use crate::dart::{f_weight_even, DartGraph};
use crate::graph::{ClosedCurve, CycleBasis, EmbeddingScheme, Graph};
use crate::pfaffian::{character_image, SkewMatrix};
use crate::{Error, Result};
use num_complex::Complex64;

const RHS_TOL: f64 = 1e-9;

/// Link entry `b_e = A((v,e),(w,e))` for `v < w` in dart order, per edge.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeAssignment {
    pub b: Vec<Complex64>,
}

impl EdgeAssignment {
    pub fn is_real(&self) -> bool {
        self.b.iter().all(|z| z.im == 0.0)
    }
}

/// Right-hand side `-R_v R_w` of the edge equation of every edge on some
/// basis cycle, checked for agreement between cycles.
pub fn edge_equation_rhs(g: &Graph, site: &SiteAssignment, basis: &CycleBasis) -> Result<Vec<Option<f64>>> {
    let mut rhs: Vec<Option<f64>> = vec![None; g.n_edges()];
    for c in &basis.cycles {
        let walk = CycleWalk::from_curve(g, c)?;
        let r = cycle_ratios(g, site, &walk)?;
        let k = walk.len();
        for i in 0..k {
            let e = walk.edges[i];
            // outgoing ratio at step i, incoming ratio at step i + 1
            let x = -r[2 * i].value * r[2 * ((i + 1) % k) + 1].value;
            match rhs[e] {
                Some(y) if (x - y).abs() > RHS_TOL * x.abs().max(y.abs()) => {
                    return Err(Error::InconsistentEdge { edge: e, a: y, b: x });
                }
                _ => rhs[e] = Some(x),
            }
        }
    }
    Ok(rhs)
}

/// Principal square roots of the edge-equation right-hand sides; edges on
/// no basis cycle get `1`.
pub fn solve_edge_equations(g: &Graph, site: &SiteAssignment, basis: &CycleBasis) -> Result<EdgeAssignment> {
    let rhs = edge_equation_rhs(g, site, basis)?;
    let b = rhs
        .into_iter()
        .map(|x| match x {
            None => Complex64::new(1.0, 0.0),
            Some(x) if x >= 0.0 => Complex64::new(x.sqrt(), 0.0),
            Some(x) => Complex64::new(0.0, (-x).sqrt()),
        })
        .collect();
    Ok(EdgeAssignment { b })
}

/// `prod_{k in list} i_k` (1-based crosscap ids) as a multicomplex number.
fn crosscap_monomial(n: usize, list: &[usize]) -> Multicomplex {
    let mut m = Multicomplex::one(n);
    for &k in list {
        m = &m * &Multicomplex::generator(n, k - 1);
    }
    m
}

/// Link entry of edge `e` in the multicomplex algebra: `b_e` with one
/// factor `i` traded for the crosscap generators the edge passes through.
pub fn link_entry(e: usize, b: Complex64, s: &EmbeddingScheme) -> Result<Multicomplex> {
    let list = s.crosscaps.get(e).map(Vec::as_slice).unwrap_or(&[]);
    let x = if list.len() % 2 == 1 {
        b * Complex64::new(0.0, -1.0)
    } else {
        b
    };
    if x.im.abs() > RHS_TOL * x.norm().max(1.0) {
        return Err(Error::SchemeInvalid(format!(
            "edge {e}: link entry {b} does not match its crosscap list {list:?}"
        )));
    }
    Ok(crosscap_monomial(s.n_crosscaps, list).scale(x.re))
}

/// The dart-indexed matrix from site blocks and link entries.
pub fn assemble(
    d: &DartGraph,
    site: &SiteAssignment,
    edges: &EdgeAssignment,
    s: &EmbeddingScheme,
) -> Result<SkewMatrix<Multicomplex>> {
    let g = d.graph();
    let n = s.n_crosscaps;
    let mut a = SkewMatrix::zeros(d.n_darts(), Multicomplex::zero(n)).with_labels(d.labels());
    for v in 0..g.n_vertices() {
        let blk = &site.blocks[v];
        let r: Vec<usize> = d.block(v).collect();
        for x in 0..r.len() {
            for y in x + 1..r.len() {
                a.set(r[x], r[y], Multicomplex::real(n, blk.entry(x, y)));
            }
        }
    }
    for e in 0..g.n_edges() {
        let (x, y) = d.link(e);
        a.set(x, y, link_entry(e, edges.b[e], s)?);
    }
    Ok(a)
}

/// Image of a multicomplex matrix under the character sending every
/// generator to `i`.
pub fn principal_image(a: &SkewMatrix<Multicomplex>) -> SkewMatrix<Complex64> {
    let n = a.zero().n();
    character_image(a, &CharacterMap::from_index(n, 0))
}

/// Cycle-equation data for one basis cycle.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleResidual {
    pub cycle: usize,
    /// `F(gamma) / F(empty)` under the principal character.
    pub ratio: Complex64,
    /// `+1` when the cycle equation already holds.
    pub epsilon: i8,
    /// Product of the signed link entries `B_i` along the cycle.
    pub b_product: Complex64,
    /// Product of the `U` site entries at the corners of the cycle.
    pub u_product: f64,
}

/// Evaluates the cycle equations of `basis` on the assembled matrix.
pub fn cycle_equation_residuals(
    d: &DartGraph,
    site: &SiteAssignment,
    edges: &EdgeAssignment,
    basis: &CycleBasis,
    s: &EmbeddingScheme,
) -> Result<Vec<CycleResidual>> {
    let g = d.graph();
    let a = principal_image(&assemble(d, site, edges, s)?);
    let f0 = f_weight_even(&a, d, &ClosedCurve::empty(g))?;
    let mut out = Vec::with_capacity(basis.len());
    for (idx, c) in basis.cycles.iter().enumerate() {
        let ratio = f_weight_even(&a, d, c)? / f0;
        if ratio.im.abs() > RHS_TOL * ratio.norm() || ratio.norm() < RHS_TOL {
            return Err(Error::SchemeInvalid(format!(
                "cycle {idx}: weight ratio {ratio} is not a nonzero real"
            )));
        }
        let walk = CycleWalk::from_curve(g, c)?;
        let mut b_product = Complex64::new(1.0, 0.0);
        let mut u_product = 1.0;
        for i in 0..walk.len() {
            let e = walk.edges[i];
            let v = walk.vertices[i];
            let sign = if d.index(v, e) == d.link(e).0 { 1.0 } else { -1.0 };
            b_product *= edges.b[e] * sign;
            u_product *= reordered_at(g, site, &walk, i).u;
        }
        out.push(CycleResidual {
            cycle: idx,
            ratio,
            epsilon: if ratio.re > 0.0 { 1 } else { -1 },
            b_product,
            u_product,
        });
    }
    Ok(out)
}

/// Flips link-entry signs so that every basis cycle has the weight of the
/// empty curve, by solving `prod_{e in gamma} eps_e = eps_gamma` over GF(2).
pub fn solve_cycle_equations(
    d: &DartGraph,
    site: &SiteAssignment,
    edges: &EdgeAssignment,
    basis: &CycleBasis,
    s: &EmbeddingScheme,
) -> Result<EdgeAssignment> {
    let res = cycle_equation_residuals(d, site, edges, basis, s)?;
    let rows: Vec<BitSet> = basis.cycles.iter().map(|c| c.edges().clone()).collect();
    let rhs: Vec<bool> = res.iter().map(|r| r.epsilon < 0).collect();
    let flips = gf2_solve(&rows, &rhs, d.graph().n_edges()).ok_or(Error::BasisDependent)?;
    let b = edges
        .b
        .iter()
        .zip(flips)
        .map(|(&b, f)| if f { -b } else { b })
        .collect();
    Ok(EdgeAssignment { b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::face_boundary_basis;
    use crate::kasteleyn::solve_site_equations;

    fn solve(g: &Graph, s: &EmbeddingScheme) -> (DartGraph, SiteAssignment, EdgeAssignment, CycleBasis) {
        let basis = face_boundary_basis(g, s).unwrap();
        let site = solve_site_equations(g, &basis, s).unwrap();
        let edges = solve_edge_equations(g, &site, &basis).unwrap();
        (DartGraph::new(g).unwrap(), site, edges, basis)
    }

    #[test]
    fn planar_scheme_gives_real_links() {
        let (g, s) = fixtures::octahedron_planar();
        let (_, _, edges, _) = solve(&g, &s);
        assert!(edges.is_real());
        assert!(edges.b.iter().all(|b| (b.norm() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn projective_k5_has_imaginary_crosscap_edges() {
        let (g, s) = fixtures::k5_projective();
        let (_, _, edges, _) = solve(&g, &s);
        for e in 0..g.n_edges() {
            assert_eq!(edges.b[e].im != 0.0, s.signature(e) < 0, "edge {e}");
        }
    }

    #[test]
    fn rhs_does_not_depend_on_direction() {
        for (g, s) in [fixtures::octahedron_planar(), fixtures::k5_projective()] {
            let basis = face_boundary_basis(&g, &s).unwrap();
            let site = solve_site_equations(&g, &basis, &s).unwrap();
            for c in &basis.cycles {
                let w = CycleWalk::from_curve(&g, c).unwrap();
                let one = |w: &CycleWalk| {
                    let r = cycle_ratios(&g, &site, w).unwrap();
                    let k = w.len();
                    let mut m: Vec<(usize, f64)> = (0..k)
                        .map(|i| (w.edges[i], -r[2 * i].value * r[2 * ((i + 1) % k) + 1].value))
                        .collect();
                    m.sort_by_key(|p| p.0);
                    m
                };
                assert_eq!(one(&w), one(&w.reversed()));
            }
        }
    }

    #[test]
    fn cycle_equations_hold_after_sign_pass() {
        for (g, s) in [fixtures::octahedron_planar(), fixtures::k5_projective()] {
            let (d, site, edges, basis) = solve(&g, &s);
            let fixed = solve_cycle_equations(&d, &site, &edges, &basis, &s).unwrap();
            let res = cycle_equation_residuals(&d, &site, &fixed, &basis, &s).unwrap();
            for r in res {
                assert_eq!(r.epsilon, 1);
                assert!((r.ratio - 1.0).norm() < 1e-9, "{:?}", r.ratio);
            }
        }
    }

    #[test]
    fn odd_crosscap_edge_needs_imaginary_entry() {
        let (_, s) = fixtures::k5_projective();
        let e = (0..10).find(|&e| s.signature(e) < 0).unwrap();
        assert!(link_entry(e, Complex64::new(1.0, 0.0), &s).is_err());
        let m = link_entry(e, Complex64::new(0.0, 2.0), &s).unwrap();
        assert_eq!(m.as_monomial(1e-12), Some((1, 2.0)));
    }
}
