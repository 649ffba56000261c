//! The product identities on K3,3 and K5 that rule out a constant
//! closed-curve weight, checked on arbitrary incidence matrices.

use crate::dart::{canonical_matching, f_weight_table, DartGraph};
use crate::fixtures;
use crate::graph::{ClosedCurve, Graph};
use crate::pfaffian::SkewMatrix;
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Obstruction {
    K33,
    K5,
}

impl std::str::FromStr for Obstruction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "k33" | "k3,3" | "k3-3" => Ok(Obstruction::K33),
            "k5" => Ok(Obstruction::K5),
            _ => Err(Error::InvalidGraph(format!("unknown obstruction graph {s:?}"))),
        }
    }
}

/// Edge labels of a cycle written as alternating `vertex, edge` labels.
/// K3,3: vertices `a..f`, edges `1..9` with `1 = ad, 2 = ae, 3 = af, 4 = bd,
/// 5 = be, 6 = bf, 7 = cd, 8 = ce, 9 = cf`. K5: vertices `a..e`, edges
/// `0..9` with `0 = ab, 1 = bc, 2 = cd, 3 = de, 4 = ae, 5 = ac, 6 = ad,
/// 7 = bd, 8 = be, 9 = ce`.
type Family = [&'static [u8]];

const K33_S: &Family = &[&[1, 4, 6, 9, 8, 2], &[1, 7, 9, 3], &[4, 7, 8, 5]];
const K33_S_PRIME: &Family = &[&[1, 4, 5, 8, 9, 3], &[1, 7, 8, 2], &[4, 7, 9, 6]];
const K33_VERTS: &[&str] = &["adbfce", "adcf", "bdce"];
const K33_VERTS_PRIME: &[&str] = &["adbecf", "adce", "bdcf"];

const K5_S: &Family = &[&[4, 3, 6], &[0, 1, 2, 6], &[0, 7, 2, 9, 4], &[0, 8, 3, 2, 5]];
const K5_S_PRIME: &Family = &[&[4, 9, 2, 6], &[0, 8, 3, 6], &[0, 7, 2, 5], &[0, 1, 2, 3, 4]];
const K5_VERTS: &[&str] = &["aed", "abcd", "abdce", "abedc"];
const K5_VERTS_PRIME: &[&str] = &["aecd", "abed", "abdc", "abcde"];

impl Obstruction {
    pub fn graph(self) -> Graph {
        match self {
            Obstruction::K33 => fixtures::k33(),
            Obstruction::K5 => fixtures::k5(),
        }
    }

    /// The two cycle families `S` and `S'`.
    pub fn families(self) -> Result<(Vec<ClosedCurve>, Vec<ClosedCurve>)> {
        let g = self.graph();
        let (s, sp, vs, vsp, offset) = match self {
            Obstruction::K33 => (K33_S, K33_S_PRIME, K33_VERTS, K33_VERTS_PRIME, 1),
            Obstruction::K5 => (K5_S, K5_S_PRIME, K5_VERTS, K5_VERTS_PRIME, 0),
        };
        let build = |fam: &Family, verts: &[&str]| -> Result<Vec<ClosedCurve>> {
            fam.iter()
                .zip(verts)
                .map(|(edges, vs)| {
                    let ids: Vec<usize> = edges.iter().map(|&x| x as usize - offset).collect();
                    check_walk(&g, vs, &ids)?;
                    ClosedCurve::from_edge_ids(&g, &ids)
                })
                .collect()
        };
        Ok((build(s, vs)?, build(sp, vsp)?))
    }
}

/// Checks that the labelled walk `v0 e0 v1 e1 ...` is a closed walk of `g`.
fn check_walk(g: &Graph, verts: &str, edges: &[usize]) -> Result<()> {
    let vs: Vec<usize> = verts.bytes().map(|b| (b - b'a') as usize).collect();
    for (i, &e) in edges.iter().enumerate() {
        let (a, b) = (vs[i], vs[(i + 1) % vs.len()]);
        if g.edge_between(a, b) != Some(e) {
            return Err(Error::NotACycle(format!("edge {e} does not join {a} and {b}")));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionReport {
    pub which: Obstruction,
    pub f_s: Vec<f64>,
    pub f_s_prime: Vec<f64>,
    /// `prod F(gamma_i)`.
    pub lhs: f64,
    /// `-prod F(gamma_i')`.
    pub rhs: f64,
    /// `|lhs - rhs| / max(|lhs|, |rhs|)`, or `0` when both vanish.
    pub relative_difference: f64,
    /// Both products are zero.
    pub degenerate: bool,
}

impl ObstructionReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.relative_difference <= tol
    }
}

/// Evaluates both cycle families on `a` against the canonical reference.
pub fn obstruction_check(which: Obstruction, a: &SkewMatrix<f64>) -> Result<ObstructionReport> {
    let g = which.graph();
    let d = DartGraph::new(&g)?;
    d.check_zero_pattern(a)?;
    let table = f_weight_table(a, &d, &canonical_matching(&d))?;
    let (s, sp) = which.families()?;
    let f = |c: &ClosedCurve| table.get(c.edges()).copied().unwrap_or(0.0);
    let f_s: Vec<f64> = s.iter().map(f).collect();
    let f_s_prime: Vec<f64> = sp.iter().map(f).collect();
    let lhs: f64 = f_s.iter().product();
    let rhs: f64 = -f_s_prime.iter().product::<f64>();
    let scale = lhs.abs().max(rhs.abs());
    let degenerate = scale == 0.0;
    let relative_difference = if degenerate { 0.0 } else { (lhs - rhs).abs() / scale };
    Ok(ObstructionReport {
        which,
        f_s,
        f_s_prime,
        lhs,
        rhs,
        relative_difference,
        degenerate,
    })
}

/// Entries uniform in `(-1, 1)` on every dart-graph edge, zero elsewhere.
pub fn random_incidence_matrix<R: Rng>(d: &DartGraph, rng: &mut R) -> SkewMatrix<f64> {
    SkewMatrix::from_fn(d.n_darts(), 0.0, |i, j| {
        if d.is_edge(i, j) {
            rng.gen_range(-1.0..1.0)
        } else {
            0.0
        }
    })
    .with_labels(d.labels())
}

/// Runs [`obstruction_check`] on `trials` random matrices. Trial `i` draws
/// from its own generator seeded with `seed + i`, so the result does not
/// depend on scheduling.
pub fn obstruction_trials(which: Obstruction, trials: usize, seed: u64) -> Result<Vec<ObstructionReport>> {
    let d = DartGraph::new(&which.graph())?;
    (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i));
            obstruction_check(which, &random_incidence_matrix(&d, &mut rng))
        })
        .collect()
}
