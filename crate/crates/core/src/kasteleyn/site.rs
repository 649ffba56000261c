//! Site blocks: the 4x4 vertex-internal part of an incidence matrix on a
//! 4-regular graph, their reorderings along a cycle, and the site equations.

use crate::graph::{trace_faces, CycleBasis, EmbeddingScheme, Face, Graph};
use crate::{Error, Result};

/// The six upper entries of a site block, in `E(v)` position order
/// `e1 < e2 < e3 < e4`:
/// `s = A(e1,e2)`, `s_bar = A(e3,e4)`, `t = A(e1,e3)`, `t_bar = A(e4,e2)`,
/// `u = A(e1,e4)`, `u_bar = A(e2,e3)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SiteBlock {
    pub s: f64,
    pub s_bar: f64,
    pub t: f64,
    pub t_bar: f64,
    pub u: f64,
    pub u_bar: f64,
}

/// One of the six site variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SiteVar {
    S,
    SBar,
    T,
    TBar,
    U,
    UBar,
}

/// Site-block entries seen along a cycle through the vertex, for a
/// positive permutation `sigma` of `E(v)` entering at `sigma[0]` and leaving
/// at `sigma[3]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Reordered {
    pub s: f64,
    pub s_bar: f64,
    pub t: f64,
    pub t_bar: f64,
    pub u: f64,
    pub u_bar: f64,
}

use SiteVar as V;

/// A permutation of the four positions with the signed site variables that
/// play `S, S_bar, T, T_bar, U, U_bar` under it.
pub type Reordering = ([usize; 4], [(SiteVar, i8); 6]);

/// The twelve positive permutations of the four positions.
pub const REORDERINGS: [Reordering; 12] = [
    (
        [0, 1, 2, 3],
        [
            (V::S, 1),
            (V::SBar, 1),
            (V::T, 1),
            (V::TBar, 1),
            (V::U, 1),
            (V::UBar, 1),
        ],
    ),
    (
        [0, 2, 3, 1],
        [
            (V::T, 1),
            (V::TBar, 1),
            (V::U, 1),
            (V::UBar, 1),
            (V::S, 1),
            (V::SBar, 1),
        ],
    ),
    (
        [0, 3, 1, 2],
        [
            (V::U, 1),
            (V::UBar, 1),
            (V::S, 1),
            (V::SBar, 1),
            (V::T, 1),
            (V::TBar, 1),
        ],
    ),
    (
        [1, 0, 3, 2],
        [
            (V::S, -1),
            (V::SBar, -1),
            (V::TBar, -1),
            (V::T, -1),
            (V::UBar, 1),
            (V::U, 1),
        ],
    ),
    (
        [1, 2, 0, 3],
        [
            (V::UBar, 1),
            (V::U, 1),
            (V::S, -1),
            (V::SBar, -1),
            (V::TBar, -1),
            (V::T, -1),
        ],
    ),
    (
        [1, 3, 2, 0],
        [
            (V::TBar, -1),
            (V::T, -1),
            (V::UBar, 1),
            (V::U, 1),
            (V::S, -1),
            (V::SBar, -1),
        ],
    ),
    (
        [2, 0, 1, 3],
        [
            (V::T, -1),
            (V::TBar, -1),
            (V::UBar, -1),
            (V::U, -1),
            (V::SBar, 1),
            (V::S, 1),
        ],
    ),
    (
        [2, 1, 3, 0],
        [
            (V::UBar, -1),
            (V::U, -1),
            (V::SBar, 1),
            (V::S, 1),
            (V::T, -1),
            (V::TBar, -1),
        ],
    ),
    (
        [2, 3, 0, 1],
        [
            (V::SBar, 1),
            (V::S, 1),
            (V::T, -1),
            (V::TBar, -1),
            (V::UBar, -1),
            (V::U, -1),
        ],
    ),
    (
        [3, 0, 2, 1],
        [
            (V::U, -1),
            (V::UBar, -1),
            (V::SBar, -1),
            (V::S, -1),
            (V::TBar, 1),
            (V::T, 1),
        ],
    ),
    (
        [3, 1, 0, 2],
        [
            (V::TBar, 1),
            (V::T, 1),
            (V::U, -1),
            (V::UBar, -1),
            (V::SBar, -1),
            (V::S, -1),
        ],
    ),
    (
        [3, 2, 1, 0],
        [
            (V::SBar, -1),
            (V::S, -1),
            (V::TBar, 1),
            (V::T, 1),
            (V::U, -1),
            (V::UBar, -1),
        ],
    ),
];

impl SiteBlock {
    /// Values used when two site equations are active with `t t_bar` shared.
    pub const CANONICAL: SiteBlock = SiteBlock {
        s: 1.0,
        s_bar: 1.0,
        t: 1.0,
        t_bar: -1.0,
        u: 1.0,
        u_bar: 1.0,
    };

    pub fn var(&self, v: SiteVar) -> f64 {
        match v {
            V::S => self.s,
            V::SBar => self.s_bar,
            V::T => self.t,
            V::TBar => self.t_bar,
            V::U => self.u,
            V::UBar => self.u_bar,
        }
    }

    fn var_mut(&mut self, v: SiteVar) -> &mut f64 {
        match v {
            V::S => &mut self.s,
            V::SBar => &mut self.s_bar,
            V::T => &mut self.t,
            V::TBar => &mut self.t_bar,
            V::U => &mut self.u,
            V::UBar => &mut self.u_bar,
        }
    }

    /// Pfaffian of the block: `s s_bar + t t_bar + u u_bar`.
    pub fn pfaffian(&self) -> f64 {
        self.s * self.s_bar + self.t * self.t_bar + self.u * self.u_bar
    }

    /// Matrix entry `A(e_a, e_b)` for positions `a != b` in `0..4`.
    pub fn entry(&self, a: usize, b: usize) -> f64 {
        let (v, sign) = match (a, b) {
            (0, 1) => (V::S, 1.0),
            (2, 3) => (V::SBar, 1.0),
            (0, 2) => (V::T, 1.0),
            (3, 1) => (V::TBar, 1.0),
            (0, 3) => (V::U, 1.0),
            (1, 2) => (V::UBar, 1.0),
            _ if a != b && a < 4 && b < 4 => return -self.entry(b, a),
            _ => panic!("no site entry at positions ({a}, {b})"),
        };
        sign * self.var(v)
    }

    /// Entries seen through the positive permutation `sigma`, via the
    /// reordering table.
    pub fn reorder(&self, sigma: [usize; 4]) -> Reordered {
        let row = REORDERINGS
            .iter()
            .find(|(p, _)| *p == sigma)
            .unwrap_or_else(|| panic!("{sigma:?} is not a positive permutation"));
        let x = row.1.map(|(v, sg)| f64::from(sg) * self.var(v));
        Reordered {
            s: x[0],
            s_bar: x[1],
            t: x[2],
            t_bar: x[3],
            u: x[4],
            u_bar: x[5],
        }
    }
}

/// Positive permutation of positions starting at `a` and ending at `b`.
pub fn cycle_permutation(a: usize, b: usize) -> [usize; 4] {
    assert!(a != b && a < 4 && b < 4);
    let rest: Vec<usize> = (0..4).filter(|&x| x != a && x != b).collect();
    let p = [a, rest[0], rest[1], b];
    if permutation_is_even(&p) {
        p
    } else {
        [a, rest[1], rest[0], b]
    }
}

fn permutation_is_even(p: &[usize]) -> bool {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    inv % 2 == 0
}

/// The three pairings of four positions, named by the variable pair whose
/// product is their term in the block Pfaffian.
fn pairing_of(a: usize, b: usize) -> usize {
    match (a.min(b), a.max(b)) {
        (0, 1) | (2, 3) => 0,
        (0, 2) | (1, 3) => 1,
        _ => 2,
    }
}

const PAIRING_BAR: [SiteVar; 3] = [V::SBar, V::TBar, V::UBar];

#[derive(Clone, Debug, PartialEq)]
pub struct SiteAssignment {
    pub blocks: Vec<SiteBlock>,
}

impl SiteAssignment {
    pub fn block(&self, v: usize) -> &SiteBlock {
        &self.blocks[v]
    }

    /// Product of the block Pfaffians.
    pub fn pfaffian_product(&self) -> f64 {
        self.blocks.iter().map(SiteBlock::pfaffian).product()
    }
}

/// A cycle traversed as `v_0 -e_0- v_1 -e_1- ... -e_{k-1}- v_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleWalk {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl CycleWalk {
    pub fn from_face(f: &Face) -> Self {
        CycleWalk {
            vertices: f.vertices().collect(),
            edges: f.edges().collect(),
        }
    }

    pub fn from_curve(g: &Graph, c: &crate::graph::ClosedCurve) -> Result<Self> {
        let (vertices, edges) = c.cycle_walk(g)?;
        Ok(CycleWalk { vertices, edges })
    }

    pub fn reversed(&self) -> Self {
        let k = self.vertices.len();
        let vertices = (0..k).map(|i| self.vertices[(k - i) % k]).collect();
        let edges = (0..k).map(|i| self.edges[k - 1 - i]).collect();
        CycleWalk { vertices, edges }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// `(vertex, incoming edge, outgoing edge)` at step `i`.
    pub fn corner(&self, i: usize) -> (usize, usize, usize) {
        let k = self.len();
        (self.vertices[i], self.edges[(i + k - 1) % k], self.edges[i])
    }
}

fn check_four_regular(g: &Graph) -> Result<()> {
    if (0..g.n_vertices()).any(|v| g.degree(v) != 4) {
        return Err(Error::NotFourRegular);
    }
    Ok(())
}

fn position(g: &Graph, v: usize, e: usize) -> usize {
    g.incident(v)
        .iter()
        .position(|&x| x == e)
        .expect("edge incident to vertex")
}

/// Site entries along a walk at step `i`.
pub fn reordered_at(g: &Graph, site: &SiteAssignment, walk: &CycleWalk, i: usize) -> Reordered {
    let (v, ein, eout) = walk.corner(i);
    site.blocks[v].reorder(cycle_permutation(position(g, v, ein), position(g, v, eout)))
}

/// One ratio of a cycle at an incidence `(vertex, edge)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ratio {
    pub vertex: usize,
    pub edge: usize,
    pub outgoing: bool,
    pub value: f64,
}

/// Ratios along a walk: `U T_bar / S` on the outgoing edge and
/// `U T / S_bar` on the incoming edge at every vertex.
pub fn cycle_ratios(g: &Graph, site: &SiteAssignment, walk: &CycleWalk) -> Result<Vec<Ratio>> {
    if walk.len() < 3 || {
        let mut seen = std::collections::HashSet::new();
        !walk.vertices.iter().all(|v| seen.insert(*v))
    } {
        return Err(Error::NotACycle(format!("walk through {:?}", walk.vertices)));
    }
    let mut out = Vec::with_capacity(2 * walk.len());
    for i in 0..walk.len() {
        let (v, ein, eout) = walk.corner(i);
        let q = reordered_at(g, site, walk, i);
        out.push(Ratio {
            vertex: v,
            edge: eout,
            outgoing: true,
            value: q.u * q.t_bar / q.s,
        });
        out.push(Ratio {
            vertex: v,
            edge: ein,
            outgoing: false,
            value: q.u * q.t / q.s_bar,
        });
    }
    Ok(out)
}

/// Nonzero site blocks satisfying, at each vertex, the site equation of
/// every basis cycle through it, followed by the per-vertex sign
/// normalization of `(u, u_bar)` that makes the ratio positive on a face
/// corner `{e, succ(e)}`.
pub fn solve_site_equations(g: &Graph, basis: &CycleBasis, s: &EmbeddingScheme) -> Result<SiteAssignment> {
    check_four_regular(g)?;
    s.validate(g)?;
    let mut used = vec![[false; 3]; g.n_vertices()];
    for c in &basis.cycles {
        let walk = CycleWalk::from_curve(g, c)?;
        for i in 0..walk.len() {
            let (v, ein, eout) = walk.corner(i);
            used[v][pairing_of(position(g, v, ein), position(g, v, eout))] = true;
        }
    }
    let mut blocks = Vec::with_capacity(g.n_vertices());
    for v in 0..g.n_vertices() {
        if used[v].iter().all(|&u| u) {
            return Err(Error::NotSparse(v));
        }
        let r = &s.rotation[v];
        let opposite = pairing_of(position(g, v, r[0]), position(g, v, r[2]));
        let neg = if !used[v][opposite] {
            opposite
        } else {
            (0..3).find(|&p| !used[v][p]).unwrap()
        };
        let mut b = SiteBlock {
            s: 1.0,
            s_bar: 1.0,
            t: 1.0,
            t_bar: 1.0,
            u: 1.0,
            u_bar: 1.0,
        };
        *b.var_mut(PAIRING_BAR[neg]) = -1.0;
        blocks.push(b);
    }
    let mut site = SiteAssignment { blocks };
    normalize_ratio_signs(g, s, &mut site)?;
    Ok(site)
}

fn normalize_ratio_signs(g: &Graph, s: &EmbeddingScheme, site: &mut SiteAssignment) -> Result<()> {
    let faces = trace_faces(g, s)?.faces;
    let mut done = vec![false; g.n_vertices()];
    for f in &faces {
        let walk = CycleWalk::from_face(f);
        for i in 0..walk.len() {
            let (v, ein, eout) = walk.corner(i);
            if done[v] || ein == eout {
                continue;
            }
            let q = reordered_at(g, site, &walk, i);
            let r = if s.succ(v, eout) == ein {
                q.u * q.t_bar / q.s
            } else if s.succ(v, ein) == eout {
                q.u * q.t / q.s_bar
            } else {
                continue;
            };
            if r < 0.0 {
                let b = &mut site.blocks[v];
                b.u = -b.u;
                b.u_bar = -b.u_bar;
            }
            done[v] = true;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::face_boundary_basis;

    fn sample() -> SiteBlock {
        SiteBlock {
            s: 2.0,
            s_bar: 3.0,
            t: 5.0,
            t_bar: 7.0,
            u: 11.0,
            u_bar: 13.0,
        }
    }

    #[test]
    fn reordering_table_matches_direct_entries() {
        let b = sample();
        for (sigma, _) in REORDERINGS {
            assert!(permutation_is_even(&sigma));
            let e = |x: usize, y: usize| b.entry(sigma[x], sigma[y]);
            let q = b.reorder(sigma);
            assert_eq!(
                [q.s, q.s_bar, q.t, q.t_bar, q.u, q.u_bar],
                [e(0, 1), e(2, 3), e(0, 2), e(3, 1), e(0, 3), e(1, 2)],
                "{sigma:?}"
            );
            assert_eq!(q.s * q.s_bar + q.t * q.t_bar + q.u * q.u_bar, b.pfaffian());
        }
    }

    #[test]
    fn cycle_permutations_are_positive() {
        for a in 0..4 {
            for b in 0..4 {
                if a != b {
                    let p = cycle_permutation(a, b);
                    assert!(permutation_is_even(&p));
                    assert_eq!((p[0], p[3]), (a, b));
                }
            }
        }
    }

    #[test]
    fn canonical_block_solves_two_forms() {
        let b = SiteBlock::CANONICAL;
        assert_eq!(b.s * b.s_bar + b.t * b.t_bar, 0.0);
        assert_eq!(b.t * b.t_bar + b.u * b.u_bar, 0.0);
        assert_eq!(b.pfaffian(), 1.0);
        // entering e1 and leaving e4
        let q = b.reorder(cycle_permutation(0, 3));
        assert_eq!(q.u * q.t_bar / q.s, -1.0);
    }

    #[test]
    fn alternating_ratios_at_each_vertex() {
        let (g, s) = fixtures::octahedron_planar();
        let basis = face_boundary_basis(&g, &s).unwrap();
        let site = solve_site_equations(&g, &basis, &s).unwrap();
        for c in &basis.cycles {
            let walk = CycleWalk::from_curve(&g, c).unwrap();
            let r = cycle_ratios(&g, &site, &walk).unwrap();
            for i in 0..walk.len() {
                let q = reordered_at(&g, &site, &walk, i);
                assert_eq!(q.s * q.s_bar + q.t * q.t_bar, 0.0);
                let prod = r[2 * i].value * r[2 * i + 1].value;
                assert_eq!(prod, -q.u * q.u);
            }
        }
    }

    #[test]
    fn three_forms_is_not_sparse() {
        let (g, s) = fixtures::octahedron_planar();
        let all = crate::graph::enumerate_closed_curves(&g).unwrap();
        let cycles: Vec<_> = all.into_iter().filter(|c| c.cycle_walk(&g).is_ok()).collect();
        let basis = CycleBasis {
            cycles,
            kind: crate::graph::BasisKind::Fundamental,
        };
        assert!(matches!(solve_site_equations(&g, &basis, &s), Err(Error::NotSparse(_))));
    }

    #[test]
    fn untouched_vertex_gets_default() {
        let (g, s) = fixtures::octahedron_planar();
        let basis = CycleBasis {
            cycles: vec![],
            kind: crate::graph::BasisKind::FaceBoundary,
        };
        let site = solve_site_equations(&g, &basis, &s).unwrap();
        for b in &site.blocks {
            assert_eq!(b.pfaffian().abs(), 1.0);
            assert!([b.s, b.s_bar, b.t, b.t_bar, b.u, b.u_bar]
                .iter()
                .all(|x| x.abs() == 1.0));
        }
    }
}
