//! Simple graphs, the cycle space over GF(2), embedding schemes and minors.

mod embedding;
mod minor;
mod regularize;

pub use embedding::{face_boundary_basis, trace_faces, EmbeddingScheme, Face, FaceReport, FaceStep};
pub use minor::{apply_minor, apply_minor_scheme, compose, EdgeRole, MinorTransform};
pub use regularize::{four_regularize, subdivide_to_cycle_faces};

use crate::bits::BitSet;
use crate::{Error, Result};
use std::collections::VecDeque;

/// Largest first Betti number accepted by closed-curve enumeration.
pub const MAX_ENUM_BETTI: usize = 24;

/// Finite simple undirected graph with dense vertex and edge ids.
///
/// `incident(v)` lists the edges at `v` in increasing edge id; this order
/// fixes the dart order used everywhere else.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    inc: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut inc = vec![Vec::new(); n];
        let mut seen = std::collections::HashSet::new();
        for (id, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge {id} = ({u},{v}) references a vertex outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("edge {id} is a loop at {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidGraph(format!("edge {id} = ({u},{v}) is parallel")));
            }
            inc[u].push(id);
            inc[v].push(id);
        }
        let edges = edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
        Ok(Graph { n, edges, inc })
    }

    /// Builds the graph on vertices `0..=max` appearing in `edges`.
    pub fn from_edges(edges: &[(usize, usize)]) -> Result<Self> {
        let n = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        Graph::new(n, edges.to_vec())
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    /// The endpoint of `e` that is not `v`.
    pub fn other(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            debug_assert_eq!(b, v);
            a
        }
    }

    pub fn incident(&self, v: usize) -> &[usize] {
        &self.inc[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.inc[v].len()
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.inc[u].iter().copied().find(|&e| self.other(e, u) == v)
    }

    pub fn empty_edge_set(&self) -> BitSet {
        BitSet::new(self.n_edges())
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        self.bfs_tree(0).1.iter().all(|d| d.is_some())
    }

    /// `|E| - |V| + 1` for a connected graph.
    pub fn first_betti(&self) -> Result<usize> {
        if !self.is_connected() {
            return Err(Error::NotConnected);
        }
        Ok(self.n_edges() + 1 - self.n)
    }

    /// Connected with at least three vertices and no cut vertex.
    pub fn is_two_connected(&self) -> bool {
        if self.n < 3 || !self.is_connected() {
            return false;
        }
        // iterative Hopcroft-Tarjan low-link
        let mut disc = vec![usize::MAX; self.n];
        let mut low = vec![0; self.n];
        let mut time = 0;
        let mut stack: Vec<(usize, usize, usize)> = vec![(0, usize::MAX, 0)];
        disc[0] = 0;
        low[0] = 0;
        time += 1;
        let mut root_children = 0;
        while let Some(&mut (v, pe, ref mut idx)) = stack.last_mut() {
            if *idx < self.inc[v].len() {
                let e = self.inc[v][*idx];
                *idx += 1;
                if e == pe {
                    continue;
                }
                let w = self.other(e, v);
                if disc[w] == usize::MAX {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    if v == 0 {
                        root_children += 1;
                    }
                    stack.push((w, e, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[v]);
                    if p != 0 && low[v] >= disc[p] {
                        return false;
                    }
                }
            }
        }
        root_children <= 1
    }

    /// BFS from `root`: parent edge per vertex and depth.
    fn bfs_tree(&self, root: usize) -> (Vec<Option<usize>>, Vec<Option<usize>>) {
        let mut parent = vec![None; self.n];
        let mut depth = vec![None; self.n];
        depth[root] = Some(0);
        let mut q = VecDeque::from([root]);
        while let Some(v) = q.pop_front() {
            for &e in &self.inc[v] {
                let w = self.other(e, v);
                if depth[w].is_none() {
                    depth[w] = Some(depth[v].unwrap() + 1);
                    parent[w] = Some(e);
                    q.push_back(w);
                }
            }
        }
        (parent, depth)
    }

    /// True when every vertex meets an even number of edges of `set`.
    pub fn is_even_subgraph(&self, set: &BitSet) -> bool {
        (0..self.n).all(|v| self.inc[v].iter().filter(|&&e| set.contains(e)).count() % 2 == 0)
    }
}

/// Even-degree edge subset (element of the cycle space).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClosedCurve {
    edges: BitSet,
}

impl ClosedCurve {
    pub fn new(g: &Graph, edges: BitSet) -> Result<Self> {
        if edges.len() != g.n_edges() {
            return Err(Error::InvalidGraph("edge set length mismatch".into()));
        }
        if !g.is_even_subgraph(&edges) {
            return Err(Error::NotACycle("edge set has an odd-degree vertex".into()));
        }
        Ok(ClosedCurve { edges })
    }

    pub fn empty(g: &Graph) -> Self {
        ClosedCurve {
            edges: g.empty_edge_set(),
        }
    }

    pub fn from_edge_ids(g: &Graph, ids: &[usize]) -> Result<Self> {
        ClosedCurve::new(g, BitSet::from_indices(g.n_edges(), ids.iter().copied()))
    }

    pub(crate) fn from_bits_unchecked(edges: BitSet) -> Self {
        ClosedCurve { edges }
    }

    pub fn edges(&self) -> &BitSet {
        &self.edges
    }

    pub fn contains(&self, e: usize) -> bool {
        self.edges.contains(e)
    }

    pub fn len(&self) -> usize {
        self.edges.count()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Symmetric difference (the cycle-space sum).
    pub fn sym_diff(&self, other: &ClosedCurve) -> ClosedCurve {
        let mut e = self.edges.clone();
        e.xor_with(&other.edges);
        ClosedCurve { edges: e }
    }

    /// For a single cycle, its vertices and edges in traversal order
    /// `v0 -e0- v1 -e1- ... -e_{k-1}- v0`, starting at the lowest vertex and
    /// leaving it along the lower of its two edges.
    pub fn cycle_walk(&self, g: &Graph) -> Result<(Vec<usize>, Vec<usize>)> {
        let ids: Vec<usize> = self.edges.iter().collect();
        if ids.is_empty() {
            return Err(Error::NotACycle("empty edge set".into()));
        }
        let mut deg = vec![0usize; g.n_vertices()];
        for &e in &ids {
            let (a, b) = g.endpoints(e);
            deg[a] += 1;
            deg[b] += 1;
        }
        if deg.iter().any(|&d| d != 0 && d != 2) {
            return Err(Error::NotACycle("a vertex has degree other than 2".into()));
        }
        let start = deg.iter().position(|&d| d == 2).unwrap();
        let mut verts = vec![start];
        let mut walk = Vec::new();
        let mut v = start;
        let mut prev = usize::MAX;
        loop {
            let e = g
                .incident(v)
                .iter()
                .copied()
                .find(|&e| e != prev && self.edges.contains(e))
                .unwrap();
            walk.push(e);
            v = g.other(e, v);
            prev = e;
            if v == start {
                break;
            }
            verts.push(v);
        }
        if walk.len() != ids.len() {
            return Err(Error::NotACycle("edge set is not connected".into()));
        }
        Ok((verts, walk))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisKind {
    Fundamental,
    FaceBoundary,
}

#[derive(Clone, Debug)]
pub struct CycleBasis {
    pub cycles: Vec<ClosedCurve>,
    pub kind: BasisKind,
}

impl CycleBasis {
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn rank(&self) -> usize {
        let rows: Vec<BitSet> = self.cycles.iter().map(|c| c.edges.clone()).collect();
        crate::bits::gf2_rank(&rows)
    }
}

/// Tree path plus one non-tree edge, for each non-tree edge of a BFS tree
/// rooted at vertex 0.
pub fn fundamental_cycle_basis(g: &Graph) -> Result<CycleBasis> {
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    let mut cycles = Vec::new();
    if g.n_vertices() == 0 {
        return Ok(CycleBasis {
            cycles,
            kind: BasisKind::Fundamental,
        });
    }
    let (parent, depth) = g.bfs_tree(0);
    let tree: Vec<bool> = {
        let mut t = vec![false; g.n_edges()];
        for e in parent.iter().flatten() {
            t[*e] = true;
        }
        t
    };
    for e in 0..g.n_edges() {
        if tree[e] {
            continue;
        }
        let mut set = g.empty_edge_set();
        set.insert(e);
        let (mut a, mut b) = g.endpoints(e);
        while a != b {
            if depth[a] >= depth[b] {
                let pe = parent[a].unwrap();
                set.toggle(pe);
                a = g.other(pe, a);
            } else {
                let pe = parent[b].unwrap();
                set.toggle(pe);
                b = g.other(pe, b);
            }
        }
        cycles.push(ClosedCurve { edges: set });
    }
    Ok(CycleBasis {
        cycles,
        kind: BasisKind::Fundamental,
    })
}

pub fn first_betti(g: &Graph) -> Result<usize> {
    g.first_betti()
}

/// Iterator over all closed curves in Gray-code order of the fundamental
/// basis coefficients; consecutive curves differ by one basis cycle.
pub struct ClosedCurveIter {
    basis: Vec<ClosedCurve>,
    current: ClosedCurve,
    step: u64,
    total: u64,
}

impl Iterator for ClosedCurveIter {
    type Item = ClosedCurve;

    fn next(&mut self) -> Option<ClosedCurve> {
        if self.step >= self.total {
            return None;
        }
        if self.step > 0 {
            let k = self.step.trailing_zeros() as usize;
            self.current = self.current.sym_diff(&self.basis[k]);
        }
        self.step += 1;
        Some(self.current.clone())
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = (self.total - self.step) as usize;
        (r, Some(r))
    }
}

pub fn closed_curves(g: &Graph) -> Result<ClosedCurveIter> {
    let b = fundamental_cycle_basis(g)?;
    if b.len() > MAX_ENUM_BETTI {
        return Err(Error::SizeGuard {
            what: "first Betti number",
            limit: MAX_ENUM_BETTI,
            got: b.len(),
        });
    }
    Ok(ClosedCurveIter {
        total: 1u64 << b.len(),
        basis: b.cycles,
        current: ClosedCurve::empty(g),
        step: 0,
    })
}

pub fn enumerate_closed_curves(g: &Graph) -> Result<Vec<ClosedCurve>> {
    Ok(closed_curves(g)?.collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn betti_numbers() {
        assert_eq!(fixtures::k5().first_betti().unwrap(), 6);
        assert_eq!(fixtures::k33().first_betti().unwrap(), 4);
        assert_eq!(fixtures::k3().first_betti().unwrap(), 1);
    }

    #[test]
    fn disconnected_rejected() {
        let g = Graph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        assert_eq!(g.first_betti(), Err(Error::NotConnected));
    }

    #[test]
    fn rejects_loops_and_parallels() {
        assert!(Graph::new(2, vec![(0, 0)]).is_err());
        assert!(Graph::new(2, vec![(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn curve_counts() {
        let k3 = fixtures::k3();
        let c = enumerate_closed_curves(&k3).unwrap();
        assert_eq!(c.len(), 2);
        assert!(c[0].is_empty());
        assert_eq!(c[1].len(), 3);
        assert_eq!(enumerate_closed_curves(&fixtures::k5()).unwrap().len(), 64);
        let c4 = enumerate_closed_curves(&fixtures::c4()).unwrap();
        assert_eq!(c4.len(), 2);
        assert_eq!(c4[1].len(), 4);
    }

    #[test]
    fn fundamental_bases() {
        let b = fundamental_cycle_basis(&fixtures::k3()).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b.cycles[0].len(), 3);
        assert_eq!(fundamental_cycle_basis(&fixtures::k5()).unwrap().len(), 6);
        let grid = fundamental_cycle_basis(&fixtures::grid(3, 3)).unwrap();
        assert_eq!(grid.len(), 4);
        assert_eq!(grid.rank(), 4);
    }

    #[test]
    fn gray_code_steps_by_one_basis_cycle() {
        let g = fixtures::k4();
        let b = fundamental_cycle_basis(&g).unwrap();
        let curves = enumerate_closed_curves(&g).unwrap();
        for w in curves.windows(2) {
            let d = w[0].sym_diff(&w[1]);
            assert!(b.cycles.contains(&d));
        }
    }

    #[test]
    fn two_connectivity() {
        assert!(fixtures::k4().is_two_connected());
        assert!(!Graph::from_edges(&[(0, 1), (1, 2)]).unwrap().is_two_connected());
        // two triangles sharing a vertex
        let bowtie = Graph::from_edges(&[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap();
        assert!(!bowtie.is_two_connected());
    }

    #[test]
    fn cycle_walk_order() {
        let g = fixtures::c4();
        let all = ClosedCurve::from_edge_ids(&g, &[0, 1, 2, 3]).unwrap();
        let (vs, es) = all.cycle_walk(&g).unwrap();
        assert_eq!(vs.len(), 4);
        assert_eq!(es.len(), 4);
        assert_eq!(vs[0], 0);
    }
}
