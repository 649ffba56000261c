//! Dart graphs, perfect matchings and the closed-curve weight functional.

use crate::algebra::Scalar;
use crate::bits::BitSet;
use crate::graph::{ClosedCurve, Graph};
use crate::pfaffian::{pfaffian_bruteforce, SkewMatrix};
use crate::{Error, Result};
use std::collections::HashMap;

/// Largest dart count accepted by matching enumeration.
pub const MAX_ENUM_DARTS: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart {
    pub vertex: usize,
    pub edge: usize,
}

/// The graph on darts `(v, e)`: two darts are adjacent when they share the
/// vertex (site edge) or the edge (link edge). Darts are ordered by vertex,
/// then by position of the edge in `E(v)`.
#[derive(Clone, Debug)]
pub struct DartGraph {
    graph: Graph,
    darts: Vec<Dart>,
    offset: Vec<usize>,
    links: Vec<(usize, usize)>,
}

pub fn build_dart_graph(g: &Graph) -> Result<DartGraph> {
    DartGraph::new(g)
}

impl DartGraph {
    pub fn new(g: &Graph) -> Result<Self> {
        if let Some(v) = (0..g.n_vertices()).find(|&v| g.degree(v) == 0) {
            return Err(Error::IsolatedVertex(v));
        }
        let mut darts = Vec::new();
        let mut offset = Vec::with_capacity(g.n_vertices() + 1);
        for v in 0..g.n_vertices() {
            offset.push(darts.len());
            darts.extend(g.incident(v).iter().map(|&e| Dart { vertex: v, edge: e }));
        }
        offset.push(darts.len());
        let mut d = DartGraph {
            graph: g.clone(),
            darts,
            offset,
            links: Vec::new(),
        };
        d.links = (0..g.n_edges())
            .map(|e| {
                let (a, b) = g.endpoints(e);
                let (x, y) = (d.index(a, e), d.index(b, e));
                (x.min(y), x.max(y))
            })
            .collect();
        Ok(d)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n_darts(&self) -> usize {
        self.darts.len()
    }

    pub fn darts(&self) -> &[Dart] {
        &self.darts
    }

    /// Index of dart `(v, e)`.
    pub fn index(&self, v: usize, e: usize) -> usize {
        let pos = self
            .graph
            .incident(v)
            .iter()
            .position(|&x| x == e)
            .unwrap_or_else(|| panic!("edge {e} is not incident to vertex {v}"));
        self.offset[v] + pos
    }

    /// Dart indices of vertex `v`, in order.
    pub fn block(&self, v: usize) -> std::ops::Range<usize> {
        self.offset[v]..self.offset[v + 1]
    }

    /// Link edge of source edge `e`, as `(lower dart, higher dart)`.
    pub fn link(&self, e: usize) -> (usize, usize) {
        self.links[e]
    }

    pub fn link_edges(&self) -> &[(usize, usize)] {
        &self.links
    }

    pub fn site_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for v in 0..self.graph.n_vertices() {
            let r = self.block(v);
            for i in r.clone() {
                for j in i + 1..r.end {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_site(&self, i: usize, j: usize) -> bool {
        i != j && self.darts[i].vertex == self.darts[j].vertex
    }

    /// Source edge of the link `{i, j}`, if it is one.
    pub fn link_edge(&self, i: usize, j: usize) -> Option<usize> {
        (i != j && self.darts[i].edge == self.darts[j].edge).then_some(self.darts[i].edge)
    }

    pub fn is_edge(&self, i: usize, j: usize) -> bool {
        self.is_site(i, j) || self.link_edge(i, j).is_some()
    }

    pub fn labels(&self) -> Vec<String> {
        self.darts.iter().map(|d| format!("{}:{}", d.vertex, d.edge)).collect()
    }

    /// Errors when `a` has a nonzero entry outside the dart-graph edges.
    pub fn check_zero_pattern<T: Scalar>(&self, a: &SkewMatrix<T>) -> Result<()> {
        if a.order() != self.n_darts() {
            return Err(Error::ZeroPattern(a.order(), self.n_darts()));
        }
        for (i, j, _) in a.entries() {
            if !self.is_edge(i, j) {
                return Err(Error::ZeroPattern(i, j));
            }
        }
        Ok(())
    }
}

/// Set of disjoint dart pairs covering every dart, each pair `(lo, hi)`,
/// sorted by the lower dart.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PerfectMatching {
    pairs: Vec<(usize, usize)>,
}

impl PerfectMatching {
    pub fn new(d: &DartGraph, pairs: Vec<(usize, usize)>) -> Result<Self> {
        let mut pairs: Vec<(usize, usize)> = pairs.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        pairs.sort_unstable();
        let mut covered = vec![false; d.n_darts()];
        for &(a, b) in &pairs {
            if b >= d.n_darts() || !d.is_edge(a, b) {
                return Err(Error::NotMatching(format!("({a},{b}) is not a dart-graph edge")));
            }
            for x in [a, b] {
                if covered[x] {
                    return Err(Error::NotMatching(format!("dart {x} covered twice")));
                }
                covered[x] = true;
            }
        }
        if let Some(x) = covered.iter().position(|c| !c) {
            return Err(Error::NotMatching(format!("dart {x} uncovered")));
        }
        Ok(PerfectMatching { pairs })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.pairs.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    /// Sign of the permutation `(lo_1, hi_1, lo_2, hi_2, ...)`.
    pub fn sign(&self) -> f64 {
        arcs_sign(&self.pairs)
    }

    /// Source edges whose link pair is in the matching.
    pub fn link_set(&self, d: &DartGraph) -> BitSet {
        let mut s = BitSet::new(d.graph.n_edges());
        for &(a, b) in &self.pairs {
            if let Some(e) = d.link_edge(a, b) {
                s.insert(e);
            }
        }
        s
    }
}

/// Sign of a matching written as arcs: `(-1)^{number of crossing pairs}`.
pub fn arcs_sign(arcs: &[(usize, usize)]) -> f64 {
    let mut cross = 0usize;
    for (x, &(a, b)) in arcs.iter().enumerate() {
        for &(c, d) in &arcs[x + 1..] {
            if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                cross += 1;
            }
        }
    }
    if cross.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// All link edges.
pub fn canonical_matching(d: &DartGraph) -> PerfectMatching {
    let mut pairs = d.links.clone();
    pairs.sort_unstable();
    PerfectMatching { pairs }
}

/// Consecutive darts at each vertex paired up; requires even degrees.
pub fn even_degree_matching(d: &DartGraph) -> Result<PerfectMatching> {
    let mut pairs = Vec::new();
    for v in 0..d.graph.n_vertices() {
        let r = d.block(v);
        if r.len() % 2 == 1 {
            return Err(Error::OddDegree(v));
        }
        pairs.extend(r.step_by(2).map(|i| (i, i + 1)));
    }
    Ok(PerfectMatching { pairs })
}

/// Every perfect matching, by backtracking on the lowest uncovered dart.
pub fn enumerate_matchings(d: &DartGraph) -> Result<Vec<PerfectMatching>> {
    let n = d.n_darts();
    if n > MAX_ENUM_DARTS {
        return Err(Error::SizeGuard {
            what: "dart count",
            limit: MAX_ENUM_DARTS,
            got: n,
        });
    }
    let nbrs: Vec<Vec<usize>> = (0..n)
        .map(|i| (i + 1..n).filter(|&j| d.is_edge(i, j)).collect())
        .collect();
    let mut out = Vec::new();
    let mut stack = Vec::new();
    fn rec(
        nbrs: &[Vec<usize>],
        covered: u32,
        full: u32,
        stack: &mut Vec<(usize, usize)>,
        out: &mut Vec<PerfectMatching>,
    ) {
        if covered == full {
            out.push(PerfectMatching { pairs: stack.clone() });
            return;
        }
        let i = (!covered).trailing_zeros() as usize;
        for &j in &nbrs[i] {
            if covered >> j & 1 == 0 {
                stack.push((i, j));
                rec(nbrs, covered | 1 << i | 1 << j, full, stack, out);
                stack.pop();
            }
        }
    }
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    rec(&nbrs, 0, full, &mut stack, &mut out);
    Ok(out)
}

/// `(m0 symmetric-difference m)` restricted to link edges, as a closed curve.
pub fn phi(m0: &PerfectMatching, m: &PerfectMatching, d: &DartGraph) -> Result<ClosedCurve> {
    let mut s = m0.link_set(d);
    s.xor_with(&m.link_set(d));
    ClosedCurve::new(d.graph(), s)
}

fn matching_weight<T: Scalar>(a: &SkewMatrix<T>, m: &PerfectMatching) -> T {
    let mut w = a.zero().one_like().scale(m.sign());
    for &(i, j) in &m.pairs {
        w = w * a.get(i, j);
    }
    w
}

/// Signed sum of matching weights over the matchings mapped to `c`.
pub fn f_weight<T: Scalar>(a: &SkewMatrix<T>, d: &DartGraph, m0: &PerfectMatching, c: &ClosedCurve) -> Result<T> {
    d.check_zero_pattern(a)?;
    let mut acc = a.zero().clone();
    for m in enumerate_matchings(d)? {
        if phi(m0, &m, d)? == *c {
            acc = acc + matching_weight(a, &m);
        }
    }
    Ok(acc)
}

/// `F_A(M0, C)` for every closed curve with at least one preimage, from a
/// single matching enumeration.
pub fn f_weight_table<T: Scalar>(a: &SkewMatrix<T>, d: &DartGraph, m0: &PerfectMatching) -> Result<HashMap<BitSet, T>> {
    d.check_zero_pattern(a)?;
    let mut table: HashMap<BitSet, T> = HashMap::new();
    for m in enumerate_matchings(d)? {
        let c = phi(m0, &m, d)?;
        let w = matching_weight(a, &m);
        let slot = table.entry(c.edges().clone()).or_insert_with(|| a.zero().clone());
        *slot = slot.clone() + w;
    }
    Ok(table)
}

/// `F_A(M0, C)` for a graph with all degrees even and `M0` the
/// even-degree matching, without enumeration: the preimages of `C` are the
/// links of `C` together with any pairing of the remaining darts within
/// each vertex, so the sum factorizes into one small Pfaffian per vertex.
pub fn f_weight_even<T: Scalar>(a: &SkewMatrix<T>, d: &DartGraph, c: &ClosedCurve) -> Result<T> {
    let g = d.graph();
    let mut arcs = Vec::new();
    let mut acc = a.zero().one_like();
    for e in c.edges().iter() {
        let (x, y) = d.link(e);
        arcs.push((x, y));
        acc = acc * a.get(x, y);
    }
    for v in 0..g.n_vertices() {
        let free: Vec<usize> = d.block(v).filter(|&x| !c.contains(d.darts[x].edge)).collect();
        if free.len() % 2 == 1 {
            return Err(Error::OddDegree(v));
        }
        arcs.extend(free.chunks(2).map(|p| (p[0], p[1])));
        if !free.is_empty() {
            acc = acc * pfaffian_bruteforce(&a.submatrix(&free))?;
        }
    }
    Ok(acc.scale(arcs_sign(&arcs)))
}
