use super::{EmbeddingScheme, Graph};
use crate::{Error, Result};
use std::collections::{BTreeSet, HashMap};

/// What an edge of the larger graph becomes in the minor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeRole {
    /// Survives as the given edge of the minor.
    Original(usize),
    Contracted,
    Deleted,
}

/// Deletions and contractions taking a graph G2 to a minor G1.
///
/// `edge_map` and `vertex_map` are either empty (not yet computed) or indexed
/// by G2 edges and vertices respectively. `apply_minor` fills them in.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MinorTransform {
    pub deleted: Vec<usize>,
    pub contracted: Vec<usize>,
    pub edge_map: Vec<Option<usize>>,
    pub vertex_map: Vec<usize>,
}

impl MinorTransform {
    pub fn new(mut deleted: Vec<usize>, mut contracted: Vec<usize>) -> Self {
        deleted.sort_unstable();
        deleted.dedup();
        contracted.sort_unstable();
        contracted.dedup();
        MinorTransform {
            deleted,
            contracted,
            edge_map: Vec::new(),
            vertex_map: Vec::new(),
        }
    }

    pub fn identity(g: &Graph) -> Self {
        MinorTransform {
            deleted: Vec::new(),
            contracted: Vec::new(),
            edge_map: (0..g.n_edges()).map(Some).collect(),
            vertex_map: (0..g.n_vertices()).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.deleted.is_empty()
            && self.contracted.is_empty()
            && self.edge_map.iter().enumerate().all(|(i, m)| *m == Some(i))
            && self.vertex_map.iter().enumerate().all(|(i, &m)| m == i)
    }

    pub fn is_mapped(&self, g2: &Graph) -> bool {
        self.edge_map.len() == g2.n_edges() && self.vertex_map.len() == g2.n_vertices()
    }

    pub fn role(&self, e: usize) -> EdgeRole {
        if self.deleted.binary_search(&e).is_ok() {
            EdgeRole::Deleted
        } else if self.contracted.binary_search(&e).is_ok() {
            EdgeRole::Contracted
        } else {
            EdgeRole::Original(self.edge_map.get(e).copied().flatten().unwrap_or(e))
        }
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let n = self.0[y];
            self.0[y] = r;
            y = n;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra.max(rb)] = ra.min(rb);
        true
    }
}

fn check_ids(g2: &Graph, t: &MinorTransform) -> Result<()> {
    let m = g2.n_edges();
    if let Some(&e) = t.deleted.iter().chain(&t.contracted).find(|&&e| e >= m) {
        return Err(Error::InvalidTransform(format!("edge {e} out of range")));
    }
    let d: BTreeSet<_> = t.deleted.iter().collect();
    if let Some(e) = t.contracted.iter().find(|e| d.contains(e)) {
        return Err(Error::InvalidTransform(format!("edge {e} both deleted and contracted")));
    }
    Ok(())
}

/// Applies deletions then contractions. Loops and parallel edges produced by
/// contraction are dropped and recorded as deleted in the returned transform,
/// whose maps are fully populated. Maps already present in `t` are honoured.
pub fn apply_minor(g2: &Graph, t: &MinorTransform) -> Result<(Graph, MinorTransform)> {
    check_ids(g2, t)?;
    let mut uf = UnionFind((0..g2.n_vertices()).collect());
    for &e in &t.contracted {
        let (a, b) = g2.endpoints(e);
        if !uf.union(a, b) {
            return Err(Error::ContractsCycle);
        }
    }
    let (vertex_map, n1) = if t.vertex_map.len() == g2.n_vertices() {
        for &e in &t.contracted {
            let (a, b) = g2.endpoints(e);
            if t.vertex_map[a] != t.vertex_map[b] {
                return Err(Error::InvalidTransform(format!(
                    "contracted edge {e} joins vertices mapped apart"
                )));
            }
        }
        let n1 = t.vertex_map.iter().map(|&x| x + 1).max().unwrap_or(0);
        (t.vertex_map.clone(), n1)
    } else {
        let mut ids: HashMap<usize, usize> = HashMap::new();
        let mut vm = Vec::with_capacity(g2.n_vertices());
        for v in 0..g2.n_vertices() {
            let r = uf.find(v);
            let next = ids.len();
            vm.push(*ids.entry(r).or_insert(next));
        }
        let n = ids.len();
        (vm, n)
    };

    let mut deleted: BTreeSet<usize> = t.deleted.iter().copied().collect();
    let contracted: BTreeSet<usize> = t.contracted.iter().copied().collect();
    let mut pairs: HashMap<(usize, usize), usize> = HashMap::new();
    let mut survivors = Vec::new();
    for e in 0..g2.n_edges() {
        if deleted.contains(&e) || contracted.contains(&e) {
            continue;
        }
        let (a, b) = g2.endpoints(e);
        let (x, y) = (vertex_map[a], vertex_map[b]);
        if x == y || pairs.contains_key(&(x.min(y), x.max(y))) {
            deleted.insert(e);
            continue;
        }
        pairs.insert((x.min(y), x.max(y)), e);
        survivors.push((e, (x, y)));
    }

    let use_given = t.edge_map.len() == g2.n_edges() && survivors.iter().all(|(e, _)| t.edge_map[*e].is_some());
    let mut edge_map = vec![None; g2.n_edges()];
    let mut edges1 = vec![(0, 0); survivors.len()];
    let mut filled = vec![false; survivors.len()];
    for (k, &(e, xy)) in survivors.iter().enumerate() {
        let id = if use_given { t.edge_map[e].unwrap() } else { k };
        if id >= survivors.len() || filled[id] {
            return Err(Error::InvalidTransform(format!(
                "edge map is not a bijection at edge {e}"
            )));
        }
        filled[id] = true;
        edges1[id] = xy;
        edge_map[e] = Some(id);
    }
    let g1 = Graph::new(n1, edges1)?;
    Ok((
        g1,
        MinorTransform {
            deleted: deleted.into_iter().collect(),
            contracted: t.contracted.clone(),
            edge_map,
            vertex_map,
        },
    ))
}

/// Applies a transform to an embedded graph. Contracted edges must have
/// signature +1; the rotations of the two ends are spliced at the edge.
pub fn apply_minor_scheme(
    g2: &Graph,
    s2: &EmbeddingScheme,
    t: &MinorTransform,
) -> Result<(Graph, EmbeddingScheme, MinorTransform)> {
    s2.validate(g2)?;
    let (g1, t1) = apply_minor(g2, t)?;
    let mut rot: Vec<Vec<usize>> = s2.rotation.clone();
    let mut owner: Vec<usize> = (0..g2.n_vertices()).collect();
    let dropped: BTreeSet<usize> = t.deleted.iter().copied().collect();
    for r in rot.iter_mut() {
        r.retain(|e| !dropped.contains(e));
    }
    for &c in &t.contracted {
        if s2.signature(c) < 0 {
            return Err(Error::InvalidTransform(format!(
                "contracting edge {c} with signature -1 is not supported"
            )));
        }
        let (a, b) = g2.endpoints(c);
        let (ra, rb) = (find_owner(&mut owner, a), find_owner(&mut owner, b));
        let spin = |r: &Vec<usize>| {
            let p = r.iter().position(|&x| x == c).unwrap();
            r[p + 1..].iter().chain(&r[..p]).copied().collect::<Vec<_>>()
        };
        let mut merged = spin(&rot[ra]);
        merged.extend(spin(&rot[rb]));
        let (keep, gone) = (ra.min(rb), ra.max(rb));
        rot[keep] = merged;
        rot[gone].clear();
        owner[gone] = keep;
    }
    let mut rotation = vec![Vec::new(); g1.n_vertices()];
    for v in 0..g2.n_vertices() {
        if find_owner(&mut owner, v) != v {
            continue;
        }
        let target = t1.vertex_map[v];
        let mut seen = BTreeSet::new();
        rotation[target] = rot[v]
            .iter()
            .filter_map(|&e| t1.edge_map[e])
            .filter(|&e| seen.insert(e))
            .collect();
    }
    let mut crosscaps = vec![Vec::new(); g1.n_edges()];
    for (e2, m) in t1.edge_map.iter().enumerate() {
        if let Some(e1) = m {
            crosscaps[*e1] = s2.crosscaps[e2].clone();
        }
    }
    let s1 = EmbeddingScheme {
        rotation,
        crosscaps,
        n_crosscaps: s2.n_crosscaps,
    };
    s1.validate(&g1)?;
    Ok((g1, s1, t1))
}

fn find_owner(owner: &mut [usize], v: usize) -> usize {
    let mut r = v;
    while owner[r] != r {
        r = owner[r];
    }
    owner[v] = r;
    r
}

/// Composes `first: G3 -> G2` with `second: G2 -> G1` into `G3 -> G1`.
/// Both transforms must carry populated maps.
pub fn compose(first: &MinorTransform, second: &MinorTransform) -> Result<MinorTransform> {
    if second.edge_map.is_empty() && second.vertex_map.is_empty() {
        return Err(Error::InvalidTransform("second transform has no maps".into()));
    }
    let mut deleted = first.deleted.clone();
    let mut contracted = first.contracted.clone();
    let mut edge_map = vec![None; first.edge_map.len()];
    for (e3, m) in first.edge_map.iter().enumerate() {
        let Some(e2) = m else { continue };
        match second.role(*e2) {
            EdgeRole::Deleted => deleted.push(e3),
            EdgeRole::Contracted => contracted.push(e3),
            EdgeRole::Original(e1) => edge_map[e3] = Some(e1),
        }
    }
    let vertex_map = first.vertex_map.iter().map(|&v| second.vertex_map[v]).collect();
    let mut t = MinorTransform::new(deleted, contracted);
    t.edge_map = edge_map;
    t.vertex_map = vertex_map;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn empty_transform_is_copy() {
        let g = fixtures::k4();
        let (g1, t) = apply_minor(&g, &MinorTransform::default()).unwrap();
        assert_eq!(g1, g);
        assert!(t.is_identity());
    }

    #[test]
    fn contracting_a_cycle_fails() {
        let g = fixtures::k3();
        let t = MinorTransform::new(vec![], vec![0, 1, 2]);
        assert_eq!(apply_minor(&g, &t).unwrap_err(), Error::ContractsCycle);
    }

    #[test]
    fn contraction_drops_parallel_edges() {
        // contracting one edge of K4 leaves a triangle
        let g = fixtures::k4();
        let (g1, t) = apply_minor(&g, &MinorTransform::new(vec![], vec![0])).unwrap();
        assert_eq!(g1.n_vertices(), 3);
        assert_eq!(g1.n_edges(), 3);
        assert_eq!(t.deleted.len(), 2);
    }

    #[test]
    fn grid_minors() {
        let g = fixtures::grid(4, 5);
        let pattern = fixtures::brick_pattern(4, 5);
        let (hex, _) = apply_minor(&g, &MinorTransform::new(pattern.clone(), vec![])).unwrap();
        assert!(hex.n_vertices() == 20 && (0..20).all(|v| hex.degree(v) <= 3));
        let (tri, _) = apply_minor(&g, &MinorTransform::new(vec![], pattern)).unwrap();
        assert_eq!(tri.n_vertices(), 13);
        assert!((0..13).any(|v| tri.degree(v) == 6));
    }

    #[test]
    fn scheme_contraction_keeps_planarity() {
        let (g, s) = fixtures::grid_planar(4, 5);
        let t = MinorTransform::new(vec![], fixtures::brick_pattern(4, 5));
        let (g1, s1, _) = apply_minor_scheme(&g, &s, &t).unwrap();
        let r = crate::graph::trace_faces(&g1, &s1).unwrap();
        assert_eq!(r.orientable_genus, Some(0));
    }
}
