use super::{BasisKind, ClosedCurve, CycleBasis, Graph};
use crate::bits::BitSet;
use crate::{Error, Result};
use std::collections::{HashMap, HashSet, VecDeque};

/// Rotation system plus per-edge crosscap lists.
///
/// Crosscap indices are 1-based. An edge whose list has odd length has
/// signature -1. Repeated indices are allowed; an edge may cross the same
/// crosscap more than once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingScheme {
    pub rotation: Vec<Vec<usize>>,
    pub crosscaps: Vec<Vec<usize>>,
    pub n_crosscaps: usize,
}

impl EmbeddingScheme {
    /// A scheme with no crosscaps.
    pub fn orientable(rotation: Vec<Vec<usize>>, n_edges: usize) -> Self {
        EmbeddingScheme {
            rotation,
            crosscaps: vec![Vec::new(); n_edges],
            n_crosscaps: 0,
        }
    }

    pub fn validate(&self, g: &Graph) -> Result<()> {
        if self.rotation.len() != g.n_vertices() {
            return Err(Error::InvalidScheme(format!(
                "rotation lists {} vertices, graph has {}",
                self.rotation.len(),
                g.n_vertices()
            )));
        }
        for (v, rot) in self.rotation.iter().enumerate() {
            let mut a = rot.clone();
            let mut b = g.incident(v).to_vec();
            a.sort_unstable();
            b.sort_unstable();
            if a != b {
                return Err(Error::InvalidScheme(format!(
                    "rotation at vertex {v} is not a permutation of its incident edges"
                )));
            }
        }
        if self.crosscaps.len() != g.n_edges() {
            return Err(Error::InvalidScheme(format!(
                "crosscap table has {} entries, graph has {} edges",
                self.crosscaps.len(),
                g.n_edges()
            )));
        }
        for (e, list) in self.crosscaps.iter().enumerate() {
            if let Some(&k) = list.iter().find(|&&k| k == 0 || k > self.n_crosscaps) {
                return Err(Error::InvalidScheme(format!(
                    "edge {e} lists crosscap {k}, valid range is 1..={}",
                    self.n_crosscaps
                )));
            }
        }
        Ok(())
    }

    pub fn signature(&self, e: usize) -> i8 {
        if self.crosscaps[e].len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn position(&self, v: usize, e: usize) -> usize {
        self.rotation[v]
            .iter()
            .position(|&x| x == e)
            .unwrap_or_else(|| panic!("edge {e} not in rotation of vertex {v}"))
    }

    pub fn succ(&self, v: usize, e: usize) -> usize {
        let r = &self.rotation[v];
        r[(self.position(v, e) + 1) % r.len()]
    }

    pub fn pred(&self, v: usize, e: usize) -> usize {
        let r = &self.rotation[v];
        r[(self.position(v, e) + r.len() - 1) % r.len()]
    }

    /// Whether some choice of local orientations makes every signature +1.
    pub fn is_orientable(&self, g: &Graph) -> bool {
        let mut side: Vec<Option<bool>> = vec![None; g.n_vertices()];
        for root in 0..g.n_vertices() {
            if side[root].is_some() {
                continue;
            }
            side[root] = Some(false);
            let mut q = VecDeque::from([root]);
            while let Some(v) = q.pop_front() {
                for &e in g.incident(v) {
                    let w = g.other(e, v);
                    let want = side[v].unwrap() ^ (self.signature(e) < 0);
                    match side[w] {
                        None => {
                            side[w] = Some(want);
                            q.push_back(w);
                        }
                        Some(s) if s != want => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }
}

/// One corner of a face walk: at `vertex`, leave along `edge`, with local
/// orientation bit `flipped` (rotation read backwards when set).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FaceStep {
    pub vertex: usize,
    pub edge: usize,
    pub flipped: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub steps: Vec<FaceStep>,
}

impl Face {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.steps.iter().map(|s| s.vertex)
    }

    pub fn edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.steps.iter().map(|s| s.edge)
    }

    pub fn is_cycle(&self) -> bool {
        let mut seen = HashSet::new();
        self.vertices().all(|v| seen.insert(v))
    }

    /// The corner at step `i`, named by the rotation slot it occupies: the
    /// slot immediately after edge `x` in the rotation at the vertex.
    /// Slot names do not depend on the direction the face is traced.
    pub fn gap(&self, i: usize) -> (usize, usize) {
        let s = self.steps[i];
        let prev = self.steps[(i + self.len() - 1) % self.len()].edge;
        (s.vertex, if s.flipped { s.edge } else { prev })
    }

    pub fn gaps(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.len()).map(|i| self.gap(i))
    }

    pub fn edge_set(&self, n_edges: usize) -> BitSet {
        let mut s = BitSet::new(n_edges);
        for e in self.edges() {
            s.toggle(e);
        }
        s
    }
}

#[derive(Clone, Debug)]
pub struct FaceReport {
    pub faces: Vec<Face>,
    pub euler_characteristic: i64,
    pub orientable: bool,
    /// Number of handles when orientable.
    pub orientable_genus: Option<usize>,
    /// Number of crosscaps when nonorientable.
    pub nonorientable_genus: Option<usize>,
    pub faces_are_cycles: bool,
}

impl FaceReport {
    pub fn is_planar(&self) -> bool {
        self.orientable_genus == Some(0)
    }

    /// Face containing the rotation slot `(v, x)`, with the step index.
    pub fn find_gap(&self, v: usize, x: usize) -> Option<(usize, usize)> {
        self.faces
            .iter()
            .enumerate()
            .find_map(|(f, face)| (0..face.len()).find(|&i| face.gap(i) == (v, x)).map(|i| (f, i)))
    }
}

/// Traces all faces of the embedding.
pub fn trace_faces(g: &Graph, s: &EmbeddingScheme) -> Result<FaceReport> {
    s.validate(g)?;
    let faces = trace_raw(g.edges(), &s.rotation, &|e| s.signature(e) < 0)?;
    let chi = g.n_vertices() as i64 - g.n_edges() as i64 + faces.len() as i64;
    let orientable = s.is_orientable(g);
    let faces_are_cycles = faces.iter().all(Face::is_cycle);
    Ok(FaceReport {
        euler_characteristic: chi,
        orientable,
        orientable_genus: orientable.then(|| ((2 - chi) / 2) as usize),
        nonorientable_genus: (!orientable).then(|| (2 - chi) as usize),
        faces_are_cycles,
        faces,
    })
}

/// Face tracing on bare rotation data; tolerates parallel edges.
pub(crate) fn trace_raw(
    ends: &[(usize, usize)],
    rotation: &[Vec<usize>],
    odd: &dyn Fn(usize) -> bool,
) -> Result<Vec<Face>> {
    let mut pos: HashMap<(usize, usize), usize> = HashMap::new();
    for (v, r) in rotation.iter().enumerate() {
        for (i, &e) in r.iter().enumerate() {
            pos.insert((v, e), i);
        }
    }
    let other = |e: usize, v: usize| {
        let (a, b) = ends[e];
        if a == v {
            b
        } else {
            a
        }
    };
    let step = |w: usize, e: usize, back: bool| {
        let r = &rotation[w];
        let p = pos[&(w, e)];
        if back {
            r[(p + r.len() - 1) % r.len()]
        } else {
            r[(p + 1) % r.len()]
        }
    };
    let mut seen: HashSet<(usize, usize, bool)> = HashSet::new();
    let mut faces = Vec::new();
    for (v0, r0) in rotation.iter().enumerate() {
        for &e0 in r0 {
            for o0 in [false, true] {
                if seen.contains(&(v0, e0, o0)) {
                    continue;
                }
                let mut steps = Vec::new();
                let (mut v, mut e, mut o) = (v0, e0, o0);
                loop {
                    seen.insert((v, e, o));
                    steps.push(FaceStep {
                        vertex: v,
                        edge: e,
                        flipped: o,
                    });
                    let w = other(e, v);
                    let no = o ^ odd(e);
                    seen.insert((w, e, !no));
                    e = step(w, e, no);
                    v = w;
                    o = no;
                    if (v, e, o) == (v0, e0, o0) {
                        break;
                    }
                    if steps.len() > 4 * ends.len() + 4 {
                        return Err(Error::InvalidScheme("face tracing did not close".into()));
                    }
                }
                faces.push(Face { steps });
            }
        }
    }
    Ok(faces)
}

/// All face boundaries but the longest (ties: the last traced).
pub fn face_boundary_basis(g: &Graph, s: &EmbeddingScheme) -> Result<CycleBasis> {
    let rep = trace_faces(g, s)?;
    if let Some(bad) = rep.faces.iter().position(|f| !f.is_cycle()) {
        return Err(Error::FacesNotCycles(bad));
    }
    let mut drop = 0;
    for (i, f) in rep.faces.iter().enumerate() {
        if f.len() >= rep.faces[drop].len() {
            drop = i;
        }
    }
    let cycles = rep
        .faces
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != drop)
        .map(|(_, f)| ClosedCurve::from_bits_unchecked(f.edge_set(g.n_edges())))
        .collect();
    Ok(CycleBasis {
        cycles,
        kind: BasisKind::FaceBoundary,
    })
}
