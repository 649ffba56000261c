//! 4-regularization and face-cycle subdivision of embedded graphs.
//!
//! Both constructions work on a mutable copy of the embedding, grow it by
//! subdividing edges and drawing chords inside faces, and record for every
//! edge whether it survives, is contracted, or is deleted on the way back.

use super::embedding::{trace_raw, Face};
use super::{EdgeRole, EmbeddingScheme, Graph, MinorTransform};
use crate::{Error, Result};
use std::collections::{BTreeSet, HashMap};

type Gap = (usize, usize);

struct Work {
    ends: Vec<(usize, usize)>,
    rotation: Vec<Vec<usize>>,
    crosscaps: Vec<Vec<usize>>,
    n_crosscaps: usize,
    role: Vec<EdgeRole>,
    image: Vec<usize>,
}

impl Work {
    fn new(g: &Graph, s: &EmbeddingScheme) -> Self {
        Work {
            ends: g.edges().to_vec(),
            rotation: s.rotation.clone(),
            crosscaps: s.crosscaps.clone(),
            n_crosscaps: s.n_crosscaps,
            role: (0..g.n_edges()).map(EdgeRole::Original).collect(),
            image: (0..g.n_vertices()).collect(),
        }
    }

    fn n(&self) -> usize {
        self.rotation.len()
    }

    fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    fn other(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.ends[e];
        if a == v {
            b
        } else {
            a
        }
    }

    fn faces(&self) -> Result<Vec<Face>> {
        trace_raw(&self.ends, &self.rotation, &|e| self.crosscaps[e].len() % 2 == 1)
    }

    fn add_vertex(&mut self, image: usize) -> usize {
        self.rotation.push(Vec::new());
        self.image.push(image);
        self.n() - 1
    }

    fn push_edge(&mut self, a: usize, b: usize, role: EdgeRole, crosscaps: Vec<usize>) -> usize {
        self.ends.push((a, b));
        self.role.push(role);
        self.crosscaps.push(crosscaps);
        self.ends.len() - 1
    }

    /// Splits edge `e` with a new vertex. The segment at `keep` retains the
    /// id, role and crosscaps of `e`; the other segment is new. Returns the
    /// new vertex and the new edge id.
    fn subdivide_at(&mut self, e: usize, keep: usize) -> (usize, usize) {
        let q = self.other(e, keep);
        let (kept_role, new_role, img) = match self.role[e] {
            EdgeRole::Original(x) => (EdgeRole::Original(x), EdgeRole::Contracted, self.image[q]),
            EdgeRole::Deleted => (EdgeRole::Deleted, EdgeRole::Contracted, self.image[q]),
            EdgeRole::Contracted => (EdgeRole::Contracted, EdgeRole::Contracted, self.image[q]),
        };
        let w = self.add_vertex(img);
        self.role[e] = kept_role;
        self.ends[e] = (keep, w);
        let f = self.push_edge(w, q, new_role, Vec::new());
        for x in self.rotation[q].iter_mut() {
            if *x == e {
                *x = f;
                break;
            }
        }
        self.rotation[w] = vec![e, f];
        (w, f)
    }

    /// Subdivides so that an original edge keeps its identity on the side of
    /// the endpoint with the lower image vertex.
    fn subdivide(&mut self, e: usize) -> (usize, usize) {
        let (a, b) = self.ends[e];
        let keep = match self.role[e] {
            EdgeRole::Original(_) if self.image[b] < self.image[a] => b,
            _ => a.min(b),
        };
        self.subdivide_at(e, keep)
    }

    /// Draws a new edge inside a face between two rotation slots.
    fn add_chord(&mut self, gv: Gap, gw: Gap, role: EdgeRole) -> Result<usize> {
        let faces = self.faces()?;
        let (face, i, j) = faces
            .iter()
            .find_map(|f| {
                let i = f.gaps().position(|g| g == gv)?;
                let j = f.gaps().position(|g| g == gw)?;
                Some((f, i, j))
            })
            .ok_or_else(|| Error::InvalidScheme("chord endpoints are not on a common face".into()))?;
        // the chord runs parallel to the boundary stretch from corner i to
        // corner j and therefore crosses the same crosscaps
        let mut caps = Vec::new();
        let mut k = i;
        while k != j {
            caps.extend(self.crosscaps[face.steps[k].edge].iter().copied());
            k = (k + 1) % face.len();
        }
        let flips = face.steps[i].flipped != face.steps[j].flipped;
        if (caps.len() % 2 == 1) != flips {
            return Err(Error::InvalidScheme(
                "orientation bits disagree with crosscap parity".into(),
            ));
        }
        let before = faces.len();
        let (v, x) = gv;
        let (w, y) = gw;
        let f = self.push_edge(v, w, role, caps);
        let p = self.rotation[v].iter().position(|&e| e == x).unwrap();
        self.rotation[v].insert(p + 1, f);
        let p = self.rotation[w].iter().position(|&e| e == y).unwrap();
        self.rotation[w].insert(p + 1, f);
        if self.faces()?.len() != before + 1 {
            return Err(Error::InvalidScheme("chord did not split its face".into()));
        }
        Ok(f)
    }

    fn finish(&self) -> Result<(Graph, EmbeddingScheme, MinorTransform)> {
        let g = Graph::new(self.n(), self.ends.clone())?;
        let s = EmbeddingScheme {
            rotation: self.rotation.clone(),
            crosscaps: self.crosscaps.clone(),
            n_crosscaps: self.n_crosscaps,
        };
        let mut deleted = Vec::new();
        let mut contracted = Vec::new();
        let mut edge_map = vec![None; self.ends.len()];
        for (e, r) in self.role.iter().enumerate() {
            match r {
                EdgeRole::Deleted => deleted.push(e),
                EdgeRole::Contracted => contracted.push(e),
                EdgeRole::Original(x) => edge_map[e] = Some(*x),
            }
        }
        let mut t = MinorTransform::new(deleted, contracted);
        t.edge_map = edge_map;
        t.vertex_map = self.image.clone();
        Ok((g, s, t))
    }
}

fn gap_of(face: &Face, v: usize) -> Option<Gap> {
    (0..face.len())
        .find(|&i| face.steps[i].vertex == v)
        .map(|i| face.gap(i))
}

/// Pairs odd-degree vertices through shortest corridors of faces.
fn pair_odd_vertices(wk: &mut Work) -> Result<()> {
    loop {
        let Some(v1) = (0..wk.n()).find(|&v| wk.degree(v) % 2 == 1) else {
            return Ok(());
        };
        let faces = wk.faces()?;
        let odd = |v: usize| v != v1 && wk.degree(v) % 2 == 1;
        let mut edge_faces: HashMap<usize, Vec<usize>> = HashMap::new();
        for (fi, f) in faces.iter().enumerate() {
            for e in f.edges() {
                edge_faces.entry(e).or_default().push(fi);
            }
        }
        let mut parent: Vec<Option<Option<(usize, usize)>>> = vec![None; faces.len()];
        let mut level: Vec<usize> = (0..faces.len())
            .filter(|&f| faces[f].vertices().any(|v| v == v1))
            .collect();
        for &f in &level {
            parent[f] = Some(None);
        }
        let target = loop {
            if level.is_empty() {
                return Err(Error::InvalidGraph("odd vertices cannot be paired".into()));
            }
            if let Some(&f) = level.iter().find(|&&f| faces[f].vertices().any(odd)) {
                break f;
            }
            let mut next = BTreeSet::new();
            for &f in &level {
                let mut es: Vec<usize> = faces[f].edges().collect();
                es.sort_unstable();
                for e in es {
                    for &h in &edge_faces[&e] {
                        if parent[h].is_none() {
                            parent[h] = Some(Some((f, e)));
                            next.insert(h);
                        }
                    }
                }
            }
            level = next.into_iter().collect();
        };
        let v2 = faces[target].vertices().filter(|&v| odd(v)).min().unwrap();
        let mut corridor = Vec::new();
        let mut f = target;
        while let Some(Some((p, e))) = parent[f] {
            corridor.push(e);
            f = p;
        }
        corridor.reverse();
        let mut cur = gap_of(&faces[f], v1).unwrap();

        if corridor.is_empty() {
            let g2 = gap_of(&faces[target], v2).unwrap();
            let adjacent = wk.rotation[v1].iter().any(|&e| wk.other(e, v1) == v2);
            let c = wk.add_chord(cur, g2, EdgeRole::Deleted)?;
            if adjacent {
                // route through a new vertex glued to v1
                wk.subdivide_at(c, v2);
            }
            continue;
        }
        let mut mids = Vec::new();
        for &e in &corridor {
            let (w, nf) = wk.subdivide(e);
            if cur.0 == wk.ends[nf].1 && cur.1 == e {
                cur.1 = nf;
            }
            mids.push(w);
        }
        for &w in &mids {
            let faces = wk.faces()?;
            let face = faces.iter().find(|f| f.gaps().any(|g| g == cur)).unwrap();
            let gw = gap_of(face, w).unwrap();
            let rest = wk.rotation[w].iter().copied().find(|&x| x != gw.1).unwrap();
            wk.add_chord(cur, gw, EdgeRole::Deleted)?;
            cur = (w, rest);
        }
        let faces = wk.faces()?;
        let face = faces.iter().find(|f| f.gaps().any(|g| g == cur)).unwrap();
        let g2 = gap_of(face, v2).ok_or_else(|| Error::InvalidScheme("corridor end face lost its target".into()))?;
        wk.add_chord(cur, g2, EdgeRole::Deleted)?;
    }
}

/// Replaces each vertex of even degree above 4 by a path of degree-4
/// vertices joined by contracted edges.
fn split_high_degree(wk: &mut Work) {
    while let Some(v) = (0..wk.n()).find(|&v| wk.degree(v) > 4) {
        let xs = wk.rotation[v].clone();
        let r = xs.len();
        let m = (r - 2) / 2;
        let img = wk.image[v];
        let mut us = vec![v];
        for _ in 1..m {
            let u = wk.add_vertex(img);
            us.push(u);
        }
        let path: Vec<usize> = (0..m - 1)
            .map(|k| wk.push_edge(us[k], us[k + 1], EdgeRole::Contracted, Vec::new()))
            .collect();
        let mut rot = vec![vec![xs[0], xs[1], xs[2], path[0]]];
        for k in 1..m - 1 {
            rot.push(vec![path[k - 1], xs[2 * k + 1], xs[2 * k + 2], path[k]]);
        }
        rot.push(vec![path[m - 2], xs[r - 3], xs[r - 2], xs[r - 1]]);
        for (k, rk) in rot.into_iter().enumerate() {
            for &x in &rk {
                if !path.contains(&x) {
                    let (a, b) = wk.ends[x];
                    wk.ends[x] = if a == v { (us[k], b) } else { (a, us[k]) };
                }
            }
            wk.rotation[us[k]] = rk;
        }
    }
}

/// Raises every degree-2 vertex to degree 4 with a triangle of deleted
/// chords through two subdivision vertices on one of its faces.
fn absorb_degree_two(wk: &mut Work) -> Result<()> {
    while let Some(v) = (0..wk.n()).find(|&v| wk.degree(v) == 2) {
        let faces = wk.faces()?;
        let mut pick = None;
        for f in faces.iter().filter(|f| f.vertices().any(|x| x == v)) {
            let start = (0..f.len()).find(|&i| f.steps[i].vertex == v).unwrap();
            let mut found: Vec<usize> = Vec::new();
            for k in 0..f.len() {
                let e = f.steps[(start + k) % f.len()].edge;
                let (a, b) = wk.ends[e];
                if a != v && b != v && !found.contains(&e) {
                    found.push(e);
                }
            }
            if f.len() >= 4 && found.len() >= 2 {
                pick = Some((f.gap(start), found[0], found[1]));
                break;
            }
        }
        let Some((gv, e1, e2)) = pick else {
            // only triangles at v: lengthen one first
            let f = faces.iter().find(|f| f.vertices().any(|x| x == v)).unwrap();
            let e = f
                .edges()
                .find(|&e| wk.ends[e].0 != v && wk.ends[e].1 != v)
                .ok_or_else(|| Error::InvalidGraph("degree-2 vertex on a digon".into()))?;
            wk.subdivide(e);
            continue;
        };
        let (w1, _) = wk.subdivide(e1);
        let (w2, _) = wk.subdivide(e2);
        // the face holding a and b that also holds the third triangle corner
        let face_of = |wk: &Work, a: usize, b: usize, c: usize| -> Result<(Gap, Gap)> {
            let faces = wk.faces()?;
            let mut fallback = None;
            for f in &faces {
                if let (Some(x), Some(y)) = (gap_of(f, a), gap_of(f, b)) {
                    if f.vertices().any(|u| u == c) {
                        return Ok((x, y));
                    }
                    fallback.get_or_insert((x, y));
                }
            }
            fallback.ok_or_else(|| Error::InvalidScheme("no common face".into()))
        };
        let faces = wk.faces()?;
        let f = faces.iter().find(|f| f.gaps().any(|g| g == gv)).unwrap();
        let g1 = gap_of(f, w1).unwrap();
        wk.add_chord(gv, g1, EdgeRole::Deleted)?;
        let (a, b) = face_of(wk, v, w2, w1)?;
        wk.add_chord(a, b, EdgeRole::Deleted)?;
        let (a, b) = face_of(wk, w1, w2, v)?;
        wk.add_chord(a, b, EdgeRole::Deleted)?;
    }
    Ok(())
}

fn check_output(g: &Graph, s: &EmbeddingScheme, out: &(Graph, EmbeddingScheme, MinorTransform)) -> Result<()> {
    let before = super::trace_faces(g, s)?;
    let after = super::trace_faces(&out.0, &out.1)?;
    if (0..out.0.n_vertices()).any(|v| out.0.degree(v) != 4) {
        return Err(Error::NotFourRegular);
    }
    if !out.0.is_two_connected() {
        return Err(Error::NotTwoConnected);
    }
    if before.euler_characteristic != after.euler_characteristic || before.orientable != after.orientable {
        return Err(Error::InvalidScheme("surface changed during regularization".into()));
    }
    Ok(())
}

/// Embeds `g` as a minor of a 4-regular, 2-connected simple graph on the
/// same surface.
pub fn four_regularize(g: &Graph, s: &EmbeddingScheme) -> Result<(Graph, EmbeddingScheme, MinorTransform)> {
    s.validate(g)?;
    if !g.is_two_connected() {
        return Err(Error::NotTwoConnected);
    }
    let mut wk = Work::new(g, s);
    pair_odd_vertices(&mut wk)?;
    split_high_degree(&mut wk);
    absorb_degree_two(&mut wk)?;
    let out = wk.finish()?;
    check_output(g, s, &out)?;
    Ok(out)
}

/// Subdivides around every face whose boundary repeats a vertex until all
/// face boundaries are cycles.
pub fn subdivide_to_cycle_faces(g: &Graph, s: &EmbeddingScheme) -> Result<(Graph, EmbeddingScheme, MinorTransform)> {
    s.validate(g)?;
    if (0..g.n_vertices()).any(|v| g.degree(v) != 4) {
        return Err(Error::NotFourRegular);
    }
    if !g.is_two_connected() {
        return Err(Error::NotTwoConnected);
    }
    let mut wk = Work::new(g, s);
    for _ in 0..=g.n_edges() {
        let faces = wk.faces()?;
        let Some(bad) = faces.iter().find(|f| !f.is_cycle()) else {
            break;
        };
        ring_face(&mut wk, bad.clone())?;
    }
    if let Some(bad) = wk.faces()?.iter().position(|f| !f.is_cycle()) {
        return Err(Error::FacesNotCycles(bad));
    }
    let out = wk.finish()?;
    check_output(g, s, &out)?;
    Ok(out)
}

fn ring_face(wk: &mut Work, face: Face) -> Result<()> {
    let corners: BTreeSet<usize> = (0..wk.n()).collect();
    let mut anchor = face.gap(0);
    let mut count: HashMap<usize, usize> = HashMap::new();
    for e in face.edges() {
        *count.entry(e).or_default() += 1;
    }
    let mut done = BTreeSet::new();
    for e in face.edges() {
        if !done.insert(e) {
            continue;
        }
        for _ in 0..count[&e] {
            let (_, nf) = wk.subdivide(e);
            if anchor.1 == e && anchor.0 == wk.ends[nf].1 {
                anchor.1 = nf;
            }
        }
    }
    let faces = wk.faces()?;
    let big = faces.iter().find(|f| f.gaps().any(|g| g == anchor)).unwrap().clone();
    let n = big.len();
    // One chord per corner, from the subdivision vertex next to the start
    // of the incoming occurrence to the one next to the corner on the
    // outgoing occurrence. The vertex sequence it cuts off is recorded.
    let mut chords: Vec<Vec<usize>> = Vec::new();
    for p in 0..n {
        if !corners.contains(&big.steps[p].vertex) {
            continue;
        }
        let mut seq = vec![big.steps[(p + 1) % n].vertex, big.steps[p].vertex];
        let mut k = (p + n - 1) % n;
        while !corners.contains(&big.steps[k].vertex) {
            seq.push(big.steps[k].vertex);
            k = (k + n - 1) % n;
        }
        seq.reverse();
        chords.push(seq);
    }
    for seq in chords {
        let faces = wk.faces()?;
        let m = seq.len();
        let mut hit = None;
        'search: for f in faces.iter().filter(|f| f.len() > m) {
            let n = f.len();
            for i in 0..n {
                let fwd = (0..m).all(|k| f.steps[(i + k) % n].vertex == seq[k]);
                let bwd = (0..m).all(|k| f.steps[(i + k) % n].vertex == seq[m - 1 - k]);
                if fwd {
                    hit = Some((f.gap(i), f.gap((i + m - 1) % n)));
                    break 'search;
                }
                if bwd {
                    hit = Some((f.gap((i + m - 1) % n), f.gap(i)));
                    break 'search;
                }
            }
        }
        let (gy, gz) = hit.ok_or_else(|| Error::InvalidScheme("ring chord has no face".into()))?;
        wk.add_chord(gy, gz, EdgeRole::Deleted)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::{apply_minor, trace_faces};

    fn round_trip(g: &Graph, s: &EmbeddingScheme) {
        let (g4, s4, t) = four_regularize(g, s).unwrap();
        assert!((0..g4.n_vertices()).all(|v| g4.degree(v) == 4));
        let before = trace_faces(g, s).unwrap();
        let after = trace_faces(&g4, &s4).unwrap();
        assert_eq!(before.euler_characteristic, after.euler_characteristic);
        assert_eq!(before.orientable, after.orientable);
        let (back, _) = apply_minor(&g4, &t).unwrap();
        assert_eq!(&back, g);
    }

    #[test]
    fn regularize_planar_fixtures() {
        for name in fixtures::PLANAR_FIXTURES {
            let f = fixtures::fixture(name).unwrap();
            round_trip(&f.graph, f.scheme.as_ref().unwrap());
        }
    }

    #[test]
    fn regularize_nonplanar_fixtures() {
        for (g, s) in [fixtures::k33_projective(), fixtures::k5_projective()] {
            round_trip(&g, &s);
        }
    }

    #[test]
    fn four_regular_input_is_untouched() {
        let (g, s) = fixtures::k5_projective();
        let (g4, s4, t) = four_regularize(&g, &s).unwrap();
        assert_eq!(g4, g);
        assert_eq!(s4, s);
        assert!(t.is_identity());
    }

    #[test]
    fn path_is_rejected() {
        let g = Graph::from_edges(&[(0, 1), (1, 2)]).unwrap();
        let s = EmbeddingScheme::orientable(vec![vec![0], vec![0, 1], vec![1]], 2);
        assert_eq!(four_regularize(&g, &s).unwrap_err(), Error::NotTwoConnected);
    }

    #[test]
    fn pinched_face_gets_a_ring() {
        let (g, s) = fixtures::k5_torus_pinched();
        let before = trace_faces(&g, &s).unwrap();
        let r = before.faces.iter().find(|f| !f.is_cycle()).unwrap().len();
        let (g2, s2, t) = subdivide_to_cycle_faces(&g, &s).unwrap();
        let after = trace_faces(&g2, &s2).unwrap();
        assert!(after.faces_are_cycles);
        assert_eq!(after.faces.len(), before.faces.len() + r);
        assert_eq!(after.orientable_genus, Some(1));
        let (back, _) = apply_minor(&g2, &t).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn strong_embeddings_are_untouched() {
        let (g, s) = fixtures::torus_grid3x3_orientable();
        let (g2, _, t) = subdivide_to_cycle_faces(&g, &s).unwrap();
        assert_eq!(g2, g);
        assert!(t.is_identity());
    }
}
