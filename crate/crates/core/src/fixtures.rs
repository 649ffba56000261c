//! Small graphs and embedding schemes used by tests, the CLI and examples.

use crate::graph::{apply_minor_scheme, EmbeddingScheme, Graph, MinorTransform};

fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
    Graph::new(n, edges.to_vec()).expect("fixture graph is simple")
}

/// Rotation of a straight-line drawing: counterclockwise by angle.
pub fn rotation_from_coords(g: &Graph, xy: &[(f64, f64)]) -> Vec<Vec<usize>> {
    (0..g.n_vertices())
        .map(|v| {
            let mut es = g.incident(v).to_vec();
            let ang = |e: usize| {
                let w = g.other(e, v);
                (xy[w].1 - xy[v].1).atan2(xy[w].0 - xy[v].0)
            };
            es.sort_by(|&a, &b| ang(a).partial_cmp(&ang(b)).unwrap());
            es
        })
        .collect()
}

fn planar(g: Graph, xy: &[(f64, f64)]) -> (Graph, EmbeddingScheme) {
    let rot = rotation_from_coords(&g, xy);
    let m = g.n_edges();
    (g, EmbeddingScheme::orientable(rot, m))
}

pub fn k3() -> Graph {
    graph(3, &[(0, 1), (1, 2), (0, 2)])
}

pub fn k3_planar() -> (Graph, EmbeddingScheme) {
    planar(k3(), &[(0.0, 0.0), (1.0, 0.0), (0.5, 1.0)])
}

pub fn c4() -> Graph {
    graph(4, &[(0, 1), (1, 2), (2, 3), (0, 3)])
}

pub fn c4_planar() -> (Graph, EmbeddingScheme) {
    planar(c4(), &[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])
}

pub fn k4() -> Graph {
    graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
}

pub fn k4_planar() -> (Graph, EmbeddingScheme) {
    planar(k4(), &[(0.0, 0.0), (2.0, 0.0), (1.0, 2.0), (1.0, 0.7)])
}

/// Square grid with `rows x cols` vertices; vertex `r*cols + c`.
/// Horizontal edges come first (row-major), then vertical edges.
pub fn grid(rows: usize, cols: usize) -> Graph {
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols - 1 {
            edges.push((id(r, c), id(r, c + 1)));
        }
    }
    for r in 0..rows - 1 {
        for c in 0..cols {
            edges.push((id(r, c), id(r + 1, c)));
        }
    }
    graph(rows * cols, &edges)
}

pub fn grid_planar(rows: usize, cols: usize) -> (Graph, EmbeddingScheme) {
    let xy: Vec<(f64, f64)> = (0..rows * cols)
        .map(|v| ((v % cols) as f64, -((v / cols) as f64)))
        .collect();
    planar(grid(rows, cols), &xy)
}

/// Id of the vertical grid edge below vertex `(r, c)`.
pub fn grid_vertical(rows: usize, cols: usize, r: usize, c: usize) -> usize {
    assert!(r + 1 < rows && c < cols);
    rows * (cols - 1) + r * cols + c
}

/// Alternating vertical edges of a grid: deleting them leaves a hexagonal
/// brick wall, contracting them a triangular lattice.
pub fn brick_pattern(rows: usize, cols: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for r in 0..rows - 1 {
        for c in 0..cols {
            if (r + c) % 2 == 1 {
                out.push(grid_vertical(rows, cols, r, c));
            }
        }
    }
    out
}

pub const PATCH_ROWS: usize = 4;
pub const PATCH_COLS: usize = 5;

/// Hexagonal patch obtained from the 4x5 grid by deleting the brick pattern.
pub fn hex_patch() -> (Graph, EmbeddingScheme, MinorTransform) {
    let (g, s) = grid_planar(PATCH_ROWS, PATCH_COLS);
    let t = MinorTransform::new(brick_pattern(PATCH_ROWS, PATCH_COLS), vec![]);
    apply_minor_scheme(&g, &s, &t).expect("hex patch")
}

/// Triangular patch obtained from the 4x5 grid by contracting the brick pattern.
pub fn tri_patch() -> (Graph, EmbeddingScheme, MinorTransform) {
    let (g, s) = grid_planar(PATCH_ROWS, PATCH_COLS);
    let t = MinorTransform::new(vec![], brick_pattern(PATCH_ROWS, PATCH_COLS));
    apply_minor_scheme(&g, &s, &t).expect("tri patch")
}

/// Octahedron: vertices `k` and `k + 3` are opposite.
pub fn octahedron() -> Graph {
    let mut edges = Vec::new();
    for a in 0..6 {
        for b in a + 1..6 {
            if b != a + 3 {
                edges.push((a, b));
            }
        }
    }
    graph(6, &edges)
}

pub fn octahedron_planar() -> (Graph, EmbeddingScheme) {
    let pt = |r: f64, deg: f64| (r * deg.to_radians().cos(), r * deg.to_radians().sin());
    let xy = [
        pt(2.0, 90.0),
        pt(2.0, 210.0),
        pt(2.0, 330.0),
        pt(0.5, 270.0),
        pt(0.5, 30.0),
        pt(0.5, 150.0),
    ];
    planar(octahedron(), &xy)
}

/// K5 on vertices a..e = 0..4 with edges
/// 0=ab 1=bc 2=cd 3=de 4=ae 5=ac 6=ad 7=bd 8=be 9=ce.
pub fn k5() -> Graph {
    graph(
        5,
        &[
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 4),
            (0, 4),
            (0, 2),
            (0, 3),
            (1, 3),
            (1, 4),
            (2, 4),
        ],
    )
}

/// K5 in the projective plane: six faces, each a cycle; edges 4, 5, 7, 8
/// pass through the single crosscap.
pub fn k5_projective() -> (Graph, EmbeddingScheme) {
    let g = k5();
    let rotation = vec![
        vec![0, 4, 5, 6],
        vec![0, 1, 7, 8],
        vec![1, 2, 9, 5],
        vec![2, 6, 7, 3],
        vec![3, 8, 4, 9],
    ];
    let mut crosscaps = vec![Vec::new(); 10];
    for e in [4, 5, 7, 8] {
        crosscaps[e] = vec![1];
    }
    (
        g,
        EmbeddingScheme {
            rotation,
            crosscaps,
            n_crosscaps: 1,
        },
    )
}

/// K5 on the torus with one face whose boundary passes a vertex twice.
pub fn k5_torus_pinched() -> (Graph, EmbeddingScheme) {
    let g = k5();
    let rotation = vec![
        vec![0, 4, 5, 6],
        vec![0, 1, 7, 8],
        vec![1, 2, 5, 9],
        vec![2, 3, 7, 6],
        vec![3, 9, 4, 8],
    ];
    (g, EmbeddingScheme::orientable(rotation, 10))
}

/// K3,3 with parts a,b,c = 0,1,2 and d,e,f = 3,4,5; edge ids
/// 0=ad 1=ae 2=af 3=bd 4=be 5=bf 6=cd 7=ce 8=cf.
pub fn k33() -> Graph {
    graph(
        6,
        &[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)],
    )
}

/// K3,3 in the projective plane: four faces, all cycles; edges ad, be, cf
/// pass through the crosscap.
pub fn k33_projective() -> (Graph, EmbeddingScheme) {
    let g = k33();
    let rotation = vec![
        vec![0, 1, 2],
        vec![3, 4, 5],
        vec![6, 7, 8],
        vec![0, 3, 6],
        vec![1, 4, 7],
        vec![2, 5, 8],
    ];
    let mut crosscaps = vec![Vec::new(); 9];
    for e in [0, 4, 8] {
        crosscaps[e] = vec![1];
    }
    (
        g,
        EmbeddingScheme {
            rotation,
            crosscaps,
            n_crosscaps: 1,
        },
    )
}

/// 3x3 grid with periodic boundary in both directions (4-regular, 18 edges).
/// Horizontal edge `(r,c)-(r,c+1)` has id `3r + c`, vertical edge
/// `(r,c)-(r+1,c)` has id `9 + 3r + c` (indices mod 3).
pub fn torus_grid3x3() -> Graph {
    let id = |r: usize, c: usize| 3 * (r % 3) + c % 3;
    let mut edges = Vec::new();
    for r in 0..3 {
        for c in 0..3 {
            edges.push((id(r, c), id(r, c + 1)));
        }
    }
    for r in 0..3 {
        for c in 0..3 {
            edges.push((id(r, c), id(r + 1, c)));
        }
    }
    graph(9, &edges)
}

fn torus_rotation() -> Vec<Vec<usize>> {
    let h = |r: usize, c: usize| 3 * (r % 3) + c % 3;
    let v = |r: usize, c: usize| 9 + 3 * (r % 3) + c % 3;
    let mut rot = Vec::new();
    for r in 0..3 {
        for c in 0..3 {
            // right, up, left, down
            rot.push(vec![h(r, c), v(r + 2, c), h(r, c + 2), v(r, c)]);
        }
    }
    rot
}

pub fn torus_grid3x3_orientable() -> (Graph, EmbeddingScheme) {
    (torus_grid3x3(), EmbeddingScheme::orientable(torus_rotation(), 18))
}

/// The torus grid redrawn on a sphere with three crosscaps: edges wrapping
/// horizontally cross crosscaps 1 and 2, edges wrapping vertically cross
/// crosscaps 1 and 3. Every edge crosses an even number of times.
pub fn torus_grid3x3_even() -> (Graph, EmbeddingScheme) {
    let mut crosscaps = vec![Vec::new(); 18];
    for r in 0..3 {
        crosscaps[3 * r + 2] = vec![1, 2];
    }
    for c in 0..3 {
        crosscaps[9 + 6 + c] = vec![1, 3];
    }
    (
        torus_grid3x3(),
        EmbeddingScheme {
            rotation: torus_rotation(),
            crosscaps,
            n_crosscaps: 3,
        },
    )
}

/// A named fixture for the command line and the acceptance run.
pub struct Fixture {
    pub name: &'static str,
    pub graph: Graph,
    pub scheme: Option<EmbeddingScheme>,
}

pub const FIXTURE_NAMES: &[&str] = &[
    "k3",
    "c4",
    "k4",
    "grid2x2",
    "grid3x3",
    "hex-patch",
    "tri-patch",
    "octahedron",
    "k5",
    "k5-projective",
    "k33",
    "k33-projective",
    "k5-torus-pinched",
    "torus-grid3x3",
    "torus-grid3x3-even",
];

pub const PLANAR_FIXTURES: &[&str] = &[
    "k3",
    "c4",
    "k4",
    "grid2x2",
    "grid3x3",
    "hex-patch",
    "tri-patch",
    "octahedron",
];

pub fn fixture(name: &str) -> Option<Fixture> {
    let with = |name, (g, s): (Graph, EmbeddingScheme)| Fixture {
        name,
        graph: g,
        scheme: Some(s),
    };
    Some(match name {
        "k3" => with("k3", k3_planar()),
        "c4" => with("c4", c4_planar()),
        "k4" => with("k4", k4_planar()),
        "grid2x2" => with("grid2x2", grid_planar(2, 2)),
        "grid3x3" => with("grid3x3", grid_planar(3, 3)),
        "hex-patch" => {
            let (g, s, _) = hex_patch();
            with("hex-patch", (g, s))
        }
        "tri-patch" => {
            let (g, s, _) = tri_patch();
            with("tri-patch", (g, s))
        }
        "octahedron" => with("octahedron", octahedron_planar()),
        "k5" => Fixture {
            name: "k5",
            graph: k5(),
            scheme: None,
        },
        "k5-projective" => with("k5-projective", k5_projective()),
        "k33" => Fixture {
            name: "k33",
            graph: k33(),
            scheme: None,
        },
        "k33-projective" => with("k33-projective", k33_projective()),
        "k5-torus-pinched" => with("k5-torus-pinched", k5_torus_pinched()),
        "torus-grid3x3" => with("torus-grid3x3", torus_grid3x3_orientable()),
        "torus-grid3x3-even" => with("torus-grid3x3-even", torus_grid3x3_even()),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::trace_faces;

    #[test]
    fn every_fixture_scheme_is_valid() {
        for name in FIXTURE_NAMES {
            let f = fixture(name).unwrap();
            if let Some(s) = &f.scheme {
                s.validate(&f.graph).unwrap();
                trace_faces(&f.graph, s).unwrap();
            }
        }
    }

    #[test]
    fn planar_fixtures_have_genus_zero() {
        for name in PLANAR_FIXTURES {
            let f = fixture(name).unwrap();
            let r = trace_faces(&f.graph, f.scheme.as_ref().unwrap()).unwrap();
            assert_eq!(r.orientable_genus, Some(0), "{name}");
        }
    }

    #[test]
    fn surfaces_of_nonplanar_fixtures() {
        let (g, s) = k33_projective();
        let r = trace_faces(&g, &s).unwrap();
        assert_eq!(r.nonorientable_genus, Some(1));
        assert_eq!(r.faces.len(), 4);
        for (g, s) in [torus_grid3x3_orientable(), torus_grid3x3_even()] {
            let r = trace_faces(&g, &s).unwrap();
            assert_eq!(r.orientable_genus, Some(1));
            assert!(r.faces.iter().all(|f| f.len() == 4));
        }
        let (g, s) = k5_torus_pinched();
        let r = trace_faces(&g, &s).unwrap();
        assert_eq!(r.orientable_genus, Some(1));
        assert_eq!(r.faces.iter().filter(|f| !f.is_cycle()).count(), 1);
    }

    #[test]
    fn grid_counts() {
        let g = grid(3, 3);
        assert_eq!((g.n_vertices(), g.n_edges()), (9, 12));
        assert_eq!(brick_pattern(4, 5).len(), 7);
    }
}
