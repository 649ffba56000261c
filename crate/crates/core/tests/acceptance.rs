//! Acceptance run: one PASS/FAIL line per criterion.

use nalgebra::DMatrix;
use pfi::algebra::{CharacterMap, Multicomplex};
use pfi::dart::{enumerate_matchings, DartGraph};
use pfi::fixtures::{self, PLANAR_FIXTURES};
use pfi::graph::{compose, enumerate_closed_curves};
use pfi::kasteleyn::{curve_weight_report, obstruction_trials, reduce_to_minor, Obstruction};
use pfi::partition::{
    ising_bruteforce, ising_z, z_bruteforce, z_from_incidence, z_pfaffian_planar, IsingModel, Method, PfaffianEvaluator,
};
use pfi::pfaffian::{pfaffian, pfaffian_bruteforce, reduce, SkewMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const TOL: f64 = 1e-9;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(f64::EPSILON..1.0)).collect()
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn counting() -> Outcome {
    let t = Instant::now();
    let curves = enumerate_closed_curves(&fixtures::k5())
        .map_err(|e| e.to_string())?
        .len();
    let k5 = enumerate_matchings(&DartGraph::new(&fixtures::k5()).unwrap())
        .map_err(|e| e.to_string())?
        .len();
    let k33 = enumerate_matchings(&DartGraph::new(&fixtures::k33()).unwrap())
        .map_err(|e| e.to_string())?
        .len();
    let secs = t.elapsed().as_secs_f64();
    let detail = format!("K5 curves {curves}, D(K5) matchings {k5}, D(K3,3) matchings {k33}, {secs:.2} s");
    ensure(curves == 64 && k5 == 416 && k33 == 16 && secs < 5.0, detail.clone())?;
    Ok(detail)
}

fn planar_representation() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for name in PLANAR_FIXTURES.iter().filter(|n| **n != "octahedron") {
        let f = fixtures::fixture(name).unwrap();
        let s = f.scheme.unwrap();
        for _ in 0..20 {
            let w = weights(&mut rng, f.graph.n_edges());
            let z = z_pfaffian_planar(&f.graph, &s, &w).map_err(|e| format!("{name}: {e}"))?;
            let b = z_bruteforce(&f.graph, &w).unwrap();
            worst = worst.max(rel(z, b));
        }
    }
    let secs = t.elapsed().as_secs_f64();
    let detail = format!("7 fixtures x 20 draws, max rel dev {worst:.2e}, {secs:.2} s");
    ensure(worst <= TOL && secs < 30.0, detail.clone())?;
    Ok(detail)
}

fn weight_constancy() -> Outcome {
    let mut checked = Vec::new();
    for name in PLANAR_FIXTURES {
        let f = fixtures::fixture(name).unwrap();
        let s = f.scheme.unwrap();
        if 2 * f.graph.n_edges() > pfi::dart::MAX_ENUM_DARTS {
            continue;
        }
        let ev = PfaffianEvaluator::new(&f.graph, &s).map_err(|e| e.to_string())?;
        let r = ev.reduced().map_err(|e| format!("{name}: {e}"))?;
        let rep = curve_weight_report(&r, &s).map_err(|e| e.to_string())?;
        let f0 = rep.classes[0].value.re();
        ensure(
            rep.enumerated && rep.classes.len() == 1 && f0 != 0.0 && rep.spread() <= TOL,
            format!("{name}: {rep:?}"),
        )?;
        checked.push(format!("{name}({} curves, F={f0})", rep.curves));
    }
    Ok(checked.join(", "))
}

fn nonplanar_single_matrix() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut out = Vec::new();
    for name in ["k5-projective", "k33-projective"] {
        let f = fixtures::fixture(name).unwrap();
        let s = f.scheme.unwrap();
        let ev = PfaffianEvaluator::new(&f.graph, &s).map_err(|e| e.to_string())?;
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let w = weights(&mut rng, f.graph.n_edges());
            let z = ev.multicomplex(&w).map_err(|e| e.to_string())?;
            worst = worst.max(rel(z, z_bruteforce(&f.graph, &w).unwrap()));
        }
        let r = ev.reduced().map_err(|e| e.to_string())?;
        let rep = curve_weight_report(&r, &s).map_err(|e| e.to_string())?;
        let f0 = rep.classes[0].value.re();
        let classes_ok = rep.classes.len() == 2
            && rep.classes[1].mask == 1
            && (rep.classes[1].value.coeff(1).abs() - f0.abs()).abs() <= TOL * f0.abs()
            && rep.monomial
            && rep.spread() <= TOL;
        ensure(
            worst <= TOL && classes_ok,
            format!("{name}: max rel dev {worst:.2e}, classes {rep:?}"),
        )?;
        out.push(format!(
            "{name}: max rel dev {worst:.2e}, F = {} / {} over {} curves",
            rep.classes[0].value, rep.classes[1].value, rep.curves
        ));
    }
    Ok(out.join("; "))
}

fn expansions() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut out = Vec::new();
    for name in ["k5-projective", "k33-projective", "torus-grid3x3-even"] {
        let f = fixtures::fixture(name).unwrap();
        let s = f.scheme.unwrap();
        let ev = PfaffianEvaluator::new(&f.graph, &s).map_err(|e| e.to_string())?;
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let w = weights(&mut rng, f.graph.n_edges());
            let a = ev.complex_sum(&w).map_err(|e| e.to_string())?;
            let b = ev.multicomplex(&w).map_err(|e| e.to_string())?;
            worst = worst.max(rel(a, b));
        }
        ensure(
            worst <= 1e-10,
            format!("{name}: complex sum vs multicomplex {worst:.2e}"),
        )?;
        out.push(format!("{name} {} complex terms {worst:.1e}", 1 << ev.n_crosscaps()));
    }
    let (g, s) = fixtures::torus_grid3x3_even();
    let ev = PfaffianEvaluator::new(&g, &s).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    let mut terms = 0;
    for _ in 0..20 {
        let w = weights(&mut rng, g.n_edges());
        let t = ev.real_terms(&w).map_err(|e| e.to_string())?;
        terms = t.len();
        worst = worst.max(rel(t.iter().sum(), z_bruteforce(&g, &w).unwrap()));
    }
    ensure(
        worst <= TOL && terms == 4,
        format!("real sum: {terms} terms, {worst:.2e}"),
    )?;
    out.push(format!("torus real sum {terms} real Pfaffians vs brute {worst:.1e}"));
    Ok(out.join("; "))
}

fn obstructions() -> Outcome {
    let mut out = Vec::new();
    for (w, seed) in [(Obstruction::K33, 60), (Obstruction::K5, 61)] {
        let r = obstruction_trials(w, 100, seed).map_err(|e| e.to_string())?;
        let worst = r.iter().map(|r| r.relative_difference).fold(0.0, f64::max);
        ensure(
            r.iter().all(|r| !r.degenerate) && worst <= TOL,
            format!("{w:?}: {worst:.2e}"),
        )?;
        out.push(format!("{w:?} 100 trials max rel diff {worst:.2e}"));
    }
    Ok(out.join(", "))
}

fn random_skew(rng: &mut ChaCha8Rng, order: usize) -> SkewMatrix<f64> {
    SkewMatrix::from_fn(order, 0.0, |_, _| rng.gen_range(-1.0..1.0))
}

fn pfaffian_kernel() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut det_dev, mut brute_dev, mut red_dev): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for i in 0..50 {
        let order = 2 * (1 + i % 6);
        let a = random_skew(&mut rng, order);
        let pf = pfaffian(&a).unwrap();
        let det = DMatrix::from_fn(order, order, |r, c| a.get(r, c)).determinant();
        det_dev = det_dev.max(rel(pf * pf, det));
        brute_dev = brute_dev.max(rel(pf, pfaffian_bruteforce(&a).unwrap()));
    }
    for i in 0..50 {
        let n = 2 + i % 5;
        let a = random_skew(&mut rng, 2 * n);
        let p = rng.gen_range(1..n);
        let mut idx: Vec<usize> = (0..2 * n).collect();
        for j in 0..2 * p {
            let k = rng.gen_range(j..2 * n);
            idx.swap(j, k);
        }
        let mut k = idx[..2 * p].to_vec();
        k.sort_unstable();
        let (pfk, derived) = reduce(&a, &k).map_err(|e| e.to_string())?;
        let lhs = pfaffian_bruteforce(&a).unwrap();
        let rhs = pfk.powi(-((n - p - 1) as i32)) * pfaffian_bruteforce(&derived).unwrap();
        red_dev = red_dev.max(rel(lhs, rhs));
    }
    let detail = format!("Pf^2 vs det {det_dev:.1e}, fast vs brute {brute_dev:.1e}, reduction {red_dev:.1e}");
    ensure(det_dev <= 1e-8 && brute_dev <= 1e-8 && red_dev <= 1e-8, detail.clone())?;
    Ok(detail)
}

fn minor_reduction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (g0, s0) = fixtures::grid_planar(fixtures::PATCH_ROWS, fixtures::PATCH_COLS);
    let ev = PfaffianEvaluator::new(&g0, &s0).map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    for (name, (patch, _, t)) in [
        ("hexagonal", fixtures::hex_patch()),
        ("triangular", fixtures::tri_patch()),
    ] {
        let full = compose(&ev.prepared.transform, &t).map_err(|e| e.to_string())?;
        let r = reduce_to_minor(&ev.build.matrix, &full).map_err(|e| e.to_string())?;
        ensure(
            r.graph == patch,
            format!("{name}: reduced graph differs from the patch"),
        )?;
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let w = weights(&mut rng, patch.n_edges());
            let z = z_from_incidence(&r, &w).map_err(|e| e.to_string())?;
            worst = worst.max(rel(z, z_bruteforce(&patch, &w).unwrap()));
        }
        ensure(worst <= TOL, format!("{name}: {worst:.2e}"))?;
        out.push(format!("{name} ({} darts) {worst:.1e}", 2 * patch.n_edges()));
    }
    Ok(out.join(", "))
}

fn ising() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for name in ["k3", "k4", "grid2x2"] {
        let f = fixtures::fixture(name).unwrap();
        let s = f.scheme.unwrap();
        for _ in 0..20 {
            let j: Vec<f64> = (0..f.graph.n_edges()).map(|_| rng.gen_range(0.0..2.0)).collect();
            let beta = rng.gen_range(0.01..2.0);
            let m = IsingModel::new(f.graph.clone(), j, beta).map_err(|e| e.to_string())?;
            let z = ising_z(&m, Some(&s), Method::Planar).map_err(|e| e.to_string())?;
            worst = worst.max(rel(z, ising_bruteforce(&m).unwrap()));
        }
    }
    ensure(worst <= TOL, format!("{worst:.2e}"))?;
    Ok(format!("K3, K4, grid2x2 x 20 draws, max rel dev {worst:.2e}"))
}

fn character_average() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let n = i % 5;
        let x = Multicomplex::from_coeffs(n, (0..1 << n).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
        let avg = CharacterMap::all(n)
            .iter()
            .map(|h| h.apply(&x).unwrap())
            .sum::<num_complex::Complex64>()
            / (1u64 << n) as f64;
        worst = worst.max((avg.re - x.re()).abs()).max(avg.im.abs());
    }
    ensure(worst <= 1e-12, format!("{worst:.2e}"))?;
    Ok(format!("1000 elements, n <= 4, max abs dev {worst:.2e}"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("counting", counting),
        ("planar Pfaffian representation", planar_representation),
        ("constant curve weight", weight_constancy),
        ("single multicomplex Pfaffian", nonplanar_single_matrix),
        ("complex and real expansions", expansions),
        ("obstruction identities", obstructions),
        ("Pfaffian kernel", pfaffian_kernel),
        ("minor reduction", minor_reduction),
        ("Ising correspondence", ising),
        ("character averaging", character_average),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let ms = t.elapsed().as_secs_f64() * 1e3;
        match r {
            Ok(d) => println!("PASS {:>2} {name}: {d} [{ms:.0} ms]", i + 1),
            Err(d) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {d} [{ms:.0} ms]", i + 1)
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
