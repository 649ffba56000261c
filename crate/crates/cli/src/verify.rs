//! Cross-checks every applicable evaluation route on one graph.

use pfi::dart::{enumerate_matchings, DartGraph, MAX_ENUM_DARTS};
use pfi::graph::{enumerate_closed_curves, trace_faces, EmbeddingScheme, Graph, MAX_ENUM_BETTI};
use pfi::kasteleyn::{curve_weight_report, WeightReport, MAX_CHECK_BETTI};
use pfi::partition::{z_bruteforce, z_from_incidence, Method, PfaffianEvaluator};
use pfi::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::time::Instant;

#[derive(Debug, Serialize)]
pub struct MethodResult {
    pub method: String,
    /// Value on the first weight draw.
    pub z: Option<f64>,
    /// Largest relative deviation from the reference route over all draws.
    pub max_deviation: Option<f64>,
    pub skipped: Option<String>,
    pub millis: f64,
}

#[derive(Debug, Serialize)]
pub struct ClassRow {
    pub mask: usize,
    pub curves: usize,
    pub value: String,
    pub spread: f64,
}

#[derive(Debug, Serialize)]
pub struct Constancy {
    /// Which matrix was checked: the reduction onto the input graph or the
    /// prepared 4-regular graph.
    pub matrix: String,
    pub curves: usize,
    pub enumerated: bool,
    pub spread: f64,
    pub lambda_error: f64,
    pub monomial: bool,
    pub classes: Vec<ClassRow>,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct VerificationReport {
    pub graph: String,
    pub vertices: usize,
    pub edges: usize,
    pub betti: usize,
    pub closed_curves: Option<usize>,
    pub matchings: Option<usize>,
    pub surface: Option<String>,
    pub reference: String,
    pub draws: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub methods: Vec<MethodResult>,
    pub constancy: Option<Constancy>,
    pub notes: Vec<String>,
    pub pass: bool,
}

pub struct VerifyOptions {
    pub draws: usize,
    pub seed: u64,
    pub tol: f64,
}

fn rel(a: f64, b: f64) -> f64 {
    let s = a.abs().max(b.abs());
    if s == 0.0 {
        0.0
    } else {
        (a - b).abs() / s
    }
}

fn constancy(w: &WeightReport, matrix: &str, tol: f64) -> Constancy {
    Constancy {
        matrix: matrix.into(),
        curves: w.curves,
        enumerated: w.enumerated,
        spread: w.spread(),
        lambda_error: w.lambda_error,
        monomial: w.monomial,
        classes: w
            .classes
            .iter()
            .map(|c| ClassRow {
                mask: c.mask,
                curves: c.curves,
                value: c.value.to_string(),
                spread: c.spread,
            })
            .collect(),
        pass: w.holds(tol),
    }
}

pub fn verify(
    name: &str,
    g: &Graph,
    s: Option<&EmbeddingScheme>,
    opt: &VerifyOptions,
) -> pfi::Result<VerificationReport> {
    let betti = g.first_betti()?;
    let mut notes = Vec::new();
    let mut pass = true;

    let closed_curves = if betti <= MAX_ENUM_BETTI {
        let n = enumerate_closed_curves(g)?.len();
        if n != 1usize << betti {
            notes.push(format!("enumerated {n} closed curves, expected 2^{betti}"));
            pass = false;
        }
        Some(n)
    } else {
        None
    };
    let d = DartGraph::new(g)?;
    let matchings = if d.n_darts() <= MAX_ENUM_DARTS {
        Some(enumerate_matchings(&d)?.len())
    } else {
        None
    };

    let mut rng = ChaCha8Rng::seed_from_u64(opt.seed);
    let draws: Vec<Vec<f64>> = (0..opt.draws)
        .map(|_| (0..g.n_edges()).map(|_| rng.gen_range(f64::EPSILON..1.0)).collect())
        .collect();

    let mut methods = Vec::new();
    let brute: Option<Vec<f64>> = if closed_curves.is_some() {
        let t = Instant::now();
        let z = draws
            .iter()
            .map(|w| z_bruteforce(g, w))
            .collect::<pfi::Result<Vec<_>>>()?;
        methods.push(MethodResult {
            method: "brute".into(),
            z: z.first().copied(),
            max_deviation: Some(0.0),
            skipped: None,
            millis: t.elapsed().as_secs_f64() * 1e3,
        });
        Some(z)
    } else {
        notes.push("cycle space too large for brute force".into());
        None
    };

    let mut surface = None;
    let mut reference = "brute".to_string();
    let mut constancy_report = None;
    if let Some(s) = s {
        let faces = trace_faces(g, s)?;
        let kind = match (faces.orientable_genus, faces.nonorientable_genus) {
            (Some(0), _) => "sphere".to_string(),
            (Some(h), _) => format!("orientable genus {h}"),
            (_, Some(k)) => format!("nonorientable genus {k}"),
            _ => "unknown".into(),
        };
        surface = Some(format!("{kind}, {} in scheme", plural(s.n_crosscaps, "crosscap")));
        if !faces.is_planar() && s.n_crosscaps == 0 {
            notes.push("nonplanar scheme without crosscaps: the Pfaffian routes need crosscap annotations".into());
        } else {
            let ev = PfaffianEvaluator::new(g, s)?;
            if let Some(e) = &ev.build.class_error {
                notes.push(format!("class check failed: {e}"));
                pass = false;
            }
            let ref_values: Vec<f64> = match &brute {
                Some(b) => b.clone(),
                None => {
                    reference = "multicomplex".into();
                    draws.iter().map(|w| ev.multicomplex(w)).collect::<pfi::Result<_>>()?
                }
            };
            let reduced = ev.reduced();
            let routes: [(&str, Option<Method>); 5] = [
                ("planar", Some(Method::Planar)),
                ("multicomplex", Some(Method::Multicomplex)),
                ("complex-sum", Some(Method::ComplexSum)),
                ("real-sum", Some(Method::RealSum)),
                ("reduced", None),
            ];
            for (label, m) in routes {
                let t = Instant::now();
                let mut dev: f64 = 0.0;
                let mut first = None;
                let mut skipped = None;
                for (w, zr) in draws.iter().zip(&ref_values) {
                    let z = match (m, &reduced) {
                        (Some(m), _) => ev.evaluate(m, w),
                        (None, Ok(r)) => z_from_incidence(r, w),
                        (None, Err(e)) => Err(e.clone()),
                    };
                    match z {
                        Ok(z) => {
                            first.get_or_insert(z);
                            dev = dev.max(rel(z, *zr));
                        }
                        Err(e @ (Error::NotPlanar | Error::NotOrientableDerived)) => {
                            skipped = Some(e.to_string());
                            break;
                        }
                        Err(e) => return Err(e),
                    }
                }
                if skipped.is_none() && dev > opt.tol {
                    pass = false;
                }
                methods.push(MethodResult {
                    method: label.into(),
                    z: first,
                    max_deviation: skipped.is_none().then_some(dev),
                    skipped,
                    millis: t.elapsed().as_secs_f64() * 1e3,
                });
            }
            let check = match &reduced {
                Ok(r) if 2 * g.n_edges() <= MAX_ENUM_DARTS => Some((curve_weight_report(r, s)?, "reduced")),
                _ if ev.prepared.graph.first_betti()? <= MAX_CHECK_BETTI => {
                    Some((curve_weight_report(&ev.build.matrix, &ev.prepared.scheme)?, "prepared"))
                }
                _ => None,
            };
            match check {
                Some((w, label)) => {
                    let c = constancy(&w, label, opt.tol);
                    pass &= c.pass;
                    constancy_report = Some(c);
                }
                None => notes.push("curve-weight check skipped: cycle space too large".into()),
            }
        }
    } else {
        notes.push("no scheme: only counts and brute force were checked".into());
    }

    Ok(VerificationReport {
        graph: name.into(),
        vertices: g.n_vertices(),
        edges: g.n_edges(),
        betti,
        closed_curves,
        matchings,
        surface,
        reference,
        draws: opt.draws,
        seed: opt.seed,
        tolerance: opt.tol,
        methods,
        constancy: constancy_report,
        notes,
        pass,
    })
}

pub fn print_text(r: &VerificationReport) {
    println!("graph {}: |V|={} |E|={} beta={}", r.graph, r.vertices, r.edges, r.betti);
    if let Some(n) = r.closed_curves {
        println!("closed curves: {n}");
    }
    if let Some(n) = r.matchings {
        println!("dart-graph matchings: {n}");
    }
    if let Some(s) = &r.surface {
        println!("surface: {s}");
    }
    println!("{} weight draws (seed {}), reference {}", r.draws, r.seed, r.reference);
    for m in &r.methods {
        match (&m.skipped, m.max_deviation) {
            (Some(why), _) => println!("  {:<13} skipped: {why}", m.method),
            (None, Some(d)) => println!(
                "  {:<13} Z={:<22} max rel dev {:.2e}  {:.1} ms",
                m.method,
                m.z.map(|z| z.to_string()).unwrap_or_default(),
                d,
                m.millis
            ),
            _ => {}
        }
    }
    if let Some(c) = &r.constancy {
        println!(
            "curve weights ({} matrix, {} curves, {}): spread {:.2e}, |Re(lambda F) - 1| <= {:.2e}, {}",
            c.matrix,
            c.curves,
            if c.enumerated { "enumerated" } else { "closed form" },
            c.spread,
            c.lambda_error,
            if c.pass { "ok" } else { "FAILED" }
        );
        for k in &c.classes {
            println!("  class {:#b}: {} curves, F = {}", k.mask, k.curves, k.value);
        }
    }
    for n in &r.notes {
        println!("note: {n}");
    }
    println!("{}", if r.pass { "PASS" } else { "FAIL" });
}

pub(crate) fn plural(n: usize, word: &str) -> String {
    if n == 1 {
        format!("{n} {word}")
    } else {
        format!("{n} {word}s")
    }
}
