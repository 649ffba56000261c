use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use pfi::dart::{enumerate_matchings, DartGraph, MAX_ENUM_DARTS};
use pfi::fixtures::{fixture, FIXTURE_NAMES};
use pfi::graph::{apply_minor_scheme, compose, trace_faces, EmbeddingScheme, Graph, MinorTransform};
use pfi::io::{dump_matrix, format_graph, format_scheme, parse_couplings, parse_graph, parse_scheme, parse_weights};
use pfi::kasteleyn::{obstruction_trials, reduce_to_minor, Obstruction};
use pfi::partition::{ising_z, z_bruteforce, z_by_method, z_from_incidence, IsingModel, Method, PfaffianEvaluator};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

mod verify;

const DEFAULT_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(
    name = "pfi",
    version,
    about = "Closed-curve and Ising partition functions via Pfaffians"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate Z for one weight function (or Ising couplings).
    Compute(ComputeArgs),
    /// Cross-check every applicable route on random weights.
    Verify(VerifyArgs),
    /// Check the K3,3 / K5 product identities on random incidence matrices.
    Obstruction(ObstructionArgs),
    /// Describe the dart graph.
    Dartgraph(DartArgs),
    /// Reduce the built matrix onto a minor of the input graph.
    Reduce(ReduceArgs),
    /// List shipped fixtures or write them to files.
    Fixtures(FixturesArgs),
}

#[derive(Args)]
struct Source {
    /// Edge-list file.
    #[arg(long, conflicts_with = "fixture")]
    graph: Option<PathBuf>,
    /// Shipped fixture name.
    #[arg(long)]
    fixture: Option<String>,
    /// Scheme file; overrides a fixture's own scheme.
    #[arg(long)]
    scheme: Option<PathBuf>,
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    source: Source,
    /// `uniform:x` or a file of `e w` lines.
    #[arg(long, required_unless_present = "couplings")]
    weights: Option<String>,
    /// Ising couplings, `uniform:J` or a file of `e J` lines.
    #[arg(long, requires = "beta")]
    couplings: Option<String>,
    /// Inverse temperature for the Ising model.
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, default_value = "auto")]
    method: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, default_value_t = 20)]
    draws: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Check the obstruction identity instead (k5 or k33 fixtures).
    #[arg(long)]
    expect_obstruction: bool,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ObstructionArgs {
    /// k5 or k33.
    which: String,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct DartArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ReduceArgs {
    #[command(flatten)]
    source: Source,
    /// Comma-separated edge ids to delete.
    #[arg(long, value_delimiter = ',')]
    delete: Vec<usize>,
    /// Comma-separated edge ids to contract.
    #[arg(long, value_delimiter = ',')]
    contract: Vec<usize>,
    /// Weights on the minor, compared against brute force.
    #[arg(long)]
    weights: Option<String>,
    /// Write the reduced matrix here (`-` for stdout).
    #[arg(long)]
    dump: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct FixturesArgs {
    /// Write `<name>.graph` and `<name>.scheme` files into this directory.
    #[arg(long)]
    write: Option<PathBuf>,
}

struct Loaded {
    name: String,
    graph: Graph,
    scheme: Option<EmbeddingScheme>,
}

fn read(path: &PathBuf) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// `uniform:x` passes through; anything else names a file.
fn read_values(spec: &str) -> anyhow::Result<String> {
    if spec.starts_with("uniform:") {
        Ok(spec.to_string())
    } else {
        read(&PathBuf::from(spec))
    }
}

impl Source {
    fn load(&self) -> anyhow::Result<Loaded> {
        let (name, graph, scheme) = match (&self.graph, &self.fixture) {
            (Some(p), _) => (p.display().to_string(), parse_graph(&read(p)?)?, None),
            (None, Some(n)) => {
                let f = fixture(n).ok_or_else(|| anyhow!("unknown fixture {n:?}; see `pfi fixtures`"))?;
                (n.clone(), f.graph, f.scheme)
            }
            (None, None) => bail!("give --graph or --fixture"),
        };
        let scheme = match &self.scheme {
            Some(p) => Some(parse_scheme(&read(p)?, &graph)?),
            None => scheme,
        };
        Ok(Loaded { name, graph, scheme })
    }
}

fn tolerance() -> anyhow::Result<f64> {
    match std::env::var("PFI_TOL") {
        Ok(s) => s.parse().with_context(|| format!("PFI_TOL={s:?} is not a number")),
        Err(_) => Ok(DEFAULT_TOL),
    }
}

fn compute(a: ComputeArgs) -> anyhow::Result<bool> {
    let l = a.source.load()?;
    let method: Method = a.method.parse()?;
    let t = Instant::now();
    let (z, kind) = match &a.couplings {
        Some(c) => {
            let j = parse_couplings(&read_values(c)?, l.graph.n_edges())?;
            let m = IsingModel::new(l.graph.clone(), j, a.beta.expect("clap enforces --beta"))?;
            (ising_z(&m, l.scheme.as_ref(), method)?, "ising")
        }
        None => {
            let w = parse_weights(
                &read_values(a.weights.as_deref().unwrap_or_default())?,
                l.graph.n_edges(),
            )?;
            (z_by_method(&l.graph, l.scheme.as_ref(), &w, method)?, "curves")
        }
    };
    if a.json {
        let r = json!({
            "graph": l.name, "model": kind, "method": method.to_string(),
            "z": z, "millis": t.elapsed().as_secs_f64() * 1e3,
        });
        println!("{r}");
    } else {
        println!("{z}");
    }
    Ok(true)
}

fn obstruction_kind(name: &str) -> anyhow::Result<Obstruction> {
    let base = name.split('-').next().unwrap_or(name);
    Ok(base.parse()?)
}

fn obstruction(which: Obstruction, trials: usize, seed: u64, tol: f64, json_out: bool) -> anyhow::Result<bool> {
    let reports = obstruction_trials(which, trials, seed)?;
    let worst = reports.iter().map(|r| r.relative_difference).fold(0.0, f64::max);
    let degenerate = reports.iter().filter(|r| r.degenerate).count();
    let pass = reports.iter().all(|r| r.holds(tol) && !r.degenerate);
    if json_out {
        let r = json!({
            "graph": format!("{which:?}"), "trials": trials, "seed": seed, "tolerance": tol,
            "max_relative_difference": worst, "degenerate": degenerate, "pass": pass,
            "first": reports.first().map(|r| json!({"f_s": r.f_s, "f_s_prime": r.f_s_prime, "lhs": r.lhs, "rhs": r.rhs})),
        });
        println!("{r}");
    } else {
        println!("{which:?}: {trials} random matrices (seed {seed})");
        if let Some(r) = reports.first() {
            println!("  first trial: prod F(S) = {:.6e}, -prod F(S') = {:.6e}", r.lhs, r.rhs);
        }
        println!("  max relative difference {worst:.2e}, degenerate trials {degenerate}");
        println!("{}", if pass { "PASS" } else { "FAIL" });
    }
    Ok(pass)
}

fn run_verify(a: VerifyArgs) -> anyhow::Result<bool> {
    let tol = tolerance()?;
    let l = a.source.load()?;
    if a.expect_obstruction {
        return obstruction(obstruction_kind(&l.name)?, a.trials, a.seed, tol, a.json);
    }
    let opt = verify::VerifyOptions {
        draws: a.draws,
        seed: a.seed,
        tol,
    };
    let r = verify::verify(&l.name, &l.graph, l.scheme.as_ref(), &opt)?;
    if a.json {
        println!("{}", serde_json::to_string_pretty(&r)?);
    } else {
        verify::print_text(&r);
    }
    Ok(r.pass)
}

fn dartgraph(a: DartArgs) -> anyhow::Result<bool> {
    let l = a.source.load()?;
    let d = DartGraph::new(&l.graph)?;
    let matchings = if d.n_darts() <= MAX_ENUM_DARTS {
        Some(enumerate_matchings(&d)?.len())
    } else {
        None
    };
    let sites = d.site_edges().len();
    let links = d.link_edges().len();
    if a.json {
        let r = json!({
            "graph": l.name, "darts": d.labels(), "site_edges": sites, "link_edges": links, "matchings": matchings,
        });
        println!("{r}");
    } else {
        println!("darts ({}): {}", d.n_darts(), d.labels().join(" "));
        println!("site edges: {sites}");
        println!("link edges: {links}");
        match matchings {
            Some(m) => println!("perfect matchings: {m}"),
            None => println!("perfect matchings: not enumerated (more than {MAX_ENUM_DARTS} darts)"),
        }
    }
    Ok(true)
}

fn reduce(a: ReduceArgs) -> anyhow::Result<bool> {
    let tol = tolerance()?;
    let l = a.source.load()?;
    let s = l.scheme.ok_or(pfi::Error::MissingScheme)?;
    let (minor, _, t) = apply_minor_scheme(&l.graph, &s, &MinorTransform::new(a.delete.clone(), a.contract.clone()))?;
    let ev = PfaffianEvaluator::new(&l.graph, &s)?;
    let r = reduce_to_minor(&ev.build.matrix, &compose(&ev.prepared.transform, &t)?)?;
    debug_assert_eq!(r.graph, minor);
    let mut pass = true;
    let check = match &a.weights {
        Some(spec) => {
            let w = parse_weights(&read_values(spec)?, r.graph.n_edges())?;
            let z = z_from_incidence(&r, &w)?;
            let b = z_bruteforce(&r.graph, &w)?;
            let dev = (z - b).abs() / z.abs().max(b.abs());
            pass = dev <= tol;
            Some((z, b, dev))
        }
        None => None,
    };
    match &a.dump {
        Some(p) if p.as_os_str() == "-" => print!("{}", dump_matrix(&r.matrix)),
        Some(p) => std::fs::write(p, dump_matrix(&r.matrix)).with_context(|| format!("writing {}", p.display()))?,
        None => {}
    }
    if a.json {
        let v = json!({
            "graph": l.name, "minor_vertices": r.graph.n_vertices(), "minor_edges": r.graph.n_edges(),
            "darts": 2 * r.graph.n_edges(), "lambda": r.lambda.to_string(),
            "z": check.map(|c| c.0), "brute": check.map(|c| c.1), "deviation": check.map(|c| c.2), "pass": pass,
        });
        println!("{v}");
    } else if a.dump.as_ref().is_none_or(|p| p.as_os_str() != "-") {
        println!(
            "minor: |V|={} |E|={}, {} darts",
            r.graph.n_vertices(),
            r.graph.n_edges(),
            2 * r.graph.n_edges()
        );
        println!("lambda = {}", r.lambda);
        if let Some((z, b, dev)) = check {
            println!("Z = {z} (brute force {b}, rel dev {dev:.2e})");
            println!("{}", if pass { "PASS" } else { "FAIL" });
        }
    }
    Ok(pass)
}

fn fixtures(a: FixturesArgs) -> anyhow::Result<bool> {
    for name in FIXTURE_NAMES {
        let f = fixture(name).expect("listed fixture exists");
        let surface = match &f.scheme {
            None => "no scheme".to_string(),
            Some(s) => {
                let r = trace_faces(&f.graph, s)?;
                match (r.orientable_genus, r.nonorientable_genus) {
                    (Some(0), _) => "planar".into(),
                    (Some(h), _) => format!("orientable genus {h}"),
                    (_, Some(k)) => format!("{} (nonorientable genus {k})", verify::plural(s.n_crosscaps, "crosscap")),
                    _ => "?".into(),
                }
            }
        };
        println!(
            "{name:<20} |V|={:<3} |E|={:<3} {surface}",
            f.graph.n_vertices(),
            f.graph.n_edges()
        );
        if let Some(dir) = &a.write {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join(format!("{name}.graph")), format_graph(&f.graph))?;
            if let Some(s) = &f.scheme {
                std::fs::write(dir.join(format!("{name}.scheme")), format_scheme(s))?;
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compute(a) => compute(a),
        Command::Verify(a) => run_verify(a),
        Command::Obstruction(a) => {
            tolerance().and_then(|tol| obstruction(obstruction_kind(&a.which)?, a.trials, a.seed, tol, a.json))
        }
        Command::Dartgraph(a) => dartgraph(a),
        Command::Reduce(a) => reduce(a),
        Command::Fixtures(a) => fixtures(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<pfi::Error>() {
                Some(pfi::Error::MissingScheme) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
