//! `ocgeo`: batch front-end for the verification suites, the normalising
//! constant, curvature grids and the Kleinian pipeline.
//!
//! Exit codes: 0 pass, 1 numerical failure, 2 usage error.

// `!(x > 0.0)` is deliberate: it rejects NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::anyhow;
use clap::{Parser, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use oc_geometry::fields::{cylinder_curvature, inverse_norm, sample_shell, BumpField};
use oc_geometry::green::{compute_cq, cq_monte_carlo, QuadratureSpec};
use oc_geometry::heisenberg::gauge_norm;
use oc_geometry::kleinian::{
    estimate_delta_from_orbit, nayatani_curvature, orbit, patterson_sullivan_from_orbit, phi_gamma,
    sample_regular_points, MeasureExport,
};
use oc_geometry::octonion::{MulTable, MUL};
use oc_geometry::verify::verify_algebra;
use oc_geometry::yamabe::{scalar_curv_connection, scalar_curv_exp, scalar_curv_yamabe, CURVATURE_CONSTANT, HALF_WEIGHT};
use oc_geometry::{FdSpec, HPoint, StepRule};

use config::GroupConfig;
use output::{csv_row, rel_delta, Sink};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Command {
    VerifyAlgebra,
    ComputeCq,
    Curvature,
    Schottky,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Field {
    /// Random smooth bump `1 + a exp(-c |ξ - ξ0|^4)` drawn from the seed.
    Bump,
    /// `f = 1/|ξ|`, the cylinder metric.
    Cylinder,
    Constant,
}

#[derive(Debug, Parser)]
#[command(name = "ocgeo", version, about = "Numerical checks of octonionic contact geometry")]
struct Args {
    #[arg(long, value_enum)]
    cmd: Command,
    /// Group configuration JSON (schottky).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory; without it a JSON summary goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// First-derivative step `c` with steps `c (1 + |p|)`; second
    /// derivatives use `10 c`.
    #[arg(long)]
    fd_step: Option<f64>,
    /// Gauss–Legendre nodes per axis (compute-cq).
    #[arg(long, default_value_t = 64)]
    nodes: usize,
    /// Overrides the word length of the group configuration.
    #[arg(long)]
    word_length: Option<usize>,
    /// Acceptance tolerance; the default depends on the command.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Number of sample points (curvature, schottky).
    #[arg(long)]
    points: Option<usize>,
    #[arg(long, value_enum, default_value_t = Field::Bump)]
    field: Field,
    /// Monte Carlo samples for the cross-check of the constant.
    #[arg(long, default_value_t = 400_000)]
    mc_samples: usize,
    /// Test mode: reverse the sign of one multiplication triple.
    #[arg(long, hide = true)]
    flip_triple: Option<usize>,
}

/// Either a bad invocation or a numerical failure.
#[derive(Debug)]
enum Failure {
    Usage(anyhow::Error),
    Numerical(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Numerical(_) => 1,
        }
    }
}

fn numerical(stage: &'static str) -> impl Fn(oc_geometry::GeometryError) -> Failure {
    move |e| Failure::Numerical(anyhow!("{stage}: {e}"))
}

fn usage(e: anyhow::Error) -> Failure {
    Failure::Usage(e)
}

type Outcome = Result<bool, Failure>;

fn fd_spec(args: &Args, default: FdSpec) -> Result<FdSpec, Failure> {
    match args.fd_step {
        None => Ok(default),
        Some(c) if c > 0.0 && c.is_finite() => {
            Ok(FdSpec { first: StepRule::Scaled(c), second: StepRule::Scaled(10.0 * c), ..default })
        }
        Some(c) => Err(usage(anyhow!("--fd-step must be positive, got {c}"))),
    }
}

fn tolerance(args: &Args, default: f64) -> Result<f64, Failure> {
    match args.tolerance {
        None => Ok(default),
        Some(t) if t > 0.0 && t.is_finite() => Ok(t),
        Some(t) => Err(usage(anyhow!("--tolerance must be positive, got {t}"))),
    }
}

fn cmd_verify_algebra(args: &Args, sink: &Sink) -> Outcome {
    let table = match args.flip_triple {
        Some(k) if k < 7 => MulTable::with_flipped_triple(k),
        Some(k) => return Err(usage(anyhow!("--flip-triple takes 0..7, got {k}"))),
        None => MUL.clone(),
    };
    let report = verify_algebra(&table, 1000, args.seed);
    for name in report.failed() {
        eprintln!("identity failed: {name}");
    }
    let doc = json!({
        "command": "verify-algebra",
        "seed": args.seed,
        "flipped_triple": args.flip_triple,
        "passed": report.passed,
        "max_residual": report.max_residual(),
        "checks": report.checks,
    });
    sink.json("verify_algebra.json", &doc).map_err(usage)?;
    Ok(report.passed)
}

fn cmd_compute_cq(args: &Args, sink: &Sink) -> Outcome {
    let q = QuadratureSpec {
        nodes: args.nodes,
        mc_samples: args.mc_samples,
        seed: args.seed,
        tolerance: tolerance(args, 1e-8)?,
    };
    q.validate().map_err(|e| usage(e.into()))?;
    let mut history = Vec::new();
    let mut n = (q.nodes / 2).max(16);
    while n <= 2 * q.nodes {
        let i = oc_geometry::green::cq_radial_integral(n).map_err(numerical("quadrature"))?;
        history.push(json!({ "nodes": n, "cq": 1.0 / (oc_geometry::green::CQ_PREFACTOR * i) }));
        n *= 2;
    }
    let report = compute_cq(&q);
    let mc = cq_monte_carlo(q.mc_samples, q.seed).map_err(numerical("monte carlo"))?;
    let (cq, relative_change, converged) = match report {
        Ok(r) => (r.cq, r.relative_change, true),
        Err(oc_geometry::GeometryError::Convergence { relative_change, .. }) => (f64::NAN, relative_change, false),
        Err(e) => return Err(numerical("quadrature")(e)),
    };
    let sigmas = (mc.cq - cq).abs() / mc.cq_stderr;
    let passed = converged && sigmas <= 3.0;
    let doc = json!({
        "command": "compute-cq",
        "cq": cq,
        "nodes": q.nodes,
        "relative_change": relative_change,
        "tolerance": q.tolerance,
        "history": history,
        "monte_carlo": {
            "cq": mc.cq,
            "stderr": mc.cq_stderr,
            "samples": mc.samples,
            "seed": q.seed,
            "sigmas": sigmas,
        },
        "passed": passed,
    });
    sink.json("compute_cq.json", &doc).map_err(usage)?;
    if !converged {
        eprintln!("quadrature did not converge: relative change {relative_change:e} > {:e}", q.tolerance);
    }
    Ok(passed)
}

type Scalar = Box<dyn Fn(&HPoint) -> f64 + Sync>;

fn cmd_curvature(args: &Args, sink: &Sink) -> Outcome {
    let fd = fd_spec(args, FdSpec::precise())?;
    let tol = tolerance(args, 1e-3)?;
    let n = args.points.unwrap_or(20);
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let bump = BumpField::random(&mut rng);
    let points: Vec<HPoint> = (0..n)
        .map(|_| match args.field {
            Field::Bump => bump.sample_point(&mut rng),
            _ => sample_shell(&mut rng, 0.5, 2.0),
        })
        .collect();

    let mut header: Vec<String> = (0..15).map(|i| format!("xi{i}")).collect();
    header.extend(
        ["s_exp", "s_yamabe", "s_connection", "s_reference", "delta_exp_yamabe", "delta_exp_connection", "flagged"]
            .map(String::from),
    );
    let mut rows = vec![header.join(",")];
    let mut records = Vec::new();
    let mut flagged = 0;
    for p in &points {
        let (h, phi, f): (Scalar, Scalar, Scalar) = match args.field {
                Field::Bump => (
                    Box::new(move |q| bump.log_factor(q)),
                    Box::new(move |q| bump.yamabe_factor(q)),
                    Box::new(move |q| bump.factor(q)),
                ),
                Field::Cylinder => (
                    Box::new(|q| -gauge_norm(q).ln()),
                    Box::new(|q| gauge_norm(q).powf(-HALF_WEIGHT)),
                    Box::new(inverse_norm),
                ),
                Field::Constant => (Box::new(|_| 0.0), Box::new(|_| 1.0), Box::new(|_| 1.0)),
            };
        let se = scalar_curv_exp(&|q: &HPoint| h(q), p, &fd).map_err(numerical("exponential route"))?;
        let sy = scalar_curv_yamabe(&|q: &HPoint| phi(q), p, &fd).map_err(numerical("yamabe route"))?;
        let sc = scalar_curv_connection(&|q: &HPoint| f(q), p, &fd).map_err(numerical("connection route"))?;
        let reference = match args.field {
            Field::Cylinder => Some(cylinder_curvature(p)),
            Field::Constant => Some(0.0),
            Field::Bump => None,
        };
        let (dy, dc) = (rel_delta(se, sy), rel_delta(se, sc));
        let off_reference = reference.is_some_and(|r| rel_delta(se, r).max(rel_delta(sy, r)).max(rel_delta(sc, r)) > tol);
        let bad = dy > tol || dc > tol || off_reference;
        flagged += usize::from(bad);
        let mut vals: Vec<f64> = p.coords().to_vec();
        vals.extend([se, sy, sc, reference.unwrap_or(f64::NAN), dy, dc]);
        rows.push(format!("{},{}", csv_row(&vals), u8::from(bad)));
        records.push(json!({
            "xi": p.coords(), "s_exp": se, "s_yamabe": sy, "s_connection": sc,
            "s_reference": reference, "delta_exp_yamabe": dy, "delta_exp_connection": dc, "flagged": bad,
        }));
    }
    sink.text("curvature.csv", &rows.join("\n")).map_err(usage)?;
    let doc = json!({
        "command": "curvature",
        "field": format!("{:?}", args.field).to_lowercase(),
        "bump": matches!(args.field, Field::Bump).then_some(bump),
        "seed": args.seed,
        "fd": fd,
        "tolerance": tol,
        "points": n,
        "flagged": flagged,
        "passed": flagged == 0,
        "rows": records,
    });
    sink.json("curvature.json", &doc).map_err(usage)?;
    Ok(flagged == 0)
}

fn cmd_schottky(args: &Args, sink: &Sink) -> Outcome {
    let path = args.config.as_deref().ok_or_else(|| usage(anyhow!("schottky needs --config")))?;
    let cfg = GroupConfig::load(path).map_err(usage)?;
    let group = cfg.group().map_err(usage)?;
    let len = args.word_length.unwrap_or(cfg.word_length);
    if len == 0 {
        return Err(usage(anyhow!("word length must be at least 1")));
    }
    let fd = fd_spec(args, FdSpec::singular())?;
    let tol = tolerance(args, 1e-6)?;
    let n = args.points.unwrap_or(10);

    let cq = compute_cq(&QuadratureSpec::default()).map_err(numerical("normalising constant"))?.cq;
    let points = orbit(&group, len).map_err(numerical("orbit"))?;
    let est = estimate_delta_from_orbit(&points, len).map_err(numerical("exponent estimate"))?;
    let s = est.value + cfg.s_margin;
    let ps = patterson_sullivan_from_orbit(&points, s, est.value, len).map_err(numerical("patterson-sullivan"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let samples = sample_regular_points(&ps.measure, n, (0.3, 3.0), 0.1, &mut rng).map_err(numerical("sampling"))?;

    // Signs are read against the natural curvature scale at the point.
    let expected = (10.0 - est.value).signum();
    let mut counts = [0usize; 3];
    let mut rows = vec![format!("{},phi,s,sign", (0..15).map(|i| format!("xi{i}")).collect::<Vec<_>>().join(","))];
    let mut contradictions = 0;
    for p in &samples {
        let phi = phi_gamma(p, &ps.measure, cq).map_err(numerical("nayatani factor"))?;
        let sc = nayatani_curvature(p, &ps.measure, cq, &fd).map_err(numerical("curvature"))?;
        let scale = CURVATURE_CONSTANT * phi.powf(-0.2) / ps.measure.distance_to_atoms(p).powi(2);
        let sign = if sc.abs() <= tol * scale { 0.0 } else { sc.signum() };
        counts[(sign + 1.0) as usize] += 1;
        contradictions += usize::from(sign == -expected);
        let mut vals: Vec<f64> = p.coords().to_vec();
        vals.extend([phi, sc]);
        rows.push(format!("{},{}", csv_row(&vals), sign as i8));
    }
    let passed = contradictions == 0;
    sink.json("measure.json", &MeasureExport::from(&ps.measure)).map_err(usage)?;
    sink.text("schottky.csv", &rows.join("\n")).map_err(usage)?;
    let doc = json!({
        "command": "schottky",
        "config": path.display().to_string(),
        "seed": args.seed,
        "word_length": len,
        "orbit_points": points.len(),
        "delta_hat": est.value,
        "delta": est,
        "s": s,
        "atoms": ps.measure.atoms.len(),
        "dropped_atoms": ps.dropped,
        "fd": fd,
        "quadrature_nodes": QuadratureSpec::default().nodes,
        "cq": cq,
        "sign_summary": {
            "expected": expected,
            "negative": counts[0],
            "zero": counts[1],
            "positive": counts[2],
            "contradictions": contradictions,
        },
        "passed": passed,
    });
    sink.json("schottky.json", &doc).map_err(usage)?;
    Ok(passed)
}

fn run(args: &Args) -> Outcome {
    let sink = Sink::new(args.out.as_deref()).map_err(usage)?;
    match args.cmd {
        Command::VerifyAlgebra => cmd_verify_algebra(args, &sink),
        Command::ComputeCq => cmd_compute_cq(args, &sink),
        Command::Curvature => cmd_curvature(args, &sink),
        Command::Schottky => cmd_schottky(args, &sink),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            match &f {
                Failure::Usage(e) => eprintln!("usage error: {e:#}"),
                Failure::Numerical(e) => eprintln!("numerical failure: {e:#}"),
            }
            ExitCode::from(f.code())
        }
    }
}
