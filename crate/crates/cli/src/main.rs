//! divsum: exact analysis of divergent series and cohomological equations.
//!
//! Four subcommands mirror the library: `analyze` (quasiexponential
//! structure of a series), `sum` (one summation method or a cross-check of
//! all applicable ones), `ce` (cohomological equation verdicts), and
//! `orbital` (evidence reports for orbital series). All output is JSON on
//! stdout, deterministic for fixed flags and seed; `orbital --out` also
//! writes a CSV. Exit codes: 0 success, 2 schema error, 3 domain error,
//! 4 I/O error.

mod render;
mod spec_io;

use std::io::Write as _;
use std::path::PathBuf;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use divsum_core as core;
use divsum_core::{
    CeReason, CeVerdict, Error as CoreError, FiniteVerdict, OrbitalReportOptions,
    OrbitalSeriesSpec, OrbitalVerdict, QuasiExpSeries, SampledSeries, Scalar, SumValue,
};

use render::{f64_str, norm_row_value, poly_value, scalar_value, sum_value, trig_value};
use spec_io::{load, LoadError, ParsedSpec};

const DEFAULT_SEED: u64 = 17;

#[derive(Parser)]
#[command(
    name = "divsum",
    version,
    about = "Exact summation of divergent series and cohomological equation verdicts"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum MethodArg {
    Standard,
    Cesaro1,
    Euler,
    Epsilon1,
    Periodic,
}

#[derive(Subcommand)]
enum Cmd {
    /// Quasiexponential analysis: minimal polynomial, spectrum,
    /// summability, shift-axiom value, generating function, radius.
    Analyze {
        /// Spec file path, or "-" for stdin.
        spec: String,
        /// Cap on the recurrence order searched for sampled input.
        #[arg(long, default_value_t = 16)]
        deg_max: usize,
    },
    /// Sum a series by one method (or all applicable with --crosscheck).
    Sum {
        /// Spec file path, or "-" for stdin.
        spec: String,
        #[arg(long, value_enum)]
        method: MethodArg,
        /// Exact period for --method periodic.
        #[arg(long)]
        period: Option<usize>,
        /// Averaging window for cesaro1 and standard estimates.
        #[arg(long, default_value_t = 8192)]
        window: usize,
        /// Settledness tolerance; defaults to 1e-9 (standard) or 1e-2 (cesaro1).
        #[arg(long)]
        tol: Option<f64>,
        /// Run every applicable method and require agreement.
        #[arg(long)]
        crosscheck: bool,
        /// Cap on the recurrence order searched for sampled input.
        #[arg(long, default_value_t = 16)]
        deg_max: usize,
    },
    /// Cohomological equation: solve for psi or report the verdict.
    #[command(group(ArgGroup::new("mode").required(true).args(["solve", "verdict"])))]
    Ce {
        /// Spec file path ("trigpoly" or "findyn"), or "-" for stdin.
        spec: String,
        /// Construct the solution when one exists.
        #[arg(long)]
        solve: bool,
        /// Full verdict including the single-rung ratio condition.
        #[arg(long)]
        verdict: bool,
    },
    /// Orbital series evidence: verdict, lacunarity, exact L2 growth,
    /// level-set estimates, Birkhoff probes.
    #[command(after_help = "CSV columns (with --out): n, exact_norm, \
numeric_norm, measure_estimate. exact_norm is the square root of the exact \
Parseval norm; measure_estimate is the level-set fraction at the --gamma \
threshold on the 2^level-grid-pow grid.")]
    Orbital {
        /// Spec file path ("trigpoly"), or "-" for stdin.
        spec: String,
        /// Largest partial-sum index; checkpoints are powers of two up to it.
        #[arg(long, default_value_t = 64)]
        n_max: usize,
        /// Level-set threshold factor; defaults to half the L2 norm of theta.
        #[arg(long)]
        gamma: Option<f64>,
        /// Seed for Birkhoff probe points (DIVSUM_SEED also accepted).
        #[arg(long)]
        seed: Option<u64>,
        /// Write the per-n CSV table here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// log2 of the quadrature grid.
        #[arg(long, default_value_t = 14)]
        grid_pow: u32,
        /// log2 of the level-set grid.
        #[arg(long, default_value_t = 16)]
        level_grid_pow: u32,
        /// Number of random Birkhoff probe points.
        #[arg(long, default_value_t = 5)]
        probes: usize,
        /// Orbit length per Birkhoff probe.
        #[arg(long, default_value_t = 100_000)]
        birkhoff_steps: usize,
    },
}

/// A failed command: exit code plus the JSON payload to print.
struct Failure {
    code: i32,
    payload: Value,
}

fn schema_failure(msg: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        payload: json!({"error": {"kind": "schema", "message": msg.into()}}),
    }
}

fn io_failure(msg: impl Into<String>) -> Failure {
    Failure {
        code: 4,
        payload: json!({"error": {"kind": "io", "message": msg.into()}}),
    }
}

fn domain_failure(e: &CoreError) -> Failure {
    Failure {
        code: 3,
        payload: json!({"error": {"kind": error_kind(e), "message": e.to_string()}}),
    }
}

fn error_kind(e: &CoreError) -> &'static str {
    match e {
        CoreError::WindowTooShort { .. } => "window_too_short",
        CoreError::NotConvergent { .. } => "not_convergent",
        CoreError::NoConvergenceCertificate { .. } => "no_convergence_certificate",
        CoreError::RootFindingDidNotConverge { .. } => "root_finding_did_not_converge",
        CoreError::ZeroPolynomial => "zero_polynomial",
        CoreError::ConstantPolynomial => "constant_polynomial",
        CoreError::ZeroDenominator => "zero_denominator",
        CoreError::DenominatorVanishesAtZero => "denominator_vanishes_at_zero",
        CoreError::EvalAtPole => "eval_at_pole",
        CoreError::NotExact { .. } => "not_exact",
        CoreError::NotRecurrent { .. } => "not_recurrent",
        CoreError::AnnihilatorMismatch => "annihilator_mismatch",
        CoreError::DegreeCapExceeded { .. } => "degree_cap_exceeded",
        CoreError::AmbiguousSpectrum { .. } => "ambiguous_spectrum",
        CoreError::NotSummable => "one_in_spectrum",
        CoreError::PoleAtOne => "one_in_spectrum",
        CoreError::NotC1Summable { .. } => "not_c1_summable",
        CoreError::NotPeriodic { .. } => "not_periodic",
        CoreError::NonzeroPeriodSum { .. } => "nonzero_period_sum",
        CoreError::NotInQ1 => "not_in_q1",
        CoreError::RegularizationNotNeeded => "regularization_not_needed",
        CoreError::MeanNonzero { .. } => "mean_nonzero",
        CoreError::ZeroInput => "zero_input",
        CoreError::InvalidSystem { .. } => "invalid_system",
        CoreError::KappaHypothesis { .. } => "kappa_hypothesis",
        CoreError::NotASolution => "not_a_solution",
        CoreError::SingularSystem { .. } => "singular_system",
        CoreError::InvalidScalar { .. } => "invalid_scalar",
    }
}

fn load_spec(path: &str) -> Result<ParsedSpec, Failure> {
    load(path).map_err(|e| match e {
        LoadError::Io(msg) => io_failure(msg),
        LoadError::Schema(msg) => schema_failure(msg),
    })
}

/// Any spec that denotes a quasiexponential series: direct, or detected
/// from samples.
fn to_quasiexp(spec: &ParsedSpec, deg_max: usize) -> Result<QuasiExpSeries, Failure> {
    match spec {
        ParsedSpec::Quasi(q) => Ok(q.clone()),
        ParsedSpec::Samples(w) => {
            let phi = core::detect_recurrence(w, deg_max).map_err(|e| domain_failure(&e))?;
            core::decompose(&phi, w).map_err(|e| domain_failure(&e))
        }
        _ => Err(schema_failure(
            "this command expects a samples or quasiexp spec",
        )),
    }
}

fn cmd_analyze(spec_path: &str, deg_max: usize) -> Result<Value, Failure> {
    let spec = load_spec(spec_path)?;
    // For sampled input the detected annihilator stays exact even when the
    // mode decomposition has to pass through float roots, so prefer it.
    let (x, min_poly) = match &spec {
        ParsedSpec::Quasi(q) => (q.clone(), q.min_poly()),
        ParsedSpec::Samples(w) => {
            let phi = core::detect_recurrence(w, deg_max).map_err(|e| domain_failure(&e))?;
            let x = core::decompose(&phi, w).map_err(|e| domain_failure(&e))?;
            (x, phi)
        }
        _ => return Err(schema_failure("analyze expects a samples or quasiexp spec")),
    };
    let mut out = serde_json::Map::new();
    out.insert("min_poly".into(), poly_value(&min_poly, "λ"));
    let sp = x.spectrum();
    out.insert(
        "spectrum".into(),
        Value::Array(
            sp.points
                .iter()
                .map(|(l, m)| json!({"lambda": scalar_value(l), "multiplicity": m}))
                .collect(),
        ),
    );
    match x.is_summable() {
        Ok(b) => {
            out.insert("summable".into(), Value::Bool(b));
        }
        Err(e) => {
            out.insert("summable_reason".into(), Value::String(e.to_string()));
        }
    }
    match core::epsilon1(&x) {
        Ok(v) => {
            out.insert("epsilon1".into(), sum_value(&v));
        }
        Err(e) => {
            out.insert("epsilon1_reason".into(), Value::String(e.to_string()));
        }
    }
    match core::generating_function(&x) {
        Ok(g) => {
            out.insert(
                "generating_fn".into(),
                json!({
                    "display": format!(
                        "({})/({})",
                        g.f.num().display("t"),
                        g.f.den().display("t")
                    ),
                    "num": poly_value(g.f.num(), "t"),
                    "den": poly_value(g.f.den(), "t"),
                    "poles": g.poles
                        .iter()
                        .map(|(loc, ord)| json!({
                            "location": scalar_value(loc),
                            "order": ord,
                        }))
                        .collect::<Vec<_>>(),
                }),
            );
        }
        Err(e) => {
            out.insert("generating_fn_reason".into(), Value::String(e.to_string()));
        }
    }
    let r = core::radius(&x);
    out.insert(
        "radius".into(),
        Value::String(if r.is_infinite() {
            "inf".into()
        } else {
            f64_str(r)
        }),
    );
    Ok(Value::Object(out))
}

struct SumFlags {
    period: Option<usize>,
    window: usize,
    tol: Option<f64>,
    deg_max: usize,
}

fn run_method(method: MethodArg, spec: &ParsedSpec, flags: &SumFlags) -> Result<SumValue, Failure> {
    match method {
        MethodArg::Standard => {
            let w = match spec {
                ParsedSpec::Samples(w) => w.clone(),
                ParsedSpec::Quasi(q) => SampledSeries::new(
                    q.sample_window_f64(flags.window.max(64))
                        .into_iter()
                        .map(Scalar::from_complex64)
                        .collect(),
                ),
                _ => return Err(schema_failure("standard expects samples or quasiexp")),
            };
            w.standard_sum(flags.tol.unwrap_or(1e-9))
                .map_err(|e| domain_failure(&e))
        }
        MethodArg::Cesaro1 => {
            let q = to_quasiexp(spec, flags.deg_max)?;
            core::cesaro1(&q, flags.window, flags.tol.unwrap_or(1e-2))
                .map_err(|e| domain_failure(&e))
        }
        MethodArg::Euler => {
            let q = to_quasiexp(spec, flags.deg_max)?;
            core::euler_sum(&q).map_err(|e| domain_failure(&e))
        }
        MethodArg::Epsilon1 => {
            let q = to_quasiexp(spec, flags.deg_max)?;
            core::epsilon1(&q).map_err(|e| domain_failure(&e))
        }
        MethodArg::Periodic => {
            let Some(p) = flags.period else {
                return Err(schema_failure("--method periodic requires --period"));
            };
            let w = match spec {
                ParsedSpec::Samples(w) => w.clone(),
                ParsedSpec::Quasi(q) => q.sample_window(3 * p + 2),
                _ => return Err(schema_failure("periodic expects samples or quasiexp")),
            };
            core::periodic_sum(&w, p).map_err(|e| domain_failure(&e))
        }
    }
}

fn cmd_sum(
    spec_path: &str,
    method: MethodArg,
    flags: SumFlags,
    crosscheck: bool,
) -> Result<Value, Failure> {
    let spec = load_spec(spec_path)?;
    if !crosscheck {
        let v = run_method(method, &spec, &flags)?;
        return Ok(sum_value(&v));
    }
    // Cross-check: run every applicable method, demand agreement. Exact
    // values must coincide exactly; float estimates must sit within 1e-6
    // relative of the exact reference (or of each other, failing one).
    let mut methods = vec![
        MethodArg::Epsilon1,
        MethodArg::Euler,
        MethodArg::Standard,
        MethodArg::Cesaro1,
    ];
    if flags.period.is_some() {
        methods.push(MethodArg::Periodic);
    }
    let mut results: Vec<(&'static str, SumValue)> = Vec::new();
    let mut report = serde_json::Map::new();
    for m in methods {
        let name = match m {
            MethodArg::Standard => "standard",
            MethodArg::Cesaro1 => "cesaro1",
            MethodArg::Euler => "euler",
            MethodArg::Epsilon1 => "epsilon1",
            MethodArg::Periodic => "periodic",
        };
        match run_method(m, &spec, &flags) {
            Ok(v) => {
                report.insert(name.into(), sum_value(&v));
                results.push((name, v));
            }
            Err(f) => {
                report.insert(
                    name.into(),
                    json!({"skipped": f.payload["error"]["message"].clone()}),
                );
            }
        }
    }
    if results.is_empty() {
        return Err(Failure {
            code: 3,
            payload: json!({"error": {
                "kind": "no_applicable_method",
                "message": "every summation method declined this series",
                "methods": Value::Object(report),
            }}),
        });
    }
    let reference = results
        .iter()
        .find(|(_, v)| v.exact)
        .unwrap_or(&results[0])
        .1
        .value
        .clone();
    let refz = reference.to_complex64();
    for (name, v) in &results {
        let ok = if v.exact && reference.is_exact() {
            v.value == reference
        } else {
            (v.value.to_complex64() - refz).norm() <= 1e-6 * (1.0 + refz.norm())
        };
        if !ok {
            return Err(Failure {
                code: 3,
                payload: json!({"error": {
                    "kind": "method_disagreement",
                    "message": format!("{name} disagrees with the reference value"),
                    "methods": Value::Object(report),
                }}),
            });
        }
    }
    report.insert("agree".into(), Value::Bool(true));
    Ok(Value::Object(report))
}

fn ce_reason_value(reason: &CeReason) -> Value {
    match reason {
        CeReason::RatioCondition => json!({"kind": "ratio_condition"}),
        CeReason::OrbitSumNonzero {
            primitive,
            cos_sum,
            sin_sum,
        } => json!({
            "kind": "orbit_sum_nonzero",
            "primitive": primitive,
            "cos_sum": scalar_value(cos_sum),
            "sin_sum": scalar_value(sin_sum),
        }),
    }
}

fn ce_verdict_value(v: &CeVerdict, include_psi: bool) -> Value {
    match v {
        CeVerdict::Coboundary { psi } => {
            let mut obj = serde_json::Map::new();
            obj.insert("verdict".into(), Value::String("coboundary".into()));
            if include_psi {
                obj.insert("psi".into(), trig_value(psi));
            }
            Value::Object(obj)
        }
        CeVerdict::NoMeasurableSolution { reason } => json!({
            "verdict": "no_measurable_solution",
            "reason": ce_reason_value(reason),
        }),
        CeVerdict::Undecided { detail } => json!({
            "verdict": "undecided",
            "detail": detail,
        }),
    }
}

fn cmd_ce(spec_path: &str, solve: bool) -> Result<Value, Failure> {
    let spec = load_spec(spec_path)?;
    match spec {
        ParsedSpec::Trig { theta, q } => {
            let verdict = if solve {
                core::solve_trig_ce(&theta, q)
            } else {
                core::nonmeasurability_verdict(&theta, q)
            }
            .map_err(|e| domain_failure(&e))?;
            Ok(ce_verdict_value(&verdict, solve))
        }
        ParsedSpec::FinDyn(sys) => {
            let verdict = core::solve_finite_ce(&sys).map_err(|e| domain_failure(&e))?;
            Ok(match verdict {
                FiniteVerdict::Solvable { psi } => json!({
                    "verdict": "solvable",
                    "psi": if solve {
                        Value::Array(psi.iter().map(scalar_value).collect())
                    } else {
                        Value::Null
                    },
                }),
                FiniteVerdict::Unsolvable { cycle, sum } => json!({
                    "verdict": "unsolvable",
                    "cycle": cycle,
                    "cycle_sum": scalar_value(&sum),
                }),
            })
        }
        _ => Err(schema_failure("ce expects a trigpoly or findyn spec")),
    }
}

fn orbital_verdict_value(v: &OrbitalVerdict) -> Value {
    match v {
        OrbitalVerdict::NotApplicable { mean } => json!({
            "verdict": "not_applicable",
            "mean": scalar_value(mean),
        }),
        OrbitalVerdict::Coboundary { psi, sigma } => json!({
            "verdict": "coboundary",
            "psi": trig_value(psi),
            "sigma": trig_value(sigma),
        }),
        OrbitalVerdict::NoMeasurableSolution { reason } => json!({
            "verdict": "no_measurable_solution",
            "reason": ce_reason_value(reason),
        }),
        OrbitalVerdict::Undecided { detail } => json!({
            "verdict": "undecided",
            "detail": detail,
        }),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_orbital(
    spec_path: &str,
    n_max: usize,
    gamma: Option<f64>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    grid_pow: u32,
    level_grid_pow: u32,
    probes: usize,
    birkhoff_steps: usize,
) -> Result<Value, Failure> {
    let spec = load_spec(spec_path)?;
    let ParsedSpec::Trig { theta, q } = spec else {
        return Err(schema_failure("orbital expects a trigpoly spec"));
    };
    if n_max == 0 {
        return Err(schema_failure("--n-max must be at least 1"));
    }
    let ospec = OrbitalSeriesSpec::new(theta, q).map_err(|e| domain_failure(&e))?;

    // Checkpoints: powers of two up to n_max, plus n_max itself.
    let mut ns = Vec::new();
    let mut n = 1usize;
    while n < n_max {
        ns.push(n);
        n *= 2;
    }
    ns.push(n_max);

    let seed = seed
        .or_else(|| {
            std::env::var("DIVSUM_SEED")
                .ok()
                .and_then(|s| s.parse().ok())
        })
        .unwrap_or(DEFAULT_SEED);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let birkhoff_probes: Vec<f64> = (0..probes)
        .map(|_| rng.gen::<f64>() * std::f64::consts::TAU)
        .collect();

    let opts = OrbitalReportOptions {
        norm_ns: ns,
        grid_pow,
        level_grid_pow,
        gamma,
        kappa_window: 16,
        birkhoff_probes,
        birkhoff_steps,
    };
    let rep = core::orbital_report(&ospec, &opts).map_err(|e| domain_failure(&e))?;

    if let Some(path) = &out {
        let mut csv = String::from("n,exact_norm,numeric_norm,measure_estimate\n");
        for (row, (n, measure)) in rep.norms.iter().zip(rep.level_sets.iter()) {
            debug_assert_eq!(row.n, *n);
            csv.push_str(&format!(
                "{},{},{},{}\n",
                row.n,
                f64_str(row.exact()),
                f64_str(row.numeric()),
                f64_str(*measure),
            ));
        }
        let mut file = std::fs::File::create(path)
            .map_err(|e| io_failure(format!("creating {}: {e}", path.display())))?;
        file.write_all(csv.as_bytes())
            .map_err(|e| io_failure(format!("writing {}: {e}", path.display())))?;
    }

    let kappa = match &rep.kappa {
        Ok(k) => json!({
            "kappa": f64_str(k.kappa),
            "stable": k.stable,
            "window_n": k.window_n,
        }),
        Err(msg) => json!({"error": msg}),
    };
    Ok(json!({
        "q": rep.q,
        "theta": trig_value(&ospec.theta),
        "mean": scalar_value(&rep.theta_mean),
        "verdict": orbital_verdict_value(&rep.verdict),
        "kappa": kappa,
        "gamma": f64_str(rep.gamma),
        "seed": seed,
        "norms": rep.norms.iter().map(norm_row_value).collect::<Vec<_>>(),
        "level_sets": rep.level_sets
            .iter()
            .map(|(n, m)| json!({"n": n, "measure": f64_str(*m)}))
            .collect::<Vec<_>>(),
        "birkhoff": rep.birkhoff
            .iter()
            .map(|b| json!({
                "t0": f64_str(b.t0),
                "steps": b.steps,
                "average": f64_str(b.average),
            }))
            .collect::<Vec<_>>(),
        "notes": rep.notes,
    }))
}

fn run(cli: Cli) -> Result<Value, Failure> {
    match cli.cmd {
        Cmd::Analyze { spec, deg_max } => cmd_analyze(&spec, deg_max),
        Cmd::Sum {
            spec,
            method,
            period,
            window,
            tol,
            crosscheck,
            deg_max,
        } => cmd_sum(
            &spec,
            method,
            SumFlags {
                period,
                window,
                tol,
                deg_max,
            },
            crosscheck,
        ),
        Cmd::Ce {
            spec,
            solve,
            verdict: _,
        } => cmd_ce(&spec, solve),
        Cmd::Orbital {
            spec,
            n_max,
            gamma,
            seed,
            out,
            grid_pow,
            level_grid_pow,
            probes,
            birkhoff_steps,
        } => cmd_orbital(
            &spec,
            n_max,
            gamma,
            seed,
            out,
            grid_pow,
            level_grid_pow,
            probes,
            birkhoff_steps,
        ),
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(v) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&v).expect("serializable")
            );
        }
        Err(f) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&f.payload).expect("serializable")
            );
            std::process::exit(f.code);
        }
    }
}
