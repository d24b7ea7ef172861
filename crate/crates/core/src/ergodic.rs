//! Orbital series for the map t -> qt on the circle: partial sums
//! theta_n(t) = sum over k < n of theta(q^k t), their exact L2 norms,
//! lacunarity, level sets, and the summation induced by a coboundary
//! solution. Statements here are evidence for almost-everywhere claims,
//! not proofs; everything decidable is computed exactly.
//!
//! Grid evaluation never iterates the circle map in floating point: at the
//! dyadic points t_j = 2 pi j / G the phase of frequency nu after k steps
//! is the integer (nu q^k mod G) j mod G, so samples of theta_n on the grid
//! are exact up to one table lookup. All accumulations run in a fixed index
//! order, so results do not depend on any work partitioning.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::coboundary::{nonmeasurability_verdict, CeVerdict};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::trig::TrigPoly;

/// The observable theta and expansion factor q >= 2 of the circle map.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitalSeriesSpec {
    pub theta: TrigPoly,
    pub q: u64,
}

impl OrbitalSeriesSpec {
    pub fn new(theta: TrigPoly, q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidSystem {
                detail: format!("q must be >= 2, got {q}"),
            });
        }
        Ok(OrbitalSeriesSpec { theta, q })
    }
}

/// One step of the circle map in f64, reduced to [0, 2 pi).
pub fn orbit_step(q: u64, t: f64) -> f64 {
    (q as f64 * t).rem_euclid(TAU)
}

/// The orbit point q^n t (mod 2 pi), iterated stepwise in f64.
pub fn orbit_point(q: u64, t: f64, n: usize) -> f64 {
    let mut t = t.rem_euclid(TAU);
    for _ in 0..n {
        t = orbit_step(q, t);
    }
    t
}

/// theta_n(t) along the f64 orbit. Subject to the usual exponential loss
/// of orbit precision; grid quantities below avoid this entirely.
pub fn orbital_partial_sum(spec: &OrbitalSeriesSpec, t: f64, n: usize) -> f64 {
    let mut t = t.rem_euclid(TAU);
    let mut acc = 0.0;
    for _ in 0..n {
        acc += spec.theta.eval(t);
        t = orbit_step(spec.q, t);
    }
    acc
}

/// Time average of phi over m orbit steps from t0.
pub fn birkhoff_average(phi: &TrigPoly, q: u64, t0: f64, m: usize) -> f64 {
    let mut t = t0.rem_euclid(TAU);
    let mut acc = 0.0;
    for _ in 0..m {
        acc += phi.eval(t);
        t = orbit_step(q, t);
    }
    acc / m as f64
}

/// The expanded coefficient spectrum of theta_n: frequency nu q^k carries
/// the rung-k coefficients, with collisions accumulated; the constant term
/// grows linearly.
fn expanded_spectrum(
    spec: &OrbitalSeriesSpec,
    n: usize,
) -> (Scalar, BTreeMap<BigUint, (Scalar, Scalar)>) {
    let mut map: BTreeMap<BigUint, (Scalar, Scalar)> = BTreeMap::new();
    let q = BigUint::from(spec.q);
    let mut qk = BigUint::from(1u32);
    for _ in 0..n {
        for (freq, (a, b)) in spec.theta.terms() {
            let key = BigUint::from(*freq) * &qk;
            let e = map
                .entry(key)
                .or_insert_with(|| (Scalar::zero(), Scalar::zero()));
            e.0 = &e.0 + a;
            e.1 = &e.1 + b;
        }
        qk *= &q;
    }
    map.retain(|_, (a, b)| !(a.is_zero() && b.is_zero()));
    let c0 = &Scalar::from_int(n as i64) * spec.theta.mean();
    (c0, map)
}

/// Exact and quadrature L2 data for theta_n.
#[derive(Debug, Clone, PartialEq)]
pub struct L2Norm {
    pub n: usize,
    /// The norm squared from the expanded spectrum: c0^2 + sum (a^2+b^2)/2.
    /// Exact whenever theta is.
    pub exact_sqr: Scalar,
    /// Mean of |theta_n|^2 over the dyadic grid (the trapezoid rule on a
    /// periodic integrand).
    pub numeric_sqr: f64,
}

impl L2Norm {
    pub fn numeric(&self) -> f64 {
        self.numeric_sqr.sqrt()
    }

    pub fn exact(&self) -> f64 {
        self.exact_sqr.to_f64_re().sqrt()
    }
}

/// Walks theta_n over the grid of G = 2^grid_pow points for increasing n,
/// invoking `visit` at each checkpoint with the current sample row.
/// Checkpoints must be sorted ascending and nonzero.
fn grid_sweep(
    spec: &OrbitalSeriesSpec,
    grid_pow: u32,
    checkpoints: &[usize],
    mut visit: impl FnMut(usize, &[f64]),
) {
    let g = 1usize << grid_pow;
    let gm = g as u128;
    let mut cos_table = Vec::with_capacity(g);
    let mut sin_table = Vec::with_capacity(g);
    for m in 0..g {
        let angle = TAU * m as f64 / g as f64;
        cos_table.push(angle.cos());
        sin_table.push(angle.sin());
    }
    let c0 = spec.theta.mean().to_f64_re();
    let mut vals = vec![0.0f64; g];
    let mut qk: u128 = 1;
    let q = spec.q as u128;
    let mut at = 0usize;
    let last = *checkpoints.last().unwrap_or(&0);
    for k in 0..last {
        for v in vals.iter_mut() {
            *v += c0;
        }
        for (freq, (a, b)) in spec.theta.terms() {
            let r = ((*freq as u128 % gm) * (qk % gm) % gm) as usize;
            let af = a.to_f64_re();
            let bf = b.to_f64_re();
            let mut idx = 0usize;
            if bf == 0.0 {
                for v in vals.iter_mut() {
                    *v += af * cos_table[idx];
                    idx += r;
                    if idx >= g {
                        idx -= g;
                    }
                }
            } else {
                for v in vals.iter_mut() {
                    *v += af * cos_table[idx] + bf * sin_table[idx];
                    idx += r;
                    if idx >= g {
                        idx -= g;
                    }
                }
            }
        }
        qk = qk % gm * q;
        while at < checkpoints.len() && checkpoints[at] == k + 1 {
            visit(k + 1, &vals);
            at += 1;
        }
    }
}

/// L2 norm of theta_n: exact Parseval value and the grid quadrature.
pub fn l2_norm_orbital(spec: &OrbitalSeriesSpec, n: usize, grid_pow: u32) -> Result<L2Norm> {
    let mut rows = l2_norm_rows(spec, &[n], grid_pow)?;
    Ok(rows.pop().expect("one checkpoint requested"))
}

/// Batched norms at several checkpoints in one grid sweep. `ns` must be
/// strictly increasing and positive.
pub fn l2_norm_rows(spec: &OrbitalSeriesSpec, ns: &[usize], grid_pow: u32) -> Result<Vec<L2Norm>> {
    validate_checkpoints(ns)?;
    let mut rows: Vec<L2Norm> = Vec::with_capacity(ns.len());
    grid_sweep(spec, grid_pow, ns, |n, vals| {
        let mut acc = 0.0;
        for v in vals {
            acc += v * v;
        }
        let numeric_sqr = acc / vals.len() as f64;
        let (c0, map) = expanded_spectrum(spec, n);
        let half = Scalar::from_rational(1, 2);
        let mut exact = &c0 * &c0;
        for (a, b) in map.values() {
            exact = &exact + &(&(&(a * a) + &(b * b)) * &half);
        }
        rows.push(L2Norm {
            n,
            exact_sqr: exact,
            numeric_sqr,
        });
    });
    Ok(rows)
}

fn validate_checkpoints(ns: &[usize]) -> Result<()> {
    if ns.is_empty() || ns[0] == 0 || ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSystem {
            detail: "checkpoints must be strictly increasing and positive".into(),
        });
    }
    Ok(())
}

/// Fraction of grid points with |theta_n(t)| >= gamma sqrt(n). A grid
/// estimate: theta_n oscillates on scales far below any fixed grid for
/// large n, so this is sampling evidence rather than a certified measure.
pub fn level_set_measure(
    spec: &OrbitalSeriesSpec,
    n: usize,
    gamma: f64,
    grid_pow: u32,
) -> Result<f64> {
    let mut rows = level_set_rows(spec, &[n], gamma, grid_pow)?;
    Ok(rows.pop().expect("one checkpoint requested").1)
}

/// Batched level-set estimates sharing one sweep; returns (n, measure).
pub fn level_set_rows(
    spec: &OrbitalSeriesSpec,
    ns: &[usize],
    gamma: f64,
    grid_pow: u32,
) -> Result<Vec<(usize, f64)>> {
    validate_checkpoints(ns)?;
    let mut rows = Vec::with_capacity(ns.len());
    grid_sweep(spec, grid_pow, ns, |n, vals| {
        let bar = gamma * (n as f64).sqrt();
        let hits = vals.iter().filter(|v| v.abs() >= bar).count();
        rows.push((n, hits as f64 / vals.len() as f64));
    });
    Ok(rows)
}

/// Lacunarity of the expanded frequency set at a window and at its double.
#[derive(Debug, Clone, PartialEq)]
pub struct KappaReport {
    /// Infimum of consecutive frequency ratios over the doubled window,
    /// clipped at 2.
    pub kappa: f64,
    /// The ratio infimum already settled at the original window.
    pub stable: bool,
    pub window_n: usize,
}

fn kappa_at(spec: &OrbitalSeriesSpec, n: usize) -> Result<f64> {
    let (_, map) = expanded_spectrum(spec, n);
    let freqs: Vec<BigUint> = map.keys().cloned().collect();
    let expected = spec.theta.terms().len() * n;
    if freqs.len() != expected {
        return Err(Error::KappaHypothesis {
            detail: format!(
                "expanded frequencies collide: {} distinct of {} expected",
                freqs.len(),
                expected
            ),
        });
    }
    let mut inf = 2.0f64;
    for w in freqs.windows(2) {
        let lo = w[0].to_f64().unwrap_or(f64::INFINITY);
        let hi = w[1].to_f64().unwrap_or(f64::INFINITY);
        let ratio = hi / lo;
        if ratio < inf {
            inf = ratio;
        }
    }
    Ok(inf.min(2.0))
}

/// kappa = inf of consecutive expanded-frequency ratios, clipped at 2,
/// rechecked at a doubled window. Requires all expanded frequencies
/// distinct and a nonzero oscillating part.
pub fn lacunarity_kappa(spec: &OrbitalSeriesSpec, window_n: usize) -> Result<KappaReport> {
    if spec.theta.terms().is_empty() {
        return Err(Error::ZeroInput);
    }
    let w = window_n.max(2);
    let k1 = kappa_at(spec, w)?;
    let k2 = kappa_at(spec, 2 * w)?;
    Ok(KappaReport {
        kappa: k2,
        stable: (k1 - k2).abs() <= 1e-12,
        window_n: w,
    })
}

/// The summation a coboundary solution induces on orbital series:
/// sigma(X(t)) = psi(t) - mean(psi).
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitalSummation {
    /// Zero-mean value function assigning sigma(X(t)) = sigma(t).
    pub sigma: TrigPoly,
    /// The integral of psi that was subtracted.
    pub mean_subtracted: Scalar,
    /// Whether sigma(t) - sigma(qt) = theta(t) holds as an exact identity
    /// of trigonometric polynomials (the shift axiom for orbital series).
    pub axiom_exact: bool,
}

/// Verifies psi solves the equation and builds the induced summation.
pub fn summation_from_solution(
    spec: &OrbitalSeriesSpec,
    psi: &TrigPoly,
) -> Result<OrbitalSummation> {
    if psi.coboundary(spec.q) != spec.theta {
        return Err(Error::NotASolution);
    }
    let mean = psi.mean().clone();
    let sigma = psi.sub(&TrigPoly::constant(mean.clone()));
    let axiom_exact = sigma.coboundary(spec.q) == spec.theta;
    Ok(OrbitalSummation {
        sigma,
        mean_subtracted: mean,
        axiom_exact,
    })
}

/// Bottom line of an orbital report.
#[derive(Debug, Clone, PartialEq)]
pub enum OrbitalVerdict {
    /// Nonzero mean: partial sums drift linearly and no summability claim
    /// applies.
    NotApplicable {
        mean: Scalar,
    },
    /// theta is a coboundary; the induced summation is attached.
    Coboundary {
        psi: TrigPoly,
        sigma: TrigPoly,
    },
    NoMeasurableSolution {
        reason: crate::coboundary::CeReason,
    },
    Undecided {
        detail: String,
    },
}

/// One Birkhoff probe: time average of cos(t) along the orbit of t0.
#[derive(Debug, Clone, PartialEq)]
pub struct BirkhoffSample {
    pub t0: f64,
    pub steps: usize,
    pub average: f64,
}

/// Knobs for `orbital_report`. Probe points come from the caller so the
/// library stays free of random state.
#[derive(Debug, Clone)]
pub struct OrbitalReportOptions {
    /// Checkpoints for norm rows and level sets; strictly increasing.
    pub norm_ns: Vec<usize>,
    /// Quadrature grid exponent for norms.
    pub grid_pow: u32,
    /// Grid exponent for level-set estimates.
    pub level_grid_pow: u32,
    /// Threshold factor; defaults to half the per-step L2 norm of theta.
    pub gamma: Option<f64>,
    /// Window for the lacunarity computation.
    pub kappa_window: usize,
    /// Starting points for Birkhoff averages of cos(t).
    pub birkhoff_probes: Vec<f64>,
    pub birkhoff_steps: usize,
}

impl Default for OrbitalReportOptions {
    fn default() -> Self {
        OrbitalReportOptions {
            norm_ns: vec![4, 8, 16, 32, 64],
            grid_pow: 14,
            level_grid_pow: 16,
            gamma: None,
            kappa_window: 16,
            birkhoff_probes: Vec::new(),
            birkhoff_steps: 100_000,
        }
    }
}

/// Everything the library can say about one orbital series.
#[derive(Debug, Clone)]
pub struct OrbitalReport {
    pub q: u64,
    pub theta_mean: Scalar,
    pub verdict: OrbitalVerdict,
    pub kappa: std::result::Result<KappaReport, String>,
    pub gamma: f64,
    pub norms: Vec<L2Norm>,
    /// (n, estimated measure of {|theta_n| >= gamma sqrt(n)}).
    pub level_sets: Vec<(usize, f64)>,
    pub birkhoff: Vec<BirkhoffSample>,
    /// Standing caveats on the numeric fields.
    pub notes: Vec<&'static str>,
}

/// Assembles the full evidence bundle for one spec.
pub fn orbital_report(
    spec: &OrbitalSeriesSpec,
    opts: &OrbitalReportOptions,
) -> Result<OrbitalReport> {
    let mean = spec.theta.mean().clone();
    let verdict = if spec.theta.is_zero() {
        OrbitalVerdict::Coboundary {
            psi: TrigPoly::zero(),
            sigma: TrigPoly::zero(),
        }
    } else if !mean.is_zero() {
        OrbitalVerdict::NotApplicable { mean: mean.clone() }
    } else {
        match nonmeasurability_verdict(&spec.theta, spec.q)? {
            CeVerdict::Coboundary { psi } => {
                let s = summation_from_solution(spec, &psi)?;
                OrbitalVerdict::Coboundary {
                    psi,
                    sigma: s.sigma,
                }
            }
            CeVerdict::NoMeasurableSolution { reason } => {
                OrbitalVerdict::NoMeasurableSolution { reason }
            }
            CeVerdict::Undecided { detail } => OrbitalVerdict::Undecided { detail },
        }
    };
    let kappa = lacunarity_kappa(spec, opts.kappa_window).map_err(|e| e.to_string());
    let gamma = opts
        .gamma
        .unwrap_or_else(|| 0.5 * spec.theta.l2_norm_sqr().to_f64_re().sqrt());
    let norms = if opts.norm_ns.is_empty() {
        Vec::new()
    } else {
        l2_norm_rows(spec, &opts.norm_ns, opts.grid_pow)?
    };
    let level_sets = if opts.norm_ns.is_empty() {
        Vec::new()
    } else {
        level_set_rows(spec, &opts.norm_ns, gamma, opts.level_grid_pow)?
    };
    let birkhoff = opts
        .birkhoff_probes
        .iter()
        .map(|&t0| BirkhoffSample {
            t0,
            steps: opts.birkhoff_steps,
            average: birkhoff_average(
                &TrigPoly::cos(1, Scalar::one()),
                spec.q,
                t0,
                opts.birkhoff_steps,
            ),
        })
        .collect();
    Ok(OrbitalReport {
        q: spec.q,
        theta_mean: mean,
        verdict,
        kappa,
        gamma,
        norms,
        level_sets,
        birkhoff,
        notes: vec![
            "level-set and quadrature values are grid estimates, not certified bounds",
            "birkhoff averages are statistical evidence for almost-everywhere behavior",
        ],
    })
}
