//! Deciding the cohomological equation psi(t) - psi(qt) = theta(t).
//!
//! For trigonometric polynomials the equation decouples along q-orbits
//! of frequencies: each primitive frequency p (not divisible by q) carries
//! the ladder p, pq, pq^2, ... Within a ladder the cosine and sine
//! coefficient sums must vanish for a solution to exist, and when they do
//! the solution is a prefix-sum telescope. A nonzero ladder sum rules out
//! any measurable solution, not merely trigonometric ones; so does the
//! degenerate case where every ladder has a single rung.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::trig::TrigPoly;

/// Float ladder sums below this modulus (but not exactly zero) are treated
/// as undecidable rather than silently rounded.
const FLOAT_AMBIG: f64 = 1e-9;

/// Frequencies of theta split along q-ladders: primitive p maps to the
/// rungs (i, a, b) present in theta at frequency p * q^i, sorted by i.
#[derive(Debug, Clone, PartialEq)]
pub struct QOrbitDecomposition {
    pub q: u64,
    pub orbits: BTreeMap<u64, Vec<(u32, Scalar, Scalar)>>,
}

/// Why no measurable solution can exist.
#[derive(Debug, Clone, PartialEq)]
pub enum CeReason {
    /// Every ladder is a single rung: consecutive frequency ratios never
    /// hit a power of q, so the telescope has nothing to cancel against.
    RatioCondition,
    /// A ladder's coefficients do not sum to zero.
    OrbitSumNonzero {
        primitive: u64,
        cos_sum: Scalar,
        sin_sum: Scalar,
    },
}

/// Outcome of the trigonometric cohomological equation.
#[derive(Debug, Clone, PartialEq)]
pub enum CeVerdict {
    /// theta = psi - psi(q .) with psi of zero mean; the unique such psi.
    Coboundary {
        psi: TrigPoly,
    },
    NoMeasurableSolution {
        reason: CeReason,
    },
    /// Float data too close to the decision boundary.
    Undecided {
        detail: String,
    },
}

/// Splits theta along q-ladders. Requires q >= 2 and zero mean: a nonzero
/// constant can never cancel in psi - psi(q .).
pub fn q_orbit_decomposition(theta: &TrigPoly, q: u64) -> Result<QOrbitDecomposition> {
    if q < 2 {
        return Err(Error::InvalidSystem {
            detail: format!("q must be >= 2, got {q}"),
        });
    }
    if !theta.mean().is_zero() {
        return Err(Error::MeanNonzero {
            mean: theta.mean().clone(),
        });
    }
    let mut orbits: BTreeMap<u64, Vec<(u32, Scalar, Scalar)>> = BTreeMap::new();
    for (freq, (a, b)) in theta.terms() {
        let mut p = *freq;
        let mut i = 0u32;
        while p % q == 0 {
            p /= q;
            i += 1;
        }
        orbits.entry(p).or_default().push((i, a.clone(), b.clone()));
    }
    for rungs in orbits.values_mut() {
        rungs.sort_by_key(|(i, _, _)| *i);
    }
    Ok(QOrbitDecomposition { q, orbits })
}

/// Decides whether theta is a coboundary and constructs the zero-mean
/// solution when it is. theta must have zero mean (else `MeanNonzero`).
pub fn solve_trig_ce(theta: &TrigPoly, q: u64) -> Result<CeVerdict> {
    let dec = q_orbit_decomposition(theta, q)?;
    // First pass: every ladder must telescope to zero.
    for (p, rungs) in &dec.orbits {
        let mut cos_sum = Scalar::zero();
        let mut sin_sum = Scalar::zero();
        for (_, a, b) in rungs {
            cos_sum = &cos_sum + a;
            sin_sum = &sin_sum + b;
        }
        let cos_zero = cos_sum.is_zero();
        let sin_zero = sin_sum.is_zero();
        if cos_zero && sin_zero {
            continue;
        }
        let near = |s: &Scalar| !s.is_zero() && !s.is_exact() && s.abs() < FLOAT_AMBIG;
        if near(&cos_sum) || near(&sin_sum) {
            return Ok(CeVerdict::Undecided {
                detail: format!("ladder {p}: float coefficient sum within {FLOAT_AMBIG:e} of zero"),
            });
        }
        return Ok(CeVerdict::NoMeasurableSolution {
            reason: CeReason::OrbitSumNonzero {
                primitive: *p,
                cos_sum,
                sin_sum,
            },
        });
    }
    // Second pass: psi carries the prefix sums h_i = a_0 + ... + a_i at
    // frequency p q^i for i below the top rung; the final prefix vanishes
    // by the ladder condition, closing the telescope.
    let mut psi_terms: Vec<(u64, Scalar, Scalar)> = Vec::new();
    for (p, rungs) in &dec.orbits {
        let top = rungs.last().expect("ladders are nonempty").0;
        let mut at = 0usize;
        let mut hc = Scalar::zero();
        let mut hs = Scalar::zero();
        for i in 0..top {
            if at < rungs.len() && rungs[at].0 == i {
                hc = &hc + &rungs[at].1;
                hs = &hs + &rungs[at].2;
                at += 1;
            }
            if !(hc.is_zero() && hs.is_zero()) {
                let freq = p
                    .checked_mul(q.checked_pow(i).ok_or_else(overflow)?)
                    .ok_or_else(overflow)?;
                psi_terms.push((freq, hc.clone(), hs.clone()));
            }
        }
    }
    let psi = TrigPoly::from_terms(Scalar::zero(), psi_terms);
    debug_assert!(psi.coboundary(q) == *theta || !theta.is_exact());
    Ok(CeVerdict::Coboundary { psi })
}

fn overflow() -> Error {
    Error::InvalidSystem {
        detail: "frequency overflow while building psi".into(),
    }
}

/// Full verdict including the degenerate ratio condition: when every ladder
/// is a single rung, any nonzero theta fails outright.
pub fn nonmeasurability_verdict(theta: &TrigPoly, q: u64) -> Result<CeVerdict> {
    if theta.is_zero() {
        return Err(Error::ZeroInput);
    }
    let dec = q_orbit_decomposition(theta, q)?;
    if dec.orbits.values().all(|rungs| rungs.len() == 1) {
        return Ok(CeVerdict::NoMeasurableSolution {
            reason: CeReason::RatioCondition,
        });
    }
    solve_trig_ce(theta, q)
}

/// A map f on {0, .., n-1} with an observable xi0, defining the equation
/// psi(v) - psi(f(v)) = xi0(v).
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteDynSys {
    f: Vec<usize>,
    xi0: Vec<Scalar>,
}

impl FiniteDynSys {
    pub fn new(f: Vec<usize>, xi0: Vec<Scalar>) -> Result<Self> {
        if f.len() != xi0.len() {
            return Err(Error::InvalidSystem {
                detail: format!(
                    "map has {} points but observable has {}",
                    f.len(),
                    xi0.len()
                ),
            });
        }
        if f.is_empty() {
            return Err(Error::InvalidSystem {
                detail: "empty system".into(),
            });
        }
        if let Some(v) = f.iter().find(|v| **v >= f.len()) {
            return Err(Error::InvalidSystem {
                detail: format!("map value {v} out of range 0..{}", f.len()),
            });
        }
        Ok(FiniteDynSys { f, xi0 })
    }

    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }

    pub fn map(&self) -> &[usize] {
        &self.f
    }

    pub fn observable(&self) -> &[Scalar] {
        &self.xi0
    }
}

/// Outcome of the finite cohomological equation.
#[derive(Debug, Clone, PartialEq)]
pub enum FiniteVerdict {
    /// One solution; others differ by a constant per connected component.
    Solvable { psi: Vec<Scalar> },
    /// A cycle whose observable total is nonzero, starting at its smallest
    /// vertex. No psi can exist.
    Unsolvable { cycle: Vec<usize>, sum: Scalar },
}

/// Solvability is exactly the vanishing of the observable's sum over every
/// cycle; psi is then fixed on cycles (anchored to 0 at the smallest
/// vertex) and propagated up the trees hanging off them.
pub fn solve_finite_ce(sys: &FiniteDynSys) -> Result<FiniteVerdict> {
    let n = sys.len();
    let f = sys.map();
    let xi = sys.observable();

    // Locate cycles: colors 0 unseen, 1 on the current walk, 2 settled.
    let mut color = vec![0u8; n];
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if color[start] != 0 {
            continue;
        }
        let mut path = Vec::new();
        let mut v = start;
        while color[v] == 0 {
            color[v] = 1;
            path.push(v);
            v = f[v];
        }
        if color[v] == 1 {
            let pos = path.iter().position(|u| *u == v).expect("v is on the walk");
            cycles.push(path[pos..].to_vec());
        }
        for u in path {
            color[u] = 2;
        }
    }

    let mut psi: Vec<Option<Scalar>> = vec![None; n];
    for cycle in &cycles {
        let mut sum = Scalar::zero();
        for v in cycle {
            sum = &sum + &xi[*v];
        }
        if !sum.is_zero_approx(FLOAT_AMBIG) {
            let anchor_pos = (0..cycle.len())
                .min_by_key(|i| cycle[*i])
                .expect("cycles are nonempty");
            let rotated: Vec<usize> = cycle[anchor_pos..]
                .iter()
                .chain(&cycle[..anchor_pos])
                .copied()
                .collect();
            return Ok(FiniteVerdict::Unsolvable {
                cycle: rotated,
                sum,
            });
        }
        let anchor_pos = (0..cycle.len())
            .min_by_key(|i| cycle[*i])
            .expect("cycles are nonempty");
        let mut v = cycle[anchor_pos];
        let mut val = Scalar::zero();
        for _ in 0..cycle.len() {
            psi[v] = Some(val.clone());
            val = &val - &xi[v];
            v = f[v];
        }
    }

    // Trees: psi(v) = xi(v) + psi(f(v)), filled breadth-first from the
    // settled set along reversed edges.
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 0..n {
        if psi[v].is_none() {
            children[f[v]].push(v);
        }
    }
    let mut queue: Vec<usize> = (0..n).filter(|v| psi[*v].is_some()).collect();
    while let Some(u) = queue.pop() {
        let base = psi[u].clone().expect("queued vertices are settled");
        for &v in &children[u] {
            psi[v] = Some(&xi[v] + &base);
            queue.push(v);
        }
    }
    let psi: Vec<Scalar> = psi
        .into_iter()
        .map(|p| p.expect("every vertex reaches a cycle"))
        .collect();
    Ok(FiniteVerdict::Solvable { psi })
}
