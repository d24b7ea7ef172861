//! Quasiexponential series: finite head plus polynomial-times-exponential
//! modes. These are exactly the solutions of linear constant-coefficient
//! recurrences, which makes every question about them finite: the minimal
//! annihilating polynomial, the spectrum, summability, and the unique
//! shift-axiom value on the 1-free class all reduce to exact linear algebra.

use crate::error::{Error, Result};
use crate::linalg::solve_any;
use crate::poly::{find_roots, Poly};
use crate::scalar::Scalar;
use crate::series::{Method, SampledSeries, SumValue};

/// Relative zero threshold used by every float-tolerant solve in this module.
const FLOAT_TOL: f64 = 1e-8;

/// Float spectrum points closer to 1 than this are refused rather than
/// classified, since summability flips across the point 1.
const ONE_GUARD: f64 = 1e-6;

/// Residual acceptance for the rows a float decomposition is verified
/// (rather than solved) on; loose enough to absorb root-finder error
/// amplified through a square Vandermonde solve.
const RESIDUAL_TOL: f64 = 1e-7;

/// One mode pi(n) * lambda^n with lambda != 0 and pi != 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Mode {
    pub lambda: Scalar,
    pub pi: Poly,
}

/// Canonical form: x_n = head_n (finitely supported) + sum of modes.
/// Mode lambdas are pairwise distinct and nonzero; head has no trailing
/// zeros; modes are sorted by lambda for stable reporting.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiExpSeries {
    head: Vec<Scalar>,
    modes: Vec<Mode>,
}

/// Spectrum points (lambda, multiplicity): roots of the minimal polynomial,
/// with 0 present exactly when the head is nonempty.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub points: Vec<(Scalar, usize)>,
}

impl Spectrum {
    /// Whether 1 is a spectrum point. Errs when a float point is too close
    /// to 1 to call either way.
    pub fn contains_one(&self) -> Result<bool> {
        for (lambda, _) in &self.points {
            if lambda.is_exact() {
                if lambda.is_one() {
                    return Ok(true);
                }
            } else {
                let z = lambda.to_complex64();
                let distance = (z - num_complex::Complex64::new(1.0, 0.0)).norm();
                if distance < ONE_GUARD {
                    return Err(Error::AmbiguousSpectrum {
                        re: z.re,
                        im: z.im,
                        distance,
                    });
                }
            }
        }
        Ok(false)
    }

    pub fn max_modulus_nonzero(&self) -> Option<f64> {
        self.points
            .iter()
            .filter(|(l, _)| !l.is_zero())
            .map(|(l, _)| l.abs())
            .fold(None, |acc, m| Some(acc.map_or(m, |a: f64| a.max(m))))
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn lambda_key(s: &Scalar) -> (f64, f64) {
    let z = s.to_complex64();
    (z.re, z.im)
}

impl QuasiExpSeries {
    /// Builds the canonical form: zero-lambda modes fold into the head at
    /// n = 0, duplicate lambdas merge, zero modes drop, head trims.
    pub fn new(head: Vec<Scalar>, modes: Vec<Mode>) -> Self {
        let mut head = head;
        let mut cleaned: Vec<Mode> = Vec::new();
        for m in modes {
            if m.pi.is_zero() {
                continue;
            }
            if m.lambda.is_zero() {
                // pi(n) * 0^n contributes pi(0) at n = 0 only.
                if head.is_empty() {
                    head.push(Scalar::zero());
                }
                head[0] = &head[0] + &m.pi.coeff(0);
                continue;
            }
            match cleaned.iter_mut().find(|c| c.lambda == m.lambda) {
                Some(c) => c.pi = c.pi.add(&m.pi),
                None => cleaned.push(m),
            }
        }
        cleaned.retain(|m| !m.pi.is_zero());
        cleaned.sort_by(|a, b| {
            let (ar, ai) = lambda_key(&a.lambda);
            let (br, bi) = lambda_key(&b.lambda);
            ar.total_cmp(&br).then(ai.total_cmp(&bi))
        });
        while head.last().is_some_and(Scalar::is_zero) {
            head.pop();
        }
        QuasiExpSeries {
            head,
            modes: cleaned,
        }
    }

    pub fn zero() -> Self {
        QuasiExpSeries {
            head: Vec::new(),
            modes: Vec::new(),
        }
    }

    /// Finitely supported series given by the head values alone.
    pub fn from_head(head: Vec<Scalar>) -> Self {
        QuasiExpSeries::new(head, Vec::new())
    }

    /// The geometric series lambda^n.
    pub fn exponential(lambda: Scalar) -> Self {
        QuasiExpSeries::new(
            vec![],
            vec![Mode {
                lambda,
                pi: Poly::one(),
            }],
        )
    }

    /// The polynomial series pi(n).
    pub fn polynomial(pi: Poly) -> Self {
        QuasiExpSeries::new(
            vec![],
            vec![Mode {
                lambda: Scalar::one(),
                pi,
            }],
        )
    }

    pub fn head(&self) -> &[Scalar] {
        &self.head
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn is_zero(&self) -> bool {
        self.head.is_empty() && self.modes.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.head.iter().all(Scalar::is_exact)
            && self
                .modes
                .iter()
                .all(|m| m.lambda.is_exact() && m.pi.is_exact())
    }

    pub fn sample(&self, n: usize) -> Scalar {
        let mut acc = self.head.get(n).cloned().unwrap_or_else(Scalar::zero);
        let ns = Scalar::from_int(n as i64);
        for m in &self.modes {
            acc = &acc + &(&m.pi.eval(&ns) * &m.lambda.pow_usize(n));
        }
        acc
    }

    /// First `len` samples, with mode powers built incrementally.
    pub fn sample_window(&self, len: usize) -> SampledSeries {
        let mut powers: Vec<Scalar> = self.modes.iter().map(|_| Scalar::one()).collect();
        let mut out = Vec::with_capacity(len);
        for n in 0..len {
            let mut acc = self.head.get(n).cloned().unwrap_or_else(Scalar::zero);
            let ns = Scalar::from_int(n as i64);
            for (m, p) in self.modes.iter().zip(powers.iter()) {
                acc = &acc + &(&m.pi.eval(&ns) * p);
            }
            out.push(acc);
            for (m, p) in self.modes.iter().zip(powers.iter_mut()) {
                *p = &*p * &m.lambda;
            }
        }
        SampledSeries::new(out)
    }

    /// First `len` samples in f64 arithmetic, for long averaging windows
    /// where exact power growth is unaffordable.
    pub fn sample_window_f64(&self, len: usize) -> Vec<num_complex::Complex64> {
        use num_complex::Complex64;
        let lambdas: Vec<Complex64> = self.modes.iter().map(|m| m.lambda.to_complex64()).collect();
        let mut powers: Vec<Complex64> = lambdas.iter().map(|_| Complex64::new(1.0, 0.0)).collect();
        let mut out = Vec::with_capacity(len);
        for n in 0..len {
            let mut acc = self
                .head
                .get(n)
                .map(Scalar::to_complex64)
                .unwrap_or_else(|| Complex64::new(0.0, 0.0));
            for (m, p) in self.modes.iter().zip(powers.iter()) {
                acc += m.pi.eval_complex64(Complex64::new(n as f64, 0.0)) * p;
            }
            out.push(acc);
            for (l, p) in lambdas.iter().zip(powers.iter_mut()) {
                *p *= l;
            }
        }
        out
    }

    /// The shift Tx: head loses its first entry, each mode polynomial
    /// becomes lambda * pi(n + 1).
    pub fn shift(&self) -> QuasiExpSeries {
        let head = self.head.iter().skip(1).cloned().collect();
        let one = Scalar::one();
        let modes = self
            .modes
            .iter()
            .map(|m| Mode {
                lambda: m.lambda.clone(),
                pi: m.pi.compose_linear(&one, &one).scale(&m.lambda),
            })
            .collect();
        QuasiExpSeries::new(head, modes)
    }

    pub fn scale(&self, s: &Scalar) -> QuasiExpSeries {
        QuasiExpSeries::new(
            self.head.iter().map(|h| h * s).collect(),
            self.modes
                .iter()
                .map(|m| Mode {
                    lambda: m.lambda.clone(),
                    pi: m.pi.scale(s),
                })
                .collect(),
        )
    }

    pub fn add(&self, rhs: &QuasiExpSeries) -> QuasiExpSeries {
        let mut head = self.head.clone();
        if rhs.head.len() > head.len() {
            head.resize(rhs.head.len(), Scalar::zero());
        }
        for (k, h) in rhs.head.iter().enumerate() {
            head[k] = &head[k] + h;
        }
        let modes = self.modes.iter().chain(rhs.modes.iter()).cloned().collect();
        QuasiExpSeries::new(head, modes)
    }

    pub fn sub(&self, rhs: &QuasiExpSeries) -> QuasiExpSeries {
        self.add(&rhs.scale(&Scalar::from_int(-1)))
    }

    /// delta = (1 - T).
    pub fn delta(&self) -> QuasiExpSeries {
        self.sub(&self.shift())
    }

    /// p(T) applied to the series.
    pub fn apply_poly(&self, p: &Poly) -> QuasiExpSeries {
        let mut acc = QuasiExpSeries::zero();
        let mut cur = self.clone();
        for (j, c) in p.coeffs().iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&cur.scale(c));
            }
            if j + 1 < p.coeffs().len() {
                cur = cur.shift();
            }
        }
        acc
    }

    /// Minimal monic annihilator: lambda^{m0} * prod (lambda - lambda_k)^{deg pi_k + 1}.
    pub fn min_poly(&self) -> Poly {
        let mut phi = Poly::monomial(self.head.len());
        for m in &self.modes {
            let factor = Poly::new(vec![-&m.lambda, Scalar::one()]);
            let mult = m.pi.degree().expect("modes are nonzero") + 1;
            phi = phi.mul(&factor.pow(mult));
        }
        phi
    }

    /// Spectrum points with multiplicities; 0 appears iff the head is nonempty.
    pub fn spectrum(&self) -> Spectrum {
        let mut points: Vec<(Scalar, usize)> = Vec::new();
        if !self.head.is_empty() {
            points.push((Scalar::zero(), self.head.len()));
        }
        for m in &self.modes {
            points.push((m.lambda.clone(), m.pi.degree().expect("nonzero") + 1));
        }
        points.sort_by(|(a, _), (b, _)| {
            let (ar, ai) = lambda_key(a);
            let (br, bi) = lambda_key(b);
            ar.total_cmp(&br).then(ai.total_cmp(&bi))
        });
        Spectrum { points }
    }

    /// Whether the unique shift-axiom sum exists: 1 must avoid the spectrum.
    pub fn is_summable(&self) -> Result<bool> {
        Ok(!self.spectrum().contains_one()?)
    }
}

/// Minimal monic annihilator of a sample window, by increasing degree.
///
/// For each candidate degree the full window is used as the equation set,
/// so a returned polynomial annihilates every sample, and minimality on the
/// window follows from the search order. The all-zero window returns 1.
pub fn detect_recurrence(x: &SampledSeries, deg_max: usize) -> Result<Poly> {
    let n = x.len();
    if n == 0 {
        return Err(Error::WindowTooShort { needed: 1, got: 0 });
    }
    if x.is_zero() {
        return Ok(Poly::one());
    }
    // Minimality is only trustworthy while the system stays overdetermined.
    let cap = deg_max.min(n.saturating_sub(1) / 2);
    for nu in 1..=cap {
        let rows: Vec<Vec<Scalar>> = (0..n - nu)
            .map(|i| (0..nu).map(|j| x.values()[i + j].clone()).collect())
            .collect();
        let rhs: Vec<Scalar> = (0..n - nu).map(|i| -&x.values()[i + nu]).collect();
        if let Some(sol) = solve_any(&rows, &rhs, FLOAT_TOL)? {
            let mut coeffs = sol;
            coeffs.push(Scalar::one());
            return Ok(Poly::new(coeffs));
        }
    }
    Err(Error::NotRecurrent { deg_max: cap })
}

/// Splits a window annihilated by `phi` into head plus modes.
///
/// Every root of `phi` contributes unknowns (head slots for the zero root,
/// polynomial coefficients otherwise); all window samples participate as
/// equations, so an inconsistency reports `AnnihilatorMismatch` rather than
/// extrapolating. Roots of `phi` absent from the series come back with zero
/// coefficients and are dropped by canonicalization, so the result's
/// spectrum matches the series, not the annihilator offered.
pub fn decompose(phi: &Poly, x: &SampledSeries) -> Result<QuasiExpSeries> {
    let Some(deg) = phi.degree() else {
        return Err(Error::ZeroPolynomial);
    };
    if deg == 0 {
        return if x.is_zero() {
            Ok(QuasiExpSeries::zero())
        } else {
            Err(Error::AnnihilatorMismatch)
        };
    }
    let n = x.len();
    if n < deg {
        return Err(Error::WindowTooShort {
            needed: deg,
            got: n,
        });
    }
    let roots = find_roots(phi, 1e-9)?;
    let mut m0 = 0usize;
    let mut nonzero: Vec<(Scalar, usize)> = Vec::new();
    for (root, mult) in roots.roots {
        if root.is_zero() {
            m0 = mult;
        } else {
            nonzero.push((root, mult));
        }
    }

    // Unknowns: head zeta_0..zeta_{m0-1}, then per root the coefficients of
    // its polynomial in the power basis 1, n, ..., n^{mult-1}.
    let mut rows: Vec<Vec<Scalar>> = Vec::with_capacity(n);
    let mut powers: Vec<Scalar> = nonzero.iter().map(|_| Scalar::one()).collect();
    for i in 0..n {
        let mut row = Vec::new();
        for j in 0..m0 {
            row.push(if i == j {
                Scalar::one()
            } else {
                Scalar::zero()
            });
        }
        let ns = Scalar::from_int(i as i64);
        for ((_, mult), p) in nonzero.iter().zip(powers.iter()) {
            let mut npow = Scalar::one();
            for _ in 0..*mult {
                row.push(&npow * p);
                npow = &npow * &ns;
            }
        }
        rows.push(row);
        for ((lambda, _), p) in nonzero.iter().zip(powers.iter_mut()) {
            *p = &*p * lambda;
        }
    }
    let rhs: Vec<Scalar> = x.values().to_vec();
    let all_exact = x.is_exact() && rows.iter().all(|r| r.iter().all(Scalar::is_exact));
    let sol = if all_exact {
        solve_any(&rows, &rhs, FLOAT_TOL)?.ok_or(Error::AnnihilatorMismatch)?
    } else {
        // With float roots the high-power rows span too many orders of
        // magnitude to eliminate jointly: solve the square system on the
        // lowest powers, then hold the remaining rows to a residual check.
        let sol =
            solve_any(&rows[..deg], &rhs[..deg], FLOAT_TOL)?.ok_or(Error::AnnihilatorMismatch)?;
        for i in deg..n {
            let mut acc = num_complex::Complex64::new(0.0, 0.0);
            let mut scale = 1.0f64;
            for (c, s) in rows[i].iter().zip(sol.iter()) {
                let term = c.to_complex64() * s.to_complex64();
                acc += term;
                scale += term.norm();
            }
            let target = rhs[i].to_complex64();
            scale += target.norm();
            if (acc - target).norm() > RESIDUAL_TOL * scale {
                return Err(Error::AnnihilatorMismatch);
            }
        }
        sol
    };

    let head: Vec<Scalar> = sol[..m0].to_vec();
    let mut modes = Vec::new();
    let mut at = m0;
    for (lambda, mult) in nonzero {
        let pi = Poly::new(sol[at..at + mult].to_vec());
        at += mult;
        modes.push(Mode { lambda, pi });
    }
    Ok(QuasiExpSeries::new(head, modes))
}

/// The unique shift-axiom sum on the 1-free class, from the minimal
/// annihilator: value = (sum of phi_n * s_n) / phi(1).
pub fn epsilon1(x: &QuasiExpSeries) -> Result<SumValue> {
    if x.spectrum().contains_one()? {
        return Err(Error::NotSummable);
    }
    epsilon1_with_annihilator(x, &x.min_poly())
}

/// Same formula driven by any annihilator with phi(1) != 0; the value does
/// not depend on the choice. Verifies that phi really annihilates x.
pub fn epsilon1_with_annihilator(x: &QuasiExpSeries, phi: &Poly) -> Result<SumValue> {
    let Some(nu) = phi.degree() else {
        return Err(Error::ZeroPolynomial);
    };
    let residual = x.apply_poly(phi);
    if !residual.is_zero() {
        // Float modes leave rounding residues; judge each residual sample
        // against the scale of the terms that produced it.
        if x.is_exact() && phi.is_exact() {
            return Err(Error::AnnihilatorMismatch);
        }
        let probe = nu + 9;
        let xs = x.sample_window_f64(probe + nu + 1);
        let ys = residual.sample_window_f64(probe);
        for (n, y) in ys.iter().enumerate() {
            let mut scale = 1.0;
            for j in 0..=nu {
                scale += phi.coeff(j).abs() * xs[n + j].norm();
            }
            if y.norm() > 1e-8 * scale {
                return Err(Error::AnnihilatorMismatch);
            }
        }
    }
    let phi_at_one = phi.eval(&Scalar::one());
    if phi_at_one.is_zero_approx(1e-12) {
        return Err(Error::NotSummable);
    }
    let sums = x.sample_window(nu).partial_sums();
    let mut acc = Scalar::zero();
    for n in 1..=nu {
        let c = phi.coeff(n);
        if !c.is_zero() {
            acc = &acc + &(&c * &sums[n]);
        }
    }
    let value = &acc / &phi_at_one;
    let exact = value.is_exact();
    Ok(SumValue {
        value,
        method: Method::Epsilon1,
        exact,
    })
}

/// A shift-closed subspace given by generators, stored as an explicit
/// basis plus a sample window long enough to decide membership.
#[derive(Debug, Clone)]
pub struct SubspaceBasis {
    basis: Vec<QuasiExpSeries>,
    /// Sum of the generators' minimal polynomial degrees; bounds the
    /// dimension of any series involved in membership questions.
    degree_budget: usize,
}

impl SubspaceBasis {
    /// Closes the generators under the shift. Zero generators are ignored.
    pub fn new(generators: &[QuasiExpSeries]) -> Result<Self> {
        let gens: Vec<QuasiExpSeries> = generators
            .iter()
            .filter(|g| !g.is_zero())
            .cloned()
            .collect();
        let degree_budget: usize = gens
            .iter()
            .map(|g| g.min_poly().degree().unwrap_or(0))
            .sum();
        let mut space = SubspaceBasis {
            basis: Vec::new(),
            degree_budget,
        };
        let mut queue: Vec<QuasiExpSeries> = gens;
        while let Some(cand) = queue.pop() {
            if cand.is_zero() || space.contains(&cand)? {
                continue;
            }
            queue.push(cand.shift());
            space.basis.push(cand);
        }
        Ok(space)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[QuasiExpSeries] {
        &self.basis
    }

    pub fn degree_budget(&self) -> usize {
        self.degree_budget
    }

    /// Membership, decided on a window long enough that a nonzero series of
    /// the relevant recurrence order cannot vanish on all of it.
    pub fn contains(&self, y: &QuasiExpSeries) -> Result<bool> {
        if y.is_zero() {
            return Ok(true);
        }
        if self.basis.is_empty() {
            return Ok(false);
        }
        let y_deg = y.min_poly().degree().unwrap_or(0);
        let window = 2 * (self.degree_budget + y_deg).max(1);
        let rows: Vec<Vec<Scalar>> = {
            let cols: Vec<SampledSeries> =
                self.basis.iter().map(|b| b.sample_window(window)).collect();
            (0..window)
                .map(|n| cols.iter().map(|c| c.values()[n].clone()).collect())
                .collect()
        };
        let rhs: Vec<Scalar> = y.sample_window(window).values().to_vec();
        Ok(solve_any(&rows, &rhs, FLOAT_TOL)?.is_some())
    }

    /// A new subspace additionally containing y (and its shifts).
    pub fn with_element(&self, y: &QuasiExpSeries) -> Result<SubspaceBasis> {
        let mut gens = self.basis.clone();
        gens.push(y.clone());
        SubspaceBasis::new(&gens)
    }

    /// All basis spectra avoid 1.
    pub fn subset_of_q1(&self) -> Result<bool> {
        for b in &self.basis {
            if b.spectrum().contains_one()? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The minimal monic polynomial theta with theta(T) x inside the subspace,
/// found by degree sweep; returns 1 when x is already a member.
pub fn theta_xl(x: &QuasiExpSeries, l: &SubspaceBasis, deg_cap: usize) -> Result<Poly> {
    if l.contains(x)? {
        return Ok(Poly::one());
    }
    let x_deg = x.min_poly().degree().unwrap_or(0);
    // Everything compared lives in the kernel of (phi_x * product of basis
    // annihilators)(T); one extra sample beyond that dimension makes
    // window-vanishing equivalent to vanishing.
    let window = x_deg + l.degree_budget() + deg_cap + 2;
    let x_samples = x.sample_window(window + deg_cap).values().to_vec();
    let basis_windows: Vec<Vec<Scalar>> = l
        .basis()
        .iter()
        .map(|b| b.sample_window(window).values().to_vec())
        .collect();
    for nu in 1..=deg_cap {
        // Unknowns: c_0..c_{nu-1} then one coefficient per basis element.
        let rows: Vec<Vec<Scalar>> = (0..window)
            .map(|n| {
                let mut row: Vec<Scalar> = (0..nu).map(|j| x_samples[n + j].clone()).collect();
                row.extend(basis_windows.iter().map(|b| -&b[n]));
                row
            })
            .collect();
        let rhs: Vec<Scalar> = (0..window).map(|n| -&x_samples[n + nu]).collect();
        if let Some(sol) = solve_any(&rows, &rhs, FLOAT_TOL)? {
            let mut coeffs: Vec<Scalar> = sol[..nu].to_vec();
            coeffs.push(Scalar::one());
            return Ok(Poly::new(coeffs));
        }
    }
    Err(Error::DegreeCapExceeded { cap: deg_cap })
}

/// Verdict on extending the subspace's canonical sum to the line through x.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionReport {
    pub theta: Poly,
    pub theta_at_one: Scalar,
    /// Present exactly when theta(1) = 0; the extension exists iff it is 0.
    pub obstruction: Option<Scalar>,
    pub extendable: bool,
    pub unique: bool,
}

/// Extension test: with theta = theta_{x,L}, either theta(1) != 0 (extend
/// uniquely) or the obstruction value decides, with non-uniqueness.
pub fn extension_obstruction(x: &QuasiExpSeries, l: &SubspaceBasis) -> Result<ExtensionReport> {
    if !l.subset_of_q1()? {
        return Err(Error::NotInQ1);
    }
    let cap = x.min_poly().degree().unwrap_or(0).max(1);
    let theta = theta_xl(x, l, cap)?;
    let theta_at_one = theta.eval(&Scalar::one());
    if !theta_at_one.is_zero_approx(1e-9) {
        return Ok(ExtensionReport {
            theta,
            theta_at_one,
            obstruction: None,
            extendable: true,
            unique: true,
        });
    }
    let nu = theta.degree().expect("theta is monic");
    let reduced = x.apply_poly(&theta);
    let inner = epsilon1(&reduced)?;
    let sums = x.sample_window(nu).partial_sums();
    let mut ob = inner.value;
    for n in 1..=nu {
        let c = theta.coeff(n);
        if !c.is_zero() {
            ob = &ob + &(&c * &sums[n]);
        }
    }
    let extendable = ob.is_zero_approx(1e-9);
    Ok(ExtensionReport {
        theta,
        theta_at_one,
        obstruction: Some(ob),
        extendable,
        unique: false,
    })
}

/// C(n, k) as a polynomial in n (falling factorial over k!).
pub fn falling_binom(k: usize) -> Poly {
    let mut acc = Poly::one();
    for j in 0..k {
        let factor = Poly::new(vec![Scalar::from_int(-(j as i64)), Scalar::one()]);
        acc = acc
            .mul(&factor)
            .scale(&Scalar::from_rational(1, (j + 1) as i64));
    }
    acc
}

/// Result of regularization: subtracting `corrector` from the series makes
/// the subspace's sum extendable. The corrector is a polynomial series of
/// degree order - 1 whose top binomial layer is beta * C(n, order - 1);
/// lower layers appear when the residue under the top layer still
/// obstructs.
#[derive(Debug, Clone, PartialEq)]
pub struct Regularization {
    pub corrector: QuasiExpSeries,
    pub beta: Scalar,
    pub order: usize,
}

/// The multiplicity of 1 as a root, tolerating float residue.
fn one_root_multiplicity(theta: &Poly) -> Result<usize> {
    let one_minus = Poly::from_ints(&[-1, 1]);
    let mut m = 0usize;
    let mut rest = theta.clone();
    loop {
        let (q, r) = rest.divmod(&one_minus)?;
        if r.is_zero() || (!r.is_exact() && r.coeffs().iter().all(|c| c.is_zero_approx(1e-9))) {
            m += 1;
            rest = q;
        } else {
            return Ok(m);
        }
    }
}

/// Removes the obstruction of a 1-spectrum series by a polynomial corrector.
///
/// One pass: enlarge the subspace by u = (T-1)^m x (which has no 1 in its
/// spectrum), forcing the minimal theta over the enlarged subspace into the
/// pure power (lambda-1)^l; the obstruction beta of that power rides a
/// single binomial column, and beta * C(n, l-1) cancels it. That layer is
/// exactly the top binomial coefficient of the residual polynomial part,
/// so repeating the pass strictly lowers l and stops once the remainder
/// extends over the original subspace.
pub fn regularize(x: &QuasiExpSeries, l: &SubspaceBasis) -> Result<Regularization> {
    if !l.subset_of_q1()? {
        return Err(Error::NotInQ1);
    }
    if !x.spectrum().contains_one()? {
        return Err(Error::RegularizationNotNeeded);
    }
    let cap = x.min_poly().degree().unwrap_or(0).max(1);
    let m0 = one_root_multiplicity(&theta_xl(x, l, cap)?)?;
    if m0 == 0 {
        // theta(1) != 0 means the extension already exists untouched.
        return Err(Error::RegularizationNotNeeded);
    }
    let one_minus = Poly::from_ints(&[-1, 1]);
    let mut rest = x.clone();
    let mut corrector = QuasiExpSeries::zero();
    let mut top: Option<(Scalar, usize)> = None;
    for _pass in 0..=m0 {
        let report = extension_obstruction(&rest, l)?;
        if report.extendable {
            let (beta, order) = top.unwrap_or((Scalar::zero(), m0));
            return Ok(Regularization {
                corrector,
                beta,
                order,
            });
        }
        let m = one_root_multiplicity(&report.theta)?;
        if m == 0 {
            break;
        }
        let mut u = rest.clone();
        for _ in 0..m {
            u = u.shift().sub(&u);
        }
        debug_assert!(!u.spectrum().contains_one().unwrap_or(true));
        let l2 = if u.is_zero() || l.contains(&u)? {
            l.clone()
        } else {
            l.with_element(&u)?
        };
        let theta2 = theta_xl(&rest, &l2, m)?;
        let order = theta2.degree().expect("monic");
        if theta2 != one_minus.pow(order) {
            return Err(Error::SingularSystem {
                context: "regularization certificate",
            });
        }
        let reduced = rest.apply_poly(&theta2);
        let inner = epsilon1(&reduced)?;
        let sums = rest.sample_window(order).partial_sums();
        let mut beta = inner.value;
        for n in 1..=order {
            let c = theta2.coeff(n);
            if !c.is_zero() {
                beta = &beta + &(&c * &sums[n]);
            }
        }
        if beta.is_zero() {
            break;
        }
        let layer = QuasiExpSeries::polynomial(falling_binom(order - 1).scale(&beta));
        if top.is_none() {
            top = Some((beta, order));
        }
        corrector = corrector.add(&layer);
        rest = rest.sub(&layer);
    }
    Err(Error::SingularSystem {
        context: "regularization stalled",
    })
}
