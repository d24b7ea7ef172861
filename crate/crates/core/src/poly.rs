//! Polynomials over `Scalar`, root finding with exact certification,
//! rational functions, partial fractions and the binomial coefficient basis.
//!
//! Root values are exact whenever they can be certified: the polynomial is
//! split into squarefree factors in exact arithmetic (so multiplicities are
//! always exact for exact inputs), each factor's roots are approximated by
//! simultaneous iteration, and every approximation is snapped to a nearby
//! small-denominator Gaussian rational only if the factor vanishes there
//! exactly. Roots that fail certification stay floats.

use crate::error::{Error, Result};
use crate::linalg::solve_any;
use crate::scalar::{best_rational, Complex64, Scalar};

/// Dense polynomial, coefficients lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    c: Vec<Scalar>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly { c: coeffs }
    }

    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Poly {
            c: vec![Scalar::one()],
        }
    }

    pub fn constant(s: Scalar) -> Self {
        Poly::new(vec![s])
    }

    /// The monomial x^k.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![Scalar::zero(); k + 1];
        c[k] = Scalar::one();
        Poly { c }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&n| Scalar::from_int(n)).collect())
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.c
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.c.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.c.last()
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.c.iter().all(Scalar::is_exact)
    }

    pub fn eval(&self, z: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.c.iter().rev() {
            acc = &(&acc * z) + c;
        }
        acc
    }

    pub fn eval_complex64(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.c.iter().rev() {
            acc = acc * z + c.to_complex64();
        }
        acc
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        Poly::new(self.c.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        let n = self.c.len().max(rhs.c.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(&self.coeff(k) + &rhs.coeff(k));
        }
        Poly::new(out)
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        let n = self.c.len().max(rhs.c.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(&self.coeff(k) - &rhs.coeff(k));
        }
        Poly::new(out)
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.c.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Scalar::zero(); self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, e: usize) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division: self = q * d + r with deg r < deg d.
    pub fn divmod(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let Some(dd) = d.degree() else {
            return Err(Error::ZeroDenominator);
        };
        let lead_inv = d.c[dd].inv()?;
        let mut rem = self.c.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut q = vec![Scalar::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let f = &rem[k] * &lead_inv;
            if f.is_zero() {
                continue;
            }
            q[k - dd] = f.clone();
            for j in 0..=dd {
                let t = &rem[k - dd + j] - &(&f * &d.c[j]);
                rem[k - dd + j] = t;
            }
        }
        Ok((Poly::new(q), Poly::new(rem)))
    }

    pub fn derivative(&self) -> Poly {
        if self.c.len() <= 1 {
            return Poly::zero();
        }
        let out = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * &Scalar::from_int(k as i64))
            .collect();
        Poly::new(out)
    }

    pub fn monic(&self) -> Result<Poly> {
        let lead = self.leading().ok_or(Error::ZeroPolynomial)?;
        let inv = lead.inv()?;
        Ok(self.scale(&inv))
    }

    /// Substitutes x -> a*x + b.
    pub fn compose_linear(&self, a: &Scalar, b: &Scalar) -> Poly {
        let lin = Poly::new(vec![b.clone(), a.clone()]);
        let mut acc = Poly::zero();
        for c in self.c.iter().rev() {
            acc = acc.mul(&lin).add(&Poly::constant(c.clone()));
        }
        acc
    }

    /// Monic gcd in exact arithmetic.
    pub fn gcd_exact(&self, other: &Poly) -> Result<Poly> {
        if !self.is_exact() || !other.is_exact() {
            return Err(Error::NotExact {
                op: "polynomial gcd",
            });
        }
        let mut a = self.clone();
        let mut b = other.clone();
        if a.is_zero() {
            return if b.is_zero() {
                Ok(Poly::zero())
            } else {
                b.monic()
            };
        }
        if b.is_zero() {
            return a.monic();
        }
        while !b.is_zero() {
            let (_, r) = a.divmod(&b)?;
            a = b;
            b = if r.is_zero() { r } else { r.monic()? };
        }
        a.monic()
    }

    /// Human-readable form like "λ^2-λ-1", highest degree first.
    pub fn display(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.c.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let body = format!("{c}");
            let (sign, mag) = match body.strip_prefix('-') {
                // Only simple leading negations are peeled; anything with
                // interior structure keeps its own sign inside parens.
                Some(rest) if !rest.contains('+') && !rest.contains('-') => ("-", rest.to_string()),
                _ => ("+", body),
            };
            let needs_parens = mag.contains('+') || mag.contains('-');
            let mag = if needs_parens {
                format!("({mag})")
            } else {
                mag
            };
            if out.is_empty() {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(sign);
            }
            if k == 0 {
                out.push_str(&mag);
            } else {
                if mag != "1" {
                    out.push_str(&mag);
                }
                out.push_str(var);
                if k > 1 {
                    out.push_str(&format!("^{k}"));
                }
            }
        }
        out
    }
}

/// Roots with multiplicities, sorted by (re, im) of the value.
/// For exact input polynomials the multiplicities are always exact, even
/// when a root value itself could not be certified and stays float.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    pub roots: Vec<(Scalar, usize)>,
}

impl RootSet {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|(_, m)| m).sum()
    }

    fn sort(&mut self) {
        self.roots.sort_by(|(a, _), (b, _)| {
            let za = a.to_complex64();
            let zb = b.to_complex64();
            za.re.total_cmp(&zb.re).then(za.im.total_cmp(&zb.im))
        });
    }
}

/// Squarefree decomposition of a monic exact polynomial.
/// Returns pairs (factor, multiplicity) with the factors monic, squarefree,
/// pairwise coprime, and product of factor^multiplicity equal to the input.
pub fn squarefree_decomposition(p: &Poly) -> Result<Vec<(Poly, usize)>> {
    if !p.is_exact() {
        return Err(Error::NotExact {
            op: "squarefree decomposition",
        });
    }
    let p = p.monic()?;
    if p.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let dp = p.derivative();
    let a0 = p.gcd_exact(&dp)?;
    if a0.degree() == Some(0) {
        return Ok(vec![(p, 1)]);
    }
    let mut b = p.divmod(&a0)?.0;
    let mut d = {
        let c = dp.divmod(&a0)?.0;
        c.sub(&b.derivative())
    };
    let mut out = Vec::new();
    let mut i = 1usize;
    while b.degree().is_some_and(|n| n >= 1) {
        let a = b.gcd_exact(&d)?;
        b = b.divmod(&a)?.0;
        let c = d.divmod(&a)?.0;
        d = c.sub(&b.derivative());
        if a.degree().is_some_and(|n| n >= 1) {
            out.push((a, i));
        }
        i += 1;
    }
    Ok(out)
}

/// Simultaneous (Durand-Kerner) root iteration on a monic polynomial.
/// Deterministic: fixed start configuration, fixed sweep order.
fn durand_kerner(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = coeffs.len() - 1;
    assert!(n >= 1 && coeffs[n] == Complex64::new(1.0, 0.0));
    let radius = 1.0 + coeffs[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = Vec::with_capacity(n);
    let mut w = seed;
    for _ in 0..n {
        z.push(w * radius);
        w *= seed;
    }
    let eval = |x: Complex64| {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    };
    let tol = 1e-13 * radius.max(1.0);
    for _ in 0..800 {
        let mut max_step = 0.0_f64;
        for k in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if j != k {
                    den *= z[k] - z[j];
                }
            }
            if den.norm() == 0.0 {
                den = Complex64::new(1e-12, 1e-12);
            }
            let step = eval(z[k]) / den;
            z[k] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step < tol {
            return Ok(z);
        }
    }
    let residual = z.iter().map(|&x| eval(x).norm()).fold(0.0, f64::max);
    // A loose but genuine root set is still useful to callers that only
    // need approximate locations; tight ones return above.
    if residual < 1e-8 * radius.max(1.0) {
        return Ok(z);
    }
    Err(Error::RootFindingDidNotConverge { residual })
}

/// Snap candidates near z: componentwise best rationals with denominator
/// at most 64, plus the units ±1, ±i. Only candidates within `snap_radius`
/// are proposed; certification against the factor happens at the call site.
fn snap_candidates(z: Complex64, snap_radius: f64) -> Vec<Scalar> {
    let mut out = Vec::new();
    if let (Some(re), Some(im)) = (best_rational(z.re, 64), best_rational(z.im, 64)) {
        out.push(Scalar::from_parts(re, im));
    }
    for unit in [
        Scalar::from_int(1),
        Scalar::from_int(-1),
        Scalar::i(),
        -Scalar::i(),
    ] {
        out.push(unit);
    }
    out.retain(|cand| (cand.to_complex64() - z).norm() <= snap_radius);
    out.dedup_by(|a, b| a == b);
    out
}

const SNAP_RADIUS: f64 = 1e-6;

/// All complex roots with multiplicities.
///
/// Exact coefficients: multiplicities come from exact squarefree splitting;
/// root values are certified exact when a snapped Gaussian rational is a
/// true root of its squarefree factor, and stay float otherwise. Float
/// coefficients: roots are clustered within `cluster_tol` and reported with
/// the cluster size as multiplicity.
pub fn find_roots(p: &Poly, cluster_tol: f64) -> Result<RootSet> {
    match p.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Err(Error::ConstantPolynomial),
        Some(_) => {}
    }
    let mut set = if p.is_exact() {
        let mut roots: Vec<(Scalar, usize)> = Vec::new();
        for (factor, mult) in squarefree_decomposition(p)? {
            let deg = factor.degree().expect("factors have positive degree");
            if deg == 1 {
                let root = -&(&factor.coeff(0) / &factor.coeff(1));
                roots.push((root, mult));
                continue;
            }
            let coeffs: Vec<Complex64> = factor.c.iter().map(Scalar::to_complex64).collect();
            let approx = durand_kerner(&coeffs)?;
            for z in approx {
                let certified = snap_candidates(z, SNAP_RADIUS)
                    .into_iter()
                    .find(|cand| factor.eval(cand).is_zero());
                match certified {
                    Some(exact) => roots.push((exact, mult)),
                    None => roots.push((Scalar::from_complex64(z), mult)),
                }
            }
        }
        RootSet { roots }
    } else {
        let coeffs: Vec<Complex64> = p.monic()?.c.iter().map(Scalar::to_complex64).collect();
        let mut approx = durand_kerner(&coeffs)?;
        approx.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        let mut clusters: Vec<(Complex64, usize)> = Vec::new();
        for z in approx {
            match clusters.last_mut() {
                Some((center, count)) if (*center - z).norm() <= cluster_tol => {
                    // Running mean keeps the center stable as members join.
                    *center = (*center * (*count as f64) + z) / (*count as f64 + 1.0);
                    *count += 1;
                }
                _ => clusters.push((z, 1)),
            }
        }
        RootSet {
            roots: clusters
                .into_iter()
                .map(|(z, m)| (Scalar::from_complex64(z), m))
                .collect(),
        }
    };
    set.sort();
    debug_assert_eq!(set.total_multiplicity(), p.degree().unwrap());
    Ok(set)
}

/// Quotient of polynomials in canonical form: denominator monic and, for
/// exact operands, the fraction reduced.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFn {
    num: Poly,
    den: Poly,
}

impl RationalFn {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let (mut num, mut den) = (num, den);
        if num.is_exact() && den.is_exact() && !num.is_zero() {
            let g = num.gcd_exact(&den)?;
            if g.degree().is_some_and(|d| d >= 1) {
                num = num.divmod(&g)?.0;
                den = den.divmod(&g)?.0;
            }
        }
        // Normalize den(0) = 1 when possible (the power-series convention),
        // otherwise fall back to a monic denominator.
        let pivot = if den.coeff(0).is_zero() {
            den.leading().expect("nonzero").clone()
        } else {
            den.coeff(0)
        };
        let pivot_inv = pivot.inv()?;
        Ok(RationalFn {
            num: num.scale(&pivot_inv),
            den: den.scale(&pivot_inv),
        })
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn eval(&self, t: &Scalar) -> Result<Scalar> {
        let d = self.den.eval(t);
        if d.is_zero() {
            return Err(Error::EvalAtPole);
        }
        Ok(&self.num.eval(t) / &d)
    }

    /// Taylor coefficients at t = 0; requires den(0) != 0.
    pub fn power_series(&self, n_terms: usize) -> Result<Vec<Scalar>> {
        let d0 = self.den.coeff(0);
        if d0.is_zero() {
            return Err(Error::DenominatorVanishesAtZero);
        }
        let d0_inv = d0.inv()?;
        let mut out: Vec<Scalar> = Vec::with_capacity(n_terms);
        for n in 0..n_terms {
            let mut acc = self.num.coeff(n);
            for j in 1..=n.min(self.den.c.len().saturating_sub(1)) {
                acc = &acc - &(&self.den.coeff(j) * &out[n - j]);
            }
            out.push(&acc * &d0_inv);
        }
        Ok(out)
    }
}

/// One term coeff/(1-lambda*t)^order of a partial fraction expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct PfTerm {
    pub lambda: Scalar,
    pub order: usize,
    pub coeff: Scalar,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartialFractions {
    pub poly_part: Poly,
    pub terms: Vec<PfTerm>,
}

/// Expands num/den into poly_part + sum of coeff/(1-lambda*t)^order.
/// Requires den(0) != 0 so every pole contributes a geometric-type term.
pub fn partial_fractions(f: &RationalFn, cluster_tol: f64) -> Result<PartialFractions> {
    let den = f.den();
    let d0 = den.coeff(0);
    if d0.is_zero()
        || (!d0.is_exact()
            && d0.is_zero_approx(1e-12 * den.c.iter().map(Scalar::abs).fold(0.0, f64::max)))
    {
        return Err(Error::DenominatorVanishesAtZero);
    }
    let (poly_part, r) = f.num().divmod(den)?;
    if r.is_zero() {
        return Ok(PartialFractions {
            poly_part,
            terms: Vec::new(),
        });
    }
    let roots = find_roots(den, cluster_tol)?;
    let lambdas: Vec<(Scalar, usize)> = roots
        .roots
        .iter()
        .map(|(t, m)| t.inv().map(|l| (l, *m)))
        .collect::<Result<_>>()?;
    let deg_den = den.degree().expect("nonzero");

    // den(t)/(1-lambda_j t)^k = den(0) * (1-lambda_j t)^(m_j-k) * prod_{i!=j} (1-lambda_i t)^(m_i),
    // so matching coefficients of r against these products is a square system.
    let one_minus = |l: &Scalar| Poly::new(vec![Scalar::one(), -l]);
    let mut columns: Vec<(usize, usize, Poly)> = Vec::new();
    for (j, (lj, mj)) in lambdas.iter().enumerate() {
        let mut others = Poly::constant(d0.clone());
        for (i, (li, mi)) in lambdas.iter().enumerate() {
            if i != j {
                others = others.mul(&one_minus(li).pow(*mi));
            }
        }
        for k in 1..=*mj {
            let basis = others.mul(&one_minus(lj).pow(mj - k));
            columns.push((j, k, basis));
        }
    }
    let rows: Vec<Vec<Scalar>> = (0..deg_den)
        .map(|n| columns.iter().map(|(_, _, b)| b.coeff(n)).collect())
        .collect();
    let rhs: Vec<Scalar> = (0..deg_den).map(|n| r.coeff(n)).collect();
    let sol = solve_any(&rows, &rhs, 1e-10)?.ok_or(Error::SingularSystem {
        context: "partial fractions",
    })?;

    let mut terms: Vec<PfTerm> = columns
        .iter()
        .zip(sol)
        .filter(|(_, c)| !c.is_zero())
        .map(|((j, k, _), c)| PfTerm {
            lambda: lambdas[*j].0.clone(),
            order: *k,
            coeff: c,
        })
        .collect();
    terms.sort_by(|a, b| {
        let za = a.lambda.to_complex64();
        let zb = b.lambda.to_complex64();
        za.re
            .total_cmp(&zb.re)
            .then(za.im.total_cmp(&zb.im))
            .then(a.order.cmp(&b.order))
    });
    Ok(PartialFractions { poly_part, terms })
}

/// C(n+k, k) as an exact polynomial in n of degree k.
pub fn binom_poly(k: usize) -> Poly {
    let mut acc = Poly::one();
    for j in 1..=k {
        let factor = Poly::new(vec![Scalar::from_int(j as i64), Scalar::one()]);
        acc = acc.mul(&factor).scale(&Scalar::from_rational(1, j as i64));
    }
    acc
}

/// Coefficients c with p(n) = sum_k c_k * C(n+k, k); length deg p + 1.
pub fn to_binomial(p: &Poly) -> Vec<Scalar> {
    let Some(deg) = p.degree() else {
        return Vec::new();
    };
    let mut work = p.clone();
    let mut out = vec![Scalar::zero(); deg + 1];
    for d in (0..=deg).rev() {
        let lead = work.coeff(d);
        if lead.is_zero() {
            continue;
        }
        // binom_poly(d) has leading coefficient 1/d!.
        let mut fact = Scalar::one();
        for j in 1..=d {
            fact = &fact * &Scalar::from_int(j as i64);
        }
        let c = &lead * &fact;
        work = work.sub(&binom_poly(d).scale(&c));
        out[d] = c;
    }
    out
}

/// Inverse of `to_binomial`.
pub fn from_binomial(c: &[Scalar]) -> Poly {
    let mut acc = Poly::zero();
    for (k, ck) in c.iter().enumerate() {
        if !ck.is_zero() {
            acc = acc.add(&binom_poly(k).scale(ck));
        }
    }
    acc
}
