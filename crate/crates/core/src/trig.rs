//! Real trigonometric polynomials with exact coefficients: a constant term
//! plus cosine/sine pairs indexed by positive integer frequency. These are
//! the right-hand sides and solutions of the cohomological equation
//! psi(t) - psi(qt) = theta(t).

use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::Scalar;

/// c0 + sum over freq >= 1 of (a cos(freq t) + b sin(freq t)).
/// Stored pairs are never both zero.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    c0: Scalar,
    terms: BTreeMap<u64, (Scalar, Scalar)>,
}

impl TrigPoly {
    pub fn new(c0: Scalar, terms: BTreeMap<u64, (Scalar, Scalar)>) -> Self {
        let mut c0 = c0;
        let mut cleaned = BTreeMap::new();
        for (freq, (a, b)) in terms {
            if freq == 0 {
                // cos(0t) folds into the constant; sin(0t) vanishes.
                c0 = &c0 + &a;
                continue;
            }
            if !(a.is_zero() && b.is_zero()) {
                cleaned.insert(freq, (a, b));
            }
        }
        TrigPoly { c0, terms: cleaned }
    }

    pub fn zero() -> Self {
        TrigPoly {
            c0: Scalar::zero(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Scalar) -> Self {
        TrigPoly {
            c0: c,
            terms: BTreeMap::new(),
        }
    }

    pub fn cos(freq: u64, coeff: Scalar) -> Self {
        let mut t = BTreeMap::new();
        t.insert(freq, (coeff, Scalar::zero()));
        TrigPoly::new(Scalar::zero(), t)
    }

    pub fn sin(freq: u64, coeff: Scalar) -> Self {
        let mut t = BTreeMap::new();
        t.insert(freq, (Scalar::zero(), coeff));
        TrigPoly::new(Scalar::zero(), t)
    }

    pub fn from_terms(c0: Scalar, terms: Vec<(u64, Scalar, Scalar)>) -> Self {
        let mut map: BTreeMap<u64, (Scalar, Scalar)> = BTreeMap::new();
        let mut c0 = c0;
        for (freq, a, b) in terms {
            if freq == 0 {
                c0 = &c0 + &a;
                continue;
            }
            let e = map.entry(freq).or_insert((Scalar::zero(), Scalar::zero()));
            e.0 = &e.0 + &a;
            e.1 = &e.1 + &b;
        }
        TrigPoly::new(c0, map)
    }

    pub fn mean(&self) -> &Scalar {
        &self.c0
    }

    pub fn terms(&self) -> &BTreeMap<u64, (Scalar, Scalar)> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.terms.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.c0.is_exact()
            && self
                .terms
                .values()
                .all(|(a, b)| a.is_exact() && b.is_exact())
    }

    pub fn max_freq(&self) -> Option<u64> {
        self.terms.keys().next_back().copied()
    }

    pub fn add(&self, rhs: &TrigPoly) -> TrigPoly {
        let mut terms = self.terms.clone();
        for (freq, (a, b)) in &rhs.terms {
            let e = terms
                .entry(*freq)
                .or_insert((Scalar::zero(), Scalar::zero()));
            e.0 = &e.0 + a;
            e.1 = &e.1 + b;
        }
        TrigPoly::new(&self.c0 + &rhs.c0, terms)
    }

    pub fn scale(&self, s: &Scalar) -> TrigPoly {
        TrigPoly::new(
            &self.c0 * s,
            self.terms
                .iter()
                .map(|(freq, (a, b))| (*freq, (a * s, b * s)))
                .collect(),
        )
    }

    pub fn neg(&self) -> TrigPoly {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn sub(&self, rhs: &TrigPoly) -> TrigPoly {
        self.add(&rhs.neg())
    }

    /// theta(qt): every frequency is multiplied by q.
    pub fn compose_scale(&self, q: u64) -> TrigPoly {
        TrigPoly::new(
            self.c0.clone(),
            self.terms
                .iter()
                .map(|(freq, ab)| (freq.checked_mul(q).expect("frequency overflow"), ab.clone()))
                .collect(),
        )
    }

    /// psi(t) - psi(qt): the left-hand side of the cohomological equation.
    pub fn coboundary(&self, q: u64) -> TrigPoly {
        self.sub(&self.compose_scale(q))
    }

    pub fn eval(&self, t: f64) -> f64 {
        let mut acc = self.c0.to_f64_re();
        for (freq, (a, b)) in &self.terms {
            let ft = *freq as f64 * t;
            acc += a.to_f64_re() * ft.cos() + b.to_f64_re() * ft.sin();
        }
        acc
    }

    /// Mean of the square over a period: c0^2 + sum (a^2 + b^2) / 2.
    pub fn l2_norm_sqr(&self) -> Scalar {
        let mut acc = &self.c0 * &self.c0;
        let half = Scalar::from_rational(1, 2);
        for (a, b) in self.terms.values() {
            acc = &acc + &(&(&(a * a) + &(b * b)) * &half);
        }
        acc
    }
}

fn fmt_term(coeff: &Scalar, base: &str, freq: u64) -> String {
    let arg = if freq == 1 {
        "t".to_string()
    } else {
        format!("{freq}t")
    };
    if coeff.is_one() {
        return format!("{base}({arg})");
    }
    if (-coeff).is_one() {
        return format!("-{base}({arg})");
    }
    let c = coeff.to_string();
    if c[1..].contains('+') || c[1..].contains('-') {
        format!("({c}) {base}({arg})")
    } else {
        format!("{c} {base}({arg})")
    }
}

impl fmt::Display for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if !self.c0.is_zero() {
            parts.push(self.c0.to_string());
        }
        for (freq, (a, b)) in &self.terms {
            if !a.is_zero() {
                parts.push(fmt_term(a, "cos", *freq));
            }
            if !b.is_zero() {
                parts.push(fmt_term(b, "sin", *freq));
            }
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        let mut out = parts[0].clone();
        for p in &parts[1..] {
            if let Some(rest) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        write!(f, "{out}")
    }
}
