//! Runtime-tagged scalar: exact Gaussian rational or complex double.
//!
//! Exactness is a property of a value, not of a type parameter. Any binary
//! operation touching a float produces a float, so exactness decays
//! monotonically along a computation and `is_exact` on the final value tells
//! whether every intermediate step stayed exact.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

pub type Complex64 = num_complex::Complex64;
pub type ExactComplex = Complex<BigRational>;

#[derive(Debug, Clone)]
pub enum Scalar {
    Exact(ExactComplex),
    Float(Complex64),
}

fn big_ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(ExactComplex::new(BigRational::zero(), BigRational::zero()))
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    /// The imaginary unit as an exact value.
    pub fn i() -> Self {
        Scalar::Exact(ExactComplex::new(BigRational::zero(), BigRational::one()))
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Exact(ExactComplex::new(big_ratio(n, 1), BigRational::zero()))
    }

    /// Exact real rational n/d. Panics if d == 0.
    pub fn from_rational(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Scalar::Exact(ExactComplex::new(big_ratio(n, d), BigRational::zero()))
    }

    /// Exact Gaussian rational (re_n/re_d) + (im_n/im_d) i.
    pub fn from_gaussian(re_n: i64, re_d: i64, im_n: i64, im_d: i64) -> Self {
        assert!(re_d != 0 && im_d != 0, "zero denominator");
        Scalar::Exact(ExactComplex::new(
            big_ratio(re_n, re_d),
            big_ratio(im_n, im_d),
        ))
    }

    pub fn from_big_rational(r: BigRational) -> Self {
        Scalar::Exact(ExactComplex::new(r, BigRational::zero()))
    }

    pub fn from_parts(re: BigRational, im: BigRational) -> Self {
        Scalar::Exact(ExactComplex::new(re, im))
    }

    pub fn from_f64(x: f64) -> Self {
        Scalar::Float(Complex64::new(x, 0.0))
    }

    pub fn from_complex64(z: Complex64) -> Self {
        Scalar::Float(z)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    /// True zero test: exact equality for exact values, bit-zero for floats.
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(z) => z.re.is_zero() && z.im.is_zero(),
            Scalar::Float(z) => z.re == 0.0 && z.im == 0.0,
        }
    }

    /// Zero test with a modulus tolerance applied to float values only;
    /// exact values are still tested exactly.
    pub fn is_zero_approx(&self, tol: f64) -> bool {
        match self {
            Scalar::Exact(_) => self.is_zero(),
            Scalar::Float(z) => z.norm() <= tol,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Exact(z) => z.re.is_one() && z.im.is_zero(),
            Scalar::Float(z) => z.re == 1.0 && z.im == 0.0,
        }
    }

    pub fn is_real(&self) -> bool {
        match self {
            Scalar::Exact(z) => z.im.is_zero(),
            Scalar::Float(z) => z.im == 0.0,
        }
    }

    pub fn to_complex64(&self) -> Complex64 {
        match self {
            Scalar::Exact(z) => Complex64::new(
                z.re.to_f64().unwrap_or(f64::NAN),
                z.im.to_f64().unwrap_or(f64::NAN),
            ),
            Scalar::Float(z) => *z,
        }
    }

    pub fn to_f64_re(&self) -> f64 {
        self.to_complex64().re
    }

    /// Modulus as a double, for pivoting and diagnostics.
    pub fn abs(&self) -> f64 {
        self.to_complex64().norm()
    }

    pub fn exact_value(&self) -> Option<&ExactComplex> {
        match self {
            Scalar::Exact(z) => Some(z),
            Scalar::Float(_) => None,
        }
    }

    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Exact(z) => Scalar::Exact(ExactComplex::new(z.re.clone(), -z.im.clone())),
            Scalar::Float(z) => Scalar::Float(z.conj()),
        }
    }

    /// |z|^2 without leaving the arithmetic domain of the operand.
    pub fn norm_sqr(&self) -> Scalar {
        match self {
            Scalar::Exact(z) => Scalar::Exact(ExactComplex::new(
                &z.re * &z.re + &z.im * &z.im,
                BigRational::zero(),
            )),
            Scalar::Float(z) => Scalar::Float(Complex64::new(z.norm_sqr(), 0.0)),
        }
    }

    pub fn pow_usize(&self, mut e: usize) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(match self {
            Scalar::Exact(z) => Scalar::Exact(ExactComplex::one() / z.clone()),
            Scalar::Float(z) => Scalar::Float(Complex64::new(1.0, 0.0) / z),
        })
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar> {
        if rhs.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(self / rhs)
    }

    /// Parses an exact real rational literal: "7", "-3/4".
    pub fn parse_rational(s: &str) -> Result<Scalar> {
        let t = s.trim();
        let bad = || Error::InvalidScalar {
            input: s.to_string(),
        };
        if t.is_empty() {
            return Err(bad());
        }
        let r = match t.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                BigRational::new(n, d)
            }
            None => {
                let n: BigInt = t.parse().map_err(|_| bad())?;
                BigRational::from_integer(n)
            }
        };
        Ok(Scalar::from_big_rational(r))
    }
}

fn promote(a: &Scalar, b: &Scalar) -> Option<(ExactComplex, ExactComplex)> {
    match (a, b) {
        (Scalar::Exact(x), Scalar::Exact(y)) => Some((x.clone(), y.clone())),
        _ => None,
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match promote(self, rhs) {
                    Some((x, y)) => Scalar::Exact(x $op y),
                    None => Scalar::Float(self.to_complex64() $op rhs.to_complex64()),
                }
            }
        }
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}

scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);
scalar_binop!(Mul, mul, *);

/// Division panics on an exact zero divisor; use `checked_div` where the
/// divisor is not known to be nonzero.
impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        assert!(!rhs.is_zero(), "scalar division by zero");
        match promote(self, rhs) {
            Some((x, y)) => Scalar::Exact(x / y),
            None => Scalar::Float(self.to_complex64() / rhs.to_complex64()),
        }
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        &self / &rhs
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(z) => Scalar::Exact(-z.clone()),
            Scalar::Float(z) => Scalar::Float(-z),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => self.to_complex64() == other.to_complex64(),
        }
    }
}

/// Formats a rational without the "/1" tail on integers.
pub fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(z) => {
                let re0 = z.re.is_zero();
                let im0 = z.im.is_zero();
                if im0 {
                    return write!(f, "{}", fmt_rational(&z.re));
                }
                let im_mag = z.im.abs();
                let im_part = if im_mag.is_one() {
                    "i".to_string()
                } else {
                    format!("{}i", fmt_rational(&im_mag))
                };
                let sign = if z.im.is_negative() { "-" } else { "+" };
                if re0 {
                    if z.im.is_negative() {
                        write!(f, "-{im_part}")
                    } else {
                        write!(f, "{im_part}")
                    }
                } else {
                    write!(f, "{}{}{}", fmt_rational(&z.re), sign, im_part)
                }
            }
            Scalar::Float(z) => {
                if z.im == 0.0 {
                    write!(f, "{}", z.re)
                } else if z.re == 0.0 {
                    write!(f, "{}i", z.im)
                } else if z.im < 0.0 {
                    write!(f, "{}{}i", z.re, z.im)
                } else {
                    write!(f, "{}+{}i", z.re, z.im)
                }
            }
        }
    }
}

/// Best rational approximation to x among denominators 1..=max_den,
/// by exhaustive scan. Returns None for non-finite or absurdly large x.
pub fn best_rational(x: f64, max_den: u64) -> Option<BigRational> {
    if !x.is_finite() || x.abs() > 1e12 {
        return None;
    }
    let mut best: Option<(f64, i64, u64)> = None;
    for d in 1..=max_den {
        let p = (x * d as f64).round();
        if p.abs() > 9e15 {
            continue;
        }
        let p = p as i64;
        let err = (x - p as f64 / d as f64).abs();
        let better = match best {
            None => true,
            Some((e, _, _)) => err < e,
        };
        if better {
            best = Some((err, p, d));
        }
    }
    best.map(|(_, p, d)| BigRational::new(BigInt::from(p), BigInt::from(d)))
}
