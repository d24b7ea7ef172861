//! Finite sample windows of series, the shift/difference operators, partial
//! sums, and the two window-level summation procedures (direct limit of
//! partial sums, and the difference-preimage construction).
//!
//! A window is explicit about consumption: shift and delta shorten it by
//! one, and any procedure that needs more samples than the window holds
//! reports that instead of extrapolating.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A finite window x_0, ..., x_{N-1} of a series.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSeries {
    v: Vec<Scalar>,
}

/// How a reported sum was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Standard,
    Cesaro1,
    Euler,
    Epsilon1,
    Periodic,
    FromSolution,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Standard => "standard",
            Method::Cesaro1 => "cesaro1",
            Method::Euler => "euler",
            Method::Epsilon1 => "epsilon1",
            Method::Periodic => "periodic",
            Method::FromSolution => "from_solution",
        }
    }
}

/// A sum together with its provenance. `exact` is true only when every
/// arithmetic step stayed in exact arithmetic; window-limit estimates
/// (standard, Cesaro) are never marked exact.
#[derive(Debug, Clone, PartialEq)]
pub struct SumValue {
    pub value: Scalar,
    pub method: Method,
    pub exact: bool,
}

/// Which tail-smallness certificate justified a delta preimage.
#[derive(Debug, Clone, PartialEq)]
pub enum TailCertificate {
    /// The tail is identically zero on the checked stretch.
    ZeroTail,
    /// Term ratios stay below `ratio` < 1, giving the geometric bound.
    Geometric { ratio: f64, bound: f64 },
    /// Trailing sums over the last quarter stay below `max_abs`.
    CauchyTail { max_abs: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaPreimage {
    pub series: SampledSeries,
    pub certificate: TailCertificate,
}

impl SampledSeries {
    pub fn new(values: Vec<Scalar>) -> Self {
        SampledSeries { v: values }
    }

    pub fn from_f64(values: &[f64]) -> Self {
        SampledSeries {
            v: values.iter().map(|&x| Scalar::from_f64(x)).collect(),
        }
    }

    pub fn from_ints(values: &[i64]) -> Self {
        SampledSeries {
            v: values.iter().map(|&n| Scalar::from_int(n)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }

    pub fn values(&self) -> &[Scalar] {
        &self.v
    }

    pub fn get(&self, n: usize) -> Option<&Scalar> {
        self.v.get(n)
    }

    pub fn is_exact(&self) -> bool {
        self.v.iter().all(Scalar::is_exact)
    }

    pub fn is_zero(&self) -> bool {
        self.v.iter().all(Scalar::is_zero)
    }

    /// Drops the first sample; the window shrinks by one.
    pub fn shift(&self) -> Result<SampledSeries> {
        if self.v.len() < 2 {
            return Err(Error::WindowTooShort {
                needed: 2,
                got: self.v.len(),
            });
        }
        Ok(SampledSeries {
            v: self.v[1..].to_vec(),
        })
    }

    /// (1 - shift): delta(x)_n = x_n - x_{n+1}; the window shrinks by one.
    pub fn delta(&self) -> Result<SampledSeries> {
        if self.v.len() < 2 {
            return Err(Error::WindowTooShort {
                needed: 2,
                got: self.v.len(),
            });
        }
        let out = self.v.windows(2).map(|w| &w[0] - &w[1]).collect();
        Ok(SampledSeries { v: out })
    }

    /// Partial sums s_0 = 0, s_n = x_0 + ... + x_{n-1}; length N + 1.
    pub fn partial_sums(&self) -> Vec<Scalar> {
        let mut out = Vec::with_capacity(self.v.len() + 1);
        let mut acc = Scalar::zero();
        out.push(acc.clone());
        for x in &self.v {
            acc = &acc + x;
            out.push(acc.clone());
        }
        out
    }

    pub fn add(&self, rhs: &SampledSeries) -> SampledSeries {
        let n = self.v.len().min(rhs.v.len());
        SampledSeries {
            v: (0..n).map(|k| &self.v[k] + &rhs.v[k]).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> SampledSeries {
        SampledSeries {
            v: self.v.iter().map(|x| x * s).collect(),
        }
    }

    /// Sum as the limit of partial sums, accepted only when the last
    /// quarter of the partial-sum window settles within `tol`.
    pub fn standard_sum(&self, tol: f64) -> Result<SumValue> {
        if self.v.is_empty() {
            return Err(Error::WindowTooShort { needed: 1, got: 0 });
        }
        let sums = self.partial_sums();
        let last = sums.last().expect("nonempty").clone();
        let tail_start = sums.len() - (sums.len() / 4).max(2).min(sums.len());
        let spread = sums[tail_start..]
            .iter()
            .map(|s| (s - &last).abs())
            .fold(0.0, f64::max);
        if spread > tol {
            return Err(Error::NotConvergent { spread, tol });
        }
        Ok(SumValue {
            value: last,
            method: Method::Standard,
            exact: false,
        })
    }

    /// Solves delta(yhat) = y for yhat via truncated tail sums
    /// yhat_n = y_n + y_{n+1} + ..., provided the window certifies that the
    /// discarded tail is below `tail_tol`. The certificate is either a
    /// geometric majorization of the terms or smallness of all trailing
    /// sums over the last quarter of the window.
    pub fn delta_preimage(&self, tail_tol: f64) -> Result<DeltaPreimage> {
        let n = self.v.len();
        if n < 2 {
            return Err(Error::WindowTooShort { needed: 2, got: n });
        }
        let quarter = (n / 4).max(1);
        let tail = &self.v[n - quarter..];

        let certificate = 'cert: {
            if tail.iter().all(Scalar::is_zero) {
                break 'cert Some(TailCertificate::ZeroTail);
            }
            // Geometric: if |y_{k+1}|/|y_k| <= r < 1 throughout the tail,
            // the discarded part is at most |y_{N-1}| r / (1 - r).
            let mags: Vec<f64> = tail.iter().map(Scalar::abs).collect();
            if mags.iter().all(|&m| m > 0.0) {
                let ratio = mags.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
                if ratio < 1.0 {
                    let bound = mags.last().unwrap() * ratio / (1.0 - ratio);
                    if bound < tail_tol {
                        break 'cert Some(TailCertificate::Geometric { ratio, bound });
                    }
                }
            }
            // Cauchy fallback: every trailing sum started in the last
            // quarter stays small, so the discarded tail plausibly does too.
            let mut acc = Scalar::zero();
            let mut max_abs = 0.0_f64;
            for y in self.v[n - quarter..].iter().rev() {
                acc = &acc + y;
                max_abs = max_abs.max(acc.abs());
            }
            if max_abs < tail_tol {
                break 'cert Some(TailCertificate::CauchyTail { max_abs });
            }
            None
        };

        let Some(certificate) = certificate else {
            let mut acc = Scalar::zero();
            let mut best = f64::INFINITY;
            for y in self.v[n - quarter..].iter().rev() {
                acc = &acc + y;
                best = best.min(acc.abs());
            }
            return Err(Error::NoConvergenceCertificate {
                best_bound: best,
                tail_tol,
            });
        };

        let mut suffix = vec![Scalar::zero(); n];
        let mut acc = Scalar::zero();
        for k in (0..n).rev() {
            acc = &acc + &self.v[k];
            suffix[k] = acc.clone();
        }
        Ok(DeltaPreimage {
            series: SampledSeries { v: suffix },
            certificate,
        })
    }
}
