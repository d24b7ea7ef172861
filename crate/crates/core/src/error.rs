//! Crate-wide error type.

use crate::scalar::Scalar;
use std::fmt;

/// Everything that can go wrong across the library, with enough payload to
/// report a meaningful diagnostic without re-running the computation.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An operation needed more samples than the window provides.
    WindowTooShort { needed: usize, got: usize },
    /// Partial sums fail the Cauchy criterion at the requested tolerance.
    NotConvergent { spread: f64, tol: f64 },
    /// No tail-smallness certificate could be issued for a delta preimage.
    NoConvergenceCertificate { best_bound: f64, tail_tol: f64 },
    /// Simultaneous root iteration stalled; payload is the best residual seen.
    RootFindingDidNotConverge { residual: f64 },
    /// The zero polynomial has no roots, no degree and no monic form.
    ZeroPolynomial,
    /// Root finding requires degree at least one.
    ConstantPolynomial,
    /// Division by a zero polynomial or a zero scalar denominator.
    ZeroDenominator,
    /// Partial fractions in t require the denominator not to vanish at t = 0.
    DenominatorVanishesAtZero,
    /// Evaluation of a rational function at one of its poles.
    EvalAtPole,
    /// An exact-only operation received floating point data.
    NotExact { op: &'static str },
    /// No linear recurrence of order at most `deg_max` fits the window.
    NotRecurrent { deg_max: usize },
    /// The proposed annihilator does not annihilate the series on the window.
    AnnihilatorMismatch,
    /// Structural degree cap exceeded while searching for a minimal polynomial.
    DegreeCapExceeded { cap: usize },
    /// A float root sits too close to 1 to decide summability either way.
    AmbiguousSpectrum { re: f64, im: f64, distance: f64 },
    /// 1 lies in the spectrum, so no summation consistent with the shift
    /// axiom can assign this series a value.
    NotSummable,
    /// The generating function has a pole at t = 1.
    PoleAtOne,
    /// Cesaro averages fail the Cauchy criterion at the requested tolerance.
    NotC1Summable { spread: f64, tol: f64 },
    /// The window does not repeat with the claimed period.
    NotPeriodic { period: usize },
    /// Sum over one full period must vanish for the periodic formula.
    NonzeroPeriodSum { sum: Scalar },
    /// The ambient subspace must avoid 1 in every spectrum.
    NotInQ1,
    /// Regularization was requested for a series that is already summable.
    RegularizationNotNeeded,
    /// The observable has nonzero mean, so orbital summability claims fail.
    MeanNonzero { mean: Scalar },
    /// The zero observable carries no decidable content.
    ZeroInput,
    /// Malformed finite dynamical system description.
    InvalidSystem { detail: String },
    /// The lacunarity computation's distinct-orbit hypothesis fails.
    KappaHypothesis { detail: String },
    /// The proposed solution does not satisfy the cohomological equation.
    NotASolution,
    /// A linear system that should have been solvable was singular.
    SingularSystem { context: &'static str },
    /// Unparsable scalar literal.
    InvalidScalar { input: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::WindowTooShort { needed, got } => {
                write!(f, "window too short: needed {needed} samples, got {got}")
            }
            Error::NotConvergent { spread, tol } => {
                write!(
                    f,
                    "partial sums not convergent: spread {spread:e} exceeds tolerance {tol:e}"
                )
            }
            Error::NoConvergenceCertificate {
                best_bound,
                tail_tol,
            } => {
                write!(
                    f,
                    "no tail certificate: best bound {best_bound:e} exceeds {tail_tol:e}"
                )
            }
            Error::RootFindingDidNotConverge { residual } => {
                write!(f, "root iteration did not converge (residual {residual:e})")
            }
            Error::ZeroPolynomial => write!(f, "zero polynomial"),
            Error::ConstantPolynomial => write!(f, "polynomial of degree zero has no roots"),
            Error::ZeroDenominator => write!(f, "division by zero"),
            Error::DenominatorVanishesAtZero => {
                write!(f, "denominator vanishes at t = 0")
            }
            Error::EvalAtPole => write!(f, "evaluation at a pole"),
            Error::NotExact { op } => write!(f, "{op} requires exact arithmetic"),
            Error::NotRecurrent { deg_max } => {
                write!(
                    f,
                    "no linear recurrence of order <= {deg_max} fits the window"
                )
            }
            Error::AnnihilatorMismatch => {
                write!(f, "polynomial does not annihilate the series on the window")
            }
            Error::DegreeCapExceeded { cap } => {
                write!(f, "minimal polynomial search exceeded degree cap {cap}")
            }
            Error::AmbiguousSpectrum { re, im, distance } => {
                write!(
                    f,
                    "float spectrum point {re}+{im}i lies within {distance:e} of 1; refusing to decide"
                )
            }
            Error::NotSummable => write!(f, "1 lies in the spectrum: not summable"),
            Error::PoleAtOne => write!(f, "generating function has a pole at t = 1"),
            Error::NotC1Summable { spread, tol } => {
                write!(
                    f,
                    "Cesaro averages not settled: spread {spread:e} exceeds tolerance {tol:e}"
                )
            }
            Error::NotPeriodic { period } => {
                write!(f, "window is not periodic with period {period}")
            }
            Error::NonzeroPeriodSum { sum } => {
                write!(f, "sum over one period is {sum}, expected 0")
            }
            Error::NotInQ1 => write!(f, "ambient subspace contains 1 in a spectrum"),
            Error::RegularizationNotNeeded => {
                write!(f, "series is already summable; nothing to regularize")
            }
            Error::MeanNonzero { mean } => {
                write!(f, "observable has nonzero mean {mean}")
            }
            Error::ZeroInput => write!(f, "zero observable"),
            Error::InvalidSystem { detail } => write!(f, "invalid system: {detail}"),
            Error::KappaHypothesis { detail } => {
                write!(f, "lacunarity hypothesis fails: {detail}")
            }
            Error::NotASolution => write!(f, "candidate does not solve the equation"),
            Error::SingularSystem { context } => {
                write!(f, "unexpected singular linear system in {context}")
            }
            Error::InvalidScalar { input } => write!(f, "cannot parse scalar from {input:?}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
