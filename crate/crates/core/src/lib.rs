//! Exact analysis of divergent series and cohomological equations.
//!
//! The library has two halves that meet at the shift axiom
//! sigma(x) = x_0 + sigma(Tx):
//!
//! * Quasiexponential series (finite head plus polynomial-times-exponential
//!   modes): recurrence detection, normal forms, spectra, the unique
//!   shift-axiom value on the 1-free class, Euler and Cesaro methods,
//!   extension obstructions and polynomial regularization. Rational data
//!   stays rational end to end; floating point enters only where roots are
//!   irrational or where long averaging windows make exact arithmetic
//!   unaffordable, and every such value is tagged.
//!
//! * The cohomological equation psi(t) - psi(qt) = theta(t) for
//!   trigonometric polynomials over the expanding circle map: exact
//!   solvability verdicts with certificates, the finite-system analogue on
//!   functional graphs, and an ergodic evidence layer (orbital partial
//!   sums, exact L2 growth, lacunarity, level sets, Birkhoff probes) for
//!   the almost-everywhere statements that no finite computation can
//!   certify.

pub mod coboundary;
pub mod ergodic;
pub mod error;
pub mod linalg;
pub mod poly;
pub mod quasiexp;
pub mod scalar;
pub mod series;
pub mod summation;
pub mod trig;

pub use coboundary::{
    nonmeasurability_verdict, q_orbit_decomposition, solve_finite_ce, solve_trig_ce, CeReason,
    CeVerdict, FiniteDynSys, FiniteVerdict, QOrbitDecomposition,
};
pub use ergodic::{
    birkhoff_average, l2_norm_orbital, l2_norm_rows, lacunarity_kappa, level_set_measure,
    level_set_rows, orbit_point, orbit_step, orbital_partial_sum, orbital_report,
    summation_from_solution, BirkhoffSample, KappaReport, L2Norm, OrbitalReport,
    OrbitalReportOptions, OrbitalSeriesSpec, OrbitalSummation, OrbitalVerdict,
};
pub use error::{Error, Result};
pub use poly::{
    binom_poly, find_roots, from_binomial, partial_fractions, squarefree_decomposition,
    to_binomial, PartialFractions, PfTerm, Poly, RationalFn, RootSet,
};
pub use quasiexp::{
    decompose, detect_recurrence, epsilon1, epsilon1_with_annihilator, extension_obstruction,
    falling_binom, regularize, theta_xl, ExtensionReport, Mode, QuasiExpSeries, Regularization,
    Spectrum, SubspaceBasis,
};
pub use scalar::{best_rational, Scalar};
pub use series::{DeltaPreimage, Method, SampledSeries, SumValue, TailCertificate};
pub use summation::{
    cesaro1, euler_sum, generating_function, periodic_sum, radius, GeneratingFunction,
};
pub use trig::TrigPoly;
