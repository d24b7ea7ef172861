//! Shared generators and oracle arithmetic for the integration suites.
//!
//! The oracles here deliberately avoid the library's own linear algebra:
//! plain Gaussian elimination over exact complex rationals, written
//! directly against the num types, so that agreement between the two
//! paths means something.

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use divsum_core::{Mode, Poly, QuasiExpSeries, SampledSeries, Scalar, TrigPoly};

pub type CRat = Complex<BigRational>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn crat(s: &Scalar) -> CRat {
    s.exact_value().expect("oracle inputs stay exact").clone()
}

/// Any solution of `a x = b`, or None when the system is inconsistent.
/// Free variables are set to zero.
pub fn exact_solve(mut a: Vec<Vec<CRat>>, mut b: Vec<CRat>) -> Option<Vec<CRat>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        b.swap(r, p);
        let inv = CRat::one() / a[r][c].clone();
        for x in a[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        b[r] = b[r].clone() * inv;
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let t = a[r][j].clone() * f.clone();
                    a[i][j] = a[i][j].clone() - t;
                }
                let t = b[r].clone() * f;
                b[i] = b[i].clone() - t;
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    for i in r..rows {
        if !b[i].is_zero() {
            return None;
        }
    }
    let mut x = vec![CRat::zero(); cols];
    for (row, &c) in pivot_cols.iter().enumerate() {
        x[c] = b[row].clone();
    }
    Some(x)
}

/// Rank of the window's Hankel system up to shift `cap`: the dimension of
/// span{w, Tw, ..., T^cap w} seen through length-(len - cap) truncations.
/// For a window of a recurrent sequence with order <= cap and length
/// >= 2 cap + 2, this is exactly the minimal recurrence order.
pub fn hankel_rank(w: &[Scalar], cap: usize) -> usize {
    assert!(
        w.len() >= 2 * cap + 2,
        "window too short for the rank oracle"
    );
    let rows = w.len() - cap;
    let mut m: Vec<Vec<CRat>> = (0..rows)
        .map(|i| (0..=cap).map(|j| crat(&w[i + j])).collect())
        .collect();
    let mut rank = 0;
    for c in 0..=cap {
        let Some(p) = (rank..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = CRat::one() / m[rank][c].clone();
        for x in m[rank].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows {
            if i != rank && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..=cap {
                    let t = m[rank][j].clone() * f.clone();
                    m[i][j] = m[i][j].clone() - t;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Simple points on the unit circle, none equal to 1.
pub fn unit_circle_pool() -> Vec<Scalar> {
    vec![
        Scalar::i(),
        -Scalar::i(),
        Scalar::from_int(-1),
        Scalar::from_gaussian(3, 5, 4, 5),
        Scalar::from_gaussian(3, 5, -4, 5),
        Scalar::from_gaussian(5, 13, 12, 13),
        Scalar::from_gaussian(5, 13, -12, 13),
    ]
}

/// Points strictly inside the unit disk.
pub fn inside_disk_pool() -> Vec<Scalar> {
    vec![
        Scalar::from_rational(1, 2),
        Scalar::from_rational(-1, 2),
        Scalar::from_gaussian(0, 1, 1, 2),
        Scalar::from_gaussian(0, 1, -1, 2),
        Scalar::from_rational(1, 3),
        Scalar::from_rational(-2, 3),
        Scalar::from_rational(3, 4),
        Scalar::from_gaussian(3, 10, 4, 10),
    ]
}

/// Points with modulus in (1, 3], none equal to 1.
pub fn outside_disk_pool() -> Vec<Scalar> {
    vec![
        Scalar::from_int(2),
        Scalar::from_int(-2),
        Scalar::from_int(3),
        Scalar::from_int(-3),
        Scalar::from_gaussian(0, 1, 2, 1),
        Scalar::from_rational(-3, 2),
        Scalar::from_gaussian(1, 1, 1, 1),
        Scalar::from_gaussian(3, 2, 2, 1),
    ]
}

pub fn small_rat(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::from_rational(rng.gen_range(-3..=3), rng.gen_range(1..=3))
}

pub fn small_nonzero_rat(rng: &mut ChaCha8Rng) -> Scalar {
    loop {
        let s = small_rat(rng);
        if !s.is_zero() {
            return s;
        }
    }
}

pub fn random_pi(rng: &mut ChaCha8Rng, max_deg: usize) -> Poly {
    let deg = rng.gen_range(0..=max_deg);
    let mut coeffs: Vec<Scalar> = (0..deg).map(|_| small_rat(rng)).collect();
    coeffs.push(small_nonzero_rat(rng));
    Poly::new(coeffs)
}

/// A random exact quasiexponential series with distinct mode bases drawn
/// from `pool` (which must avoid 1), optionally with a short head.
pub fn random_q1_series(
    rng: &mut ChaCha8Rng,
    pool: &[Scalar],
    max_modes: usize,
    max_deg: usize,
    allow_head: bool,
) -> QuasiExpSeries {
    let mut lambdas = pool.to_vec();
    lambdas.shuffle(rng);
    let count = rng.gen_range(1..=max_modes.min(lambdas.len()));
    let modes: Vec<Mode> = lambdas
        .into_iter()
        .take(count)
        .map(|lambda| Mode {
            lambda,
            pi: random_pi(rng, max_deg),
        })
        .collect();
    let head = if allow_head && rng.gen_bool(0.3) {
        (0..rng.gen_range(1..=2)).map(|_| small_rat(rng)).collect()
    } else {
        Vec::new()
    };
    QuasiExpSeries::new(head, modes)
}

/// A random monic integer polynomial (constant coefficients in -3..=3)
/// and a window of the recurrence it drives from random integer seeds.
pub fn random_recurrence_window(rng: &mut ChaCha8Rng, window_len: usize) -> (Poly, SampledSeries) {
    loop {
        let deg = rng.gen_range(1..=5);
        let mut coeffs: Vec<Scalar> = (0..deg)
            .map(|_| Scalar::from_int(rng.gen_range(-3..=3)))
            .collect();
        coeffs.push(Scalar::one());
        let phi = Poly::new(coeffs);
        let mut w: Vec<Scalar> = (0..deg)
            .map(|_| Scalar::from_int(rng.gen_range(-5..=5)))
            .collect();
        while w.len() < window_len {
            let mut next = Scalar::zero();
            for j in 0..deg {
                next = &next - &(&phi.coeff(j) * &w[w.len() - deg + j]);
            }
            w.push(next);
        }
        if w.iter().any(|x| !x.is_zero()) {
            return (phi, SampledSeries::new(w));
        }
    }
}

/// A random zero-mean trig polynomial with frequencies <= 12 and exact
/// rational coefficients; at least one term.
pub fn random_zero_mean_trig(rng: &mut ChaCha8Rng) -> TrigPoly {
    loop {
        let mut freqs: Vec<u64> = (1..=12).collect();
        freqs.shuffle(rng);
        let count = rng.gen_range(1..=5);
        let terms: Vec<(u64, Scalar, Scalar)> = freqs
            .into_iter()
            .take(count)
            .map(|f| (f, small_rat(rng), small_rat(rng)))
            .collect();
        let theta = TrigPoly::from_terms(Scalar::zero(), terms);
        if !theta.is_zero() {
            return theta;
        }
    }
}

/// The q-free part of a frequency and its ladder index: nu = p * q^i.
pub fn q_free_part(nu: u64, q: u64) -> (u64, u32) {
    let mut p = nu;
    let mut i = 0;
    while p % q == 0 {
        p /= q;
        i += 1;
    }
    (p, i)
}
