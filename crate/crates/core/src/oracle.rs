//! Monte-Carlo check of the closed-form sphere moments, plus exact
//! consistency identities between moments.

use num_traits::{One, ToPrimitive};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::geometry::{sphere_moment, IdentityCheck};
use crate::poly::Monomial;
use crate::scalar::{rational_to_f64, Rational};

const CHUNK: u64 = 1 << 16;

/// Exponents compared against sampling.
pub const ORACLE_EXPONENTS: [[u32; 4]; 8] = [
    [2, 0, 0, 0],
    [0, 0, 0, 2],
    [1, 1, 0, 0],
    [4, 0, 0, 0],
    [2, 2, 0, 0],
    [2, 2, 2, 0],
    [4, 2, 0, 0],
    [6, 0, 0, 0],
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentEstimate {
    pub exponents: [u32; 4],
    pub exact: String,
    pub estimate: f64,
    pub std_error: f64,
    /// `|estimate − exact| / std_error`
    pub z: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleReport {
    pub samples: u64,
    pub seed: u64,
    pub sigmas: f64,
    pub moments: Vec<MomentEstimate>,
    pub consistency: Vec<IdentityCheck>,
    pub pass: bool,
}

/// Sums of `x^α` and `(x^α)²` over one chunk of uniform points on `S³(√2)`.
fn chunk_sums(seed: u64, chunk: u64, count: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    let mut acc = vec![(0.0, 0.0); ORACLE_EXPONENTS.len()];
    for _ in 0..count {
        let g: [f64; 4] = std::array::from_fn(|_| StandardNormal.sample(&mut rng));
        let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        let x: [f64; 4] = std::array::from_fn(|i| g[i] / norm * std::f64::consts::SQRT_2);
        for (slot, e) in acc.iter_mut().zip(ORACLE_EXPONENTS.iter()) {
            let v: f64 = (0..4).map(|i| x[i].powi(e[i] as i32)).product();
            slot.0 += v;
            slot.1 += v * v;
        }
    }
    acc
}

fn factorial(n: u32) -> Rational {
    (1..=n).fold(Rational::one(), |a, i| a * Rational::from_integer(i.into()))
}

/// `(Σxᵢ²)^d = 2^d` on the sphere, expanded by the multinomial theorem.
pub fn moment_consistency_checks(max_half_degree: u32) -> Vec<IdentityCheck> {
    let mut out = Vec::new();
    for d in 1..=max_half_degree {
        let sum = Monomial::of_degree(d).iter().fold(Rational::from_integer(0.into()), |acc, b| {
            let coeff = b.0.iter().fold(factorial(d), |c, &e| c / factorial(e));
            acc + coeff * sphere_moment(b.0.map(|e| 2 * e))
        });
        let expected = Rational::from_integer((1u64 << d).into());
        out.push(IdentityCheck::values(format!("mean of r^{} = 2^{d}", 2 * d), &sum, &expected));
    }
    let odd = Monomial::of_degree(3).iter().filter(|m| m.0.iter().any(|e| e % 2 == 1)).all(|m| sphere_moment(m.0) == Rational::from_integer(0.into()));
    out.push(IdentityCheck::values("odd moments vanish (degree 3)", &odd, &true));
    out
}

/// Compares sampled means with `sphere_moment` within `sigmas` standard errors.
pub fn oracle_check(samples: u64, seed: u64, sigmas: f64) -> OracleReport {
    let chunks = samples.div_ceil(CHUNK);
    let partial: Vec<Vec<(f64, f64)>> = (0..chunks)
        .into_par_iter()
        .map(|c| chunk_sums(seed, c, CHUNK.min(samples - c * CHUNK)))
        .collect();
    let n = samples as f64;
    let moments: Vec<MomentEstimate> = ORACLE_EXPONENTS
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let (s, s2) = partial.iter().fold((0.0, 0.0), |(a, b), p| (a + p[i].0, b + p[i].1));
            let mean = s / n;
            let var = (s2 / n - mean * mean).max(0.0) * n / (n - 1.0).max(1.0);
            let std_error = (var / n).sqrt();
            let exact = sphere_moment(*e);
            let diff = (mean - rational_to_f64(&exact)).abs();
            let z = if std_error > 0.0 { diff / std_error } else if diff == 0.0 { 0.0 } else { f64::INFINITY };
            MomentEstimate { exponents: *e, exact: exact.to_string(), estimate: mean, std_error, z, pass: z <= sigmas }
        })
        .collect();
    let consistency = moment_consistency_checks(5);
    let pass = moments.iter().all(|m| m.pass) && consistency.iter().all(|c| c.passed);
    OracleReport { samples, seed, sigmas, moments, consistency, pass }
}

/// Rounded float value of a moment, for display.
pub fn moment_f64(e: [u32; 4]) -> f64 {
    sphere_moment(e).to_f64().unwrap_or(f64::NAN)
}
