use num::complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::binomial_f64;
use crate::tensor::{sym_product, SymCoeff};

use super::ShefferSequence;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BinomialReport {
    /// Largest `abs(lhs - rhs) / max(1, abs(lhs))` over coefficients, degrees and trials.
    pub max_deviation: f64,
    pub trials: usize,
    pub max_degree: usize,
}

/// Compares `S^(n)(w + z)` with `sum_k C(n,k) S^(k)(w) (.) S^(n-k)(z)` at
/// random complex points with components in the unit box.
pub fn binomial_check<R: Rng>(seq: &ShefferSequence<Complex64>, trials: usize, rng: &mut R) -> Result<BinomialReport> {
    if !seq.is_basic() {
        return Err(Error::Precondition("binomial identity needs rho = 1".into()));
    }
    let d = seq.dim();
    let top = seq.max_degree();
    let mut worst: f64 = 0.0;
    let point = |rng: &mut R| -> Vec<Complex64> {
        (0..d)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect()
    };
    for _ in 0..trials {
        let w = point(rng);
        let z = point(rng);
        let sum: Vec<Complex64> = w.iter().zip(&z).map(|(a, b)| a + b).collect();
        let at_w: Vec<SymCoeff<Complex64>> = (0..=top).map(|n| seq.sequence_tensor(n, &w)).collect::<Result<_>>()?;
        let at_z: Vec<SymCoeff<Complex64>> = (0..=top).map(|n| seq.sequence_tensor(n, &z)).collect::<Result<_>>()?;
        for n in 0..=top {
            let lhs = seq.sequence_tensor(n, &sum)?;
            let mut rhs = SymCoeff::zero(d, n);
            for k in 0..=n {
                let term = sym_product(&at_w[k], &at_z[n - k])?;
                rhs = rhs.add(&term.scale(&Complex64::new(binomial_f64(n, k), 0.0)))?;
            }
            for (m, c) in lhs.coeffs() {
                worst = worst.max((c - rhs.coeff(m)).norm() / c.norm().max(1.0));
            }
            for (m, c) in rhs.coeffs() {
                if lhs.coeff(m) == Complex64::new(0.0, 0.0) {
                    worst = worst.max(c.norm());
                }
            }
        }
    }
    Ok(BinomialReport {
        max_deviation: worst,
        trials,
        max_degree: top,
    })
}
