use num::complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sheffer::PolynomialOnDual;

use super::GradedNorm;

/// Sampling plan for [`sup_norm_estimate`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupConfig {
    /// Random directions on the weighted unit sphere.
    pub directions: usize,
    /// Uniform radial grid points on `[0, R*]`.
    pub radial: usize,
    /// `R*` is the larger root of `deg(p) ln r = 2^{-l} r^alpha - margin`.
    pub margin: f64,
    pub seed: u64,
}

impl Default for SupConfig {
    fn default() -> Self {
        Self {
            directions: 64,
            radial: 200,
            margin: 10.0,
            seed: 0,
        }
    }
}

/// Lower estimate of `sup_w |p(w)| exp(-2^{-l} ||w||^alpha)`.
///
/// Along each sampled direction `u` (`||u|| = 1` in the dual norm) the
/// radial profile `r -> |p(r u)| exp(-2^{-l} r^alpha)` is scanned on a grid
/// and the best cell is refined by golden-section search.
pub fn sup_norm_estimate<S: Scalar>(p: &PolynomialOnDual<S>, g: &GradedNorm, cfg: &SupConfig) -> Result<f64> {
    if cfg.directions == 0 || cfg.radial == 0 {
        return Err(Error::Precondition("empty sampling grid".into()));
    }
    crate::error::check_dim(g.weight().dim(), p.dim())?;
    let p = p.map(|c| c.to_c64());
    let Some(deg) = p.degree() else {
        return Ok(0.0);
    };
    let decay = (-(g.l() as f64) * std::f64::consts::LN_2).exp();
    let alpha = g.alpha();
    let profile = |q: &[Complex64], r: f64| -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in q.iter().rev() {
            acc = acc * r + c;
        }
        acc.norm() * (-decay * r.powf(alpha)).exp()
    };
    let r_max = radial_cutoff(deg, decay, alpha, cfg.margin);
    let mut best = p.parts()[0].coeff_of(&vec![0; p.dim()]).norm();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let rows = g.weight().substitution();
    for _ in 0..cfg.directions {
        let u = unit_direction(&mut rng, &rows);
        let q: Vec<Complex64> = p.parts().iter().map(|part| part.pair(&u)).collect::<Result<_>>()?;
        let step = r_max / cfg.radial as f64;
        let mut arg = 0;
        let mut top = profile(&q, 0.0);
        for i in 1..=cfg.radial {
            let v = profile(&q, step * i as f64);
            if v > top {
                top = v;
                arg = i;
            }
        }
        let lo = step * arg.saturating_sub(1) as f64;
        let hi = step * (arg + 1).min(cfg.radial) as f64;
        best = best.max(top).max(golden_max(|r| profile(&q, r), lo, hi));
    }
    Ok(best)
}

/// `conj(L) v` for `v` uniform on the Euclidean unit sphere of `C^d`, so the dual norm is 1.
fn unit_direction(rng: &mut ChaCha8Rng, rows: &[Vec<Complex64>]) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..rows.len())
        .map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    rows.iter()
        .map(|row| row.iter().zip(&v).map(|(a, b)| a * b).sum::<Complex64>() / norm)
        .collect()
}

/// Larger root of `c r^alpha - n ln r = margin`, beyond the peak of `r^n exp(-c r^alpha)`.
fn radial_cutoff(n: usize, c: f64, alpha: f64, margin: f64) -> f64 {
    let n = n.max(1) as f64;
    let h = |r: f64| c * r.powf(alpha) - n * r.ln() - margin;
    let mut lo = (n / (c * alpha)).powf(1.0 / alpha).max(1.0);
    let mut hi = 2.0 * lo;
    while h(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if h(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..60 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = f(x1);
        }
    }
    f1.max(f2)
}
