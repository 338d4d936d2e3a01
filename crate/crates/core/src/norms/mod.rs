//! Graded norms on polynomials over the dual space and the bound checks built on them.
//!
//! For `p(w) = sum_n <w^{(x)n}, phi^(n)>` and a weight on `C^d`:
//!
//! ```text
//! ||p||_{l,alpha} = sum_n (n!)^{1/alpha} 2^{l n} ||phi^(n)||          (coefficient norm)
//! n_{l,alpha}(p)  = sup_w |p(w)| exp(-2^{-l} ||w||^alpha)              (sup norm, estimated)
//! ```
//!
//! Every check returns a [`BoundReport`]. Constants that the theory only
//! asserts to exist (operator envelopes, Appell growth constants) are
//! measured on the built truncation, so each report is evidence about that
//! truncation and nothing more.

mod checks;
mod report;
mod sup;
mod sweep;

use num::complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::{ln_factorial, Scalar};
use crate::series::VectorSeries;
use crate::sheffer::PolynomialOnDual;
use crate::tensor::{sym_norm, WeightedInnerProduct};

pub use checks::{appell_l_prime, appell_condition_check, embedding_check, operator_bound_check, reverse_l_prime, forward_l_prime};
pub use report::{BoundReport, BreakdownRow};
pub use sup::{sup_norm_estimate, SupConfig};
pub use sweep::{
    block_norms, divergence_sweep, quasi_holo_probe, DivergenceTable, ProbeReport, SweepRow, Verdict,
};

/// Order `alpha > 0`, level `l` and the weight defining `||phi^(n)||`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedNorm {
    alpha: f64,
    l: u32,
    weight: WeightedInnerProduct,
}

impl GradedNorm {
    pub fn new(alpha: f64, l: u32, weight: WeightedInnerProduct) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::Precondition(format!("order must be positive, got {alpha}")));
        }
        Ok(Self { alpha, l, weight })
    }

    pub fn identity(dim: usize, alpha: f64, l: u32) -> Result<Self> {
        Self::new(alpha, l, WeightedInnerProduct::identity(dim))
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn weight(&self) -> &WeightedInnerProduct {
        &self.weight
    }

    pub fn with_l(&self, l: u32) -> Self {
        Self { l, ..self.clone() }
    }

    /// `(n!)^{1/alpha} 2^{l n}`.
    pub fn degree_factor(&self, n: usize) -> f64 {
        (ln_factorial(n) / self.alpha + (self.l as f64) * (n as f64) * std::f64::consts::LN_2).exp()
    }
}

/// `||p||_{l,alpha}`.
pub fn coeff_norm<S: Scalar>(p: &PolynomialOnDual<S>, g: &GradedNorm) -> Result<f64> {
    let mut acc = 0.0;
    for (n, part) in p.parts().iter().enumerate() {
        if !part.is_zero() {
            acc += g.degree_factor(n) * sym_norm(part, &g.weight)?;
        }
    }
    Ok(acc)
}

/// `A` written in coordinates where the weighted norm is Euclidean:
/// `x~ -> L* A(L^{-*} x~)`.
pub(crate) fn in_unit_coordinates(a: &VectorSeries<Complex64>, weight: &WeightedInnerProduct) -> Result<VectorSeries<Complex64>> {
    if weight.is_identity() {
        return Ok(a.clone());
    }
    let lstar = weight.factor().adjoint();
    let inv = lstar.clone().try_inverse().ok_or(Error::NotPositiveDefinite)?;
    let d = a.dim_in();
    let rows = |m: &nalgebra::DMatrix<Complex64>| -> Vec<Vec<Complex64>> {
        (0..d).map(|i| m.row(i).iter().copied().collect()).collect()
    };
    let inner = VectorSeries::linear(d, &rows(&inv), a.max_degree())?;
    let outer = VectorSeries::linear(d, &rows(&lstar), a.max_degree())?;
    outer.compose(&a.compose(&inner)?)
}

#[cfg(test)]
mod tests;
