//! Symmetric tensor coefficients in monomial form.
//!
//! A [`SymCoeff`] of degree `n` over `C^d` stores one coefficient per
//! multi-index `beta` with `|beta| = n`. It stands for the symmetric tensor
//! whose pairing with a power of a vector is a homogeneous polynomial:
//!
//! ```text
//! <w^{(x)n}, phi> = sum_beta c_beta w^beta
//! ```
//!
//! Primal and dual tensors use the same type. The conventions are:
//!
//! | quantity                         | formula in coefficients                                  |
//! |----------------------------------|----------------------------------------------------------|
//! | dense entry at slots `i_1..i_n`  | `c_beta beta!/n!`, `beta` counting the slots              |
//! | squared norm (identity weight)   | `sum_beta (beta!/n!) abs(c_beta)^2`                       |
//! | product `theta (.) eta`          | polynomial product of the coefficient maps                |
//! | dual pairing `<t, c>`            | `sum_beta t_beta c_beta beta!/n!`                         |
//! | contraction of `t` (deg k) into `c` (deg n) | `r_delta = ((n-k)!/n!) sum_gamma t_gamma c_{delta+gamma} (delta+gamma)!/delta!` |
//!
//! The contraction is characterised by `<g (.) t, c> = <g, contract(t, c)>`
//! for every `g` of degree `n - k`; the dense oracle in the tests pins it.
//!
//! A non-identity [`WeightedInnerProduct`] `W = L L*` is handled by mapping
//! coefficients through the Cholesky factor once and then using the identity
//! formulas.

mod dense;
mod json;
mod weight;

pub use dense::{DenseTensor, DEFAULT_DENSE_BUDGET};
pub use json::SymCoeffDoc;
pub use weight::WeightedInnerProduct;

use std::collections::BTreeMap;

use num::complex::Complex64;

use crate::error::{check_dim, Error, Result};
use crate::index::MultiIndex;
use crate::scalar::{factorial, factorial_f64, ln_factorial, Scalar};
use crate::series::Series;

#[derive(Clone, Debug, PartialEq)]
pub struct SymCoeff<S> {
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<MultiIndex, S>,
}

impl<S: Scalar> SymCoeff<S> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Self {
            dim,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// Degree-0 tensor holding a single scalar.
    pub fn scalar(dim: usize, c: S) -> Self {
        let mut t = Self::zero(dim, 0);
        t.push(MultiIndex::zero(dim), c);
        t
    }

    pub fn from_terms<I>(dim: usize, degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, S)>,
    {
        let mut t = Self::zero(dim, degree);
        for (m, c) in terms {
            check_dim(dim, m.dim())?;
            if m.degree() != degree {
                return Err(Error::InvalidIndex(format!(
                    "index {:?} has degree {}, expected {degree}",
                    m.to_vec(),
                    m.degree()
                )));
            }
            t.push(m, c);
        }
        Ok(t)
    }

    /// The degree-`n` homogeneous part of a series.
    pub fn from_series(s: &Series<S>, n: usize) -> Self {
        let mut t = Self::zero(s.dim(), n);
        for (m, c) in s.homogeneous(n) {
            t.push(m.clone(), c.clone());
        }
        t
    }

    pub fn to_series(&self, max_degree: usize) -> Series<S> {
        Series::from_terms(
            self.dim,
            max_degree.max(self.degree),
            self.coeffs.iter().map(|(m, c)| (m.clone(), c.clone())),
        )
        .expect("degree and dim are consistent")
    }

    fn push(&mut self, m: MultiIndex, c: S) {
        let v = match self.coeffs.remove(&m) {
            Some(old) => old + c,
            None => c,
        };
        if !v.is_zero() {
            self.coeffs.insert(m, v);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&MultiIndex, &S)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, m: &MultiIndex) -> S {
        self.coeffs.get(m).cloned().unwrap_or_else(S::zero)
    }

    pub fn coeff_of(&self, exps: &[usize]) -> S {
        self.coeff(&MultiIndex::new(exps))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> SymCoeff<T> {
        let mut out = SymCoeff::zero(self.dim, self.degree);
        for (m, c) in &self.coeffs {
            out.push(m.clone(), f(c));
        }
        out
    }

    pub fn scale(&self, k: &S) -> Self {
        self.map(|c| c.clone() * k.clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.coeffs {
            out.push(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.map(|c| -c.clone()))
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        check_dim(self.dim, other.dim)?;
        if self.degree != other.degree {
            return Err(Error::Precondition(format!(
                "degree mismatch: {} vs {}",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    /// `<w^{(x)n}, self>`.
    pub fn pair(&self, point: &[S]) -> Result<S> {
        check_dim(self.dim, point.len())?;
        Ok(self
            .coeffs
            .iter()
            .fold(S::zero(), |acc, (m, c)| acc + c.clone() * m.eval(point)))
    }

    /// Bilinear pairing `sum t_beta c_beta beta!/n!` between tensors of equal degree.
    pub fn dual_pair(&self, other: &Self) -> Result<S> {
        self.check_same(other)?;
        let nf: S = factorial(self.degree);
        let mut acc = S::zero();
        for (m, t) in &self.coeffs {
            if let Some(c) = other.coeffs.get(m) {
                acc = acc + t.clone() * c.clone() * m.factorial::<S>();
            }
        }
        Ok(acc / nf)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for (m, c) in &self.coeffs {
            worst = worst.max((c.clone() - other.coeff(m)).modulus());
        }
        for (m, c) in &other.coeffs {
            if !self.coeffs.contains_key(m) {
                worst = worst.max(c.modulus());
            }
        }
        worst
    }
}

/// Symmetric product `theta (.) eta`, of degree `k + m`.
pub fn sym_product<S: Scalar>(theta: &SymCoeff<S>, eta: &SymCoeff<S>) -> Result<SymCoeff<S>> {
    check_dim(theta.dim, eta.dim)?;
    let mut out = SymCoeff::zero(theta.dim, theta.degree + eta.degree);
    for (a, x) in &theta.coeffs {
        for (b, y) in &eta.coeffs {
            out.push(a.add(b), x.clone() * y.clone());
        }
    }
    Ok(out)
}

/// Contracts the dual tensor `theta` (degree `k`) into `phi` (degree `n >= k`).
pub fn sym_contract<S: Scalar>(theta: &SymCoeff<S>, phi: &SymCoeff<S>) -> Result<SymCoeff<S>> {
    check_dim(theta.dim, phi.dim)?;
    let (k, n) = (theta.degree, phi.degree);
    if k > n {
        return Err(Error::Precondition(format!(
            "cannot contract degree {k} into degree {n}"
        )));
    }
    let mut out = SymCoeff::zero(phi.dim, n - k);
    for (g, t) in &theta.coeffs {
        for (b, c) in &phi.coeffs {
            if let Some(d) = b.checked_sub(g) {
                let w = falling_ratio::<S>(b, g);
                out.push(d, t.clone() * c.clone() * w);
            }
        }
    }
    let scale = factorial::<S>(n - k) / factorial::<S>(n);
    Ok(out.scale(&scale))
}

/// `beta! / (beta - gamma)!` for `gamma <= beta`.
fn falling_ratio<S: Scalar>(beta: &MultiIndex, gamma: &MultiIndex) -> S {
    let mut acc = S::one();
    for (b, g) in beta.exps().zip(gamma.exps()) {
        for j in (b - g + 1)..=b {
            acc = acc * S::from_i64(j as i64);
        }
    }
    acc
}

/// Hilbert norm of `phi` under the weight `w`.
pub fn sym_norm<S: Scalar>(phi: &SymCoeff<S>, w: &WeightedInnerProduct) -> Result<f64> {
    check_dim(w.dim(), phi.dim)?;
    let phi = phi.map(|c| c.to_c64());
    let phi = if w.is_identity() { phi } else { w.transform(&phi)? };
    Ok(identity_norm_sq(&phi).sqrt())
}

/// Norm under the identity weight.
pub fn sym_norm_identity<S: Scalar>(phi: &SymCoeff<S>) -> f64 {
    identity_norm_sq(&phi.map(|c| c.to_c64())).sqrt()
}

fn identity_norm_sq(phi: &SymCoeff<Complex64>) -> f64 {
    phi.coeffs.iter().map(|(m, c)| slot_weight(m) * c.norm_sqr()).sum()
}

/// `beta!/|beta|!`, the squared norm of the symmetrised basis tensor.
pub(crate) fn slot_weight(m: &MultiIndex) -> f64 {
    let n = m.degree();
    if n <= 170 {
        m.factorial_f64() / factorial_f64(n)
    } else {
        (m.exps().map(ln_factorial).sum::<f64>() - ln_factorial(n)).exp()
    }
}
