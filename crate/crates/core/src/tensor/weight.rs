use nalgebra::{DMatrix, DVector};
use num::complex::Complex64;

use crate::error::{check_dim, Error, Result};
use crate::series::VectorSeries;

use super::SymCoeff;

/// Inner product `<x, y>_W = y* W x` on `C^d`, extended to tensor powers slotwise.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedInnerProduct {
    dim: usize,
    kind: Kind,
}

#[derive(Clone, Debug, PartialEq)]
enum Kind {
    Identity,
    Diagonal(Vec<f64>),
    /// Weight matrix and its lower Cholesky factor `L`, `W = L L*`.
    Matrix(DMatrix<Complex64>, DMatrix<Complex64>),
}

impl WeightedInnerProduct {
    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            kind: Kind::Identity,
        }
    }

    pub fn diagonal(weights: &[f64]) -> Result<Self> {
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(Self {
            dim: weights.len(),
            kind: Kind::Diagonal(weights.to_vec()),
        })
    }

    pub fn matrix(weight: DMatrix<Complex64>) -> Result<Self> {
        if !weight.is_square() {
            return Err(Error::InvalidSpec("weight matrix must be square".into()));
        }
        let scale = weight.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let skew = (&weight - weight.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if !scale.is_finite() || skew > 1e-12 * scale.max(1.0) {
            return Err(Error::InvalidSpec("weight matrix must be Hermitian".into()));
        }
        let eigen = weight.clone().symmetric_eigen().eigenvalues;
        if eigen.iter().any(|&e| !(e > 0.0)) {
            return Err(Error::NotPositiveDefinite);
        }
        let factor = weight.clone().cholesky().ok_or(Error::NotPositiveDefinite)?.l();
        Ok(Self {
            dim: weight.nrows(),
            kind: Kind::Matrix(weight, factor),
        })
    }

    /// Row-major complex weight matrix.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let d = rows.len();
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidSpec("weight matrix must be square".into()));
        }
        Self::matrix(DMatrix::from_fn(d, d, |i, j| rows[i][j]))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_identity(&self) -> bool {
        match &self.kind {
            Kind::Identity => true,
            Kind::Diagonal(w) => w.iter().all(|&x| x == 1.0),
            Kind::Matrix(..) => false,
        }
    }

    pub fn weight_matrix(&self) -> DMatrix<Complex64> {
        match &self.kind {
            Kind::Identity => DMatrix::identity(self.dim, self.dim),
            Kind::Diagonal(w) => DMatrix::from_diagonal(&DVector::from_iterator(
                self.dim,
                w.iter().map(|&x| Complex64::new(x, 0.0)),
            )),
            Kind::Matrix(w, _) => w.clone(),
        }
    }

    /// Lower triangular `L` with `W = L L*`.
    pub fn factor(&self) -> DMatrix<Complex64> {
        match &self.kind {
            Kind::Identity => DMatrix::identity(self.dim, self.dim),
            Kind::Diagonal(w) => DMatrix::from_diagonal(&DVector::from_iterator(
                self.dim,
                w.iter().map(|&x| Complex64::new(x.sqrt(), 0.0)),
            )),
            Kind::Matrix(_, l) => l.clone(),
        }
    }

    /// `sqrt(x* W x)`.
    pub fn vector_norm(&self, x: &[Complex64]) -> Result<f64> {
        check_dim(self.dim, x.len())?;
        let v = DVector::from_column_slice(x);
        Ok((self.factor().adjoint() * v).norm())
    }

    /// Norm of `w` as a functional `x -> sum_i w_i x_i`, i.e. `|conj(L)^{-1} w|`.
    pub fn dual_norm(&self, w: &[Complex64]) -> Result<f64> {
        check_dim(self.dim, w.len())?;
        let v = DVector::from_column_slice(w);
        let lbar = self.factor().map(|z| z.conj());
        let y = lbar.solve_lower_triangular(&v).ok_or(Error::NotPositiveDefinite)?;
        Ok(y.norm())
    }

    /// Rows of the substitution `w = conj(L) w~` that turns weighted norms
    /// into identity norms.
    pub fn substitution(&self) -> Vec<Vec<Complex64>> {
        let lbar = self.factor().map(|z| z.conj());
        (0..self.dim).map(|i| lbar.row(i).iter().copied().collect()).collect()
    }

    /// Coefficients of `w~ -> p(conj(L) w~)`; their identity norm is the weighted norm of `p`.
    pub fn transform(&self, phi: &SymCoeff<Complex64>) -> Result<SymCoeff<Complex64>> {
        check_dim(self.dim, phi.dim())?;
        match &self.kind {
            Kind::Identity => Ok(phi.clone()),
            Kind::Diagonal(w) => {
                let roots: Vec<f64> = w.iter().map(|x| x.sqrt()).collect();
                let mut out = SymCoeff::zero(phi.dim(), phi.degree());
                for (m, c) in phi.coeffs() {
                    let s: f64 = m.exps().zip(&roots).map(|(e, r)| r.powi(e as i32)).product();
                    out.push(m.clone(), c * s);
                }
                Ok(out)
            }
            Kind::Matrix(..) => {
                let n = phi.degree();
                let map = VectorSeries::linear(self.dim, &self.substitution(), n)?;
                let p = phi.to_series(n).compose(&map)?;
                Ok(SymCoeff::from_series(&p, n))
            }
        }
    }
}
