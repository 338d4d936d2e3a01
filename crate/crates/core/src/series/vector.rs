use crate::error::{check_dim, Error, Result};
use crate::index::MultiIndex;
use crate::scalar::Scalar;

use super::Series;

/// A map `C^{dim_in} -> C^{dim_out}` given by truncated series with zero
/// constant terms, e.g. `A(x) = sum_k A_k x^k` with `A_1 = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorSeries<S> {
    pub(crate) dim_in: usize,
    pub(crate) max_degree: usize,
    pub(crate) components: Vec<Series<S>>,
}

impl<S: Scalar> VectorSeries<S> {
    pub fn new(dim_in: usize, components: Vec<Series<S>>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Precondition("vector series needs a component".into()));
        }
        let mut max_degree = usize::MAX;
        for c in &components {
            check_dim(dim_in, c.dim())?;
            if !c.constant_term().is_zero() {
                return Err(Error::NonzeroConstant);
            }
            max_degree = max_degree.min(c.max_degree());
        }
        let components = components
            .into_iter()
            .map(|c| c.truncate(max_degree))
            .collect();
        Ok(Self {
            dim_in,
            max_degree,
            components,
        })
    }

    pub fn identity(dim: usize, max_degree: usize) -> Self {
        Self {
            dim_in: dim,
            max_degree,
            components: (0..dim).map(|i| Series::var(dim, i, max_degree)).collect(),
        }
    }

    /// Applies the same one-variable series to every coordinate: `A_i(x) = a(x_i)`.
    pub fn componentwise(a: &Series<S>, dim: usize) -> Result<Self> {
        check_dim(1, a.dim())?;
        let components = (0..dim)
            .map(|i| {
                let mut s = Series::zero(dim, a.max_degree());
                for (m, c) in a.terms() {
                    s.add_term(MultiIndex::unit(dim, i, m.degree()), c.clone());
                }
                s
            })
            .collect();
        Self::new(dim, components)
    }

    /// The linear map `x -> M x` for a row-major `dim_out x dim_in` matrix.
    pub fn linear(dim_in: usize, rows: &[Vec<S>], max_degree: usize) -> Result<Self> {
        let components = rows
            .iter()
            .map(|row| {
                check_dim(dim_in, row.len())?;
                let mut s = Series::zero(dim_in, max_degree);
                for (j, c) in row.iter().enumerate() {
                    s.add_term(MultiIndex::unit(dim_in, j, 1), c.clone());
                }
                Ok(s)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(dim_in, components)
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.components.len()
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn components(&self) -> &[Series<S>] {
        &self.components
    }

    /// Same components with the order raised or lowered to `max_degree`.
    pub fn with_max_degree(&self, max_degree: usize) -> Self {
        Self {
            dim_in: self.dim_in,
            max_degree,
            components: self.components.iter().map(|c| c.with_max_degree(max_degree)).collect(),
        }
    }

    pub fn truncate(&self, max_degree: usize) -> Self {
        Self {
            dim_in: self.dim_in,
            max_degree: max_degree.min(self.max_degree),
            components: self.components.iter().map(|c| c.truncate(max_degree)).collect(),
        }
    }

    /// True when `dim_in == dim_out` and the degree-1 part is exactly the identity.
    pub fn is_unit_linear(&self) -> bool {
        if self.dim_in != self.dim_out() || self.max_degree == 0 {
            return self.dim_in == self.dim_out();
        }
        self.components.iter().enumerate().all(|(i, c)| {
            (0..self.dim_in).all(|j| {
                let want = if i == j { S::one() } else { S::zero() };
                c.coeff(&MultiIndex::unit(self.dim_in, j, 1)) == want
            })
        })
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim_in, self.max_degree)
    }

    /// `self o inner`, i.e. `x -> self(inner(x))`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        check_dim(self.dim_in, inner.dim_out())?;
        if inner.components.iter().any(|c| !c.constant_term().is_zero()) {
            return Err(Error::NonzeroConstant);
        }
        let wide = inner.widen();
        let components = self
            .components
            .iter()
            .map(|c| Series::narrow(&c.compose_wide(&wide.components, inner.dim_in, inner.max_degree)))
            .collect();
        Self::new(inner.dim_in, components)
    }

    fn widen(&self) -> VectorSeries<S::Wide> {
        VectorSeries {
            dim_in: self.dim_in,
            max_degree: self.max_degree,
            components: self.components.iter().map(Series::widen).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim_out(), other.dim_out())?;
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.sub(b))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.dim_in, components)
    }

    /// Compositional inverse `B` with `A(B(x)) = B(A(x)) = x` up to the truncation.
    ///
    /// Writing `A = id + H`, the fixed point `B = id - H(B)` gains one correct
    /// degree per sweep because `H` starts at degree 2, so sweep `k` only needs
    /// terms up to degree `k`. The sweeps run in the wide field.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_unit_linear() {
            return Err(Error::NotUnitLinear);
        }
        let id = VectorSeries::<S::Wide>::identity(self.dim_in, self.max_degree);
        let h = self.widen().sub(&id)?;
        let mut b = id.clone();
        for k in 2..=self.max_degree {
            let step = h.truncate(k).compose(&b.truncate(k))?;
            b = id.sub(&step.with_max_degree(self.max_degree))?;
        }
        Ok(b.map(S::narrow))
    }

    pub fn eval(&self, point: &[S]) -> Result<Vec<S>> {
        self.components.iter().map(|c| c.eval(point)).collect()
    }

    /// Degree-`k` coefficients: `rows[i]` lists `(beta, a_{i,beta})` with `|beta| = k`.
    pub fn block(&self, k: usize) -> Vec<Vec<(MultiIndex, S)>> {
        self.components
            .iter()
            .map(|c| c.homogeneous(k).map(|(m, v)| (m.clone(), v.clone())).collect())
            .collect()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> VectorSeries<T> {
        VectorSeries {
            dim_in: self.dim_in,
            max_degree: self.max_degree,
            components: self.components.iter().map(|c| c.map(f)).collect(),
        }
    }
}
