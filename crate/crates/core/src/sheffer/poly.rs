use crate::error::{check_dim, Error, Result};
use crate::index::MultiIndex;
use crate::scalar::Scalar;
use crate::series::Series;
use crate::tensor::SymCoeff;

/// `p(w) = sum_n <w^{(x)n}, phi^(n)>`, one [`SymCoeff`] per degree `0..=max_degree`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialOnDual<S> {
    dim: usize,
    parts: Vec<SymCoeff<S>>,
}

impl<S: Scalar> PolynomialOnDual<S> {
    pub fn zero(dim: usize, max_degree: usize) -> Self {
        Self {
            dim,
            parts: (0..=max_degree).map(|n| SymCoeff::zero(dim, n)).collect(),
        }
    }

    pub fn from_parts(dim: usize, parts: Vec<SymCoeff<S>>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidSpec("a polynomial needs at least the degree-0 part".into()));
        }
        for (n, part) in parts.iter().enumerate() {
            check_dim(dim, part.dim())?;
            if part.degree() != n {
                return Err(Error::InvalidSpec(format!(
                    "part {n} has degree {}",
                    part.degree()
                )));
            }
        }
        Ok(Self { dim, parts })
    }

    pub fn from_series(s: &Series<S>) -> Self {
        Self {
            dim: s.dim(),
            parts: (0..=s.max_degree()).map(|n| SymCoeff::from_series(s, n)).collect(),
        }
    }

    pub fn to_series(&self) -> Series<S> {
        let terms = self
            .parts
            .iter()
            .flat_map(|p| p.coeffs().map(|(m, c)| (m.clone(), c.clone())));
        Series::from_terms(self.dim, self.max_degree(), terms).expect("parts are consistent")
    }

    /// `c * w^exps` with room for degrees up to `max_degree`.
    pub fn monomial(max_degree: usize, exps: &[usize], c: S) -> Result<Self> {
        let m = MultiIndex::new(exps);
        if m.degree() > max_degree {
            return Err(Error::DegreeOverflow {
                degree: m.degree(),
                max: max_degree,
            });
        }
        let mut p = Self::zero(exps.len(), max_degree);
        let n = m.degree();
        p.parts[n] = SymCoeff::from_terms(exps.len(), n, [(m, c)])?;
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_degree(&self) -> usize {
        self.parts.len() - 1
    }

    pub fn parts(&self) -> &[SymCoeff<S>] {
        &self.parts
    }

    pub fn part(&self, n: usize) -> Option<&SymCoeff<S>> {
        self.parts.get(n)
    }

    pub(crate) fn set_part(&mut self, part: SymCoeff<S>) {
        let n = part.degree();
        self.parts[n] = part;
    }

    /// Highest degree with a nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.parts.iter().rposition(|p| !p.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(|p| p.is_zero())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> PolynomialOnDual<T> {
        PolynomialOnDual {
            dim: self.dim,
            parts: self.parts.iter().map(|p| p.map(f)).collect(),
        }
    }

    pub fn scale(&self, k: &S) -> Self {
        self.map(|c| c.clone() * k.clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        let n = self.max_degree().max(other.max_degree());
        let mut out = Self::zero(self.dim, n);
        for (k, slot) in out.parts.iter_mut().enumerate() {
            let mut acc = SymCoeff::zero(self.dim, k);
            for p in [self.part(k), other.part(k)].into_iter().flatten() {
                acc = acc.add(p)?;
            }
            *slot = acc;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-S::one()))
    }

    pub fn evaluate(&self, point: &[S]) -> Result<S> {
        check_dim(self.dim, point.len())?;
        let mut acc = S::zero();
        for p in &self.parts {
            acc = acc + p.pair(point)?;
        }
        Ok(acc)
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.parts
            .iter()
            .flat_map(|p| p.coeffs().map(|(_, c)| c.modulus()))
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let n = self.max_degree().max(other.max_degree());
        (0..=n)
            .map(|k| match (self.part(k), other.part(k)) {
                (Some(a), Some(b)) => a.max_abs_diff(b),
                (Some(a), None) | (None, Some(a)) => a.max_abs_diff(&SymCoeff::zero(a.dim(), k)),
                (None, None) => 0.0,
            })
            .fold(0.0, f64::max)
    }
}

/// `sum_n sum_beta c_beta w^beta`.
pub fn evaluate<S: Scalar>(p: &PolynomialOnDual<S>, point: &[S]) -> Result<S> {
    p.evaluate(point)
}
