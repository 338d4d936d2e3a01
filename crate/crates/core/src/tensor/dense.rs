use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::scalar::{factorial, Scalar};

use super::SymCoeff;

/// Default cap on `d^n` for dense conversion.
pub const DEFAULT_DENSE_BUDGET: usize = 4096;

/// Full `d^n` array, slot `i_1` most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseTensor<S> {
    pub dim: usize,
    pub degree: usize,
    pub entries: Vec<S>,
}

impl<S: Scalar> DenseTensor<S> {
    pub fn zeros(dim: usize, degree: usize, budget: usize) -> Result<Self> {
        let size = dense_size(dim, degree, budget)?;
        Ok(Self {
            dim,
            degree,
            entries: vec![S::zero(); size],
        })
    }

    pub fn offset(&self, slots: &[usize]) -> usize {
        slots.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    /// Slot tuple of a flat offset.
    pub fn slots(&self, mut offset: usize) -> Vec<usize> {
        let mut out = vec![0; self.degree];
        for s in out.iter_mut().rev() {
            *s = offset % self.dim;
            offset /= self.dim;
        }
        out
    }

    pub fn get(&self, slots: &[usize]) -> &S {
        &self.entries[self.offset(slots)]
    }

    pub fn euclidean_norm(&self) -> f64 {
        self.entries.iter().map(|c| c.to_c64().norm_sqr()).sum::<f64>().sqrt()
    }
}

fn dense_size(dim: usize, degree: usize, budget: usize) -> Result<usize> {
    match dim.checked_pow(degree as u32) {
        Some(size) if size <= budget => Ok(size),
        Some(size) => Err(Error::BudgetExceeded { size, budget }),
        None => Err(Error::BudgetExceeded {
            size: usize::MAX,
            budget,
        }),
    }
}

impl<S: Scalar> SymCoeff<S> {
    /// Entry at `(i_1..i_n)` is `c_beta beta!/n!` where `beta` counts the slots.
    pub fn to_dense(&self, budget: usize) -> Result<DenseTensor<S>> {
        let mut out = DenseTensor::zeros(self.dim, self.degree, budget)?;
        let nf: S = factorial(self.degree);
        for offset in 0..out.entries.len() {
            let beta = MultiIndex::from_slots(self.dim, &out.slots(offset));
            if let Some(c) = self.coeffs.get(&beta) {
                out.entries[offset] = c.clone() * beta.factorial::<S>() / nf.clone();
            }
        }
        Ok(out)
    }

    /// Sums each orbit of slot permutations, which inverts [`SymCoeff::to_dense`]
    /// and symmetrises anything else.
    pub fn from_dense(t: &DenseTensor<S>) -> Self {
        let mut out = Self::zero(t.dim, t.degree);
        for (offset, c) in t.entries.iter().enumerate() {
            if !c.is_zero() {
                out.push(MultiIndex::from_slots(t.dim, &t.slots(offset)), c.clone());
            }
        }
        out
    }
}
