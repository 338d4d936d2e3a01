//! Exponent vectors and graded bases.
//!
//! A [`MultiIndex`] labels both a monomial `w^beta` and a coordinate of a
//! symmetric tensor in monomial representation. Ordering is graded
//! lexicographic: lower total degree first, then larger exponent in earlier
//! coordinates first (`x^2 < xy < y^2` at degree 2).

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::scalar::{factorial, factorial_f64, Scalar};

type Exps = SmallVec<[u16; 6]>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    exps: Exps,
    degree: usize,
}

impl MultiIndex {
    pub fn new(exps: &[usize]) -> Self {
        let degree = exps.iter().sum();
        Self {
            exps: exps.iter().map(|&e| e as u16).collect(),
            degree,
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            exps: smallvec::smallvec![0; dim],
            degree: 0,
        }
    }

    /// `k` times the `i`-th unit vector.
    pub fn unit(dim: usize, i: usize, k: usize) -> Self {
        let mut m = Self::zero(dim);
        m.exps[i] = k as u16;
        m.degree = k;
        m
    }

    pub(crate) fn checked(exps: &[usize], dim: usize) -> Result<Self> {
        if exps.len() != dim {
            return Err(Error::InvalidIndex(format!(
                "index {exps:?} has length {}, expected {dim}",
                exps.len()
            )));
        }
        if exps.iter().any(|&e| e > u16::MAX as usize) {
            return Err(Error::InvalidIndex(format!("exponent too large in {exps:?}")));
        }
        Ok(Self::new(exps))
    }

    pub fn dim(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn get(&self, i: usize) -> usize {
        self.exps[i] as usize
    }

    pub fn exps(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps.iter().map(|&e| e as usize)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.exps().collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        Self {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
            degree: self.degree + other.degree,
        }
    }

    /// `self - other` when `other <= self` componentwise.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        let mut exps = Exps::with_capacity(self.dim());
        for (a, b) in self.exps.iter().zip(&other.exps) {
            exps.push(a.checked_sub(*b)?);
        }
        Some(Self {
            exps,
            degree: self.degree - other.degree,
        })
    }

    pub fn bump(&self, i: usize) -> Self {
        let mut m = self.clone();
        m.exps[i] += 1;
        m.degree += 1;
        m
    }

    /// First coordinate with a nonzero exponent.
    pub fn leading_var(&self) -> Option<usize> {
        self.exps.iter().position(|&e| e > 0)
    }

    pub(crate) fn raw(&self) -> &[u16] {
        &self.exps
    }

    /// `beta! = prod beta_i!`
    pub fn factorial<S: Scalar>(&self) -> S {
        self.exps()
            .fold(S::one(), |acc, e| acc * factorial::<S>(e))
    }

    pub fn factorial_f64(&self) -> f64 {
        self.exps().map(factorial_f64).product()
    }

    /// Monomial `w^beta` evaluated at a point.
    pub fn eval<S: Scalar>(&self, point: &[S]) -> S {
        let mut acc = S::one();
        for (x, e) in point.iter().zip(self.exps()) {
            for _ in 0..e {
                acc = acc * x.clone();
            }
        }
        acc
    }

    /// The coordinate sequence `(i_1 <= ... <= i_n)` with multiplicities `beta`.
    pub fn slots(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.degree);
        for (i, e) in self.exps().enumerate() {
            out.extend(std::iter::repeat_n(i, e));
        }
        out
    }

    pub fn from_slots(dim: usize, slots: &[usize]) -> Self {
        let mut m = Self::zero(dim);
        for &i in slots {
            m.exps[i] += 1;
        }
        m.degree = slots.len();
        m
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps.as_slice())
    }
}

/// All indices of total degree exactly `n` in `dim` variables, in graded-lex order.
pub fn basis(dim: usize, n: usize) -> Vec<MultiIndex> {
    fn fill(dim: usize, left: usize, prefix: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
        if prefix.len() + 1 == dim {
            prefix.push(left);
            out.push(MultiIndex::new(prefix));
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            fill(dim, left - e, prefix, out);
            prefix.pop();
        }
    }
    if dim == 0 {
        return if n == 0 { vec![MultiIndex::zero(0)] } else { vec![] };
    }
    let mut out = Vec::new();
    fill(dim, n, &mut Vec::with_capacity(dim), &mut out);
    out
}

/// All indices of degree `<= max_degree`, graded-lex.
pub fn graded_basis(dim: usize, max_degree: usize) -> Vec<MultiIndex> {
    (0..=max_degree).flat_map(|n| basis(dim, n)).collect()
}

/// `binomial(n + d - 1, d - 1)`, the number of degree-`n` monomials.
pub fn basis_len(dim: usize, n: usize) -> usize {
    if dim == 0 {
        return usize::from(n == 0);
    }
    let mut acc: u128 = 1;
    for i in 1..dim {
        acc = acc * (n + i) as u128 / i as u128;
    }
    acc as usize
}
