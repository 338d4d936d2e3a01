//! Truncated multivariate formal power series.
//!
//! A [`Series`] in `dim` variables keeps every coefficient of total degree
//! `<= max_degree` and nothing else. Binary operations truncate to the
//! smaller order. Only exact zeros are pruned from storage.

mod dense;
mod json;
mod vector;

pub use json::{SeriesDoc, TermDoc, VectorSeriesDoc};
pub(crate) use json::term_doc;
pub use vector::VectorSeries;

use std::collections::BTreeMap;

use crate::error::{check_dim, Error, Result};
use crate::index::MultiIndex;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Series<S> {
    dim: usize,
    max_degree: usize,
    terms: BTreeMap<MultiIndex, S>,
}

type Homogeneous<S> = Vec<(MultiIndex, S)>;

impl<S: Scalar> Series<S> {
    pub fn zero(dim: usize, max_degree: usize) -> Self {
        Self {
            dim,
            max_degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, max_degree: usize, c: S) -> Self {
        let mut s = Self::zero(dim, max_degree);
        s.add_term(MultiIndex::zero(dim), c);
        s
    }

    pub fn one(dim: usize, max_degree: usize) -> Self {
        Self::constant(dim, max_degree, S::one())
    }

    /// The coordinate function `x_i`.
    pub fn var(dim: usize, i: usize, max_degree: usize) -> Self {
        let mut s = Self::zero(dim, max_degree);
        s.add_term(MultiIndex::unit(dim, i, 1), S::one());
        s
    }

    /// Builds a series from explicit terms; repeated indices are summed.
    pub fn from_terms<I>(dim: usize, max_degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, S)>,
    {
        let mut s = Self::zero(dim, max_degree);
        for (idx, c) in terms {
            check_dim(dim, idx.dim())?;
            if idx.degree() > max_degree {
                return Err(Error::DegreeOverflow {
                    degree: idx.degree(),
                    max: max_degree,
                });
            }
            s.add_term(idx, c);
        }
        Ok(s)
    }

    /// One-variable series `sum_k coeffs[k] u^k`, truncated at `max_degree`.
    pub fn univariate(coeffs: &[S], max_degree: usize) -> Self {
        let mut s = Self::zero(1, max_degree);
        for (k, c) in coeffs.iter().enumerate().take(max_degree + 1) {
            s.add_term(MultiIndex::new(&[k]), c.clone());
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, idx: &MultiIndex) -> S {
        self.terms.get(idx).cloned().unwrap_or_else(S::zero)
    }

    pub fn coeff_of(&self, exps: &[usize]) -> S {
        self.coeff(&MultiIndex::new(exps))
    }

    pub fn constant_term(&self) -> S {
        self.coeff(&MultiIndex::zero(self.dim))
    }

    /// Terms of total degree exactly `n`, in graded-lex order.
    pub fn homogeneous(&self, n: usize) -> impl Iterator<Item = (&MultiIndex, &S)> {
        let lo = MultiIndex::unit(self.dim.max(1), 0, n);
        let lo = if self.dim == 0 { MultiIndex::zero(0) } else { lo };
        self.terms
            .range(lo..)
            .take_while(move |(m, _)| m.degree() == n)
    }

    /// Highest degree carrying a nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(MultiIndex::degree)
    }

    pub(crate) fn add_term(&mut self, idx: MultiIndex, c: S) {
        if idx.degree() > self.max_degree || c.is_zero() {
            return;
        }
        match self.terms.get_mut(&idx) {
            Some(v) => {
                let sum = v.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&idx);
                } else {
                    *v = sum;
                }
            }
            None => {
                self.terms.insert(idx, c);
            }
        }
    }

    pub fn truncate(&self, max_degree: usize) -> Self {
        let max_degree = max_degree.min(self.max_degree);
        Self {
            dim: self.dim,
            max_degree,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= max_degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Same coefficients, with the truncation order lowered or raised.
    /// Raising is only meaningful for polynomials.
    pub fn with_max_degree(&self, max_degree: usize) -> Self {
        let mut s = self.truncate(max_degree);
        s.max_degree = max_degree;
        s
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Series<T> {
        let mut out = Series::zero(self.dim, self.max_degree);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn scale(&self, k: &S) -> Self {
        self.map(|c| c.clone() * k.clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| -c.clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        let mut out = self.truncate(other.max_degree);
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Cauchy product truncated at `min(N_a, N_b)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        Ok(self.mul_within(other, self.max_degree.min(other.max_degree)))
    }

    pub(crate) fn mul_within(&self, other: &Self, max_degree: usize) -> Self {
        if let Some(l) = dense::layout(self.dim, max_degree) {
            if 4 * self.terms.len() * other.terms.len() >= l.pairs() {
                let prod = l.mul(&l.to_dense(self), &l.to_dense(other), max_degree);
                return l.to_series(prod, max_degree);
            }
        }
        let mut acc = BTreeMap::new();
        for (a, x) in &self.terms {
            if a.degree() > max_degree {
                break;
            }
            for (b, y) in &other.terms {
                if a.degree() + b.degree() > max_degree {
                    break;
                }
                accumulate(&mut acc, a.add(b), x.clone() * y.clone());
            }
        }
        Self::from_map(self.dim, max_degree, acc)
    }

    fn from_map(dim: usize, max_degree: usize, mut terms: BTreeMap<MultiIndex, S>) -> Self {
        terms.retain(|_, c| !c.is_zero());
        Self {
            dim,
            max_degree,
            terms,
        }
    }

    fn graded_parts(&self) -> Vec<Homogeneous<S>> {
        let mut parts = vec![Vec::new(); self.max_degree + 1];
        for (m, c) in &self.terms {
            parts[m.degree()].push((m.clone(), c.clone()));
        }
        parts
    }

    fn from_parts(dim: usize, max_degree: usize, parts: Vec<Homogeneous<S>>) -> Self {
        let mut s = Self::zero(dim, max_degree);
        for (m, c) in parts.into_iter().flatten() {
            s.add_term(m, c);
        }
        s
    }

    /// `exp(a) = sum_m a^m / m!`; requires a zero constant term.
    ///
    /// Solved degree by degree from `D exp(a) = exp(a) D a`, where `D` is the
    /// Euler operator (multiplies the degree-`n` part by `n`).
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::NonzeroConstant);
        }
        let n_max = self.max_degree;
        let a = self.graded_parts();
        let mut e: Vec<Homogeneous<S>> = Vec::with_capacity(n_max + 1);
        e.push(vec![(MultiIndex::zero(self.dim), S::one())]);
        for n in 1..=n_max {
            let mut acc = BTreeMap::new();
            for k in 1..=n {
                let w = S::ratio(k as i64, n as i64);
                hom_mul_acc(&mut acc, &a[k], &e[n - k], &w);
            }
            e.push(drop_zeros(acc));
        }
        Ok(Self::from_parts(self.dim, n_max, e))
    }

    /// `log(a)` for `a` with constant term 1.
    pub fn log(&self) -> Result<Self> {
        if self.constant_term() != S::one() {
            return Err(Error::ConstantNotOne);
        }
        let n_max = self.max_degree;
        let a = self.graded_parts();
        let mut l: Vec<Homogeneous<S>> = vec![Vec::new()];
        for n in 1..=n_max {
            let mut acc: BTreeMap<MultiIndex, S> = a[n].iter().cloned().collect();
            for k in 1..n {
                let w = -S::ratio(k as i64, n as i64);
                hom_mul_acc(&mut acc, &l[k], &a[n - k], &w);
            }
            l.push(drop_zeros(acc));
        }
        Ok(Self::from_parts(self.dim, n_max, l))
    }

    /// Multiplicative inverse of a series with constant term 1.
    pub fn recip(&self) -> Result<Self> {
        if self.constant_term() != S::one() {
            return Err(Error::ConstantNotOne);
        }
        let n_max = self.max_degree;
        let a = self.graded_parts();
        let mut r: Vec<Homogeneous<S>> = Vec::with_capacity(n_max + 1);
        r.push(vec![(MultiIndex::zero(self.dim), S::one())]);
        let minus_one = -S::one();
        for n in 1..=n_max {
            let mut acc = BTreeMap::new();
            for k in 1..=n {
                hom_mul_acc(&mut acc, &a[k], &r[n - k], &minus_one);
            }
            r.push(drop_zeros(acc));
        }
        Ok(Self::from_parts(self.dim, n_max, r))
    }

    /// Substitutes `g` into `self`: `(f o g)(x) = f(g_1(x), ..., g_{d'}(x))`.
    ///
    /// Horner evaluation in the series ring, one variable at a time.
    pub fn compose(&self, g: &VectorSeries<S>) -> Result<Self> {
        check_dim(self.dim, g.dim_out())?;
        if g.components().iter().any(|c| !c.constant_term().is_zero()) {
            return Err(Error::NonzeroConstant);
        }
        let wide: Vec<Series<S::Wide>> = g.components().iter().map(Series::widen).collect();
        Ok(Series::narrow(&self.compose_wide(&wide, g.dim_in(), g.max_degree())))
    }

    /// Composition carried out in the wide field; `g` is already widened.
    pub(crate) fn compose_wide(&self, g: &[Series<S::Wide>], dim_in: usize, max_degree: usize) -> Series<S::Wide> {
        let n = self.max_degree.min(max_degree);
        let terms: Vec<(&[u16], S::Wide)> = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() <= n)
            .map(|(m, c)| (m.raw(), c.widen()))
            .collect();
        if let Some(l) = dense::layout(dim_in, n) {
            let g: Vec<_> = g.iter().map(|c| l.to_dense(c)).collect();
            return l.to_series(l.horner(&terms, &g, n), n);
        }
        horner(&terms, g, dim_in, n)
    }

    pub(crate) fn widen(&self) -> Series<S::Wide> {
        self.map(S::widen)
    }

    pub(crate) fn narrow(wide: &Series<S::Wide>) -> Self {
        wide.map(S::narrow)
    }

    pub fn eval(&self, point: &[S]) -> Result<S> {
        check_dim(self.dim, point.len())?;
        Ok(self
            .terms
            .iter()
            .fold(S::zero(), |acc, (m, c)| acc + c.clone() * m.eval(point)))
    }

    /// Largest coefficientwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for (m, c) in &self.terms {
            worst = worst.max((c.clone() - other.coeff(m)).modulus());
        }
        for (m, c) in &other.terms {
            if !self.terms.contains_key(m) {
                worst = worst.max(c.modulus());
            }
        }
        worst
    }
}

fn accumulate<S: Scalar>(acc: &mut BTreeMap<MultiIndex, S>, idx: MultiIndex, v: S) {
    match acc.get_mut(&idx) {
        Some(c) => *c = c.clone() + v,
        None => {
            acc.insert(idx, v);
        }
    }
}

fn hom_mul_acc<S: Scalar>(
    acc: &mut BTreeMap<MultiIndex, S>,
    lhs: &[(MultiIndex, S)],
    rhs: &[(MultiIndex, S)],
    weight: &S,
) {
    for (a, x) in lhs {
        let xw = x.clone() * weight.clone();
        for (b, y) in rhs {
            accumulate(acc, a.add(b), xw.clone() * y.clone());
        }
    }
}

fn drop_zeros<S: Scalar>(acc: BTreeMap<MultiIndex, S>) -> Homogeneous<S> {
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// `sum_terms c * prod_v g_v^{e_v}` with `terms` exponent suffixes starting at
/// variable `g.len() - remaining`.
fn horner<S: Scalar>(terms: &[(&[u16], S)], g: &[Series<S>], dim_in: usize, n: usize) -> Series<S> {
    let mut out = Series::zero(dim_in, n);
    if terms.is_empty() {
        return out;
    }
    if g.is_empty() {
        let c = terms.iter().fold(S::zero(), |acc, (_, c)| acc + c.clone());
        out.add_term(MultiIndex::zero(dim_in), c);
        return out;
    }
    let mut groups: BTreeMap<u16, Vec<(&[u16], S)>> = BTreeMap::new();
    for (e, c) in terms {
        groups.entry(e[0]).or_default().push((&e[1..], c.clone()));
    }
    let top = *groups.keys().next_back().expect("nonempty");
    let g0 = &g[0];
    for k in (0..=top).rev() {
        if k != top {
            out = out.mul_within(g0, n);
        }
        if let Some(sub) = groups.get(&k) {
            let inner = horner(sub, &g[1..], dim_in, n);
            for (m, c) in inner.terms {
                out.add_term(m, c);
            }
        }
    }
    out
}
