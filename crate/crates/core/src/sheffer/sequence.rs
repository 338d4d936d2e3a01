use std::collections::HashMap;

use crate::error::{check_dim, Error, Result};
use crate::index::{basis, MultiIndex};
use crate::scalar::{factorial, Scalar};
use crate::series::{Series, VectorSeries};
use crate::tensor::SymCoeff;

use super::PolynomialOnDual;

/// Monomials of one degree with their positions.
#[derive(Clone, Debug)]
pub(crate) struct DegreeBasis {
    pub(crate) monomials: Vec<MultiIndex>,
    position: HashMap<MultiIndex, usize>,
}

impl DegreeBasis {
    fn new(dim: usize, n: usize) -> Self {
        let monomials = basis(dim, n);
        let position = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Self { monomials, position }
    }

    pub(crate) fn position(&self, m: &MultiIndex) -> usize {
        self.position[m]
    }
}

/// Dense `rows x cols` matrix over the degree-`k` (rows) and degree-`n` (cols) bases.
#[derive(Clone, Debug, PartialEq)]
pub struct Block<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Block<S> {
    fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    /// Row-major entries.
    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub(crate) fn from_data(rows: usize, cols: usize, data: Vec<S>) -> Self {
        Self { rows, cols, data }
    }
}

/// Blocks `[n][k]`, `k <= n`, of a graded upper-triangular transform.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Blocks<S>(Vec<Vec<Block<S>>>);

/// A Sheffer sequence with generating function `exp<w, A(x)> / rho(A(x))`,
/// stored as the graded blocks of its operator and of the inverse operator.
#[derive(Clone, Debug)]
pub struct ShefferSequence<S> {
    dim: usize,
    max_degree: usize,
    a: VectorSeries<S>,
    rho: Series<S>,
    theta: Vec<SymCoeff<S>>,
    kappa: Vec<SymCoeff<S>>,
    bases: Vec<DegreeBasis>,
    forward: Blocks<S>,
    inverse: Blocks<S>,
}

/// Sequence of binomial type: `rho = 1`.
pub fn build_basic<S: Scalar>(a: &VectorSeries<S>, max_degree: usize) -> Result<ShefferSequence<S>> {
    build_sheffer(a, &Series::one(a.dim_in(), max_degree), max_degree)
}

pub fn build_sheffer<S: Scalar>(
    a: &VectorSeries<S>,
    rho: &Series<S>,
    max_degree: usize,
) -> Result<ShefferSequence<S>> {
    let (a, rho) = check_pair(a, rho, max_degree)?;
    let dim = a.dim_in();
    let rho_a = rho.compose(&a)?;
    let t = rho_a.recip()?;
    let theta = (0..=max_degree).map(|k| SymCoeff::from_series(&t, k)).collect();
    let kappa = (0..=max_degree).map(|k| SymCoeff::from_series(&rho_a, k)).collect();
    let bases: Vec<DegreeBasis> = (0..=max_degree).map(|n| DegreeBasis::new(dim, n)).collect();
    let forward = power_blocks(&bases, &a, &t);
    let b = a.inverse()?;
    let inverse = power_blocks(&bases, &b, &rho);
    Ok(ShefferSequence {
        dim,
        max_degree,
        a,
        rho,
        theta,
        kappa,
        bases,
        forward,
        inverse,
    })
}

/// Coefficients of `1/rho(A)` and `rho(A)` by degree.
pub fn theta_kappa<S: Scalar>(
    a: &VectorSeries<S>,
    rho: &Series<S>,
    max_degree: usize,
) -> Result<(Vec<SymCoeff<S>>, Vec<SymCoeff<S>>)> {
    let (a, rho) = check_pair(a, rho, max_degree)?;
    let rho_a = rho.compose(&a)?;
    let t = rho_a.recip()?;
    Ok((
        (0..=max_degree).map(|k| SymCoeff::from_series(&t, k)).collect(),
        (0..=max_degree).map(|k| SymCoeff::from_series(&rho_a, k)).collect(),
    ))
}

fn check_pair<S: Scalar>(
    a: &VectorSeries<S>,
    rho: &Series<S>,
    max_degree: usize,
) -> Result<(VectorSeries<S>, Series<S>)> {
    check_dim(a.dim_in(), rho.dim())?;
    if !a.is_unit_linear() {
        return Err(Error::NotUnitLinear);
    }
    if !rho.constant_term().is_one() {
        return Err(Error::ConstantNotOne);
    }
    let have = a.max_degree().min(rho.max_degree());
    if have < max_degree {
        return Err(Error::DegreeOverflow {
            degree: max_degree,
            max: have,
        });
    }
    Ok((a.truncate(max_degree), rho.truncate(max_degree)))
}

/// Entry `[beta, gamma]` of block `(|beta|, |gamma|)` is
/// `gamma!/beta! * [x^gamma] (F(x)^beta * g(x))`.
fn power_blocks<S: Scalar>(bases: &[DegreeBasis], f: &VectorSeries<S>, g: &Series<S>) -> Blocks<S> {
    let top = bases.len() - 1;
    let fact: Vec<Vec<S>> = bases
        .iter()
        .map(|b| b.monomials.iter().map(|m| m.factorial::<S>()).collect())
        .collect();
    let mut blocks: Vec<Vec<Block<S>>> = (0..=top)
        .map(|n| (0..=n).map(|k| Block::zeros(bases[k].monomials.len(), bases[n].monomials.len())).collect())
        .collect();
    let mut prev: HashMap<MultiIndex, Series<S>> = HashMap::new();
    prev.insert(MultiIndex::zero(f.dim_in()), g.clone());
    for k in 0..=top {
        let mut cur = HashMap::new();
        for (i, beta) in bases[k].monomials.iter().enumerate() {
            let prod = if k == 0 {
                g.clone()
            } else {
                let lead = beta.leading_var().expect("degree >= 1");
                let lower = beta.checked_sub(&MultiIndex::unit(f.dim_in(), lead, 1)).expect("lead");
                prev[&lower].mul(&f.components()[lead]).expect("same dim")
            };
            for n in k..=top {
                for (j, gamma) in bases[n].monomials.iter().enumerate() {
                    let c = prod.coeff(gamma);
                    if !c.is_zero() {
                        let block = &mut blocks[n][k];
                        block.data[i * block.cols + j] = c * fact[n][j].clone() / fact[k][i].clone();
                    }
                }
            }
            cur.insert(beta.clone(), prod);
        }
        prev = cur;
    }
    Blocks(blocks)
}

impl<S: Scalar> ShefferSequence<S> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn a(&self) -> &VectorSeries<S> {
        &self.a
    }

    pub fn rho(&self) -> &Series<S> {
        &self.rho
    }

    pub fn theta(&self) -> &[SymCoeff<S>] {
        &self.theta
    }

    pub fn kappa(&self) -> &[SymCoeff<S>] {
        &self.kappa
    }

    pub fn is_basic(&self) -> bool {
        self.rho.terms().all(|(m, c)| m.degree() == 0 && c.is_one())
    }

    pub fn is_appell(&self) -> bool {
        self.a.is_identity()
    }

    /// Degree-`n` monomials in block row/column order.
    pub fn basis(&self, n: usize) -> &[MultiIndex] {
        &self.bases[n].monomials
    }

    /// `V_{k,n}`: degree-`n` coefficients to degree-`k` coefficients of the image.
    pub fn block(&self, k: usize, n: usize) -> Option<&Block<S>> {
        self.forward.0.get(n).and_then(|row| row.get(k))
    }

    pub fn inverse_block(&self, k: usize, n: usize) -> Option<&Block<S>> {
        self.inverse.0.get(n).and_then(|row| row.get(k))
    }

    /// Image of the monomial `w^gamma`, i.e. `sum_beta V[beta, gamma] w^beta`.
    pub fn image_of_monomial(&self, gamma: &MultiIndex) -> Result<PolynomialOnDual<S>> {
        let p = PolynomialOnDual::monomial(self.max_degree, &gamma.to_vec(), S::one())?;
        sheffer_apply(self, &p)
    }

    /// Coefficients of the tensor `S^(n)(w)`: `t_gamma = n!/gamma! * (image of w^gamma)(w)`.
    pub fn sequence_tensor(&self, n: usize, point: &[S]) -> Result<SymCoeff<S>> {
        check_dim(self.dim, point.len())?;
        if n > self.max_degree {
            return Err(Error::DegreeOverflow {
                degree: n,
                max: self.max_degree,
            });
        }
        let powers: Vec<Vec<S>> = self.bases[..=n]
            .iter()
            .map(|b| b.monomials.iter().map(|m| m.eval(point)).collect())
            .collect();
        let nf: S = factorial(n);
        let mut terms = Vec::with_capacity(self.bases[n].monomials.len());
        for (j, gamma) in self.bases[n].monomials.iter().enumerate() {
            let mut acc = S::zero();
            for (k, pw) in powers.iter().enumerate() {
                let block = &self.forward.0[n][k];
                for (i, wb) in pw.iter().enumerate() {
                    let v = block.get(i, j);
                    if !v.is_zero() {
                        acc = acc + v.clone() * wb.clone();
                    }
                }
            }
            terms.push((gamma.clone(), acc * nf.clone() / gamma.factorial::<S>()));
        }
        SymCoeff::from_terms(self.dim, n, terms)
    }
}

/// `psi^(k) = sum_{n >= k} V_{k,n} phi^(n)`.
pub fn sheffer_apply<S: Scalar>(seq: &ShefferSequence<S>, p: &PolynomialOnDual<S>) -> Result<PolynomialOnDual<S>> {
    apply_blocks(seq, &seq.forward, p)
}

/// Inverse transform: expands `p` in the sequence basis.
pub fn sheffer_inverse_apply<S: Scalar>(
    seq: &ShefferSequence<S>,
    p: &PolynomialOnDual<S>,
) -> Result<PolynomialOnDual<S>> {
    apply_blocks(seq, &seq.inverse, p)
}

fn apply_blocks<S: Scalar>(
    seq: &ShefferSequence<S>,
    blocks: &Blocks<S>,
    p: &PolynomialOnDual<S>,
) -> Result<PolynomialOnDual<S>> {
    if p.is_zero() {
        return Ok(p.clone());
    }
    check_dim(seq.dim, p.dim())?;
    let top = p.degree().unwrap_or(0);
    if top > seq.max_degree {
        return Err(Error::DegreeOverflow {
            degree: top,
            max: seq.max_degree,
        });
    }
    let mut out = PolynomialOnDual::zero(seq.dim, p.max_degree());
    for k in 0..=top {
        let mut acc = vec![S::zero(); seq.bases[k].monomials.len()];
        for n in k..=top {
            let block = &blocks.0[n][k];
            for (gamma, c) in p.parts()[n].coeffs() {
                let j = seq.bases[n].position(gamma);
                for (i, slot) in acc.iter_mut().enumerate() {
                    let v = block.get(i, j);
                    if !v.is_zero() {
                        *slot = slot.clone() + v.clone() * c.clone();
                    }
                }
            }
        }
        let terms = seq.bases[k].monomials.iter().cloned().zip(acc);
        out.set_part(SymCoeff::from_terms(seq.dim, k, terms)?);
    }
    Ok(out)
}
