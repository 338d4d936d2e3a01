use crate::error::{check_dim, Error, Result};
use crate::scalar::{factorial, Scalar};
use crate::series::VectorSeries;
use crate::tensor::{SymCoeff, DEFAULT_DENSE_BUDGET};

use super::PolynomialOnDual;

/// Image of `p` under the umbral operator of `A`, computed on dense tensors:
///
/// ```text
/// psi^(m) = (1/m!) sum_{k_1..k_m >= 1} (k_1+..+k_m)! (A_{k_1} (x) .. (x) A_{k_m}) phi^(k_1+..+k_m)
/// ```
///
/// where `A_k` is the degree-`k` block of `A` as a `d x d^k` matrix. This is
/// a combinatorial route independent of the generating-function blocks and is
/// limited to `d^deg(p)` within the dense budget.
pub fn umbral_apply_direct<S: Scalar>(a: &VectorSeries<S>, p: &PolynomialOnDual<S>) -> Result<PolynomialOnDual<S>> {
    if p.is_zero() {
        return Ok(p.clone());
    }
    let d = a.dim_in();
    check_dim(d, p.dim())?;
    if !a.is_unit_linear() {
        return Err(Error::NotUnitLinear);
    }
    let top = p.degree().unwrap_or(0);
    if top > a.max_degree() {
        return Err(Error::DegreeOverflow {
            degree: top,
            max: a.max_degree(),
        });
    }
    let size = d.checked_pow(top as u32).unwrap_or(usize::MAX);
    if size > DEFAULT_DENSE_BUDGET {
        return Err(Error::BudgetExceeded {
            size,
            budget: DEFAULT_DENSE_BUDGET,
        });
    }
    // blocks[k][i * d^k + J] = dense entry of the degree-k part of A_i
    let mut blocks: Vec<Vec<S>> = vec![Vec::new()];
    for k in 1..=top {
        let mut flat = Vec::with_capacity(d * d.pow(k as u32));
        for comp in a.components() {
            flat.extend(SymCoeff::from_series(comp, k).to_dense(DEFAULT_DENSE_BUDGET)?.entries);
        }
        blocks.push(flat);
    }

    let mut out = PolynomialOnDual::zero(d, p.max_degree());
    let mut acc: Vec<SymCoeff<S>> = (0..=p.max_degree()).map(|m| SymCoeff::zero(d, m)).collect();
    acc[0] = p.parts()[0].clone();
    for n in 1..=top {
        let phi = &p.parts()[n];
        if phi.is_zero() {
            continue;
        }
        let dense = phi.to_dense(DEFAULT_DENSE_BUDGET)?.entries;
        let nf: S = factorial(n);
        for m in 1..=n {
            let mut sum = vec![S::zero(); d.pow(m as u32)];
            for parts in compositions(n, m) {
                let mut cur = dense.clone();
                let mut done = 0;
                let mut rest = n;
                for &k in &parts {
                    cur = apply_first_slots(&blocks[k], k, d, &cur, done, rest);
                    done += 1;
                    rest -= k;
                }
                for (s, v) in sum.iter_mut().zip(cur) {
                    *s = s.clone() + v;
                }
            }
            let dense_m = crate::tensor::DenseTensor {
                dim: d,
                degree: m,
                entries: sum,
            };
            let scale = nf.clone() / factorial::<S>(m);
            acc[m] = acc[m].add(&SymCoeff::from_dense(&dense_m).scale(&scale))?;
        }
    }
    for part in acc {
        out.set_part(part);
    }
    Ok(out)
}

/// Ordered compositions of `n` into `m` positive parts.
fn compositions(n: usize, m: usize) -> Vec<Vec<usize>> {
    if m == 1 {
        return vec![vec![n]];
    }
    let mut out = Vec::new();
    for first in 1..=(n - m + 1) {
        for mut tail in compositions(n - first, m - 1) {
            tail.insert(0, first);
            out.push(tail);
        }
    }
    out
}

/// Contracts the first `k` of the `rest` input slots of `cur` (laid out as
/// `done` output slots followed by `rest` input slots) with `block`.
fn apply_first_slots<S: Scalar>(block: &[S], k: usize, d: usize, cur: &[S], done: usize, rest: usize) -> Vec<S> {
    let dk = d.pow(k as u32);
    let tail = d.pow((rest - k) as u32);
    let outs = d.pow(done as u32);
    let mut next = vec![S::zero(); outs * d * tail];
    for o in 0..outs {
        for i in 0..d {
            for jj in 0..dk {
                let w = &block[i * dk + jj];
                if w.is_zero() {
                    continue;
                }
                let src = (o * dk + jj) * tail;
                let dst = (o * d + i) * tail;
                for r in 0..tail {
                    let v = &cur[src + r];
                    if !v.is_zero() {
                        next[dst + r] = next[dst + r].clone() + w.clone() * v.clone();
                    }
                }
            }
        }
    }
    next
}
