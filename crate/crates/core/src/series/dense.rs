//! Dense kernels over the graded basis.
//!
//! For small `(dim, degree)` pairs every product of two basis monomials that
//! survives truncation is tabulated once, so a series product becomes a flat
//! multiply-add loop. Layouts are cached per `(dim, degree)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::index::{basis_len, graded_basis, MultiIndex};
use crate::scalar::Scalar;

use super::Series;

/// Largest product table (entries) that will be built.
const TABLE_CAP: usize = 1 << 21;

pub(crate) struct Layout {
    dim: usize,
    max_degree: usize,
    basis: Vec<MultiIndex>,
    index: HashMap<MultiIndex, usize>,
    /// `degree_end[k]` = number of basis monomials of degree `<= k`.
    degree_end: Vec<usize>,
    /// Row `i` lists `(j, k)` with `basis[i] + basis[j] = basis[k]`, `j` ascending.
    rows: Vec<Vec<(u32, u32)>>,
    pairs: usize,
}

impl Layout {
    fn build(dim: usize, max_degree: usize) -> Self {
        let basis = graded_basis(dim, max_degree);
        let index: HashMap<_, _> = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut degree_end = Vec::with_capacity(max_degree + 1);
        let mut acc = 0;
        for k in 0..=max_degree {
            acc += basis_len(dim, k);
            degree_end.push(acc);
        }
        let mut pairs = 0;
        let rows: Vec<Vec<(u32, u32)>> = basis
            .iter()
            .map(|a| {
                let room = max_degree - a.degree();
                let row: Vec<(u32, u32)> = basis[..degree_end[room]]
                    .iter()
                    .enumerate()
                    .map(|(j, b)| (j as u32, index[&a.add(b)] as u32))
                    .collect();
                pairs += row.len();
                row
            })
            .collect();
        Self {
            dim,
            max_degree,
            basis,
            index,
            degree_end,
            rows,
            pairs,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.basis.len()
    }

    pub(crate) fn pairs(&self) -> usize {
        self.pairs
    }

    pub(crate) fn to_dense<S: Scalar>(&self, s: &Series<S>) -> Vec<S> {
        let mut out = vec![S::zero(); self.len()];
        for (m, c) in s.terms.iter() {
            if m.degree() > self.max_degree {
                break;
            }
            out[self.index[m]] = c.clone();
        }
        out
    }

    pub(crate) fn to_series<S: Scalar>(&self, v: Vec<S>, max_degree: usize) -> Series<S> {
        let end = self.degree_end[max_degree.min(self.max_degree)];
        let terms = self.basis[..end]
            .iter()
            .cloned()
            .zip(v)
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Series {
            dim: self.dim,
            max_degree,
            terms,
        }
    }

    /// Product truncated to degree `max_degree <= self.max_degree`.
    pub(crate) fn mul<S: Scalar>(&self, a: &[S], b: &[S], max_degree: usize) -> Vec<S> {
        let mut out = vec![S::zero(); self.len()];
        let end = self.degree_end[max_degree];
        for (i, x) in a[..end].iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let room = max_degree - self.basis[i].degree();
            let row = &self.rows[i][..self.degree_end[room]];
            for &(j, k) in row {
                let y = &b[j as usize];
                if !y.is_zero() {
                    let k = k as usize;
                    out[k] = out[k].clone() + x.clone() * y.clone();
                }
            }
        }
        out
    }

    /// `sum_terms c * prod_v g_v^{e_v}`, the dense twin of the sparse Horner scheme.
    pub(crate) fn horner<S: Scalar>(&self, terms: &[(&[u16], S)], g: &[Vec<S>], max_degree: usize) -> Vec<S> {
        let mut out = vec![S::zero(); self.len()];
        if terms.is_empty() {
            return out;
        }
        if g.is_empty() {
            out[0] = terms.iter().fold(S::zero(), |acc, (_, c)| acc + c.clone());
            return out;
        }
        let mut groups: std::collections::BTreeMap<u16, Vec<(&[u16], S)>> = Default::default();
        for (e, c) in terms {
            groups.entry(e[0]).or_default().push((&e[1..], c.clone()));
        }
        let top = *groups.keys().next_back().expect("nonempty");
        for k in (0..=top).rev() {
            if k != top {
                out = self.mul(&out, &g[0], max_degree);
            }
            if let Some(sub) = groups.get(&k) {
                let inner = self.horner(sub, &g[1..], max_degree);
                for (o, v) in out.iter_mut().zip(inner) {
                    if !v.is_zero() {
                        *o = o.clone() + v;
                    }
                }
            }
        }
        out
    }
}

/// Cached layout for `(dim, max_degree)`, or `None` when the table would be too large.
pub(crate) fn layout(dim: usize, max_degree: usize) -> Option<Arc<Layout>> {
    if dim == 0 || basis_len(2 * dim + 1, max_degree) > TABLE_CAP {
        return None;
    }
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<Layout>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(l) = cache.lock().expect("layout cache").get(&(dim, max_degree)) {
        return Some(l.clone());
    }
    let built = Arc::new(Layout::build(dim, max_degree));
    let mut guard = cache.lock().expect("layout cache");
    Some(guard.entry((dim, max_degree)).or_insert(built).clone())
}
