use std::fmt::Write as _;
use std::ops::RangeInclusive;

use nalgebra::{DMatrix, DVector};
use num::complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::index::basis;
use crate::series::VectorSeries;
use crate::sheffer::{sheffer_apply, PolynomialOnDual, ShefferSequence};
use crate::tensor::{slot_weight, WeightedInnerProduct};

use super::checks::envelope;
use super::{coeff_norm, in_unit_coordinates, GradedNorm};

const POWER_ITERATIONS: usize = 200;
const POWER_TOLERANCE: f64 = 1e-10;

/// Operator norms `||A_k||` of the degree-`k` blocks `Phi^{(.)k} -> Phi`, `k = 0..=N`.
///
/// In orthonormal coordinates the block is the `d x #basis` matrix
/// `M[i, beta] = a_{i,beta} sqrt(beta!/k!)`; its top singular value is found
/// by power iteration on `M M*`.
pub fn block_norms(a: &VectorSeries<Complex64>, weight: &WeightedInnerProduct) -> Result<Vec<f64>> {
    crate::error::check_dim(weight.dim(), a.dim_in())?;
    let a = in_unit_coordinates(a, weight)?;
    let d = a.dim_in();
    let mut out = vec![0.0];
    for k in 1..=a.max_degree() {
        let monomials = basis(d, k);
        let m = DMatrix::from_fn(a.dim_out(), monomials.len(), |i, j| {
            a.components()[i].coeff(&monomials[j]) * slot_weight(&monomials[j]).sqrt()
        });
        out.push(top_singular_value(&m));
    }
    Ok(out)
}

fn top_singular_value(m: &DMatrix<Complex64>) -> f64 {
    let gram = m * m.adjoint();
    if gram.iter().all(|z| z.norm() == 0.0) {
        return 0.0;
    }
    let n = gram.nrows();
    let mut v = DVector::from_fn(n, |i, _| Complex64::new(1.0 + 0.37 * i as f64, 0.21 * (i % 3) as f64));
    v /= Complex64::new(v.norm(), 0.0);
    let mut lambda = 0.0;
    for _ in 0..POWER_ITERATIONS {
        let w = &gram * &v;
        let size = w.norm();
        if size == 0.0 {
            return 0.0;
        }
        v = w / Complex64::new(size, 0.0);
        // Rayleigh quotient
        let next = v.dotc(&(&gram * &v)).re;
        let done = (next - lambda).abs() <= POWER_TOLERANCE * next;
        lambda = next;
        if done {
            break;
        }
    }
    lambda.sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Bounded,
    UnboundedLooking,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub degree: usize,
    pub ratio: f64,
    pub norm_num: f64,
    pub norm_den: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DivergenceTable {
    pub alpha: f64,
    pub l_prime: u32,
    pub reference_degree: usize,
    pub rows: Vec<SweepRow>,
    pub verdict: Verdict,
}

impl DivergenceTable {
    pub const CSV_HEADER: &'static str = "degree,ratio,norm_num,norm_den";

    pub fn ratio(&self, degree: usize) -> Option<f64> {
        self.rows.iter().find(|r| r.degree == degree).map(|r| r.ratio)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(out, "{},{:e},{:e},{:e}", r.degree, r.ratio, r.norm_num, r.norm_den);
        }
        out
    }
}

/// Ratios `||S z^n||_{0,alpha} / ||z^n||_{l',alpha}` for `z^n = w_1^n`.
///
/// `l' = 0` is the plain table. The verdict is unbounded-looking when the
/// ratio at the top degree exceeds 10 times the ratio at degree 5 (or at the
/// first degree of the range when 5 is not in it).
pub fn divergence_sweep(
    seq: &ShefferSequence<Complex64>,
    alpha: f64,
    degrees: RangeInclusive<usize>,
    l_prime: u32,
    weight: &WeightedInnerProduct,
) -> Result<DivergenceTable> {
    if !(alpha.is_finite() && alpha > 1.0) {
        return Err(Error::Precondition(format!("divergence sweep needs order > 1, got {alpha}")));
    }
    if degrees.is_empty() {
        return Err(Error::Precondition("empty degree range".into()));
    }
    let num_norm = GradedNorm::new(alpha, 0, weight.clone())?;
    let den_norm = num_norm.with_l(l_prime);
    let d = seq.dim();
    let mut rows = Vec::new();
    for n in degrees.clone() {
        let mut exps = vec![0; d];
        exps[0] = n;
        let p = PolynomialOnDual::monomial(n, &exps, Complex64::new(1.0, 0.0))?;
        let norm_num = coeff_norm(&sheffer_apply(seq, &p)?, &num_norm)?;
        let norm_den = coeff_norm(&p, &den_norm)?;
        rows.push(SweepRow {
            degree: n,
            ratio: norm_num / norm_den,
            norm_num,
            norm_den,
        });
    }
    let reference_degree = if degrees.contains(&5) { 5 } else { *degrees.start() };
    let reference = rows.iter().find(|r| r.degree == reference_degree).expect("in range").ratio;
    let top = rows.last().expect("nonempty").ratio;
    let verdict = if top > 10.0 * reference {
        Verdict::UnboundedLooking
    } else {
        Verdict::Bounded
    };
    Ok(DivergenceTable {
        alpha,
        l_prime,
        reference_degree,
        rows,
        verdict,
    })
}

/// Block norms of `A` and of its inverse with their geometric envelopes
/// `max_k ||A_k||^{1/k}`. Evidence over the built degrees only.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeReport {
    pub max_degree: usize,
    pub norms: Vec<f64>,
    pub envelope: f64,
    pub inverse_norms: Vec<f64>,
    pub inverse_envelope: f64,
    pub envelope_ratio: f64,
    pub note: String,
}

pub fn quasi_holo_probe(a: &VectorSeries<Complex64>, weight: &WeightedInnerProduct) -> Result<ProbeReport> {
    if !a.is_unit_linear() {
        return Err(Error::NotUnitLinear);
    }
    let norms = block_norms(a, weight)?;
    let inverse_norms = block_norms(&a.inverse()?, weight)?;
    let (envelope, inverse_envelope) = (envelope(&norms), envelope(&inverse_norms));
    Ok(ProbeReport {
        max_degree: a.max_degree(),
        norms,
        envelope,
        inverse_norms,
        inverse_envelope,
        envelope_ratio: inverse_envelope / envelope,
        note: "envelopes measured over the built degrees; no statement about the full series".into(),
    })
}
