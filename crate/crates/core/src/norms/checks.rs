use num::complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::ln_factorial;
use crate::sheffer::{sheffer_apply, PolynomialOnDual, ShefferSequence};
use crate::tensor::{sym_norm, SymCoeff, WeightedInnerProduct};

use super::report::{within, BoundReport, BreakdownRow};
use super::sup::{sup_norm_estimate, SupConfig};
use super::sweep::block_norms;
use super::{coeff_norm, GradedNorm};

/// Smallest `r >= 1` with `2^l <= alpha 2^{r alpha}`; then `n_{l,alpha} <= ||.||_{r,alpha}`.
pub fn forward_l_prime(alpha: f64, l: u32) -> u32 {
    let mut r = 1;
    while (l as f64) * std::f64::consts::LN_2 > alpha.ln() + (r as f64) * alpha * std::f64::consts::LN_2 {
        r += 1;
    }
    r
}

/// Smallest `r` with `q = 2^l (alpha e)^{1/alpha} sqrt(d) 2^{-r/alpha} <= 1/2`, and that `q`.
/// Then `||.||_{l,alpha} <= n_{r,alpha} / (1 - q)`.
pub fn reverse_l_prime(alpha: f64, l: u32, dim: usize) -> (u32, f64) {
    let q = |r: u32| {
        ((l as f64 - r as f64 / alpha) * std::f64::consts::LN_2 + (alpha * std::f64::consts::E).ln() / alpha).exp()
            * (dim as f64).sqrt()
    };
    let mut r = 0;
    while q(r) > 0.5 {
        r += 1;
    }
    (r, q(r))
}

/// Both embeddings between the coefficient and sup scales on a single `p`:
///
/// ```text
/// n_{l,alpha}(p)   <= ||p||_{l',alpha}                  (l' from forward_l_prime)
/// ||p||_{l,alpha}  <= n_{l'',alpha}(p) / (1 - q)        (l'', q from reverse_l_prime)
/// ```
///
/// The reverse constant uses `sqrt(d)`, the Hilbert-Schmidt norm of the
/// identity on `C^d`. `measured` is the larger of the two ratios lhs/rhs
/// and `theoretical` is 1.
pub fn embedding_check(p: &PolynomialOnDual<Complex64>, g: &GradedNorm, cfg: &SupConfig) -> Result<BoundReport> {
    if p.is_zero() {
        return Err(Error::Precondition("embedding check needs a nonzero polynomial".into()));
    }
    let (alpha, l) = (g.alpha(), g.l());
    let fwd_l = forward_l_prime(alpha, l);
    let fwd_lhs = sup_norm_estimate(p, g, cfg)?;
    let fwd_rhs = coeff_norm(p, &g.with_l(fwd_l))?;

    let (rev_l, q) = reverse_l_prime(alpha, l, p.dim());
    let constant = 1.0 / (1.0 - q);
    let rev_lhs = coeff_norm(p, g)?;
    let rev_rhs = constant * sup_norm_estimate(p, &g.with_l(rev_l), cfg)?;

    let measured = (fwd_lhs / fwd_rhs).max(rev_lhs / rev_rhs);
    let mut report = BoundReport::new("embedding", measured, 1.0)
        .param("alpha", alpha)
        .param("l", l as f64)
        .param("l_prime_forward", fwd_l as f64)
        .param("l_prime_reverse", rev_l as f64)
        .param("reverse_constant", constant)
        .param("embedding_constant", (p.dim() as f64).sqrt())
        .rows(vec![
            BreakdownRow {
                label: "forward".into(),
                degree: p.degree(),
                measured: fwd_lhs,
                theoretical: fwd_rhs,
            },
            BreakdownRow {
                label: "reverse".into(),
                degree: p.degree(),
                measured: rev_lhs,
                theoretical: rev_rhs,
            },
        ])
        .note("sup norms are sampled lower estimates")
        .note("reverse constant uses sqrt(d) as the finite-dimensional embedding constant");
    report.pass = within(fwd_lhs, fwd_rhs) && within(rev_lhs, rev_rhs);
    Ok(report)
}

/// Measures `sup_p ||S p||_{l,alpha} / ||p||_{l',alpha}` over `samples` against
/// `(1 - 2^l C / (2^{l'} - C))^{-1}`, where `C = max_k ||A_k||^{1/k}` over
/// the built degrees. Without an explicit `l'` the smallest one with
/// `2^{l'} > C (1 + 2^l)` is used; an explicit `l'` violating it is an error.
pub fn operator_bound_check(
    seq: &ShefferSequence<Complex64>,
    g: &GradedNorm,
    l_prime: Option<u32>,
    samples: &[PolynomialOnDual<Complex64>],
) -> Result<BoundReport> {
    if g.alpha() > 1.0 {
        return Err(Error::Precondition(format!("order {} exceeds 1", g.alpha())));
    }
    let norms = block_norms(seq.a(), g.weight())?;
    let c5 = envelope(&norms);
    let two_l = 2f64.powi(g.l() as i32);
    let admissible = |r: u32| 2f64.powi(r as i32) > c5 * (1.0 + two_l);
    let l_prime = match l_prime {
        Some(r) if !admissible(r) => {
            return Err(Error::Precondition(format!(
                "l' = {r} too small: need 2^l' > {:.6} for the measured envelope {c5:.6}",
                c5 * (1.0 + two_l)
            )))
        }
        Some(r) => r,
        None => (0..).find(|&r| admissible(r)).expect("finite envelope"),
    };
    let two_lp = 2f64.powi(l_prime as i32);
    let bound = 1.0 / (1.0 - two_l * c5 / (two_lp - c5));
    let den_norm = g.with_l(l_prime);
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    for p in samples {
        let den = coeff_norm(p, &den_norm)?;
        if den == 0.0 {
            continue;
        }
        let ratio = coeff_norm(&sheffer_apply(seq, p)?, g)? / den;
        worst = worst.max(ratio);
        rows.push(BreakdownRow {
            label: "sample".into(),
            degree: p.degree(),
            measured: ratio,
            theoretical: bound,
        });
    }
    Ok(BoundReport::new("operator", worst, bound)
        .param("alpha", g.alpha())
        .param("l", g.l() as f64)
        .param("l_prime", l_prime as f64)
        .param("c5", c5)
        .param("max_degree", seq.max_degree() as f64)
        .rows(rows)
        .note("c5 is the envelope of the blocks of A over the built degrees only"))
}

/// Fits the smallest `C >= 1` with `||x^(n)|| <= C^n (n!)^{1/beta - 1}` for
/// both the `1/rho` and the `rho` coefficients, degree by degree.
///
/// With `C(M)` the fit over degrees `<= M`, the check passes when `C(N)` is
/// finite and within 20% of both `C(N-2)` and `C(floor(N/2))`; the second
/// comparison catches fits that creep up slowly from degree to degree.
pub fn appell_condition_check(seq: &ShefferSequence<Complex64>, beta: f64, weight: &WeightedInnerProduct) -> Result<BoundReport> {
    if !seq.is_appell() {
        return Err(Error::Precondition("growth condition applies to Appell sequences".into()));
    }
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::Precondition(format!("order must be positive, got {beta}")));
    }
    let top = seq.max_degree();
    if top < 2 {
        return Err(Error::Precondition("need at least two built degrees".into()));
    }
    let mut per_degree = vec![0.0; top + 1];
    let mut rows = Vec::new();
    for n in 1..=top {
        let rho_n = SymCoeff::from_series(seq.rho(), n);
        let worst = sym_norm(&seq.theta()[n], weight)?.max(sym_norm(&rho_n, weight)?);
        // (||x|| / (n!)^{1/beta - 1})^{1/n}
        let fit = if worst == 0.0 {
            0.0
        } else {
            ((worst.ln() - (1.0 / beta - 1.0) * ln_factorial(n)) / n as f64).exp()
        };
        per_degree[n] = fit;
        rows.push(BreakdownRow {
            label: "degree".into(),
            degree: Some(n),
            measured: fit,
            theoretical: f64::NAN,
        });
    }
    let fit_upto = |m: usize| per_degree[1..=m].iter().fold(1.0f64, |a, &b| a.max(b));
    let c_top = fit_upto(top);
    let c_back = fit_upto(top - 2).max(1.0);
    let c_half = fit_upto((top / 2).max(1));
    let theoretical = 1.2 * c_back.min(c_half);
    for row in &mut rows {
        row.theoretical = c_top;
    }
    let mut report = BoundReport::new("appell", c_top, theoretical)
        .param("beta", beta)
        .param("c_top", c_top)
        .param("c_back", c_back)
        .param("c_half", c_half)
        .param("max_degree", top as f64)
        .rows(rows)
        .note("growth constant fitted over the built degrees only");
    report.pass = c_top.is_finite() && report.pass;
    Ok(report)
}

/// `max_k ||A_k||^{1/k}` over `k >= 1`.
pub(crate) fn envelope(norms: &[f64]) -> f64 {
    norms
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, n)| n.powf(1.0 / k as f64))
        .fold(0.0, f64::max)
}

/// Denominator level for a divergence sweep of an Appell sequence: the
/// smallest `l'` with `2^{l'} > 2 C`, where `C` is the growth constant fitted
/// at `beta = alpha`. `None` when the sequence is not Appell or the growth
/// check fails.
pub fn appell_l_prime(seq: &ShefferSequence<Complex64>, alpha: f64, weight: &WeightedInnerProduct) -> Result<Option<u32>> {
    if !seq.is_appell() || seq.max_degree() < 2 {
        return Ok(None);
    }
    let report = appell_condition_check(seq, alpha, weight)?;
    if !report.pass {
        return Ok(None);
    }
    Ok((0..64).find(|&r| 2f64.powi(r as i32) > 2.0 * report.measured))
}
