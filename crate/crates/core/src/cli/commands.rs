use std::fmt::Write as _;

use num::complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::index::graded_basis;
use crate::scalar::Scalar;
use crate::norms::{
    appell_condition_check, appell_l_prime, divergence_sweep, embedding_check, operator_bound_check, quasi_holo_probe,
    BoundReport, BreakdownRow, GradedNorm, SupConfig,
};
use crate::series::Series;
use crate::sheffer::{sheffer_apply, sheffer_inverse_apply, PolynomialOnDual, ShefferSequence};
use crate::tensor::{sym_norm_identity, WeightedInnerProduct};

use super::config::Settings;
use super::{random_polynomial, BoundKind, Format, LPrime, Output};

const ROUNDTRIP_TOLERANCE: f64 = 1e-9;

fn json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn output(document: String, summary: String, pass: bool) -> Output {
    Output {
        document,
        summary,
        pass,
        out: None,
    }
}

pub(crate) fn family(s: &Settings) -> Result<Output> {
    let seq = s.sequence(None)?;
    let mut summary = format!("family {}\n{:>6} {:>8} {:>14} {:>14}\n", s.family_label(), "degree", "size", "theta", "kappa");
    for n in 0..=seq.max_degree() {
        let _ = writeln!(
            summary,
            "{n:>6} {:>8} {:>14.6e} {:>14.6e}",
            seq.basis(n).len(),
            sym_norm_identity(&seq.theta()[n]),
            sym_norm_identity(&seq.kappa()[n]),
        );
    }
    Ok(output(seq.to_json(true)? + "\n", summary, true))
}

fn read_polynomial(s: &Settings, dim: usize) -> Result<PolynomialOnDual<Complex64>> {
    let path = s.input.as_ref().ok_or_else(|| Error::InvalidSpec("--input is required".into()))?;
    let series = Series::<Complex64>::from_json(&std::fs::read_to_string(path)?)?;
    crate::error::check_dim(dim, series.dim())?;
    Ok(PolynomialOnDual::from_series(&series))
}

fn polynomial_document(p: &PolynomialOnDual<Complex64>, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(p.to_series().to_json()? + "\n"),
        Format::Csv => {
            let mut out = String::from("degree,exponents,re,im\n");
            for part in p.parts() {
                for (m, c) in part.coeffs() {
                    let exps: Vec<String> = m.exps().map(|e| e.to_string()).collect();
                    let _ = writeln!(out, "{},{},{:e},{:e}", m.degree(), exps.join(" "), c.re, c.im);
                }
            }
            Ok(out)
        }
    }
}

fn polynomial_summary(title: &str, p: &PolynomialOnDual<Complex64>) -> String {
    let mut out = format!("{title}\n{:>6} {:>8} {:>14}\n", "degree", "terms", "norm");
    for (n, part) in p.parts().iter().enumerate() {
        if !part.is_zero() {
            let _ = writeln!(out, "{n:>6} {:>8} {:>14.6e}", part.len(), sym_norm_identity(part));
        }
    }
    out
}

/// Transforms run over the double-double field and are rounded once at the end.
pub(crate) fn transform(s: &Settings, expand: bool) -> Result<Output> {
    let seq = s.wide_sequence()?;
    let p = read_polynomial(s, seq.dim())?.map(Scalar::widen);
    let (result, title) = if expand {
        (sheffer_inverse_apply(&seq, &p)?, "expansion coefficients")
    } else {
        (sheffer_apply(&seq, &p)?, "image")
    };
    let result = result.map(Scalar::to_c64);
    Ok(output(polynomial_document(&result, s.format)?, polynomial_summary(title, &result), true))
}

/// `max |S^{-1} S p - p| / max |p|`.
pub(crate) fn relative_roundtrip_error<S: Scalar>(seq: &ShefferSequence<S>, p: &PolynomialOnDual<Complex64>) -> Result<f64> {
    let q = p.map(|c| S::from_c64(*c).expect("finite coefficients"));
    let back = sheffer_inverse_apply(seq, &sheffer_apply(seq, &q)?)?.map(Scalar::to_c64);
    let size = p.max_abs();
    Ok(if size == 0.0 { 0.0 } else { back.max_abs_diff(p) / size })
}

fn report_document(reports: &[BoundReport], format: Format) -> Result<String> {
    match format {
        Format::Json if reports.len() == 1 => json(&reports[0]),
        Format::Json => json(&reports),
        Format::Csv => {
            let mut out = String::from(BoundReport::CSV_HEADER);
            out.push('\n');
            for r in reports {
                out.push_str(&r.csv_row());
                out.push('\n');
            }
            Ok(out)
        }
    }
}

pub(crate) fn report_summary(reports: &[BoundReport]) -> String {
    let mut out = format!("{:<12} {:>14} {:>14} {:>6}\n", "check", "measured", "theoretical", "pass");
    for r in reports {
        let _ = writeln!(
            out,
            "{:<12} {:>14.6e} {:>14.6e} {:>6}",
            r.check,
            r.measured,
            r.theoretical,
            if r.pass { "yes" } else { "no" }
        );
    }
    out
}

fn reports_output(reports: Vec<BoundReport>, format: Format) -> Result<Output> {
    let pass = reports.iter().all(|r| r.pass);
    Ok(output(report_document(&reports, format)?, report_summary(&reports), pass))
}

/// Round trip over the double-double field; the plain double-precision error is reported alongside.
pub(crate) fn roundtrip(s: &Settings) -> Result<Output> {
    let seq = s.sequence(None)?;
    let wide = s.wide_sequence()?;
    let samples = match &s.input {
        Some(_) => vec![read_polynomial(s, seq.dim())?],
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
            (0..s.samples.unwrap_or(100))
                .map(|_| random_polynomial(seq.dim(), seq.max_degree(), &mut rng))
                .collect()
        }
    };
    let mut rows = Vec::new();
    let (mut worst, mut worst_double) = (0.0f64, 0.0f64);
    for p in &samples {
        let err = relative_roundtrip_error(&wide, p)?;
        worst = worst.max(err);
        worst_double = worst_double.max(relative_roundtrip_error(&seq, p)?);
        rows.push(BreakdownRow {
            label: "sample".into(),
            degree: p.degree(),
            measured: err,
            theoretical: ROUNDTRIP_TOLERANCE,
        });
    }
    let report = BoundReport::new("roundtrip", worst, ROUNDTRIP_TOLERANCE)
        .param("samples", samples.len() as f64)
        .param("dim", seq.dim() as f64)
        .param("max_degree", seq.max_degree() as f64)
        .param("double_precision_error", worst_double)
        .rows(rows)
        .note("relative error: max coefficient deviation over max coefficient")
        .note("computed over double-double; double_precision_error is the same round trip in f64");
    reports_output(vec![report], s.format)
}

pub(crate) fn bounds(s: &Settings) -> Result<Output> {
    let seq = s.sequence(None)?;
    let (d, top) = (seq.dim(), seq.max_degree());
    let alpha = s.alpha.unwrap_or(1.0);
    let g = GradedNorm::identity(d, alpha, s.l)?;
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let report = match s.check {
        BoundKind::Operator => {
            let mut samples: Vec<PolynomialOnDual<Complex64>> = graded_basis(d, top)
                .iter()
                .map(|m| PolynomialOnDual::monomial(top, &m.to_vec(), Complex64::new(1.0, 0.0)))
                .collect::<Result<_>>()?;
            samples.extend((0..s.samples.unwrap_or(0)).map(|_| random_polynomial(d, top, &mut rng)));
            let l_prime = match s.l_prime {
                None | Some(LPrime::Auto) => None,
                Some(LPrime::Level(r)) => Some(r),
            };
            operator_bound_check(&seq, &g, l_prime, &samples)?
        }
        BoundKind::Embedding => embedding_sweep(d, top, &g, s.samples.unwrap_or(100), s.seed)?,
        BoundKind::Appell => appell_condition_check(&seq, s.beta.unwrap_or(alpha), g.weight())?,
    };
    reports_output(vec![report], s.format)
}

/// Both embeddings on `count` random polynomials of degree `1..=top`, folded into one report.
pub(crate) fn embedding_sweep(dim: usize, top: usize, g: &GradedNorm, count: usize, seed: u64) -> Result<BoundReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let (mut worst, mut pass) = (0.0f64, true);
    let mut params = None;
    for i in 0..count {
        let degree = rng.random_range(1..=top.max(1));
        let p = random_polynomial(dim, degree, &mut rng);
        let cfg = SupConfig {
            seed: seed.wrapping_add(i as u64),
            ..SupConfig::default()
        };
        let r = embedding_check(&p, g, &cfg)?;
        worst = worst.max(r.measured);
        pass &= r.pass;
        rows.extend(r.breakdown.iter().cloned());
        params.get_or_insert(r.params);
    }
    let mut report = BoundReport::new("embedding", worst, 1.0).rows(rows);
    report.params = params.unwrap_or_default();
    report.params.insert("samples".into(), count as f64);
    report.pass = pass;
    Ok(report
        .note("sup norms are sampled lower estimates")
        .note("reverse constant uses sqrt(d) as the finite-dimensional embedding constant"))
}

pub(crate) fn diverge(s: &Settings) -> Result<Output> {
    let alpha = s.alpha.unwrap_or(2.0);
    let degrees = s.degrees.unwrap_or(super::DegreeRange { start: 1, end: 24 });
    let seq = s.sequence(Some(degrees.end))?;
    let weight = WeightedInnerProduct::identity(seq.dim());
    let l_prime = match s.l_prime.unwrap_or(LPrime::Auto) {
        LPrime::Level(r) => r,
        LPrime::Auto => appell_l_prime(&seq, alpha, &weight)?.unwrap_or(0),
    };
    let table = divergence_sweep(&seq, alpha, degrees.start..=degrees.end, l_prime, &weight)?;
    let document = match s.format {
        Format::Json => json(&table)?,
        Format::Csv => table.to_csv(),
    };
    let verdict = match table.verdict {
        crate::norms::Verdict::Bounded => "bounded",
        crate::norms::Verdict::UnboundedLooking => "unbounded-looking",
    };
    let mut summary = format!(
        "family {}  alpha {}  l' {}  verdict {verdict}\n{:>6} {:>14}\n",
        s.family_label(),
        alpha,
        l_prime,
        "degree",
        "ratio"
    );
    for r in &table.rows {
        let _ = writeln!(summary, "{:>6} {:>14.6e}", r.degree, r.ratio);
    }
    Ok(output(document, summary, true))
}

pub(crate) fn probe(s: &Settings) -> Result<Output> {
    let seq = s.sequence(None)?;
    let report = quasi_holo_probe(seq.a(), &WeightedInnerProduct::identity(seq.dim()))?;
    let mut table = String::from("degree,norm,inverse_norm\n");
    for (k, (a, b)) in report.norms.iter().zip(&report.inverse_norms).enumerate() {
        let _ = writeln!(table, "{k},{a:e},{b:e}");
    }
    let document = match s.format {
        Format::Json => json(&report)?,
        Format::Csv => table,
    };
    let summary = format!(
        "family {}\nenvelope {:.6e}  inverse envelope {:.6e}  ratio {:.6e}\n{}\n",
        s.family_label(),
        report.envelope,
        report.inverse_envelope,
        report.envelope_ratio,
        report.note
    );
    Ok(output(document, summary, true))
}
