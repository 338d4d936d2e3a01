use num::complex::Complex64;
use num::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::families::{build_family, make_family, FamilyKind, FamilySpec};
use crate::index::{basis, MultiIndex};
use crate::norms::{appell_condition_check, appell_l_prime, divergence_sweep, operator_bound_check, quasi_holo_probe};
use crate::norms::{BoundReport, GradedNorm};
use crate::scalar::{ComplexWide, Scalar};
use crate::series::VectorSeries;
use crate::sheffer::{binomial_check, build_basic, sheffer_apply, umbral_apply_direct, PolynomialOnDual};
use crate::tensor::{sym_norm_identity, SymCoeff, WeightedInnerProduct, DEFAULT_DENSE_BUDGET};

use super::commands::{embedding_sweep, relative_roundtrip_error, report_summary};
use super::config::{kind_name, Settings};
use super::{random_polynomial, Format, Output};

const CATALOG: [FamilyKind; 5] = [
    FamilyKind::Hermite,
    FamilyKind::Charlier,
    FamilyKind::Laguerre,
    FamilyKind::Falling,
    FamilyKind::Rising,
];

/// Runs the invariant suite with small sizes; one report per invariant.
pub(crate) fn check(s: &Settings) -> Result<Output> {
    let seed = s.seed;
    let reports = vec![
        classical()?,
        inversion()?,
        binomial(seed)?,
        roundtrip(seed)?,
        umbral(seed)?,
        operator()?,
        embedding(seed)?,
        divergence()?,
        appell()?,
        tensor(seed)?,
        probe()?,
    ];
    let pass = reports.iter().all(|r| r.pass);
    let document = match s.format {
        Format::Json => serde_json::to_string_pretty(&reports)? + "\n",
        Format::Csv => {
            let mut out = String::from(BoundReport::CSV_HEADER);
            out.push('\n');
            for r in &reports {
                out.push_str(&r.csv_row());
                out.push('\n');
            }
            out
        }
    };
    Ok(Output {
        document,
        summary: report_summary(&reports),
        pass,
        out: None,
    })
}

fn spec(kind: FamilyKind, dim: usize, n: usize) -> FamilySpec {
    FamilySpec::new(kind, dim, n)
}

/// Exact comparison in rationals against the monic Hermite recurrence and `prod (z - j)`.
fn classical() -> Result<BoundReport> {
    type Q = BigRational;
    let n = 10;
    let hermite = build_family::<Q>(&spec(FamilyKind::Hermite, 1, n))?;
    let falling = build_family::<Q>(&spec(FamilyKind::Falling, 1, n))?;
    let mut mismatches = 0usize;
    let (mut prev, mut cur) = (vec![Q::from_i64(1)], vec![Q::from_i64(0), Q::from_i64(1)]);
    let mut product = vec![Q::from_i64(1)];
    for m in 0..=n {
        let he = if m == 0 { prev.clone() } else { cur.clone() };
        for (seq, oracle) in [(&hermite, &he), (&falling, &product)] {
            let image = seq.image_of_monomial(&MultiIndex::new(&[m]))?.to_series();
            for j in 0..=n {
                let expected = oracle.get(j).cloned().unwrap_or_else(|| Q::from_i64(0));
                if image.coeff_of(&[j]) != expected {
                    mismatches += 1;
                }
            }
        }
        if m >= 1 {
            // He_{m+1} = z He_m - m He_{m-1}
            let mut next = vec![Q::from_i64(0); m + 2];
            for (i, c) in cur.iter().enumerate() {
                next[i + 1] = next[i + 1].clone() + c.clone();
            }
            for (i, c) in prev.iter().enumerate() {
                next[i] = next[i].clone() - Q::from_i64(m as i64) * c.clone();
            }
            prev = std::mem::replace(&mut cur, next);
        }
        // (z)_{m+1} = (z)_m (z - m)
        let mut next = vec![Q::from_i64(0); product.len() + 1];
        for (i, c) in product.iter().enumerate() {
            next[i + 1] = next[i + 1].clone() + c.clone();
            next[i] = next[i].clone() - Q::from_i64(m as i64) * c.clone();
        }
        product = next;
    }
    Ok(BoundReport::new("classical", mismatches as f64, 0.0)
        .param("max_degree", n as f64)
        .note("hermite and falling factorial coefficients compared exactly"))
}

fn inversion() -> Result<BoundReport> {
    let mut worst: f64 = 0.0;
    for kind in CATALOG {
        let (a, _) = make_family::<Complex64>(&spec(kind, 2, 8))?;
        let b = a.inverse()?;
        let id = VectorSeries::identity(2, 8);
        worst = worst.max(b.compose(&a)?.max_abs_diff(&id)).max(a.compose(&b)?.max_abs_diff(&id));
    }
    Ok(BoundReport::new("inversion", worst, 1e-12).param("dim", 2.0).param("max_degree", 8.0))
}

fn binomial(seed: u64) -> Result<BoundReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for kind in [FamilyKind::Falling, FamilyKind::Rising] {
        let seq = build_family::<Complex64>(&spec(kind, 2, 8))?;
        worst = worst.max(binomial_check(&seq, 50, &mut rng)?.max_deviation);
    }
    Ok(BoundReport::new("binomial", worst, 1e-9).param("trials", 50.0))
}

fn roundtrip(seed: u64) -> Result<BoundReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut worst, mut worst_double) = (0.0f64, 0.0f64);
    for kind in CATALOG {
        let seq = build_family::<Complex64>(&spec(kind, 2, 8))?;
        let wide = build_family::<ComplexWide>(&spec(kind, 2, 8))?;
        for _ in 0..20 {
            let p = random_polynomial(2, 8, &mut rng);
            worst = worst.max(relative_roundtrip_error(&wide, &p)?);
            worst_double = worst_double.max(relative_roundtrip_error(&seq, &p)?);
        }
    }
    Ok(BoundReport::new("roundtrip", worst, 1e-9)
        .param("samples", 20.0)
        .param("double_precision_error", worst_double))
}

fn umbral(seed: u64) -> Result<BoundReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for kind in [FamilyKind::Falling, FamilyKind::Rising, FamilyKind::Laguerre] {
        let (a, _) = make_family::<Complex64>(&spec(kind, 2, 6))?;
        let seq = build_basic(&a, 6)?;
        for _ in 0..10 {
            let p = random_polynomial(2, 6, &mut rng);
            let direct = umbral_apply_direct(&a, &p)?;
            worst = worst.max(direct.max_abs_diff(&sheffer_apply(&seq, &p)?) / p.max_abs());
        }
    }
    Ok(BoundReport::new("umbral", worst, 1e-10))
}

fn monomials(dim: usize, top: usize) -> Result<Vec<PolynomialOnDual<Complex64>>> {
    (0..=top)
        .flat_map(|n| basis(dim, n))
        .map(|m| PolynomialOnDual::monomial(top, &m.to_vec(), Complex64::new(1.0, 0.0)))
        .collect()
}

fn operator() -> Result<BoundReport> {
    let mut worst_ratio: f64 = 0.0;
    let mut pass = true;
    let mut rows = Vec::new();
    for (kind, dim, top) in [(FamilyKind::Falling, 1, 12), (FamilyKind::Charlier, 2, 8)] {
        let seq = build_family::<Complex64>(&spec(kind, dim, top))?;
        let r = operator_bound_check(&seq, &GradedNorm::identity(dim, 1.0, 0)?, None, &monomials(dim, top)?)?;
        worst_ratio = worst_ratio.max(r.measured / r.theoretical);
        pass &= r.pass;
        rows.push(crate::norms::BreakdownRow {
            label: kind_name(kind).into(),
            degree: Some(top),
            measured: r.measured,
            theoretical: r.theoretical,
        });
    }
    let mut report = BoundReport::new("operator", worst_ratio, 1.0)
        .rows(rows)
        .note("measured is the largest ratio of measured sup to bound");
    report.pass &= pass;
    Ok(report)
}

fn embedding(seed: u64) -> Result<BoundReport> {
    let mut worst: f64 = 0.0;
    let mut pass = true;
    for alpha in [0.5, 1.0, 2.0] {
        let r = embedding_sweep(2, 6, &GradedNorm::identity(2, alpha, 0)?, 10, seed)?;
        worst = worst.max(r.measured);
        pass &= r.pass;
    }
    let mut report = BoundReport::new("embedding", worst, 1.0).note("sup norms are sampled lower estimates");
    report.pass &= pass;
    Ok(report)
}

/// Falling factorials must grow past 10x between degrees 5 and 24; Hermite,
/// at the level given by its growth constant, must not.
fn divergence() -> Result<BoundReport> {
    let w = WeightedInnerProduct::identity(1);
    let falling = build_family::<Complex64>(&spec(FamilyKind::Falling, 1, 24))?;
    let f = divergence_sweep(&falling, 2.0, 1..=24, 0, &w)?;
    let falling_growth = f.ratio(24).unwrap_or(0.0) / f.ratio(5).unwrap_or(f64::INFINITY);
    let hermite = build_family::<Complex64>(&spec(FamilyKind::Hermite, 1, 24))?;
    let l_prime = appell_l_prime(&hermite, 2.0, &w)?.unwrap_or(0);
    let h = divergence_sweep(&hermite, 2.0, 1..=24, l_prime, &w)?;
    let hermite_growth = h.ratio(24).unwrap_or(f64::INFINITY) / h.ratio(5).unwrap_or(0.0);
    // both are pass-when-below: 10 / falling growth and hermite growth / 10
    let measured = (10.0 / falling_growth).max(hermite_growth / 10.0);
    Ok(BoundReport::new("divergence", measured, 1.0)
        .param("falling_growth", falling_growth)
        .param("hermite_growth", hermite_growth)
        .param("hermite_l_prime", l_prime as f64)
        .note("growth is ratio(24) / ratio(5) at alpha = 2"))
}

fn appell() -> Result<BoundReport> {
    let seq = build_family::<Complex64>(&spec(FamilyKind::Hermite, 1, 16))?;
    appell_condition_check(&seq, 2.0, &WeightedInnerProduct::identity(1))
}

/// `sym_norm` against the Euclidean norm of the dense symmetric tensor.
fn tensor(seed: u64) -> Result<BoundReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let dim = rng.random_range(1..=3);
        let n = rng.random_range(0..=4);
        let terms = basis(dim, n)
            .into_iter()
            .map(|m| (m, Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))));
        let phi = SymCoeff::from_terms(dim, n, terms)?;
        let dense = phi.to_dense(DEFAULT_DENSE_BUDGET)?.euclidean_norm();
        worst = worst.max((sym_norm_identity(&phi) - dense).abs());
    }
    Ok(BoundReport::new("tensor", worst, 1e-12))
}

fn probe() -> Result<BoundReport> {
    let mut worst: f64 = 0.0;
    for kind in CATALOG {
        let (a, _) = make_family::<Complex64>(&spec(kind, 2, 8))?;
        let r = quasi_holo_probe(&a, &WeightedInnerProduct::identity(2))?;
        worst = worst.max(r.envelope).max(r.inverse_envelope);
    }
    Ok(BoundReport::new("probe", worst, f64::MAX).note("envelopes over the built degrees must be finite"))
}
