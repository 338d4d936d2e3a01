//! Classical Sheffer families and the lifting of one-variable pairs to `d` coordinates.
//!
//! A one-variable pair `(a, c)` with `a(u) = u + ...` and `c(0) = 0` lifts to
//!
//! ```text
//! A_i(x) = a(x_i),    rho(x) = exp(sum_i w_i c(x_i))
//! ```
//!
//! with positive weights `w_i`. The catalog, in terms of `(a, c)`:
//!
//! | kind     | `a(u)`        | `c(v)` / `rho`                    |
//! |----------|---------------|-----------------------------------|
//! | hermite  | `u`           | `rho = exp(x^T C x / 2)`          |
//! | charlier | `log(1+u)`    | `e^v - 1`                         |
//! | laguerre | `u/(1+u)`     | `-(k+1) log(1-v)`                 |
//! | falling  | `log(1+u)`    | `0`                               |
//! | rising   | `-log(1-u)`   | `0`                               |
//!
//! so that `1/rho(A(x))` is `exp(-x^T C x / 2)`, `exp(-sum w_i x_i)` and
//! `prod (1+x_i)^{-w_i (k+1)}` respectively.

use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::scalar::Scalar;
use crate::series::{Series, SeriesDoc, VectorSeries, VectorSeriesDoc};
use crate::sheffer::{build_sheffer, ShefferSequence};
use crate::tensor::WeightedInnerProduct;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Hermite,
    Charlier,
    Laguerre,
    Falling,
    Rising,
    Custom,
}

impl std::str::FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| Error::InvalidSpec(format!("unknown family kind {s:?}")))
    }
}

/// A named one-variable series or an explicit document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SeriesSpec {
    Named(String),
    Doc(SeriesDoc),
}

/// A named one-variable series applied in every coordinate, or an explicit map.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapSpec {
    Named(String),
    Doc(VectorSeriesDoc),
}

/// `{"kind":"hermite","dim":2,"cov":[[..]],"N":10,"weights":[..]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub dim: usize,
    #[serde(rename = "N")]
    pub max_degree: usize,
    /// Hermite covariance, identity when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cov: Option<Vec<Vec<f64>>>,
    /// Lifting weights, all ones when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    /// Laguerre parameter `k >= -1`, zero when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<MapSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<SeriesSpec>,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind, dim: usize, max_degree: usize) -> Self {
        Self {
            kind,
            dim,
            max_degree,
            cov: None,
            weights: None,
            k: None,
            a: None,
            rho: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// One-variable series by name: `identity`, `log1p`, `neg_log1m`, `u_over_1pu`, `expm1`.
pub fn named_series<S: Scalar>(name: &str, max_degree: usize) -> Result<Series<S>> {
    let coeff = |k: usize| -> S {
        let k64 = k as i64;
        match name {
            "identity" => S::from_i64((k == 1) as i64),
            "log1p" if k > 0 => S::ratio(if k % 2 == 1 { 1 } else { -1 }, k64),
            "neg_log1m" if k > 0 => S::ratio(1, k64),
            "u_over_1pu" if k > 0 => S::from_i64(if k % 2 == 1 { 1 } else { -1 }),
            "expm1" if k > 0 => S::one() / crate::scalar::factorial::<S>(k),
            _ => S::zero(),
        }
    };
    if !["identity", "log1p", "neg_log1m", "u_over_1pu", "expm1"].contains(&name) {
        return Err(Error::InvalidSpec(format!("unknown series {name:?}")));
    }
    Ok(Series::univariate(&(0..=max_degree).map(coeff).collect::<Vec<_>>(), max_degree))
}

/// `A_i(x) = a(x_i)` and `rho(x) = exp(sum_i w_i c(x_i))`.
pub fn lift_1d<S: Scalar>(a: &Series<S>, c: &Series<S>, dim: usize, weights: &[S]) -> Result<(VectorSeries<S>, Series<S>)> {
    if a.dim() != 1 || c.dim() != 1 {
        return Err(Error::InvalidSpec("lifting needs one-variable series".into()));
    }
    if weights.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: weights.len(),
        });
    }
    if !c.constant_term().is_zero() {
        return Err(Error::NonzeroConstant);
    }
    let lifted = VectorSeries::componentwise(a, dim)?;
    if !lifted.is_unit_linear() {
        return Err(Error::NotUnitLinear);
    }
    let n = a.max_degree().min(c.max_degree());
    let mut sum = Series::zero(dim, n);
    for (i, w) in weights.iter().enumerate() {
        let coordinate = VectorSeries::new(dim, vec![Series::var(dim, i, n)])?;
        sum = sum.add(&c.truncate(n).compose(&coordinate)?.scale(w))?;
    }
    Ok((lifted.truncate(n), sum.exp()?))
}

/// The pair `(A, rho)` of a catalog family.
pub fn make_family<S: Scalar>(spec: &FamilySpec) -> Result<(VectorSeries<S>, Series<S>)> {
    let (d, n) = (spec.dim, spec.max_degree);
    if d == 0 {
        return Err(Error::InvalidSpec("dimension must be positive".into()));
    }
    let weights = lifting_weights::<S>(spec)?;
    let lift = |a: &str, c: Series<S>| lift_1d(&named_series(a, n)?, &c, d, &weights);
    match spec.kind {
        FamilyKind::Hermite => {
            let cov = covariance(spec)?;
            let mut terms = Vec::new();
            for i in 0..d {
                for j in i..d {
                    let scale = if i == j { 0.5 } else { 1.0 };
                    let v = S::from_f64(cov[i][j] * scale).ok_or_else(|| Error::InvalidSpec("covariance entry".into()))?;
                    let mut e = vec![0; d];
                    e[i] += 1;
                    e[j] += 1;
                    terms.push((MultiIndex::new(&e), v));
                }
            }
            let quad = Series::from_terms(d, n, terms)?;
            Ok((VectorSeries::identity(d, n), quad.exp()?))
        }
        FamilyKind::Charlier => lift("log1p", named_series("expm1", n)?),
        FamilyKind::Laguerre => {
            let k = spec.k.unwrap_or(0.0);
            if !(k.is_finite() && k >= -1.0) {
                return Err(Error::InvalidSpec(format!("Laguerre parameter must be >= -1, got {k}")));
            }
            let scale = S::from_f64(k + 1.0).ok_or_else(|| Error::InvalidSpec("Laguerre parameter".into()))?;
            lift("u_over_1pu", named_series::<S>("neg_log1m", n)?.scale(&scale))
        }
        FamilyKind::Falling => lift("log1p", Series::zero(1, n)),
        FamilyKind::Rising => lift("neg_log1m", Series::zero(1, n)),
        FamilyKind::Custom => custom(spec),
    }
}

/// Builds the sequence of a catalog family at the spec's truncation order.
pub fn build_family<S: Scalar>(spec: &FamilySpec) -> Result<ShefferSequence<S>> {
    let (a, rho) = make_family::<S>(spec)?;
    build_sheffer(&a, &rho, spec.max_degree)
}

fn lifting_weights<S: Scalar>(spec: &FamilySpec) -> Result<Vec<S>> {
    let weights = spec.weights.clone().unwrap_or_else(|| vec![1.0; spec.dim]);
    if weights.len() != spec.dim {
        return Err(Error::InvalidSpec(format!("{} weights for dimension {}", weights.len(), spec.dim)));
    }
    weights
        .iter()
        .map(|&w| {
            if w.is_finite() && w > 0.0 {
                S::from_f64(w).ok_or_else(|| Error::InvalidSpec("weight".into()))
            } else {
                Err(Error::InvalidSpec(format!("weights must be positive, got {w}")))
            }
        })
        .collect()
}

fn covariance(spec: &FamilySpec) -> Result<Vec<Vec<f64>>> {
    let d = spec.dim;
    let cov = spec.cov.clone().unwrap_or_else(|| {
        (0..d).map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect()
    });
    if cov.len() != d || cov.iter().any(|r| r.len() != d) {
        return Err(Error::InvalidSpec(format!("covariance must be {d} x {d}")));
    }
    let rows: Vec<Vec<Complex64>> = cov.iter().map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect()).collect();
    WeightedInnerProduct::from_rows(&rows).map_err(|e| match e {
        Error::NotPositiveDefinite => Error::InvalidSpec("covariance must be positive definite".into()),
        other => other,
    })?;
    Ok(cov)
}

fn convert<S: Scalar>(s: &Series<Complex64>) -> Result<Series<S>> {
    let terms = s
        .terms()
        .map(|(m, c)| {
            S::from_c64(*c)
                .map(|v| (m.clone(), v))
                .ok_or_else(|| Error::InvalidSpec(format!("coefficient {c} not representable")))
        })
        .collect::<Result<Vec<_>>>()?;
    Series::from_terms(s.dim(), s.max_degree(), terms)
}

fn custom<S: Scalar>(spec: &FamilySpec) -> Result<(VectorSeries<S>, Series<S>)> {
    let (d, n) = (spec.dim, spec.max_degree);
    let a: VectorSeries<S> = match &spec.a {
        None => VectorSeries::identity(d, n),
        Some(MapSpec::Named(name)) => VectorSeries::componentwise(&named_series(name, n)?, d)?,
        Some(MapSpec::Doc(doc)) => {
            let v = VectorSeries::<Complex64>::from_doc(doc)?;
            let comps = v.components().iter().map(convert).collect::<Result<Vec<_>>>()?;
            VectorSeries::new(v.dim_in(), comps)?
        }
    };
    let rho: Series<S> = match &spec.rho {
        None => Series::one(d, n),
        Some(SeriesSpec::Named(name)) if name == "one" => Series::one(d, n),
        Some(SeriesSpec::Named(name)) => return Err(Error::InvalidSpec(format!("unknown rho {name:?}"))),
        Some(SeriesSpec::Doc(doc)) => convert(&Series::<Complex64>::from_doc(doc)?)?,
    };
    if a.dim_in() != d || a.dim_out() != d || rho.dim() != d {
        return Err(Error::InvalidSpec(format!("custom pair does not have dimension {d}")));
    }
    if a.max_degree() < n || rho.max_degree() < n {
        return Err(Error::InvalidSpec(format!("custom pair is truncated below degree {n}")));
    }
    if !a.is_unit_linear() {
        return Err(Error::InvalidSpec("custom map is not unit-linear".into()));
    }
    if !rho.constant_term().is_one() {
        return Err(Error::InvalidSpec("custom rho must have constant term 1".into()));
    }
    Ok((a.truncate(n), rho.truncate(n)))
}
