use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::MultiIndex;

use super::{Series, VectorSeries};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermDoc {
    pub exp: Vec<usize>,
    pub re: f64,
    pub im: f64,
}

/// `{"dim":d,"max_degree":N,"terms":[{"exp":[..],"re":x,"im":y},...]}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesDoc {
    pub dim: usize,
    pub max_degree: usize,
    pub terms: Vec<TermDoc>,
}

/// A vector series: the input dimension, truncation order and one series
/// document per output coordinate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VectorSeriesDoc {
    pub dim: usize,
    pub max_degree: usize,
    pub components: Vec<SeriesDoc>,
}

pub(crate) fn term_doc(m: &MultiIndex, c: &Complex64) -> Result<TermDoc> {
    if !(c.re.is_finite() && c.im.is_finite()) {
        return Err(Error::Format(format!("non-finite coefficient at {m:?}")));
    }
    Ok(TermDoc {
        exp: m.to_vec(),
        re: c.re,
        im: c.im,
    })
}

impl Series<Complex64> {
    pub fn to_doc(&self) -> Result<SeriesDoc> {
        Ok(SeriesDoc {
            dim: self.dim,
            max_degree: self.max_degree,
            terms: self
                .terms()
                .map(|(m, c)| term_doc(m, c))
                .collect::<Result<_>>()?,
        })
    }

    pub fn from_doc(doc: &SeriesDoc) -> Result<Self> {
        let terms = doc
            .terms
            .iter()
            .map(|t| {
                let idx = MultiIndex::checked(&t.exp, doc.dim)?;
                Ok((idx, Complex64::new(t.re, t.im)))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(doc.dim, doc.max_degree, terms)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_doc()?)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_doc(&serde_json::from_str(text)?)
    }
}

impl VectorSeries<Complex64> {
    pub fn to_doc(&self) -> Result<VectorSeriesDoc> {
        Ok(VectorSeriesDoc {
            dim: self.dim_in(),
            max_degree: self.max_degree(),
            components: self
                .components()
                .iter()
                .map(Series::to_doc)
                .collect::<Result<_>>()?,
        })
    }

    pub fn from_doc(doc: &VectorSeriesDoc) -> Result<Self> {
        let components = doc
            .components
            .iter()
            .map(|c| Series::from_doc(c).map(|s| s.truncate(doc.max_degree)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(doc.dim, components)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_doc()?)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_doc(&serde_json::from_str(text)?)
    }
}
