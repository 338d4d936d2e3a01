use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::index::MultiIndex;
use crate::series::TermDoc;

use super::SymCoeff;

/// `{"dim":d,"degree":n,"terms":[{"exp":[..],"re":x,"im":y},...]}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymCoeffDoc {
    pub dim: usize,
    pub degree: usize,
    pub terms: Vec<TermDoc>,
}

impl SymCoeff<Complex64> {
    pub fn to_doc(&self) -> Result<SymCoeffDoc> {
        Ok(SymCoeffDoc {
            dim: self.dim,
            degree: self.degree,
            terms: self
                .coeffs()
                .map(|(m, c)| crate::series::term_doc(m, c))
                .collect::<Result<_>>()?,
        })
    }

    pub fn from_doc(doc: &SymCoeffDoc) -> Result<Self> {
        let terms = doc
            .terms
            .iter()
            .map(|t| Ok((MultiIndex::checked(&t.exp, doc.dim)?, Complex64::new(t.re, t.im))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(doc.dim, doc.degree, terms)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_doc()?)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_doc(&serde_json::from_str(text)?)
    }
}
