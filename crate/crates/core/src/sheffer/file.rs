use std::path::Path;

use base64::engine::general_purpose::STANDARD;
use base64::Engine;
use num::complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::series::{Series, SeriesDoc, VectorSeries, VectorSeriesDoc};

use super::sequence::Block;
use super::{build_sheffer, ShefferSequence};

/// Sequence file: the defining pair plus, optionally, the precomputed blocks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceDoc {
    pub dim: usize,
    pub max_degree: usize,
    pub a: VectorSeriesDoc,
    pub rho: SeriesDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<BlockDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse_blocks: Option<Vec<BlockDoc>>,
}

/// One `(k, n)` block: row-major `(re, im)` little-endian f64 pairs, base64 encoded.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockDoc {
    pub k: usize,
    pub n: usize,
    pub rows: usize,
    pub cols: usize,
    pub data: String,
    pub sha256: String,
}

/// Relative agreement required between stored and recomputed blocks.
const BLOCK_TOLERANCE: f64 = 1e-9;

fn encode_block(k: usize, n: usize, block: &Block<Complex64>) -> BlockDoc {
    let mut bytes = Vec::with_capacity(block.data().len() * 16);
    for z in block.data() {
        bytes.extend_from_slice(&z.re.to_le_bytes());
        bytes.extend_from_slice(&z.im.to_le_bytes());
    }
    BlockDoc {
        k,
        n,
        rows: block.rows(),
        cols: block.cols(),
        sha256: hex::encode(Sha256::digest(&bytes)),
        data: STANDARD.encode(&bytes),
    }
}

fn decode_block(doc: &BlockDoc) -> Result<Block<Complex64>> {
    let bytes = STANDARD
        .decode(&doc.data)
        .map_err(|e| Error::Format(format!("block ({}, {}): {e}", doc.k, doc.n)))?;
    if hex::encode(Sha256::digest(&bytes)) != doc.sha256 {
        return Err(Error::Format(format!("block ({}, {}): checksum mismatch", doc.k, doc.n)));
    }
    if bytes.len() != doc.rows * doc.cols * 16 {
        return Err(Error::Format(format!("block ({}, {}): wrong length", doc.k, doc.n)));
    }
    let data = bytes
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
            Complex64::new(re, im)
        })
        .collect();
    Ok(Block::from_data(doc.rows, doc.cols, data))
}

fn verify(docs: &[BlockDoc], get: impl Fn(usize, usize) -> Option<Block<Complex64>>) -> Result<()> {
    for doc in docs {
        let stored = decode_block(doc)?;
        let fresh = get(doc.k, doc.n)
            .ok_or_else(|| Error::Format(format!("block ({}, {}) is out of range", doc.k, doc.n)))?;
        if fresh.rows() != stored.rows() || fresh.cols() != stored.cols() {
            return Err(Error::Format(format!("block ({}, {}): shape mismatch", doc.k, doc.n)));
        }
        for (a, b) in fresh.data().iter().zip(stored.data()) {
            if (a - b).norm() > BLOCK_TOLERANCE * a.norm().max(1.0) {
                return Err(Error::Format(format!(
                    "block ({}, {}) disagrees with recomputation",
                    doc.k, doc.n
                )));
            }
        }
    }
    Ok(())
}

impl ShefferSequence<Complex64> {
    pub fn to_doc(&self, with_blocks: bool) -> Result<SequenceDoc> {
        let collect = |inverse: bool| {
            let mut docs = Vec::new();
            for n in 0..=self.max_degree() {
                for k in 0..=n {
                    let b = if inverse { self.inverse_block(k, n) } else { self.block(k, n) };
                    docs.push(encode_block(k, n, b.expect("built")));
                }
            }
            docs
        };
        Ok(SequenceDoc {
            dim: self.dim(),
            max_degree: self.max_degree(),
            a: self.a().to_doc()?,
            rho: self.rho().to_doc()?,
            blocks: with_blocks.then(|| collect(false)),
            inverse_blocks: with_blocks.then(|| collect(true)),
        })
    }

    /// Rebuilds from `(A, rho)` and checks any stored blocks against the rebuild.
    pub fn from_doc(doc: &SequenceDoc) -> Result<Self> {
        let a = VectorSeries::from_doc(&doc.a)?;
        let rho = Series::from_doc(&doc.rho)?;
        if a.dim_in() != doc.dim {
            return Err(Error::DimensionMismatch {
                expected: doc.dim,
                found: a.dim_in(),
            });
        }
        let seq = build_sheffer(&a, &rho, doc.max_degree)?;
        if let Some(blocks) = &doc.blocks {
            verify(blocks, |k, n| seq.block(k, n).cloned())?;
        }
        if let Some(blocks) = &doc.inverse_blocks {
            verify(blocks, |k, n| seq.inverse_block(k, n).cloned())?;
        }
        Ok(seq)
    }

    pub fn to_json(&self, with_blocks: bool) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_doc(with_blocks)?)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_doc(&serde_json::from_str(text)?)
    }

    pub fn save(&self, path: &Path, with_blocks: bool) -> Result<()> {
        std::fs::write(path, self.to_json(with_blocks)? + "\n")?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}
