//! Binary model file.
//!
//! Layout, all integers little-endian:
//!
//! | bytes            | content                                          |
//! |------------------|--------------------------------------------------|
//! | 8                | magic `EASEB\0\0\x01`                            |
//! | 8                | `u64` N                                          |
//! | 8                | `u64` vocabulary blob length L                   |
//! | L                | UTF-8 entity names joined by `\n`, index order   |
//! | 8·N·N            | `f64` weights, row-major                         |

use std::io::{Read, Write};

use crate::ease::SimilarityModel;
use crate::error::{Error, Result};
use crate::linalg::SquareMatrix;
use crate::vocab::Vocab;

pub const MAGIC: [u8; 8] = *b"EASEB\0\0\x01";

/// Header fields, readable without loading the weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelHeader {
    pub n_entities: u64,
    pub vocab_bytes: u64,
}

impl ModelHeader {
    /// Total file size implied by the header.
    pub fn file_len(&self) -> u64 {
        24 + self.vocab_bytes + 8 * self.n_entities * self.n_entities
    }
}

pub fn write_model<W: Write>(model: &SimilarityModel, mut out: W) -> Result<()> {
    let blob = model.entity_vocab().names().join("\n");
    out.write_all(&MAGIC)?;
    out.write_all(&(model.n_entities() as u64).to_le_bytes())?;
    out.write_all(&(blob.len() as u64).to_le_bytes())?;
    out.write_all(blob.as_bytes())?;
    let mut buf = Vec::with_capacity(8 * model.n_entities());
    for row in model.weights().rows() {
        buf.clear();
        for w in row {
            buf.extend_from_slice(&w.to_le_bytes());
        }
        out.write_all(&buf)?;
    }
    out.flush()?;
    Ok(())
}

fn read_u64<R: Read>(input: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    input.read_exact(&mut b).map_err(truncated)?;
    Ok(u64::from_le_bytes(b))
}

fn truncated(e: std::io::Error) -> Error {
    if e.kind() == std::io::ErrorKind::UnexpectedEof {
        Error::Format("file is truncated".into())
    } else {
        Error::Io(e)
    }
}

pub fn read_header<R: Read>(input: &mut R) -> Result<ModelHeader> {
    let mut magic = [0u8; 8];
    input.read_exact(&mut magic).map_err(truncated)?;
    if magic != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let n_entities = read_u64(input)?;
    let vocab_bytes = read_u64(input)?;
    Ok(ModelHeader {
        n_entities,
        vocab_bytes,
    })
}

/// Reads a model written by [`write_model`]. The λ is not stored, so the
/// returned model reports `lambda() == None`.
pub fn read_model<R: Read>(mut input: R) -> Result<SimilarityModel> {
    let header = read_header(&mut input)?;
    let n = usize::try_from(header.n_entities)
        .ok()
        .filter(|n| n.checked_mul(*n).and_then(|nn| nn.checked_mul(8)).is_some())
        .ok_or_else(|| Error::Format("entity count too large".into()))?;
    let blob_len = usize::try_from(header.vocab_bytes)
        .map_err(|_| Error::Format("vocabulary blob too large".into()))?;

    let mut blob = Vec::new();
    input
        .by_ref()
        .take(blob_len as u64)
        .read_to_end(&mut blob)?;
    if blob.len() != blob_len {
        return Err(Error::Format("file is truncated".into()));
    }
    let blob =
        String::from_utf8(blob).map_err(|_| Error::Format("vocabulary is not UTF-8".into()))?;
    let names: Vec<String> = if n == 0 {
        Vec::new()
    } else {
        blob.split('\n').map(str::to_string).collect()
    };
    if names.len() != n {
        return Err(Error::Format(format!(
            "vocabulary lists {} entities, header says {n}",
            names.len()
        )));
    }
    let vocab = Vocab::from_names(names).map_err(|e| Error::Format(e.to_string()))?;

    let mut raw = vec![0u8; 8 * n * n];
    input.read_exact(&mut raw).map_err(truncated)?;
    let weights: Vec<f64> = raw
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect();
    let mut rest = [0u8; 1];
    if input.read(&mut rest)? != 0 {
        return Err(Error::Format("trailing bytes after weights".into()));
    }

    SimilarityModel::from_parts(SquareMatrix::from_row_major(n, weights), vocab, None)
        .map_err(|e| Error::Format(e.to_string()))
}
