//! Binary field container.
//!
//! Layout: 16 bytes of magic (`MAXDISS-FLD\0`, zero padded), a JSON header
//! `{"n", "components", "endianness": "little", "dtype": "f64"}` padded with
//! spaces so the payload starts on a 64-byte boundary, then the physical
//! samples of each component in row-major order as little-endian `f64`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Grid, SpectralField};
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 16] = b"MAXDISS-FLD\0\0\0\0\0";
const ALIGN: usize = 64;

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    n: usize,
    components: usize,
    endianness: String,
    dtype: String,
}

/// Raw physical samples as stored on disk.
#[derive(Clone, Debug, PartialEq)]
pub struct RawField {
    pub n: usize,
    pub components: Vec<Vec<f64>>,
}

pub fn encode(raw: &RawField) -> Vec<u8> {
    let header = Header {
        n: raw.n,
        components: raw.components.len(),
        endianness: "little".into(),
        dtype: "f64".into(),
    };
    let mut out = MAGIC.to_vec();
    out.extend(serde_json::to_vec(&header).expect("header serializes"));
    while out.len() % ALIGN != 0 {
        out.push(b' ');
    }
    for c in &raw.components {
        for v in c {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

pub fn decode(bytes: &[u8], path: &Path) -> Result<RawField> {
    let bad = |reason: String| Error::FieldFormat { path: path.to_path_buf(), reason };
    if bytes.len() < MAGIC.len() || &bytes[..MAGIC.len()] != MAGIC {
        return Err(bad("missing magic".into()));
    }
    let rest = &bytes[MAGIC.len()..];
    let mut stream = serde_json::Deserializer::from_slice(rest).into_iter::<Header>();
    let header = match stream.next() {
        Some(Ok(h)) => h,
        Some(Err(e)) => return Err(bad(format!("header: {e}"))),
        None => return Err(bad("missing header".into())),
    };
    if header.endianness != "little" || header.dtype != "f64" {
        return Err(bad(format!("unsupported encoding {}/{}", header.endianness, header.dtype)));
    }
    let end = MAGIC.len() + stream.byte_offset();
    let start = end.div_ceil(ALIGN) * ALIGN;
    if bytes.len() < start || bytes[end..start].iter().any(|&b| b != b' ') {
        return Err(bad("bad header padding".into()));
    }
    let count = header.n * header.n;
    let payload = &bytes[start..];
    if payload.len() != 8 * count * header.components {
        return Err(bad(format!(
            "payload has {} bytes, expected {}",
            payload.len(),
            8 * count * header.components
        )));
    }
    let components = payload
        .chunks_exact(8 * count)
        .map(|chunk| {
            chunk
                .chunks_exact(8)
                .map(|b| f64::from_le_bytes(b.try_into().expect("8-byte chunk")))
                .collect()
        })
        .collect();
    Ok(RawField { n: header.n, components })
}

pub fn write_raw(path: &Path, raw: &RawField) -> Result<()> {
    fs::write(path, encode(raw))?;
    Ok(())
}

pub fn read_raw(path: &Path) -> Result<RawField> {
    decode(&fs::read(path)?, path)
}

/// Writes the physical samples of `u`.
pub fn write_field(path: &Path, u: &SpectralField) -> Result<()> {
    write_raw(path, &RawField { n: u.n(), components: u.to_physical() })
}

/// Reads a field file and recomputes its spectrum.
pub fn read_field(path: &Path) -> Result<SpectralField> {
    let raw = read_raw(path)?;
    let grid = Grid::new(raw.n).map_err(|e| Error::FieldFormat { path: path.to_path_buf(), reason: e.to_string() })?;
    SpectralField::from_physical(grid, &raw.components)
}
