//! Array files: whitespace-separated integers, or `MMAR` + u64 count +
//! little-endian i64 values.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};

const MAGIC: &[u8; 4] = b"MMAR";

pub fn read_array(path: &Path) -> Result<Vec<i64>> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let values = if bytes.starts_with(MAGIC) {
        parse_binary(&bytes[4..])?
    } else {
        let text = std::str::from_utf8(&bytes).context("array file is neither binary nor UTF-8 text")?;
        text.split_whitespace()
            .enumerate()
            .map(|(k, t)| t.parse::<i64>().with_context(|| format!("value {} ({t:?})", k + 1)))
            .collect::<Result<Vec<_>>>()?
    };
    if values.is_empty() {
        bail!("{}: the array is empty", path.display());
    }
    Ok(values)
}

fn parse_binary(b: &[u8]) -> Result<Vec<i64>> {
    if b.len() < 8 {
        bail!("binary array file too short");
    }
    let n = u64::from_le_bytes(b[..8].try_into().unwrap()) as usize;
    let body = &b[8..];
    if body.len() != n.checked_mul(8).context("count overflows")? {
        bail!("binary array file holds {} bytes for {n} values", body.len());
    }
    Ok(body.chunks_exact(8).map(|c| i64::from_le_bytes(c.try_into().unwrap())).collect())
}

#[cfg(test)]
fn write_binary(values: &[i64]) -> Vec<u8> {
    let mut out = MAGIC.to_vec();
    out.extend_from_slice(&(values.len() as u64).to_le_bytes());
    for v in values {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}
