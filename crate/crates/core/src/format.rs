//! Index file: a fixed header followed by length-prefixed sections, all
//! little-endian. Only the stored arrays are written; block, navigation and
//! mark directories are rebuilt on load.
//!
//! ```text
//! "SNLV" version:u32 n:u64 n':u64 flags:u32 levels:u32
//! section*: len:u64 payload   (U, D, E, colors, split+f_n, [C])
//! ```

use std::io::{Cursor, Read, Write};
use std::sync::Arc;

use crate::bitvec::{BitVector, TritArray};
use crate::codec::{CombinedEncoding, Config, Encoding};
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"SNLV";
const VERSION: u32 = 1;
const FLAG_GENERAL: u32 = 1;
/// Sections larger than this are rejected before allocating.
const MAX_SECTION: u64 = 1 << 40;

fn section<W: Write>(out: &mut W, payload: &[u8]) -> Result<()> {
    out.write_all(&(payload.len() as u64).to_le_bytes())?;
    out.write_all(payload)?;
    Ok(())
}

fn bitvec_bytes(bv: &BitVector) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    bv.write_to(&mut buf)?;
    Ok(buf)
}

pub fn write_index<W: Write>(enc: &Encoding, out: &mut W) -> Result<()> {
    let core = enc.core();
    out.write_all(MAGIC)?;
    out.write_all(&VERSION.to_le_bytes())?;
    out.write_all(&(enc.n() as u64).to_le_bytes())?;
    out.write_all(&(core.n() as u64).to_le_bytes())?;
    let flags = if enc.is_general() { FLAG_GENERAL } else { 0 };
    out.write_all(&flags.to_le_bytes())?;
    out.write_all(&(enc.config().levels as u32).to_le_bytes())?;
    section(out, &bitvec_bytes(core.u())?)?;
    section(out, core.d().bytes())?;
    section(out, &bitvec_bytes(core.e())?)?;
    section(out, &bitvec_bytes(core.colors())?)?;
    let mut lens = Vec::with_capacity(24);
    for v in [core.split(), core.f_n()[0], core.f_n()[1]] {
        lens.extend_from_slice(&(v as u64).to_le_bytes());
    }
    section(out, &lens)?;
    if let Some(r) = enc.repeats() {
        section(out, &bitvec_bytes(r.c())?)?;
    }
    Ok(())
}

fn read_u32<R: Read>(input: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    input.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64<R: Read>(input: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    input.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_section<R: Read>(input: &mut R) -> Result<Vec<u8>> {
    let len = read_u64(input)?;
    if len > MAX_SECTION {
        return Err(Error::Format(format!("section of {len} bytes")));
    }
    let mut buf = Vec::new();
    input.take(len).read_to_end(&mut buf)?;
    if buf.len() as u64 != len {
        return Err(Error::Format("truncated section".into()));
    }
    Ok(buf)
}

fn read_bitvec<R: Read>(input: &mut R) -> Result<BitVector> {
    let buf = read_section(input)?;
    let mut cur = Cursor::new(&buf);
    let bv = BitVector::read_from(&mut cur)?;
    if cur.position() as usize != buf.len() {
        return Err(Error::Format("trailing bytes in bit vector section".into()));
    }
    Ok(bv)
}

/// Reads an index; `config.levels` is taken from the file.
pub fn read_index<R: Read>(input: &mut R, config: Config) -> Result<Encoding> {
    let mut magic = [0u8; 4];
    input.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format("not an index file".into()));
    }
    let version = read_u32(input)?;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported index version {version}")));
    }
    let n = read_u64(input)? as usize;
    let reduced_n = read_u64(input)? as usize;
    let flags = read_u32(input)?;
    let levels = read_u32(input)? as usize;
    if flags & !FLAG_GENERAL != 0 {
        return Err(Error::Format(format!("unknown flags {flags:#x}")));
    }
    let config = Config { levels, ..config };
    config.validate().map_err(|e| Error::Format(e.to_string()))?;
    if reduced_n == 0 || reduced_n > n {
        return Err(Error::Format(format!("sizes n = {n}, reduced = {reduced_n}")));
    }
    let u = read_bitvec(input)?;
    let d = TritArray::from_bytes(read_section(input)?, reduced_n - 1)
        .map_err(|e| Error::Format(e.to_string()))?;
    let e = read_bitvec(input)?;
    let colors = read_bitvec(input)?;
    let lens = read_section(input)?;
    if lens.len() != 24 {
        return Err(Error::Format("length section must hold three integers".into()));
    }
    let word = |k: usize| u64::from_le_bytes(lens[8 * k..8 * k + 8].try_into().unwrap()) as usize;
    let core = CombinedEncoding::from_parts(
        reduced_n,
        u,
        d,
        e,
        colors,
        word(0),
        [word(1), word(2)],
        config.block_bits,
        config.bad_factor,
    )
    .map_err(|e| match e {
        Error::InvalidArgument(m) => Error::Format(m),
        other => other,
    })?;
    let repeats = if flags & FLAG_GENERAL != 0 {
        let c = read_bitvec(input)?;
        if c.len() != n {
            return Err(Error::Format("repeat bitvector length differs from n".into()));
        }
        Some(c)
    } else {
        if n != reduced_n {
            return Err(Error::Format("distinct index with differing sizes".into()));
        }
        None
    };
    Encoding::from_core(Arc::new(core), repeats, config)
}
