use std::sync::OnceLock;

use crate::error::{invalid, Result};

/// Sequence over {0,1,2}, five trits per byte (`3^5 = 243 <= 256`).
///
/// Position `i` (1-indexed) is digit `(i - 1) % 5` of byte `(i - 1) / 5` in
/// base 3, least significant digit first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TritArray {
    bytes: Vec<u8>,
    len: usize,
}

pub(crate) const POW3: [u8; 5] = [1, 3, 9, 27, 81];

fn decode_table() -> &'static [[u8; 5]; 243] {
    static TABLE: OnceLock<[[u8; 5]; 243]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [[0u8; 5]; 243];
        for (v, row) in t.iter_mut().enumerate() {
            let mut x = v;
            for d in row.iter_mut() {
                *d = (x % 3) as u8;
                x /= 3;
            }
        }
        t
    })
}

impl TritArray {
    pub fn from_trits(trits: &[u8]) -> Result<Self> {
        let mut bytes = vec![0u8; trits.len().div_ceil(5)];
        for (i, &t) in trits.iter().enumerate() {
            if t > 2 {
                return invalid(format!("trit value {t} at index {i} is not in 0..=2"));
            }
            bytes[i / 5] += t * POW3[i % 5];
        }
        Ok(TritArray {
            bytes,
            len: trits.len(),
        })
    }

    pub fn from_bytes(bytes: Vec<u8>, len: usize) -> Result<Self> {
        if bytes.len() != len.div_ceil(5) || bytes.iter().any(|&b| b >= 243) {
            return invalid("trit byte stream does not match its length");
        }
        Ok(TritArray { bytes, len })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Trit at 1-indexed position `i`.
    #[inline]
    pub fn get(&self, i: usize) -> u8 {
        assert!(i >= 1 && i <= self.len, "trit position {i} out of range");
        decode_table()[self.bytes[(i - 1) / 5] as usize][(i - 1) % 5]
    }

    /// Raw packed byte `k` (trits `5k+1 ..= 5k+5`).
    #[inline]
    pub fn byte(&self, k: usize) -> u8 {
        self.bytes[k]
    }

    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    /// Decodes the byte holding trits `5k+1 ..= 5k+5`.
    #[inline]
    pub fn unpack(byte: u8) -> [u8; 5] {
        decode_table()[byte as usize]
    }

    pub fn to_vec(&self) -> Vec<u8> {
        (1..=self.len).map(|i| self.get(i)).collect()
    }

    pub fn size_bits(&self) -> usize {
        self.bytes.len() * 8
    }
}
