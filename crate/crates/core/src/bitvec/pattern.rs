use std::fmt;
use std::str::FromStr;

use super::MonotoneInts;
use crate::bp::BitSource;
use crate::error::{invalid, Error, Result};

const BLOCK_WORDS: usize = 8;
const SAMPLE: usize = 4096;

/// A bit pattern of length 1..=8, such as `110`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Pattern {
    bits: u8,
    len: u8,
}

impl Pattern {
    pub const ONE: Pattern = Pattern { bits: 1, len: 1 };
    pub const ZERO: Pattern = Pattern { bits: 0, len: 1 };
    /// `110`: the closing bits before the opening of a valid node.
    pub const P110: Pattern = Pattern { bits: 0b011, len: 3 };

    /// `bits` holds the first pattern character in bit 0.
    pub fn from_raw(bits: u8, len: u8) -> Result<Self> {
        if len == 0 || len > 8 {
            return invalid(format!("pattern length {len} not in 1..=8"));
        }
        let mask = if len == 8 { 0xff } else { (1u8 << len) - 1 };
        Ok(Pattern {
            bits: bits & mask,
            len,
        })
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bits(&self) -> u8 {
        self.bits
    }

    pub fn bit(&self, k: usize) -> bool {
        (self.bits >> k) & 1 == 1
    }
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() || s.len() > 8 {
            return invalid(format!("pattern {s:?} must have length 1..=8"));
        }
        let mut bits = 0u8;
        for (k, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => bits |= 1 << k,
                _ => return invalid(format!("pattern {s:?} is not a bit string")),
            }
        }
        Pattern::from_raw(bits, s.len() as u8)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..self.len() {
            f.write_str(if self.bit(k) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pattern({self})")
    }
}

/// Rank/select directory for occurrences of a short pattern over any bit
/// source. Occurrences are counted by the position of their last bit.
#[derive(Clone, Debug)]
pub struct PatternIndex {
    pattern: Pattern,
    /// Occurrences ending before each 512-bit block; one extra trailing entry.
    block_counts: MonotoneInts,
    samples: Vec<u32>,
}

impl PatternIndex {
    pub fn build<S: BitSource + ?Sized>(src: &S, pattern: Pattern) -> Self {
        let nwords = src.len().div_ceil(64);
        let nblocks = nwords.div_ceil(BLOCK_WORDS);
        let mut block_counts = Vec::with_capacity(nblocks + 1);
        let mut samples = Vec::new();
        let mut total = 0u64;
        let mut next = 1u64;
        let mut prev = 0u64;
        for b in 0..nblocks {
            block_counts.push(total);
            for w in b * BLOCK_WORDS..((b + 1) * BLOCK_WORDS).min(nwords) {
                let cur = src.word(w);
                total += end_mask(pattern, prev, cur, w, src.len()).count_ones() as u64;
                prev = cur;
            }
            while next <= total {
                samples.push(b as u32);
                next += SAMPLE as u64;
            }
        }
        block_counts.push(total);
        PatternIndex {
            pattern,
            block_counts: MonotoneInts::sampled(&block_counts, 7).expect("counts never decrease"),
            samples,
        }
    }

    pub fn pattern(&self) -> Pattern {
        self.pattern
    }

    pub fn total(&self) -> usize {
        self.block_counts.get(self.block_counts.len() - 1) as usize
    }

    /// Occurrences whose last bit is at a 1-indexed position `<= i`.
    pub fn rank<S: BitSource + ?Sized>(&self, src: &S, i: usize) -> usize {
        let i = i.min(src.len());
        if i == 0 {
            return 0;
        }
        // 0-indexed end positions e < i
        let full_words = i / 64;
        let b = full_words / BLOCK_WORDS;
        let mut r = self.block_counts.get(b.min(self.block_counts.len() - 1)) as usize;
        let start = b * BLOCK_WORDS;
        let mut prev = if start > 0 { src.word(start - 1) } else { 0 };
        for w in start..full_words {
            let cur = src.word(w);
            r += end_mask(self.pattern, prev, cur, w, src.len()).count_ones() as usize;
            prev = cur;
        }
        let rem = i % 64;
        if rem > 0 {
            let cur = src.word(full_words);
            let m = end_mask(self.pattern, prev, cur, full_words, src.len());
            r += (m & ((1u64 << rem) - 1)).count_ones() as usize;
        }
        r
    }

    /// Starting position (1-indexed) of the `j`-th occurrence.
    pub fn select<S: BitSource + ?Sized>(&self, src: &S, j: usize) -> Option<usize> {
        if j == 0 || j > self.total() {
            return None;
        }
        let mut b = self.samples[(j - 1) / SAMPLE] as usize;
        while (self.block_counts.get(b + 1) as usize) < j {
            b += 1;
        }
        let mut need = j - self.block_counts.get(b) as usize;
        let nwords = src.len().div_ceil(64);
        let mut w = b * BLOCK_WORDS;
        let mut prev = if w > 0 { src.word(w - 1) } else { 0 };
        while w < nwords {
            let cur = src.word(w);
            let m = end_mask(self.pattern, prev, cur, w, src.len());
            let c = m.count_ones() as usize;
            if c >= need {
                let end0 = w * 64 + super::select_in_word(m, need as u32 - 1);
                return Some(end0 + 2 - self.pattern.len());
            }
            need -= c;
            prev = cur;
            w += 1;
        }
        None
    }

    pub fn size_bits(&self) -> usize {
        self.block_counts.size_bits() + self.samples.len() * 32
    }
}

/// Bit `t` is set iff an occurrence of `p` ends at 0-indexed position
/// `64 * w + t`. `prev` is word `w - 1` (ignored when `w == 0`).
#[inline]
pub(crate) fn end_mask(p: Pattern, prev: u64, cur: u64, w: usize, len: usize) -> u64 {
    let plen = p.len();
    let mut m = u64::MAX;
    for k in 0..plen {
        let window = if k == 0 {
            cur
        } else if w > 0 {
            (cur << k) | (prev >> (64 - k))
        } else {
            cur << k
        };
        m &= if p.bit(plen - 1 - k) { window } else { !window };
    }
    if w == 0 && plen > 1 {
        m &= !((1u64 << (plen - 1)) - 1);
    }
    let base = w * 64;
    if base + 64 > len {
        let keep = len.saturating_sub(base);
        m &= if keep == 0 { 0 } else { (1u64 << keep) - 1 };
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitvec::BitVector;

    fn scan_ends(bits: &str, p: &str) -> Vec<usize> {
        // 1-indexed end positions
        (p.len()..=bits.len())
            .filter(|&e| &bits[e - p.len()..e] == p)
            .collect()
    }

    #[test]
    fn invalid_patterns_rejected() {
        assert!("".parse::<Pattern>().is_err());
        assert!("010101010".parse::<Pattern>().is_err());
        assert!(Pattern::from_raw(0, 0).is_err());
    }

    #[test]
    fn rank_110_on_example_bp() {
        let s = "00100110100010111011";
        let p: Pattern = "110".parse().unwrap();
        let bv = BitVector::with_patterns(s.chars().map(|c| c == '1'), &[p]);
        let ends = scan_ends(s, "110");
        assert_eq!(ends, vec![8, 18]);
        assert_eq!(bv.rank_pattern(p, 8).unwrap(), 1);
        assert_eq!(bv.rank_pattern(p, 2).unwrap(), 0);
        assert_eq!(bv.rank_pattern(p, 20).unwrap(), ends.len());
        assert!(bv.rank_pattern(p, 21).is_err());
    }

    #[test]
    fn pattern_select_examples() {
        let p: Pattern = "110".parse().unwrap();
        let bv = BitVector::with_patterns("110110".chars().map(|c| c == '1'), &[p]);
        assert_eq!(bv.rank_pattern(p, 6).unwrap(), 2);
        assert_eq!(bv.select_pattern(p, 2).unwrap(), 4);
        assert!(matches!(bv.select_pattern(p, 3), Err(Error::NotFound(_))));
        assert!(bv.rank_pattern("11".parse().unwrap(), 3).is_err());
    }
}
