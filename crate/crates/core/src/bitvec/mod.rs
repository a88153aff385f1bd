//! Packed bit arrays with rank and select.
//!
//! Positions are 1-indexed in every public method, so `B[1..=len]` is the
//! whole array and `rank1(0) == 0`. Internally bit `p` (1-indexed) lives in
//! word `(p - 1) / 64` at bit `(p - 1) % 64`, least significant bit first.

mod packed;
mod pattern;
mod trit;

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

pub use packed::{MonotoneInts, PackedInts};
pub use pattern::{Pattern, PatternIndex};
pub use trit::TritArray;

use crate::bp::BitSource;
use crate::error::{invalid, Error, Result};

// 16-bit counts per 512-bit block, absolute counts per 65536 bits
const WORDS_PER_BLOCK: usize = 8;
const BLOCK_BITS: usize = 64 * WORDS_PER_BLOCK;
const BLOCKS_PER_SUPER: usize = 128;
const SELECT_SAMPLE: usize = 4096;

const MAGIC: &[u8; 4] = b"BVEC";
const VERSION: u32 = 1;

/// Plain bit array with rank/select directories and optional pattern
/// directories.
#[derive(Clone)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
    ones: usize,
    super_ranks: Vec<u64>,
    block_ranks: Vec<u16>,
    select1_samples: Vec<u32>,
    select0_samples: Vec<u32>,
    patterns: Vec<PatternIndex>,
}

impl Default for BitVector {
    fn default() -> Self {
        BitVector::from_words(Vec::new(), 0)
    }
}

impl BitVector {
    pub fn from_words(mut words: Vec<u64>, len: usize) -> Self {
        words.resize(len.div_ceil(64), 0);
        if !len.is_multiple_of(64) {
            let last = words.len() - 1;
            words[last] &= (1u64 << (len % 64)) - 1;
        }
        let mut bv = BitVector {
            words,
            len,
            ones: 0,
            super_ranks: Vec::new(),
            block_ranks: Vec::new(),
            select1_samples: Vec::new(),
            select0_samples: Vec::new(),
            patterns: Vec::new(),
        };
        bv.build_directories();
        bv
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut b = BitBuf::new();
        for bit in bits {
            b.push(bit);
        }
        b.finish()
    }

    /// Builds the vector and registers rank/select directories for each of
    /// `patterns`.
    pub fn with_patterns<I: IntoIterator<Item = bool>>(bits: I, patterns: &[Pattern]) -> Self {
        let mut bv = Self::from_bits(bits);
        for p in patterns {
            bv.register_pattern(*p);
        }
        bv
    }

    pub fn register_pattern(&mut self, p: Pattern) {
        if self.pattern_index(p).is_some() {
            return;
        }
        let idx = PatternIndex::build(&*self, p);
        self.patterns.push(idx);
    }

    fn pattern_index(&self, p: Pattern) -> Option<&PatternIndex> {
        self.patterns.iter().find(|ix| ix.pattern() == p)
    }

    fn build_directories(&mut self) {
        let nblocks = self.words.len().div_ceil(WORDS_PER_BLOCK);
        self.super_ranks = Vec::with_capacity(nblocks.div_ceil(BLOCKS_PER_SUPER));
        self.block_ranks = Vec::with_capacity(nblocks);
        self.select1_samples.clear();
        self.select0_samples.clear();
        let mut total = 0u64;
        let mut next1 = 1u64;
        let mut next0 = 1u64;
        for b in 0..nblocks {
            if b % BLOCKS_PER_SUPER == 0 {
                self.super_ranks.push(total);
            }
            self.block_ranks.push((total - self.super_ranks[b / BLOCKS_PER_SUPER]) as u16);
            let zeros_before = (b * BLOCK_BITS) as u64 - total;
            let end = ((b + 1) * WORDS_PER_BLOCK).min(self.words.len());
            let local: u64 = self.words[b * WORDS_PER_BLOCK..end]
                .iter()
                .map(|w| w.count_ones() as u64)
                .sum();
            total += local;
            let bits_here = (self.len - b * BLOCK_BITS).min(BLOCK_BITS) as u64;
            while next1 <= total {
                self.select1_samples.push(b as u32);
                next1 += SELECT_SAMPLE as u64;
            }
            let zeros_after = zeros_before + bits_here - local;
            while next0 <= zeros_after {
                self.select0_samples.push(b as u32);
                next0 += SELECT_SAMPLE as u64;
            }
        }
        self.ones = total as usize;
    }

    /// Ones before block `b` (`b` may equal the block count).
    #[inline]
    fn ones_before_block(&self, b: usize) -> usize {
        if b >= self.block_ranks.len() {
            return self.ones;
        }
        (self.super_ranks[b / BLOCKS_PER_SUPER] + self.block_ranks[b] as u64) as usize
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn count_ones(&self) -> usize {
        self.ones
    }

    pub fn count_zeros(&self) -> usize {
        self.len - self.count_ones()
    }

    /// Bit at 1-indexed position `pos`. Panics when out of range.
    #[inline]
    pub fn get(&self, pos: usize) -> bool {
        assert!(pos >= 1 && pos <= self.len, "position {pos} out of range");
        let p = pos - 1;
        (self.words[p / 64] >> (p % 64)) & 1 == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (1..=self.len).map(move |p| self.get(p))
    }

    /// Number of ones in `B[1..=i]`.
    #[inline]
    pub fn rank1(&self, i: usize) -> usize {
        debug_assert!(i <= self.len);
        if i == self.len {
            return self.ones;
        }
        let w = i / 64;
        let b = w / WORDS_PER_BLOCK;
        let mut r = self.ones_before_block(b);
        for word in &self.words[b * WORDS_PER_BLOCK..w] {
            r += word.count_ones() as usize;
        }
        let rem = i % 64;
        if rem > 0 {
            r += (self.words[w] & ((1u64 << rem) - 1)).count_ones() as usize;
        }
        r
    }

    #[inline]
    pub fn rank0(&self, i: usize) -> usize {
        i - self.rank1(i)
    }

    /// Position of the `j`-th one (1-indexed), if it exists.
    pub fn select1(&self, j: usize) -> Option<usize> {
        if j == 0 || j > self.count_ones() {
            return None;
        }
        let mut b = self.select1_samples[(j - 1) / SELECT_SAMPLE] as usize;
        while self.ones_before_block(b + 1) < j {
            b += 1;
        }
        let mut need = (j - self.ones_before_block(b)) as u32;
        let mut w = b * WORDS_PER_BLOCK;
        loop {
            let c = self.words[w].count_ones();
            if c >= need {
                return Some(w * 64 + select_in_word(self.words[w], need - 1) + 1);
            }
            need -= c;
            w += 1;
        }
    }

    /// Position of the `j`-th zero (1-indexed), if it exists.
    pub fn select0(&self, j: usize) -> Option<usize> {
        if j == 0 || j > self.count_zeros() {
            return None;
        }
        let nblocks = self.block_ranks.len();
        let zeros_before = |b: usize| (b * BLOCK_BITS).min(self.len) - self.ones_before_block(b);
        let mut b = self.select0_samples[(j - 1) / SELECT_SAMPLE] as usize;
        while b + 1 < nblocks && zeros_before(b + 1) < j {
            b += 1;
        }
        let mut need = (j - zeros_before(b)) as u32;
        let mut w = b * WORDS_PER_BLOCK;
        loop {
            let inv = !self.words[w];
            let c = inv.count_ones();
            if c >= need {
                return Some(w * 64 + select_in_word(inv, need - 1) + 1);
            }
            need -= c;
            w += 1;
        }
    }

    /// `w` bits starting at 1-indexed `pos`; bit `k` of the result is
    /// `B[pos + k]`.
    pub fn access_word(&self, pos: usize, w: usize) -> Result<u64> {
        if w > 64 || pos == 0 || pos + w > self.len + 1 {
            return invalid(format!(
                "access_word({pos}, {w}) outside bit array of length {}",
                self.len
            ));
        }
        Ok(crate::bp::read_bits(self, pos, w))
    }

    /// Number of occurrences of `p` whose last bit lies in `B[1..=i]`.
    pub fn rank_pattern(&self, p: Pattern, i: usize) -> Result<usize> {
        if i > self.len {
            return invalid(format!("rank position {i} beyond length {}", self.len));
        }
        match self.pattern_index(p) {
            Some(ix) => Ok(ix.rank(self, i)),
            None => invalid(format!("pattern {p} is not registered")),
        }
    }

    /// Starting position of the `j`-th occurrence of `p`.
    pub fn select_pattern(&self, p: Pattern, j: usize) -> Result<usize> {
        let ix = match self.pattern_index(p) {
            Some(ix) => ix,
            None => return invalid(format!("pattern {p} is not registered")),
        };
        ix.select(self, j)
            .ok_or_else(|| Error::NotFound(format!("occurrence {j} of pattern {p}")))
    }

    /// Bits used by the raw array.
    pub fn raw_bits(&self) -> usize {
        self.len
    }

    /// Bits used by rank/select and pattern directories.
    pub fn directory_bits(&self) -> usize {
        64 + self.super_ranks.len() * 64
            + self.block_ranks.len() * 16
            + (self.select1_samples.len() + self.select0_samples.len()) * 32
            + self.patterns.iter().map(|p| p.size_bits()).sum::<usize>()
    }

    /// Writes `{magic, version, length, pattern list}` then the raw words,
    /// all little-endian. Directories are rebuilt on load.
    pub fn write_to<W: Write>(&self, out: &mut W) -> Result<()> {
        out.write_all(MAGIC)?;
        out.write_all(&VERSION.to_le_bytes())?;
        out.write_all(&(self.len as u64).to_le_bytes())?;
        out.write_all(&(self.patterns.len() as u32).to_le_bytes())?;
        for p in &self.patterns {
            out.write_all(&[p.pattern().len() as u8, p.pattern().bits()])?;
        }
        write_words(out, &self.words)
    }

    pub fn read_from<R: Read>(input: &mut R) -> Result<Self> {
        let mut magic = [0u8; 4];
        input.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Format("bad bit vector magic".into()));
        }
        let version = read_u32(input)?;
        if version != VERSION {
            return Err(Error::Format(format!("unsupported bit vector version {version}")));
        }
        let len = read_u64(input)? as usize;
        let npat = read_u32(input)? as usize;
        let mut pats = Vec::with_capacity(npat);
        for _ in 0..npat {
            let mut b = [0u8; 2];
            input.read_exact(&mut b)?;
            pats.push(Pattern::from_raw(b[1], b[0])?);
        }
        let words = read_words(input, len.div_ceil(64))?;
        let mut bv = BitVector::from_words(words, len);
        for p in pats {
            bv.register_pattern(p);
        }
        Ok(bv)
    }
}

impl BitSource for BitVector {
    fn len(&self) -> usize {
        self.len
    }

    #[inline]
    fn word(&self, w: usize) -> u64 {
        self.words.get(w).copied().unwrap_or(0)
    }
}

impl PartialEq for BitVector {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && self.words == other.words
    }
}

impl Eq for BitVector {}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len <= 256 {
            write!(f, "BitVector(\"{self}\")")
        } else {
            write!(f, "BitVector(len={}, ones={})", self.len, self.count_ones())
        }
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut buf = BitBuf::new();
        for c in s.chars() {
            match c {
                '0' => buf.push(false),
                '1' => buf.push(true),
                '_' | ' ' => {}
                _ => return invalid(format!("unexpected character {c:?} in bit string")),
            }
        }
        Ok(buf.finish())
    }
}

/// Append-only bit buffer used while building encodings.
#[derive(Clone, Debug, Default)]
pub struct BitBuf {
    words: Vec<u64>,
    len: usize,
}

impl BitBuf {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        BitBuf {
            words: Vec::with_capacity(bits.div_ceil(64)),
            len: 0,
        }
    }

    #[inline]
    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(64) {
            self.words.push(0);
        }
        if bit {
            *self.words.last_mut().unwrap() |= 1u64 << (self.len % 64);
        }
        self.len += 1;
    }

    /// Appends the low `n` bits of `bits`, least significant first.
    #[inline]
    pub fn push_bits(&mut self, bits: u64, n: usize) {
        debug_assert!(n <= 64);
        if n == 0 {
            return;
        }
        let bits = if n == 64 { bits } else { bits & ((1u64 << n) - 1) };
        let off = self.len % 64;
        if off == 0 {
            self.words.push(bits);
        } else {
            *self.words.last_mut().unwrap() |= bits << off;
            if off + n > 64 {
                self.words.push(bits >> (64 - off));
            }
        }
        self.len += n;
    }

    pub fn push_run(&mut self, bit: bool, mut n: usize) {
        let fill = if bit { u64::MAX } else { 0 };
        while n > 0 {
            let k = n.min(64);
            self.push_bits(fill, k);
            n -= k;
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, pos: usize) -> bool {
        let p = pos - 1;
        (self.words[p / 64] >> (p % 64)) & 1 == 1
    }

    pub fn finish(self) -> BitVector {
        BitVector::from_words(self.words, self.len)
    }

    pub fn into_words(self) -> (Vec<u64>, usize) {
        (self.words, self.len)
    }
}

/// Index (0-based) of the `k`-th set bit of `w` (k 0-based).
#[inline]
pub(crate) fn select_in_word(mut w: u64, k: u32) -> usize {
    for _ in 0..k {
        w &= w - 1;
    }
    w.trailing_zeros() as usize
}

pub(crate) fn write_words<W: Write>(out: &mut W, words: &[u64]) -> Result<()> {
    for w in words {
        out.write_all(&w.to_le_bytes())?;
    }
    Ok(())
}

pub(crate) fn read_words<R: Read>(input: &mut R, n: usize) -> Result<Vec<u64>> {
    let mut words = Vec::with_capacity(n);
    let mut b = [0u8; 8];
    for _ in 0..n {
        input.read_exact(&mut b)?;
        words.push(u64::from_le_bytes(b));
    }
    Ok(words)
}

pub(crate) fn read_u32<R: Read>(input: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    input.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

pub(crate) fn read_u64<R: Read>(input: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    input.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_rank1(bits: &[bool], i: usize) -> usize {
        bits[..i].iter().filter(|&&b| b).count()
    }

    #[test]
    fn rank_and_select_small() {
        let bv: BitVector = "0000".parse().unwrap();
        assert_eq!(bv.rank1(4), 0);
        let bv: BitVector = "0101".parse().unwrap();
        assert_eq!(bv.select1(2), Some(4));
        assert_eq!(bv.select0(1), Some(1));
        assert_eq!(bv.select1(3), None);
        let bv: BitVector = "0001".parse().unwrap();
        assert_eq!(bv.select1(1), Some(4));
    }

    #[test]
    fn access_word_examples() {
        let bv: BitVector = "00100110100010111011".parse().unwrap();
        // 0010 read left to right: bit k of the word is B[1 + k]
        assert_eq!(bv.access_word(1, 4).unwrap(), 0b0100);
        assert_eq!(bv.access_word(20, 1).unwrap(), 1);
        let bv: BitVector = "01011010".parse().unwrap();
        // B[5..=7] = 1,0,1
        assert_eq!(bv.access_word(5, 3).unwrap(), 0b101);
        assert!(bv.access_word(7, 3).is_err());
        assert!(bv.access_word(0, 1).is_err());
    }

    #[test]
    fn rank_select_against_scan_large() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let bits: Vec<bool> = (0..20_000)
            .map(|i| {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                // vary density across the array
                if i < 7000 {
                    state.is_multiple_of(5)
                } else {
                    !state.is_multiple_of(3)
                }
            })
            .collect();
        let bv = BitVector::from_bits(bits.iter().copied());
        let mut ones = 0;
        let mut zeros = 0;
        for i in 0..=bits.len() {
            assert_eq!(bv.rank1(i), naive_rank1(&bits, i));
            if i < bits.len() {
                if bits[i] {
                    ones += 1;
                    assert_eq!(bv.select1(ones), Some(i + 1));
                } else {
                    zeros += 1;
                    assert_eq!(bv.select0(zeros), Some(i + 1));
                }
            }
        }
    }

    #[test]
    fn serialization_round_trip() {
        let mut bv: BitVector = "110110001011".parse().unwrap();
        bv.register_pattern("110".parse().unwrap());
        let mut buf = Vec::new();
        bv.write_to(&mut buf).unwrap();
        assert_eq!(&buf[..4], b"BVEC");
        let back = BitVector::read_from(&mut buf.as_slice()).unwrap();
        assert_eq!(back, bv);
        assert_eq!(back.rank_pattern("110".parse().unwrap(), 12).unwrap(), 2);
    }

    #[test]
    fn bitbuf_push_bits_crosses_words() {
        let mut b = BitBuf::new();
        b.push_run(true, 60);
        b.push_bits(0b1011, 4);
        b.push_bits(0b01, 2);
        let bv = b.finish();
        assert_eq!(bv.len(), 66);
        assert_eq!(bv.count_ones(), 60 + 3 + 1);
        assert!(!bv.get(63));
        assert!(bv.get(65));
        assert!(!bv.get(66));
    }

    #[test]
    fn rank_select_across_superblocks() {
        let mut x = 12345u64;
        let bits: Vec<bool> = (0..200_003)
            .map(|_| {
                x ^= x << 13;
                x ^= x >> 7;
                x ^= x << 17;
                x % 5 < 2
            })
            .collect();
        let bv = BitVector::from_bits(bits.iter().copied());
        let (mut ones, mut zeros) = (0, 0);
        for (k, &b) in bits.iter().enumerate() {
            if b {
                ones += 1;
                if ones % 97 == 1 {
                    assert_eq!(bv.select1(ones), Some(k + 1));
                }
            } else {
                zeros += 1;
                if zeros % 89 == 1 {
                    assert_eq!(bv.select0(zeros), Some(k + 1));
                }
            }
            if k % 113 == 0 || k + 1 == bits.len() {
                assert_eq!(bv.rank1(k + 1), ones);
            }
        }
        assert_eq!(bv.count_ones(), ones);
        assert_eq!(bv.select1(ones + 1), None);
        assert_eq!(bv.select0(zeros), bits.iter().rposition(|&b| !b).map(|p| p + 1));
    }
}
