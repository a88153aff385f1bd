//! Joint encoding of the min- and max-heap parentheses.
//!
//! For an array without equal neighbours, exactly one of the two trees has
//! consecutive openings `f(i)`, `f(i+1)` adjacent for every `1 <= i < n`.
//! `U[i]` says which one (0 = min), `D[i]` holds the other tree's number of
//! closings between the two openings (capped at 2) and `E` the overflow in
//! unary. Either tree can then be decoded block by block.

mod cache;
mod general;
mod space;
pub mod tables;

use std::sync::Arc;

use crate::bitvec::{BitBuf, BitVector, MonotoneInts, PackedInts, TritArray};
use crate::bp::{read_bits, BitSource};
use crate::error::{invalid, Error, Result};
use crate::heap::ColoredHeap;
use crate::query::{QueryIndex, SideSources};
use crate::Side;

pub use general::{reduce_repeats, RepeatLayer};
pub use space::SpaceReport;
pub use tables::{g, h};

use tables::{g_lookup, G_CHUNK};

pub const DEFAULT_BLOCK_BITS: usize = 512;
pub const DEFAULT_LEVELS: usize = 2;
/// A block whose `E` span reaches this many times the block width stores
/// its own copy of the `E` bits it emits.
pub const BAD_BLOCK_FACTOR: usize = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Config {
    /// PRS/NRS mark levels, 1..=4.
    pub levels: usize,
    /// Decoding block width in bits: a power of two, at least 64.
    pub block_bits: usize,
    /// Bad-block threshold factor; 0 makes every block bad.
    pub bad_factor: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            levels: DEFAULT_LEVELS,
            block_bits: DEFAULT_BLOCK_BITS,
            bad_factor: BAD_BLOCK_FACTOR,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        if !(1..=crate::query::MAX_LEVELS).contains(&self.levels) {
            return invalid(format!("levels must be in 1..=4, got {}", self.levels));
        }
        if self.block_bits < 64 || !self.block_bits.is_power_of_two() || self.block_bits > 1 << 20 {
            return invalid(format!(
                "block size must be a power of two in 64..=2^20, got {}",
                self.block_bits
            ));
        }
        Ok(())
    }
}

/// Decoder state at the first bit of a block of one tree.
#[derive(Debug, Default)]
struct SideDirectory {
    /// node whose segment holds the block's first bit (0 = leading `00`)
    node: MonotoneInts,
    /// `E` offset to continue from
    epos: MonotoneInts,
    /// leading bits of the node's segment already in the previous block
    skip: PackedInts,
    /// blocks decoded from their own `E` extract
    bad: BitVector,
    f_start: Vec<u32>,
    f_bits: BitVector,
}

impl SideDirectory {
    fn size_bits(&self) -> usize {
        self.node.size_bits()
            + self.epos.size_bits()
            + self.f_start.len() * 32
            + self.skip.size_bits()
            + self.bad.raw_bits()
            + self.bad.directory_bits()
            + self.f_bits.raw_bits()
    }
}

/// `U`, `D`, `E` and the colors for both trees of an array without equal
/// neighbours, plus per-tree block directories.
#[derive(Debug)]
pub struct CombinedEncoding {
    n: usize,
    u: BitVector,
    d: TritArray,
    e: BitVector,
    colors: BitVector,
    split: usize,
    f_n: [usize; 2],
    block_bits: usize,
    dirs: [SideDirectory; 2],
}

/// The `U` value for which `side` is not the adjacent-openings tree.
#[inline]
fn non_relevant(side: Side) -> bool {
    side == Side::Min
}

/// Output buffer for one block: drops `skip` leading bits, keeps `cap`.
struct Sink<'a> {
    out: &'a mut [u64],
    len: usize,
    cap: usize,
    skip: usize,
}

impl<'a> Sink<'a> {
    fn new(out: &'a mut [u64], cap: usize, skip: usize) -> Self {
        out.iter_mut().for_each(|w| *w = 0);
        Sink { out, len: 0, cap, skip }
    }

    #[inline]
    fn full(&self) -> bool {
        self.len >= self.cap
    }

    /// Appends `n <= 64` bits LSB-first; returns how many were stored.
    #[inline]
    fn push(&mut self, mut bits: u64, mut n: usize) -> usize {
        if self.skip > 0 {
            let d = self.skip.min(n);
            bits = if d >= 64 { 0 } else { bits >> d };
            n -= d;
            self.skip -= d;
        }
        let n = n.min(self.cap - self.len);
        if n == 0 {
            return 0;
        }
        if n < 64 {
            bits &= (1u64 << n) - 1;
        }
        let (w, off) = (self.len / 64, self.len % 64);
        self.out[w] |= bits << off;
        if off + n > 64 {
            self.out[w + 1] |= bits >> (64 - off);
        }
        self.len += n;
        n
    }

    fn push_ones(&mut self, mut n: usize) {
        while n > 0 && !self.full() {
            let k = n.min(64);
            self.push(if k == 64 { u64::MAX } else { (1u64 << k) - 1 }, k);
            n -= k;
        }
    }
}

/// 0-indexed position of the first zero at or after 0-indexed `pos`; runs
/// are short, so a word scan beats rank/select.
fn next_zero(bits: &BitVector, mut pos: usize) -> Option<usize> {
    while pos < bits.len() {
        let avail = (bits.len() - pos).min(64);
        let inv = !read_bits(bits, pos + 1, avail);
        let inv = if avail == 64 { inv } else { inv & ((1u64 << avail) - 1) };
        if inv != 0 {
            return Some(pos + inv.trailing_zeros() as usize);
        }
        pos += avail;
    }
    None
}

/// Reads runs `1^t 0` from `E` or from a bad block's extract.
struct ERead<'a> {
    bits: &'a BitVector,
    /// 0-indexed
    pos: usize,
    end: usize,
    /// in an extract the other tree's runs are absent
    extract: bool,
}

impl ERead<'_> {
    fn skip_run(&mut self) -> Result<()> {
        if self.extract {
            return Ok(());
        }
        match next_zero(self.bits, self.pos) {
            Some(q) => {
                self.pos = q + 1;
                Ok(())
            }
            None => Err(Error::Format("E ended inside a run".into())),
        }
    }

    /// Copies the next run into `sink`, optionally recording what was kept.
    fn copy_run(&mut self, sink: &mut Sink, mut tap: Option<&mut BitBuf>) {
        while self.pos < self.end && !sink.full() {
            let avail = (self.end - self.pos).min(64);
            let w = read_bits(self.bits, self.pos + 1, avail);
            let t = (w.trailing_ones() as usize).min(avail);
            let (chunk, n, done) = if t < avail {
                (w & ((1u64 << t) - 1), t + 1, true)
            } else {
                (w, avail, false)
            };
            let kept = sink.push(chunk, n);
            if let Some(tap) = tap.as_deref_mut() {
                tap.push_bits(chunk, kept);
            }
            self.pos += n;
            if done {
                return;
            }
        }
    }
}

/// Offsets of the zeros of an explicit parentheses sequence.
fn openings(bp: &BitVector) -> Vec<usize> {
    let mut f = Vec::with_capacity(bp.len() / 2);
    for (w, &word) in bp.words().iter().enumerate() {
        let mut z = !word;
        while z != 0 {
            let p = w * 64 + z.trailing_zeros() as usize + 1;
            if p > bp.len() {
                break;
            }
            f.push(p);
            z &= z - 1;
        }
    }
    f
}

impl CombinedEncoding {
    /// Encodes the two heaps of an array without equal neighbours.
    pub fn from_array<T: PartialOrd>(values: &[T], block_bits: usize, bad_factor: usize) -> Result<Self> {
        if values.windows(2).any(|w| w[0] == w[1]) {
            return invalid("array has equal neighbours; reduce it first");
        }
        let min = ColoredHeap::build(values, Side::Min)?;
        let max = ColoredHeap::build(values, Side::Max)?;
        Self::encode(&min.bp, &max.bp, &min.color_array(), &max.color_array(), block_bits, bad_factor)
    }

    /// Derives `U`, `D`, `E` from the two parentheses sequences.
    pub fn encode(
        bp_min: &BitVector,
        bp_max: &BitVector,
        c_min: &BitVector,
        c_max: &BitVector,
        block_bits: usize,
        bad_factor: usize,
    ) -> Result<Self> {
        if bp_min.len() != bp_max.len() || bp_min.len() < 4 || !bp_min.len().is_multiple_of(2) {
            return invalid("parentheses sequences must have equal even length of at least 4");
        }
        let n = bp_min.len() / 2 - 1;
        let (fmin, fmax) = (openings(bp_min), openings(bp_max));
        if fmin.len() != n + 1 || fmax.len() != n + 1 {
            return invalid("unbalanced parentheses sequence");
        }
        if fmin[..2] != [1, 2] || fmax[..2] != [1, 2] {
            return invalid("parentheses sequences must start with 00");
        }
        let mut u = Vec::with_capacity(n);
        let mut d = Vec::with_capacity(n);
        let mut e = BitBuf::new();
        for i in 1..n {
            let (dm, dx) = (fmin[i + 1] - fmin[i], fmax[i + 1] - fmax[i]);
            let (ui, k) = match (dm, dx) {
                (1, x) if x > 1 => (false, x - 1),
                (m, 1) if m > 1 => (true, m - 1),
                _ => {
                    return invalid(format!(
                        "node {i}: consecutive openings must be adjacent in exactly one tree"
                    ))
                }
            };
            u.push(ui);
            d.push((k - 1).min(2) as u8);
            if k >= 3 {
                e.push_run(true, k - 3);
                e.push(false);
            }
        }
        let mut colors = BitBuf::new();
        c_min.iter().chain(c_max.iter()).for_each(|b| colors.push(b));
        Self::from_parts(
            n,
            BitVector::from_bits(u),
            TritArray::from_trits(&d)?,
            e.finish(),
            colors.finish(),
            c_min.len(),
            [fmin[n], fmax[n]],
            block_bits,
            bad_factor,
        )
    }

    /// Assembles an encoding from its stored arrays and rebuilds the block
    /// directories, checking that the arrays are consistent.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        n: usize,
        u: BitVector,
        d: TritArray,
        e: BitVector,
        colors: BitVector,
        split: usize,
        f_n: [usize; 2],
        block_bits: usize,
        bad_factor: usize,
    ) -> Result<Self> {
        Config { levels: 1, block_bits, bad_factor }.validate()?;
        if n == 0 || u.len() != n - 1 || d.len() != n - 1 {
            return Err(Error::Format(format!("U/D lengths {}/{} for n = {n}", u.len(), d.len())));
        }
        if split > colors.len() {
            return Err(Error::Format("color split beyond the color array".into()));
        }
        if 2 * (n + 1) > u32::MAX as usize {
            return invalid("array too long for 32-bit block directories");
        }
        let mut enc = CombinedEncoding {
            n,
            u,
            d,
            e,
            colors,
            split,
            f_n,
            block_bits,
            dirs: Default::default(),
        };
        for side in Side::BOTH {
            let dir = enc.build_directory(side, bad_factor)?;
            enc.dirs[side as usize] = dir;
        }
        Ok(enc)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn u(&self) -> &BitVector {
        &self.u
    }

    pub fn d(&self) -> &TritArray {
        &self.d
    }

    pub fn e(&self) -> &BitVector {
        &self.e
    }

    pub fn colors(&self) -> &BitVector {
        &self.colors
    }

    pub fn split(&self) -> usize {
        self.split
    }

    /// Stored colors of one tree's valid nodes.
    pub fn side_colors(&self, side: Side) -> BitVector {
        let r = match side {
            Side::Min => 1..=self.split,
            Side::Max => self.split + 1..=self.colors.len(),
        };
        BitVector::from_bits(r.map(|k| self.colors.get(k)))
    }

    pub fn f_n(&self) -> [usize; 2] {
        self.f_n
    }

    pub fn block_bits(&self) -> usize {
        self.block_bits
    }

    /// Length of each tree's parentheses sequence.
    pub fn bp_len(&self) -> usize {
        2 * (self.n + 1)
    }

    pub fn block_count(&self) -> usize {
        self.bp_len().div_ceil(self.block_bits)
    }

    pub fn bad_blocks(&self, side: Side) -> usize {
        self.dirs[side as usize].bad.count_ones()
    }

    /// Bits of `U`, `D`, `E`, colors and the three stored lengths.
    pub fn core_bits(&self) -> usize {
        self.u.raw_bits() + self.d.size_bits() + self.e.raw_bits() + self.colors.raw_bits() + self.length_bits()
    }

    /// The color split and the two `f(n)` values, each below `2n + 3`,
    /// packed at a common width.
    pub fn length_bits(&self) -> usize {
        3 * (usize::BITS - (2 * self.n + 3).leading_zeros()) as usize
    }

    /// Bits of the block directories and the rank/select support they use.
    pub fn aux_bits(&self) -> usize {
        self.dirs.iter().map(SideDirectory::size_bits).sum::<usize>() + self.e.directory_bits()
    }

    /// Walks one tree's segments in order and records the decoder state at
    /// every block start.
    fn build_directory(&self, side: Side, bad_factor: usize) -> Result<SideDirectory> {
        let w = self.block_bits;
        let len = self.bp_len();
        let nb = self.block_count();
        let b = non_relevant(side);
        let (mut node, mut epos, mut skip) = (Vec::with_capacity(nb), Vec::with_capacity(nb), Vec::with_capacity(nb));
        let mut next = 1usize;
        while next <= 2 && next <= len {
            node.push(0u64);
            epos.push(0u64);
            skip.push((next - 1) as u64);
            next += w;
        }
        let mut pos = 3usize;
        let mut ep = 0usize;
        for i in 1..self.n {
            let rel = self.u.get(i) != b;
            let dk = self.d.get(i);
            let seg = if rel { 1 } else { dk as usize + 2 };
            let mut run = 0usize;
            if dk == 2 {
                let z = next_zero(&self.e, ep).ok_or_else(|| Error::Format(format!("E exhausted at node {i}")))?;
                run = z + 1 - ep;
            }
            let seg = if !rel && dk == 2 { seg + run - 1 } else { seg };
            while next < pos + seg {
                let o = next - pos;
                node.push(i as u64);
                if !rel && dk == 2 && o > 3 {
                    epos.push((ep + o - 3) as u64);
                    skip.push(3);
                } else {
                    epos.push(ep as u64);
                    skip.push(o as u64);
                }
                next += w;
            }
            ep += run;
            pos += seg;
        }
        if ep != self.e.len() {
            return Err(Error::Format(format!("E has {} unused bits", self.e.len() - ep)));
        }
        if pos - 1 != self.f_n[side as usize] {
            return Err(Error::Format(format!(
                "{} tree: last opening decodes to {}, stored {}",
                side.name(),
                pos - 1,
                self.f_n[side as usize]
            )));
        }
        while next <= len {
            node.push(self.n as u64);
            epos.push(ep as u64);
            skip.push(0);
            next += w;
        }
        let mut dir = SideDirectory {
            node: MonotoneInts::from_values(&node).expect("nodes ascend"),
            epos: MonotoneInts::from_values(&epos).expect("E offsets ascend"),
            skip: PackedInts::from_values(&skip),
            ..Default::default()
        };
        let threshold = bad_factor * w;
        let mut bad = vec![false; nb];
        let mut f_start = Vec::new();
        let mut f_bits = BitBuf::new();
        let mut scratch = vec![0u64; w / 64];
        for (k, flag) in bad.iter_mut().enumerate() {
            let end = if k + 1 < nb { dir.epos.get(k + 1) as usize } else { self.e.len() };
            if end - dir.epos.get(k) as usize >= threshold {
                *flag = true;
                f_start.push(f_bits.len() as u32);
                self.decode_with(side, &dir, k, &mut scratch, false, Some(&mut f_bits))?;
            }
        }
        f_start.push(f_bits.len() as u32);
        dir.bad = BitVector::from_bits(bad);
        dir.f_start = f_start;
        dir.f_bits = f_bits.finish();
        Ok(dir)
    }

    /// Decodes block `k` of `side` into `out` (`block_bits / 64` words).
    pub(crate) fn decode_into(&self, side: Side, k: usize, out: &mut [u64]) -> Result<()> {
        let dir = &self.dirs[side as usize];
        let bad = dir.bad.get(k + 1);
        self.decode_with(side, dir, k, out, bad, None)
    }

    fn decode_with(
        &self,
        side: Side,
        dir: &SideDirectory,
        k: usize,
        out: &mut [u64],
        use_extract: bool,
        mut tap: Option<&mut BitBuf>,
    ) -> Result<()> {
        let start = k * self.block_bits + 1;
        let cap = self.block_bits.min(self.bp_len() + 1 - start);
        let mut i = dir.node.get(k) as usize;
        let mut sink = Sink::new(out, cap, dir.skip.get(k) as usize);
        let mut er = if use_extract {
            let r = dir.bad.rank1(k);
            ERead {
                bits: &dir.f_bits,
                pos: dir.f_start[r] as usize,
                end: dir.f_start[r + 1] as usize,
                extract: true,
            }
        } else {
            ERead { bits: &self.e, pos: dir.epos.get(k) as usize, end: self.e.len(), extract: false }
        };
        let b = non_relevant(side);
        if i == 0 {
            sink.push(0, 2);
            i = 1;
        }
        while i < self.n && !sink.full() {
            let c = (i - 1) / G_CHUNK;
            if (c + 1) * G_CHUNK < self.n {
                let u5 = read_bits(&self.u, c * G_CHUNK + 1, G_CHUNK) as u8;
                let en = g_lookup(b, (i - 1) % G_CHUNK, u5, self.d.byte(c));
                for _ in 0..en.skip_runs {
                    er.skip_run()?;
                }
                sink.push(en.bits as u64, en.len as usize);
                i += en.consumed as usize;
                if en.stop {
                    sink.push(0b111, 3);
                    er.copy_run(&mut sink, tap.as_deref_mut());
                    i += 1;
                }
                continue;
            }
            let dk = self.d.get(i);
            if self.u.get(i) != b {
                sink.push(0, 1);
                if dk == 2 {
                    er.skip_run()?;
                }
            } else {
                match dk {
                    0 => {
                        sink.push(0b01, 2);
                    }
                    1 => {
                        sink.push(0b011, 3);
                    }
                    _ => {
                        sink.push(0b111, 3);
                        er.copy_run(&mut sink, tap.as_deref_mut());
                    }
                }
            }
            i += 1;
        }
        let rest = cap - sink.len;
        sink.push_ones(rest);
        Ok(())
    }

    /// Block `k` of one tree as an explicit bit vector.
    pub fn decode_block(&self, side: Side, k: usize) -> Result<BitVector> {
        if k >= self.block_count() {
            return invalid(format!("block {k} out of range 0..{}", self.block_count()));
        }
        let mut out = vec![0u64; self.block_bits / 64];
        self.decode_into(side, k, &mut out)?;
        let cap = self.block_bits.min(self.bp_len() - k * self.block_bits);
        Ok(BitVector::from_words(out, cap))
    }

    /// Whole parentheses sequence by the literal reference `g`.
    pub fn reference_bp(&self, side: Side) -> BitVector {
        let u: Vec<bool> = self.u.iter().collect();
        let e: Vec<bool> = self.e.iter().collect();
        let mut bits = vec![false, false];
        bits.extend(g(&u, &self.d.to_vec(), &e, non_relevant(side)));
        let pad = self.bp_len() - bits.len();
        bits.extend(std::iter::repeat_n(true, pad));
        BitVector::from_bits(bits)
    }
}

/// One tree of a [`CombinedEncoding`], decoded on demand.
pub struct VirtualBp {
    enc: Arc<CombinedEncoding>,
    side: Side,
    id: u64,
}

impl VirtualBp {
    pub fn new(enc: Arc<CombinedEncoding>, side: Side) -> Self {
        VirtualBp { enc, side, id: cache::next_id() }
    }
}

impl BitSource for VirtualBp {
    fn len(&self) -> usize {
        self.enc.bp_len()
    }

    fn word(&self, w: usize) -> u64 {
        let per = self.enc.block_bits / 64;
        let k = w / per;
        if k >= self.enc.block_count() {
            return 0;
        }
        cache::word(self.id, k, w % per, per, |out| {
            self.enc.decode_into(self.side, k, out).expect("directories validated at load")
        })
    }
}

/// Complete encoding of an arbitrary array: the joint encoding of its
/// reduced form plus, when it has equal neighbours, the repeat layer.
#[derive(Debug)]
pub struct Encoding {
    n: usize,
    core: Arc<CombinedEncoding>,
    repeats: Option<Arc<RepeatLayer>>,
    config: Config,
}

impl Encoding {
    pub fn from_array<T: PartialOrd + Clone>(values: &[T], config: Config) -> Result<Self> {
        config.validate()?;
        if values.is_empty() {
            return invalid("cannot encode an empty array");
        }
        let (c, reduced) = reduce_repeats(values)?;
        let core = Arc::new(CombinedEncoding::from_array(&reduced, config.block_bits, config.bad_factor)?);
        let repeats = if c.count_ones() > 0 { Some(c) } else { None };
        Self::from_core(core, repeats, config)
    }

    pub fn from_core(core: Arc<CombinedEncoding>, repeats: Option<BitVector>, config: Config) -> Result<Self> {
        config.validate()?;
        let (n, repeats) = match repeats {
            None => (core.n(), None),
            Some(c) => {
                let layer = RepeatLayer::build(Arc::new(c), core.clone(), config.block_bits)?;
                (layer.n(), Some(Arc::new(layer)))
            }
        };
        Ok(Encoding { n, core, repeats, config })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn config(&self) -> Config {
        self.config
    }

    pub fn core(&self) -> &Arc<CombinedEncoding> {
        &self.core
    }

    pub fn repeats(&self) -> Option<&Arc<RepeatLayer>> {
        self.repeats.as_ref()
    }

    pub fn is_general(&self) -> bool {
        self.repeats.is_some()
    }

    /// Virtual parentheses of the reduced array's heap.
    pub fn reduced_source(&self, side: Side) -> Arc<dyn BitSource> {
        Arc::new(VirtualBp::new(self.core.clone(), side))
    }

    /// Virtual parentheses of the array's own heap.
    pub fn source(&self, side: Side) -> Arc<dyn BitSource> {
        match &self.repeats {
            None => self.reduced_source(side),
            Some(r) => Arc::new(general::VirtualGeneralBp::new(r.clone(), side)),
        }
    }

    pub fn block_count(&self) -> usize {
        match &self.repeats {
            None => self.core.block_count(),
            Some(r) => r.block_count(),
        }
    }

    /// Block `k` of the array's own heap.
    pub fn decode_block(&self, side: Side, k: usize) -> Result<BitVector> {
        match &self.repeats {
            None => self.core.decode_block(side, k),
            Some(r) => r.decode_block(side, k),
        }
    }

    /// Query index over the virtual sequences.
    pub fn query_index(&self) -> Result<QueryIndex> {
        let sources = |side: Side| SideSources {
            nav: self.source(side),
            reduced: if self.repeats.is_some() { self.reduced_source(side) } else { self.source(side) },
            colors: self.core.side_colors(side),
        };
        QueryIndex::from_sources(
            sources(Side::Min),
            sources(Side::Max),
            self.repeats.as_ref().map(|r| r.c().clone()),
            self.config.levels,
        )
    }

    pub fn space(&self) -> SpaceReport {
        SpaceReport::of(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bp::materialize;

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    #[test]
    fn distinct_example_arrays() {
        // the two heaps of 3 1 2
        let min = ColoredHeap::build(&[3, 1, 2], Side::Min).unwrap();
        let max = ColoredHeap::build(&[3, 1, 2], Side::Max).unwrap();
        assert_eq!(min.bp.to_string(), "00100111");
        let enc = CombinedEncoding::encode(&min.bp, &max.bp, &min.color_array(), &max.color_array(), 64, 9)
            .unwrap();
        assert_eq!(enc.u().to_string(), "10");
        assert_eq!(enc.d().to_vec(), vec![0, 0]);
        assert_eq!(enc.e().len(), 0);
        for side in Side::BOTH {
            assert_eq!(enc.decode_block(side, 0).unwrap(), if side == Side::Min { min.bp.clone() } else { max.bp.clone() });
        }
    }

    #[test]
    fn rejects_non_joint_sequences() {
        let a = bv("00101011");
        assert!(CombinedEncoding::encode(&a, &a, &bv(""), &bv(""), 64, 9).is_err());
        assert!(CombinedEncoding::encode(&bv("0011"), &bv("001011"), &bv(""), &bv(""), 64, 9).is_err());
    }

    fn lcg(seed: u64, n: usize) -> Vec<i64> {
        let mut x = seed;
        let mut v = Vec::with_capacity(n);
        let mut last = i64::MIN;
        while v.len() < n {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let y = ((x >> 33) % 1000) as i64;
            if y != last {
                v.push(y);
                last = y;
            }
        }
        v
    }

    #[test]
    fn blocks_match_explicit_and_reference() {
        for (seed, n, w, bad) in [(1, 1, 64, 9), (2, 2, 64, 9), (3, 700, 64, 9), (4, 700, 64, 0), (5, 3000, 512, 0), (6, 3000, 128, 1)] {
            let vals = lcg(seed, n);
            let enc = Arc::new(CombinedEncoding::from_array(&vals, w, bad).unwrap());
            if bad == 0 {
                assert_eq!(enc.bad_blocks(Side::Min), enc.block_count());
            }
            for side in Side::BOTH {
                let h = ColoredHeap::build(&vals, side).unwrap();
                assert_eq!(enc.reference_bp(side), h.bp);
                let v = VirtualBp::new(enc.clone(), side);
                assert_eq!(materialize(&v), h.bp, "seed {seed} side {side:?}");
            }
        }
    }

    #[test]
    fn block_index_checked() {
        let enc = CombinedEncoding::from_array(&[1, 2, 3], 64, 9).unwrap();
        assert!(enc.decode_block(Side::Min, 1).is_err());
    }
}
