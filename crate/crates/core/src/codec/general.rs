//! Arrays with equal neighbours: `C[i] = 1` iff `A[i-1] = A[i]`. Each heap
//! of `A` is the heap of the reduced array with `10` inserted for every
//! repeated position, which `h` does block by block.

use std::sync::Arc;

use crate::bitvec::{BitBuf, BitVector, MonotoneInts};
use crate::bp::{materialize, read_bits, BitSource};
use crate::error::{invalid, Error, Result};
use crate::Side;

use super::tables::h_lookup;
use super::{cache, CombinedEncoding, Sink, VirtualBp};

/// `C` and the array with every run of equal neighbours collapsed.
pub fn reduce_repeats<T: PartialEq + Clone>(values: &[T]) -> Result<(BitVector, Vec<T>)> {
    if values.is_empty() {
        return invalid("empty array");
    }
    let mut c = BitBuf::with_capacity(values.len());
    let mut reduced = Vec::with_capacity(values.len());
    for (i, v) in values.iter().enumerate() {
        let rep = i > 0 && values[i - 1] == *v;
        c.push(rep);
        if !rep {
            reduced.push(v.clone());
        }
    }
    Ok((c.finish(), reduced))
}

#[derive(Debug, Default)]
struct Anchors {
    /// next `C` index to process (0 = the root's opening); the position
    /// in the reduced sequence follows from it through rank on `C`
    ci: MonotoneInts,
    /// block starts on the `0` of an inserted `10`
    drop: BitVector,
}

/// The repeat bitvector with block directories for both heaps of `A`.
#[derive(Debug)]
pub struct RepeatLayer {
    c: Arc<BitVector>,
    core: Arc<CombinedEncoding>,
    reduced: [Arc<dyn BitSource>; 2],
    block_bits: usize,
    anchors: [Anchors; 2],
}

/// Copies `b` from `*p` through its next zero (or to its end).
fn copy_run(b: &dyn BitSource, p: &mut usize, sink: &mut Sink) {
    let len = b.len();
    while *p <= len && !sink.full() {
        let avail = (len + 1 - *p).min(64);
        let w = read_bits(b, *p, avail);
        let t = (w.trailing_ones() as usize).min(avail);
        if t < avail {
            sink.push(w & ((1u64 << t) - 1), t + 1);
            *p += t + 1;
            return;
        }
        sink.push(w, avail);
        *p += avail;
    }
}

impl RepeatLayer {
    pub fn build(c: Arc<BitVector>, core: Arc<CombinedEncoding>, block_bits: usize) -> Result<Self> {
        if c.count_zeros() != core.n() || c.is_empty() || c.get(1) {
            return Err(Error::Format("repeat bitvector does not match the reduced array".into()));
        }
        let reduced: [Arc<dyn BitSource>; 2] =
            Side::BOTH.map(|s| Arc::new(VirtualBp::new(core.clone(), s)) as Arc<dyn BitSource>);
        let mut layer = RepeatLayer {
            c,
            core,
            reduced,
            block_bits,
            anchors: Default::default(),
        };
        for side in Side::BOTH {
            layer.anchors[side as usize] = layer.build_anchors(side);
        }
        Ok(layer)
    }

    pub fn n(&self) -> usize {
        self.c.len()
    }

    pub fn c(&self) -> &Arc<BitVector> {
        &self.c
    }

    pub fn bp_len(&self) -> usize {
        2 * (self.n() + 1)
    }

    pub fn block_count(&self) -> usize {
        self.bp_len().div_ceil(self.block_bits)
    }

    /// Bits of both heaps' anchor arrays and the `C` rank support.
    pub fn aux_bits(&self) -> usize {
        self.anchors
            .iter()
            .map(|a| a.ci.size_bits() + a.drop.raw_bits())
            .sum::<usize>()
            + self.c.directory_bits()
    }

    /// Streams the literal `h` over the whole reduced sequence and records
    /// the state at every block start.
    fn build_anchors(&self, side: Side) -> Anchors {
        let bprime = materialize(&*self.reduced[side as usize]);
        let bits: Vec<bool> = bprime.iter().collect();
        let cv: Vec<bool> = std::iter::once(false).chain(self.c.iter()).collect();
        // the root's opening is copied like an original position
        let out = super::tables::h(&bits, &cv);
        let mut original = BitBuf::with_capacity(out.len());
        let mut ci = 0usize;
        let mut k = 0usize;
        while k < out.len() {
            if ci < cv.len() && cv[ci] {
                original.push_run(false, 2);
                k += 2;
            } else {
                let z = out[k..].iter().position(|&x| !x).map_or(out.len() - k, |z| z + 1);
                original.push_run(true, z);
                k += z;
            }
            ci += 1;
        }
        let original = original.finish();
        let out = BitVector::from_bits(out.into_iter().chain(std::iter::repeat(true)).take(self.bp_len()));
        let mut ci = Vec::new();
        let mut drop = Vec::new();
        let mut s = 1usize;
        while s <= self.bp_len() {
            ci.push(out.rank0(s - 1) as u64);
            let is_orig = s > original.len() || original.get(s);
            drop.push(!is_orig && !out.get(s));
            s += self.block_bits;
        }
        let mut a = Anchors { ci: MonotoneInts::from_values(&ci).expect("zero counts ascend"), ..Default::default() };
        a.drop = BitVector::from_bits(drop);
        a
    }

    pub(crate) fn decode_into(&self, side: Side, k: usize, out: &mut [u64]) {
        let a = &self.anchors[side as usize];
        let src = &*self.reduced[side as usize];
        let start = k * self.block_bits + 1;
        let cap = self.block_bits.min(self.bp_len() + 1 - start);
        let mut sink = Sink::new(out, cap, a.drop.get(k + 1) as usize);
        let mut ci = a.ci.get(k) as usize;
        let dropped = a.drop.get(k + 1);
        // every repeat handled so far emitted an extra `10`
        let extra = if ci == 0 { 0 } else { 2 * self.c.rank1(ci - 1) + dropped as usize };
        let mut p = start - extra;
        let n = self.n();
        let blen = src.len();
        if ci == 0 {
            copy_run(src, &mut p, &mut sink);
            ci = 1;
        }
        while ci <= n && !sink.full() {
            if ci + 3 <= n && p + 7 <= blen {
                let en = h_lookup(read_bits(src, p, 8) as u8, read_bits(&*self.c, ci, 4) as u8);
                sink.push(en.bits as u64, en.len as usize);
                p += en.b_used as usize;
                ci += en.c_used as usize;
                continue;
            }
            if self.c.get(ci) {
                sink.push(0b01, 2);
            } else {
                copy_run(src, &mut p, &mut sink);
            }
            ci += 1;
        }
        let rest = cap - sink.len;
        sink.push_ones(rest);
    }

    pub fn decode_block(&self, side: Side, k: usize) -> Result<BitVector> {
        if k >= self.block_count() {
            return invalid(format!("block {k} out of range 0..{}", self.block_count()));
        }
        let mut out = vec![0u64; self.block_bits / 64];
        self.decode_into(side, k, &mut out);
        let cap = self.block_bits.min(self.bp_len() - k * self.block_bits);
        Ok(BitVector::from_words(out, cap))
    }

    pub fn core(&self) -> &Arc<CombinedEncoding> {
        &self.core
    }
}

/// One heap of an array with equal neighbours, decoded on demand.
pub struct VirtualGeneralBp {
    layer: Arc<RepeatLayer>,
    side: Side,
    id: u64,
}

impl VirtualGeneralBp {
    pub fn new(layer: Arc<RepeatLayer>, side: Side) -> Self {
        VirtualGeneralBp { layer, side, id: cache::next_id() }
    }
}

impl BitSource for VirtualGeneralBp {
    fn len(&self) -> usize {
        self.layer.bp_len()
    }

    fn word(&self, w: usize) -> u64 {
        let per = self.layer.block_bits / 64;
        let k = w / per;
        if k >= self.layer.block_count() {
            return 0;
        }
        cache::word(self.id, k, w % per, per, |out| self.layer.decode_into(self.side, k, out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{Config, Encoding};
    use crate::heap::ColoredHeap;

    #[test]
    fn reduce() {
        let (c, r) = reduce_repeats(&[2, 2, 1, 1, 1, 3]).unwrap();
        assert_eq!(c.to_string(), "010110");
        assert_eq!(r, vec![2, 1, 3]);
    }

    #[test]
    fn general_blocks_match_explicit() {
        let mut x = 7u64;
        for (n, w) in [(1usize, 64usize), (5, 64), (900, 64), (2500, 256)] {
            let vals: Vec<i64> = (0..n)
                .map(|_| {
                    x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    ((x >> 40) % 4) as i64
                })
                .collect();
            let enc = Encoding::from_array(&vals, Config { block_bits: w, ..Config::default() }).unwrap();
            for side in Side::BOTH {
                let h = ColoredHeap::build(&vals, side).unwrap();
                assert_eq!(materialize(&*enc.source(side)), h.bp, "n {n} side {side:?}");
            }
        }
    }
}
