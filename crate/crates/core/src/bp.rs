//! Balanced-parentheses trees (0 = open, 1 = close) over an abstract bit
//! source, with an excess directory for navigation and range queries.
//!
//! Excess is `E(p) = #0 - #1` over `B[1..=p]`, with `E(0) = 0`. Node `i`
//! (preorder, root = 0) opens at `f(i) = select0(i + 1)`, and
//! `E(f(i)) = depth(i) + 1`.

use std::sync::Arc;

use crate::bitvec::PackedInts;
use crate::error::{invalid, Result};

/// Read access to a bit sequence in aligned 64-bit words.
///
/// Word `w` holds 0-indexed bits `64w .. 64w + 63`, least significant bit
/// first; bits past `len()` read as zero. Repeated reads must agree.
pub trait BitSource: Send + Sync {
    fn len(&self) -> usize;

    fn word(&self, w: usize) -> u64;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl std::fmt::Debug for dyn BitSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BitSource(len = {})", self.len())
    }
}

impl<T: BitSource + ?Sized> BitSource for Arc<T> {
    fn len(&self) -> usize {
        (**self).len()
    }

    fn word(&self, w: usize) -> u64 {
        (**self).word(w)
    }
}

/// `width <= 64` bits starting at 1-indexed `pos`; bit `k` is `B[pos + k]`.
pub fn read_bits<S: BitSource + ?Sized>(src: &S, pos: usize, width: usize) -> u64 {
    debug_assert!(width <= 64 && pos >= 1);
    if width == 0 {
        return 0;
    }
    let p = pos - 1;
    let (w, off) = (p / 64, p % 64);
    let mut v = src.word(w) >> off;
    if off + width > 64 {
        v |= src.word(w + 1) << (64 - off);
    }
    if width < 64 {
        v &= (1u64 << width) - 1;
    }
    v
}

/// Copies a whole source into an explicit bit vector.
pub fn materialize<S: BitSource + ?Sized>(src: &S) -> crate::bitvec::BitVector {
    let n = src.len().div_ceil(64);
    crate::bitvec::BitVector::from_words((0..n).map(|w| src.word(w)).collect(), src.len())
}

const BLOCK_BITS: usize = 512;
const BLOCK_WORDS: usize = BLOCK_BITS / 64;
const SELECT_SAMPLE: usize = 4096;

struct ByteTables {
    delta: [i8; 256],
    /// min over prefix lengths 1..=8 of the running excess change
    min: [i8; 256],
    min_cnt: [u8; 256],
    /// min over k in 0..8 of -(sum of steps k..8): the lowest excess among
    /// the positions just before each bit, relative to the byte's end
    suf_min: [i8; 256],
}

const fn byte_tables() -> ByteTables {
    let mut t = ByteTables {
        delta: [0; 256],
        min: [0; 256],
        min_cnt: [0; 256],
        suf_min: [0; 256],
    };
    let mut v = 0;
    while v < 256 {
        let mut cur: i8 = 0;
        let mut min: i8 = i8::MAX;
        let mut cnt: u8 = 0;
        let mut k = 0;
        while k < 8 {
            cur += if (v >> k) & 1 == 0 { 1 } else { -1 };
            if cur < min {
                min = cur;
                cnt = 1;
            } else if cur == min {
                cnt += 1;
            }
            k += 1;
        }
        t.delta[v] = cur;
        t.min[v] = min;
        t.min_cnt[v] = cnt;
        let mut suf: i8 = 0;
        let mut smin: i8 = i8::MAX;
        let mut k = 8;
        while k > 0 {
            k -= 1;
            suf += if (v >> k) & 1 == 0 { 1 } else { -1 };
            if -suf < smin {
                smin = -suf;
            }
        }
        t.suf_min[v] = smin;
        v += 1;
    }
    t
}

static TABLES: ByteTables = byte_tables();

#[inline]
fn step(bit: bool) -> i64 {
    if bit {
        -1
    } else {
        1
    }
}

/// Sequential reader that keeps the current word.
struct Cursor<'a> {
    src: &'a dyn BitSource,
    idx: usize,
    word: u64,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a dyn BitSource) -> Self {
        Cursor {
            src,
            idx: usize::MAX,
            word: 0,
        }
    }

    #[inline]
    fn load(&mut self, w: usize) -> u64 {
        if w != self.idx {
            self.idx = w;
            self.word = self.src.word(w);
        }
        self.word
    }

    #[inline]
    fn bit(&mut self, pos: usize) -> bool {
        let p = pos - 1;
        (self.load(p / 64) >> (p % 64)) & 1 == 1
    }

    /// Byte holding positions `pos ..= pos + 7`; requires `(pos - 1) % 8 == 0`.
    #[inline]
    fn byte(&mut self, pos: usize) -> usize {
        let p = pos - 1;
        ((self.load(p / 64) >> (p % 64)) & 0xff) as usize
    }
}

/// Minimal excess-tree over fixed-size blocks. Minima are non-negative;
/// padding leaves hold `pad`, above every real excess.
#[derive(Clone, Debug)]
struct BlockTree {
    leaves: usize,
    pad: i32,
    min: PackedInts,
    cnt: PackedInts,
}

impl BlockTree {
    fn new(mins: &[i32], cnts: &[u32]) -> Self {
        let leaves = mins.len().next_power_of_two().max(1);
        let pad = mins.iter().copied().max().unwrap_or(0) + 1;
        let mut min = vec![pad; 2 * leaves];
        let mut cnt = vec![0u32; 2 * leaves];
        min[leaves..leaves + mins.len()].copy_from_slice(mins);
        cnt[leaves..leaves + cnts.len()].copy_from_slice(cnts);
        for v in (1..leaves).rev() {
            let (l, r) = (2 * v, 2 * v + 1);
            min[v] = min[l].min(min[r]);
            cnt[v] = if min[l] == min[r] {
                cnt[l] + cnt[r]
            } else if min[l] < min[r] {
                cnt[l]
            } else {
                cnt[r]
            };
        }
        let pack = |v: Vec<u64>| PackedInts::from_values(&v);
        BlockTree {
            leaves,
            pad,
            min: pack(min.iter().map(|&m| m as u64).collect()),
            cnt: pack(cnt.iter().map(|&c| c as u64).collect()),
        }
    }

    #[inline]
    fn min_at(&self, v: usize) -> i32 {
        self.min.get(v) as i32
    }

    #[inline]
    fn cnt_at(&self, v: usize) -> u32 {
        self.cnt.get(v) as u32
    }

    fn block_min(&self, b: usize) -> i32 {
        self.min_at(self.leaves + b)
    }

    fn block_cnt(&self, b: usize) -> u32 {
        self.cnt_at(self.leaves + b)
    }

    /// (min, count) over blocks `lo..=hi`.
    fn range(&self, lo: usize, hi: usize) -> (i32, u32) {
        let mut best = (self.pad, 0u32);
        let mut add = |m: i32, c: u32| {
            if m < best.0 {
                best = (m, c);
            } else if m == best.0 {
                best.1 += c;
            }
        };
        let (mut l, mut r) = (lo + self.leaves, hi + self.leaves + 1);
        while l < r {
            if l & 1 == 1 {
                add(self.min_at(l), self.cnt_at(l));
                l += 1;
            }
            if r & 1 == 1 {
                r -= 1;
                add(self.min_at(r), self.cnt_at(r));
            }
            l >>= 1;
            r >>= 1;
        }
        best
    }

    /// First block `>= from` whose minimum is `<= target`.
    fn first_leq(&self, from: usize, target: i32) -> Option<usize> {
        if from >= self.leaves {
            return None;
        }
        let mut v = from + self.leaves;
        if self.min_at(v) <= target {
            return Some(from);
        }
        // climb until a right sibling subtree qualifies
        loop {
            if v == 1 {
                return None;
            }
            if v & 1 == 0 && self.min_at(v + 1) <= target {
                v += 1;
                break;
            }
            v >>= 1;
        }
        while v < self.leaves {
            v = if self.min_at(2 * v) <= target {
                2 * v
            } else {
                2 * v + 1
            };
        }
        Some(v - self.leaves)
    }

    /// Last block `<= to` whose minimum is `<= target`.
    fn last_leq(&self, to: usize, target: i32) -> Option<usize> {
        let mut v = to + self.leaves;
        if self.min_at(v) <= target {
            return Some(to);
        }
        loop {
            if v == 1 {
                return None;
            }
            if v & 1 == 1 && self.min_at(v - 1) <= target {
                v -= 1;
                break;
            }
            v >>= 1;
        }
        while v < self.leaves {
            v = if self.min_at(2 * v + 1) <= target {
                2 * v + 1
            } else {
                2 * v
            };
        }
        Some(v - self.leaves)
    }

    fn size_bits(&self) -> usize {
        self.min.size_bits() + self.cnt.size_bits()
    }
}

/// Balanced-parentheses tree over a [`BitSource`].
#[derive(Clone)]
pub struct BpTree {
    src: Arc<dyn BitSource>,
    len: usize,
    // shared, so that clones of a tree cost nothing
    /// excess before each block; with the block start it fixes the rank
    start_excess: Arc<PackedInts>,
    select_samples: Arc<[u32]>,
    tree: Arc<BlockTree>,
}

impl std::fmt::Debug for BpTree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BpTree")
            .field("len", &self.len)
            .field("nodes", &self.node_count())
            .finish()
    }
}

impl BpTree {
    /// Builds the directories by one sequential pass over `src`.
    pub fn new(src: Arc<dyn BitSource>) -> Result<Self> {
        let len = src.len();
        if len < 2 || !len.is_multiple_of(2) {
            return invalid(format!("balanced parentheses length {len} must be even and >= 2"));
        }
        let nblocks = len.div_ceil(BLOCK_BITS);
        let mut zeros_before = Vec::with_capacity(nblocks + 1);
        let mut mins = Vec::with_capacity(nblocks);
        let mut cnts = Vec::with_capacity(nblocks);
        let mut select_samples = Vec::new();
        let mut zeros: u64 = 0;
        let mut next_sample: u64 = 1;
        let mut cur: i64 = 0;
        let mut cursor = Cursor::new(&*src);
        for b in 0..nblocks {
            zeros_before.push(zeros);
            let start = b * BLOCK_BITS + 1;
            let end = ((b + 1) * BLOCK_BITS).min(len);
            let mut bmin = i64::MAX;
            let mut bcnt = 0u32;
            let mut p = start;
            while p <= end {
                if p + 7 <= end {
                    let v = cursor.byte(p);
                    let m = cur + TABLES.min[v] as i64;
                    if m < bmin {
                        bmin = m;
                        bcnt = TABLES.min_cnt[v] as u32;
                    } else if m == bmin {
                        bcnt += TABLES.min_cnt[v] as u32;
                    }
                    cur += TABLES.delta[v] as i64;
                    zeros += (8 - v.count_ones()) as u64;
                    p += 8;
                } else {
                    let bit = cursor.bit(p);
                    cur += step(bit);
                    if !bit {
                        zeros += 1;
                    }
                    if cur < bmin {
                        bmin = cur;
                        bcnt = 1;
                    } else if cur == bmin {
                        bcnt += 1;
                    }
                    p += 1;
                }
            }
            if cur < 0 {
                return invalid("bit sequence is not balanced: excess drops below zero");
            }
            while next_sample <= zeros {
                select_samples.push(b as u32);
                next_sample += SELECT_SAMPLE as u64;
            }
            mins.push(bmin as i32);
            cnts.push(bcnt);
        }
        zeros_before.push(zeros);
        if cur != 0 || mins.iter().any(|&m| m < 0) {
            return invalid("bit sequence is not balanced");
        }
        Ok(BpTree {
            src,
            len,
            start_excess: Arc::new(PackedInts::from_values(
                &zeros_before
                    .iter()
                    .enumerate()
                    .map(|(b, &z)| 2 * z - (b * BLOCK_BITS).min(len) as u64)
                    .collect::<Vec<_>>(),
            )),
            select_samples: select_samples.into(),
            tree: Arc::new(BlockTree::new(&mins, &cnts)),
        })
    }

    pub fn source(&self) -> &Arc<dyn BitSource> {
        &self.src
    }

    /// Length of the parentheses sequence (twice the node count).
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of nodes including the root.
    pub fn node_count(&self) -> usize {
        self.len / 2
    }

    /// Zeros before block `b`.
    #[inline]
    fn zeros_before(&self, b: usize) -> usize {
        ((b * BLOCK_BITS).min(self.len) + self.start_excess.get(b) as usize) / 2
    }

    pub fn directory_bits(&self) -> usize {
        self.start_excess.size_bits() + self.select_samples.len() * 32 + self.tree.size_bits()
    }

    #[inline]
    pub fn bit(&self, pos: usize) -> bool {
        read_bits(&*self.src, pos, 1) == 1
    }

    pub fn rank0(&self, pos: usize) -> usize {
        if pos == 0 {
            return 0;
        }
        let b = (pos - 1) / BLOCK_BITS;
        let mut r = self.zeros_before(b);
        let first = b * BLOCK_WORDS;
        let last = (pos - 1) / 64;
        for w in first..last {
            r += 64 - self.src.word(w).count_ones() as usize;
        }
        let rem = pos - last * 64;
        let word = self.src.word(last);
        let mask = if rem == 64 { u64::MAX } else { (1u64 << rem) - 1 };
        r += rem - (word & mask).count_ones() as usize;
        r
    }

    #[inline]
    pub fn excess(&self, pos: usize) -> i64 {
        2 * self.rank0(pos) as i64 - pos as i64
    }

    pub fn select0(&self, k: usize) -> Option<usize> {
        if k == 0 || k > self.node_count() {
            return None;
        }
        let mut b = self.select_samples[(k - 1) / SELECT_SAMPLE] as usize;
        while self.zeros_before(b + 1) < k {
            b += 1;
        }
        let mut need = k - self.zeros_before(b);
        let mut w = b * BLOCK_WORDS;
        loop {
            let inv = !self.src.word(w);
            let c = inv.count_ones() as usize;
            if c >= need {
                return Some(w * 64 + crate::bitvec::select_in_word(inv, need as u32 - 1) + 1);
            }
            need -= c;
            w += 1;
        }
    }

    fn block_of(pos: usize) -> usize {
        (pos - 1) / BLOCK_BITS
    }

    fn block_end(&self, b: usize) -> usize {
        ((b + 1) * BLOCK_BITS).min(self.len)
    }

    fn block_end_excess(&self, b: usize) -> i64 {
        self.start_excess.get(b + 1) as i64
    }

    fn block_start_excess(&self, b: usize) -> i64 {
        self.start_excess.get(b) as i64
    }

    /// Scans `[a, b]` forward given `E(a - 1) = e0`; first position with
    /// excess `<= target`.
    fn scan_fwd(&self, a: usize, b: usize, e0: i64, target: i64) -> Option<usize> {
        let mut cur = Cursor::new(&*self.src);
        let mut e = e0;
        let mut p = a;
        while p <= b {
            if (p - 1).is_multiple_of(8) && p + 7 <= b {
                let v = cur.byte(p);
                if e + (TABLES.min[v] as i64) > target {
                    e += TABLES.delta[v] as i64;
                    p += 8;
                    continue;
                }
            }
            e += step(cur.bit(p));
            if e <= target {
                return Some(p);
            }
            p += 1;
        }
        None
    }

    /// Scans `[a, b]` backward given `E(b) = eb`; last position `q` in
    /// `[a - 1, b]` with excess `<= target`.
    fn scan_bwd(&self, a: usize, b: usize, eb: i64, target: i64) -> Option<usize> {
        let mut cur = Cursor::new(&*self.src);
        let mut e = eb;
        let mut q = b;
        if e <= target {
            return Some(q);
        }
        // invariant: e = E(q); positions > q are rejected
        while q >= a {
            if q.is_multiple_of(8) && q >= 8 && q - 7 >= a {
                let v = cur.byte(q - 7);
                if e + (TABLES.suf_min[v] as i64) > target {
                    e -= TABLES.delta[v] as i64;
                    q -= 8;
                    continue;
                }
            }
            e -= step(cur.bit(q));
            q -= 1;
            if e <= target {
                return Some(q);
            }
        }
        None
    }

    /// Smallest `q >= from` with `E(q) <= target`.
    pub fn fwd_leq(&self, from: usize, target: i64) -> Option<usize> {
        if from > self.len {
            return None;
        }
        let from = from.max(1);
        let b = Self::block_of(from);
        let e0 = self.excess(from - 1);
        if let Some(q) = self.scan_fwd(from, self.block_end(b), e0, target) {
            return Some(q);
        }
        let nb = self.tree.first_leq(b + 1, target as i32)?;
        if nb * BLOCK_BITS >= self.len {
            return None;
        }
        self.scan_fwd(
            nb * BLOCK_BITS + 1,
            self.block_end(nb),
            self.block_start_excess(nb),
            target,
        )
    }

    /// Largest `q` with `0 <= q <= to` and `E(q) <= target`.
    pub fn bwd_leq(&self, to: usize, target: i64) -> Option<usize> {
        if to == 0 {
            return (target >= 0).then_some(0);
        }
        let b = Self::block_of(to);
        let start = b * BLOCK_BITS + 1;
        if let Some(q) = self.scan_bwd(start, to, self.excess(to), target) {
            return Some(q);
        }
        // positions of earlier blocks; the block minimum covers its own
        // positions, and E(0) = 0 is checked last
        if b > 0 {
            if let Some(pb) = self.tree.last_leq(b - 1, target as i32) {
                let s = pb * BLOCK_BITS + 1;
                let end = self.block_end(pb);
                if let Some(q) = self.scan_bwd(s, end, self.block_end_excess(pb), target) {
                    if q >= s {
                        return Some(q);
                    }
                }
            }
        }
        (target >= 0).then_some(0)
    }

    fn scan_min(&self, a: usize, b: usize, e0: i64) -> (i64, usize) {
        let mut cur = Cursor::new(&*self.src);
        let mut e = e0;
        let mut best = (i64::MAX, 0usize);
        let mut p = a;
        while p <= b {
            if (p - 1).is_multiple_of(8) && p + 7 <= b {
                let v = cur.byte(p);
                let m = e + TABLES.min[v] as i64;
                if m < best.0 {
                    best = (m, TABLES.min_cnt[v] as usize);
                } else if m == best.0 {
                    best.1 += TABLES.min_cnt[v] as usize;
                }
                e += TABLES.delta[v] as i64;
                p += 8;
                continue;
            }
            e += step(cur.bit(p));
            if e < best.0 {
                best = (e, 1);
            } else if e == best.0 {
                best.1 += 1;
            }
            p += 1;
        }
        best
    }

    /// Minimum excess over positions `[a, b]` (`1 <= a <= b`) and how many
    /// positions attain it.
    pub fn range_min(&self, a: usize, b: usize) -> (i64, usize) {
        debug_assert!(a >= 1 && a <= b && b <= self.len);
        let (ba, bb) = (Self::block_of(a), Self::block_of(b));
        if ba == bb {
            return self.scan_min(a, b, self.excess(a - 1));
        }
        let mut best = self.scan_min(a, self.block_end(ba), self.excess(a - 1));
        let mut merge = |m: i64, c: usize| {
            if m < best.0 {
                best = (m, c);
            } else if m == best.0 {
                best.1 += c;
            }
        };
        if bb > ba + 1 {
            let (m, c) = self.tree.range(ba + 1, bb - 1);
            merge(m as i64, c as usize);
        }
        let (m, c) = self.scan_min(bb * BLOCK_BITS + 1, b, self.block_start_excess(bb));
        merge(m, c);
        best
    }

    /// The `r`-th (1-based) position `q >= from` with `E(q) <= target`,
    /// stopping at the first position whose excess is strictly below
    /// `target` (returned as `Err(q)`).
    fn nth_at_level(&self, from: usize, target: i64, r: usize) -> std::result::Result<usize, Option<usize>> {
        let mut need = r;
        let mut p = from;
        let mut e = self.excess(from - 1);
        let mut cur = Cursor::new(&*self.src);
        while p <= self.len {
            let b = Self::block_of(p);
            if (p - 1).is_multiple_of(BLOCK_BITS) {
                let m = self.tree.block_min(b) as i64;
                if m > target || (m == target && (self.tree.block_cnt(b) as usize) < need) {
                    if m == target {
                        need -= self.tree.block_cnt(b) as usize;
                    }
                    let end = self.block_end(b);
                    e = self.block_end_excess(b);
                    p = end + 1;
                    continue;
                }
            }
            if (p - 1).is_multiple_of(8) && p + 7 <= self.len {
                let v = cur.byte(p);
                let m = e + TABLES.min[v] as i64;
                if m > target || (m == target && (TABLES.min_cnt[v] as usize) < need) {
                    if m == target {
                        need -= TABLES.min_cnt[v] as usize;
                    }
                    e += TABLES.delta[v] as i64;
                    p += 8;
                    continue;
                }
            }
            e += step(cur.bit(p));
            if e < target {
                return Err(Some(p));
            }
            if e == target {
                need -= 1;
                if need == 0 {
                    return Ok(p);
                }
            }
            p += 1;
        }
        Err(None)
    }

    fn check_node(&self, i: usize) -> Result<()> {
        if i >= self.node_count() {
            return invalid(format!("node {i} out of range 0..{}", self.node_count()));
        }
        Ok(())
    }

    /// Position of node `i`'s opening 0.
    pub fn open_pos(&self, i: usize) -> Result<usize> {
        self.check_node(i)?;
        Ok(self.f(i))
    }

    /// Position of node `i`'s matching 1.
    pub fn close_pos(&self, i: usize) -> Result<usize> {
        self.check_node(i)?;
        Ok(self.find_close(self.f(i)))
    }

    #[inline]
    pub(crate) fn f(&self, i: usize) -> usize {
        self.select0(i + 1).expect("node index checked")
    }

    /// Node whose opening 0 is at `pos`.
    #[inline]
    pub(crate) fn node_at(&self, pos: usize) -> usize {
        self.rank0(pos) - 1
    }

    pub(crate) fn find_close(&self, open: usize) -> usize {
        let e = self.excess(open);
        self.fwd_leq(open + 1, e - 1).expect("balanced sequence")
    }

    fn find_open(&self, close: usize) -> usize {
        let e = self.excess(close);
        self.bwd_leq(close - 1, e).expect("balanced sequence") + 1
    }

    pub fn depth(&self, i: usize) -> usize {
        (self.excess(self.f(i)) - 1) as usize
    }

    pub fn parent(&self, i: usize) -> Option<usize> {
        if i == 0 || i >= self.node_count() {
            return None;
        }
        self.level_ancestor(i, 1)
    }

    /// Ancestor `d` levels above `i` (`d = 0` gives `i`).
    pub fn level_ancestor(&self, i: usize, d: usize) -> Option<usize> {
        if i >= self.node_count() {
            return None;
        }
        let f = self.f(i);
        let e = self.excess(f);
        let target = e - 1 - d as i64;
        if target < 0 {
            return None;
        }
        let q = self.bwd_leq(f - 1, target)?;
        Some(self.node_at(q + 1))
    }

    pub fn subtree_size(&self, i: usize) -> usize {
        let f = self.f(i);
        (self.find_close(f) - f).div_ceil(2)
    }

    pub fn is_leaf(&self, i: usize) -> bool {
        let f = self.f(i);
        f < self.len && self.bit(f + 1)
    }

    pub fn next_sibling(&self, i: usize) -> Option<usize> {
        if i == 0 || i >= self.node_count() {
            return None;
        }
        let c = self.find_close(self.f(i));
        if c < self.len && !self.bit(c + 1) {
            Some(self.node_at(c + 1))
        } else {
            None
        }
    }

    pub fn prev_sibling(&self, i: usize) -> Option<usize> {
        if i == 0 || i >= self.node_count() {
            return None;
        }
        let f = self.f(i);
        if self.bit(f - 1) {
            Some(self.node_at(self.find_open(f - 1)))
        } else {
            None
        }
    }

    pub fn first_child(&self, i: usize) -> Option<usize> {
        if i >= self.node_count() || self.is_leaf(i) {
            None
        } else {
            Some(i + 1)
        }
    }

    pub fn degree(&self, i: usize) -> usize {
        if self.is_leaf(i) {
            return 0;
        }
        let f = self.f(i);
        let c = self.find_close(f);
        // children close at excess E(f); nothing inside goes lower
        let (m, cnt) = self.range_min(f + 1, c - 1);
        debug_assert_eq!(m, self.excess(f));
        cnt
    }

    /// 1-based rank of `i` among its siblings (`None` for the root).
    pub fn child_rank(&self, i: usize) -> Option<usize> {
        let p = self.parent(i)?;
        let fp = self.f(p);
        let fi = self.f(i);
        if fi == fp + 1 {
            return Some(1);
        }
        let (m, cnt) = self.range_min(fp + 1, fi - 1);
        Some(if m == self.excess(fp) { cnt + 1 } else { 1 })
    }

    /// The `r`-th (1-based) child of `i`.
    pub fn child_select(&self, i: usize, r: usize) -> Option<usize> {
        if r == 0 || i >= self.node_count() || self.is_leaf(i) {
            return None;
        }
        if r == 1 {
            return Some(i + 1);
        }
        let f = self.f(i);
        let level = self.excess(f);
        // the (r-1)-th child close is followed by the r-th child open
        match self.nth_at_level(f + 1, level, r - 1) {
            Ok(q) if q < self.len && !self.bit(q + 1) => Some(self.node_at(q + 1)),
            _ => None,
        }
    }

    /// Leftmost and rightmost nodes of minimum depth among preorder nodes
    /// `i..=j` (`1 <= i <= j`).
    ///
    /// In a 2d-min heap the rightmost one is the rightmost position of the
    /// range minimum; equal minima form a sibling run ending there.
    pub fn range_min_depth_nodes(&self, i: usize, j: usize) -> Result<(usize, usize)> {
        if i == 0 || i > j || j >= self.node_count() {
            return invalid(format!("node range [{i}, {j}] not within 1..{}", self.node_count()));
        }
        if i == j {
            return Ok((i, i));
        }
        let (a, b) = (self.f(i) - 1, self.f(j) - 1);
        let (m, _) = self.range_min(a, b);
        let right = self.bwd_leq(b, m).expect("minimum exists");
        let left = self.fwd_leq(a, m).expect("minimum exists");
        Ok((self.node_at(left + 1), self.node_at(right + 1)))
    }

    /// Rightmost node of minimum depth in `i..=j`: the structural range
    /// minimum of a 2d-min heap.
    pub fn range_min_node(&self, i: usize, j: usize) -> Result<usize> {
        self.range_min_depth_nodes(i, j).map(|(_, r)| r)
    }
}
