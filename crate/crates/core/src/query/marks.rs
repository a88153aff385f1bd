//! Previous/next red sibling (PRS/NRS) with a bounded number of sibling
//! steps: every `t_L`-th child is marked at level `L`, and marked children
//! store a pointer to the nearest red sibling or lower-level mark.

use crate::bitvec::{MonotoneInts, PackedInts};
use crate::bp::{read_bits, BpTree};
use crate::error::{invalid, Result};
use crate::heap::Color;

use super::ColorIndex;

pub const MAX_LEVELS: usize = 4;

/// Work done by one PRS/NRS query.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ScanStats {
    pub sibling_steps: usize,
    pub jumps: usize,
}

/// `t_1, ..., t_levels` for a tree over `n` array elements:
/// `t_L = max(2, ceil(lg^(L) n * lg^(L+1) n))` with `lg x = log2(max(x, 2))`.
pub fn level_moduli(n: usize, levels: usize) -> Vec<usize> {
    let lg = |x: f64| x.max(2.0).log2();
    let mut it = vec![lg(n as f64)];
    for k in 0..levels {
        it.push(lg(it[k]));
    }
    (0..levels)
        .map(|l| ((it[l] * it[l + 1]).ceil() as usize).max(2))
        .collect()
}

#[derive(Debug)]
struct Level {
    modulus: usize,
    /// marked node ids, ascending; membership itself follows from the
    /// child rank, so only the slot lookup needs them
    ids: MonotoneInts,
    prev: PackedInts,
    next: PackedInts,
}

/// Mark levels `1..=levels`. Level 1 stores node ids (0 = none); higher
/// levels store sibling-rank distances.
#[derive(Debug)]
pub struct MarkLevels {
    levels: Vec<Level>,
}

impl MarkLevels {
    pub fn build(tree: &BpTree, red: &[bool], levels: usize) -> Result<Self> {
        if !(1..=MAX_LEVELS).contains(&levels) {
            return invalid(format!("levels must be in 1..={MAX_LEVELS}, got {levels}"));
        }
        let nodes = tree.node_count();
        if red.len() != nodes {
            return invalid("one color per node expected");
        }
        let children = children_of(tree);
        let moduli = level_moduli(nodes - 1, levels);
        let mut out = Vec::with_capacity(levels);
        for (l, &t) in moduli.iter().enumerate() {
            let mut mark = vec![false; nodes];
            for list in children.lists() {
                for (k, &s) in list.iter().enumerate() {
                    mark[s as usize] = (k + 1) % t == 0;
                }
            }
            let ids: Vec<u64> = (0..nodes).filter(|&s| mark[s]).map(|s| s as u64).collect();
            let mut slots = vec![0u32; nodes];
            for (k, &s) in ids.iter().enumerate() {
                slots[s as usize] = k as u32;
            }
            let count = ids.len();
            let (mut prev, mut next) = (vec![0u64; count], vec![0u64; count]);
            let slot = |s: u32| slots[s as usize] as usize;
            for list in children.lists() {
                let d = list.len();
                let lower = |k: usize| red[list[k - 1] as usize] || (l > 0 && k.is_multiple_of(moduli[l - 1]));
                // left to right
                let mut last = 0usize;
                for k in 1..=d {
                    if k % t == 0 {
                        prev[slot(list[k - 1])] = if l == 0 {
                            if last == 0 { 0 } else { list[last - 1] as u64 }
                        } else {
                            (k - last) as u64
                        };
                    }
                    if lower(k) {
                        last = k;
                    }
                }
                let mut last = d + 1;
                for k in (1..=d).rev() {
                    if k % t == 0 {
                        next[slot(list[k - 1])] = if l == 0 {
                            if last == d + 1 { 0 } else { list[last - 1] as u64 }
                        } else {
                            (last - k) as u64
                        };
                    }
                    if lower(k) {
                        last = k;
                    }
                }
            }
            out.push(Level {
                modulus: t,
                ids: MonotoneInts::from_values(&ids).expect("ascending"),
                prev: PackedInts::from_values(&prev),
                next: PackedInts::from_values(&next),
            });
        }
        Ok(MarkLevels { levels: out })
    }

    pub fn levels(&self) -> usize {
        self.levels.len()
    }

    pub fn moduli(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.modulus).collect()
    }

    /// Marking of a child with 1-based sibling rank `r`.
    fn is_marked(&self, level: usize, r: usize) -> bool {
        r.is_multiple_of(self.levels[level].modulus)
    }

    fn slot(&self, level: usize, s: usize) -> usize {
        self.levels[level].ids.position(s as u64).expect("marked node")
    }

    pub fn prs(&self, tree: &BpTree, colors: &ColorIndex, i: usize) -> (Option<usize>, ScanStats) {
        self.scan(tree, colors, i, false)
    }

    pub fn nrs(&self, tree: &BpTree, colors: &ColorIndex, i: usize) -> (Option<usize>, ScanStats) {
        self.scan(tree, colors, i, true)
    }

    fn scan(&self, tree: &BpTree, colors: &ColorIndex, i: usize, fwd: bool) -> (Option<usize>, ScanStats) {
        let mut st = ScanStats::default();
        let top = self.levels.len() - 1;
        let mut cur = i;
        let mut r = match tree.child_rank(i) {
            Some(r) => r,
            None => return (None, st),
        };
        loop {
            let step = if fwd { tree.next_sibling(cur) } else { tree.prev_sibling(cur) };
            cur = match step {
                Some(s) => s,
                None => return (None, st),
            };
            r = if fwd { r + 1 } else { r - 1 };
            st.sibling_steps += 1;
            if colors.color(cur) == Color::Red {
                return (Some(cur), st);
            }
            if self.is_marked(top, r) {
                break;
            }
        }
        let mut level = top;
        loop {
            st.jumps += 1;
            let lv = &self.levels[level];
            let k = self.slot(level, cur);
            let v = if fwd { lv.next.get(k) } else { lv.prev.get(k) } as usize;
            if level == 0 {
                return ((v != 0).then_some(v), st);
            }
            let target = if fwd { r + v } else { r - v };
            let parent = tree.parent(cur).expect("non-root");
            if target == 0 || target > tree.degree(parent) {
                return (None, st);
            }
            cur = tree.child_select(parent, target).expect("rank within degree");
            r = target;
            if colors.color(cur) == Color::Red {
                return (Some(cur), st);
            }
            level -= 1;
            debug_assert!(self.is_marked(level, r));
        }
    }

    pub fn size_bits(&self) -> usize {
        self.levels
            .iter()
            .map(|l| l.ids.size_bits() + l.prev.size_bits() + l.next.size_bits())
            .sum()
    }
}

/// Children of every node in compressed rows, from one pass over the
/// parentheses.
struct Children {
    offsets: Vec<u32>,
    items: Vec<u32>,
}

impl Children {
    fn lists(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.offsets
            .windows(2)
            .map(|w| &self.items[w[0] as usize..w[1] as usize])
            .filter(|l| !l.is_empty())
    }
}

fn children_of(tree: &BpTree) -> Children {
    let nodes = tree.node_count();
    let src = tree.source();
    let len = src.len();
    let mut parent = vec![0u32; nodes];
    let mut stack: Vec<u32> = Vec::with_capacity(64);
    let mut next_node = 0u32;
    let mut pos = 1usize;
    while pos <= len {
        let w = (len - pos + 1).min(64);
        let word = read_bits(src, pos, w);
        for k in 0..w {
            if (word >> k) & 1 == 0 {
                if let Some(&p) = stack.last() {
                    parent[next_node as usize] = p;
                }
                stack.push(next_node);
                next_node += 1;
            } else {
                stack.pop();
            }
        }
        pos += w;
    }
    let mut offsets = vec![0u32; nodes + 1];
    for &p in &parent[1..] {
        offsets[p as usize + 1] += 1;
    }
    for k in 0..nodes {
        offsets[k + 1] += offsets[k];
    }
    let mut fill = offsets.clone();
    let mut items = vec![0u32; nodes.saturating_sub(1)];
    for (i, &p) in parent.iter().enumerate().skip(1) {
        let p = p as usize;
        items[fill[p] as usize] = i as u32;
        fill[p] += 1;
    }
    Children { offsets, items }
}
