use std::sync::Arc;

use crate::bitvec::{BitVector, Pattern, PatternIndex};
use crate::bp::{read_bits, BpTree};
use crate::error::{invalid, Result};
use crate::heap::Color;

/// Node colors from the reduced heap's shape plus the stored colors of its
/// valid nodes (those opening right after `11`).
#[derive(Debug)]
pub struct ColorIndex {
    tree: BpTree,
    colors: BitVector,
    p110: PatternIndex,
    repeats: Option<Arc<BitVector>>,
}

impl ColorIndex {
    pub fn new(tree: BpTree, colors: BitVector, repeats: Option<Arc<BitVector>>) -> Result<Self> {
        let p110 = PatternIndex::build(tree.source(), Pattern::P110);
        if p110.total() != colors.len() {
            return invalid(format!(
                "{} stored colors for {} valid nodes",
                colors.len(),
                p110.total()
            ));
        }
        if let Some(c) = &repeats {
            if c.count_zeros() + 1 != tree.node_count() {
                return invalid("repeat bitvector does not match the reduced heap");
            }
        }
        Ok(ColorIndex { tree, colors, p110, repeats })
    }

    /// Color of node `i` of the array's own heap.
    pub fn color(&self, i: usize) -> Color {
        let i = match &self.repeats {
            Some(c) if i > 0 => {
                if c.get(i) {
                    return Color::Blue;
                }
                c.rank0(i)
            }
            _ => i,
        };
        let f = self.tree.f(i);
        if f <= 2 || !self.tree.bit(f - 1) {
            return Color::Blue;
        }
        if !self.tree.bit(f - 2) {
            // the left sibling is a leaf, hence the previous element
            return Color::Red;
        }
        let j = self.p110.rank(self.tree.source(), f);
        Color::from_bit(self.colors.get(j))
    }

    /// Red flags of every node of the array's heap, by one sequential pass.
    pub fn all_red(&self) -> Vec<bool> {
        let src = self.tree.source();
        let len = src.len();
        let mut reduced = Vec::with_capacity(self.tree.node_count());
        let (mut prev1, mut prev2) = (false, false);
        let mut next_color = 1usize;
        let mut pos = 1usize;
        while pos <= len {
            let w = (len - pos + 1).min(64);
            let word = read_bits(src, pos, w);
            for k in 0..w {
                let bit = (word >> k) & 1 == 1;
                if !bit {
                    let red = if prev1 && prev2 {
                        next_color += 1;
                        self.colors.get(next_color - 1)
                    } else {
                        prev1
                    };
                    reduced.push(red);
                }
                prev2 = prev1;
                prev1 = bit;
            }
            pos += w;
        }
        match &self.repeats {
            None => reduced,
            Some(c) => {
                let mut out = Vec::with_capacity(c.len() + 1);
                out.push(false);
                let mut r = 0usize;
                for i in 1..=c.len() {
                    if c.get(i) {
                        out.push(false);
                    } else {
                        r += 1;
                        out.push(reduced[r]);
                    }
                }
                out
            }
        }
    }

    /// Without repeats the reduced tree is the navigation tree, whose
    /// directories are counted there.
    pub fn directory_bits(&self) -> usize {
        let own = if self.repeats.is_some() { self.tree.directory_bits() } else { 0 };
        own + self.p110.size_bits()
    }
}
