//! Colored 2d-min and 2d-max heaps.
//!
//! Node `i` (1..=m) stands for `A[i]`; node 0 is a sentinel root that is
//! never compared. In the min heap the parent of `i` is the previous
//! smaller value position, in the max heap the previous larger one.

use crate::bitvec::{BitBuf, BitVector};
use crate::error::{invalid, Result};
use crate::Side;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Color {
    Blue,
    Red,
}

impl Color {
    /// 0 = blue, 1 = red.
    pub fn bit(self) -> bool {
        self == Color::Red
    }

    pub fn from_bit(b: bool) -> Self {
        if b {
            Color::Red
        } else {
            Color::Blue
        }
    }
}

#[derive(Clone, Debug)]
pub struct ColoredHeap {
    pub kind: Side,
    /// Balanced parentheses, `2(m + 1)` bits, 0 = open.
    pub bp: BitVector,
    /// Parent of each node; `parent[0]` is unused (0).
    pub parent: Vec<u32>,
    /// Color of every node; the root is blue.
    pub colors: Vec<Color>,
    /// Valid nodes: neither a leftmost child nor right after a leaf sibling;
    /// the root is invalid.
    pub valid: Vec<bool>,
    /// Opening position of each node in `bp`.
    pub open: Vec<u32>,
}

#[inline]
fn pops<T: PartialOrd>(kind: Side, top: &T, x: &T) -> bool {
    match kind {
        Side::Min => top >= x,
        Side::Max => top <= x,
    }
}

impl ColoredHeap {
    /// One left-to-right stack pass over `values`.
    pub fn build<T: PartialOrd>(values: &[T], kind: Side) -> Result<Self> {
        let m = values.len();
        if m == 0 {
            return invalid("cannot build a heap over an empty array");
        }
        let mut bp = BitBuf::with_capacity(2 * (m + 1));
        let mut parent = vec![0u32; m + 1];
        let mut colors = vec![Color::Blue; m + 1];
        let mut open = vec![0u32; m + 1];
        // node indices; the root (0) is never popped
        let mut stack: Vec<usize> = Vec::with_capacity(64);
        bp.push(false);
        open[0] = 1;
        stack.push(0);
        for i in 1..=m {
            let x = &values[i - 1];
            let mut last_popped = None;
            while let Some(&top) = stack.last() {
                if top == 0 || !pops(kind, &values[top - 1], x) {
                    break;
                }
                stack.pop();
                bp.push(true);
                last_popped = Some(top);
            }
            let p = *stack.last().unwrap();
            parent[i] = p as u32;
            colors[i] = match last_popped {
                // the last popped node is i's immediate left sibling
                Some(sib) if values[sib - 1] != *x => Color::Red,
                _ => Color::Blue,
            };
            bp.push(false);
            open[i] = bp.len() as u32;
            stack.push(i);
        }
        bp.push_run(true, stack.len());
        let bp = bp.finish();
        let valid = (0..=m)
            .map(|i| {
                let f = open[i] as usize;
                i > 0 && f > 2 && bp.get(f - 2) && bp.get(f - 1)
            })
            .collect();
        Ok(ColoredHeap {
            kind,
            bp,
            parent,
            colors,
            valid,
            open,
        })
    }

    /// Number of array entries (`m`); the tree has `m + 1` nodes.
    pub fn size(&self) -> usize {
        self.parent.len() - 1
    }

    pub fn is_valid(&self, i: usize) -> Result<bool> {
        if i == 0 || i > self.size() {
            return invalid(format!("validity is defined for nodes 1..={}", self.size()));
        }
        Ok(self.valid[i])
    }

    /// Colors of the valid nodes in preorder (0 = blue, 1 = red).
    pub fn color_array(&self) -> BitVector {
        BitVector::from_bits(
            (1..=self.size())
                .filter(|&i| self.valid[i])
                .map(|i| self.colors[i].bit()),
        )
    }

    /// Children lists, each in left-to-right order.
    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.size() + 1];
        for i in 1..=self.size() {
            ch[self.parent[i] as usize].push(i);
        }
        ch
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: [i64; 9] = [5, 4, 5, 3, 1, 2, 6, 3, 1];

    #[test]
    fn example_min_heap() {
        let h = ColoredHeap::build(&EXAMPLE, Side::Min).unwrap();
        assert_eq!(h.bp.to_string(), "00100110100010111011");
        assert_eq!(h.children()[0], vec![1, 2, 4, 5, 9]);
        assert_eq!(h.colors[9], Color::Blue);
        assert_eq!(h.colors[5], Color::Red);
        assert_eq!(h.color_array().to_string(), "10");
        assert!(h.is_valid(4).unwrap());
        assert!(!h.is_valid(5).unwrap());
        assert!(!h.is_valid(1).unwrap());
        assert!(h.is_valid(0).is_err());
    }

    #[test]
    fn example_max_heap() {
        let h = ColoredHeap::build(&EXAMPLE, Side::Max).unwrap();
        assert_eq!(h.parent[3], 0);
        let valid_count = (1..=9).filter(|&i| h.valid[i]).count();
        assert_eq!(h.color_array().len(), valid_count);
    }

    #[test]
    fn increasing_array_is_a_path() {
        let h = ColoredHeap::build(&[1, 2, 3], Side::Min).unwrap();
        assert_eq!(&h.parent[1..], &[0, 1, 2]);
        assert!(h.colors.iter().all(|&c| c == Color::Blue));
        assert_eq!(h.color_array().len(), 0);
    }

    #[test]
    fn empty_array_rejected() {
        assert!(ColoredHeap::build::<i64>(&[], Side::Min).is_err());
    }
}
