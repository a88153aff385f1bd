//! The eight array queries answered from the two heaps' parentheses, the
//! node colors and the PRS/NRS mark levels.

mod color;
mod marks;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::bitvec::BitVector;
use crate::bp::{BitSource, BpTree};
use crate::codec::reduce_repeats;
use crate::error::{invalid, Error, Result};
use crate::heap::{Color, ColoredHeap};
use crate::Side;

pub use color::ColorIndex;
pub use marks::{level_moduli, MarkLevels, ScanStats, MAX_LEVELS};

/// A single query; positions are 1-indexed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Query {
    Rmin(usize, usize),
    Rmax(usize, usize),
    RminQ(usize, usize, usize),
    RmaxQ(usize, usize, usize),
    Psv(usize),
    Nsv(usize),
    Plv(usize),
    Nlv(usize),
}

impl Query {
    pub const KINDS: [&'static str; 8] = ["rmin", "rmax", "rminq", "rmaxq", "psv", "nsv", "plv", "nlv"];

    /// Builds a query from its kind name and positional arguments.
    pub fn from_parts(kind: &str, args: &[usize]) -> Result<Query> {
        let want = match kind {
            "rmin" | "rmax" => 2,
            "rminq" | "rmaxq" => 3,
            "psv" | "nsv" | "plv" | "nlv" => 1,
            _ => return invalid(format!("unknown query kind {kind:?}")),
        };
        if args.len() != want {
            return invalid(format!("{kind} takes {want} arguments, got {}", args.len()));
        }
        Ok(match kind {
            "rmin" => Query::Rmin(args[0], args[1]),
            "rmax" => Query::Rmax(args[0], args[1]),
            "rminq" => Query::RminQ(args[0], args[1], args[2]),
            "rmaxq" => Query::RmaxQ(args[0], args[1], args[2]),
            "psv" => Query::Psv(args[0]),
            "nsv" => Query::Nsv(args[0]),
            "plv" => Query::Plv(args[0]),
            _ => Query::Nlv(args[0]),
        })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Query::Rmin(..) => "rmin",
            Query::Rmax(..) => "rmax",
            Query::RminQ(..) => "rminq",
            Query::RmaxQ(..) => "rmaxq",
            Query::Psv(_) => "psv",
            Query::Nsv(_) => "nsv",
            Query::Plv(_) => "plv",
            Query::Nlv(_) => "nlv",
        }
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Query::Rmin(i, j) | Query::Rmax(i, j) => write!(f, "{} {i} {j}", self.kind()),
            Query::RminQ(i, j, q) | Query::RmaxQ(i, j, q) => {
                write!(f, "{} {i} {j} {q}", self.kind())
            }
            Query::Psv(i) | Query::Nsv(i) | Query::Plv(i) | Query::Nlv(i) => {
                write!(f, "{} {i}", self.kind())
            }
        }
    }
}

impl FromStr for Query {
    type Err = Error;

    /// `"rminq 2 7 3"` style.
    fn from_str(s: &str) -> Result<Query> {
        let mut it = s.split_whitespace();
        let kind = it.next().ok_or_else(|| Error::InvalidArgument("empty query".into()))?;
        let args = it
            .map(|a| a.parse::<usize>().map_err(|e| Error::InvalidArgument(format!("{a:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Query::from_parts(kind, &args)
    }
}

/// Query interface shared by the index and the naive oracle.
///
/// Sentinels: a missing previous value is `0`, a missing next value `n + 1`.
/// `rmin`/`rmax` return the leftmost extreme position; the q-th variants
/// return the q-th occurrence, or the last one if there are fewer than q.
pub trait ArrayQueries {
    fn len(&self) -> usize;
    fn rmin(&self, i: usize, j: usize) -> Result<usize>;
    fn rmax(&self, i: usize, j: usize) -> Result<usize>;
    fn rmin_q(&self, i: usize, j: usize, q: usize) -> Result<usize>;
    fn rmax_q(&self, i: usize, j: usize, q: usize) -> Result<usize>;
    fn psv(&self, i: usize) -> Result<usize>;
    fn plv(&self, i: usize) -> Result<usize>;
    fn nsv(&self, i: usize) -> Result<usize>;
    fn nlv(&self, i: usize) -> Result<usize>;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn answer(&self, q: Query) -> Result<usize> {
        match q {
            Query::Rmin(i, j) => self.rmin(i, j),
            Query::Rmax(i, j) => self.rmax(i, j),
            Query::RminQ(i, j, k) => self.rmin_q(i, j, k),
            Query::RmaxQ(i, j, k) => self.rmax_q(i, j, k),
            Query::Psv(i) => self.psv(i),
            Query::Nsv(i) => self.nsv(i),
            Query::Plv(i) => self.plv(i),
            Query::Nlv(i) => self.nlv(i),
        }
    }
}

/// Navigation, colors and marks for one heap.
#[derive(Debug)]
pub struct SideIndex {
    nav: BpTree,
    colors: ColorIndex,
    marks: MarkLevels,
}

impl SideIndex {
    fn new(nav: BpTree, colors: ColorIndex, levels: usize) -> Result<Self> {
        let marks = MarkLevels::build(&nav, &colors.all_red(), levels)?;
        Ok(SideIndex { nav, colors, marks })
    }

    pub fn tree(&self) -> &BpTree {
        &self.nav
    }

    pub fn marks(&self) -> &MarkLevels {
        &self.marks
    }

    pub fn color(&self, i: usize) -> Color {
        self.colors.color(i)
    }

    /// Previous red sibling.
    pub fn prs(&self, i: usize) -> Option<usize> {
        self.marks.prs(&self.nav, &self.colors, i).0
    }

    /// Next red sibling.
    pub fn nrs(&self, i: usize) -> Option<usize> {
        self.marks.nrs(&self.nav, &self.colors, i).0
    }

    pub fn prs_traced(&self, i: usize) -> (Option<usize>, ScanStats) {
        self.marks.prs(&self.nav, &self.colors, i)
    }

    pub fn nrs_traced(&self, i: usize) -> (Option<usize>, ScanStats) {
        self.marks.nrs(&self.nav, &self.colors, i)
    }

    /// Leftmost extreme of `i..=j`, plus the rightmost one.
    fn range_extreme(&self, i: usize, j: usize) -> Result<(usize, usize)> {
        let (y, x) = self.nav.range_min_depth_nodes(i, j)?;
        if x == y || self.color(x) == Color::Red {
            return Ok((x, x));
        }
        // x equals its left sibling: its run of equal siblings starts at
        // the previous red one
        let p = match self.prs(x) {
            Some(z) if z >= y => z,
            _ => y,
        };
        Ok((p, x))
    }

    fn range_qth(&self, i: usize, j: usize, q: usize) -> Result<usize> {
        if q == 0 {
            return invalid("q must be at least 1");
        }
        let (p, x) = self.range_extreme(i, j)?;
        if p == x {
            return Ok(x);
        }
        let rp = self.nav.child_rank(p).expect("non-root");
        let rx = self.nav.child_rank(x).expect("non-root");
        if q > rx - rp {
            return Ok(x);
        }
        let parent = self.nav.parent(p).expect("non-root");
        Ok(self.nav.child_select(parent, rp + q - 1).expect("sibling in run"))
    }

    fn previous(&self, i: usize) -> usize {
        self.nav.parent(i).unwrap_or(0)
    }

    fn next(&self, i: usize) -> usize {
        if let Some(z) = self.nrs(i) {
            return z;
        }
        let p = self.previous(i);
        p + self.nav.subtree_size(p)
    }

    pub fn directory_bits(&self) -> usize {
        self.nav.directory_bits() + self.colors.directory_bits() + self.marks.size_bits()
    }
}

/// Answers all queries from the two heaps.
///
/// The parentheses may come from explicit bit vectors or from the
/// block-decoded virtual sequences of an encoding; answers are the same.
#[derive(Debug)]
pub struct QueryIndex {
    n: usize,
    sides: [SideIndex; 2],
}

/// Inputs for one side of a [`QueryIndex`].
pub struct SideSources {
    /// Parentheses of the heap of the array itself.
    pub nav: Arc<dyn BitSource>,
    /// Parentheses of the heap of the reduced (no equal neighbours) array.
    pub reduced: Arc<dyn BitSource>,
    /// Colors of the reduced heap's valid nodes, in preorder.
    pub colors: BitVector,
}

impl QueryIndex {
    /// `repeats` is the bitvector marking positions equal to their left
    /// neighbour, or `None` when there are none (then `nav` and `reduced`
    /// describe the same tree).
    pub fn from_sources(
        min: SideSources,
        max: SideSources,
        repeats: Option<Arc<BitVector>>,
        levels: usize,
    ) -> Result<Self> {
        let build = |s: SideSources| -> Result<SideIndex> {
            let nav = BpTree::new(s.nav)?;
            let reduced = match repeats {
                Some(_) => BpTree::new(s.reduced)?,
                None => nav.clone(),
            };
            let colors = ColorIndex::new(reduced, s.colors, repeats.clone())?;
            SideIndex::new(nav, colors, levels)
        };
        let min = build(min)?;
        let max = build(max)?;
        let n = min.nav.node_count() - 1;
        if max.nav.node_count() - 1 != n {
            return invalid("min and max heaps disagree on the array length");
        }
        Ok(QueryIndex { n, sides: [min, max] })
    }

    /// Builds everything from explicit heaps of `values`.
    pub fn explicit<T: PartialOrd + Clone>(values: &[T], levels: usize) -> Result<Self> {
        let (c, reduced) = reduce_repeats(values)?;
        let repeats = (c.count_ones() > 0).then(|| Arc::new(c));
        let mut sides = Vec::with_capacity(2);
        for side in Side::BOTH {
            let h = ColoredHeap::build(&reduced, side)?;
            let red: Arc<dyn BitSource> = Arc::new(h.bp.clone());
            let nav: Arc<dyn BitSource> = if repeats.is_some() {
                Arc::new(ColoredHeap::build(values, side)?.bp)
            } else {
                red.clone()
            };
            sides.push(SideSources { nav, reduced: red, colors: h.color_array() });
        }
        let max = sides.pop().unwrap();
        let min = sides.pop().unwrap();
        QueryIndex::from_sources(min, max, repeats, levels)
    }

    pub fn side(&self, s: Side) -> &SideIndex {
        &self.sides[s as usize]
    }

    pub fn levels(&self) -> usize {
        self.sides[0].marks.levels()
    }

    /// Bits of all navigation, color and mark directories.
    pub fn directory_bits(&self) -> usize {
        self.sides.iter().map(SideIndex::directory_bits).sum()
    }

    fn check_pos(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n {
            return invalid(format!("position {i} not in 1..={}", self.n));
        }
        Ok(())
    }

    fn check_range(&self, i: usize, j: usize) -> Result<()> {
        self.check_pos(i)?;
        self.check_pos(j)?;
        if i > j {
            return invalid(format!("empty range [{i}, {j}]"));
        }
        Ok(())
    }
}

impl ArrayQueries for QueryIndex {
    fn len(&self) -> usize {
        self.n
    }

    fn rmin(&self, i: usize, j: usize) -> Result<usize> {
        self.check_range(i, j)?;
        Ok(self.side(Side::Min).range_extreme(i, j)?.0)
    }

    fn rmax(&self, i: usize, j: usize) -> Result<usize> {
        self.check_range(i, j)?;
        Ok(self.side(Side::Max).range_extreme(i, j)?.0)
    }

    fn rmin_q(&self, i: usize, j: usize, q: usize) -> Result<usize> {
        self.check_range(i, j)?;
        self.side(Side::Min).range_qth(i, j, q)
    }

    fn rmax_q(&self, i: usize, j: usize, q: usize) -> Result<usize> {
        self.check_range(i, j)?;
        self.side(Side::Max).range_qth(i, j, q)
    }

    fn psv(&self, i: usize) -> Result<usize> {
        self.check_pos(i)?;
        Ok(self.side(Side::Min).previous(i))
    }

    fn plv(&self, i: usize) -> Result<usize> {
        self.check_pos(i)?;
        Ok(self.side(Side::Max).previous(i))
    }

    fn nsv(&self, i: usize) -> Result<usize> {
        self.check_pos(i)?;
        Ok(self.side(Side::Min).next(i))
    }

    fn nlv(&self, i: usize) -> Result<usize> {
        self.check_pos(i)?;
        Ok(self.side(Side::Max).next(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{all_queries, first_mismatch, NaiveOracle};

    const EXAMPLE: [i64; 9] = [5, 4, 5, 3, 1, 2, 6, 3, 1];

    #[test]
    fn query_text_round_trip() {
        let q: Query = "rminq 2 7 3".parse().unwrap();
        assert_eq!(q, Query::RminQ(2, 7, 3));
        assert_eq!(q.to_string(), "rminq 2 7 3");
        assert!("rmin 1".parse::<Query>().is_err());
        assert!("top 1 2".parse::<Query>().is_err());
    }

    #[test]
    fn example_answers() {
        let idx = QueryIndex::explicit(&EXAMPLE, 2).unwrap();
        assert_eq!(idx.rmin(1, 9).unwrap(), 5);
        assert_eq!(idx.rmin_q(1, 9, 2).unwrap(), 9);
        assert_eq!(idx.nsv(6).unwrap(), 9);
        assert_eq!(idx.plv(7).unwrap(), 0);
        assert_eq!(idx.nsv(9).unwrap(), 10);
        assert_eq!(idx.side(Side::Min).color(9), Color::Blue);
        assert_eq!(idx.side(Side::Min).prs(9), Some(5));
    }

    #[test]
    fn small_arrays_match_oracle() {
        for n in 1..=6usize {
            let total = 3usize.pow(n as u32);
            for code in 0..total {
                let mut c = code;
                let vals: Vec<i64> = (0..n)
                    .map(|_| {
                        let v = (c % 3) as i64;
                        c /= 3;
                        v
                    })
                    .collect();
                let idx = QueryIndex::explicit(&vals, 1).unwrap();
                let o = NaiveOracle::new(vals.clone());
                if let Some(m) = first_mismatch(&idx, &o, all_queries(n, 3)) {
                    panic!("{vals:?}: {m}");
                }
            }
        }
    }

    #[test]
    fn out_of_range_rejected() {
        let idx = QueryIndex::explicit(&EXAMPLE, 2).unwrap();
        assert!(idx.rmin(0, 3).is_err());
        assert!(idx.rmax(4, 3).is_err());
        assert!(idx.psv(10).is_err());
        assert!(idx.rmin_q(1, 3, 0).is_err());
    }
}
