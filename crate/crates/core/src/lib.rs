//! Compressed encoding of an integer array that answers range minimum and
//! maximum queries, range q-th minimum and maximum queries, and
//! next/previous smaller/larger value queries without the array itself.
//!
//! The encoding stores the balanced-parentheses sequences of the colored
//! 2d-min and 2d-max heaps jointly (arrays `U`, `D`, `E`) together with the
//! colors of the nodes whose color cannot be inferred from the tree shape.
//! Arrays with consecutive equal elements are reduced first through a
//! repeat bitvector `C`.
//!
//! Module map:
//!
//! - [`bitvec`]: packed bit arrays with rank/select, short-pattern
//!   rank/select, packed trits and fixed-width integers.
//! - [`bp`]: balanced-parentheses navigation over any [`bp::BitSource`].
//! - [`heap`]: construction of the colored 2d-min/max heaps.
//! - [`codec`]: the joint `U`/`D`/`E` encoding, the general-array `C`
//!   layer and block-wise virtual decoding of both trees.
//! - [`query`]: color, PRS/NRS and the eight array queries.
//! - [`oracle`]: naive linear-scan answers used as ground truth.
//! - [`lab`]: Baxter permutations, the lower-bound array class and
//!   reconstruction of an array from q-th min/max queries.
//! - [`format`]: the on-disk index file.

pub mod bitvec;
pub mod bp;
pub mod codec;
mod error;
pub mod format;
pub mod heap;
pub mod lab;
pub mod oracle;
pub mod query;

pub use error::{Error, Result};

/// Which of the two heaps a query or structure refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Min,
    Max,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Min, Side::Max];

    pub fn name(self) -> &'static str {
        match self {
            Side::Min => "min",
            Side::Max => "max",
        }
    }
}
