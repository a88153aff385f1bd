//! Linear-scan answers for every query kind, following the textbook
//! definitions literally. Ground truth for all equivalence tests.

use crate::error::{invalid, Result};
use crate::query::{ArrayQueries, Query};

#[derive(Clone, Debug)]
pub struct NaiveOracle {
    values: Vec<i64>,
}

impl NaiveOracle {
    pub fn new(values: Vec<i64>) -> Self {
        NaiveOracle { values }
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// `A[p]`, 1-indexed.
    fn a(&self, p: usize) -> i64 {
        self.values[p - 1]
    }

    fn check_pos(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.values.len() {
            return invalid(format!("position {i} not in 1..={}", self.values.len()));
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

    /// All positions attaining the range extreme, left to right.
    fn extreme_positions(&self, i: usize, j: usize, max: bool) -> Vec<usize> {
        let vals = (i..=j).map(|p| self.a(p));
        let best = if max { vals.max() } else { vals.min() }.unwrap();
        (i..=j).filter(|&p| self.a(p) == best).collect()
    }

    fn qth(&self, i: usize, j: usize, q: usize, max: bool) -> Result<usize> {
        self.check_range(i, j)?;
        if q == 0 {
            return invalid("q must be at least 1");
        }
        let occ = self.extreme_positions(i, j, max);
        Ok(occ[(q - 1).min(occ.len() - 1)])
    }
}

impl ArrayQueries for NaiveOracle {
    fn len(&self) -> usize {
        self.values.len()
    }

    fn rmin(&self, i: usize, j: usize) -> Result<usize> {
        self.qth(i, j, 1, false)
    }

    fn rmax(&self, i: usize, j: usize) -> Result<usize> {
        self.qth(i, j, 1, true)
    }

    fn rmin_q(&self, i: usize, j: usize, q: usize) -> Result<usize> {
        self.qth(i, j, q, false)
    }

    fn rmax_q(&self, i: usize, j: usize, q: usize) -> Result<usize> {
        self.qth(i, j, q, true)
    }

    fn psv(&self, i: usize) -> Result<usize> {
        self.check_pos(i)?;
        Ok((1..i).rev().find(|&j| self.a(j) < self.a(i)).unwrap_or(0))
    }

    fn plv(&self, i: usize) -> Result<usize> {
        self.check_pos(i)?;
        Ok((1..i).rev().find(|&j| self.a(j) > self.a(i)).unwrap_or(0))
    }

    fn nsv(&self, i: usize) -> Result<usize> {
        self.check_pos(i)?;
        let n = self.values.len();
        Ok((i + 1..=n).find(|&j| self.a(j) < self.a(i)).unwrap_or(n + 1))
    }

    fn nlv(&self, i: usize) -> Result<usize> {
        self.check_pos(i)?;
        let n = self.values.len();
        Ok((i + 1..=n).find(|&j| self.a(j) > self.a(i)).unwrap_or(n + 1))
    }
}

/// Every query over an array of length `n`: all positions, all ranges and
/// `q` in `1..=max_q` for the q-th variants.
pub fn all_queries(n: usize, max_q: usize) -> Vec<Query> {
    let mut qs = Vec::new();
    for i in 1..=n {
        qs.extend([Query::Psv(i), Query::Nsv(i), Query::Plv(i), Query::Nlv(i)]);
        for j in i..=n {
            qs.extend([Query::Rmin(i, j), Query::Rmax(i, j)]);
            for q in 1..=max_q {
                qs.extend([Query::RminQ(i, j, q), Query::RmaxQ(i, j, q)]);
            }
        }
    }
    qs
}

/// A query on which two implementations disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub query: Query,
    pub got: std::result::Result<usize, String>,
    pub expected: std::result::Result<usize, String>,
}

impl std::fmt::Display for Mismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: got {:?}, expected {:?}", self.query, self.got, self.expected)
    }
}

/// First query of `queries` where `got` and `expected` differ (errors are
/// compared by message).
pub fn first_mismatch<A, B, I>(got: &A, expected: &B, queries: I) -> Option<Mismatch>
where
    A: ArrayQueries + ?Sized,
    B: ArrayQueries + ?Sized,
    I: IntoIterator<Item = Query>,
{
    queries.into_iter().find_map(|q| {
        let g = got.answer(q).map_err(|e| e.to_string());
        let e = expected.answer(q).map_err(|e| e.to_string());
        (g != e).then_some(Mismatch { query: q, got: g, expected: e })
    })
}
