//! Lower-bound laboratory: Baxter permutations, the array class built from
//! them by copying values rightwards, and reconstruction of such an array
//! from range q-th minimum/maximum answers alone.

use std::cell::Cell;
use std::cmp::Ordering;
use std::collections::HashSet;

use crate::error::{invalid, Error, Result};
use crate::query::ArrayQueries;

/// Largest class size enumerated.
pub const MAX_CLASS_N: usize = 9;

/// True iff `perm` (a permutation of `1..=m`) avoids 2-41-3 and 3-14-2.
pub fn is_baxter(perm: &[usize]) -> Result<bool> {
    let m = perm.len();
    let mut seen = vec![false; m + 1];
    for &v in perm {
        if v == 0 || v > m || seen[v] {
            return invalid(format!("{perm:?} is not a permutation of 1..={m}"));
        }
        seen[v] = true;
    }
    for j in 0..m.saturating_sub(1) {
        let (hi, lo) = (perm[j], perm[j + 1]);
        for i in 0..j {
            for k in j + 2..m {
                let (a, c) = (perm[i], perm[k]);
                // 2-41-3 and 3-14-2
                if (lo < a && a < c && c < hi) || (hi < c && c < a && a < lo) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// All permutations of `1..=m` in lexicographic order.
fn permutations(m: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut cur: Option<Vec<usize>> = Some((1..=m).collect());
    std::iter::from_fn(move || {
        let out = cur.take()?;
        let mut p = out.clone();
        // next lexicographic permutation
        if let Some(i) = (0..p.len().saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) {
            let j = (i + 1..p.len()).rev().find(|&j| p[j] > p[i]).unwrap();
            p.swap(i, j);
            p[i + 1..].reverse();
            cur = Some(p);
        }
        Some(out)
    })
}

/// Every Baxter permutation of size `m`, by brute force.
pub fn baxter_permutations(m: usize) -> Vec<Vec<usize>> {
    permutations(m).filter(|p| is_baxter(p).unwrap()).collect()
}

pub fn baxter_count(m: usize) -> usize {
    permutations(m).filter(|p| is_baxter(p).unwrap()).count()
}

/// One member of the class: picked positions copy the value of the nearest
/// unpicked position to their left; unpicked positions carry `base`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnInstance {
    pub n: usize,
    /// picked positions, ascending, within `2..=n`
    pub picked: Vec<usize>,
    pub base: Vec<usize>,
    pub values: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct AnEnumeration {
    pub instances: Vec<AnInstance>,
    /// (picked set, permutation) pairs whose array was already produced
    pub collisions: usize,
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// `sum_k Baxter(n - k) * binom(n - 1, k)`.
pub fn class_size_formula(n: usize) -> usize {
    (0..n).map(|k| baxter_count(n - k) * binom(n - 1, k)).sum()
}

pub fn enumerate_an(n: usize) -> Result<AnEnumeration> {
    if !(2..=MAX_CLASS_N).contains(&n) {
        return invalid(format!("class size must be in 2..={MAX_CLASS_N}, got {n}"));
    }
    let baxter: Vec<Vec<Vec<usize>>> = (0..=n).map(baxter_permutations).collect();
    let mut seen = HashSet::new();
    let mut out = AnEnumeration { instances: Vec::new(), collisions: 0 };
    // bit t of the mask picks position t + 2
    for mask in 0u32..(1 << (n - 1)) {
        let picked: Vec<usize> = (0..n - 1).filter(|t| mask >> t & 1 == 1).map(|t| t + 2).collect();
        for base in &baxter[n - picked.len()] {
            let mut values = Vec::with_capacity(n);
            let mut next = base.iter();
            for p in 1..=n {
                if picked.binary_search(&p).is_ok() {
                    let last = *values.last().unwrap();
                    values.push(last);
                } else {
                    values.push(*next.next().unwrap() as i64);
                }
            }
            if seen.insert(values.clone()) {
                out.instances.push(AnInstance { n, picked: picked.clone(), base: base.clone(), values });
            } else {
                out.collisions += 1;
            }
        }
    }
    Ok(out)
}

/// Forwards queries and counts them; the wrapped array is never exposed.
pub struct CountingQueries<'a, Q: ArrayQueries + ?Sized> {
    inner: &'a Q,
    calls: Cell<usize>,
}

impl<'a, Q: ArrayQueries + ?Sized> CountingQueries<'a, Q> {
    pub fn new(inner: &'a Q) -> Self {
        CountingQueries { inner, calls: Cell::new(0) }
    }

    pub fn calls(&self) -> usize {
        self.calls.get()
    }

    fn tick<T>(&self, r: T) -> T {
        self.calls.set(self.calls.get() + 1);
        r
    }
}

impl<Q: ArrayQueries + ?Sized> ArrayQueries for CountingQueries<'_, Q> {
    fn len(&self) -> usize {
        self.inner.len()
    }
    fn rmin(&self, i: usize, j: usize) -> Result<usize> {
        self.tick(self.inner.rmin(i, j))
    }
    fn rmax(&self, i: usize, j: usize) -> Result<usize> {
        self.tick(self.inner.rmax(i, j))
    }
    fn rmin_q(&self, i: usize, j: usize, q: usize) -> Result<usize> {
        self.tick(self.inner.rmin_q(i, j, q))
    }
    fn rmax_q(&self, i: usize, j: usize, q: usize) -> Result<usize> {
        self.tick(self.inner.rmax_q(i, j, q))
    }
    fn psv(&self, i: usize) -> Result<usize> {
        self.tick(self.inner.psv(i))
    }
    fn plv(&self, i: usize) -> Result<usize> {
        self.tick(self.inner.plv(i))
    }
    fn nsv(&self, i: usize) -> Result<usize> {
        self.tick(self.inner.nsv(i))
    }
    fn nlv(&self, i: usize) -> Result<usize> {
        self.tick(self.inner.nlv(i))
    }
}

/// Positions attaining the extreme of `[a, b]`, via increasing q until the
/// answer repeats.
fn occurrences<Q: ArrayQueries + ?Sized>(qs: &Q, a: usize, b: usize, max: bool) -> Result<Vec<usize>> {
    let mut occ: Vec<usize> = Vec::new();
    for q in 1.. {
        let p = if max { qs.rmax_q(a, b, q)? } else { qs.rmin_q(a, b, q)? };
        if occ.last() == Some(&p) {
            break;
        }
        occ.push(p);
    }
    Ok(occ)
}

/// `A[a]` versus `A[b]` through `A[i]`, if the two known relations chain.
fn chain(ai: Ordering, ib: Ordering) -> Option<Ordering> {
    use Ordering::*;
    match (ai, ib) {
        (Equal, o) | (o, Equal) => Some(o),
        (Less, Less) => Some(Less),
        (Greater, Greater) => Some(Greater),
        _ => None,
    }
}

/// Recovers an array order-isomorphic to the hidden one (as a dense
/// ranking `1..=d`) from range q-th minimum/maximum answers.
///
/// Relations between `A[a]` and `A[b]` are settled by increasing `b - a`.
/// Arrays outside the class may be reported as unsupported.
pub fn reconstruct<Q: ArrayQueries + ?Sized>(qs: &Q) -> Result<Vec<usize>> {
    let n = qs.len();
    if n == 0 {
        return invalid("empty array");
    }
    // rel[a][b]: A[a] compared with A[b], 1-indexed
    let mut rel = vec![vec![Ordering::Equal; n + 1]; n + 1];
    let unsupported = |a: usize, b: usize| {
        Err(Error::UnsupportedInstance(format!("cannot compare positions {a} and {b}")))
    };
    for len in 1..n {
        for a in 1..=n - len {
            let b = a + len;
            let o = if len == 1 {
                match (qs.rmin_q(a, b, 1)?, qs.rmin_q(a, b, 2)?) {
                    (p, _) if p == b => Ordering::Greater,
                    (_, p) if p == b => Ordering::Equal,
                    _ => Ordering::Less,
                }
            } else {
                let mins = occurrences(qs, a, b, false)?;
                let maxs = occurrences(qs, a, b, true)?;
                let has = |v: &[usize], p: usize| v.contains(&p);
                if has(&mins, a) || has(&maxs, a) || has(&mins, b) || has(&maxs, b) {
                    let (ea, eb) = (has(&mins, a), has(&mins, b));
                    let (xa, xb) = (has(&maxs, a), has(&maxs, b));
                    if (ea && eb) || (xa && xb) {
                        Ordering::Equal
                    } else if ea || xb {
                        Ordering::Less
                    } else {
                        Ordering::Greater
                    }
                } else {
                    let x = *mins.last().unwrap();
                    let y = *maxs.last().unwrap();
                    let (lo, hi) = (x.min(y), x.max(y));
                    match (lo..=hi).find_map(|i| chain(rel[a][i], rel[i][b])) {
                        Some(o) => o,
                        None if x < y => Ordering::Less,
                        None if y < x => Ordering::Greater,
                        None => return unsupported(a, b),
                    }
                }
            };
            rel[a][b] = o;
            rel[b][a] = o.reverse();
        }
    }
    let mut order: Vec<usize> = (1..=n).collect();
    order.sort_by(|&a, &b| rel[a][b]);
    let mut rank = vec![0usize; n + 1];
    let mut d = 0;
    for (k, &p) in order.iter().enumerate() {
        if k == 0 || rel[order[k - 1]][p] != Ordering::Equal {
            d += 1;
        }
        rank[p] = d;
    }
    for a in 1..=n {
        for b in a + 1..=n {
            if rank[a].cmp(&rank[b]) != rel[a][b] {
                return unsupported(a, b);
            }
        }
    }
    Ok(rank[1..].to_vec())
}

/// Dense ranking `1..=d` of `values`, ties preserved.
pub fn dense_ranking(values: &[i64]) -> Vec<usize> {
    let mut sorted: Vec<i64> = values.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    values.iter().map(|v| sorted.binary_search(v).unwrap() + 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::NaiveOracle;

    #[test]
    fn baxter_witnesses() {
        assert!(is_baxter(&[1, 2, 3, 4]).unwrap());
        assert!(!is_baxter(&[2, 4, 1, 3]).unwrap());
        assert!(!is_baxter(&[3, 1, 4, 2]).unwrap());
        assert!(is_baxter(&[1, 1]).is_err());
        assert!(is_baxter(&[0, 1]).is_err());
    }

    #[test]
    fn class_of_two() {
        let e = enumerate_an(2).unwrap();
        let arrays: Vec<Vec<i64>> = e.instances.iter().map(|i| i.values.clone()).collect();
        assert_eq!(arrays, vec![vec![1, 2], vec![2, 1], vec![1, 1]]);
        assert!(enumerate_an(1).is_err());
        assert!(enumerate_an(10).is_err());
    }

    #[test]
    fn picked_copy_left() {
        let e = enumerate_an(3).unwrap();
        let all_picked: Vec<_> = e.instances.iter().filter(|i| i.picked.len() == 2).collect();
        assert_eq!(all_picked.len(), 1);
        assert_eq!(all_picked[0].values, vec![1, 1, 1]);
    }

    #[test]
    fn reconstructs_small_classes() {
        for n in 2..=5 {
            for inst in enumerate_an(n).unwrap().instances {
                let o = NaiveOracle::new(inst.values.clone());
                assert_eq!(reconstruct(&o).unwrap(), dense_ranking(&inst.values), "{:?}", inst.values);
            }
        }
    }

    #[test]
    fn non_adjacent_ties_may_be_unsupported() {
        let o = NaiveOracle::new(vec![2, 1, 3, 2]);
        match reconstruct(&o) {
            Ok(r) => assert_ne!(r, dense_ranking(o.values())),
            Err(e) => assert!(matches!(e, Error::UnsupportedInstance(_))),
        }
    }
}
