//! The block-decoding functions `g` (joint U/D/E stream to one tree's
//! parentheses) and `h` (reinsertion of repeated elements), each as a
//! literal reference implementation plus a precomputed chunk table.

use std::sync::OnceLock;

use crate::bitvec::TritArray;

/// Reference evaluation of `g(u, d, e, b)`.
///
/// `b` is the value of `u[k]` for which the tree being decoded is *not*
/// node `k`'s relevant tree. When `e` runs out in the middle of a run of
/// ones the ones are emitted and decoding stops, which is how a chunk
/// boundary inside `E` behaves.
pub fn g(u: &[bool], d: &[u8], e: &[bool], b: bool) -> Vec<bool> {
    let mut out = Vec::new();
    let (mut ui, mut ei) = (0usize, 0usize);
    while ui < u.len() && ui < d.len() {
        let (uk, dk) = (u[ui], d[ui]);
        if uk != b {
            out.push(false);
            if dk == 2 {
                // skip 1^t 0 in e
                match e[ei..].iter().position(|&x| !x) {
                    Some(z) => ei += z + 1,
                    None => return out,
                }
            }
            ui += 1;
            continue;
        }
        match dk {
            0 => out.extend([true, false]),
            1 => out.extend([true, true, false]),
            _ => match e[ei..].iter().position(|&x| !x) {
                Some(t) => {
                    out.extend(std::iter::repeat_n(true, t + 3));
                    out.push(false);
                    ei += t + 1;
                }
                None => {
                    out.extend(std::iter::repeat_n(true, e.len() - ei));
                    return out;
                }
            },
        }
        ui += 1;
    }
    out
}

/// Reference evaluation of `h(b, c)`: a `1` in `c` inserts `10`; a `0`
/// copies `b` through its next `0` (or the remaining ones if none).
pub fn h(b: &[bool], c: &[bool]) -> Vec<bool> {
    let mut out = Vec::new();
    let mut bi = 0usize;
    for &ck in c {
        if ck {
            out.extend([true, false]);
            continue;
        }
        match b[bi..].iter().position(|&x| !x) {
            Some(t) => {
                out.extend(std::iter::repeat_n(true, t));
                out.push(false);
                bi += t + 1;
            }
            None => {
                out.extend(std::iter::repeat_n(true, b.len() - bi));
                return out;
            }
        }
    }
    out
}

/// One `g` table entry for five nodes sharing a packed `D` byte.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct GEntry {
    pub bits: u16,
    pub len: u8,
    /// nodes fully processed from the starting offset
    pub consumed: u8,
    /// processing stopped at a node that copies a run from `E`
    pub stop: bool,
    /// nodes of the other tree with `D = 2` among the consumed ones; each
    /// owns one run of `E` that must be skipped
    pub skip_runs: u8,
}

pub(crate) const G_CHUNK: usize = 5;

fn g_table() -> &'static [GEntry] {
    static TABLE: OnceLock<Vec<GEntry>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = vec![GEntry::default(); 2 * G_CHUNK * 32 * 243];
        for b in 0..2 {
            for start in 0..G_CHUNK {
                for u in 0..32usize {
                    for dbyte in 0..243usize {
                        let trits = TritArray::unpack(dbyte as u8);
                        let mut en = GEntry::default();
                        for (k, &dk) in trits.iter().enumerate().skip(start) {
                            let non_relevant = ((u >> k) & 1) == b;
                            let (piece, plen): (u16, u8) = match (non_relevant, dk) {
                                (false, dk) => {
                                    if dk == 2 {
                                        en.skip_runs += 1;
                                    }
                                    (0b0, 1)
                                }
                                (true, 0) => (0b01, 2),
                                (true, 1) => (0b011, 3),
                                (true, _) => {
                                    en.stop = true;
                                    break;
                                }
                            };
                            en.bits |= piece << en.len;
                            en.len += plen;
                            en.consumed += 1;
                        }
                        t[g_index(b == 1, start, u as u8, dbyte as u8)] = en;
                    }
                }
            }
        }
        t
    })
}

#[inline]
fn g_index(b: bool, start: usize, u5: u8, dbyte: u8) -> usize {
    (((b as usize * G_CHUNK + start) * 32) + u5 as usize) * 243 + dbyte as usize
}

#[inline]
pub(crate) fn g_lookup(b: bool, start: usize, u5: u8, dbyte: u8) -> GEntry {
    g_table()[g_index(b, start, u5, dbyte)]
}

/// One `h` table entry for a byte of `B'` and four bits of `C`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct HEntry {
    pub bits: u16,
    pub len: u8,
    pub b_used: u8,
    pub c_used: u8,
}

fn h_table() -> &'static [HEntry] {
    static TABLE: OnceLock<Vec<HEntry>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = vec![HEntry::default(); 256 * 16];
        for bbyte in 0..256usize {
            for c in 0..16usize {
                let mut en = HEntry::default();
                for k in 0..4 {
                    if (c >> k) & 1 == 1 {
                        en.bits |= 0b01 << en.len;
                        en.len += 2;
                        en.c_used += 1;
                        continue;
                    }
                    let rest = bbyte >> en.b_used;
                    let avail = 8 - en.b_used as usize;
                    let t_ones = (!rest).trailing_zeros() as usize;
                    if t_ones >= avail {
                        // the run continues past this byte
                        en.bits |= (((1u32 << avail) - 1) as u16) << en.len;
                        en.len += avail as u8;
                        en.b_used = 8;
                        break;
                    }
                    en.bits |= (((1u32 << t_ones) - 1) as u16) << en.len;
                    en.len += t_ones as u8 + 1;
                    en.b_used += t_ones as u8 + 1;
                    en.c_used += 1;
                }
                t[bbyte * 16 + c] = en;
            }
        }
        t
    })
}

#[inline]
pub(crate) fn h_lookup(bbyte: u8, c4: u8) -> HEntry {
    h_table()[bbyte as usize * 16 + c4 as usize]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    fn show(v: &[bool]) -> String {
        v.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    #[test]
    fn g_cases() {
        assert_eq!(show(&g(&[], &[0], &[], true)), "");
        assert_eq!(show(&g(&bits("1"), &[0], &[], true)), "10");
        assert_eq!(show(&g(&bits("0"), &[1], &[], true)), "0");
        assert_eq!(show(&g(&bits("1"), &[1], &[], true)), "110");
        assert_eq!(show(&g(&bits("1"), &[2], &bits("110"), true)), "111110");
        // the other tree's run is skipped
        assert_eq!(show(&g(&bits("01"), &[2, 2], &bits("100"), true)), "01110");
        // e exhausted inside a run
        assert_eq!(show(&g(&bits("1"), &[2], &bits("11"), true)), "11");
    }

    #[test]
    fn h_cases() {
        assert_eq!(show(&h(&bits("0110"), &bits("00"))), "0110");
        assert_eq!(show(&h(&bits("0"), &bits("10"))), "100");
        assert_eq!(show(&h(&bits("11"), &bits("0"))), "11");
        assert_eq!(show(&h(&bits("0"), &[])), "");
    }

    #[test]
    fn h_table_matches_reference() {
        for bbyte in 0..256usize {
            let b: Vec<bool> = (0..8).map(|k| (bbyte >> k) & 1 == 1).collect();
            for c in 0..16usize {
                let cv: Vec<bool> = (0..4).map(|k| (c >> k) & 1 == 1).collect();
                let en = h_lookup(bbyte as u8, c as u8);
                let got: Vec<bool> = (0..en.len).map(|k| (en.bits >> k) & 1 == 1).collect();
                // the reference stops emitting when b runs out mid-run
                assert_eq!(got, h(&b, &cv), "b={bbyte:08b} c={c:04b}");
            }
        }
    }

    #[test]
    fn g_table_matches_reference_without_e_runs() {
        for b in [false, true] {
            for u in 0..32usize {
                for dbyte in 0..243u8 {
                    let trits = TritArray::unpack(dbyte);
                    let uv: Vec<bool> = (0..5).map(|k| (u >> k) & 1 == 1).collect();
                    let en = g_lookup(b, 0, u as u8, dbyte);
                    let n = en.consumed as usize;
                    // give every skipped run a single zero in e
                    let e = vec![false; en.skip_runs as usize];
                    let want = g(&uv[..n], &trits[..n], &e, b);
                    let got: Vec<bool> = (0..en.len).map(|k| (en.bits >> k) & 1 == 1).collect();
                    assert_eq!(got, want);
                    if n < 5 {
                        assert!(en.stop);
                        assert_eq!(uv[n], b);
                        assert_eq!(trits[n], 2);
                    }
                }
            }
        }
    }
}
