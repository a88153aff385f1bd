//! The self-test suites: oracle equivalence, block-decode equivalence,
//! Baxter counts and reconstruction from queries.

use std::sync::Arc;

use clap::{Args, ValueEnum};
use minmax_encoding::bitvec::BitVector;
use minmax_encoding::codec::{CombinedEncoding, Config, Encoding};
use minmax_encoding::heap::ColoredHeap;
use minmax_encoding::lab;
use minmax_encoding::oracle::{all_queries, first_mismatch, NaiveOracle};
use minmax_encoding::query::Query;
use minmax_encoding::Side;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::output::Printer;
use crate::{Failure, Global};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Scope {
    Exhaustive,
    Random,
}

#[derive(Args)]
pub struct SelftestArgs {
    #[arg(long, value_enum, default_value_t = Scope::Random)]
    scope: Scope,
    /// longest array of the exhaustive scope
    #[arg(long = "max-len", default_value_t = 9)]
    max_len: usize,
    /// test hook: flip the first E bit of every encoding before checking
    #[arg(long = "mutate-e")]
    mutate_e: bool,
}

const BAXTER: [usize; 7] = [1, 2, 6, 22, 92, 422, 2074];

/// Short arrays in full; long ones by length and head, since the random
/// scope is reproducible from the seed anyway.
fn show(values: &[i64]) -> String {
    if values.len() <= 24 {
        format!("{values:?}")
    } else {
        format!("(n = {}) {:?} ...", values.len(), &values[..8])
    }
}

/// Failure witness: the smallest array (and query) that broke a suite.
type Witness = String;

fn flip_first_e_bit(enc: Encoding) -> Result<Encoding, Witness> {
    let core = enc.core();
    let e = core.e();
    if e.is_empty() {
        return Ok(enc);
    }
    let e = BitVector::from_bits(e.iter().enumerate().map(|(t, b)| if t == 0 { !b } else { b }));
    let cfg = enc.config();
    let mutated = CombinedEncoding::from_parts(
        core.n(),
        core.u().clone(),
        core.d().clone(),
        e,
        core.colors().clone(),
        core.split(),
        core.f_n(),
        cfg.block_bits,
        cfg.bad_factor,
    )
    .map_err(|err| format!("mutated encoding rejected: {err}"))?;
    let c = enc.repeats().map(|r| (**r.c()).clone());
    Encoding::from_core(Arc::new(mutated), c, cfg).map_err(|err| format!("mutated encoding rejected: {err}"))
}

fn encode(values: &[i64], cfg: Config, mutate: bool) -> Result<Encoding, Witness> {
    let enc = Encoding::from_array(values, cfg).map_err(|e| format!("{}: build failed: {e}", show(values)))?;
    if mutate {
        flip_first_e_bit(enc).map_err(|e| format!("{}: {e}", show(values)))
    } else {
        Ok(enc)
    }
}

fn check_queries(values: &[i64], enc: &Encoding, queries: Vec<Query>) -> Result<(), Witness> {
    let idx = enc.query_index().map_err(|e| format!("{}: index failed: {e}", show(values)))?;
    let oracle = NaiveOracle::new(values.to_vec());
    match first_mismatch(&idx, &oracle, queries) {
        Some(m) => Err(format!("array {}, query {m}", show(values))),
        None => Ok(()),
    }
}

fn check_blocks(values: &[i64], enc: &Encoding) -> Result<(), Witness> {
    let w = enc.config().block_bits;
    for side in Side::BOTH {
        let want = ColoredHeap::build(values, side).map_err(|e| e.to_string())?.bp;
        for b in 0..enc.block_count() {
            let got = enc.decode_block(side, b).map_err(|e| format!("{}: {e}", show(values)))?;
            let start = b * w;
            let same = got.len() == w.min(want.len() - start) && (1..=got.len()).all(|t| got.get(t) == want.get(start + t));
            if !same {
                return Err(format!("array {}, {} heap block {b}: got {got}", show(values), side.name()));
            }
        }
    }
    Ok(())
}

/// Arrays over {1,2,3} in order of length, then lexicographically.
fn small_arrays(max_len: usize) -> impl Iterator<Item = Vec<i64>> {
    (1..=max_len).flat_map(|n| {
        (0..3usize.pow(n as u32)).map(move |mut code| {
            (0..n)
                .map(|_| {
                    let d = code % 3;
                    code /= 3;
                    d as i64 + 1
                })
                .collect()
        })
    })
}

fn random_array(rng: &mut ChaCha8Rng, n: usize, repeat_p: f64) -> Vec<i64> {
    let mut v: Vec<i64> = Vec::with_capacity(n);
    while v.len() < n {
        let x = match v.last() {
            Some(&l) if rng.gen_bool(repeat_p) => l,
            _ => rng.gen_range(0..1_000_000i64),
        };
        if repeat_p > 0.0 || v.last() != Some(&x) {
            v.push(x);
        }
    }
    v
}

fn random_queries(rng: &mut ChaCha8Rng, n: usize, count: usize) -> Vec<Query> {
    (0..count)
        .map(|_| {
            let i = rng.gen_range(1..=n);
            let j = rng.gen_range(i..=n);
            let q = rng.gen_range(1..=4);
            let kind = Query::KINDS[rng.gen_range(0..Query::KINDS.len())];
            let args: &[usize] = match kind {
                "rmin" | "rmax" => &[i, j],
                "rminq" | "rmaxq" => &[i, j, q],
                _ => &[i],
            };
            Query::from_parts(kind, args).expect("well-formed query")
        })
        .collect()
}

fn equivalence(g: &Global, a: &SelftestArgs) -> Result<(usize, usize), Witness> {
    let cfg = g.config();
    let mut arrays = 0;
    let mut blocks = 0;
    match a.scope {
        Scope::Exhaustive => {
            for values in small_arrays(a.max_len) {
                let enc = encode(&values, cfg, a.mutate_e)?;
                check_blocks(&values, &enc)?;
                check_queries(&values, &enc, all_queries(values.len(), values.len()))?;
                arrays += 1;
                blocks += 2 * enc.block_count();
            }
        }
        Scope::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
            for k in 0..40 {
                let n = if k % 2 == 0 { 1_000 } else { 3_000 };
                let p = if k % 4 < 2 { 0.0 } else { 0.3 };
                let values = random_array(&mut rng, n, p);
                let enc = encode(&values, cfg, a.mutate_e)?;
                check_blocks(&values, &enc)?;
                check_queries(&values, &enc, random_queries(&mut rng, n, 2_000))?;
                arrays += 1;
                blocks += 2 * enc.block_count();
            }
        }
    }
    Ok((arrays, blocks))
}

fn baxter_counts(max_m: usize) -> Result<(), Witness> {
    for m in 1..=max_m {
        let got = lab::baxter_count(m);
        if got != BAXTER[m - 1] {
            return Err(format!("Baxter count for m = {m}: {got}, expected {}", BAXTER[m - 1]));
        }
    }
    Ok(())
}

fn reconstruction(g: &Global, scope: Scope) -> Result<usize, Witness> {
    let (exact_up_to, sampled, sample) = match scope {
        Scope::Exhaustive => (7, 8, 300),
        Scope::Random => (5, 7, 200),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let mut done = 0;
    for n in 2..=sampled {
        let all = lab::enumerate_an(n).map_err(|e| e.to_string())?.instances;
        let chosen: Vec<_> =
            if n <= exact_up_to { all } else { all.choose_multiple(&mut rng, sample).cloned().collect() };
        for inst in &chosen {
            let enc = encode(&inst.values, g.config(), false)?;
            let idx = enc.query_index().map_err(|e| e.to_string())?;
            let counted = lab::CountingQueries::new(&idx);
            match lab::reconstruct(&counted) {
                Ok(r) if r == lab::dense_ranking(&inst.values) => done += 1,
                Ok(r) => return Err(format!("array {:?} reconstructed as {r:?}", inst.values)),
                Err(e) => return Err(format!("array {:?}: {e}", inst.values)),
            }
        }
    }
    Ok(done)
}

pub fn run(g: &Global, a: &SelftestArgs) -> Result<(), Failure> {
    g.config().validate()?;
    if a.max_len == 0 || a.max_len > 12 {
        return Err(Failure::Usage(anyhow::anyhow!("max-len must be in 1..=12")));
    }
    let p = Printer::new(g.format, "selftest");
    let scope = match a.scope {
        Scope::Exhaustive => "exhaustive",
        Scope::Random => "random",
    };
    let (arrays, blocks) = equivalence(g, a).map_err(Failure::Selftest)?;
    p.emit(arrays, format!("{scope}.oracle_equivalence"), "pass");
    p.emit(arrays, format!("{scope}.decode_equivalence_blocks"), blocks);
    baxter_counts(7).map_err(Failure::Selftest)?;
    p.emit(7, "baxter_counts", "pass");
    let done = reconstruction(g, a.scope).map_err(Failure::Selftest)?;
    p.emit(done, format!("{scope}.reconstruction"), "pass");
    Ok(())
}
