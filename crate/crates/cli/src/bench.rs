//! Construction and query timing on generated arrays.

use std::collections::BTreeMap;
use std::time::Instant;

use anyhow::{bail, Result};
use clap::{Args, ValueEnum};
use minmax_encoding::codec::Encoding;
use minmax_encoding::query::{ArrayQueries, Query};
use minmax_encoding::Side;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::output::Printer;
use crate::{Failure, Global};

/// Peak construction working set per element: the input, both explicit
/// heaps with their per-node arrays, and the encoding being assembled.
const BYTES_PER_ELEMENT: u64 = 96;

pub fn check_cap(n: usize, cap_bytes: u64) -> Result<()> {
    let need = n as u64 * BYTES_PER_ELEMENT;
    if need > cap_bytes {
        bail!("n = {n} needs about {need} bytes, over the cap of {cap_bytes} (raise --cap-bytes)");
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Dist {
    Distinct,
    Repeats,
}

#[derive(Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 1_000_000)]
    n: usize,
    #[arg(long, value_enum, default_value_t = Dist::Distinct)]
    dist: Dist,
    /// repeat probability for `--dist repeats`
    #[arg(long, default_value_t = 0.3)]
    p: f64,
    /// queries timed per kind
    #[arg(long, default_value_t = 10_000)]
    queries: usize,
}

fn generate(rng: &mut ChaCha8Rng, n: usize, dist: Dist, p: f64) -> Vec<i64> {
    let mut v: Vec<i64> = Vec::with_capacity(n);
    while v.len() < n {
        let x = match (dist, v.last()) {
            (Dist::Repeats, Some(&l)) if rng.gen_bool(p) => l,
            _ => rng.gen_range(0..1_000_000_000i64),
        };
        if dist == Dist::Repeats || v.last() != Some(&x) {
            v.push(x);
        }
    }
    v
}

fn percentile(sorted: &[u64], pct: usize) -> u64 {
    sorted[((sorted.len() - 1) * pct) / 100]
}

pub fn run(g: &Global, a: &BenchArgs) -> Result<(), Failure> {
    g.config().validate()?;
    if a.n == 0 || a.queries == 0 || !(0.0..1.0).contains(&a.p) {
        return Err(Failure::Usage(anyhow::anyhow!("need n >= 1, queries >= 1 and 0 <= p < 1")));
    }
    check_cap(a.n, g.cap_bytes).map_err(Failure::Data)?;
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let values = generate(&mut rng, a.n, a.dist, a.p);
    let p = Printer::new(g.format, "bench");
    let n = a.n;

    let t = Instant::now();
    let enc = Encoding::from_array(&values, g.config())?;
    let idx = enc.query_index()?;
    p.emit(n, "build_ms", t.elapsed().as_secs_f64() * 1e3);
    drop(values);

    let r = enc.space();
    p.emit(n, "core_bits_per_element", r.core_per_element());
    let nav = idx.directory_bits() as f64 / n as f64;
    p.emit(n, "encoding_aux_bits_per_element", r.aux_per_element());
    p.emit(n, "navigation_bits_per_element", nav);
    p.emit(n, "aux_bits_per_element", r.aux_per_element() + nav);

    for kind in Query::KINDS {
        let mut ns = Vec::with_capacity(a.queries);
        for _ in 0..a.queries {
            let i = rng.gen_range(1..=n);
            let j = rng.gen_range(i..=n);
            let q = rng.gen_range(1..=8);
            let args: &[usize] = match kind {
                "rmin" | "rmax" => &[i, j],
                "rminq" | "rmaxq" => &[i, j, q],
                _ => &[i],
            };
            let query = Query::from_parts(kind, args)?;
            let t = Instant::now();
            std::hint::black_box(idx.answer(query)?);
            ns.push(t.elapsed().as_nanos() as u64);
        }
        ns.sort_unstable();
        p.emit(n, format!("latency_ns.{kind}.p50"), percentile(&ns, 50));
        p.emit(n, format!("latency_ns.{kind}.p99"), percentile(&ns, 99));
    }

    // sibling-scan length histogram (power-of-two buckets) and jump counts
    for side in Side::BOTH {
        let s = idx.side(side);
        let mut hist: BTreeMap<usize, usize> = BTreeMap::new();
        let mut max_jumps = 0;
        for _ in 0..a.queries {
            let i = rng.gen_range(1..=n);
            for (_, st) in [s.prs_traced(i), s.nrs_traced(i)] {
                let bucket = st.sibling_steps.checked_next_power_of_two().unwrap_or(0);
                *hist.entry(bucket).or_default() += 1;
                max_jumps = max_jumps.max(st.jumps);
            }
        }
        for (bucket, count) in hist {
            p.emit(n, format!("scan.{}.steps_le_{bucket}", side.name()), count);
        }
        p.emit(n, format!("scan.{}.max_jumps", side.name()), max_jumps);
    }
    Ok(())
}
