//! `mmenc`: build compressed min/max query indexes from array files, query
//! them, and run the self-test, benchmark and lower-bound lab suites.

mod bench;
mod input;
mod output;
mod selftest;

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use minmax_encoding::codec::{Config, Encoding, BAD_BLOCK_FACTOR, DEFAULT_BLOCK_BITS, DEFAULT_LEVELS};
use minmax_encoding::format::{read_index, write_index};
use minmax_encoding::lab;
use minmax_encoding::query::{ArrayQueries, Query};
use minmax_encoding::{Error, Side};

use output::{Format, Printer};

#[derive(Parser)]
#[command(name = "mmenc", version, about = "Compressed range min/max and nearest smaller/larger value index")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Clone)]
struct Global {
    /// PRS/NRS mark levels (1..=4)
    #[arg(long, global = true, default_value_t = DEFAULT_LEVELS)]
    levels: usize,
    /// decoding block width in bits (power of two, >= 64)
    #[arg(long = "block-size", global = true, default_value_t = DEFAULT_BLOCK_BITS)]
    block_size: usize,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// refuse inputs whose working set would exceed this many bytes
    #[arg(long = "cap-bytes", global = true, default_value_t = 4 << 30)]
    cap_bytes: u64,
}

impl Global {
    fn config(&self) -> Config {
        Config { levels: self.levels, block_bits: self.block_size, bad_factor: BAD_BLOCK_FACTOR }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Encode an array file and write the index
    Build { input: PathBuf, output: PathBuf },
    /// Answer one query: rmin|rmax I J, rminq|rmaxq I J Q, psv|nsv|plv|nlv I
    Query {
        index: PathBuf,
        kind: String,
        #[arg(num_args = 1..=3)]
        args: Vec<usize>,
    },
    /// Print one decoded block of a heap's parentheses
    DecodeBlock {
        index: PathBuf,
        #[arg(value_parser = ["min", "max"])]
        side: String,
        block: usize,
    },
    /// Run the equivalence, decoding, Baxter and reconstruction suites
    Selftest(selftest::SelftestArgs),
    /// Time construction and queries on a generated array
    Bench(bench::BenchArgs),
    /// Count Baxter permutations of sizes 1..=M by brute force
    Baxter {
        #[arg(long = "max-m", default_value_t = 7)]
        max_m: usize,
    },
    /// Enumerate the lower-bound array class of size N
    Class { n: usize },
    /// Reconstruct every (or a sample of) class-N array from queries
    Reconstruct {
        n: usize,
        /// reconstruct a seeded sample of this many instances
        #[arg(long)]
        sample: Option<usize>,
    },
}

/// Failure classes mapped to exit codes.
enum Failure {
    Usage(anyhow::Error),
    Data(anyhow::Error),
    Selftest(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<Error>() {
            Some(Error::InvalidArgument(_)) => Failure::Usage(e),
            _ => Failure::Data(e),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::from(anyhow::Error::new(e))
    }
}

fn load(path: &Path, g: &Global) -> Result<Encoding, Failure> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display())).map_err(Failure::Data)?;
    g.config().validate()?;
    read_index(&mut BufReader::new(f), g.config())
        .with_context(|| format!("loading {}", path.display()))
        .map_err(Failure::Data)
}

fn build(g: &Global, input: &Path, output: &Path) -> Result<(), Failure> {
    g.config().validate()?;
    let values = input::read_array(input).map_err(Failure::Data)?;
    bench::check_cap(values.len(), g.cap_bytes).map_err(Failure::Data)?;
    let enc = Encoding::from_array(&values, g.config())?;
    let mut out = BufWriter::new(
        File::create(output).with_context(|| format!("creating {}", output.display())).map_err(Failure::Data)?,
    );
    write_index(&enc, &mut out)?;
    out.flush().context("writing index").map_err(Failure::Data)?;
    let p = Printer::new(g.format, "build");
    let n = enc.n();
    p.emit(n, "flag", if enc.is_general() { "general" } else { "distinct" });
    p.emit(n, "reduced_n", enc.core().n());
    let r = enc.space();
    for (name, bits) in &r.components {
        p.emit(n, format!("bits.{name}"), *bits);
    }
    let nav = enc.query_index()?.directory_bits();
    p.emit(n, "core_bits", r.core_bits);
    p.emit(n, "aux_bits", r.aux_bits);
    p.emit(n, "navigation_bits", nav);
    p.emit(n, "core_bits_per_element", r.core_per_element());
    p.emit(n, "aux_bits_per_element", (r.aux_bits + nav) as f64 / n as f64);
    if enc.is_general() {
        p.emit(n, "c_entropy_bits", r.c_entropy_bits);
    }
    Ok(())
}

fn query(g: &Global, index: &Path, kind: &str, args: &[usize]) -> Result<(), Failure> {
    let q = Query::from_parts(kind, args)?;
    let enc = load(index, g)?;
    let idx = enc.query_index()?;
    let ans = idx.answer(q)?;
    Printer::new(g.format, "query").answer(idx.len(), q.kind(), ans);
    Ok(())
}

fn decode_block(g: &Global, index: &Path, side: &str, block: usize) -> Result<(), Failure> {
    let enc = load(index, g)?;
    let side = if side == "min" { Side::Min } else { Side::Max };
    let bits = enc.decode_block(side, block)?;
    Printer::new(g.format, "decode-block").emit(enc.n(), format!("block.{}.{block}", side.name()), bits.to_string());
    Ok(())
}

fn baxter(g: &Global, max_m: usize) -> Result<(), Failure> {
    if !(1..=lab::MAX_CLASS_N).contains(&max_m) {
        return Err(Error::InvalidArgument(format!("max-m must be in 1..={}", lab::MAX_CLASS_N)).into());
    }
    let p = Printer::new(g.format, "baxter");
    for m in 1..=max_m {
        p.emit(m, "baxter_count", lab::baxter_count(m));
    }
    Ok(())
}

fn class(g: &Global, n: usize) -> Result<(), Failure> {
    let e = lab::enumerate_an(n)?;
    let p = Printer::new(g.format, "class");
    p.emit(n, "instances", e.instances.len());
    p.emit(n, "formula", lab::class_size_formula(n));
    p.emit(n, "collisions", e.collisions);
    p.emit(n, "log2_size", (e.instances.len() as f64).log2());
    Ok(())
}

fn reconstruct(g: &Global, n: usize, sample: Option<usize>) -> Result<(), Failure> {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let all = lab::enumerate_an(n)?.instances;
    let chosen: Vec<_> = match sample {
        Some(k) => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(g.seed);
            all.choose_multiple(&mut rng, k).cloned().collect()
        }
        None => all,
    };
    let (mut ok, mut calls) = (0usize, 0usize);
    for inst in &chosen {
        let enc = Encoding::from_array(&inst.values, g.config())?;
        let idx = enc.query_index()?;
        let counted = lab::CountingQueries::new(&idx);
        match lab::reconstruct(&counted) {
            Ok(r) if r == lab::dense_ranking(&inst.values) => ok += 1,
            Ok(r) => eprintln!("mismatch: {:?} reconstructed as {r:?}", inst.values),
            Err(e) => eprintln!("failed: {:?}: {e}", inst.values),
        }
        calls += counted.calls();
    }
    let p = Printer::new(g.format, "reconstruct");
    p.emit(n, "instances", chosen.len());
    p.emit(n, "reconstructed", ok);
    p.emit(n, "queries", calls);
    if ok != chosen.len() {
        return Err(Failure::Selftest(format!("{} of {} instances failed", chosen.len() - ok, chosen.len())));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let g = &cli.global;
    match &cli.cmd {
        Command::Build { input, output } => build(g, input, output),
        Command::Query { index, kind, args } => query(g, index, kind, args),
        Command::DecodeBlock { index, side, block } => decode_block(g, index, side, *block),
        Command::Selftest(a) => selftest::run(g, a),
        Command::Bench(a) => bench::run(g, a),
        Command::Baxter { max_m } => baxter(g, *max_m),
        Command::Class { n } => class(g, *n),
        Command::Reconstruct { n, sample } => reconstruct(g, *n, *sample),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Selftest(w)) => {
            eprintln!("selftest failed: {w}");
            ExitCode::from(3)
        }
    }
}
