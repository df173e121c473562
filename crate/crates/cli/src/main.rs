//! `kpath`: decide and construct simple paths on k vertices.
//!
//! Exit status: 0 yes / path found, 1 no / none, 2 usage or input error,
//! 3 extraction gave up.

mod bench;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use kpath_core::graph::verify_path;
use kpath_core::oracle::brute_force_kpath;
use kpath_core::{generate, kpath, Error, Graph, RngStream};

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 0x2008_0617;

const EXIT_YES: u8 = 0;
const EXIT_NO: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_EXTRACTION: u8 = 3;

#[derive(Parser)]
#[command(name = "kpath", version, about = "Randomized detection of simple k-vertex paths")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the graph has a simple path on k vertices.
    Detect(RunArgs),
    /// Print a simple path on k vertices (1-based ids), or "none".
    Find(RunArgs),
    /// Time detection over a range of k on generated instances.
    Bench(bench::BenchArgs),
    /// Run built-in consistency checks against brute-force oracles.
    Selftest(selftest::SelftestArgs),
    /// Write a generated graph in the input file format.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Graph file (see README for the format); `-` reads stdin.
    graph: PathBuf,
    #[command(flatten)]
    size: PathSize,
    /// Detection trials; a no is wrong with probability at most 0.8^trials.
    #[arg(long, default_value_t = kpath::DEFAULT_TRIALS, value_parser = positive)]
    trials: usize,
    /// Integer seed, or `random` for a fresh one (reported in the output).
    #[arg(long, default_value_t = Seed::Fixed(DEFAULT_SEED))]
    seed: Seed,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Check the answer against an exact search (exponential in n).
    #[arg(long)]
    verify: bool,
}

/// Path length, as vertices (`-k`) or edges (`--edges`, k = edges + 1).
#[derive(Args)]
#[group(required = true, multiple = false)]
struct PathSize {
    /// Number of vertices on the path.
    #[arg(short = 'k', value_parser = clap::value_parser!(u32).range(1..))]
    k: Option<u32>,
    /// Number of edges on the path.
    #[arg(long)]
    edges: Option<u32>,
}

impl PathSize {
    fn vertices(&self) -> usize {
        match (self.k, self.edges) {
            (Some(k), _) => k as usize,
            (None, Some(l)) => l as usize + 1,
            (None, None) => unreachable!("clap requires one of -k and --edges"),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub enum Seed {
    Fixed(u64),
    Random,
}

impl Seed {
    pub fn resolve(self) -> u64 {
        match self {
            Seed::Fixed(s) => s,
            Seed::Random => rand::random(),
        }
    }
}

impl FromStr for Seed {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "random" {
            return Ok(Seed::Random);
        }
        let parsed = match s.strip_prefix("0x") {
            Some(hex) => u64::from_str_radix(hex, 16),
            None => s.parse(),
        };
        parsed.map(Seed::Fixed).map_err(|e| format!("expected an integer or `random`: {e}"))
    }
}

impl std::fmt::Display for Seed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Seed::Fixed(s) => write!(f, "{s}"),
            Seed::Random => f.write_str("random"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Kind {
    Hampath,
    Random,
    Grid,
}

impl Kind {
    pub fn generate(self, n: usize, p: f64, rng: &mut RngStream) -> Graph {
        match self {
            Kind::Hampath => generate::hampath(n, p, rng),
            Kind::Random => generate::random(n, p, rng),
            Kind::Grid => generate::square_grid(n),
        }
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(value_enum)]
    kind: Kind,
    /// Number of vertices.
    #[arg(short)]
    n: usize,
    /// Edge probability (ignored for grid).
    #[arg(short, default_value_t = 0.1, value_parser = probability)]
    p: f64,
    #[arg(long, default_value_t = Seed::Fixed(DEFAULT_SEED))]
    seed: Seed,
}

pub fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

pub fn probability(s: &str) -> Result<f64, String> {
    let p: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(format!("probability must be in [0, 1], got {p}"))
    }
}

#[derive(Serialize)]
struct Report {
    answer: bool,
    k: usize,
    n: usize,
    m: usize,
    trials: usize,
    seed: u64,
    elapsed_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    path: Option<Vec<usize>>,
}

/// A failure that ends the run with a message on stderr.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ExtractionFailed { .. } => EXIT_EXTRACTION,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

fn read_graph(path: &PathBuf) -> Result<Graph, Failure> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(path)
    }
    .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    Graph::parse(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn run(args: &RunArgs, extract: bool) -> Result<u8, Failure> {
    let g = read_graph(&args.graph)?;
    let k = args.size.vertices();
    let seed = args.seed.resolve();
    let start = Instant::now();
    let (answer, trials, path) = if extract {
        let path = kpath::find_with_trials(&g, k, args.trials, seed)?;
        (path.is_some(), args.trials, path)
    } else {
        let d = kpath::detect(&g, k, args.trials, seed)?;
        (d.answer, d.trials_used, None)
    };
    let elapsed = start.elapsed();

    if args.verify {
        if let Some(p) = &path {
            if !verify_path(&g, p, k) {
                return Err(Failure::usage(format!("verification failed: {p} is not a {k}-vertex path")));
            }
        }
        let exact = brute_force_kpath(&g, k).is_some();
        if exact != answer {
            return Err(Failure::usage(format!(
                "verification failed: exact search says {}, randomized answer {}",
                yes_no(exact),
                yes_no(answer)
            )));
        }
    }

    match args.format {
        Format::Json => {
            let report = Report {
                answer,
                k,
                n: g.n(),
                m: g.edge_count(),
                trials,
                seed,
                elapsed_ms: (elapsed.as_secs_f64() * 1e6).round() / 1e3,
                path: path.as_ref().map(|p| p.one_based()),
            };
            println!("{}", serde_json::to_string(&report).expect("report serializes"));
        }
        Format::Text if extract => match &path {
            Some(p) => println!("{p}"),
            None => println!("none"),
        },
        Format::Text => {
            println!("{}", yes_no(answer));
            println!("k: {k}");
            println!("trials: {trials} of {}", args.trials);
            println!("seed: {seed}");
        }
    }
    if args.verify && args.format == Format::Text {
        eprintln!("verified against exact search");
    }
    Ok(if answer { EXIT_YES } else { EXIT_NO })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Detect(args) => run(args, false),
        Command::Find(args) => run(args, true),
        Command::Bench(args) => bench::run(args).map_err(Failure::from),
        Command::Selftest(args) => Ok(selftest::run(args)),
        Command::Generate(args) => {
            let mut rng = RngStream::new(args.seed.resolve());
            print!("{}", args.kind.generate(args.n, args.p, &mut rng).to_text());
            Ok(EXIT_YES)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("kpath: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
