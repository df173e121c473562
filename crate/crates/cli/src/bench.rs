use std::time::Instant;

use clap::Args;
use serde::Serialize;

use kpath_core::{kpath, Result, RngStream};

use crate::{positive, probability, Format, Kind, Seed, DEFAULT_SEED};

#[derive(Args)]
pub struct BenchArgs {
    /// Instance family.
    #[arg(long, value_enum, default_value_t = Kind::Hampath)]
    kind: Kind,
    /// Vertices per instance.
    #[arg(short, default_value_t = 40)]
    n: usize,
    /// Edge probability (ignored for grid).
    #[arg(short, default_value_t = 0.1, value_parser = probability)]
    p: f64,
    #[arg(long, default_value_t = 4, value_parser = positive)]
    k_min: usize,
    #[arg(long, default_value_t = 12, value_parser = positive)]
    k_max: usize,
    /// Instances per k.
    #[arg(long, default_value_t = 5, value_parser = positive)]
    reps: usize,
    #[arg(long, default_value_t = kpath::DEFAULT_TRIALS, value_parser = positive)]
    trials: usize,
    #[arg(long, default_value_t = Seed::Fixed(DEFAULT_SEED))]
    seed: Seed,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Serialize)]
struct Row {
    k: usize,
    median_ms: f64,
    /// Yes answers per trial run; `None` when no trial ran.
    success_per_trial: Option<f64>,
    /// log2 of the median time relative to the previous k.
    log2_ratio: Option<f64>,
}

pub fn run(args: &BenchArgs) -> Result<u8> {
    let root = RngStream::new(args.seed.resolve());
    let mut rows: Vec<Row> = Vec::new();
    for k in args.k_min..=args.k_max {
        let mut times = Vec::with_capacity(args.reps);
        let mut yes = 0;
        let mut trials_run = 0;
        for r in 0..args.reps {
            let stream = root.child("k", k as u64).child("rep", r as u64);
            let g = args.kind.generate(args.n, args.p, &mut stream.child("instance", 0));
            let start = Instant::now();
            let d = kpath::detect_with_stream(&g, k, args.trials, &stream.child("detect", 0))?;
            times.push(start.elapsed().as_secs_f64() * 1e3);
            yes += usize::from(d.answer);
            trials_run += d.trials_used;
        }
        times.sort_by(f64::total_cmp);
        let median_ms = times[times.len() / 2];
        let log2_ratio = rows.last().map(|prev| (median_ms / prev.median_ms).log2());
        let success_per_trial = (trials_run > 0).then(|| yes as f64 / trials_run as f64);
        rows.push(Row { k, median_ms, success_per_trial, log2_ratio });
    }

    match args.format {
        Format::Json => println!("{}", serde_json::to_string(&rows).expect("rows serialize")),
        Format::Text => {
            println!("{:>4} {:>12} {:>10} {:>8}", "k", "median_ms", "p_trial", "log2");
            for row in &rows {
                let opt = |x: Option<f64>, prec: usize| {
                    x.map_or_else(|| "-".to_string(), |v| format!("{v:.prec$}"))
                };
                println!(
                    "{:>4} {:>12.3} {:>10} {:>8}",
                    row.k,
                    row.median_ms,
                    opt(row.success_per_trial, 3),
                    opt(row.log2_ratio, 2)
                );
            }
        }
    }
    Ok(0)
}
