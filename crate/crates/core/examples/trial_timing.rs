//! Prints per-seed detection times on G(60, 0.2) for k = 10..17.

use std::time::Instant;

use kpath_core::{generate, kpath, RngStream};

fn main() {
    let g = generate::random(60, 0.2, &mut RngStream::new(9));
    let mut prev: Option<f64> = None;
    for k in 10..=17 {
        let mut line = format!("k={k}:");
        let mut times = Vec::new();
        for seed in 0..5 {
            let best = (0..3)
                .map(|_| {
                    let t = Instant::now();
                    let d = kpath::detect(&g, k, kpath::DEFAULT_TRIALS, seed).unwrap();
                    assert!(d.answer);
                    t.elapsed().as_secs_f64() * 1e3
                })
                .fold(f64::INFINITY, f64::min);
            line += &format!(" {best:.1}");
            times.push(best);
        }
        times.sort_by(f64::total_cmp);
        let median = times[2];
        if let Some(p) = prev {
            line += &format!("  log2 ratio {:.2}", (median / p).log2());
        }
        prev = Some(median);
        println!("{line}");
    }
}
