//! Runs every preset at every noise level and prints the benchmark table.
//!
//! cargo run --release --example evaluate_benchmark [seeds]

use symfeat::cli::bench_case;
use symfeat::synth::{NoiseLevel, Preset};

fn main() -> symfeat::Result<()> {
    let seeds: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let opt = |v: Option<f64>, d: usize| v.map_or("-".to_string(), |v| format!("{v:.d$}"));
    println!(
        "{:<12} {:<7} {:>4} {:>6} {:>7} {:>7} {:>5} {:>4} {:>7}",
        "preset", "noise", "seed", "FOM", "MAE deg", "MAE px", "TP", "FP", "sec"
    );
    for p in Preset::ALL {
        for noise in [NoiseLevel::None, NoiseLevel::Medium, NoiseLevel::Severe] {
            for seed in 0..seeds {
                let r = bench_case(p, noise, seed)?;
                let e = &r.report;
                println!(
                    "{:<12} {:<7} {:>4} {:>6} {:>7} {:>7} {:>5} {:>4} {:>7.2}",
                    p.to_string(),
                    format!("{noise:?}").to_lowercase(),
                    seed,
                    opt(e.fom, 3),
                    opt(e.mae_orientation, 2),
                    opt(e.mae_width, 2),
                    e.tp.map_or("-".into(), |v| v.to_string()),
                    e.fp.map_or("-".into(), |v| v.to_string()),
                    r.detect_seconds
                );
            }
        }
    }
    Ok(())
}
