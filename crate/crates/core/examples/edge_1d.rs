//! One-dimensional edge measure on step edges of several heights: the
//! response at the jump is `1 - beta / s`.
//!
//! cargo run --example edge_1d

use symfeat::measures::{edge_measure_1d, Edge1dConfig};
use symfeat::wavelets::{SampleGrid, WaveletPair};

fn main() -> symfeat::Result<()> {
    let pair = WaveletPair::FIRST_DERIVATIVE;
    let grid = SampleGrid::default();
    let cfg = Edge1dConfig {
        odd: pair.odd.build(grid)?,
        even: pair.even.build(grid)?,
        c1: 0.3,
        a: 2f64.sqrt(),
        scales: (0..5).collect(),
        even_offset: 0.0,
        beta: 0.03,
        epsilon: None,
    };
    for s in [0.03, 0.1, 0.5, 1.0] {
        let signal: Vec<f64> = (0..256)
            .map(|i| match i {
                i if i < 128 => s,
                128 => s / 2.0,
                _ => 0.0,
            })
            .collect();
        let m = edge_measure_1d(&signal, &cfg)?;
        let around: Vec<String> = m[124..=132].iter().map(|v| format!("{v:.2}")).collect();
        println!("s = {s:<4}  EM(128) = {:.4}  expected {:.4}  around: {}", m[128], 1.0 - 0.03 / s, around.join(" "));
    }
    Ok(())
}
