//! Builds the Gaussian-derivative wavelets and their Hilbert transforms and
//! prints the constants the measures rely on.
//!
//! cargo run --example wavelets

use symfeat::wavelets::{wavelet_constants, SampleGrid, WaveletSpec};

fn main() -> symfeat::Result<()> {
    let grid = SampleGrid::default();
    println!("{:<5} {:<5} {:>8} {:>8} {:>10} {:>10}", "psi", "sym", "l1", "l2", "K_odd", "radius");
    for k in 1..=4 {
        for spec in [WaveletSpec::gauss(k), WaveletSpec::hilbert_gauss(k)] {
            let w = spec.build(grid)?;
            let c = wavelet_constants(&w)?;
            let fmt = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.5}"));
            println!(
                "{:<5} {:<5} {:>8.5} {:>8.5} {:>10} {:>10}",
                spec.to_string(),
                format!("{:?}", w.symmetry()).to_lowercase(),
                w.l1_norm(),
                w.l2_norm(),
                fmt(c.k_odd),
                fmt(c.radius),
            );
        }
    }
    let even = WaveletSpec::hilbert_gauss(1).build(grid)?;
    let table = wavelet_constants(&even)?;
    let k = table.k_even()?;
    println!("\nK_even of HG1 (half-integral over |x| < r):");
    for r in [0.25, 0.5, 1.0, 2.0, 4.0] {
        println!("  r = {r:<4}  K = {:+.5}", k.eval(r));
    }
    Ok(())
}
