//! Builds the ridge molecule systems and reports their scales and support,
//! then checks the vanishing moments of the generator in frequency.
//!
//! cargo run --example filter_bank

use symfeat::bank::{make_generator_2d, verify_order, GeneratorKind, OrderCheck};
use symfeat::detect::{build_bank_pair, DetectorConfig};
use symfeat::measures::FeatureKind;
use symfeat::wavelets::{SampleGrid, WaveletSpec};

fn main() -> symfeat::Result<()> {
    let cfg = DetectorConfig::defaults(FeatureKind::Ridge);
    let (even, odd) = build_bank_pair(&cfg, &cfg.user_params())?;
    for (name, bank) in [("even", &even), ("odd", &odd)] {
        let p = bank.params();
        println!(
            "{name} system: {:?} on {}, alpha {}, a = {:.4}, c1 = {:.4}, c2 = {:.4}, offset {}",
            p.kind,
            bank.wavelet(),
            p.alpha,
            p.a,
            p.c1,
            p.c2,
            p.scale_offset
        );
        for j in 0..bank.n_scales() {
            let f = bank.filter(j, 0);
            println!(
                "  scale {j:2}: dilation {:.4}, filter {}x{}, l1 {:.6}, sum {:+.1e}",
                p.dilation(j),
                f.side(),
                f.side(),
                f.l1_mass(),
                f.sum()
            );
        }
    }
    println!("\nvanishing moments of G_k x Gaussian generators:");
    for k in 1..=3 {
        let kind = if k % 2 == 0 { GeneratorKind::EvenXGauss } else { GeneratorKind::OddXGauss };
        let g = make_generator_2d(kind, &WaveletSpec::gauss(k).build(SampleGrid::default())?, 1.0, 1.0)?;
        let r = verify_order(&g, &OrderCheck { m: k, ..Default::default() });
        println!("  k = {k}: slope {:.4}, bounded {}", r.moment_slope, r.bounded);
    }
    Ok(())
}
