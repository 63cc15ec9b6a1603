//! Two-band ridge detection of dark vessels: a fine and a coarse width
//! range, restricted to negative contrast, merged per pixel.
//!
//! cargo run --release --example multiband_ridges

use symfeat::detect::{detect, Band, DetectorConfig};
use symfeat::measures::{FeatureKind, Polarity};
use symfeat::wavelets::WaveletSpec;
use symfeat::ImageGrid;

fn main() -> symfeat::Result<()> {
    // bright background with a thin and a thick dark line
    let image = ImageGrid::from_fn(200, 160, |x, y| {
        let thin = (y as f64 - 50.0 - 0.2 * x as f64).abs() < 2.0;
        let thick = (x as f64 - 140.0).abs() < 8.0;
        if thin || thick { 90.0 } else { 200.0 }
    });
    let cfg = DetectorConfig {
        odd_wavelet: WaveletSpec::gauss(1),
        even_wavelet: WaveletSpec::hilbert_gauss(1),
        scales_per_octave: 4,
        alpha: 1.0,
        offset: 0.0,
        beta: 2.0,
        polarity: Polarity::Negative,
        bands: vec![
            Band { min_feature_width: 2.0, max_feature_width: 8.0, max_feature_length: 24.0 },
            Band { min_feature_width: 6.0, max_feature_width: 24.0, max_feature_length: 72.0 },
        ],
        ..DetectorConfig::defaults(FeatureKind::Ridge)
    };
    let out = detect(&image, &cfg, None)?;
    let band = out.result.band.as_ref().expect("multiband result");
    for (name, x, y) in [("thin", 60usize, 62usize), ("thick", 140, 120)] {
        println!(
            "{name:<5} line at ({x}, {y}): measure {:.3}, width {:.2} px, band {}",
            out.result.measure.get(x, y),
            out.result.width.as_ref().unwrap().get(x, y),
            band.get(x, y)
        );
    }
    println!("{} centreline pixels", out.set.len());
    Ok(())
}
