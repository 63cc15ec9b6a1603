//! Renders every preset with its ground truth and writes image bundles.
//!
//! cargo run --release --example synth_scenes [out_dir]

use std::path::PathBuf;

use symfeat::io;
use symfeat::synth::{add_noise, generate, NoiseLevel, Preset};

fn main() -> symfeat::Result<()> {
    let root = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("symfeat-scenes"));
    for p in Preset::ALL {
        let spec = p.spec(0);
        let (clean, gt) = generate(&spec)?;
        for noise in [NoiseLevel::None, NoiseLevel::Severe] {
            let dir = root.join(format!("{p}-{}", format!("{noise:?}").to_lowercase()));
            std::fs::create_dir_all(&dir).map_err(|e| symfeat::Error::InvalidInput(e.to_string()))?;
            io::write_png16(&dir.join(io::bundle::IMAGE), &add_noise(&clean, noise, 0), 0.0, 1.0)?;
            io::write_ground_truth(&dir, &spec, &gt)?;
        }
        println!(
            "{p:<12} {} shapes, {} gt pixels, {} blobs",
            spec.shapes.len(),
            gt.mask.count(),
            gt.blobs.len()
        );
    }
    println!("bundles in {}", root.display());
    Ok(())
}
