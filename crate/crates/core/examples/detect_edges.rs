//! Edge detection on a synthetic scene, with the figure of merit and
//! orientation error against its ground truth.
//!
//! cargo run --release --example detect_edges [seed]

use symfeat::detect::{detect, preset_config};
use symfeat::eval::{evaluate, EvalOptions};
use symfeat::synth::{generate, Preset};

fn main() -> symfeat::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let (image, gt) = generate(&Preset::Edges1.spec(seed))?;
    let cfg = preset_config(Preset::Edges1);
    let t = std::time::Instant::now();
    let out = detect(&image, &cfg, None)?;
    println!("{} edge pixels in {:.2} s", out.set.len(), t.elapsed().as_secs_f64());
    let r = evaluate(&gt, &out.set, &out.map, &EvalOptions::default())?;
    println!(
        "FOM {:.3}, orientation MAE {:.2} deg, TPR {:.1}%",
        r.fom.unwrap_or(0.0),
        r.mae_orientation.unwrap_or(f64::NAN),
        100.0 * r.tpr.unwrap_or(0.0)
    );
    let dir = std::env::temp_dir().join("symfeat-detect-edges");
    std::fs::create_dir_all(&dir).map_err(|e| symfeat::Error::InvalidInput(e.to_string()))?;
    symfeat::io::write_png16(&dir.join("image.png"), &image, 0.0, 1.0)?;
    symfeat::cli::write_maps(&dir, &out.result)?;
    symfeat::io::write_mask_png(&dir.join("binary.png"), &out.map)?;
    println!("maps written to {}", dir.display());
    Ok(())
}
