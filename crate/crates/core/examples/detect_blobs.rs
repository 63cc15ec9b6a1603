//! Blob detection: counts the 31 large circles and lists centre and diameter
//! estimates next to the ground truth.
//!
//! cargo run --release --example detect_blobs

use symfeat::detect::{detect, preset_config};
use symfeat::eval::{evaluate, EvalOptions};
use symfeat::synth::{add_noise, generate, NoiseLevel, Preset};

fn main() -> symfeat::Result<()> {
    let (clean, gt) = generate(&Preset::BlobsLarge.spec(0))?;
    let cfg = preset_config(Preset::BlobsLarge);
    for noise in [NoiseLevel::None, NoiseLevel::Severe] {
        let out = detect(&add_noise(&clean, noise, 0), &cfg, None)?;
        let r = evaluate(&gt, &out.set, &out.map, &EvalOptions::default())?;
        println!(
            "{:<6} TP {} FP {}  centre MAE {:.2} px  width MAE {:.2} px",
            format!("{noise:?}").to_lowercase(),
            r.tp.unwrap_or(0),
            r.fp.unwrap_or(0),
            r.mae_center.unwrap_or(f64::NAN),
            r.mae_width.unwrap_or(f64::NAN)
        );
        if noise == NoiseLevel::None {
            for b in gt.blobs.iter().take(5) {
                let nearest = out.set.points.iter().min_by(|p, q| {
                    let d = |x: &symfeat::postprocess::Detection| {
                        let [a, c] = x.position();
                        (a - b.center[0]).hypot(c - b.center[1])
                    };
                    d(p).total_cmp(&d(q))
                });
                if let Some(p) = nearest {
                    let [x, y] = p.position();
                    println!(
                        "  gt ({:6.1}, {:6.1}) d {:5.1}  ->  ({x:6.1}, {y:6.1}) d {:5.1}",
                        b.center[0],
                        b.center[1],
                        b.diameter,
                        p.width.unwrap_or(f64::NAN)
                    );
                }
            }
        }
    }
    Ok(())
}
