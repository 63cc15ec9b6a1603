//! Ridge detection with width estimation on a ridge scene at each noise level.
//!
//! cargo run --release --example detect_ridges

use symfeat::detect::{detect, preset_config};
use symfeat::eval::{evaluate, EvalOptions};
use symfeat::synth::{add_noise, generate, NoiseLevel, Preset};

fn main() -> symfeat::Result<()> {
    let (clean, gt) = generate(&Preset::Ridges1.spec(0))?;
    let cfg = preset_config(Preset::Ridges1);
    println!(
        "{} and {}, widths {}..{} px, alpha {}, {} orientations",
        cfg.even_wavelet, cfg.odd_wavelet, cfg.min_feature_width, cfg.max_feature_width, cfg.alpha, cfg.n_orientations
    );
    for noise in [NoiseLevel::None, NoiseLevel::Medium, NoiseLevel::Severe] {
        let image = add_noise(&clean, noise, 0);
        let out = detect(&image, &cfg, None)?;
        let r = evaluate(&gt, &out.set, &out.map, &EvalOptions::default())?;
        println!(
            "{:<7} FOM {:.3}  width MAE {:.2} px (sd {:.2})  orientation MAE {:.2} deg  SR {:.1}%",
            format!("{noise:?}").to_lowercase(),
            r.fom.unwrap_or(0.0),
            r.mae_width.unwrap_or(f64::NAN),
            r.sd_width.unwrap_or(f64::NAN),
            r.mae_orientation.unwrap_or(f64::NAN),
            100.0 * r.sr.unwrap_or(0.0)
        );
    }
    Ok(())
}
