use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson};
use serde::{Deserialize, Serialize};

use crate::grid::ImageGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseLevel {
    #[default]
    None,
    Medium,
    Severe,
}

impl NoiseLevel {
    /// Photon budget per unit intensity and additive Gaussian deviation.
    pub fn parameters(self) -> Option<(f64, f64)> {
        match self {
            NoiseLevel::None => None,
            NoiseLevel::Medium => Some((200.0, 0.05)),
            NoiseLevel::Severe => Some((50.0, 0.15)),
        }
    }
}

impl std::str::FromStr for NoiseLevel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "none" => Ok(NoiseLevel::None),
            "medium" => Ok(NoiseLevel::Medium),
            "severe" => Ok(NoiseLevel::Severe),
            _ => Err(format!("unknown noise level '{s}' (none, medium, severe)")),
        }
    }
}

/// Shot noise at photon budget `P` followed by additive Gaussian noise, clipped to `[0, 1]`.
pub fn add_noise(img: &ImageGrid, level: NoiseLevel, seed: u64) -> ImageGrid {
    let Some((budget, sigma)) = level.parameters() else {
        return img.clone();
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gauss = Normal::new(0.0, sigma).expect("finite sigma");
    img.map(|&v| {
        let lambda = (v.clamp(0.0, 1.0) * budget).max(0.0);
        let shot = if lambda > 0.0 {
            Poisson::new(lambda).expect("positive rate").sample(&mut rng) / budget
        } else {
            0.0
        };
        (shot + gauss.sample(&mut rng)).clamp(0.0, 1.0)
    })
}
