//! Contrast-invariant feature measures and the geometry estimates derived
//! from the most significant molecule at each pixel.

mod blob;
mod edge;
mod edge1d;
mod multiband;
mod orientation;
mod parabola;
mod ridge;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

pub use blob::blob_measure;
pub use edge::edge_measure;
pub use edge1d::{edge_measure_1d, Edge1dConfig};
pub use multiband::{combine_bands, multiband_ridge, RidgeBand};
pub use orientation::orientation_measure;
pub use parabola::parabola_refine;
pub use ridge::ridge_measure;

pub(crate) use parabola::refine_uniform;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::transform::CoefficientStack;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureKind {
    Edge,
    Ridge,
    Blob,
}

impl std::fmt::Display for FeatureKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FeatureKind::Edge => "edge",
            FeatureKind::Ridge => "ridge",
            FeatureKind::Blob => "blob",
        })
    }
}

/// Which contrast sign is reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarity {
    Positive,
    Negative,
    #[default]
    Both,
}

impl Polarity {
    pub fn admits(self, height: f64) -> bool {
        match self {
            Polarity::Positive => height >= 0.0,
            Polarity::Negative => height <= 0.0,
            Polarity::Both => true,
        }
    }
}

/// Rotation-invariance class of the blobs being sought.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlobSymmetry {
    #[default]
    Circle,
    Square,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureParams {
    /// Minimal contrast, in image intensity units.
    pub beta: f64,
    /// Denominator guard; `None` picks `1e-12 * max |coefficient|` (at least `1e-12`).
    pub epsilon: Option<f64>,
    pub polarity: Polarity,
    pub blob_symmetry: BlobSymmetry,
}

impl Default for MeasureParams {
    fn default() -> Self {
        MeasureParams {
            beta: 0.03,
            epsilon: None,
            polarity: Polarity::Both,
            blob_symmetry: BlobSymmetry::Circle,
        }
    }
}

impl MeasureParams {
    pub fn with_beta(beta: f64) -> Self {
        MeasureParams {
            beta,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(Error::config(format!("beta must be >= 0, got {}", self.beta)));
        }
        if let Some(e) = self.epsilon {
            if !(e > 0.0) {
                return Err(Error::config(format!("epsilon must be > 0, got {e}")));
            }
        }
        Ok(())
    }

    pub(crate) fn epsilon_for(&self, stacks: &[&CoefficientStack]) -> f64 {
        self.epsilon.unwrap_or_else(|| {
            let m = stacks.iter().map(|s| s.max_abs()).fold(0.0, f64::max);
            (1e-12 * m).max(1e-12)
        })
    }
}

/// Aligned per-pixel outputs of one detector.
#[derive(Debug, Clone)]
pub struct FeatureResult {
    pub kind: FeatureKind,
    /// Feature measure in `[0, 1]`.
    pub measure: Grid<f64>,
    /// Tangent orientation in `[-pi/2, pi/2)`; blobs carry none.
    pub orientation: Option<Grid<f64>>,
    /// Width in pixels, `NaN` where undefined; edges carry none.
    pub width: Option<Grid<f64>>,
    /// Signed contrast.
    pub height: Grid<f64>,
    /// Index of the most significant scale.
    pub scale_index: Grid<usize>,
    /// Index of the most significant orientation.
    pub orientation_index: Grid<usize>,
    /// Band that produced each pixel (multiband ridges only).
    pub band: Option<Grid<usize>>,
}

impl FeatureResult {
    pub fn width(&self) -> usize {
        self.measure.width()
    }

    pub fn height_px(&self) -> usize {
        self.measure.height()
    }
}

/// Wraps an angle onto `[-pi/2, pi/2)`.
pub fn wrap_half_turn(theta: f64) -> f64 {
    let t = (theta + PI / 2.0).rem_euclid(PI) - PI / 2.0;
    if t >= PI / 2.0 {
        t - PI
    } else {
        t
    }
}

/// Smallest-index argmax of `|stack|` over `(j, theta)` at pixel `p`.
///
/// A candidate replaces the running maximum only if it exceeds it by more
/// than `1e-12` relative plus `floor`, so near-ties and rounding noise
/// resolve to the first index.
pub(crate) fn argmax_abs(stack: &CoefficientStack, p: usize, floor: f64) -> (usize, usize, f64) {
    let mut best = (0, 0, stack.at(0, 0, p));
    let mut best_abs = best.2.abs();
    for j in 0..stack.n_scales() {
        for t in 0..stack.n_orientations() {
            let v = stack.at(j, t, p);
            if v.abs() > best_abs * (1.0 + 1e-12) + floor {
                best = (j, t, v);
                best_abs = v.abs();
            }
        }
    }
    best
}

/// Absolute tie tolerance of [`argmax_abs`] for a stack.
pub(crate) fn noise_floor(stack: &CoefficientStack) -> f64 {
    1e-12 * stack.max_abs()
}

pub(crate) fn check_pair(primary: &CoefficientStack, secondary: &CoefficientStack) -> Result<()> {
    if primary.width() != secondary.width() || primary.height() != secondary.height() {
        return Err(Error::Dimension(format!(
            "stacks cover {}x{} and {}x{} pixels",
            primary.width(),
            primary.height(),
            secondary.width(),
            secondary.height()
        )));
    }
    if primary.n_scales() != secondary.n_scales()
        || primary.n_orientations() != secondary.n_orientations()
    {
        return Err(Error::Dimension(format!(
            "stacks have {}x{} and {}x{} (scale x orientation) slices",
            primary.n_scales(),
            primary.n_orientations(),
            secondary.n_scales(),
            secondary.n_orientations()
        )));
    }
    Ok(())
}

#[inline]
pub(crate) fn clamp_unit(v: f64) -> f64 {
    if v.is_nan() {
        0.0
    } else {
        v.clamp(0.0, 1.0)
    }
}

/// Refined orientation index position at scale `j` from `|stack|`, on the torus.
pub(crate) fn refine_orientation(stack: &CoefficientStack, j: usize, t: usize, p: usize) -> f64 {
    let n = stack.n_orientations();
    let thetas = &stack.params().orientations;
    if n < 3 {
        return thetas[t];
    }
    let step = PI / n as f64;
    let prev = stack.at(j, (t + n - 1) % n, p).abs();
    let next = stack.at(j, (t + 1) % n, p).abs();
    refine_uniform(thetas[t], step, [prev, stack.at(j, t, p).abs(), next])
}
