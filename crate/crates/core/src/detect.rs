//! Detector configurations and the image-to-detections pipeline.

use serde::{Deserialize, Serialize};

use crate::bank::{build_bank, make_generator_2d, params_from_user, GeneratorKind, MoleculeBank, UserParams};
use crate::error::{Error, Result};
use crate::grid::{BinaryMap, Grid, ImageGrid};
use crate::measures::{
    blob_measure, edge_measure, multiband_ridge, ridge_measure, BlobSymmetry, FeatureKind,
    FeatureResult, MeasureParams, Polarity, RidgeBand,
};
use crate::synth::{Preset, SceneKind};
use crate::postprocess::{blob_centers, detections, threshold_and_thin, DetectionSet};
use crate::transform::analyze_banks;
use crate::wavelets::{wavelet_constants, SampleGrid, Symmetry, WaveletSpec};

/// Width range of one band of a multiband ridge detector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Band {
    pub min_feature_width: f64,
    pub max_feature_width: f64,
    pub max_feature_length: f64,
}

/// Everything needed to run one detector. Serialized field names are
/// camelCase (`maxFeatureWidth`, `scalesPerOctave`, ...).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DetectorConfig {
    pub kind: FeatureKind,
    pub odd_wavelet: WaveletSpec,
    pub even_wavelet: WaveletSpec,
    pub min_feature_width: f64,
    pub max_feature_width: f64,
    pub max_feature_length: f64,
    pub scales_per_octave: u32,
    pub n_orientations: usize,
    pub alpha: f64,
    /// Scale offset of the secondary system: `j_e` for edges, `j_o` for ridges and blobs.
    pub offset: f64,
    pub beta: f64,
    pub epsilon: Option<f64>,
    pub polarity: Polarity,
    pub blob_symmetry: BlobSymmetry,
    /// Measure threshold for the binary map.
    pub threshold: f64,
    /// Ridge bands; when nonempty they replace the single width range.
    pub bands: Vec<Band>,
}

impl DetectorConfig {
    /// Defaults for `kind`, with `beta` in 8-bit intensity units.
    pub fn defaults(kind: FeatureKind) -> Self {
        match kind {
            FeatureKind::Edge => DetectorConfig {
                kind,
                odd_wavelet: WaveletSpec::gauss(1),
                even_wavelet: WaveletSpec::hilbert_gauss(1),
                min_feature_width: 2.0,
                max_feature_width: 8.0,
                max_feature_length: 16.0,
                scales_per_octave: 2,
                n_orientations: 16,
                alpha: 0.5,
                offset: 0.0,
                beta: 10.0,
                epsilon: None,
                polarity: Polarity::Both,
                blob_symmetry: BlobSymmetry::Circle,
                threshold: 0.2,
                bands: Vec::new(),
            },
            FeatureKind::Ridge => DetectorConfig {
                kind,
                odd_wavelet: WaveletSpec::hilbert_gauss(2),
                even_wavelet: WaveletSpec::gauss(2),
                min_feature_width: 3.0,
                max_feature_width: 10.0,
                max_feature_length: 15.0,
                scales_per_octave: 6,
                n_orientations: 16,
                alpha: 0.2,
                offset: 1.0,
                beta: 20.0,
                polarity: Polarity::Positive,
                threshold: 0.1,
                ..Self::defaults(FeatureKind::Edge)
            },
            FeatureKind::Blob => DetectorConfig {
                kind,
                odd_wavelet: WaveletSpec::gauss(1),
                even_wavelet: WaveletSpec::hilbert_gauss(1),
                min_feature_width: 10.0,
                max_feature_width: 20.0,
                max_feature_length: 20.0,
                scales_per_octave: 3,
                n_orientations: 16,
                alpha: 1.0,
                offset: -1.0,
                beta: 15.0,
                polarity: Polarity::Both,
                threshold: 0.03,
                ..Self::defaults(FeatureKind::Edge)
            },
        }
    }

    /// Same detector for images whose full range is `intensity_scale`
    /// instead of 255; only `beta` changes.
    pub fn rescaled(mut self, intensity_scale: f64) -> Self {
        self.beta *= intensity_scale / 255.0;
        self
    }

    pub fn user_params(&self) -> UserParams {
        UserParams {
            min_feature_width: self.min_feature_width,
            max_feature_width: self.max_feature_width,
            max_feature_length: self.max_feature_length,
            scales_per_octave: self.scales_per_octave,
            n_orientations: self.n_orientations,
            alpha: self.alpha,
        }
    }

    pub fn measure_params(&self) -> MeasureParams {
        MeasureParams {
            beta: self.beta,
            epsilon: self.epsilon,
            polarity: self.polarity,
            blob_symmetry: self.blob_symmetry,
        }
    }

    /// Checks everything that can be checked without building filters.
    pub fn validate(&self) -> Result<()> {
        self.measure_params().validate()?;
        if !(0.0..=1.0).contains(&self.threshold) {
            return Err(Error::config(format!("threshold must lie in [0, 1], got {}", self.threshold)));
        }
        if !self.offset.is_finite() {
            return Err(Error::config("offset must be finite"));
        }
        if !self.bands.is_empty() && self.kind != FeatureKind::Ridge {
            return Err(Error::config("bands are only supported for ridge detection"));
        }
        if self.kind == FeatureKind::Blob && self.alpha != 1.0 {
            return Err(Error::config(format!(
                "blob detection needs alpha = 1, got {}",
                self.alpha
            )));
        }
        let (odd, even) = (self.odd_wavelet.symmetry(), self.even_wavelet.symmetry());
        if odd != Symmetry::Odd || even != Symmetry::Even {
            return Err(Error::InvalidWavelet(format!(
                "oddWavelet {} must be odd and evenWavelet {} even",
                self.odd_wavelet, self.even_wavelet
            )));
        }
        for u in self.band_params() {
            u.validate()?;
            if u.n_scales() < 3 {
                return Err(Error::config(format!(
                    "width range {}..{} at {} scales per octave gives {} scales; at least 3 are needed",
                    u.min_feature_width,
                    u.max_feature_width,
                    u.scales_per_octave,
                    u.n_scales()
                )));
            }
        }
        Ok(())
    }

    fn band_params(&self) -> Vec<UserParams> {
        if self.bands.is_empty() {
            return vec![self.user_params()];
        }
        self.bands
            .iter()
            .map(|b| UserParams {
                min_feature_width: b.min_feature_width,
                max_feature_width: b.max_feature_width,
                max_feature_length: b.max_feature_length,
                ..self.user_params()
            })
            .collect()
    }
}

/// Detector used for a synthetic benchmark family, for images in `[0, 1]`.
pub fn preset_config(preset: Preset) -> DetectorConfig {
    let cfg = match preset.kind() {
        SceneKind::Edges => DetectorConfig {
            beta: 30.0,
            ..DetectorConfig::defaults(FeatureKind::Edge)
        },
        SceneKind::Ridges => DetectorConfig::defaults(FeatureKind::Ridge),
        SceneKind::Blobs => {
            let (lo, hi) = match preset {
                Preset::BlobsSmall => (5.0, 16.0),
                _ => (20.0, 60.0),
            };
            DetectorConfig {
                min_feature_width: lo,
                max_feature_width: hi,
                max_feature_length: hi,
                ..DetectorConfig::defaults(FeatureKind::Blob)
            }
        }
    };
    cfg.rescaled(1.0)
}

/// Feature kind sought in a scene family.
pub fn scene_feature(kind: SceneKind) -> FeatureKind {
    match kind {
        SceneKind::Edges => FeatureKind::Edge,
        SceneKind::Ridges => FeatureKind::Ridge,
        SceneKind::Blobs => FeatureKind::Blob,
    }
}

/// The primary and secondary molecule systems of a detector.
///
/// Edges return `(odd, even)`; ridges and blobs return `(even, odd)`.
pub fn build_bank_pair(cfg: &DetectorConfig, user: &UserParams) -> Result<(MoleculeBank, MoleculeBank)> {
    let grid = SampleGrid::new(8.0, 4096)?;
    let odd = cfg.odd_wavelet.build(grid)?;
    let even = cfg.even_wavelet.build(grid)?;
    let radius = wavelet_constants(&even)?.radius()?;
    let (primary_kind, primary_w, secondary_kind, secondary_w) = match cfg.kind {
        FeatureKind::Edge => (GeneratorKind::OddXGauss, &odd, GeneratorKind::EvenXGauss, &even),
        FeatureKind::Ridge => (GeneratorKind::EvenXGauss, &even, GeneratorKind::OddXGauss, &odd),
        FeatureKind::Blob => (GeneratorKind::EvenXEven, &even, GeneratorKind::OddXGauss, &odd),
    };
    let p = params_from_user(user, primary_kind, radius)?;
    let s = p.companion(secondary_kind, cfg.offset);
    let gp = make_generator_2d(p.kind, primary_w, p.c1, p.c2)?;
    let gs = make_generator_2d(s.kind, secondary_w, s.c1, s.c2)?;
    Ok((build_bank(&gp, &p)?, build_bank(&gs, &s)?))
}

/// Measure maps for one image.
pub fn measure(f: &ImageGrid, cfg: &DetectorConfig) -> Result<FeatureResult> {
    cfg.validate()?;
    let params = cfg.measure_params();
    if cfg.kind == FeatureKind::Ridge && !cfg.bands.is_empty() {
        let bands = cfg
            .band_params()
            .iter()
            .map(|u| build_bank_pair(cfg, u).map(|(even, odd)| RidgeBand { even, odd }))
            .collect::<Result<Vec<_>>>()?;
        return multiband_ridge(f, &bands, &params);
    }
    let (primary, secondary) = build_bank_pair(cfg, &cfg.user_params())?;
    let stacks = analyze_banks(f, &[&primary, &secondary])?;
    match cfg.kind {
        FeatureKind::Edge => edge_measure(&stacks[0], &stacks[1], &params),
        FeatureKind::Ridge => ridge_measure(&stacks[0], &stacks[1], &params),
        FeatureKind::Blob => blob_measure(&stacks[0], &stacks[1], &params),
    }
}

/// Measure maps, binary map and discrete detections.
#[derive(Debug, Clone)]
pub struct DetectorOutput {
    pub result: FeatureResult,
    /// Thinned curves (edges, ridges) or the thresholded measure (blobs).
    pub map: BinaryMap,
    pub set: DetectionSet,
}

/// Post-processes measure maps into binary maps and detections.
pub fn finish(result: FeatureResult, threshold: f64, mask: Option<&BinaryMap>) -> DetectorOutput {
    match result.kind {
        FeatureKind::Blob => {
            let set = blob_centers(&result, threshold, mask);
            let map = result
                .measure
                .map(|&m| m > 0.0 && m >= threshold);
            let map = match mask {
                Some(k) => Grid::from_fn(map.width(), map.height(), |x, y| {
                    *map.get(x, y) && *k.get(x, y)
                }),
                None => map,
            };
            DetectorOutput { result, map, set }
        }
        _ => {
            let map = threshold_and_thin(&result, threshold, mask);
            let set = detections(&result, &map);
            DetectorOutput { result, map, set }
        }
    }
}

/// Full pipeline: banks, transform, measure and post-processing.
pub fn detect(f: &ImageGrid, cfg: &DetectorConfig, mask: Option<&BinaryMap>) -> Result<DetectorOutput> {
    if let Some(m) = mask {
        if m.width() != f.width() || m.height() != f.height() {
            return Err(Error::Dimension(format!(
                "mask is {}x{}, image {}x{}",
                m.width(),
                m.height(),
                f.width(),
                f.height()
            )));
        }
    }
    Ok(finish(measure(f, cfg)?, cfg.threshold, mask))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        for k in [FeatureKind::Edge, FeatureKind::Ridge, FeatureKind::Blob] {
            DetectorConfig::defaults(k).validate().unwrap();
        }
    }

    #[test]
    fn invalid_configs_are_rejected_before_compute() {
        let mut c = DetectorConfig::defaults(FeatureKind::Blob);
        c.alpha = 0.5;
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        let mut c = DetectorConfig::defaults(FeatureKind::Edge);
        c.odd_wavelet = WaveletSpec::gauss(2);
        assert!(matches!(c.validate(), Err(Error::InvalidWavelet(_))));
        let mut c = DetectorConfig::defaults(FeatureKind::Ridge);
        c.max_feature_width = 3.5;
        c.scales_per_octave = 1;
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        let mut c = DetectorConfig::defaults(FeatureKind::Edge);
        c.threshold = 1.5;
        assert!(c.validate().is_err());
    }

    #[test]
    fn config_json_uses_camel_case_names() {
        let c = DetectorConfig::defaults(FeatureKind::Ridge);
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v["maxFeatureWidth"], 10.0);
        assert_eq!(v["nOrientations"], 16);
        let back: DetectorConfig = serde_json::from_value(v).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn rescaling_only_touches_beta() {
        let c = DetectorConfig::defaults(FeatureKind::Ridge);
        let r = c.clone().rescaled(1.0);
        assert!((r.beta - 20.0 / 255.0).abs() < 1e-15);
        assert_eq!(DetectorConfig { beta: c.beta, ..r }, c);
        for p in Preset::ALL {
            let c = preset_config(p);
            c.validate().unwrap();
            assert_eq!(c.kind, scene_feature(p.kind()));
        }
    }

    #[test]
    fn square_edge_is_found_with_its_tangent() {
        let f = ImageGrid::from_fn(64, 64, |x, _| if x < 32 { 0.0 } else { 200.0 });
        let cfg = DetectorConfig::defaults(FeatureKind::Edge);
        let d = detect(&f, &cfg, None).unwrap();
        for y in 12..52 {
            let row: Vec<usize> = (0..64).filter(|&x| *d.map.get(x, y)).collect();
            assert_eq!(row.len(), 1, "row {y}: {row:?}");
            assert!((row[0] as f64 - 31.5).abs() <= 1.0);
        }
        let p = d.set.points.iter().find(|p| p.y == 30).unwrap();
        assert!((p.orientation.unwrap().abs() - std::f64::consts::FRAC_PI_2).abs() < 0.02);
    }
}
