//! Banks of L1-normalized symmetric molecules: tensor-product generators,
//! anisotropic dilation, rotation, and pixel sampling.

use std::f64::consts::{PI, SQRT_2};

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::wavelets::{wavelet_constants, Symmetry, Wavelet1D, WaveletConstants, WaveletSpec};

/// Relative L1 tail mass ignored when sizing filter supports.
const SUPPORT_TOLERANCE: f64 = 1e-3;
/// Cross-axis Gaussian `exp(-u^2)` is cut at `|u| = 4`.
const GAUSS_SUPPORT: f64 = 4.0;
/// Filters whose half-size exceeds this multiple of the largest feature size are rejected.
const SUPPORT_LIMIT_FACTOR: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    /// Even wavelet across, Gaussian along.
    EvenXGauss,
    /// Odd wavelet across, Gaussian along.
    OddXGauss,
    /// Even wavelet on both axes.
    EvenXEven,
}

impl GeneratorKind {
    pub fn wavelet_symmetry(self) -> Symmetry {
        match self {
            GeneratorKind::OddXGauss => Symmetry::Odd,
            _ => Symmetry::Even,
        }
    }
}

/// A continuous 2D generator `g(x1, x2)` built from a sampled 1D wavelet.
#[derive(Debug, Clone)]
pub struct Generator2D {
    kind: GeneratorKind,
    psi: Wavelet1D,
    c1: f64,
    c2: f64,
    psi_support: f64,
}

/// Builds `c1 c2 pi^(-1/2) psi(c1 x1) G_0(c2 x2)` or `c1 c2 psi(c1 x1) psi(c2 x2)`.
pub fn make_generator_2d(
    kind: GeneratorKind,
    psi: &Wavelet1D,
    c1: f64,
    c2: f64,
) -> Result<Generator2D> {
    if !psi.is_l1_normalized() {
        return Err(Error::InvalidWavelet(
            "generators need an L1-normalized wavelet".into(),
        ));
    }
    if psi.symmetry() != kind.wavelet_symmetry() {
        return Err(Error::config(format!(
            "{kind:?} needs a {:?} wavelet, got {}",
            kind.wavelet_symmetry(),
            psi.spec()
        )));
    }
    if !(c1 > 0.0 && c2 > 0.0 && c1.is_finite() && c2.is_finite()) {
        return Err(Error::config(format!(
            "axis factors must be positive, got c1={c1}, c2={c2}"
        )));
    }
    let psi_support = psi.support_radius(SUPPORT_TOLERANCE).max(psi.spacing());
    Ok(Generator2D {
        kind,
        psi: psi.clone(),
        c1,
        c2,
        psi_support,
    })
}

impl Generator2D {
    pub fn kind(&self) -> GeneratorKind {
        self.kind
    }

    pub fn wavelet(&self) -> &Wavelet1D {
        &self.psi
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    /// Half-extents of the generator's effective support along `(x1, x2)`.
    pub fn support(&self) -> (f64, f64) {
        let x2 = match self.kind {
            GeneratorKind::EvenXEven => self.psi_support,
            _ => GAUSS_SUPPORT,
        };
        (self.psi_support / self.c1, x2 / self.c2)
    }

    pub fn eval(&self, x1: f64, x2: f64) -> f64 {
        let across = self.psi.eval(self.c1 * x1);
        match self.kind {
            GeneratorKind::EvenXEven => self.c1 * self.c2 * across * self.psi.eval(self.c2 * x2),
            _ => {
                let u = self.c2 * x2;
                self.c1 * self.c2 / PI.sqrt() * across * (-u * u).exp()
            }
        }
    }

    /// Continuous Fourier transform, as a product of the 1D transforms.
    pub fn fourier(&self, xi1: f64, xi2: f64) -> Complex64 {
        let across = self.psi.fourier(xi1 / self.c1);
        match self.kind {
            GeneratorKind::EvenXEven => across * self.psi.fourier(xi2 / self.c2),
            _ => {
                let v = PI * xi2 / self.c2;
                across * (-v * v).exp()
            }
        }
    }

    /// Samples the undilated generator on an odd square grid with the given
    /// pixel spacing, renormalized to unit discrete L1 mass.
    pub fn sample(&self, half: usize, step: f64) -> Filter2D {
        let side = 2 * half + 1;
        let mut data = Vec::with_capacity(side * side);
        for r in 0..side {
            for c in 0..side {
                let x2 = (r as f64 - half as f64) * step;
                let x1 = (c as f64 - half as f64) * step;
                data.push(self.eval(x1, x2));
            }
        }
        let mut f = Filter2D { half, data };
        let area = step * step;
        let mass: f64 = f.data.iter().map(|v| v.abs()).sum::<f64>() * area;
        if mass > 0.0 {
            f.data.iter_mut().for_each(|v| *v /= mass);
        }
        f
    }
}

/// User-facing bank parameters in pixel units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UserParams {
    pub min_feature_width: f64,
    pub max_feature_width: f64,
    pub max_feature_length: f64,
    pub scales_per_octave: u32,
    pub n_orientations: usize,
    pub alpha: f64,
}

impl UserParams {
    pub fn validate(&self) -> Result<()> {
        let ok = self.min_feature_width > 0.0
            && self.min_feature_width < self.max_feature_width
            && self.max_feature_width <= self.max_feature_length
            && self.max_feature_length.is_finite();
        if !ok {
            return Err(Error::config(format!(
                "need 0 < minFeatureWidth < maxFeatureWidth <= maxFeatureLength, got {} / {} / {}",
                self.min_feature_width, self.max_feature_width, self.max_feature_length
            )));
        }
        if self.scales_per_octave == 0 {
            return Err(Error::config("scalesPerOctave must be at least 1"));
        }
        if self.n_orientations == 0 {
            return Err(Error::config("nOrientations must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::config(format!("alpha must lie in [0, 1], got {}", self.alpha)));
        }
        Ok(())
    }

    /// `ceil(spo * log2(max/min)) + 1`.
    pub fn n_scales(&self) -> usize {
        let octaves = (self.max_feature_width / self.min_feature_width).log2();
        (self.scales_per_octave as f64 * octaves - 1e-9).ceil().max(0.0) as usize + 1
    }
}

/// Full parameter record of a molecule system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BankParams {
    pub alpha: f64,
    pub a: f64,
    /// Integer scale indices; index 0 is the coarsest.
    pub scales: Vec<i32>,
    /// Real offset subtracted from every scale index (`j - offset`).
    pub scale_offset: f64,
    pub orientations: Vec<f64>,
    pub kind: GeneratorKind,
    pub c1: f64,
    pub c2: f64,
    pub user: Option<UserParams>,
}

/// `Theta = { -pi/2 + m pi / n }`.
pub fn uniform_orientations(n: usize) -> Vec<f64> {
    (0..n).map(|m| -PI / 2.0 + m as f64 * PI / n as f64).collect()
}

/// Maps pixel-unit feature sizes to a parameter record.
///
/// `even_radius` is the radius of the detector's even wavelet; the
/// coarsest scale then matches ridges of width `maxFeatureWidth`.
pub fn params_from_user(
    user: &UserParams,
    kind: GeneratorKind,
    even_radius: f64,
) -> Result<BankParams> {
    user.validate()?;
    if !(even_radius > 0.0) {
        return Err(Error::InvalidWavelet("even wavelet radius must be positive".into()));
    }
    let n_scales = user.n_scales();
    if n_scales < 3 {
        return Err(Error::config(format!(
            "the width range yields {n_scales} scales; at least 3 are needed"
        )));
    }
    let c1 = 2.0 * even_radius / user.max_feature_width;
    let c2 = match kind {
        GeneratorKind::EvenXEven => c1,
        _ => 2.0 * SQRT_2 / user.max_feature_length,
    };
    let params = BankParams {
        alpha: user.alpha,
        a: 2f64.powf(1.0 / user.scales_per_octave as f64),
        scales: (0..n_scales as i32).collect(),
        scale_offset: 0.0,
        orientations: uniform_orientations(user.n_orientations),
        kind,
        c1,
        c2,
        user: Some(*user),
    };
    params.validate()?;
    Ok(params)
}

impl BankParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::config(format!("alpha must lie in [0, 1], got {}", self.alpha)));
        }
        if !(self.a > 1.0 && self.a.is_finite()) {
            return Err(Error::config(format!("dilation base must exceed 1, got {}", self.a)));
        }
        if self.scales.is_empty() || self.scales.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config("scales must be a nonempty increasing sequence"));
        }
        if self.orientations.is_empty() {
            return Err(Error::config("need at least one orientation"));
        }
        if !self.scale_offset.is_finite() {
            return Err(Error::config("scale offset must be finite"));
        }
        if !(self.c1 > 0.0 && self.c2 > 0.0) {
            return Err(Error::config("axis factors must be positive"));
        }
        Ok(())
    }

    pub fn n_scales(&self) -> usize {
        self.scales.len()
    }

    pub fn n_orientations(&self) -> usize {
        self.orientations.len()
    }

    /// Effective dilation exponent `j - offset` of scale index `j_index`.
    pub fn exponent(&self, j_index: usize) -> f64 {
        self.scales[j_index] as f64 - self.scale_offset
    }

    /// Dilation factor `a^(j - offset)`.
    pub fn dilation(&self, j_index: usize) -> f64 {
        self.a.powf(self.exponent(j_index))
    }

    /// Same system with a different generator kind and scale offset.
    pub fn companion(&self, kind: GeneratorKind, offset: f64) -> BankParams {
        BankParams {
            kind,
            scale_offset: offset,
            ..self.clone()
        }
    }

    fn support_limit(&self) -> f64 {
        match self.user {
            Some(u) => SUPPORT_LIMIT_FACTOR * u.max_feature_width.max(u.max_feature_length),
            None => f64::INFINITY,
        }
    }
}

/// A sampled filter on an odd square grid, row-major, centred on the origin.
///
/// Entry `(dc, dr)` with `|dc|, |dr| <= half` is the filter value at column
/// offset `dc` and row offset `dr`.
#[derive(Debug, Clone, PartialEq)]
pub struct Filter2D {
    half: usize,
    data: Vec<f64>,
}

impl Filter2D {
    pub fn half(&self) -> usize {
        self.half
    }

    pub fn side(&self) -> usize {
        2 * self.half + 1
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn at(&self, dc: isize, dr: isize) -> f64 {
        let h = self.half as isize;
        if dc.abs() > h || dr.abs() > h {
            return 0.0;
        }
        self.data[((dr + h) as usize) * self.side() + (dc + h) as usize]
    }

    pub fn l1_mass(&self) -> f64 {
        self.data.iter().map(|v| v.abs()).sum()
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    /// The filter rotated by 90 degrees: `out(dc, dr) = self(dr, -dc)`.
    pub fn rotate90(&self) -> Filter2D {
        let h = self.half as isize;
        let mut data = Vec::with_capacity(self.data.len());
        for dr in -h..=h {
            for dc in -h..=h {
                data.push(self.at(dr, -dc));
            }
        }
        Filter2D {
            half: self.half,
            data,
        }
    }
}

/// Filters of one molecule system, indexed by `(scale, orientation)`.
#[derive(Debug, Clone)]
pub struct MoleculeBank {
    filters: Vec<Filter2D>,
    params: BankParams,
    constants: WaveletConstants,
    wavelet: WaveletSpec,
    generator: Generator2D,
}

/// Samples `a^{j(1+alpha)} g(A_{a^j, alpha} R_theta x)` for every `(j, theta)`.
pub fn build_bank(g: &Generator2D, params: &BankParams) -> Result<MoleculeBank> {
    params.validate()?;
    if g.kind() != params.kind {
        return Err(Error::config(format!(
            "generator kind {:?} does not match bank kind {:?}",
            g.kind(),
            params.kind
        )));
    }
    let constants = wavelet_constants(g.wavelet())?;
    let (x1, x2) = g.support();
    let mut halves = Vec::with_capacity(params.n_scales());
    for j in 0..params.n_scales() {
        let s = params.dilation(j);
        let r = (x1 / s).hypot(x2 / s.powf(params.alpha)).ceil();
        if r > params.support_limit() {
            return Err(Error::config(format!(
                "filter support radius {r} px at scale {j} exceeds the admissible bound {}; \
                 increase maxFeatureLength or the scale range",
                params.support_limit()
            )));
        }
        halves.push(r.max(1.0) as usize);
    }
    let n_o = params.n_orientations();
    let filters = (0..params.n_scales() * n_o)
        .into_par_iter()
        .map(|idx| {
            let (j, t) = (idx / n_o, idx % n_o);
            sample_molecule(g, params, j, params.orientations[t], halves[j])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MoleculeBank {
        filters,
        params: params.clone(),
        constants,
        wavelet: g.wavelet().spec(),
        generator: g.clone(),
    })
}

fn sample_molecule(
    g: &Generator2D,
    params: &BankParams,
    j: usize,
    theta: f64,
    half: usize,
) -> Result<Filter2D> {
    let s = params.dilation(j);
    let sa = s.powf(params.alpha);
    let (sin, cos) = theta.sin_cos();
    let amp = s * sa;
    let side = 2 * half + 1;
    let h = half as f64;
    let mut data = Vec::with_capacity(side * side);
    for r in 0..side {
        let dr = r as f64 - h;
        for c in 0..side {
            let dc = c as f64 - h;
            let u1 = s * (cos * dc + sin * dr);
            let u2 = sa * (-sin * dc + cos * dr);
            data.push(amp * g.eval(u1, u2));
        }
    }
    let mass: f64 = data.iter().map(|v| v.abs()).sum();
    if !(mass > 0.0) {
        return Err(Error::Numeric(format!(
            "molecule at scale {j}, orientation {theta:.4} sampled to zero"
        )));
    }
    // remove the residual DC left by truncation and sampling, keeping the sign pattern
    let mean_ratio = data.iter().sum::<f64>() / mass;
    data.iter_mut().for_each(|v| *v -= mean_ratio * v.abs());
    let mass: f64 = data.iter().map(|v| v.abs()).sum();
    data.iter_mut().for_each(|v| *v /= mass);
    Ok(Filter2D { half, data })
}

impl MoleculeBank {
    pub fn params(&self) -> &BankParams {
        &self.params
    }

    pub fn constants(&self) -> &WaveletConstants {
        &self.constants
    }

    pub fn wavelet(&self) -> WaveletSpec {
        self.wavelet
    }

    pub fn generator(&self) -> &Generator2D {
        &self.generator
    }

    pub fn n_scales(&self) -> usize {
        self.params.n_scales()
    }

    pub fn n_orientations(&self) -> usize {
        self.params.n_orientations()
    }

    pub fn filter(&self, j: usize, t: usize) -> &Filter2D {
        &self.filters[j * self.n_orientations() + t]
    }

    /// Filters in `(j, theta)` lexicographic order.
    pub fn filters(&self) -> &[Filter2D] {
        &self.filters
    }

    pub fn max_half(&self) -> usize {
        self.filters.iter().map(Filter2D::half).max().unwrap_or(0)
    }
}

/// Settings for [`verify_order`].
#[derive(Debug, Clone, PartialEq)]
pub struct OrderCheck {
    /// Derivative order bound `L`: all `|rho| <= L` are checked.
    pub l: u32,
    /// Vanishing-moment exponent `M` under test.
    pub m: u32,
    pub n1: f64,
    pub n2: f64,
    /// `a^{-j}` term of the bound; 0 gives the asymptotic bound.
    pub scale_term1: f64,
    /// `a^{-j(1-alpha)}` term of the bound.
    pub scale_term2: f64,
    /// Frequencies are checked on `[-xi_max, xi_max]^2`.
    pub xi_max: f64,
    /// Smallest `|xi_1|` probed near the origin.
    pub delta: f64,
    /// Grid points per axis.
    pub points: usize,
    /// Finite-difference step in frequency.
    pub fd_step: f64,
}

impl Default for OrderCheck {
    fn default() -> Self {
        OrderCheck {
            l: 0,
            m: 1,
            n1: 2.0,
            n2: 2.0,
            scale_term1: 0.0,
            scale_term2: 0.0,
            xi_max: 4.0,
            delta: 1e-2,
            points: 41,
            fd_step: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderReport {
    /// Smallest admissible constant per derivative multi-index `(rho1, rho2)`.
    pub constants: Vec<((u32, u32), f64)>,
    /// Largest constant with the probe grid reaching down to `delta`.
    pub constant: f64,
    /// Same with the probe grid reaching down to `delta / 16`.
    pub constant_fine: f64,
    /// Heuristic: the constant does not grow as the origin is approached.
    pub bounded: bool,
    /// Log-log slope of `|g^(xi1, 0)|` for `xi1 in [1e-3, 1e-2]`.
    pub moment_slope: f64,
}

/// Numerically checks the frequency decay bound of a generator.
pub fn verify_order(g: &Generator2D, check: &OrderCheck) -> OrderReport {
    let mut constants = Vec::new();
    let mut coarse = 0.0f64;
    let mut fine = 0.0f64;
    for r1 in 0..=check.l {
        for r2 in 0..=(check.l - r1) {
            let c_coarse = order_constant(g, check, (r1, r2), check.delta);
            let c_fine = order_constant(g, check, (r1, r2), check.delta / 16.0);
            constants.push(((r1, r2), c_coarse.max(c_fine)));
            coarse = coarse.max(c_coarse);
            fine = fine.max(c_fine);
        }
    }
    let bounded = fine.is_finite() && coarse > 0.0 && fine / coarse < 2.0;
    OrderReport {
        constants,
        constant: coarse,
        constant_fine: fine,
        bounded,
        moment_slope: moment_slope(g, 1e-3, 1e-2, 24),
    }
}

fn order_bound(check: &OrderCheck, xi1: f64, xi2: f64) -> f64 {
    let near = (check.scale_term1 + xi1.abs() + check.scale_term2 * xi2.abs()).min(1.0);
    near.powi(check.m as i32)
        * (1.0 + xi1 * xi1 + xi2 * xi2).powf(-check.n1 / 2.0)
        * (1.0 + xi2 * xi2).powf(-check.n2 / 2.0)
}

fn derivative(g: &Generator2D, rho: (u32, u32), xi1: f64, xi2: f64, h: f64) -> f64 {
    fn diff(f: &dyn Fn(f64, f64) -> Complex64, order: u32, axis: usize, x: f64, y: f64, h: f64) -> Complex64 {
        if order == 0 {
            return f(x, y);
        }
        let (dx, dy) = if axis == 0 { (h, 0.0) } else { (0.0, h) };
        (diff(f, order - 1, axis, x + dx, y + dy, h) - diff(f, order - 1, axis, x - dx, y - dy, h))
            / (2.0 * h)
    }
    let along1 = |x: f64, y: f64| diff(&|a, b| g.fourier(a, b), rho.1, 1, x, y, h);
    diff(&along1, rho.0, 0, xi1, xi2, h).norm()
}

fn order_constant(g: &Generator2D, check: &OrderCheck, rho: (u32, u32), delta: f64) -> f64 {
    let n = check.points.max(3);
    // log-spaced magnitudes in [delta, xi_max] on both signs for xi1, uniform for xi2
    let half = n / 2;
    let mut xi1s = Vec::with_capacity(2 * half + 1);
    for i in 0..=half {
        let t = i as f64 / half as f64;
        let v = delta * (check.xi_max / delta).powf(t);
        xi1s.push(v);
        xi1s.push(-v);
    }
    let xi2s: Vec<f64> = (0..n)
        .map(|i| -check.xi_max + 2.0 * check.xi_max * i as f64 / (n - 1) as f64)
        .collect();
    let mut worst = 0.0f64;
    for &x1 in &xi1s {
        for &x2 in &xi2s {
            let v = derivative(g, rho, x1, x2, check.fd_step.min(delta / 4.0));
            worst = worst.max(v / order_bound(check, x1, x2));
        }
    }
    worst
}

fn moment_slope(g: &Generator2D, lo: f64, hi: f64, n: usize) -> f64 {
    let pts: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let xi = lo * (hi / lo).powf(i as f64 / (n - 1) as f64);
            (xi.ln(), g.fourier(xi, 0.0).norm().max(f64::MIN_POSITIVE).ln())
        })
        .collect();
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n as f64;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n as f64;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavelets::{SampleGrid, WaveletSpec};

    fn wavelet(spec: WaveletSpec) -> Wavelet1D {
        spec.build(SampleGrid::default()).unwrap()
    }

    fn user(min: f64, max: f64, len: f64, spo: u32, n_o: usize, alpha: f64) -> UserParams {
        UserParams {
            min_feature_width: min,
            max_feature_width: max,
            max_feature_length: len,
            scales_per_octave: spo,
            n_orientations: n_o,
            alpha,
        }
    }

    #[test]
    fn scale_count_formula() {
        let u = user(3.0, 10.0, 15.0, 6, 16, 0.2);
        assert_eq!(u.n_scales(), 12);
        let p = params_from_user(&u, GeneratorKind::EvenXGauss, 0.7).unwrap();
        assert_eq!(p.scales.len(), 12);
        assert!((p.a - 2f64.powf(1.0 / 6.0)).abs() < 1e-15);
    }

    #[test]
    fn orientation_spacing() {
        let t = uniform_orientations(16);
        assert!((t[1] - t[0] - 11.25f64.to_radians()).abs() < 1e-15);
        assert_eq!(t[0], -PI / 2.0);
        assert!(*t.last().unwrap() < PI / 2.0);
    }

    #[test]
    fn rejects_width_above_length() {
        let u = user(3.0, 20.0, 15.0, 6, 16, 0.5);
        assert!(params_from_user(&u, GeneratorKind::EvenXGauss, 0.7).is_err());
    }

    #[test]
    fn rejects_too_few_scales() {
        let u = user(8.0, 10.0, 15.0, 1, 16, 0.5);
        assert!(params_from_user(&u, GeneratorKind::EvenXGauss, 0.7).is_err());
    }

    #[test]
    fn generator_symmetries() {
        let g = make_generator_2d(GeneratorKind::OddXGauss, &wavelet(WaveletSpec::gauss(1)), 1.0, 0.7)
            .unwrap();
        for &(x, y) in &[(0.3, 0.5), (1.1, -0.2), (0.05, 2.0)] {
            assert!((g.eval(-x, y) + g.eval(x, y)).abs() < 1e-14);
            assert!((g.eval(x, -y) - g.eval(x, y)).abs() < 1e-14);
        }
        let e = make_generator_2d(GeneratorKind::EvenXEven, &wavelet(WaveletSpec::gauss(2)), 1.0, 1.0)
            .unwrap();
        for &(x, y) in &[(0.3, 0.5), (1.1, -0.2)] {
            let v = e.eval(x, y);
            assert!((e.eval(y, x) - v).abs() < 1e-14);
            assert!((e.eval(-x, y) - v).abs() < 1e-14);
            assert!((e.eval(x, -y) - v).abs() < 1e-14);
        }
    }

    #[test]
    fn generator_rejects_kind_mismatch() {
        let w = wavelet(WaveletSpec::gauss(1));
        assert!(make_generator_2d(GeneratorKind::EvenXGauss, &w, 1.0, 1.0).is_err());
    }

    #[test]
    fn sampled_generator_has_zero_integral_and_unit_mass() {
        let g = make_generator_2d(GeneratorKind::EvenXGauss, &wavelet(WaveletSpec::gauss(2)), 1.0, 1.0)
            .unwrap();
        let f = g.sample(200, 0.05);
        assert!((f.l1_mass() * 0.0025 - 1.0).abs() < 1e-6);
        assert!(f.sum().abs() * 0.0025 < 1e-6);
    }

    fn small_bank(kind: GeneratorKind, spec: WaveletSpec, alpha: f64, n_o: usize) -> MoleculeBank {
        let w = wavelet(spec);
        let params = BankParams {
            alpha,
            a: 2.0,
            scales: vec![0, 1, 2],
            scale_offset: 0.0,
            orientations: uniform_orientations(n_o),
            kind,
            c1: 0.5,
            c2: if kind == GeneratorKind::EvenXEven { 0.5 } else { 0.4 },
            user: None,
        };
        let g = make_generator_2d(kind, &w, params.c1, params.c2).unwrap();
        build_bank(&g, &params).unwrap()
    }

    #[test]
    fn filters_have_unit_mass_and_zero_mean() {
        let b = small_bank(GeneratorKind::EvenXGauss, WaveletSpec::hilbert_gauss(1), 0.5, 8);
        for f in b.filters() {
            assert!((f.l1_mass() - 1.0).abs() < 1e-6);
            assert!(f.sum().abs() < 1e-6);
        }
    }

    #[test]
    fn quarter_turn_filters_are_array_rotations() {
        let b = small_bank(GeneratorKind::OddXGauss, WaveletSpec::gauss(1), 1.0, 4);
        // orientations -pi/2, -pi/4, 0, pi/4
        for j in 0..b.n_scales() {
            let rotated = b.filter(j, 0).rotate90();
            let target = b.filter(j, 2);
            for (x, y) in rotated.data().iter().zip(target.data()) {
                assert!((x - y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn isotropic_alpha_shrinks_both_axes() {
        let b = small_bank(GeneratorKind::OddXGauss, WaveletSpec::gauss(1), 1.0, 4);
        let (h0, h1) = (b.filter(0, 2).half(), b.filter(1, 2).half());
        assert!(h1 * 2 <= h0 + 1);
    }

    #[test]
    fn zero_alpha_keeps_the_tangential_extent() {
        let b = small_bank(GeneratorKind::OddXGauss, WaveletSpec::gauss(1), 0.0, 4);
        // at theta = 0 the row axis is tangential; rows decay identically across scales
        let profile = |j: usize| {
            let f = b.filter(j, 2);
            let col: Vec<f64> = (0..=6).map(|dr| f.at(1, dr).abs()).collect();
            col.iter().map(|v| v / col[0]).collect::<Vec<_>>()
        };
        for j in 1..3 {
            for (a, c) in profile(0).iter().zip(profile(j)) {
                assert!((a - c).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn octave_scale_is_a_downsampled_copy() {
        let w = wavelet(WaveletSpec::gauss(2));
        let params = BankParams {
            alpha: 1.0,
            a: 2.0,
            scales: vec![0, 1],
            scale_offset: 0.0,
            orientations: vec![0.0],
            kind: GeneratorKind::EvenXEven,
            c1: 0.02,
            c2: 0.02,
            user: None,
        };
        let g = make_generator_2d(params.kind, &w, params.c1, params.c2).unwrap();
        let b = build_bank(&g, &params).unwrap();
        let (f0, f1) = (b.filter(0, 0), b.filter(1, 0));
        let h1 = f1.half() as isize;
        let (mut num, mut den) = (0.0, 0.0);
        for dr in -h1..=h1 {
            for dc in -h1..=h1 {
                let coarse = f0.at(2 * dc, 2 * dr) * 4.0;
                let v = f1.at(dc, dr);
                num += (coarse - v).powi(2);
                den += v * v;
            }
        }
        assert!((num / den).sqrt() < 1e-3, "relative l2 = {}", (num / den).sqrt());
    }

    #[test]
    fn oversized_support_is_rejected() {
        let w = wavelet(WaveletSpec::gauss(1));
        let u = user(3.0, 10.0, 10.0, 2, 8, 0.0);
        let mut p = params_from_user(&u, GeneratorKind::OddXGauss, 0.9).unwrap();
        p.c2 = 1e-3;
        let g = make_generator_2d(p.kind, &w, p.c1, p.c2).unwrap();
        assert!(matches!(build_bank(&g, &p), Err(Error::Config(_))));
    }

    #[test]
    fn vanishing_moments_match_derivative_order() {
        for k in 1..=3u32 {
            let g = make_generator_2d(
                if k % 2 == 0 { GeneratorKind::EvenXGauss } else { GeneratorKind::OddXGauss },
                &wavelet(WaveletSpec::gauss(k)),
                1.0,
                1.0,
            )
            .unwrap();
            let pass = verify_order(&g, &OrderCheck { m: k, ..Default::default() });
            assert!(pass.bounded, "k={k}: {pass:?}");
            assert!((pass.moment_slope - k as f64).abs() < 0.1);
            let fail = verify_order(&g, &OrderCheck { m: k + 1, ..Default::default() });
            assert!(!fail.bounded, "k={k}");
        }
    }

    #[test]
    fn gaussian_generator_has_no_vanishing_moment() {
        let g = make_generator_2d(GeneratorKind::EvenXGauss, &wavelet(WaveletSpec::gauss(0)), 1.0, 1.0)
            .unwrap();
        let r = verify_order(&g, &OrderCheck { m: 1, ..Default::default() });
        assert!(!r.bounded);
        assert!(r.moment_slope.abs() < 0.1);
    }

    #[test]
    fn derivative_order_check_runs() {
        let g = make_generator_2d(GeneratorKind::EvenXGauss, &wavelet(WaveletSpec::gauss(2)), 1.0, 1.0)
            .unwrap();
        let r = verify_order(&g, &OrderCheck { l: 1, m: 1, points: 15, ..Default::default() });
        assert_eq!(r.constants.len(), 3);
        assert!(r.bounded);
    }
}
