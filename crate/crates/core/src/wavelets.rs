//! One-dimensional Gaussian-derivative wavelets, their Hilbert transforms,
//! and the analytic constants the feature measures are calibrated with.
//!
//! Wavelets are tabulated on a uniform, periodic grid `x_i = (i - n/2) h`
//! with an even number of samples `n`, so the origin sits at index `n/2` and
//! the mirror image of index `i` is `(n - i) mod n`.

use std::fmt;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::parabola_refine;

/// Largest admissible `|G_k|` at the grid boundary.
pub const TRUNCATION_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetry {
    Even,
    Odd,
}

impl Symmetry {
    pub fn flipped(self) -> Self {
        match self {
            Symmetry::Even => Symmetry::Odd,
            Symmetry::Odd => Symmetry::Even,
        }
    }
}

/// How a wavelet was derived from the Gaussian: `order`-th derivative,
/// optionally followed by the Hilbert transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WaveletSpec {
    pub order: u32,
    pub hilbert: bool,
}

impl WaveletSpec {
    pub const fn gauss(order: u32) -> Self {
        WaveletSpec {
            order,
            hilbert: false,
        }
    }

    pub const fn hilbert_gauss(order: u32) -> Self {
        WaveletSpec {
            order,
            hilbert: true,
        }
    }

    pub fn symmetry(&self) -> Symmetry {
        let base = if self.order.is_multiple_of(2) {
            Symmetry::Even
        } else {
            Symmetry::Odd
        };
        if self.hilbert {
            base.flipped()
        } else {
            base
        }
    }

    /// Tabulates the L1-normalized wavelet on `grid`.
    pub fn build(&self, grid: SampleGrid) -> Result<Wavelet1D> {
        let g = gaussian_derivative(self.order, grid)?;
        let g = if self.hilbert { hilbert_transform(&g) } else { g };
        l1_normalize(&g)
    }
}

impl fmt::Display for WaveletSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.hilbert {
            write!(f, "HG{}", self.order)
        } else {
            write!(f, "G{}", self.order)
        }
    }
}

impl std::str::FromStr for WaveletSpec {
    type Err = String;
    /// `G<k>` or `HG<k>`, case-insensitive.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let u = s.trim().to_ascii_uppercase();
        let (hilbert, rest) = match u.strip_prefix("HG") {
            Some(r) => (true, r),
            None => (false, u.strip_prefix('G').ok_or_else(|| format!("wavelet '{s}' is not G<k> or HG<k>"))?),
        };
        let order = rest
            .parse()
            .map_err(|_| format!("wavelet '{s}' has no derivative order"))?;
        Ok(WaveletSpec { order, hilbert })
    }
}

/// An odd/even pair of wavelets used together by one detector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WaveletPair {
    pub odd: WaveletSpec,
    pub even: WaveletSpec,
}

impl WaveletPair {
    /// `psi_o = G_1`, `psi_e = H G_1`.
    pub const FIRST_DERIVATIVE: WaveletPair = WaveletPair {
        odd: WaveletSpec::gauss(1),
        even: WaveletSpec::hilbert_gauss(1),
    };

    /// `psi_e = G_2`, `psi_o = H G_2`.
    pub const SECOND_DERIVATIVE: WaveletPair = WaveletPair {
        odd: WaveletSpec::hilbert_gauss(2),
        even: WaveletSpec::gauss(2),
    };

    pub fn validate(&self) -> Result<()> {
        if self.odd.symmetry() != Symmetry::Odd {
            return Err(Error::config(format!("{} is not odd-symmetric", self.odd)));
        }
        if self.even.symmetry() != Symmetry::Even {
            return Err(Error::config(format!("{} is not even-symmetric", self.even)));
        }
        Ok(())
    }
}

impl Default for WaveletPair {
    fn default() -> Self {
        WaveletPair::FIRST_DERIVATIVE
    }
}

/// Uniform periodic sampling of `[-half_width, half_width)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleGrid {
    pub half_width: f64,
    pub len: usize,
}

impl SampleGrid {
    pub fn new(half_width: f64, len: usize) -> Result<Self> {
        if !(half_width > 0.0) || len < 8 || !len.is_multiple_of(2) {
            return Err(Error::config(format!(
                "sample grid needs half_width > 0 and an even length >= 8, got ({half_width}, {len})"
            )));
        }
        Ok(SampleGrid { half_width, len })
    }

    #[inline]
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.len as f64
    }

    #[inline]
    pub fn origin(&self) -> usize {
        self.len / 2
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        (i as f64 - self.origin() as f64) * self.spacing()
    }

    #[inline]
    pub fn mirror(&self, i: usize) -> usize {
        (self.len - i) % self.len
    }
}

impl Default for SampleGrid {
    /// `[-8, 8)` with 1024 samples.
    fn default() -> Self {
        SampleGrid {
            half_width: 8.0,
            len: 1024,
        }
    }
}

/// A sampled 1D wavelet.
#[derive(Debug, Clone, PartialEq)]
pub struct Wavelet1D {
    samples: Vec<f64>,
    grid: SampleGrid,
    symmetry: Symmetry,
    spec: WaveletSpec,
    l1_normalized: bool,
}

impl Wavelet1D {
    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn grid(&self) -> SampleGrid {
        self.grid
    }

    pub fn spacing(&self) -> f64 {
        self.grid.spacing()
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn spec(&self) -> WaveletSpec {
        self.spec
    }

    pub fn is_l1_normalized(&self) -> bool {
        self.l1_normalized
    }

    pub fn abscissae(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.grid.len).map(|i| self.grid.x(i))
    }

    pub fn l1_norm(&self) -> f64 {
        self.samples.iter().map(|v| v.abs()).sum::<f64>() * self.spacing()
    }

    pub fn l2_norm(&self) -> f64 {
        (self.samples.iter().map(|v| v * v).sum::<f64>() * self.spacing()).sqrt()
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() * self.spacing()
    }

    /// Largest deviation from the tagged symmetry, relative to `max |sample|`.
    pub fn symmetry_defect(&self) -> f64 {
        let peak = self.samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if peak == 0.0 {
            return 0.0;
        }
        let sign = match self.symmetry {
            Symmetry::Even => 1.0,
            Symmetry::Odd => -1.0,
        };
        (0..self.grid.len)
            .map(|i| (self.samples[i] - sign * self.samples[self.grid.mirror(i)]).abs())
            .fold(0.0, f64::max)
            / peak
    }

    /// Linear interpolation of the table; zero outside the sampled range.
    pub fn eval(&self, x: f64) -> f64 {
        let h = self.spacing();
        let t = x / h + self.grid.origin() as f64;
        if !(t >= 0.0) || t > (self.grid.len - 1) as f64 {
            return 0.0;
        }
        let i = t.floor() as usize;
        if i + 1 >= self.grid.len {
            return self.samples[self.grid.len - 1];
        }
        let f = t - i as f64;
        self.samples[i] * (1.0 - f) + self.samples[i + 1] * f
    }

    /// Smallest radius `R` such that the L1 mass outside `[-R, R]` is at most
    /// `tol` times the total L1 mass.
    pub fn support_radius(&self, tol: f64) -> f64 {
        let total: f64 = self.samples.iter().map(|v| v.abs()).sum();
        if total == 0.0 {
            return 0.0;
        }
        let o = self.grid.origin();
        let s = &self.samples;
        let mut inside = s[o].abs();
        for m in 0..o {
            if total - inside <= tol * total {
                return m as f64 * self.spacing();
            }
            inside += s[o - m - 1].abs() + s.get(o + m + 1).map_or(0.0, |v| v.abs());
        }
        self.grid.half_width
    }

    /// Continuous Fourier transform `int psi(x) exp(-2 pi i x xi) dx` by quadrature.
    pub fn fourier(&self, xi: f64) -> Complex64 {
        let h = self.spacing();
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, &s) in self.samples.iter().enumerate() {
            if s == 0.0 {
                continue;
            }
            let phase = -2.0 * std::f64::consts::PI * self.grid.x(i) * xi;
            acc += Complex64::from_polar(s, phase);
        }
        acc * h
    }
}

/// Evaluates the physicists' Hermite polynomial `H_k(x)`.
pub fn hermite(k: u32, x: f64) -> f64 {
    let mut prev = 1.0;
    if k == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for n in 1..k {
        let next = 2.0 * x * cur - 2.0 * f64::from(n) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `G_k(x) = (-1)^k H_k(x) exp(-x^2)`, the k-th derivative of `exp(-x^2)`.
pub fn gaussian_derivative_value(k: u32, x: f64) -> f64 {
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * hermite(k, x) * (-x * x).exp()
}

/// Samples `G_k` on `grid` (not normalized).
pub fn gaussian_derivative(k: u32, grid: SampleGrid) -> Result<Wavelet1D> {
    let edge = gaussian_derivative_value(k, -grid.half_width).abs();
    if edge >= TRUNCATION_TOLERANCE {
        return Err(Error::Truncation {
            tail: edge,
            tolerance: TRUNCATION_TOLERANCE,
        });
    }
    let samples = (0..grid.len)
        .map(|i| gaussian_derivative_value(k, grid.x(i)))
        .collect();
    Ok(Wavelet1D {
        samples,
        grid,
        symmetry: WaveletSpec::gauss(k).symmetry(),
        spec: WaveletSpec::gauss(k),
        l1_normalized: false,
    })
}

/// Discrete Hilbert transform via the DFT multiplier `-i sgn(xi)`.
///
/// The DC and Nyquist bins are set to zero, which keeps the output real and
/// makes the map an isometry on zero-mean inputs.
pub fn hilbert_transform(w: &Wavelet1D) -> Wavelet1D {
    let n = w.grid.len;
    let mean = w.mean();
    if mean.abs() > 1e-8 * w.l1_norm().max(f64::MIN_POSITIVE) {
        log::warn!(
            "Hilbert transform of a wavelet with nonzero mean {mean:.3e}: output need not be integrable"
        );
    }
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let mut buf: Vec<Complex64> = w.samples.iter().map(|&s| Complex64::new(s, 0.0)).collect();
    fwd.process(&mut buf);
    let half = n / 2;
    for (m, z) in buf.iter_mut().enumerate() {
        *z = if m == 0 || m == half {
            Complex64::new(0.0, 0.0)
        } else if m < half {
            // -i * z
            Complex64::new(z.im, -z.re)
        } else {
            // +i * z
            Complex64::new(-z.im, z.re)
        };
    }
    inv.process(&mut buf);
    let scale = 1.0 / n as f64;
    Wavelet1D {
        samples: buf.iter().map(|z| z.re * scale).collect(),
        grid: w.grid,
        symmetry: w.symmetry.flipped(),
        spec: WaveletSpec {
            order: w.spec.order,
            hilbert: !w.spec.hilbert,
        },
        l1_normalized: false,
    }
}

/// Rescales so that `sum |samples| * h = 1`.
pub fn l1_normalize(w: &Wavelet1D) -> Result<Wavelet1D> {
    let norm = w.l1_norm();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::InvalidWavelet("wavelet has zero L1 norm".into()));
    }
    Ok(Wavelet1D {
        samples: w.samples.iter().map(|s| s / norm).collect(),
        l1_normalized: true,
        ..w.clone()
    })
}

/// Cumulative table `r -> K(r) = int_{-r}^{r} psi_e`.
///
/// Between samples the wavelet is taken as piecewise linear and integrated
/// exactly, so `K` is continuous and piecewise quadratic.
#[derive(Debug, Clone, PartialEq)]
pub struct EvenIntegralTable {
    step: f64,
    values: Vec<f64>,
    /// `psi(r_m) + psi(-r_m)` at the table abscissae.
    integrand: Vec<f64>,
}

impl EvenIntegralTable {
    fn from_wavelet(w: &Wavelet1D) -> Self {
        let h = w.spacing();
        let o = w.grid.origin();
        let s = &w.samples;
        // the sample right of the last one wraps around to -L
        let integrand: Vec<f64> = (0..=o)
            .map(|m| s[(o + m) % s.len()] + s[o - m])
            .collect();
        let mut values = Vec::with_capacity(o + 1);
        values.push(0.0);
        for m in 1..=o {
            values.push(values[m - 1] + 0.5 * h * (integrand[m - 1] + integrand[m]));
        }
        EvenIntegralTable {
            step: h,
            values,
            integrand,
        }
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max_radius(&self) -> f64 {
        (self.values.len() - 1) as f64 * self.step
    }

    /// `K(r)`; negative radii are mirrored, radii past the table are clamped.
    pub fn eval(&self, r: f64) -> f64 {
        let t = r.abs() / self.step;
        let last = self.values.len() - 1;
        if t >= last as f64 {
            return self.values[last];
        }
        let i = t.floor() as usize;
        let d = (t - i as f64) * self.step;
        let (q0, q1) = (self.integrand[i], self.integrand[i + 1]);
        self.values[i] + q0 * d + (q1 - q0) * d * d / (2.0 * self.step)
    }
}

/// Analytic constants of a normalized wavelet.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletConstants {
    /// `int_{-inf}^0 psi_o`; the odd coefficient of a unit ideal edge.
    pub k_odd: Option<f64>,
    /// `argmax_r |K(r)|`, half the width of the best-matching ideal ridge.
    pub radius: Option<f64>,
    /// `r -> int_{-r}^{r} psi_e`.
    pub k_even: Option<EvenIntegralTable>,
}

impl WaveletConstants {
    pub fn k_odd(&self) -> Result<f64> {
        self.k_odd
            .ok_or_else(|| Error::config("odd-wavelet constant requested from an even wavelet"))
    }

    pub fn radius(&self) -> Result<f64> {
        self.radius
            .ok_or_else(|| Error::config("radius requested from an odd wavelet"))
    }

    pub fn k_even(&self) -> Result<&EvenIntegralTable> {
        self.k_even
            .as_ref()
            .ok_or_else(|| Error::config("even integral requested from an odd wavelet"))
    }
}

/// Computes `K_psi_o` for odd wavelets and `(radius, K table)` for even ones.
pub fn wavelet_constants(w: &Wavelet1D) -> Result<WaveletConstants> {
    if !w.l1_normalized {
        return Err(Error::InvalidWavelet(
            "constants require an L1-normalized wavelet".into(),
        ));
    }
    match w.symmetry {
        Symmetry::Odd => {
            let h = w.spacing();
            let o = w.grid.origin();
            let k = (w.samples[..o].iter().sum::<f64>() + 0.5 * w.samples[o]) * h;
            Ok(WaveletConstants {
                k_odd: Some(k),
                radius: None,
                k_even: None,
            })
        }
        Symmetry::Even => {
            let table = EvenIntegralTable::from_wavelet(w);
            let radius = refine_radius(&table)?;
            Ok(WaveletConstants {
                k_odd: None,
                radius: Some(radius),
                k_even: Some(table),
            })
        }
    }
}

fn refine_radius(table: &EvenIntegralTable) -> Result<f64> {
    let v = table.values();
    let mut best = 0;
    for (m, k) in v.iter().enumerate() {
        if k.abs() > v[best].abs() {
            best = m;
        }
    }
    if best == v.len() - 1 {
        return Err(Error::Numeric(
            "radius search reached the grid boundary; widen the sample grid".into(),
        ));
    }
    if best == 0 {
        return Err(Error::InvalidWavelet(
            "even wavelet has no positive-radius maximum".into(),
        ));
    }
    let h = table.step();
    let xs = [
        (best - 1) as f64 * h,
        best as f64 * h,
        (best + 1) as f64 * h,
    ];
    let ys = [v[best - 1].abs(), v[best].abs(), v[best + 1].abs()];
    parabola_refine(xs, ys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid() -> SampleGrid {
        SampleGrid::default()
    }

    #[test]
    fn g0_at_origin_is_one() {
        let g = gaussian_derivative(0, grid()).unwrap();
        assert_eq!(g.samples()[grid().origin()], 1.0);
        assert_eq!(g.symmetry(), Symmetry::Even);
    }

    #[test]
    fn g1_matches_closed_form() {
        let g = gaussian_derivative(1, grid()).unwrap();
        for (x, v) in g.abscissae().zip(g.samples()) {
            assert!((v - (-2.0 * x * (-x * x).exp())).abs() < 1e-15);
        }
        assert_eq!(g.samples()[grid().origin()], 0.0);
    }

    #[test]
    fn g2_vanishes_at_hermite_roots() {
        let r = 1.0 / 2f64.sqrt();
        assert!(gaussian_derivative_value(2, r).abs() < 1e-15);
        assert!(gaussian_derivative_value(2, -r).abs() < 1e-15);
    }

    #[test]
    fn narrow_grid_is_a_truncation_error() {
        let narrow = SampleGrid::new(3.0, 256).unwrap();
        assert!(matches!(
            gaussian_derivative(2, narrow),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn sampled_spectrum_matches_closed_form() {
        let g = grid();
        let n = g.len;
        let h = g.spacing();
        for k in 1..=4u32 {
            let w = gaussian_derivative(k, g).unwrap();
            let mut buf: Vec<Complex64> =
                w.samples().iter().map(|&s| Complex64::new(s, 0.0)).collect();
            FftPlanner::new().plan_fft_forward(n).process(&mut buf);
            for (m, z) in buf.iter().enumerate().take(n / 2).skip(1) {
                let xi = m as f64 / (n as f64 * h);
                let exact = Complex64::new(0.0, 2.0 * PI * xi).powu(k)
                    * PI.sqrt()
                    * (-PI * PI * xi * xi).exp();
                if exact.norm() < 1e-3 {
                    continue;
                }
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                let approx = z * h * sign;
                assert!(
                    (approx - exact).norm() / exact.norm() < 1e-6,
                    "k={k} m={m}: {approx} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn hilbert_flips_symmetry_and_preserves_energy() {
        for k in 1..=4u32 {
            let g = gaussian_derivative(k, grid()).unwrap();
            let hg = hilbert_transform(&g);
            assert_eq!(hg.symmetry(), g.symmetry().flipped());
            assert!(hg.symmetry_defect() < 1e-10, "k={k}");
            assert!((hg.l2_norm() - g.l2_norm()).abs() < 1e-8);
            let back = hilbert_transform(&hg);
            for (a, b) in back.samples().iter().zip(g.samples()) {
                assert!((a + b).abs() < 1e-8);
            }
            assert!(hg.mean().abs() < 1e-8);
        }
    }

    #[test]
    fn l1_norm_of_g1_is_two() {
        let g = gaussian_derivative(1, SampleGrid::new(8.0, 1 << 15).unwrap()).unwrap();
        assert!((g.l1_norm() - 2.0).abs() < 1e-6);
    }

    #[test]
    fn normalization_is_idempotent() {
        let w = WaveletSpec::gauss(1).build(grid()).unwrap();
        let again = l1_normalize(&w).unwrap();
        for (a, b) in w.samples().iter().zip(again.samples()) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!((w.l1_norm() - 1.0).abs() < 1e-8);
        assert!(w.mean().abs() < 1e-8);
    }

    #[test]
    fn zero_wavelet_cannot_be_normalized() {
        let mut w = gaussian_derivative(1, grid()).unwrap();
        w.samples.iter_mut().for_each(|s| *s = 0.0);
        assert!(matches!(l1_normalize(&w), Err(Error::InvalidWavelet(_))));
    }

    #[test]
    fn odd_constant_of_normalized_g1_is_one_half() {
        let w = WaveletSpec::gauss(1).build(grid()).unwrap();
        let c = wavelet_constants(&w).unwrap();
        assert!((c.k_odd.unwrap() - 0.5).abs() < 1e-12);
        assert!(c.radius.is_none());
    }

    #[test]
    fn wavelet_names_parse() {
        assert_eq!("G2".parse::<WaveletSpec>().unwrap(), WaveletSpec::gauss(2));
        assert_eq!("hg1".parse::<WaveletSpec>().unwrap(), WaveletSpec::hilbert_gauss(1));
        assert_eq!(WaveletSpec::hilbert_gauss(3).to_string().parse::<WaveletSpec>().unwrap(), WaveletSpec::hilbert_gauss(3));
        assert!("D1".parse::<WaveletSpec>().is_err());
        assert!("HG".parse::<WaveletSpec>().is_err());
    }

    #[test]
    fn radius_of_g2_is_first_zero_crossing() {
        let w = WaveletSpec::gauss(2).build(grid()).unwrap();
        let c = wavelet_constants(&w).unwrap();
        let r = c.radius.unwrap();
        assert!((r - 1.0 / 2f64.sqrt()).abs() < grid().spacing(), "r = {r}");
        assert_eq!(c.k_even.as_ref().unwrap().eval(0.0), 0.0);
    }

    #[test]
    fn radius_of_hilbert_g1_is_first_zero_crossing() {
        let w = WaveletSpec::hilbert_gauss(1).build(grid()).unwrap();
        let c = wavelet_constants(&w).unwrap();
        let r = c.radius.unwrap();
        // first sign change of the tabulated wavelet on the positive axis
        let o = grid().origin();
        let s = w.samples();
        let m = (o..s.len() - 1)
            .find(|&i| s[i].signum() != s[i + 1].signum())
            .unwrap();
        let x0 = grid().x(m) + grid().spacing() * s[m] / (s[m] - s[m + 1]);
        assert!((r - x0).abs() < grid().spacing(), "r = {r}, zero = {x0}");
    }

    #[test]
    fn even_table_maximum_is_at_radius() {
        let w = WaveletSpec::gauss(2).build(grid()).unwrap();
        let c = wavelet_constants(&w).unwrap();
        let t = c.k_even.unwrap();
        let at_r = t.eval(c.radius.unwrap()).abs();
        let peak = t.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(at_r >= peak - 1e-9, "{at_r} vs {peak}");
    }

    #[test]
    fn constants_require_normalization() {
        let g = gaussian_derivative(1, grid()).unwrap();
        assert!(wavelet_constants(&g).is_err());
    }

    #[test]
    fn pair_validation_checks_symmetry() {
        WaveletPair::FIRST_DERIVATIVE.validate().unwrap();
        WaveletPair::SECOND_DERIVATIVE.validate().unwrap();
        let bad = WaveletPair {
            odd: WaveletSpec::gauss(2),
            even: WaveletSpec::gauss(2),
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn support_radius_of_gaussian_derivative_is_small() {
        let w = WaveletSpec::gauss(1).build(grid()).unwrap();
        let r = w.support_radius(1e-9);
        assert!(r > 3.0 && r < 6.0, "r = {r}");
    }
}
