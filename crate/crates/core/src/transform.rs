//! Coefficient stacks `<f, m_{j,theta,y}>` computed by FFT correlation.

use rayon::prelude::*;
use rustfft::num_complex::Complex64;

use crate::bank::{BankParams, Filter2D, MoleculeBank};
use crate::error::{Error, Result};
use crate::fft::{next_smooth, Fft2};
use crate::grid::ImageGrid;
use crate::wavelets::{WaveletConstants, WaveletSpec};

/// Per-pixel coefficients of one bank, stored slice by slice in `(j, theta)` order.
#[derive(Debug, Clone)]
pub struct CoefficientStack {
    n_scales: usize,
    n_orientations: usize,
    width: usize,
    height: usize,
    data: Vec<f64>,
    params: BankParams,
    constants: WaveletConstants,
    wavelet: WaveletSpec,
}

impl CoefficientStack {
    pub fn n_scales(&self) -> usize {
        self.n_scales
    }

    pub fn n_orientations(&self) -> usize {
        self.n_orientations
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn params(&self) -> &BankParams {
        &self.params
    }

    pub fn constants(&self) -> &WaveletConstants {
        &self.constants
    }

    pub fn wavelet(&self) -> WaveletSpec {
        self.wavelet
    }

    #[inline]
    pub fn slice(&self, j: usize, t: usize) -> &[f64] {
        let n = self.width * self.height;
        let k = j * self.n_orientations + t;
        &self.data[k * n..(k + 1) * n]
    }

    /// Coefficient at scale `j`, orientation `t` and flat pixel index `p`.
    #[inline]
    pub fn at(&self, j: usize, t: usize, p: usize) -> f64 {
        let n = self.width * self.height;
        self.data[(j * self.n_orientations + t) * n + p]
    }

    pub fn get(&self, j: usize, t: usize, x: usize, y: usize) -> f64 {
        self.at(j, t, y * self.width + x)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn same_layout(&self, other: &CoefficientStack) -> bool {
        self.n_scales == other.n_scales
            && self.n_orientations == other.n_orientations
            && self.width == other.width
            && self.height == other.height
    }

    fn empty_like(bank: &MoleculeBank, width: usize, height: usize) -> Self {
        CoefficientStack {
            n_scales: bank.n_scales(),
            n_orientations: bank.n_orientations(),
            width,
            height,
            data: vec![0.0; bank.filters().len() * width * height],
            params: bank.params().clone(),
            constants: bank.constants().clone(),
            wavelet: bank.wavelet(),
        }
    }
}

/// Half-sample symmetric reflection of index `i` into `0..n`.
#[inline]
pub fn reflect(i: isize, n: usize) -> usize {
    let period = 2 * n as isize;
    let m = i.rem_euclid(period);
    if m >= n as isize {
        (period - 1 - m) as usize
    } else {
        m as usize
    }
}

/// Analyzes `f` with one bank.
pub fn analyze(f: &ImageGrid, bank: &MoleculeBank) -> Result<CoefficientStack> {
    Ok(analyze_banks(f, &[bank])?.remove(0))
}

/// Analyzes `f` with several banks, sharing one forward transform of the padded image.
pub fn analyze_banks(f: &ImageGrid, banks: &[&MoleculeBank]) -> Result<Vec<CoefficientStack>> {
    let (w, h) = (f.width(), f.height());
    if w == 0 || h == 0 {
        return Err(Error::Dimension("cannot analyze an empty image".into()));
    }
    let pad = banks.iter().map(|b| b.max_half()).max().unwrap_or(0);
    let pw = next_smooth(w + 2 * pad);
    let ph = next_smooth(h + 2 * pad);
    let plan = Fft2::new(pw, ph);

    let mut padded = vec![Complex64::new(0.0, 0.0); pw * ph];
    for r in 0..ph {
        let sy = reflect(r as isize - pad as isize, h);
        for c in 0..pw {
            let sx = reflect(c as isize - pad as isize, w);
            padded[r * pw + c] = Complex64::new(*f.get(sx, sy), 0.0);
        }
    }
    let image_spectrum = plan.forward(&mut padded, None);
    drop(padded);

    let ctx = Context {
        plan: &plan,
        spectrum: &image_spectrum,
        pad,
        width: w,
        height: h,
        pw,
        ph,
    };
    banks
        .iter()
        .map(|bank| {
            let mut stack = CoefficientStack::empty_like(bank, w, h);
            let n = w * h;
            let filters = bank.filters();
            stack
                .data
                .par_chunks_mut(2 * n)
                .enumerate()
                .for_each(|(k, out)| {
                    let second = filters.get(2 * k + 1);
                    ctx.correlate_pair(&filters[2 * k], second, out);
                });
            Ok(stack)
        })
        .collect()
}

struct Context<'a> {
    plan: &'a Fft2,
    spectrum: &'a [Complex64],
    pad: usize,
    width: usize,
    height: usize,
    pw: usize,
    ph: usize,
}

impl Context<'_> {
    /// Correlates the image with `a` (and `b`, packed into the imaginary part).
    fn correlate_pair(&self, a: &Filter2D, b: Option<&Filter2D>, out: &mut [f64]) {
        let (pw, ph) = (self.pw, self.ph);
        let mut kernel = vec![Complex64::new(0.0, 0.0); pw * ph];
        let half = a.half().max(b.map_or(0, Filter2D::half)) as isize;
        let place = |kernel: &mut [Complex64], f: &Filter2D, imag: bool| {
            let hf = f.half() as isize;
            for dr in -hf..=hf {
                let r = (-dr).rem_euclid(ph as isize) as usize;
                for dc in -hf..=hf {
                    let c = (-dc).rem_euclid(pw as isize) as usize;
                    let v = f.at(dc, dr);
                    if imag {
                        kernel[r * pw + c].im = v;
                    } else {
                        kernel[r * pw + c].re = v;
                    }
                }
            }
        };
        place(&mut kernel, a, false);
        if let Some(b) = b {
            place(&mut kernel, b, true);
        }
        let rows: Vec<usize> = (-half..=half)
            .map(|dr| (-dr).rem_euclid(ph as isize) as usize)
            .collect();
        let mut spec = self.plan.forward(&mut kernel, Some(&rows));
        for (k, s) in spec.iter_mut().zip(self.spectrum) {
            *k *= s;
        }
        self.plan
            .inverse(&mut spec, &mut kernel, self.pad..self.pad + self.height);
        let scale = 1.0 / self.plan.len() as f64;
        let n = self.width * self.height;
        for y in 0..self.height {
            let row = &kernel[(y + self.pad) * pw + self.pad..][..self.width];
            for (x, z) in row.iter().enumerate() {
                out[y * self.width + x] = z.re * scale;
                if b.is_some() {
                    out[n + y * self.width + x] = z.im * scale;
                }
            }
        }
    }
}

/// Brute-force sliding-window correlation with the same reflective boundary.
pub fn correlate_direct(f: &ImageGrid, filter: &Filter2D) -> ImageGrid {
    let (w, h) = (f.width(), f.height());
    let hf = filter.half() as isize;
    ImageGrid::from_fn(w, h, |x, y| {
        let mut acc = 0.0;
        for dr in -hf..=hf {
            let sy = reflect(y as isize + dr, h);
            for dc in -hf..=hf {
                let sx = reflect(x as isize + dc, w);
                acc += f.get(sx, sy) * filter.at(dc, dr);
            }
        }
        acc
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bank::{build_bank, make_generator_2d, uniform_orientations, GeneratorKind};
    use crate::wavelets::{SampleGrid, WaveletSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bank(kind: GeneratorKind, spec: WaveletSpec, c1: f64, n_o: usize, alpha: f64) -> MoleculeBank {
        let w = spec.build(SampleGrid::default()).unwrap();
        let params = BankParams {
            alpha,
            a: 2f64.sqrt(),
            scales: vec![0, 1, 2],
            scale_offset: 0.0,
            orientations: uniform_orientations(n_o),
            kind,
            c1,
            c2: 0.6,
            user: None,
        };
        let g = make_generator_2d(kind, &w, params.c1, params.c2).unwrap();
        build_bank(&g, &params).unwrap()
    }

    fn random_image(w: usize, h: usize, seed: u64) -> ImageGrid {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        ImageGrid::from_fn(w, h, |_, _| rng.gen::<f64>())
    }

    #[test]
    fn reflect_indices() {
        let got: Vec<usize> = (-4..9).map(|i| reflect(i, 4)).collect();
        assert_eq!(got, vec![3, 2, 1, 0, 0, 1, 2, 3, 3, 2, 1, 0, 0]);
    }

    #[test]
    fn fft_path_matches_direct() {
        let b = bank(GeneratorKind::OddXGauss, WaveletSpec::gauss(1), 0.6, 4, 0.5);
        let f = random_image(32, 24, 5);
        let s = analyze(&f, &b).unwrap();
        for j in 0..3 {
            for t in 0..4 {
                let d = correlate_direct(&f, b.filter(j, t));
                for (a, e) in s.slice(j, t).iter().zip(d.as_slice()) {
                    assert!((a - e).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn constant_image_has_zero_coefficients() {
        let b = bank(GeneratorKind::EvenXGauss, WaveletSpec::hilbert_gauss(1), 0.6, 4, 0.5);
        let f = ImageGrid::filled(40, 30, 3.0);
        let s = analyze(&f, &b).unwrap();
        assert!(s.max_abs() < 1e-6);
    }

    #[test]
    fn linear_and_contrast_covariant() {
        let b = bank(GeneratorKind::EvenXGauss, WaveletSpec::gauss(2), 0.6, 4, 0.5);
        let f = random_image(20, 20, 1);
        let g = random_image(20, 20, 2);
        let sum = ImageGrid::from_fn(20, 20, |x, y| f.get(x, y) + g.get(x, y));
        let (sf, sg, ss) = (
            analyze(&f, &b).unwrap(),
            analyze(&g, &b).unwrap(),
            analyze(&sum, &b).unwrap(),
        );
        for i in 0..ss.data.len() {
            assert!((ss.data[i] - sf.data[i] - sg.data[i]).abs() < 1e-8);
        }
        let scaled = f.map(|v| 3.0 * v);
        let s3 = analyze(&scaled, &b).unwrap();
        for i in 0..s3.data.len() {
            assert!((s3.data[i] - 3.0 * sf.data[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn shift_covariant_in_the_interior() {
        let b = bank(GeneratorKind::OddXGauss, WaveletSpec::gauss(1), 0.9, 4, 1.0);
        let big = random_image(60, 60, 9);
        let shifted = ImageGrid::from_fn(60, 60, |x, y| *big.get((x + 3).min(59), (y + 2).min(59)));
        let (a, s) = (analyze(&big, &b).unwrap(), analyze(&shifted, &b).unwrap());
        let r = b.max_half();
        for y in r + 2..60 - r - 4 {
            for x in r + 2..60 - r - 5 {
                assert!((s.get(1, 1, x, y) - a.get(1, 1, x + 3, y + 2)).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn shared_transform_matches_separate_calls() {
        let b1 = bank(GeneratorKind::OddXGauss, WaveletSpec::gauss(1), 0.6, 3, 0.5);
        let b2 = bank(GeneratorKind::EvenXGauss, WaveletSpec::hilbert_gauss(1), 0.3, 3, 0.5);
        let f = random_image(25, 31, 3);
        let both = analyze_banks(&f, &[&b1, &b2]).unwrap();
        let one = analyze(&f, &b1).unwrap();
        for (a, e) in both[0].data.iter().zip(&one.data) {
            assert!((a - e).abs() < 1e-10);
        }
        assert_eq!(both[1].n_orientations(), 3);
    }

    #[test]
    fn empty_image_is_rejected() {
        let b = bank(GeneratorKind::OddXGauss, WaveletSpec::gauss(1), 0.6, 2, 0.5);
        let f = ImageGrid::filled(0, 0, 0.0);
        assert!(analyze(&f, &b).is_err());
    }
}
