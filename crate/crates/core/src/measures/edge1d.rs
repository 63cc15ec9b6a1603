use crate::error::{Error, Result};
use crate::transform::reflect;
use crate::wavelets::{wavelet_constants, Symmetry, Wavelet1D};

use super::clamp_unit;

/// One-dimensional edge detector: an odd/even wavelet pair dilated over a set of scales.
#[derive(Debug, Clone)]
pub struct Edge1dConfig {
    pub odd: Wavelet1D,
    pub even: Wavelet1D,
    /// Axis factor; the coarsest filter is `c1 psi(c1 d)`.
    pub c1: f64,
    pub a: f64,
    pub scales: Vec<i32>,
    /// Even filters use dilation exponent `j - even_offset`.
    pub even_offset: f64,
    pub beta: f64,
    pub epsilon: Option<f64>,
}

struct Filter1D {
    half: usize,
    taps: Vec<f64>,
}

fn sample_filter(psi: &Wavelet1D, scale: f64) -> Result<Filter1D> {
    let support = psi.support_radius(1e-6).max(psi.spacing());
    let half = (support / scale).ceil().max(1.0) as usize;
    let mut taps: Vec<f64> = (0..=2 * half)
        .map(|i| scale * psi.eval(scale * (i as f64 - half as f64)))
        .collect();
    let mass: f64 = taps.iter().map(|v| v.abs()).sum();
    if !(mass > 0.0) {
        return Err(Error::Numeric("1D filter sampled to zero".into()));
    }
    let ratio = taps.iter().sum::<f64>() / mass;
    taps.iter_mut().for_each(|v| *v -= ratio * v.abs());
    let mass: f64 = taps.iter().map(|v| v.abs()).sum();
    taps.iter_mut().for_each(|v| *v /= mass);
    Ok(Filter1D { half, taps })
}

fn correlate(signal: &[f64], f: &Filter1D) -> Vec<f64> {
    let n = signal.len();
    let h = f.half as isize;
    (0..n)
        .map(|y| {
            f.taps
                .iter()
                .enumerate()
                .map(|(i, &t)| t * signal[reflect(y as isize + i as isize - h, n)])
                .sum()
        })
        .collect()
}

/// Edge measure of a 1D signal.
pub fn edge_measure_1d(signal: &[f64], cfg: &Edge1dConfig) -> Result<Vec<f64>> {
    if cfg.odd.symmetry() != Symmetry::Odd || cfg.even.symmetry() != Symmetry::Even {
        return Err(Error::config("1D edge measure needs an odd and an even wavelet"));
    }
    if cfg.scales.is_empty() || !(cfg.c1 > 0.0) || !(cfg.a > 1.0) {
        return Err(Error::config("1D edge measure needs scales, c1 > 0 and a > 1"));
    }
    let k_odd = wavelet_constants(&cfg.odd)?.k_odd()?;
    let mut odd = Vec::with_capacity(cfg.scales.len());
    let mut even = Vec::with_capacity(cfg.scales.len());
    for &j in &cfg.scales {
        let fo = sample_filter(&cfg.odd, cfg.c1 * cfg.a.powf(j as f64))?;
        let fe = sample_filter(&cfg.even, cfg.c1 * cfg.a.powf(j as f64 - cfg.even_offset))?;
        let longest = fo.taps.len().max(fe.taps.len());
        if signal.len() < longest {
            return Err(Error::Dimension(format!(
                "signal of length {} is shorter than a {longest}-tap filter",
                signal.len()
            )));
        }
        odd.push(correlate(signal, &fo));
        even.push(correlate(signal, &fe));
    }
    let peak = odd
        .iter()
        .chain(&even)
        .flat_map(|c| c.iter())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let eps = cfg.epsilon.unwrap_or((1e-12 * peak).max(1e-12));
    let nj = cfg.scales.len() as f64;
    Ok((0..signal.len())
        .map(|y| {
            let sum: f64 = odd.iter().map(|c| c[y]).sum();
            let max = odd.iter().map(|c| c[y].abs()).fold(0.0, f64::max);
            let even_abs: f64 = even.iter().map(|c| c[y].abs()).sum();
            clamp_unit((sum.abs() - even_abs - cfg.beta * nj * k_odd) / (nj * max + eps))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavelets::{SampleGrid, WaveletPair};

    fn config(beta: f64) -> Edge1dConfig {
        let pair = WaveletPair::FIRST_DERIVATIVE;
        let grid = SampleGrid::default();
        Edge1dConfig {
            odd: pair.odd.build(grid).unwrap(),
            even: pair.even.build(grid).unwrap(),
            c1: 0.3,
            a: 2f64.sqrt(),
            scales: (0..5).collect(),
            even_offset: 0.0,
            beta,
            epsilon: None,
        }
    }

    fn step(s: f64) -> Vec<f64> {
        (0..256)
            .map(|i| match i {
                i if i < 128 => s,
                128 => s / 2.0,
                _ => 0.0,
            })
            .collect()
    }

    #[test]
    fn step_edge_identity() {
        for &s in &[0.1, 0.5, 1.0] {
            let m = edge_measure_1d(&step(s), &config(0.03)).unwrap();
            assert!((m[128] - (1.0 - 0.03 / s)).abs() < 0.02, "s={s}: {}", m[128]);
        }
    }

    #[test]
    fn jump_equal_to_beta_scores_zero() {
        let m = edge_measure_1d(&step(0.03), &config(0.03)).unwrap();
        assert!(m[128] < 0.02);
    }

    #[test]
    fn constant_signal_scores_zero() {
        let m = edge_measure_1d(&vec![0.4; 200], &config(0.03)).unwrap();
        assert!(m.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn short_signal_is_rejected() {
        assert!(matches!(
            edge_measure_1d(&[0.0; 5], &config(0.03)),
            Err(Error::Dimension(_))
        ));
    }
}
