//! Two-dimensional FFTs on row-major buffers.
//!
//! Forward spectra are kept in transposed (column-major) layout, which is all
//! the pointwise products need and saves one transpose per direction.

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Smallest `m >= n` whose only prime factors are 2, 3 and 5.
pub(crate) fn next_smooth(n: usize) -> usize {
    let mut m = n.max(1);
    loop {
        let mut r = m;
        for p in [2, 3, 5] {
            while r.is_multiple_of(p) {
                r /= p;
            }
        }
        if r == 1 {
            return m;
        }
        m += 1;
    }
}

pub(crate) struct Fft2 {
    width: usize,
    height: usize,
    row_fwd: Arc<dyn Fft<f64>>,
    row_inv: Arc<dyn Fft<f64>>,
    col_fwd: Arc<dyn Fft<f64>>,
    col_inv: Arc<dyn Fft<f64>>,
}

impl Fft2 {
    pub(crate) fn new(width: usize, height: usize) -> Self {
        let mut planner = FftPlanner::new();
        Fft2 {
            width,
            height,
            row_fwd: planner.plan_fft_forward(width),
            row_inv: planner.plan_fft_inverse(width),
            col_fwd: planner.plan_fft_forward(height),
            col_inv: planner.plan_fft_inverse(height),
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.width * self.height
    }

    /// Forward transform of a row-major buffer; returns the transposed spectrum.
    ///
    /// Only the rows listed in `rows` may be nonzero; the others are skipped.
    pub(crate) fn forward(&self, data: &mut [Complex64], rows: Option<&[usize]>) -> Vec<Complex64> {
        let (w, h) = (self.width, self.height);
        match rows {
            Some(rows) => {
                for &r in rows {
                    self.row_fwd.process(&mut data[r * w..(r + 1) * w]);
                }
            }
            None => self.row_fwd.process(data),
        }
        let mut t = vec![Complex64::new(0.0, 0.0); w * h];
        transpose(data, &mut t, w, h);
        self.col_fwd.process(&mut t);
        t
    }

    /// Inverse of [`Fft2::forward`], unnormalized, writing the row-major result into `out`.
    ///
    /// Only rows `keep` of the output are transformed along the row axis.
    pub(crate) fn inverse(
        &self,
        spectrum: &mut [Complex64],
        out: &mut [Complex64],
        keep: std::ops::Range<usize>,
    ) {
        let (w, h) = (self.width, self.height);
        self.col_inv.process(spectrum);
        transpose(spectrum, out, h, w);
        self.row_inv.process(&mut out[keep.start * w..keep.end * w]);
    }
}

/// Transposes a row-major `h x w` matrix into a row-major `w x h` matrix.
fn transpose(src: &[Complex64], dst: &mut [Complex64], w: usize, h: usize) {
    const B: usize = 32;
    for r0 in (0..h).step_by(B) {
        for c0 in (0..w).step_by(B) {
            for r in r0..(r0 + B).min(h) {
                for c in c0..(c0 + B).min(w) {
                    dst[c * h + r] = src[r * w + c];
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_sizes() {
        assert_eq!(next_smooth(1), 1);
        assert_eq!(next_smooth(7), 8);
        assert_eq!(next_smooth(97), 100);
        assert_eq!(next_smooth(1031), 1080);
    }

    #[test]
    fn round_trip() {
        let (w, h) = (12, 10);
        let f = Fft2::new(w, h);
        let orig: Vec<Complex64> = (0..w * h)
            .map(|i| Complex64::new((i as f64).sin(), (i as f64 * 0.3).cos()))
            .collect();
        let mut buf = orig.clone();
        let mut spec = f.forward(&mut buf, None);
        let mut out = vec![Complex64::new(0.0, 0.0); w * h];
        f.inverse(&mut spec, &mut out, 0..h);
        for (a, b) in out.iter().zip(&orig) {
            assert!((a / f.len() as f64 - b).norm() < 1e-12);
        }
    }

    #[test]
    fn sparse_rows_match_dense() {
        let (w, h) = (8, 6);
        let f = Fft2::new(w, h);
        let mut dense = vec![Complex64::new(0.0, 0.0); w * h];
        for c in 0..w {
            dense[w + c] = Complex64::new(c as f64, 1.0);
            dense[4 * w + c] = Complex64::new(-1.0, c as f64);
        }
        let mut sparse = dense.clone();
        let a = f.forward(&mut dense, None);
        let b = f.forward(&mut sparse, Some(&[1, 4]));
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-12);
        }
    }
}
