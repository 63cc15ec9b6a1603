use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::transform::CoefficientStack;

use super::ridge::refined_exponent;
use super::{
    argmax_abs, check_pair, noise_floor, clamp_unit, BlobSymmetry, FeatureKind, FeatureResult, MeasureParams,
};

/// Blob measure from an isotropic even-even stack and its offset odd companion.
pub fn blob_measure(
    even: &CoefficientStack,
    odd: &CoefficientStack,
    params: &MeasureParams,
) -> Result<FeatureResult> {
    params.validate()?;
    check_pair(even, odd)?;
    for s in [even, odd] {
        if s.params().alpha != 1.0 {
            return Err(Error::config(format!(
                "blob measures need isotropic scaling (alpha = 1), got alpha = {}",
                s.params().alpha
            )));
        }
    }
    let n_j = even.n_scales();
    if n_j < 3 {
        return Err(Error::config(format!("blob measures need at least 3 scales, got {n_j}")));
    }
    let constants = even.constants();
    let table = constants.k_even()?;
    let radius = constants.radius()?;
    let floor = noise_floor(even);
    let eps = params.epsilon_for(&[even, odd]);
    let bp = even.params();
    let n_o = even.n_orientations();
    let (w, h) = (even.width(), even.height());

    struct Px {
        measure: f64,
        width: f64,
        height: f64,
        j: usize,
        t: usize,
    }

    let pixels: Vec<Px> = (0..w * h)
        .into_par_iter()
        .map(|p| {
            let (j_star, t_star, e_star) = argmax_abs(even, p, floor);
            let sign = if e_star < 0.0 { -1.0 } else { 1.0 };
            let e_ref = refined_exponent(even, j_star, t_star, p, sign);
            let width = 2.0 * radius / (bp.c1 * bp.a.powf(e_ref));
            // square of side `width` against the separable generator
            let expected = |j: usize| {
                let s = bp.dilation(j);
                table.eval(bp.c1 * s * width / 2.0) * table.eval(bp.c2 * s * width / 2.0)
            };
            let k_star = expected(j_star);
            let height = if k_star != 0.0 { e_star / k_star } else { 0.0 };
            let hsign = if height < 0.0 { -1.0 } else { 1.0 };
            let subset: Vec<usize> = match params.blob_symmetry {
                BlobSymmetry::Circle => (0..n_o).collect(),
                BlobSymmetry::Square if n_o.is_multiple_of(2) => vec![t_star, (t_star + n_o / 2) % n_o],
                BlobSymmetry::Square => vec![t_star],
            };
            let mut num = 0.0;
            let mut den = 0.0;
            for j in 0..n_j {
                let min_even = subset
                    .iter()
                    .map(|&t| hsign * even.at(j, t, p))
                    .fold(f64::INFINITY, f64::min);
                let max_odd = subset
                    .iter()
                    .map(|&t| odd.at(j, t, p).abs())
                    .fold(0.0, f64::max);
                num += min_even - max_odd;
                den += even.at(j, t_star, p).abs().max(height.abs() * expected(j).abs());
            }
            num -= params.beta * n_j as f64 * k_star.abs();
            let measure = if params.polarity.admits(height) {
                clamp_unit(num / (den + eps))
            } else {
                0.0
            };
            Px {
                measure,
                width,
                height,
                j: j_star,
                t: t_star,
            }
        })
        .collect();

    let pick = |f: &dyn Fn(&Px) -> f64| Grid::from_vec(w, h, pixels.iter().map(f).collect());
    Ok(FeatureResult {
        kind: FeatureKind::Blob,
        measure: pick(&|p| p.measure)?,
        orientation: None,
        width: Some(pick(&|p| p.width)?),
        height: pick(&|p| p.height)?,
        scale_index: Grid::from_vec(w, h, pixels.iter().map(|p| p.j).collect())?,
        orientation_index: Grid::from_vec(w, h, pixels.iter().map(|p| p.t).collect())?,
        band: None,
    })
}
