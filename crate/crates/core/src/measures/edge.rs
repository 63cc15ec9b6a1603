use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::Result;
use crate::grid::Grid;
use crate::transform::CoefficientStack;

use super::{
    argmax_abs, check_pair, noise_floor, clamp_unit, refine_orientation, wrap_half_turn, FeatureKind,
    FeatureResult, MeasureParams,
};

/// Edge measure from an odd stack and its offset even companion.
pub fn edge_measure(
    odd: &CoefficientStack,
    even: &CoefficientStack,
    params: &MeasureParams,
) -> Result<FeatureResult> {
    params.validate()?;
    check_pair(odd, even)?;
    let k_odd = odd.constants().k_odd()?;
    let floor = noise_floor(odd);
    let eps = params.epsilon_for(&[odd, even]);
    let n_j = odd.n_scales();
    let (w, h) = (odd.width(), odd.height());

    struct Px {
        measure: f64,
        tangent: f64,
        height: f64,
        j: usize,
        t: usize,
    }

    let pixels: Vec<Px> = (0..w * h)
        .into_par_iter()
        .map(|p| {
            let (j_star, t_star, o_star) = argmax_abs(odd, p, floor);
            let mut odd_sum = 0.0;
            let mut even_abs = 0.0;
            for j in 0..n_j {
                odd_sum += odd.at(j, t_star, p);
                even_abs += even.at(j, t_star, p).abs();
            }
            let nj = n_j as f64;
            let num = odd_sum.abs() - even_abs - params.beta * nj * k_odd;
            let den = nj * o_star.abs() + eps;
            let height = o_star / k_odd;
            let measure = if params.polarity.admits(height) {
                clamp_unit(num / den)
            } else {
                0.0
            };
            let tangent = if odd.n_orientations() >= 3 {
                refine_orientation(odd, j_star, t_star, p)
            } else {
                odd.params().orientations[t_star]
            };
            Px {
                measure,
                tangent: wrap_half_turn(tangent + PI / 2.0),
                height,
                j: j_star,
                t: t_star,
            }
        })
        .collect();

    let pick = |f: &dyn Fn(&Px) -> f64| Grid::from_vec(w, h, pixels.iter().map(f).collect());
    Ok(FeatureResult {
        kind: FeatureKind::Edge,
        measure: pick(&|p| p.measure)?,
        orientation: Some(pick(&|p| p.tangent)?),
        width: None,
        height: pick(&|p| p.height)?,
        scale_index: Grid::from_vec(w, h, pixels.iter().map(|p| p.j).collect())?,
        orientation_index: Grid::from_vec(w, h, pixels.iter().map(|p| p.t).collect())?,
        band: None,
    })
}
