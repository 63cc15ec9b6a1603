use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::transform::CoefficientStack;
use crate::wavelets::EvenIntegralTable;

use super::{
    argmax_abs, check_pair, noise_floor, clamp_unit, parabola_refine, refine_orientation, wrap_half_turn,
    FeatureKind, FeatureResult, MeasureParams,
};

/// Width estimate from the scale profile `sign * coeff_j` at the most significant orientation.
///
/// Returns the refined dilation exponent; at the first or last scale the
/// unrefined exponent is kept.
pub(crate) fn refined_exponent(
    stack: &CoefficientStack,
    j_star: usize,
    t_star: usize,
    p: usize,
    sign: f64,
) -> f64 {
    let params = stack.params();
    let n_j = stack.n_scales();
    if j_star == 0 || j_star + 1 >= n_j {
        return params.exponent(j_star);
    }
    let xs = [
        params.exponent(j_star - 1),
        params.exponent(j_star),
        params.exponent(j_star + 1),
    ];
    let ys = [
        sign * stack.at(j_star - 1, t_star, p),
        sign * stack.at(j_star, t_star, p),
        sign * stack.at(j_star + 1, t_star, p),
    ];
    parabola_refine(xs, ys).unwrap_or(xs[1])
}

/// Even coefficient of a unit-height ideal ridge of width `width` at scale `j`.
pub(crate) fn expected_even(
    table: &EvenIntegralTable,
    stack: &CoefficientStack,
    j: usize,
    width: f64,
) -> f64 {
    let params = stack.params();
    table.eval(params.c1 * params.dilation(j) * width / 2.0)
}

/// Ridge measure from an even stack and its offset odd companion.
pub fn ridge_measure(
    even: &CoefficientStack,
    odd: &CoefficientStack,
    params: &MeasureParams,
) -> Result<FeatureResult> {
    params.validate()?;
    check_pair(even, odd)?;
    let n_j = even.n_scales();
    if n_j < 3 {
        return Err(Error::config(format!(
            "ridge measures need at least 3 scales, got {n_j}"
        )));
    }
    let constants = even.constants();
    let table = constants.k_even()?;
    let radius = constants.radius()?;
    let floor = noise_floor(even);
    let eps = params.epsilon_for(&[even, odd]);
    let bp = even.params();
    let (w, h) = (even.width(), even.height());

    struct Px {
        measure: f64,
        tangent: f64,
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
            let k_star = expected_even(table, even, j_star, width);
            let height = if k_star != 0.0 { e_star / k_star } else { 0.0 };
            let mut num = 0.0;
            let mut den = 0.0;
            for j in 0..n_j {
                let e = even.at(j, t_star, p);
                let hk = height * expected_even(table, even, j, width);
                num += hk.signum() * e - odd.at(j, t_star, p).abs();
                den += e.abs().max(hk.abs());
            }
            num -= params.beta * n_j as f64 * k_star.abs();
            let measure = if params.polarity.admits(height) {
                clamp_unit(num / (den + eps))
            } else {
                0.0
            };
            let tangent = wrap_half_turn(refine_orientation(even, j_star, t_star, p) + PI / 2.0);
            Px {
                measure,
                tangent,
                width,
                height,
                j: j_star,
                t: t_star,
            }
        })
        .collect();

    let pick = |f: &dyn Fn(&Px) -> f64| Grid::from_vec(w, h, pixels.iter().map(f).collect());
    Ok(FeatureResult {
        kind: FeatureKind::Ridge,
        measure: pick(&|p| p.measure)?,
        orientation: Some(pick(&|p| p.tangent)?),
        width: Some(pick(&|p| p.width)?),
        height: pick(&|p| p.height)?,
        scale_index: Grid::from_vec(w, h, pixels.iter().map(|p| p.j).collect())?,
        orientation_index: Grid::from_vec(w, h, pixels.iter().map(|p| p.t).collect())?,
        band: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bank::{build_bank, make_generator_2d, params_from_user, GeneratorKind, UserParams};
    use crate::grid::ImageGrid;
    use crate::measures::Polarity;
    use crate::transform::analyze_banks;
    use crate::wavelets::{wavelet_constants, SampleGrid, WaveletPair};

    fn ridge_stacks(f: &ImageGrid) -> (CoefficientStack, CoefficientStack) {
        let pair = WaveletPair::SECOND_DERIVATIVE;
        let grid = SampleGrid::default();
        let (wo, we) = (pair.odd.build(grid).unwrap(), pair.even.build(grid).unwrap());
        let r = wavelet_constants(&we).unwrap().radius.unwrap();
        let user = UserParams {
            min_feature_width: 2.5,
            max_feature_width: 12.0,
            max_feature_length: 16.0,
            scales_per_octave: 3,
            n_orientations: 8,
            alpha: 0.5,
        };
        let pe = params_from_user(&user, GeneratorKind::EvenXGauss, r).unwrap();
        let po = pe.companion(GeneratorKind::OddXGauss, 1.0);
        let be = build_bank(&make_generator_2d(pe.kind, &we, pe.c1, pe.c2).unwrap(), &pe).unwrap();
        let bo = build_bank(&make_generator_2d(po.kind, &wo, po.c1, po.c2).unwrap(), &po).unwrap();
        let mut s = analyze_banks(f, &[&be, &bo]).unwrap();
        let o = s.pop().unwrap();
        (s.pop().unwrap(), o)
    }

    /// Vertical bright bar of the given width centred on column 40, area-sampled.
    fn bar(width: f64, height: f64) -> ImageGrid {
        let (lo, hi) = (40.0 - width / 2.0, 40.0 + width / 2.0);
        ImageGrid::from_fn(81, 64, |x, _| {
            let (a, b) = (x as f64 - 0.5, x as f64 + 0.5);
            height * (b.min(hi) - a.max(lo)).max(0.0)
        })
    }

    #[test]
    fn ideal_ridge_width_and_measure() {
        for &wd in &[4.0, 7.0] {
            let (e, o) = ridge_stacks(&bar(wd, 1.0));
            let r = ridge_measure(&e, &o, &MeasureParams::with_beta(0.03)).unwrap();
            let m = *r.measure.get(40, 32);
            let got = *r.width.as_ref().unwrap().get(40, 32);
            assert!(m >= 0.9, "w={wd}: RM={m}");
            assert!((got - wd).abs() <= 0.15 * wd, "w={wd}: WM={got}");
            assert!((r.height.get(40, 32) - 1.0).abs() < 0.15);
        }
    }

    #[test]
    fn widths_are_monotone() {
        let measure = |wd: f64| {
            let (e, o) = ridge_stacks(&bar(wd, 1.0));
            let r = ridge_measure(&e, &o, &MeasureParams::with_beta(0.03)).unwrap();
            *r.width.unwrap().get(40, 32)
        };
        assert!(measure(3.0) < measure(5.0));
        assert!(measure(5.0) < measure(9.0));
    }

    #[test]
    fn polarity_selects_dark_ridges() {
        let (e, o) = ridge_stacks(&bar(5.0, -1.0));
        let mut p = MeasureParams::with_beta(0.03);
        p.polarity = Polarity::Negative;
        assert!(*ridge_measure(&e, &o, &p).unwrap().measure.get(40, 32) > 0.8);
        p.polarity = Polarity::Positive;
        assert_eq!(*ridge_measure(&e, &o, &p).unwrap().measure.get(40, 32), 0.0);
    }

    #[test]
    fn constant_image_has_no_ridges() {
        let (e, o) = ridge_stacks(&ImageGrid::filled(40, 40, 0.2));
        let r = ridge_measure(&e, &o, &MeasureParams::with_beta(0.03)).unwrap();
        assert!(r.measure.as_slice().iter().all(|&m| m == 0.0));
    }
}
