use crate::error::{Error, Result};

/// Abscissa of the vertex of the parabola through three points.
///
/// The fit is carried out in coordinates centred on `xs[1]`, which keeps the
/// result accurate when the abscissae are large relative to their spacing.
/// If the parabola does not open downwards the middle abscissa is returned.
pub fn parabola_refine(xs: [f64; 3], ys: [f64; 3]) -> Result<f64> {
    if !(xs[0] < xs[1] && xs[1] < xs[2]) {
        return Err(Error::Numeric(format!(
            "parabola abscissae must be strictly increasing, got {xs:?}"
        )));
    }
    let (c1, c2) = local_coefficients(xs, ys);
    if !(c2 < 0.0) {
        return Ok(xs[1]);
    }
    Ok(xs[1] - c1 / (2.0 * c2))
}

/// `(c1, c2)` of `y = y1 + c1 t + c2 t^2` with `t = x - xs[1]`.
fn local_coefficients(xs: [f64; 3], ys: [f64; 3]) -> (f64, f64) {
    let tm = xs[0] - xs[1];
    let tp = xs[2] - xs[1];
    let dm = ys[0] - ys[1];
    let dp = ys[2] - ys[1];
    let det = tm * tp * (tp - tm);
    let c1 = (dm * tp * tp - dp * tm * tm) / det;
    let c2 = (tm * dp - tp * dm) / det;
    (c1, c2)
}

/// Refinement on a uniform grid with spacing `step` around `center`.
pub(crate) fn refine_uniform(center: f64, step: f64, ys: [f64; 3]) -> f64 {
    let dm = ys[0] - ys[1];
    let dp = ys[2] - ys[1];
    let c2 = 0.5 * (dm + dp);
    if !(c2 < 0.0) {
        return center;
    }
    let c1 = 0.5 * (dp - dm);
    center - step * c1 / (2.0 * c2)
}
