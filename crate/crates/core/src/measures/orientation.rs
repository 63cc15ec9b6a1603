use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::transform::CoefficientStack;

use super::{refine_orientation, wrap_half_turn};

/// Tangent orientation from a parabola fit over `|coefficient|` across
/// the neighbouring orientations of `(j*, theta*)`.
pub fn orientation_measure(
    stack: &CoefficientStack,
    scale_index: &Grid<usize>,
    orientation_index: &Grid<usize>,
) -> Result<Grid<f64>> {
    if stack.n_orientations() < 3 {
        return Err(Error::config(format!(
            "orientation refinement needs at least 3 orientations, got {}",
            stack.n_orientations()
        )));
    }
    if scale_index.width() != stack.width()
        || scale_index.height() != stack.height()
        || !scale_index.same_shape(orientation_index)
    {
        return Err(Error::Dimension("index maps do not match the stack".into()));
    }
    let data = scale_index
        .as_slice()
        .iter()
        .zip(orientation_index.as_slice())
        .enumerate()
        .map(|(p, (&j, &t))| wrap_half_turn(refine_orientation(stack, j, t, p) + PI / 2.0))
        .collect();
    Grid::from_vec(stack.width(), stack.height(), data)
}
