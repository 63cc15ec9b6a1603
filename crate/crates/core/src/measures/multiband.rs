use crate::bank::MoleculeBank;
use crate::error::{Error, Result};
use crate::grid::{Grid, ImageGrid};
use crate::transform::analyze_banks;

use super::{ridge_measure, FeatureKind, FeatureResult, MeasureParams};

/// One even/odd pair of ridge molecule systems covering a width range.
#[derive(Debug, Clone)]
pub struct RidgeBand {
    pub even: MoleculeBank,
    pub odd: MoleculeBank,
}

/// Runs the ridge measure per band and keeps, per pixel, the band with the larger measure.
///
/// Bands are analyzed one at a time so only one pair of stacks is alive at once.
pub fn multiband_ridge(
    f: &ImageGrid,
    bands: &[RidgeBand],
    params: &MeasureParams,
) -> Result<FeatureResult> {
    let mut results = Vec::with_capacity(bands.len());
    for band in bands {
        let stacks = analyze_banks(f, &[&band.even, &band.odd])?;
        results.push(ridge_measure(&stacks[0], &stacks[1], params)?);
    }
    combine_bands(results, &bands.iter().map(|b| b.even.n_scales()).collect::<Vec<_>>())
}

/// Per-pixel maximum of the band measures.
///
/// Widths where the winning band's most significant scale is its first or
/// last scale are set to `NaN`.
pub fn combine_bands(results: Vec<FeatureResult>, n_scales: &[usize]) -> Result<FeatureResult> {
    if results.is_empty() {
        return Err(Error::config("multiband ridge detection needs at least one band"));
    }
    if results.len() != n_scales.len() {
        return Err(Error::config("one scale count per band is required"));
    }
    let (w, h) = (results[0].width(), results[0].height_px());
    if results.iter().any(|r| r.width() != w || r.height_px() != h) {
        return Err(Error::Dimension("band results cover different image sizes".into()));
    }
    let n = w * h;
    let mut band = vec![0usize; n];
    for p in 0..n {
        for (b, r) in results.iter().enumerate().skip(1) {
            if r.measure.as_slice()[p] > results[band[p]].measure.as_slice()[p] {
                band[p] = b;
            }
        }
    }
    let gather = |f: &dyn Fn(&FeatureResult, usize) -> f64| -> Result<Grid<f64>> {
        Grid::from_vec(w, h, (0..n).map(|p| f(&results[band[p]], p)).collect())
    };
    let measure = gather(&|r, p| r.measure.as_slice()[p])?;
    let orientation = gather(&|r, p| r.orientation.as_ref().map_or(f64::NAN, |o| o.as_slice()[p]))?;
    let height = gather(&|r, p| r.height.as_slice()[p])?;
    let width = Grid::from_vec(
        w,
        h,
        (0..n)
            .map(|p| {
                let r = &results[band[p]];
                let j = r.scale_index.as_slice()[p];
                if j == 0 || j + 1 >= n_scales[band[p]] {
                    f64::NAN
                } else {
                    r.width.as_ref().map_or(f64::NAN, |g| g.as_slice()[p])
                }
            })
            .collect(),
    )?;
    let scale_index = Grid::from_vec(w, h, (0..n).map(|p| results[band[p]].scale_index.as_slice()[p]).collect())?;
    let orientation_index = Grid::from_vec(
        w,
        h,
        (0..n).map(|p| results[band[p]].orientation_index.as_slice()[p]).collect(),
    )?;
    Ok(FeatureResult {
        kind: FeatureKind::Ridge,
        measure,
        orientation: Some(orientation),
        width: Some(width),
        height,
        scale_index,
        orientation_index,
        band: Some(Grid::from_vec(w, h, band)?),
    })
}
