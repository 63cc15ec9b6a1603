//! Binary feature maps and discrete detections from measure maps.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::grid::{BinaryMap, Grid};
use crate::measures::{FeatureKind, FeatureResult};

const NEIGHBOURS: [(isize, isize); 8] = [
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
];

/// One detected pixel or blob centre with its attributes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Detection {
    pub x: usize,
    pub y: usize,
    /// Sub-pixel centroid of a blob component.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub centroid: Option<[f64; 2]>,
    /// Tangent angle in radians.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub orientation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub width: Option<f64>,
    pub height: f64,
}

impl Detection {
    /// Centroid if known, pixel position otherwise.
    pub fn position(&self) -> [f64; 2] {
        self.centroid.unwrap_or([self.x as f64, self.y as f64])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionSet {
    pub kind: FeatureKind,
    pub image_width: usize,
    pub image_height: usize,
    pub points: Vec<Detection>,
}

impl DetectionSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn on(map: &BinaryMap, x: isize, y: isize) -> bool {
    x >= 0
        && y >= 0
        && (x as usize) < map.width()
        && (y as usize) < map.height()
        && *map.get(x as usize, y as usize)
}

fn candidates(result: &FeatureResult, threshold: f64, mask: Option<&BinaryMap>) -> BinaryMap {
    let m = &result.measure;
    Grid::from_fn(m.width(), m.height(), |x, y| {
        let v = *m.get(x, y);
        v > 0.0 && v >= threshold && mask.is_none_or(|k| *k.get(x, y))
    })
}

/// Keeps candidates that are maxima of the measure along the normal.
///
/// The two normal neighbours are sampled bilinearly; a pixel survives if it
/// is not below the forward neighbour and strictly above the backward one,
/// so flat two-pixel plateaus keep exactly one pixel.
fn suppress(result: &FeatureResult, cand: &BinaryMap) -> BinaryMap {
    let m = &result.measure;
    let (w, h) = (m.width(), m.height());
    let Some(tangent) = result.orientation.as_ref() else {
        return cand.clone();
    };
    let rows: Vec<Vec<bool>> = (0..h)
        .into_par_iter()
        .map(|y| {
            (0..w)
                .map(|x| {
                    if !*cand.get(x, y) {
                        return false;
                    }
                    let n = tangent.get(x, y) + PI / 2.0;
                    let (dx, dy) = (n.cos(), n.sin());
                    let c = *m.get(x, y);
                    let fwd = m.bilinear(x as f64 + dx, y as f64 + dy);
                    let back = m.bilinear(x as f64 - dx, y as f64 - dy);
                    c >= fwd && c > back
                })
                .collect()
        })
        .collect();
    Grid::from_vec(w, h, rows.concat()).expect("row lengths match")
}

/// Fills single off pixels between two on pixels that are not yet 8-connected.
fn bridge(map: &BinaryMap, cand: &BinaryMap) -> BinaryMap {
    let mut out = map.clone();
    for y in 0..map.height() {
        for x in 0..map.width() {
            if *map.get(x, y) || !*cand.get(x, y) {
                continue;
            }
            let hits: Vec<(isize, isize)> = NEIGHBOURS
                .iter()
                .copied()
                .filter(|&(dx, dy)| on(map, x as isize + dx, y as isize + dy))
                .collect();
            if hits.len() == 2 {
                let (a, b) = (hits[0], hits[1]);
                if (a.0 - b.0).abs().max((a.1 - b.1).abs()) == 2 {
                    out.set(x, y, true);
                }
            }
        }
    }
    out
}

/// Zhang-Suen thinning to one-pixel-wide curves.
pub fn thin(map: &BinaryMap) -> BinaryMap {
    let mut cur = map.clone();
    loop {
        let mut changed = false;
        for pass in 0..2 {
            let mut removals = Vec::new();
            for (x, y) in cur.on_pixels() {
                let (xi, yi) = (x as isize, y as isize);
                let p: Vec<bool> = NEIGHBOURS
                    .iter()
                    .map(|&(dx, dy)| on(&cur, xi + dx, yi + dy))
                    .collect();
                let b = p.iter().filter(|&&v| v).count();
                if !(2..=6).contains(&b) {
                    continue;
                }
                let a = (0..8).filter(|&i| !p[i] && p[(i + 1) % 8]).count();
                if a != 1 {
                    continue;
                }
                // p[0] = N, p[2] = E, p[4] = S, p[6] = W
                let keep = if pass == 0 {
                    (p[0] && p[2] && p[4]) || (p[2] && p[4] && p[6])
                } else {
                    (p[0] && p[2] && p[6]) || (p[0] && p[4] && p[6])
                };
                if !keep {
                    removals.push((x, y));
                }
            }
            changed |= !removals.is_empty();
            for (x, y) in removals {
                cur.set(x, y, false);
            }
        }
        if !changed {
            return cur;
        }
    }
}

/// Thresholded, normal-suppressed, gap-bridged and thinned feature map.
///
/// Results without an orientation map (blobs) skip the suppression step.
pub fn threshold_and_thin(
    result: &FeatureResult,
    threshold: f64,
    mask: Option<&BinaryMap>,
) -> BinaryMap {
    let cand = candidates(result, threshold, mask);
    let nms = suppress(result, &cand);
    thin(&bridge(&nms, &cand))
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

/// Attributed detections at the on pixels of a binary map.
pub fn detections(result: &FeatureResult, map: &BinaryMap) -> DetectionSet {
    let points = map
        .on_pixels()
        .into_iter()
        .map(|(x, y)| Detection {
            x,
            y,
            centroid: None,
            orientation: result.orientation.as_ref().and_then(|o| finite(*o.get(x, y))),
            width: result.width.as_ref().and_then(|w| finite(*w.get(x, y))),
            height: *result.height.get(x, y),
        })
        .collect();
    DetectionSet {
        kind: result.kind,
        image_width: map.width(),
        image_height: map.height(),
        points,
    }
}

/// 8-connected components of a binary map, each as a pixel list in scan order.
pub fn components(map: &BinaryMap) -> Vec<Vec<(usize, usize)>> {
    let (w, h) = (map.width(), map.height());
    let mut seen = vec![false; w * h];
    let mut out = Vec::new();
    for (x0, y0) in map.on_pixels() {
        if seen[y0 * w + x0] {
            continue;
        }
        seen[y0 * w + x0] = true;
        let mut stack = vec![(x0, y0)];
        let mut comp = Vec::new();
        while let Some((x, y)) = stack.pop() {
            comp.push((x, y));
            for &(dx, dy) in &NEIGHBOURS {
                let (nx, ny) = (x as isize + dx, y as isize + dy);
                if on(map, nx, ny) {
                    let i = ny as usize * w + nx as usize;
                    if !seen[i] {
                        seen[i] = true;
                        stack.push((nx as usize, ny as usize));
                    }
                }
            }
        }
        comp.sort_by_key(|&(x, y)| (y, x));
        out.push(comp);
    }
    out
}

/// Blob centres as centroids of the 8-connected components above `threshold`.
///
/// Width and height are read at the pixel nearest each centroid.
pub fn blob_centers(result: &FeatureResult, threshold: f64, mask: Option<&BinaryMap>) -> DetectionSet {
    let cand = candidates(result, threshold, mask);
    let (w, h) = (cand.width(), cand.height());
    let points = components(&cand)
        .into_iter()
        .map(|comp| {
            let n = comp.len() as f64;
            let cx = comp.iter().map(|p| p.0 as f64).sum::<f64>() / n;
            let cy = comp.iter().map(|p| p.1 as f64).sum::<f64>() / n;
            let x = (cx.round() as usize).min(w - 1);
            let y = (cy.round() as usize).min(h - 1);
            Detection {
                x,
                y,
                centroid: Some([cx, cy]),
                orientation: None,
                width: result.width.as_ref().and_then(|g| finite(*g.get(x, y))),
                height: *result.height.get(x, y),
            }
        })
        .collect();
    DetectionSet {
        kind: result.kind,
        image_width: w,
        image_height: h,
        points,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn result(measure: Grid<f64>, tangent: Option<f64>) -> FeatureResult {
        let (w, h) = (measure.width(), measure.height());
        FeatureResult {
            kind: if tangent.is_some() { FeatureKind::Edge } else { FeatureKind::Blob },
            orientation: tangent.map(|t| Grid::filled(w, h, t)),
            width: None,
            height: Grid::filled(w, h, 1.0),
            scale_index: Grid::filled(w, h, 0),
            orientation_index: Grid::filled(w, h, 0),
            band: None,
            measure,
        }
    }

    fn branches(map: &BinaryMap, x: usize, y: usize) -> usize {
        NEIGHBOURS
            .iter()
            .filter(|&&(dx, dy)| on(map, x as isize + dx, y as isize + dy))
            .count()
    }

    #[test]
    fn vertical_ridge_profile_thins_to_its_crest() {
        // measure peaks at column 20.3 and decays linearly over 5 px
        let m = Grid::from_fn(40, 30, |x, _| (1.0 - (x as f64 - 20.3).abs() / 5.0).max(0.0));
        let map = threshold_and_thin(&result(m, Some(PI / 2.0 - 1e-9)), 0.3, None);
        for y in 0..30 {
            let row: Vec<usize> = (0..40).filter(|&x| *map.get(x, y)).collect();
            assert_eq!(row, vec![20], "row {y}");
        }
    }

    #[test]
    fn diagonal_band_becomes_one_pixel_wide() {
        let m = Grid::from_fn(48, 48, |x, y| {
            let d = (x as f64 - y as f64) / 2f64.sqrt();
            (1.0 - d.abs() / 3.0).max(0.0)
        });
        let map = threshold_and_thin(&result(m, Some(PI / 4.0)), 0.2, None);
        assert!(map.count() > 30);
        for (x, y) in map.on_pixels() {
            assert!((x as f64 - y as f64).abs() <= 1.0, "({x},{y}) off the diagonal");
            assert!(branches(&map, x, y) <= 2);
        }
    }

    #[test]
    fn zero_measure_gives_empty_map() {
        let r = result(Grid::filled(16, 16, 0.0), Some(0.0));
        assert_eq!(threshold_and_thin(&r, 0.0, None).count(), 0);
        assert!(blob_centers(&r, 0.0, None).is_empty());
    }

    #[test]
    fn single_pixel_gap_is_bridged() {
        let mut m = Grid::filled(20, 9, 0.0);
        for x in 2..18 {
            m.set(x, 4, 1.0);
        }
        m.set(10, 4, 0.5);
        let mut r = result(m, Some(0.0));
        // make the gap pixel lose the suppression test against its neighbours
        r.measure.set(10, 5, 0.6);
        let cand = candidates(&r, 0.4, None);
        let nms = suppress(&r, &cand);
        assert!(!*nms.get(10, 4));
        let map = threshold_and_thin(&r, 0.4, None);
        assert!((2..18).all(|x| *map.get(x, 4) || (x == 10 && *map.get(10, 5))));
        assert_eq!(components(&map).len(), 1);
    }

    #[test]
    fn raising_the_threshold_never_adds_pixels() {
        let m = Grid::from_fn(48, 48, |x, y| {
            let d = (x as f64 - 0.6 * y as f64 - 10.0).abs();
            (1.0 - d / 4.0).max(0.0) * (0.3 + y as f64 / 68.0)
        });
        let r = result(m, Some((1.0f64).atan2(0.6)));
        let mut prev = usize::MAX;
        for t in [0.1, 0.3, 0.5, 0.7] {
            let map = threshold_and_thin(&r, t, None);
            assert!(map.count() <= prev);
            prev = map.count();
        }
        let lo = suppress(&r, &candidates(&r, 0.2, None));
        let hi = suppress(&r, &candidates(&r, 0.6, None));
        assert!(hi.on_pixels().iter().all(|&(x, y)| *lo.get(x, y)));
    }

    #[test]
    fn blob_centroid_and_mask() {
        let m = Grid::from_fn(40, 40, |x, y| {
            let d = (x as f64 - 12.0).hypot(y as f64 - 25.0);
            (1.0 - d / 4.0).max(0.0)
        });
        let r = result(m, None);
        let c = blob_centers(&r, 0.1, None);
        assert_eq!(c.len(), 1);
        let [cx, cy] = c.points[0].position();
        assert!((cx - 12.0).abs() < 1e-9 && (cy - 25.0).abs() < 1e-9);
        let mask = Grid::from_fn(40, 40, |x, _| x > 20);
        assert!(blob_centers(&r, 0.1, Some(&mask)).is_empty());
    }

    #[test]
    fn thinning_keeps_one_pixel_lines() {
        let mut m = Grid::filled(10, 10, false);
        for x in 1..9 {
            m.set(x, 5, true);
        }
        assert_eq!(thin(&m), m);
    }
}
