//! Detection scores against ground truth: figure of merit, attribute MAEs,
//! true positives and blob matching.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{BinaryMap, Grid};
use crate::postprocess::DetectionSet;
use crate::synth::{GroundTruth, SceneKind};

/// Weight of squared distances in the figure of merit.
pub const DEFAULT_GAMMA: f64 = 1.0 / 9.0;
/// Radius of the true-positive set for edges and ridges, in pixels.
pub const DEFAULT_TP_RADIUS: f64 = 3.0;
/// Matching radius for blob centres, in pixels.
pub const DEFAULT_BLOB_RADIUS: f64 = 6.0;

/// Stand-in for an infinite distance that keeps parabola intersections finite.
const FAR: f64 = 1e20;

/// Lower envelope of the parabolas `(q - p)^2 + f[p]` (Felzenszwalb-Huttenlocher).
fn edt_1d(f: &[f64], out: &mut [f64], v: &mut [usize], z: &mut [f64]) {
    let n = f.len();
    let mut k = 0;
    v[0] = 0;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    let sq = |i: usize| (i * i) as f64;
    for q in 1..n {
        let mut s;
        loop {
            let p = v[k];
            s = ((f[q] + sq(q)) - (f[p] + sq(p))) / (2.0 * (q - p) as f64);
            if s <= z[k] && k > 0 {
                k -= 1;
            } else {
                break;
            }
        }
        if s <= z[k] {
            v[k] = q;
        } else {
            k += 1;
            v[k] = q;
            z[k] = s;
        }
        z[k + 1] = f64::INFINITY;
    }
    k = 0;
    for (q, o) in out.iter_mut().enumerate() {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let d = q as f64 - v[k] as f64;
        *o = d * d + f[v[k]];
    }
}

/// Exact squared Euclidean distance to the nearest on pixel (infinite if none).
pub fn squared_distance_transform(mask: &BinaryMap) -> Grid<f64> {
    let (w, h) = (mask.width(), mask.height());
    let mut g: Vec<f64> = mask
        .as_slice()
        .iter()
        .map(|&b| if b { 0.0 } else { FAR })
        .collect();
    let n = w.max(h);
    let (mut f, mut out, mut v, mut z) = (vec![0.0; n], vec![0.0; n], vec![0; n], vec![0.0; n + 1]);
    for x in 0..w {
        for y in 0..h {
            f[y] = g[y * w + x];
        }
        edt_1d(&f[..h], &mut out[..h], &mut v, &mut z);
        for y in 0..h {
            g[y * w + x] = out[y];
        }
    }
    for y in 0..h {
        f[..w].copy_from_slice(&g[y * w..(y + 1) * w]);
        edt_1d(&f[..w], &mut out[..w], &mut v, &mut z);
        g[y * w..(y + 1) * w].copy_from_slice(&out[..w]);
    }
    for v in &mut g {
        if *v >= FAR / 2.0 {
            *v = f64::INFINITY;
        }
    }
    Grid::from_vec(w, h, g).expect("shape preserved")
}

fn same_size(a: &BinaryMap, b: &BinaryMap) -> Result<()> {
    if !a.same_shape(b) {
        return Err(Error::Dimension(format!(
            "masks are {}x{} and {}x{}",
            a.width(),
            a.height(),
            b.width(),
            b.height()
        )));
    }
    Ok(())
}

/// Squared distances `D_gt` (gt to det) and `D_det` (det to gt).
fn distance_sets(gt: &BinaryMap, det: &BinaryMap) -> (Vec<f64>, Vec<f64>) {
    let to_det = squared_distance_transform(det);
    let to_gt = squared_distance_transform(gt);
    let d_gt = gt.on_pixels().iter().map(|&(x, y)| *to_det.get(x, y)).collect();
    let d_det = det.on_pixels().iter().map(|&(x, y)| *to_gt.get(x, y)).collect();
    (d_gt, d_det)
}

/// Figure of merit over the multiset `D = D_gt + D_det`, summing the `N_gt`
/// largest distances and normalizing by `max(N_gt, N_det)`.
///
/// Two empty masks score 1; exactly one empty mask scores 0.
pub fn fom(gt: &BinaryMap, det: &BinaryMap, gamma: f64) -> Result<f64> {
    same_size(gt, det)?;
    let (n_gt, n_det) = (gt.count(), det.count());
    match (n_gt, n_det) {
        (0, 0) => return Ok(1.0),
        (0, _) | (_, 0) => return Ok(0.0),
        _ => {}
    }
    let (d_gt, d_det) = distance_sets(gt, det);
    let mut d: Vec<f64> = d_gt.into_iter().chain(d_det).collect();
    d.sort_by(|a, b| b.total_cmp(a));
    let sum: f64 = d.iter().take(n_gt).map(|d2| 1.0 / (1.0 + gamma * d2)).sum();
    Ok(sum / n_gt.max(n_det) as f64)
}

/// Pratt's original figure of merit over `D_det`.
pub fn pratt_fom(gt: &BinaryMap, det: &BinaryMap, gamma: f64) -> Result<f64> {
    same_size(gt, det)?;
    let (n_gt, n_det) = (gt.count(), det.count());
    match (n_gt, n_det) {
        (0, 0) => return Ok(1.0),
        (0, _) | (_, 0) => return Ok(0.0),
        _ => {}
    }
    let (_, d_det) = distance_sets(gt, det);
    let sum: f64 = d_det.iter().map(|d2| 1.0 / (1.0 + gamma * d2)).sum();
    Ok(sum / n_gt.max(n_det) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttributeMetric {
    /// Angles in radians compared modulo pi, errors reported in degrees.
    Torus,
    /// Plain absolute difference.
    Linear,
}

/// A located point with an optional attribute value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttrPoint {
    pub pos: [f64; 2],
    pub value: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttributeScore {
    /// Absent when no matched pair carries the attribute.
    pub mae: Option<f64>,
    /// Fraction of ground-truth points with a detection within the radius.
    pub tpr: f64,
    pub tp: usize,
    /// Matched pairs that contributed to the MAE.
    pub compared: usize,
}

/// Spatial hash for nearest-neighbour queries within a fixed radius.
struct PointIndex<'a> {
    points: &'a [AttrPoint],
    cell: f64,
    buckets: std::collections::HashMap<(i64, i64), Vec<usize>>,
}

impl<'a> PointIndex<'a> {
    fn new(points: &'a [AttrPoint], cell: f64) -> Self {
        let mut buckets: std::collections::HashMap<(i64, i64), Vec<usize>> = Default::default();
        for (i, p) in points.iter().enumerate() {
            buckets.entry(Self::key(p.pos, cell)).or_default().push(i);
        }
        PointIndex {
            points,
            cell,
            buckets,
        }
    }

    fn key(p: [f64; 2], cell: f64) -> (i64, i64) {
        ((p[0] / cell).floor() as i64, (p[1] / cell).floor() as i64)
    }

    /// Nearest point within `radius`; ties go to the lowest index.
    fn nearest(&self, q: [f64; 2], radius: f64) -> Option<(usize, f64)> {
        let (kx, ky) = Self::key(q, self.cell);
        let reach = (radius / self.cell).ceil() as i64;
        let mut best: Option<(usize, f64)> = None;
        for dx in -reach..=reach {
            for dy in -reach..=reach {
                let Some(list) = self.buckets.get(&(kx + dx, ky + dy)) else {
                    continue;
                };
                for &i in list {
                    let p = self.points[i].pos;
                    let d = (p[0] - q[0]).hypot(p[1] - q[1]);
                    if d <= radius
                        && best.is_none_or(|(bi, bd)| d < bd || (d == bd && i < bi))
                    {
                        best = Some((i, d));
                    }
                }
            }
        }
        best
    }
}

fn attribute_error(a: f64, b: f64, metric: AttributeMetric) -> f64 {
    match metric {
        AttributeMetric::Linear => (a - b).abs(),
        AttributeMetric::Torus => {
            let d = (a - b).rem_euclid(PI);
            d.min(PI - d).to_degrees()
        }
    }
}

/// MAE of an attribute over ground-truth points that have a detection within
/// `radius`, each compared with its nearest detection.
pub fn mae_attribute(
    gt: &[AttrPoint],
    det: &[AttrPoint],
    radius: f64,
    metric: AttributeMetric,
) -> Result<AttributeScore> {
    if !(radius > 0.0) {
        return Err(Error::config(format!("matching radius must be > 0, got {radius}")));
    }
    let index = PointIndex::new(det, radius.max(1.0));
    let (mut tp, mut compared, mut sum) = (0usize, 0usize, 0.0);
    for g in gt {
        let Some((i, _)) = index.nearest(g.pos, radius) else {
            continue;
        };
        tp += 1;
        if let (Some(a), Some(b)) = (g.value, det[i].value) {
            if a.is_finite() && b.is_finite() {
                sum += attribute_error(a, b, metric);
                compared += 1;
            }
        }
    }
    Ok(AttributeScore {
        mae: (compared > 0).then(|| sum / compared as f64),
        tpr: if gt.is_empty() { 0.0 } else { tp as f64 / gt.len() as f64 },
        tp,
        compared,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlobScore {
    pub tp: usize,
    pub fp: usize,
    pub mae_center: Option<f64>,
    pub mae_width: Option<f64>,
}

/// Blob matching: a gt centre is a true positive if a detection lies within
/// `radius`; a detection farther than `radius` from every gt centre is a false
/// positive. MAEs use each true positive and its nearest detection.
pub fn blob_score(gt: &[AttrPoint], det: &[AttrPoint], radius: f64) -> Result<BlobScore> {
    if !(radius > 0.0) {
        return Err(Error::config(format!("matching radius must be > 0, got {radius}")));
    }
    let det_index = PointIndex::new(det, radius);
    let gt_index = PointIndex::new(gt, radius);
    let (mut tp, mut centre, mut width, mut n_width) = (0usize, 0.0, 0.0, 0usize);
    for g in gt {
        if let Some((i, d)) = det_index.nearest(g.pos, radius) {
            tp += 1;
            centre += d;
            if let (Some(a), Some(b)) = (g.value, det[i].value) {
                if b.is_finite() {
                    width += (a - b).abs();
                    n_width += 1;
                }
            }
        }
    }
    let fp = det
        .iter()
        .filter(|p| gt_index.nearest(p.pos, radius).is_none())
        .count();
    Ok(BlobScore {
        tp,
        fp,
        mae_center: (tp > 0).then(|| centre / tp as f64),
        mae_width: (n_width > 0).then(|| width / n_width as f64),
    })
}

/// Sample standard deviation (`n - 1`) of width differences.
pub fn width_sd(differences: &[f64]) -> Result<f64> {
    let n = differences.len();
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "width standard deviation needs at least 2 matched pairs, got {n}"
        )));
    }
    let mean = differences.iter().sum::<f64>() / n as f64;
    let ss: f64 = differences.iter().map(|d| (d - mean).powi(2)).sum();
    Ok((ss / (n - 1) as f64).sqrt())
}

/// Width differences `measured - gt` over matched pairs.
pub fn width_differences(gt: &[AttrPoint], det: &[AttrPoint], radius: f64) -> Vec<f64> {
    let index = PointIndex::new(det, radius.max(1.0));
    gt.iter()
        .filter_map(|g| {
            let (i, _) = index.nearest(g.pos, radius)?;
            match (g.value, det[i].value) {
                (Some(a), Some(b)) if b.is_finite() => Some(b - a),
                _ => None,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct EvalReport {
    pub kind: Option<SceneKind>,
    pub n_gt: usize,
    pub n_det: usize,
    pub fom: Option<f64>,
    pub pratt_fom: Option<f64>,
    /// Degrees.
    pub mae_orientation: Option<f64>,
    /// Pixels.
    pub mae_width: Option<f64>,
    pub tp: Option<usize>,
    pub fp: Option<usize>,
    pub tpr: Option<f64>,
    /// Fraction of gt points matched with a width estimate.
    pub sr: Option<f64>,
    pub mae_center: Option<f64>,
    pub sd_width: Option<f64>,
}

impl EvalReport {
    pub const CSV_HEADER: [&'static str; 14] = [
        "kind",
        "n_gt",
        "n_det",
        "fom",
        "pratt_fom",
        "mae_orientation",
        "mae_width",
        "tp",
        "fp",
        "tpr",
        "sr",
        "mae_center",
        "sd_width",
        "source",
    ];

    /// Flat CSV row matching [`EvalReport::CSV_HEADER`].
    pub fn csv_row(&self, source: &str) -> Vec<String> {
        let f = |v: Option<f64>| v.map_or(String::new(), |v| format!("{v:.6}"));
        let u = |v: Option<usize>| v.map_or(String::new(), |v| v.to_string());
        vec![
            self.kind.map_or(String::new(), |k| format!("{k:?}").to_lowercase()),
            self.n_gt.to_string(),
            self.n_det.to_string(),
            f(self.fom),
            f(self.pratt_fom),
            f(self.mae_orientation),
            f(self.mae_width),
            u(self.tp),
            u(self.fp),
            f(self.tpr),
            f(self.sr),
            f(self.mae_center),
            f(self.sd_width),
            source.to_string(),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalOptions {
    pub gamma: f64,
    pub tp_radius: f64,
    pub blob_radius: f64,
    pub pratt: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            gamma: DEFAULT_GAMMA,
            tp_radius: DEFAULT_TP_RADIUS,
            blob_radius: DEFAULT_BLOB_RADIUS,
            pratt: false,
        }
    }
}

/// Scores a detection set (and its binary map) against a scene's ground truth.
pub fn evaluate(
    gt: &GroundTruth,
    det: &DetectionSet,
    det_mask: &BinaryMap,
    opts: &EvalOptions,
) -> Result<EvalReport> {
    same_size(&gt.mask, det_mask)?;
    if det.image_width != gt.width() || det.image_height != gt.height() {
        return Err(Error::Dimension(format!(
            "detections cover {}x{}, ground truth {}x{}",
            det.image_width,
            det.image_height,
            gt.width(),
            gt.height()
        )));
    }
    let mut report = EvalReport {
        kind: Some(gt.kind),
        n_det: det.len(),
        ..Default::default()
    };
    if gt.kind == SceneKind::Blobs {
        report.n_gt = gt.blobs.len();
        let g: Vec<AttrPoint> = gt
            .blobs
            .iter()
            .map(|b| AttrPoint {
                pos: b.center,
                value: Some(b.diameter),
            })
            .collect();
        let d: Vec<AttrPoint> = det
            .points
            .iter()
            .map(|p| AttrPoint {
                pos: p.position(),
                value: p.width,
            })
            .collect();
        let s = blob_score(&g, &d, opts.blob_radius)?;
        report.tp = Some(s.tp);
        report.fp = Some(s.fp);
        report.tpr = (!g.is_empty()).then(|| s.tp as f64 / g.len() as f64);
        report.mae_center = s.mae_center;
        report.mae_width = s.mae_width;
        report.sd_width = width_sd(&width_differences(&g, &d, opts.blob_radius)).ok();
        return Ok(report);
    }
    report.n_gt = gt.points.len();
    report.fom = Some(fom(&gt.mask, det_mask, opts.gamma)?);
    if opts.pratt {
        report.pratt_fom = Some(pratt_fom(&gt.mask, det_mask, opts.gamma)?);
    }
    let pos = |x: usize, y: usize| [x as f64, y as f64];
    let g_or: Vec<AttrPoint> = gt
        .points
        .iter()
        .map(|p| AttrPoint {
            pos: pos(p.x, p.y),
            value: p.orientation,
        })
        .collect();
    let d_or: Vec<AttrPoint> = det
        .points
        .iter()
        .map(|p| AttrPoint {
            pos: pos(p.x, p.y),
            value: p.orientation,
        })
        .collect();
    let o = mae_attribute(&g_or, &d_or, opts.tp_radius, AttributeMetric::Torus)?;
    report.mae_orientation = o.mae;
    report.tp = Some(o.tp);
    report.tpr = Some(o.tpr);
    if gt.kind == SceneKind::Ridges {
        let g_w: Vec<AttrPoint> = gt
            .points
            .iter()
            .map(|p| AttrPoint {
                pos: pos(p.x, p.y),
                value: p.width,
            })
            .collect();
        let d_w: Vec<AttrPoint> = det
            .points
            .iter()
            .map(|p| AttrPoint {
                pos: pos(p.x, p.y),
                value: p.width,
            })
            .collect();
        let w = mae_attribute(&g_w, &d_w, opts.tp_radius, AttributeMetric::Linear)?;
        report.mae_width = w.mae;
        report.sr = (!g_w.is_empty()).then(|| w.compared as f64 / g_w.len() as f64);
        report.sd_width = width_sd(&width_differences(&g_w, &d_w, opts.tp_radius)).ok();
    }
    Ok(report)
}
