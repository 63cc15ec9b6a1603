//! Synthetic edge, ridge and blob scenes with analytic ground truth.
//!
//! Geometry lives on the unit square; a unit length equals the canvas side.
//! Images are rendered with 8x8 supersampling and box downsampling, and
//! the ground truth is taken from the continuous curves.

mod curve;
mod noise;
mod presets;
mod raster;

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use curve::{Curve, CurveKind, CurvePoint};
pub use noise::{add_noise, NoiseLevel};
pub use presets::Preset;

use crate::error::{Error, Result};
use crate::grid::{BinaryMap, Grid, ImageGrid};
use crate::measures::wrap_half_turn;
use raster::{covered, Disc, Region, Spans, Thick};

const SUPERSAMPLING: usize = 8;
/// Curve sampling step for ground truth, in pixels.
const GT_STEP: f64 = 0.1;
/// Outline step for filling, in pixels.
const FILL_STEP: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SceneKind {
    Edges,
    Ridges,
    Blobs,
}

/// Intensity of a painted shape at unit-square position `u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Fill {
    Constant { value: f64 },
    Linear { origin: [f64; 2], value: f64, gradient: [f64; 2] },
}

impl Fill {
    pub fn at(&self, u: [f64; 2]) -> f64 {
        match *self {
            Fill::Constant { value } => value,
            Fill::Linear {
                origin,
                value,
                gradient,
            } => value + gradient[0] * (u[0] - origin[0]) + gradient[1] * (u[1] - origin[1]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Shape {
    /// Closed region bounded by a Catmull-Rom spline through `control`.
    Spline { control: Vec<[f64; 2]>, fill: Fill },
    Polygon { vertices: Vec<[f64; 2]>, fill: Fill },
    /// Centreline spline of constant width, painted with `fill`.
    Ridge {
        control: Vec<[f64; 2]>,
        closed: bool,
        width: f64,
        fill: Fill,
    },
    Circle { center: [f64; 2], diameter: f64, fill: Fill },
}

/// One low-frequency cosine term `amplitude * cos(2 pi f . u + phase)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub amplitude: f64,
    pub frequency: [f64; 2],
    pub phase: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneSpec {
    pub kind: SceneKind,
    pub seed: u64,
    /// Canvas side in pixels.
    pub size: usize,
    pub background: Fill,
    /// Painted in order; later shapes cover earlier ones.
    pub shapes: Vec<Shape>,
    #[serde(default)]
    pub overlay: Vec<Bump>,
}

/// Ground-truth attributes of one marked pixel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GtPoint {
    pub x: usize,
    pub y: usize,
    /// Tangent in radians, in `[-pi/2, pi/2)`.
    pub orientation: Option<f64>,
    /// Width in pixels.
    pub width: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlobTruth {
    /// Centre in pixel coordinates.
    pub center: [f64; 2],
    /// Diameter in pixels.
    pub diameter: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    pub kind: SceneKind,
    pub mask: BinaryMap,
    pub points: Vec<GtPoint>,
    pub blobs: Vec<BlobTruth>,
}

impl GroundTruth {
    pub fn width(&self) -> usize {
        self.mask.width()
    }

    pub fn height(&self) -> usize {
        self.mask.height()
    }
}

fn to_px(u: [f64; 2], size: usize) -> [f64; 2] {
    let s = size as f64;
    [u[0] * s - 0.5, u[1] * s - 0.5]
}

fn to_unit(p: [f64; 2], size: usize) -> [f64; 2] {
    let s = size as f64;
    [(p[0] + 0.5) / s, (p[1] + 0.5) / s]
}

fn fill_of(shape: &Shape) -> &Fill {
    match shape {
        Shape::Spline { fill, .. }
        | Shape::Polygon { fill, .. }
        | Shape::Ridge { fill, .. }
        | Shape::Circle { fill, .. } => fill,
    }
}

impl Shape {
    /// Boundary (edges) or centreline (ridges) curve in pixel coordinates.
    pub fn curve(&self, size: usize) -> Option<Curve> {
        let px = |pts: &[[f64; 2]]| pts.iter().map(|&u| to_px(u, size)).collect::<Vec<_>>();
        match self {
            Shape::Spline { control, .. } => Some(Curve::new(CurveKind::Spline, px(control), true)),
            Shape::Polygon { vertices, .. } => {
                Some(Curve::new(CurveKind::Polygon, px(vertices), true))
            }
            Shape::Ridge {
                control, closed, ..
            } => Some(Curve::new(CurveKind::Spline, px(control), *closed)),
            Shape::Circle { .. } => None,
        }
    }

    fn validate(&self) -> Result<()> {
        let (pts, min) = match self {
            Shape::Spline { control, .. } => (control.len(), 3),
            Shape::Polygon { vertices, .. } => (vertices.len(), 3),
            Shape::Ridge {
                control,
                closed,
                width,
                ..
            } => {
                if !(*width > 0.0) {
                    return Err(Error::config(format!("ridge width must be > 0, got {width}")));
                }
                (control.len(), if *closed { 3 } else { 2 })
            }
            Shape::Circle { diameter, .. } => {
                if !(*diameter > 0.0) {
                    return Err(Error::config(format!(
                        "circle diameter must be > 0, got {diameter}"
                    )));
                }
                (1, 1)
            }
        };
        if pts < min {
            return Err(Error::config(format!("shape needs at least {min} points, got {pts}")));
        }
        Ok(())
    }
}

impl SceneSpec {
    pub fn validate(&self) -> Result<()> {
        if self.size < 8 {
            return Err(Error::config(format!("canvas must be at least 8 px, got {}", self.size)));
        }
        for s in &self.shapes {
            s.validate()?;
        }
        check_ridge_spacing(self)
    }
}

/// Rejects ridge centrelines that come closer than the sum of the two widths,
/// either to another ridge or to a distant part of themselves.
fn check_ridge_spacing(spec: &SceneSpec) -> Result<()> {
    let size = spec.size as f64;
    let mut pts: Vec<(usize, [f64; 2], f64, f64, f64)> = Vec::new();
    let mut max_w = 0.0f64;
    for (i, shape) in spec.shapes.iter().enumerate() {
        if let Shape::Ridge { width, .. } = shape {
            let w = width * size;
            max_w = max_w.max(w);
            let samples = shape.curve(spec.size).expect("ridges have curves").sample(1.0);
            let len = samples.last().map_or(0.0, |p| p.s);
            pts.extend(samples.iter().map(|p| (i, p.p, w, p.s, len)));
        }
    }
    if pts.is_empty() {
        return Ok(());
    }
    let cell = (2.0 * max_w).max(1.0);
    let mut grid: std::collections::HashMap<(i64, i64), Vec<usize>> = Default::default();
    for (k, p) in pts.iter().enumerate() {
        let key = ((p.1[0] / cell).floor() as i64, (p.1[1] / cell).floor() as i64);
        grid.entry(key).or_default().push(k);
    }
    for (k, &(ri, p, w, s, len)) in pts.iter().enumerate() {
        let key = ((p[0] / cell).floor() as i64, (p[1] / cell).floor() as i64);
        for dx in -1..=1 {
            for dy in -1..=1 {
                let Some(list) = grid.get(&(key.0 + dx, key.1 + dy)) else {
                    continue;
                };
                for &m in list.iter().filter(|&&m| m > k) {
                    let (rj, q, wq, sq, _) = pts[m];
                    let d = (p[0] - q[0]).hypot(p[1] - q[1]);
                    let limit = w + wq;
                    let too_close = if ri == rj {
                        let along = (s - sq).abs();
                        let along = match &spec.shapes[ri] {
                            Shape::Ridge { closed: true, .. } => along.min(len - along),
                            _ => along,
                        };
                        along > PI * limit && d < limit
                    } else {
                        d < limit
                    };
                    if too_close {
                        return Err(Error::config(format!(
                            "ridge centrelines {ri} and {rj} come within {d:.1} px near ({:.0}, {:.0})",
                            p[0], p[1]
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

enum Prepared {
    Region(Region),
    Thick(Thick),
    Disc(Disc),
}

impl Prepared {
    fn spans(&self, y: f64, out: &mut Vec<(f64, f64)>) {
        match self {
            Prepared::Region(r) => r.spans(y, out),
            Prepared::Thick(t) => t.spans(y, out),
            Prepared::Disc(d) => d.spans(y, out),
        }
    }
}

fn prepare(shape: &Shape, size: usize) -> Prepared {
    let s = size as f64;
    match shape {
        Shape::Circle {
            center, diameter, ..
        } => Prepared::Disc(Disc {
            center: to_px(*center, size),
            radius: diameter * s / 2.0,
        }),
        Shape::Ridge { closed, width, .. } => {
            let line: Vec<[f64; 2]> = shape
                .curve(size)
                .expect("ridges have curves")
                .sample(FILL_STEP)
                .iter()
                .map(|p| p.p)
                .collect();
            Prepared::Thick(Thick::new(&line, *closed, width * s / 2.0, size))
        }
        _ => {
            let outline: Vec<[f64; 2]> = shape
                .curve(size)
                .expect("regions have curves")
                .sample(FILL_STEP)
                .iter()
                .map(|p| p.p)
                .collect();
            Prepared::Region(Region::new(&outline, size))
        }
    }
}

fn overlay_at(bumps: &[Bump], u: [f64; 2]) -> f64 {
    bumps
        .iter()
        .map(|b| {
            b.amplitude * (2.0 * PI * (b.frequency[0] * u[0] + b.frequency[1] * u[1]) + b.phase).cos()
        })
        .sum()
}

/// Renders the scene with 8x8 supersampling; intensities are clipped to `[0, 1]`.
pub fn render(spec: &SceneSpec) -> Result<ImageGrid> {
    spec.validate()?;
    let n = spec.size;
    let k = SUPERSAMPLING;
    let prepared: Vec<Prepared> = spec.shapes.iter().map(|s| prepare(s, n)).collect();
    let fills: Vec<&Fill> = spec.shapes.iter().map(fill_of).collect();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|y| {
            let mut acc = vec![0.0; n];
            let mut sub = vec![0.0; n * k];
            let mut spans = Vec::new();
            for sy in 0..k {
                let py = y as f64 - 0.5 + (sy as f64 + 0.5) / k as f64;
                let sx_pos = |s: usize| -0.5 + (s as f64 + 0.5) / k as f64;
                for (s, v) in sub.iter_mut().enumerate() {
                    *v = spec.background.at(to_unit([sx_pos(s), py], n));
                }
                for (shape, fill) in prepared.iter().zip(&fills) {
                    shape.spans(py, &mut spans);
                    for &span in &spans {
                        for s in covered(span, k, n * k) {
                            sub[s] = fill.at(to_unit([sx_pos(s), py], n));
                        }
                    }
                }
                for (x, a) in acc.iter_mut().enumerate() {
                    *a += sub[x * k..(x + 1) * k].iter().sum::<f64>();
                }
            }
            let norm = (k * k) as f64;
            acc.iter()
                .enumerate()
                .map(|(x, a)| {
                    let u = to_unit([x as f64, y as f64], n);
                    (a / norm + overlay_at(&spec.overlay, u)).clamp(0.0, 1.0)
                })
                .collect()
        })
        .collect();
    Grid::from_vec(n, n, rows.concat())
}

/// Ground truth from the continuous geometry.
///
/// Edges and ridges mark every pixel a boundary or centreline passes
/// through, each carrying the attributes of the curve sample nearest its
/// centre; pixels holding a polygon vertex take the incoming edge. Blobs mark
/// the pixel nearest each centre.
pub fn ground_truth(spec: &SceneSpec) -> Result<GroundTruth> {
    spec.validate()?;
    let n = spec.size;
    let mut best: Grid<Option<(f64, GtPoint, bool)>> = Grid::filled(n, n, None);
    let mut blobs = Vec::new();
    for shape in &spec.shapes {
        if let Shape::Circle {
            center, diameter, ..
        } = shape
        {
            blobs.push(BlobTruth {
                center: to_px(*center, n),
                diameter: diameter * n as f64,
            });
            continue;
        }
        let width = match shape {
            Shape::Ridge { width, .. } => Some(width * n as f64),
            _ => None,
        };
        for cp in shape.curve(n).expect("curve shapes").sample(GT_STEP) {
            let (xf, yf) = ((cp.p[0] + 0.5).floor(), (cp.p[1] + 0.5).floor());
            if xf < 0.0 || yf < 0.0 || xf >= n as f64 || yf >= n as f64 {
                continue;
            }
            let (x, y) = (xf as usize, yf as usize);
            let d = (cp.p[0] - xf).hypot(cp.p[1] - yf);
            let point = GtPoint {
                x,
                y,
                orientation: Some(wrap_half_turn(cp.direction)),
                width,
            };
            let slot = best.get_mut(x, y);
            let replace = match slot {
                None => true,
                Some((bd, _, vertex)) => cp.vertex || (!*vertex && d < *bd),
            };
            if replace {
                *slot = Some((d, point, cp.vertex));
            }
        }
    }
    let mut mask = Grid::filled(n, n, false);
    let mut points = Vec::new();
    for y in 0..n {
        for x in 0..n {
            if let Some((_, p, _)) = best.get(x, y) {
                mask.set(x, y, true);
                points.push(*p);
            }
        }
    }
    for b in &blobs {
        let x = (b.center[0].round().max(0.0) as usize).min(n - 1);
        let y = (b.center[1].round().max(0.0) as usize).min(n - 1);
        mask.set(x, y, true);
    }
    Ok(GroundTruth {
        kind: spec.kind,
        mask,
        points,
        blobs,
    })
}

/// Image and ground truth of a scene.
pub fn generate(spec: &SceneSpec) -> Result<(ImageGrid, GroundTruth)> {
    Ok((render(spec)?, ground_truth(spec)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat(kind: SceneKind, shapes: Vec<Shape>) -> SceneSpec {
        SceneSpec {
            kind,
            seed: 0,
            size: 64,
            background: Fill::Constant { value: 0.25 },
            shapes,
            overlay: Vec::new(),
        }
    }

    #[test]
    fn empty_scene_is_flat() {
        let (img, gt) = generate(&flat(SceneKind::Edges, vec![])).unwrap();
        assert!(img.as_slice().iter().all(|&v| (v - 0.25).abs() < 1e-15));
        assert_eq!(gt.mask.count(), 0);
        assert!(gt.points.is_empty() && gt.blobs.is_empty());
    }

    #[test]
    fn square_area_and_boundary_tangents() {
        // axis-aligned square from 16 px to 48 px
        let sq = Shape::Polygon {
            vertices: vec![[0.25, 0.25], [0.75, 0.25], [0.75, 0.75], [0.25, 0.75]],
            fill: Fill::Constant { value: 0.75 },
        };
        let (img, gt) = generate(&flat(SceneKind::Edges, vec![sq])).unwrap();
        let total: f64 = img.as_slice().iter().map(|v| v - 0.25).sum();
        assert!((total - 0.5 * 32.0 * 32.0).abs() < 1e-9);
        // the top side lies on the boundary between rows 15 and 16
        let top: Vec<&GtPoint> = gt.points.iter().filter(|p| p.y == 16 && p.x > 20 && p.x < 44).collect();
        assert!(!top.is_empty());
        assert!(top.iter().all(|p| p.orientation.unwrap().abs() < 1e-12));
        let side = gt.points.iter().find(|p| p.x == 48 && p.y == 30).unwrap();
        assert!((side.orientation.unwrap() + PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn disc_area_matches_its_diameter() {
        let c = Shape::Circle {
            center: [0.5, 0.5],
            diameter: 20.0 / 64.0,
            fill: Fill::Constant { value: 1.0 },
        };
        let (img, gt) = generate(&flat(SceneKind::Blobs, vec![c])).unwrap();
        let area: f64 = img.as_slice().iter().map(|v| (v - 0.25) / 0.75).sum();
        assert!((area - PI * 100.0).abs() < 1.0, "{area}");
        assert_eq!(gt.blobs.len(), 1);
        assert_eq!(gt.blobs[0].center, [31.5, 31.5]);
        assert!((gt.blobs[0].diameter - 20.0).abs() < 1e-12);
    }

    #[test]
    fn ridge_cross_section_has_its_width() {
        let r = Shape::Ridge {
            control: vec![[0.5, 0.0], [0.5, 1.0]],
            closed: false,
            width: 5.0 / 64.0,
            fill: Fill::Constant { value: 0.75 },
        };
        let (img, gt) = generate(&flat(SceneKind::Ridges, vec![r])).unwrap();
        let row: f64 = (0..64).map(|x| (img.get(x, 32) - 0.25) / 0.5).sum();
        assert!((row - 5.0).abs() < 1e-9, "{row}");
        let p = gt.points.iter().find(|p| p.y == 32).unwrap();
        assert_eq!(p.width, Some(5.0));
        assert!((p.orientation.unwrap().abs() - PI / 2.0).abs() < 1e-9);
    }

    #[test]
    fn crowded_ridges_are_rejected() {
        let ridge = |x: f64| Shape::Ridge {
            control: vec![[x, 0.1], [x, 0.9]],
            closed: false,
            width: 6.0 / 64.0,
            fill: Fill::Constant { value: 0.75 },
        };
        let spec = flat(SceneKind::Ridges, vec![ridge(0.3), ridge(0.4)]);
        assert!(matches!(spec.validate(), Err(Error::Config(_))));
        let spec = flat(SceneKind::Ridges, vec![ridge(0.2), ridge(0.8)]);
        assert!(spec.validate().is_ok());
    }

    #[test]
    fn spline_tangents_follow_the_curve() {
        let spec = Preset::Edges1.spec(7);
        let gt = ground_truth(&spec).unwrap();
        for shape in &spec.shapes {
            let Some(curve) = shape.curve(spec.size) else { continue };
            let h = 1e-5;
            for k in 0..curve.n_segments() {
                let (p, _) = curve.eval(k, 0.5);
                let (a, _) = curve.eval(k, 0.5 - h);
                let (b, _) = curve.eval(k, 0.5 + h);
                let fd = wrap_half_turn((b[1] - a[1]).atan2(b[0] - a[0]));
                let (x, y) = ((p[0] + 0.5).floor() as usize, (p[1] + 0.5).floor() as usize);
                if let Some(g) = gt.points.iter().find(|g| g.x == x && g.y == y) {
                    let d = (g.orientation.unwrap() - fd).abs();
                    let d = d.min(PI - d);
                    // the pixel's sample lies within half a pixel of the midpoint
                    assert!(d < 3f64.to_radians(), "{d}");
                }
            }
        }
    }
}
