//! Closed and open curves on the unit square: uniform Catmull-Rom splines
//! through control points and polygons.

/// A point on a densely sampled curve, in pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub p: [f64; 2],
    /// Direction of travel, `atan2(dy, dx)` in the (column, row) frame.
    pub direction: f64,
    /// Arc length from the start, in pixels.
    pub s: f64,
    /// Set on polygon vertices, which carry the incoming edge direction.
    pub vertex: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Spline,
    Polygon,
}

/// Curve through `points` (already in pixel coordinates).
#[derive(Debug, Clone)]
pub struct Curve {
    kind: CurveKind,
    points: Vec<[f64; 2]>,
    closed: bool,
}

fn lerp(a: [f64; 2], b: [f64; 2], t: f64) -> [f64; 2] {
    [a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t]
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

impl Curve {
    pub fn new(kind: CurveKind, points: Vec<[f64; 2]>, closed: bool) -> Self {
        Curve {
            kind,
            points,
            closed,
        }
    }

    pub fn n_segments(&self) -> usize {
        if self.closed {
            self.points.len()
        } else {
            self.points.len() - 1
        }
    }

    fn control(&self, i: isize) -> [f64; 2] {
        let n = self.points.len() as isize;
        if self.closed {
            self.points[i.rem_euclid(n) as usize]
        } else {
            // open ends repeat the end point
            self.points[i.clamp(0, n - 1) as usize]
        }
    }

    /// Position and derivative on segment `k` at `t` in `[0, 1]`.
    pub fn eval(&self, k: usize, t: f64) -> ([f64; 2], [f64; 2]) {
        let k = k as isize;
        let (p1, p2) = (self.control(k), self.control(k + 1));
        match self.kind {
            CurveKind::Polygon => (lerp(p1, p2, t), [p2[0] - p1[0], p2[1] - p1[1]]),
            CurveKind::Spline => {
                let (p0, p3) = (self.control(k - 1), self.control(k + 2));
                let mut pos = [0.0; 2];
                let mut der = [0.0; 2];
                for d in 0..2 {
                    let (a, b, c, e) = (p0[d], p1[d], p2[d], p3[d]);
                    let c1 = -a + c;
                    let c2 = 2.0 * a - 5.0 * b + 4.0 * c - e;
                    let c3 = -a + 3.0 * b - 3.0 * c + e;
                    pos[d] = 0.5 * (2.0 * b + c1 * t + c2 * t * t + c3 * t * t * t);
                    der[d] = 0.5 * (c1 + 2.0 * c2 * t + 3.0 * c3 * t * t);
                }
                (pos, der)
            }
        }
    }

    fn segment_bound(&self, k: usize) -> f64 {
        let k = k as isize;
        match self.kind {
            CurveKind::Polygon => dist(self.control(k), self.control(k + 1)),
            CurveKind::Spline => {
                // control polygon of the equivalent Bezier segment bounds the length
                let (p0, p1, p2, p3) = (
                    self.control(k - 1),
                    self.control(k),
                    self.control(k + 1),
                    self.control(k + 2),
                );
                let b1 = [p1[0] + (p2[0] - p0[0]) / 6.0, p1[1] + (p2[1] - p0[1]) / 6.0];
                let b2 = [p2[0] - (p3[0] - p1[0]) / 6.0, p2[1] - (p3[1] - p1[1]) / 6.0];
                dist(p1, b1) + dist(b1, b2) + dist(b2, p2)
            }
        }
    }

    /// Samples with spacing at most `step` pixels.
    ///
    /// Each segment contributes `t` in `(0, 1]`, so a polygon vertex belongs to
    /// its incoming edge; open curves also get their starting point.
    pub fn sample(&self, step: f64) -> Vec<CurvePoint> {
        let mut out = Vec::new();
        let mut s = 0.0;
        let (start, d0) = self.eval(0, 0.0);
        let mut last = start;
        if !self.closed {
            out.push(CurvePoint {
                p: start,
                direction: d0[1].atan2(d0[0]),
                s: 0.0,
                vertex: self.kind == CurveKind::Polygon,
            });
        }
        for k in 0..self.n_segments() {
            let n = (self.segment_bound(k) / step).ceil().max(1.0) as usize;
            for i in 1..=n {
                let t = i as f64 / n as f64;
                let (p, d) = self.eval(k, t);
                s += dist(p, last);
                last = p;
                out.push(CurvePoint {
                    p,
                    direction: d[1].atan2(d[0]),
                    s,
                    vertex: self.kind == CurveKind::Polygon && i == n,
                });
            }
        }
        out
    }
}
