//! Row-wise span rasterization of regions, thick curves and discs.

/// Horizontal spans `[x0, x1)` covered by a shape on the line `y`.
pub(crate) trait Spans {
    fn spans(&self, y: f64, out: &mut Vec<(f64, f64)>);
}

/// Segment indices grouped by the pixel rows their (dilated) extent touches.
fn bucket(extents: impl Iterator<Item = (f64, f64)>, rows: usize) -> Vec<Vec<u32>> {
    let mut b = vec![Vec::new(); rows];
    for (i, (lo, hi)) in extents.enumerate() {
        let r0 = (lo + 0.5).floor().max(0.0) as usize;
        let r1 = ((hi + 0.5).floor().max(-1.0) + 1.0) as usize;
        for row in b.iter_mut().take(r1.min(rows)).skip(r0) {
            row.push(i as u32);
        }
    }
    b
}

fn row_of(y: f64, rows: usize) -> Option<usize> {
    let r = (y + 0.5).floor();
    (r >= 0.0 && (r as usize) < rows).then_some(r as usize)
}

/// Even-odd filled polygon.
pub(crate) struct Region {
    edges: Vec<([f64; 2], [f64; 2])>,
    buckets: Vec<Vec<u32>>,
}

impl Region {
    pub fn new(outline: &[[f64; 2]], rows: usize) -> Self {
        let n = outline.len();
        let edges: Vec<_> = (0..n).map(|i| (outline[i], outline[(i + 1) % n])).collect();
        let buckets = bucket(edges.iter().map(|(a, b)| (a[1].min(b[1]), a[1].max(b[1]))), rows);
        Region { edges, buckets }
    }
}

impl Spans for Region {
    fn spans(&self, y: f64, out: &mut Vec<(f64, f64)>) {
        out.clear();
        let Some(r) = row_of(y, self.buckets.len()) else {
            return;
        };
        let mut xs: Vec<f64> = self.buckets[r]
            .iter()
            .filter_map(|&i| {
                let (a, b) = self.edges[i as usize];
                ((a[1] <= y) != (b[1] <= y))
                    .then(|| a[0] + (y - a[1]) * (b[0] - a[0]) / (b[1] - a[1]))
            })
            .collect();
        xs.sort_by(f64::total_cmp);
        out.extend(xs.chunks_exact(2).map(|c| (c[0], c[1])));
    }
}

/// Union of capsules of radius `radius` around a polyline.
pub(crate) struct Thick {
    segments: Vec<([f64; 2], [f64; 2])>,
    radius: f64,
    buckets: Vec<Vec<u32>>,
}

impl Thick {
    pub fn new(line: &[[f64; 2]], closed: bool, radius: f64, rows: usize) -> Self {
        let n = line.len();
        let m = if closed { n } else { n - 1 };
        let segments: Vec<_> = (0..m).map(|i| (line[i], line[(i + 1) % n])).collect();
        let buckets = bucket(
            segments
                .iter()
                .map(|(a, b)| (a[1].min(b[1]) - radius, a[1].max(b[1]) + radius)),
            rows,
        );
        Thick {
            segments,
            radius,
            buckets,
        }
    }
}

/// `{x : dist((x, y), segment ab) <= r}` as an interval.
fn capsule_interval(a: [f64; 2], b: [f64; 2], r: f64, y: f64) -> Option<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for c in [a, b] {
        let dy = y - c[1];
        if dy.abs() <= r {
            let h = (r * r - dy * dy).sqrt();
            lo = lo.min(c[0] - h);
            hi = hi.max(c[0] + h);
        }
    }
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len = dx.hypot(dy);
    if len > 0.0 {
        // |n . (p - a)| <= r and 0 <= d . (p - a) <= len^2, both linear in x
        let (nx, ny) = (-dy / len, dx / len);
        let mut iv = (f64::NEG_INFINITY, f64::INFINITY);
        let mut clip = |coef: f64, c0: f64, lower: f64, upper: f64| {
            // lower <= coef * x + c0 <= upper
            if coef.abs() < 1e-15 {
                if c0 < lower || c0 > upper {
                    iv = (1.0, 0.0);
                }
            } else {
                let (p, q) = ((lower - c0) / coef, (upper - c0) / coef);
                iv = (iv.0.max(p.min(q)), iv.1.min(p.max(q)));
            }
        };
        clip(nx, -nx * a[0] + ny * (y - a[1]), -r, r);
        clip(dx, -dx * a[0] + dy * (y - a[1]), 0.0, len * len);
        if iv.0 <= iv.1 {
            lo = lo.min(iv.0);
            hi = hi.max(iv.1);
        }
    }
    (lo <= hi).then_some((lo, hi))
}

impl Spans for Thick {
    fn spans(&self, y: f64, out: &mut Vec<(f64, f64)>) {
        out.clear();
        let Some(r) = row_of(y, self.buckets.len()) else {
            return;
        };
        let mut ivs: Vec<(f64, f64)> = self.buckets[r]
            .iter()
            .filter_map(|&i| {
                let (a, b) = self.segments[i as usize];
                capsule_interval(a, b, self.radius, y)
            })
            .collect();
        ivs.sort_by(|p, q| p.0.total_cmp(&q.0));
        for (lo, hi) in ivs {
            match out.last_mut() {
                Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
                _ => out.push((lo, hi)),
            }
        }
    }
}

pub(crate) struct Disc {
    pub center: [f64; 2],
    pub radius: f64,
}

impl Spans for Disc {
    fn spans(&self, y: f64, out: &mut Vec<(f64, f64)>) {
        out.clear();
        let dy = y - self.center[1];
        if dy.abs() <= self.radius {
            let h = (self.radius * self.radius - dy * dy).sqrt();
            out.push((self.center[0] - h, self.center[0] + h));
        }
    }
}

/// Indices `s` of the subsamples `x_s = -0.5 + (s + 0.5) / k` inside `[x0, x1)`.
pub(crate) fn covered(span: (f64, f64), k: usize, len: usize) -> std::ops::Range<usize> {
    let to_index = |x: f64| ((x + 0.5) * k as f64 - 0.5).ceil().clamp(0.0, len as f64) as usize;
    to_index(span.0)..to_index(span.1)
}
