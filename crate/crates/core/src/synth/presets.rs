use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Bump, Fill, SceneKind, SceneSpec, Shape};

const SIZE: usize = 768;

/// Scene families for benchmarking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// Constant-filled polygons and spline regions.
    Edges1,
    /// More regions with linear intensity gradients, so contrast varies along edges.
    Edges2,
    /// Closed spline ridges of widths 3 to 10 px and constant height.
    Ridges1,
    /// Denser ridges with varying heights.
    Ridges2,
    /// 31 circles, diameters 30 to 50 px, centres at least 100 px apart.
    BlobsLarge,
    /// 200 circles, diameters 7 to 13 px, centres at least 20 px apart.
    BlobsSmall,
}

impl Preset {
    pub const ALL: [Preset; 6] = [
        Preset::Edges1,
        Preset::Edges2,
        Preset::Ridges1,
        Preset::Ridges2,
        Preset::BlobsLarge,
        Preset::BlobsSmall,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Edges1 => "edges1",
            Preset::Edges2 => "edges2",
            Preset::Ridges1 => "ridges1",
            Preset::Ridges2 => "ridges2",
            Preset::BlobsLarge => "blobs-large",
            Preset::BlobsSmall => "blobs-small",
        }
    }

    pub fn kind(self) -> SceneKind {
        match self {
            Preset::Edges1 | Preset::Edges2 => SceneKind::Edges,
            Preset::Ridges1 | Preset::Ridges2 => SceneKind::Ridges,
            Preset::BlobsLarge | Preset::BlobsSmall => SceneKind::Blobs,
        }
    }

    /// Deterministic scene for `seed`.
    pub fn spec(self, seed: u64) -> SceneSpec {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (self as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let shapes = match self {
            Preset::Edges1 => regions(&mut rng, 3, 6, false),
            Preset::Edges2 => regions(&mut rng, 3, 8, true),
            Preset::Ridges1 => ridges(&mut rng, 3, 6, (0.3, 0.45)),
            Preset::Ridges2 => ridges(&mut rng, 3, 9, (0.15, 0.45)),
            Preset::BlobsLarge => circles(&mut rng, 6, 31, (30.0, 50.0), 14.0),
            Preset::BlobsSmall => circles(&mut rng, 15, 200, (7.0, 13.0), 15.0),
        };
        let background = match self.kind() {
            SceneKind::Edges => 0.5,
            SceneKind::Ridges | SceneKind::Blobs => 0.3,
        };
        SceneSpec {
            kind: self.kind(),
            seed,
            size: SIZE,
            background: Fill::Constant { value: background },
            shapes,
            overlay: overlay(&mut rng),
        }
    }
}

impl std::str::FromStr for Preset {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Preset::ALL.iter().map(|p| p.name()).collect();
                format!("unknown preset '{s}' (expected one of {})", names.join(", "))
            })
    }
}

impl std::fmt::Display for Preset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Three cosine terms of amplitude 0.05 at up to 1.5 cycles per canvas.
fn overlay(rng: &mut ChaCha8Rng) -> Vec<Bump> {
    (0..3)
        .map(|_| {
            let f = rng.gen_range(0.5..1.5);
            let dir = rng.gen_range(0.0..PI);
            Bump {
                amplitude: 0.05,
                frequency: [f * dir.cos(), f * dir.sin()],
                phase: rng.gen_range(0.0..2.0 * PI),
            }
        })
        .collect()
}

/// Cells of an `n x n` layout chosen at random, as (centre, half side) in unit coordinates.
fn cells(rng: &mut ChaCha8Rng, n: usize, count: usize) -> Vec<([f64; 2], f64)> {
    let mut idx: Vec<usize> = (0..n * n).collect();
    idx.shuffle(rng);
    let half = 0.5 / n as f64;
    idx.into_iter()
        .take(count)
        .map(|i| {
            let (cx, cy) = ((i % n) as f64 * 2.0 + 1.0, (i / n) as f64 * 2.0 + 1.0);
            ([cx * half, cy * half], half)
        })
        .collect()
}

/// Star-shaped point set around `c` with radii in `[lo, 1] * r`.
fn star(rng: &mut ChaCha8Rng, c: [f64; 2], r: f64, n: usize, lo: f64) -> Vec<[f64; 2]> {
    let phase = rng.gen_range(0.0..2.0 * PI);
    (0..n)
        .map(|i| {
            let jitter = rng.gen_range(-0.25..0.25);
            let a = phase + (i as f64 + jitter) * 2.0 * PI / n as f64;
            let rr = r * rng.gen_range(lo..1.0);
            [c[0] + rr * a.cos(), c[1] + rr * a.sin()]
        })
        .collect()
}

fn contrast_fill(rng: &mut ChaCha8Rng, bg: f64, lo: f64, hi: f64) -> f64 {
    let c = rng.gen_range(lo..hi);
    if rng.gen_bool(0.5) {
        bg + c
    } else {
        bg - c
    }
}

fn regions(rng: &mut ChaCha8Rng, grid: usize, count: usize, gradients: bool) -> Vec<Shape> {
    cells(rng, grid, count)
        .into_iter()
        .enumerate()
        .map(|(i, (c, half))| {
            let r = half * 0.8;
            let value = contrast_fill(rng, 0.5, 0.2, 0.3);
            let fill = if gradients {
                let a = rng.gen_range(0.0..2.0 * PI);
                // at most 0.1 of intensity change across the shape
                let g = 0.1 / (2.0 * r);
                Fill::Linear {
                    origin: c,
                    value,
                    gradient: [g * a.cos(), g * a.sin()],
                }
            } else {
                Fill::Constant { value }
            };
            if i % 2 == 0 {
                let n = rng.gen_range(3..=6);
                Shape::Polygon {
                    vertices: star(rng, c, r, n, 0.8),
                    fill,
                }
            } else {
                let n = rng.gen_range(5..=8);
                Shape::Spline {
                    control: star(rng, c, r, n, 0.65),
                    fill,
                }
            }
        })
        .collect()
}

fn ridges(rng: &mut ChaCha8Rng, grid: usize, count: usize, heights: (f64, f64)) -> Vec<Shape> {
    cells(rng, grid, count)
        .into_iter()
        .map(|(c, half)| {
            let width = rng.gen_range(3.0..=10.0) / SIZE as f64;
            let r = half * 0.8 - width;
            let n = rng.gen_range(5..=7);
            Shape::Ridge {
                control: star(rng, c, r, n, 0.7),
                closed: true,
                width,
                fill: Fill::Constant {
                    value: 0.3 + rng.gen_range(heights.0..heights.1),
                },
            }
        })
        .collect()
}

/// Circles on a jittered `n x n` grid; a jitter of `j` px keeps centres
/// at least `pitch - 2 j` apart.
fn circles(rng: &mut ChaCha8Rng, n: usize, count: usize, diam: (f64, f64), j: f64) -> Vec<Shape> {
    let s = SIZE as f64;
    let jitter = j / s;
    cells(rng, n, count)
        .into_iter()
        .map(|(c, _)| {
            let d = rng.gen_range(diam.0..=diam.1) / s;
            Shape::Circle {
                center: [
                    c[0] + rng.gen_range(-jitter..=jitter),
                    c[1] + rng.gen_range(-jitter..=jitter),
                ],
                diameter: d,
                fill: Fill::Constant {
                    value: 0.3 + rng.gen_range(0.3..0.5),
                },
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn min_center_distance(spec: &SceneSpec) -> f64 {
        let cs: Vec<[f64; 2]> = spec
            .shapes
            .iter()
            .filter_map(|s| match s {
                Shape::Circle { center, .. } => Some(*center),
                _ => None,
            })
            .collect();
        let mut best = f64::INFINITY;
        for i in 0..cs.len() {
            for k in i + 1..cs.len() {
                best = best.min((cs[i][0] - cs[k][0]).hypot(cs[i][1] - cs[k][1]));
            }
        }
        best * SIZE as f64
    }

    fn diameters(spec: &SceneSpec) -> Vec<f64> {
        spec.shapes
            .iter()
            .filter_map(|s| match s {
                Shape::Circle { diameter, .. } => Some(diameter * SIZE as f64),
                _ => None,
            })
            .collect()
    }

    #[test]
    fn blob_presets_have_their_counts_and_spacing() {
        for seed in 0..5 {
            let large = Preset::BlobsLarge.spec(seed);
            assert_eq!(diameters(&large).len(), 31);
            assert!(diameters(&large).iter().all(|&d| (30.0..=50.0).contains(&d)));
            assert!(min_center_distance(&large) >= 100.0);
            let small = Preset::BlobsSmall.spec(seed);
            assert_eq!(diameters(&small).len(), 200);
            assert!(diameters(&small).iter().all(|&d| (7.0..=13.0).contains(&d)));
            assert!(min_center_distance(&small) >= 20.0);
        }
    }

    #[test]
    fn presets_are_valid_and_reproducible() {
        for p in Preset::ALL {
            let a = p.spec(3);
            a.validate().unwrap();
            assert_eq!(a, p.spec(3));
            assert_ne!(a, p.spec(4));
        }
    }

    #[test]
    fn names_round_trip() {
        for p in Preset::ALL {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
        }
        assert!("edges9".parse::<Preset>().is_err());
    }
}
