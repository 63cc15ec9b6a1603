//! Library pipeline runs and randomized properties.

use std::f64::consts::PI;

use proptest::prelude::*;

use symfeat::detect::{detect, preset_config, DetectorConfig};
use symfeat::eval::{evaluate, fom, EvalOptions};
use symfeat::measures::{wrap_half_turn, FeatureKind};
use symfeat::synth::{add_noise, generate, Fill, NoiseLevel, Preset, SceneKind, SceneSpec, Shape};
use symfeat::{BinaryMap, Grid, ImageGrid};

fn scene(size: usize, kind: SceneKind, shape: Shape) -> SceneSpec {
    SceneSpec {
        kind,
        seed: 0,
        size,
        background: Fill::Constant { value: 0.3 },
        shapes: vec![shape],
        overlay: vec![],
    }
}

#[test]
fn polygon_edges_are_recovered_on_a_small_canvas() {
    let spec = scene(
        160,
        SceneKind::Edges,
        Shape::Polygon {
            vertices: vec![[0.2, 0.25], [0.82, 0.3], [0.55, 0.8]],
            fill: Fill::Constant { value: 0.75 },
        },
    );
    let (img, gt) = generate(&spec).unwrap();
    let out = detect(&img, &preset_config(Preset::Edges1), None).unwrap();
    let r = evaluate(&gt, &out.set, &out.map, &EvalOptions::default()).unwrap();
    assert!(r.fom.unwrap() > 0.85, "{r:?}");
    assert!(r.mae_orientation.unwrap() < 5.0, "{r:?}");
}

#[test]
fn ridge_width_is_recovered_under_medium_noise() {
    let control: Vec<[f64; 2]> = (0..7)
        .map(|i| {
            let a = 2.0 * PI * i as f64 / 7.0;
            [0.5 + 0.33 * a.cos(), 0.5 + 0.3 * a.sin()]
        })
        .collect();
    let spec = scene(
        192,
        SceneKind::Ridges,
        Shape::Ridge {
            control,
            closed: true,
            width: 6.0 / 192.0,
            fill: Fill::Constant { value: 0.7 },
        },
    );
    let (clean, gt) = generate(&spec).unwrap();
    let img = add_noise(&clean, NoiseLevel::Medium, 1);
    let out = detect(&img, &preset_config(Preset::Ridges1), None).unwrap();
    let r = evaluate(&gt, &out.set, &out.map, &EvalOptions::default()).unwrap();
    assert!(r.fom.unwrap() > 0.8, "{r:?}");
    assert!(r.mae_width.unwrap() < 1.0, "{r:?}");
    assert!(r.sr.unwrap() > 0.9, "{r:?}");
}

#[test]
fn single_disc_is_one_blob_with_its_diameter() {
    let spec = scene(
        128,
        SceneKind::Blobs,
        Shape::Circle {
            center: [0.5, 0.5],
            diameter: 24.0 / 128.0,
            fill: Fill::Constant { value: 0.8 },
        },
    );
    let (img, gt) = generate(&spec).unwrap();
    let mut cfg = DetectorConfig::defaults(FeatureKind::Blob).rescaled(1.0);
    cfg.max_feature_width = 40.0;
    cfg.max_feature_length = 40.0;
    let out = detect(&img, &cfg, None).unwrap();
    assert_eq!(out.set.len(), 1, "{:?}", out.set);
    let p = &out.set.points[0];
    let [cx, cy] = p.position();
    assert!((cx - 63.5).abs() < 1.0 && (cy - 63.5).abs() < 1.0, "{cx} {cy}");
    assert!((p.width.unwrap() - gt.blobs[0].diameter).abs() < 4.0, "{p:?}");
}

#[test]
fn mask_restricts_detections() {
    let img = ImageGrid::from_fn(64, 64, |x, _| if x < 32 { 0.2 } else { 0.8 });
    let cfg = DetectorConfig::defaults(FeatureKind::Edge).rescaled(1.0);
    let full = detect(&img, &cfg, None).unwrap();
    let mask = Grid::from_fn(64, 64, |_, y| y < 20);
    let part = detect(&img, &cfg, Some(&mask)).unwrap();
    assert!(part.set.len() < full.set.len());
    assert!(part.set.points.iter().all(|p| p.y < 20));
    assert!(detect(&img, &cfg, Some(&Grid::filled(10, 10, true))).is_err());
}

fn mask_strategy() -> impl Strategy<Value = BinaryMap> {
    prop::collection::vec((0usize..32, 0usize..32), 1..30).prop_map(|pts| {
        let mut m = Grid::filled(32, 32, false);
        for (x, y) in pts {
            m.set(x, y, true);
        }
        m
    })
}

proptest! {
    #[test]
    fn wrapped_angles_stay_on_the_half_turn(theta in -50.0f64..50.0) {
        let w = wrap_half_turn(theta);
        prop_assert!((-PI / 2.0..PI / 2.0).contains(&w));
        let k = ((theta - w) / PI).round();
        prop_assert!((theta - w - k * PI).abs() < 1e-9);
    }

    #[test]
    fn fom_is_a_score_and_perfect_on_itself(a in mask_strategy(), b in mask_strategy()) {
        let v = fom(&a, &b, 1.0 / 9.0).unwrap();
        prop_assert!((0.0..=1.0).contains(&v));
        prop_assert_eq!(fom(&a, &a, 1.0 / 9.0).unwrap(), 1.0);
    }

    #[test]
    fn edge_measure_lies_in_the_unit_interval(seed in 0u64..1000, contrast in 0.05f64..3.0) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let img = ImageGrid::from_fn(24, 24, |_, _| contrast * rng.gen::<f64>());
        let cfg = DetectorConfig::defaults(FeatureKind::Edge).rescaled(1.0);
        let out = detect(&img, &cfg, None).unwrap();
        prop_assert!(out.result.measure.as_slice().iter().all(|m| (0.0..=1.0).contains(m)));
        let o = out.result.orientation.unwrap();
        prop_assert!(o.as_slice().iter().all(|t| (-PI / 2.0..PI / 2.0).contains(t)));
    }
}
