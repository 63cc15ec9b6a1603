//! Command line front end: `detect`, `synth`, `eval`, `filters` and `bench`.
//!
//! Every subcommand validates its inputs and runs its computation before
//! creating the output directory, so a failed run leaves nothing behind.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bank::MoleculeBank;
use crate::detect::{build_bank_pair, preset_config, scene_feature, Band, DetectorConfig, DetectorOutput};
use crate::error::{Error, Result};
use crate::eval::{evaluate, EvalOptions, EvalReport};
use crate::grid::{BinaryMap, ImageGrid};
use crate::io::{self, bundle, Channel};
use crate::measures::{BlobSymmetry, FeatureKind, FeatureResult, Polarity};
use crate::postprocess::DetectionSet;
use crate::synth::{add_noise, generate, NoiseLevel, Preset, SceneSpec};
use crate::wavelets::{SampleGrid, WaveletSpec};

/// Caps the rayon pool size.
pub const THREADS_ENV: &str = "SYMFEAT_THREADS";

/// File names written by `detect` and read back by `eval`.
pub mod outputs {
    pub const MEASURE: &str = "measure";
    pub const ORIENTATION: &str = "orientation";
    pub const WIDTH: &str = "width";
    pub const HEIGHT: &str = "height";
    pub const THINNED: &str = "binary.png";
    pub const DETECTIONS_CSV: &str = "detections.csv";
    pub const DETECTIONS_JSON: &str = "detections.json";
    pub const MANIFEST: &str = "manifest.json";
    pub const REPORT_JSON: &str = "report.json";
    pub const REPORT_CSV: &str = "report.csv";
}

#[derive(Debug, Parser)]
#[command(name = "symfeat", version, about = "Edge, ridge and blob detection with symmetric molecules")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Detect features in an image and write maps, binary map and detections.
    Detect(DetectArgs),
    /// Render a synthetic scene with its ground-truth bundle.
    Synth(SynthArgs),
    /// Score detect outputs against a ground-truth bundle.
    Eval(EvalArgs),
    /// Dump the molecule filters (and optionally the sampled wavelets).
    Filters(FiltersArgs),
    /// Time and score the detectors on the synthetic presets.
    Bench(BenchArgs),
}

/// Detector parameters; unset flags fall back to the config file, then to the defaults of `--kind`.
#[derive(Debug, Clone, Default, Args)]
pub struct DetectorFlags {
    /// edge, ridge or blob.
    #[arg(long, value_parser = parse_serde::<FeatureKind>)]
    pub kind: Option<FeatureKind>,
    /// JSON file with detector parameters (`maxFeatureWidth`, `beta`, ...).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Odd wavelet, e.g. G1 or HG2.
    #[arg(long)]
    pub odd_wavelet: Option<WaveletSpec>,
    /// Even wavelet, e.g. HG1 or G2.
    #[arg(long)]
    pub even_wavelet: Option<WaveletSpec>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub scales_per_octave: Option<u32>,
    #[arg(long)]
    pub n_orientations: Option<usize>,
    #[arg(long)]
    pub min_feature_width: Option<f64>,
    #[arg(long)]
    pub max_feature_width: Option<f64>,
    #[arg(long)]
    pub max_feature_length: Option<f64>,
    /// Minimal contrast, in units of the intensity scale.
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Scale offset of the secondary system (j_e for edges, j_o otherwise).
    #[arg(long, allow_hyphen_values = true)]
    pub offset: Option<f64>,
    #[arg(long)]
    pub threshold: Option<f64>,
    /// positive, negative or both.
    #[arg(long, value_parser = parse_serde::<Polarity>)]
    pub polarity: Option<Polarity>,
    /// circle or square.
    #[arg(long, value_parser = parse_serde::<BlobSymmetry>)]
    pub blob_symmetry: Option<BlobSymmetry>,
    /// Ridge band `min,max,length`; repeat for several bands.
    #[arg(long = "band", value_parser = parse_band)]
    pub bands: Vec<Band>,
}

#[derive(Debug, Clone, Args)]
pub struct DetectArgs {
    /// 8/16-bit PNG or PGM.
    #[arg(long, short)]
    pub input: PathBuf,
    #[command(flatten)]
    pub detector: DetectorFlags,
    /// Channel of colour inputs; ridges default to green.
    #[arg(long)]
    pub channel: Option<Channel>,
    /// Value of a full-scale pixel after loading.
    #[arg(long, default_value_t = 255.0)]
    pub intensity_scale: f64,
    /// Binary PNG; detections outside it are dropped.
    #[arg(long)]
    pub mask: Option<PathBuf>,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    /// edges1, edges2, ridges1, ridges2, blobs-large or blobs-small.
    #[arg(long, conflicts_with = "spec")]
    pub preset: Option<Preset>,
    /// Scene description in JSON.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long, default_value = "none")]
    pub noise: NoiseLevel,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    /// Ground-truth bundle written by `synth`.
    #[arg(long)]
    pub gt: PathBuf,
    /// Output directory of `detect`.
    #[arg(long)]
    pub det: PathBuf,
    #[arg(long, default_value_t = crate::eval::DEFAULT_GAMMA)]
    pub gamma: f64,
    #[arg(long, default_value_t = crate::eval::DEFAULT_TP_RADIUS)]
    pub tp_radius: f64,
    #[arg(long, default_value_t = crate::eval::DEFAULT_BLOB_RADIUS)]
    pub blob_radius: f64,
    /// Also report the original Pratt figure of merit.
    #[arg(long)]
    pub pratt: bool,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct FiltersArgs {
    #[command(flatten)]
    pub detector: DetectorFlags,
    /// Also write the sampled 1D wavelets as `x,value` CSV.
    #[arg(long)]
    pub wavelets: bool,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Presets to run; all when omitted.
    #[arg(long = "preset")]
    pub presets: Vec<Preset>,
    #[arg(long = "noise", default_values = ["none"])]
    pub noise: Vec<NoiseLevel>,
    /// Seeds 0..n per preset and noise level.
    #[arg(long, default_value_t = 1)]
    pub seeds: u64,
    #[arg(long, short)]
    pub out: PathBuf,
}

fn parse_serde<T: DeserializeOwned>(s: &str) -> std::result::Result<T, String> {
    serde_json::from_value(Value::String(s.to_string())).map_err(|e| e.to_string())
}

fn parse_band(s: &str) -> std::result::Result<Band, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| format!("band '{s}' is not min,max,length"))?;
    match v[..] {
        [min, max, len] => Ok(Band {
            min_feature_width: min,
            max_feature_width: max,
            max_feature_length: len,
        }),
        _ => Err(format!("band '{s}' needs three numbers")),
    }
}

fn overlay(base: &mut Value, patch: Value) {
    if let (Some(b), Value::Object(p)) = (base.as_object_mut(), patch) {
        for (k, v) in p {
            b.insert(k, v);
        }
    }
}

impl DetectorFlags {
    /// Defaults of the chosen kind, overlaid with the config file, overlaid with flags.
    pub fn resolve(&self) -> Result<DetectorConfig> {
        let file: Value = match &self.config {
            Some(p) => io::read_json(p)?,
            None => Value::Object(Default::default()),
        };
        if !file.is_object() {
            return Err(Error::config("config file must hold a JSON object"));
        }
        let kind = match self.kind {
            Some(k) => k,
            None => match file.get("kind") {
                Some(k) => serde_json::from_value(k.clone())
                    .map_err(|e| Error::config(format!("config kind: {e}")))?,
                None => return Err(Error::config("choose a feature kind with --kind or a config \"kind\"")),
            },
        };
        let mut v = serde_json::to_value(DetectorConfig::defaults(kind))?;
        overlay(&mut v, file);
        let mut flags = serde_json::Map::new();
        let mut put = |k: &str, x: Option<Value>| {
            if let Some(x) = x {
                flags.insert(k.to_string(), x);
            }
        };
        put("kind", Some(serde_json::to_value(kind)?));
        put("oddWavelet", self.odd_wavelet.map(|w| json!(w)));
        put("evenWavelet", self.even_wavelet.map(|w| json!(w)));
        put("alpha", self.alpha.map(|x| json!(x)));
        put("scalesPerOctave", self.scales_per_octave.map(|x| json!(x)));
        put("nOrientations", self.n_orientations.map(|x| json!(x)));
        put("minFeatureWidth", self.min_feature_width.map(|x| json!(x)));
        put("maxFeatureWidth", self.max_feature_width.map(|x| json!(x)));
        put("maxFeatureLength", self.max_feature_length.map(|x| json!(x)));
        put("beta", self.beta.map(|x| json!(x)));
        put("epsilon", self.epsilon.map(|x| json!(x)));
        put("offset", self.offset.map(|x| json!(x)));
        put("threshold", self.threshold.map(|x| json!(x)));
        put("polarity", self.polarity.map(|x| json!(x)));
        put("blobSymmetry", self.blob_symmetry.map(|x| json!(x)));
        if !self.bands.is_empty() {
            put("bands", Some(serde_json::to_value(&self.bands)?));
        }
        overlay(&mut v, Value::Object(flags));
        let cfg: DetectorConfig =
            serde_json::from_value(v).map_err(|e| Error::config(format!("detector config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Parses `args` and runs the subcommand.
pub fn run<I, T>(args: I) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| Error::Config(e.to_string()))?;
    dispatch(cli.command)
}

/// Entry point of the binary; returns the process exit code.
pub fn main() -> i32 {
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return e.exit_code();
    }
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::config(format!("{THREADS_ENV} must be a positive integer, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::config(format!("thread pool: {e}")))
}

fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::Detect(a) => cmd_detect(&a),
        Command::Synth(a) => cmd_synth(&a),
        Command::Eval(a) => cmd_eval(&a).map(|_| ()),
        Command::Filters(a) => cmd_filters(&a),
        Command::Bench(a) => cmd_bench(&a).map(|_| ()),
    }
}

fn create_out(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn require_file(p: &Path) -> Result<()> {
    if p.is_file() {
        Ok(())
    } else {
        Err(Error::io(
            p,
            std::io::Error::new(std::io::ErrorKind::NotFound, "no such file"),
        ))
    }
}

#[derive(Serialize)]
struct Manifest<'a, T: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    args: Vec<String>,
    #[serde(flatten)]
    body: &'a T,
}

fn write_manifest<T: Serialize>(dir: &Path, command: &'static str, body: &T) -> Result<()> {
    let m = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command,
        args: std::env::args().collect(),
        body,
    };
    io::write_json(&dir.join(outputs::MANIFEST), &m)
}

/// Detect: image in, maps and detections out.
pub fn cmd_detect(a: &DetectArgs) -> Result<()> {
    let cfg = a.detector.resolve()?;
    if !(a.intensity_scale > 0.0 && a.intensity_scale.is_finite()) {
        return Err(Error::config("intensity scale must be positive"));
    }
    require_file(&a.input)?;
    let channel = match a.channel {
        Some(c) => c,
        None if cfg.kind == FeatureKind::Ridge && io::is_colour(&a.input)? => Channel::Green,
        None => Channel::Auto,
    };
    let image = io::read_image(&a.input, channel, a.intensity_scale)?;
    let mask = a.mask.as_deref().map(io::read_mask_png).transpose()?;
    let t = Instant::now();
    let out = crate::detect::detect(&image, &cfg, mask.as_ref())?;
    let seconds = t.elapsed().as_secs_f64();
    create_out(&a.out)?;
    write_detect_outputs(&a.out, &out)?;
    write_manifest(
        &a.out,
        "detect",
        &json!({
            "input": a.input,
            "channel": channel,
            "intensityScale": a.intensity_scale,
            "mask": a.mask,
            "config": cfg,
            "imageWidth": image.width(),
            "imageHeight": image.height(),
            "detections": out.set.len(),
            "seconds": seconds,
        }),
    )?;
    log::info!("{} {} detections in {seconds:.2} s", out.set.len(), cfg.kind);
    Ok(())
}

fn finite_range(g: &ImageGrid) -> (f64, f64) {
    g.as_slice()
        .iter()
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
}

fn write_map(dir: &Path, name: &str, g: &ImageGrid, lo: f64, hi: f64) -> Result<()> {
    io::write_raw(&dir.join(format!("{name}.f64")), g)?;
    io::write_png16(&dir.join(format!("{name}.png")), g, lo, hi)
}

/// Writes the maps of `r` as raw f64 (with JSON sidecar) and 16-bit PNG.
pub fn write_maps(dir: &Path, r: &FeatureResult) -> Result<()> {
    use std::f64::consts::FRAC_PI_2;
    write_map(dir, outputs::MEASURE, &r.measure, 0.0, 1.0)?;
    if let Some(o) = &r.orientation {
        write_map(dir, outputs::ORIENTATION, o, -FRAC_PI_2, FRAC_PI_2)?;
    }
    if let Some(w) = &r.width {
        let (_, hi) = finite_range(w);
        write_map(dir, outputs::WIDTH, w, 0.0, if hi.is_finite() { hi } else { 1.0 })?;
    }
    let m = r.height.max_abs();
    write_map(dir, outputs::HEIGHT, &r.height, -m, m)
}

fn write_detect_outputs(dir: &Path, out: &DetectorOutput) -> Result<()> {
    write_maps(dir, &out.result)?;
    io::write_mask_png(&dir.join(outputs::THINNED), &out.map)?;
    io::write_detections_csv(&dir.join(outputs::DETECTIONS_CSV), &out.set)?;
    io::write_json(&dir.join(outputs::DETECTIONS_JSON), &out.set)
}

/// Synth: scene spec or preset in, image and ground-truth bundle out.
pub fn cmd_synth(a: &SynthArgs) -> Result<()> {
    let spec: SceneSpec = match (&a.preset, &a.spec) {
        (Some(p), None) => p.spec(a.seed),
        (None, Some(path)) => io::read_json(path)?,
        _ => return Err(Error::config("give exactly one of --preset and --spec")),
    };
    spec.validate()?;
    let (clean, gt) = generate(&spec)?;
    let image = add_noise(&clean, a.noise, a.seed);
    create_out(&a.out)?;
    io::write_png16(&a.out.join(bundle::IMAGE), &image, 0.0, 1.0)?;
    io::write_raw(&a.out.join(bundle::IMAGE_RAW), &image)?;
    io::write_ground_truth(&a.out, &spec, &gt)?;
    write_manifest(
        &a.out,
        "synth",
        &json!({ "preset": a.preset, "noise": a.noise, "seed": a.seed }),
    )
}

fn read_detect_outputs(dir: &Path) -> Result<(DetectionSet, BinaryMap)> {
    let set: DetectionSet = io::read_json(&dir.join(outputs::DETECTIONS_JSON))?;
    let map = io::read_mask_png(&dir.join(outputs::THINNED))?;
    Ok((set, map))
}

/// Eval: ground-truth bundle and detect outputs in, report out.
pub fn cmd_eval(a: &EvalArgs) -> Result<EvalReport> {
    let gt = io::read_ground_truth(&a.gt)?;
    let (set, map) = read_detect_outputs(&a.det)?;
    let manifest: Option<Value> = io::read_json(&a.det.join(outputs::MANIFEST)).ok();
    if let Some(k) = manifest
        .as_ref()
        .and_then(|m| m["config"]["kind"].as_str())
        .and_then(|k| parse_serde::<FeatureKind>(k).ok())
    {
        if k != scene_feature(gt.kind) {
            return Err(Error::config(format!(
                "detections are {k} features but the scene holds {:?}",
                gt.kind
            )));
        }
    }
    let opts = EvalOptions {
        gamma: a.gamma,
        tp_radius: a.tp_radius,
        blob_radius: a.blob_radius,
        pratt: a.pratt,
    };
    let report = evaluate(&gt, &set, &map, &opts)?;
    create_out(&a.out)?;
    io::write_json(&a.out.join(outputs::REPORT_JSON), &report)?;
    write_report_csv(&a.out.join(outputs::REPORT_CSV), &[(a.det.display().to_string(), &report)], &[])?;
    Ok(report)
}

fn write_report_csv(path: &Path, rows: &[(String, &EvalReport)], extra: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header: Vec<String> = EvalReport::CSV_HEADER.iter().map(|s| s.to_string()).collect();
    if !extra.is_empty() {
        header.extend(["preset", "noise", "seed", "synth_s", "detect_s", "eval_s"].map(String::from));
    }
    w.write_record(&header)?;
    for (i, (source, r)) in rows.iter().enumerate() {
        let mut row = r.csv_row(source);
        if let Some(e) = extra.get(i) {
            row.extend(e.iter().cloned());
        }
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn dump_bank(dir: &Path, bank: &MoleculeBank) -> Result<()> {
    create_out(dir)?;
    for j in 0..bank.n_scales() {
        for t in 0..bank.n_orientations() {
            let f = bank.filter(j, t);
            let side = f.side();
            let g = ImageGrid::from_vec(side, side, f.data().to_vec())?;
            let m = g.max_abs();
            write_map(dir, &format!("j{j:02}_t{t:02}"), &g, -m, m)?;
        }
    }
    io::write_json(&dir.join("params.json"), bank.params())
}

fn write_wavelet_csv(path: &Path, spec: WaveletSpec) -> Result<()> {
    let w = spec.build(SampleGrid::default())?;
    let mut out = csv::Writer::from_path(path)?;
    out.write_record(["x", "value"])?;
    for (x, v) in w.abscissae().zip(w.samples()) {
        out.write_record([format!("{x:.9}"), format!("{v:.12e}")])?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// Filters: writes every filter of both molecule systems.
pub fn cmd_filters(a: &FiltersArgs) -> Result<()> {
    let cfg = a.detector.resolve()?;
    let users = if cfg.bands.is_empty() {
        vec![cfg.user_params()]
    } else {
        cfg.bands
            .iter()
            .map(|b| crate::bank::UserParams {
                min_feature_width: b.min_feature_width,
                max_feature_width: b.max_feature_width,
                max_feature_length: b.max_feature_length,
                ..cfg.user_params()
            })
            .collect()
    };
    let pairs = users
        .iter()
        .map(|u| build_bank_pair(&cfg, u))
        .collect::<Result<Vec<_>>>()?;
    create_out(&a.out)?;
    for (i, (p, s)) in pairs.iter().enumerate() {
        let band = if pairs.len() > 1 { format!("band{i}_") } else { String::new() };
        dump_bank(&a.out.join(format!("{band}primary")), p)?;
        dump_bank(&a.out.join(format!("{band}secondary")), s)?;
    }
    if a.wavelets {
        write_wavelet_csv(&a.out.join("odd_wavelet.csv"), cfg.odd_wavelet)?;
        write_wavelet_csv(&a.out.join("even_wavelet.csv"), cfg.even_wavelet)?;
    }
    write_manifest(&a.out, "filters", &json!({ "config": cfg }))
}

/// One bench case.
#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub preset: Preset,
    pub noise: NoiseLevel,
    pub seed: u64,
    pub synth_seconds: f64,
    pub detect_seconds: f64,
    pub eval_seconds: f64,
    pub report: EvalReport,
}

/// Generates, detects and scores one preset scene with its benchmark detector.
pub fn bench_case(preset: Preset, noise: NoiseLevel, seed: u64) -> Result<BenchRow> {
    let t = Instant::now();
    let (clean, gt) = generate(&preset.spec(seed))?;
    let image = add_noise(&clean, noise, seed);
    let synth_seconds = t.elapsed().as_secs_f64();
    let t = Instant::now();
    let out = crate::detect::detect(&image, &preset_config(preset), None)?;
    let detect_seconds = t.elapsed().as_secs_f64();
    let t = Instant::now();
    let report = evaluate(&gt, &out.set, &out.map, &EvalOptions::default())?;
    Ok(BenchRow {
        preset,
        noise,
        seed,
        synth_seconds,
        detect_seconds,
        eval_seconds: t.elapsed().as_secs_f64(),
        report,
    })
}

/// Bench: timing and accuracy table over presets, noise levels and seeds.
pub fn cmd_bench(a: &BenchArgs) -> Result<Vec<BenchRow>> {
    if a.seeds == 0 {
        return Err(Error::config("--seeds must be at least 1"));
    }
    let presets = if a.presets.is_empty() {
        Preset::ALL.to_vec()
    } else {
        a.presets.clone()
    };
    let mut rows = Vec::new();
    for &p in &presets {
        for &n in &a.noise {
            for seed in 0..a.seeds {
                let r = bench_case(p, n, seed)?;
                eprintln!(
                    "{p:<12} {:<7} seed {seed}: detect {:.2} s, fom {}, tp {}",
                    format!("{n:?}").to_lowercase(),
                    r.detect_seconds,
                    r.report.fom.map_or("-".into(), |v| format!("{v:.3}")),
                    r.report.tp.map_or("-".into(), |v| v.to_string()),
                );
                rows.push(r);
            }
        }
    }
    create_out(&a.out)?;
    let named: Vec<(String, &EvalReport)> = rows.iter().map(|r| (r.preset.to_string(), &r.report)).collect();
    let extra: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.preset.to_string(),
                format!("{:?}", r.noise).to_lowercase(),
                r.seed.to_string(),
                format!("{:.4}", r.synth_seconds),
                format!("{:.4}", r.detect_seconds),
                format!("{:.4}", r.eval_seconds),
            ]
        })
        .collect();
    write_report_csv(&a.out.join("bench.csv"), &named, &extra)?;
    io::write_json(&a.out.join("bench.json"), &rows)?;
    write_manifest(&a.out, "bench", &json!({ "presets": presets, "noise": a.noise, "seeds": a.seeds }))?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags(kind: FeatureKind) -> DetectorFlags {
        DetectorFlags {
            kind: Some(kind),
            ..Default::default()
        }
    }

    #[test]
    fn flags_override_file_overrides_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.json");
        std::fs::write(&p, r#"{"maxFeatureLength": 30, "beta": 5, "kind": "blob"}"#).unwrap();
        let f = DetectorFlags {
            kind: Some(FeatureKind::Ridge),
            config: Some(p.clone()),
            beta: Some(7.0),
            ..Default::default()
        };
        let c = f.resolve().unwrap();
        assert_eq!(c.kind, FeatureKind::Ridge);
        assert_eq!(c.max_feature_length, 30.0);
        assert_eq!(c.beta, 7.0);
        assert_eq!(c.alpha, DetectorConfig::defaults(FeatureKind::Ridge).alpha);
        let c = DetectorFlags {
            config: Some(p),
            ..Default::default()
        }
        .resolve()
        .unwrap();
        assert_eq!(c.kind, FeatureKind::Blob);
        assert_eq!(c.beta, 5.0);
    }

    #[test]
    fn resolve_rejects_bad_values() {
        assert!(DetectorFlags::default().resolve().is_err());
        let mut f = flags(FeatureKind::Edge);
        f.alpha = Some(2.0);
        assert_eq!(f.resolve().unwrap_err().exit_code(), 1);
    }

    #[test]
    fn band_and_enum_parsers() {
        let b = parse_band("2, 8,24").unwrap();
        assert_eq!(b.max_feature_length, 24.0);
        assert!(parse_band("2,8").is_err());
        assert_eq!(parse_serde::<Polarity>("negative").unwrap(), Polarity::Negative);
        assert!(parse_serde::<FeatureKind>("corner").is_err());
    }

    #[test]
    fn usage_errors_map_to_exit_code_one() {
        let e = run(["symfeat", "detect", "--bogus"]).unwrap_err();
        assert_eq!(e.exit_code(), 1);
    }
}
