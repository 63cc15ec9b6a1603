//! Reading images and writing maps, detections and ground-truth bundles.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use image::{DynamicImage, ImageBuffer, Luma};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{BinaryMap, Grid, ImageGrid};
use crate::postprocess::DetectionSet;
use crate::synth::{BlobTruth, GroundTruth, GtPoint, SceneKind, SceneSpec};

/// Which channel of a colour image to analyze.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    /// Grayscale images as they are; colour images are rejected.
    #[default]
    Auto,
    /// Luma of colour images.
    Gray,
    Red,
    Green,
    Blue,
}

impl std::str::FromStr for Channel {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "auto" => Ok(Channel::Auto),
            "gray" | "grey" | "luma" => Ok(Channel::Gray),
            "red" | "r" => Ok(Channel::Red),
            "green" | "g" => Ok(Channel::Green),
            "blue" | "b" => Ok(Channel::Blue),
            _ => Err(format!("unknown channel '{s}' (auto, gray, red, green, blue)")),
        }
    }
}

fn open_image(path: &Path) -> Result<DynamicImage> {
    let reader = image::ImageReader::open(path)
        .map_err(|e| Error::io(path, e))?
        .with_guessed_format()
        .map_err(|e| Error::io(path, e))?;
    Ok(reader.decode()?)
}

/// Reads an 8/16-bit PNG or PGM as intensities in `[0, scale]`.
pub fn read_image(path: &Path, channel: Channel, scale: f64) -> Result<ImageGrid> {
    let img = open_image(path)?;
    let (w, h) = (img.width() as usize, img.height() as usize);
    let colour = img.color().has_color();
    let data: Vec<f64> = match (colour, channel) {
        (false, _) | (true, Channel::Gray) => img
            .to_luma16()
            .into_raw()
            .into_iter()
            .map(|v| v as f64 / 65535.0 * scale)
            .collect(),
        (true, Channel::Auto) => {
            return Err(Error::InvalidInput(format!(
                "{} is a colour image; choose a channel (red, green, blue or gray)",
                path.display()
            )))
        }
        (true, c) => {
            let k = match c {
                Channel::Red => 0,
                Channel::Green => 1,
                _ => 2,
            };
            img.to_rgb16()
                .pixels()
                .map(|p| p.0[k] as f64 / 65535.0 * scale)
                .collect()
        }
    };
    Grid::from_vec(w, h, data)
}

pub fn is_colour(path: &Path) -> Result<bool> {
    Ok(open_image(path)?.color().has_color())
}

/// Writes `grid` as a 16-bit grayscale PNG, mapping `[lo, hi]` onto the full range.
///
/// Non-finite values are written as 0.
pub fn write_png16(path: &Path, grid: &ImageGrid, lo: f64, hi: f64) -> Result<()> {
    let span = if hi > lo { hi - lo } else { 1.0 };
    let buf: Vec<u16> = grid
        .as_slice()
        .iter()
        .map(|&v| {
            if v.is_finite() {
                (((v - lo) / span).clamp(0.0, 1.0) * 65535.0).round() as u16
            } else {
                0
            }
        })
        .collect();
    let img: ImageBuffer<Luma<u16>, Vec<u16>> =
        ImageBuffer::from_raw(grid.width() as u32, grid.height() as u32, buf)
            .expect("buffer matches dimensions");
    img.save(path)?;
    Ok(())
}

pub fn write_mask_png(path: &Path, mask: &BinaryMap) -> Result<()> {
    let buf: Vec<u8> = mask.as_slice().iter().map(|&b| if b { 255 } else { 0 }).collect();
    let img: ImageBuffer<Luma<u8>, Vec<u8>> =
        ImageBuffer::from_raw(mask.width() as u32, mask.height() as u32, buf)
            .expect("buffer matches dimensions");
    img.save(path)?;
    Ok(())
}

/// Reads a binary mask; any nonzero pixel is on.
pub fn read_mask_png(path: &Path) -> Result<BinaryMap> {
    let img = open_image(path)?.to_luma16();
    let (w, h) = (img.width() as usize, img.height() as usize);
    Grid::from_vec(w, h, img.into_raw().into_iter().map(|v| v > 0).collect())
}

/// Sidecar describing a raw float map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawHeader {
    /// `[height, width]`.
    pub shape: [usize; 2],
    pub dtype: String,
    pub endianness: String,
    pub order: String,
}

fn sidecar(path: &Path) -> PathBuf {
    path.with_extension("json")
}

/// Writes row-major little-endian f64 to `path` and a JSON header next to it.
pub fn write_raw(path: &Path, grid: &ImageGrid) -> Result<()> {
    let mut out = BufWriter::new(File::create(path).map_err(|e| Error::io(path, e))?);
    for v in grid.as_slice() {
        out.write_all(&v.to_le_bytes()).map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))?;
    let header = RawHeader {
        shape: [grid.height(), grid.width()],
        dtype: "f64".into(),
        endianness: "little".into(),
        order: "row-major".into(),
    };
    write_json(&sidecar(path), &header)
}

pub fn read_raw(path: &Path) -> Result<ImageGrid> {
    let header: RawHeader = read_json(&sidecar(path))?;
    if header.dtype != "f64" || header.endianness != "little" {
        return Err(Error::InvalidInput(format!(
            "{}: unsupported raw layout {} / {}",
            path.display(),
            header.dtype,
            header.endianness
        )));
    }
    let mut bytes = Vec::new();
    File::open(path)
        .map_err(|e| Error::io(path, e))?
        .read_to_end(&mut bytes)
        .map_err(|e| Error::io(path, e))?;
    let [h, w] = header.shape;
    if bytes.len() != 8 * w * h {
        return Err(Error::InvalidInput(format!(
            "{}: {} bytes for a {w}x{h} f64 map",
            path.display(),
            bytes.len()
        )));
    }
    let data = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect();
    Grid::from_vec(w, h, data)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_reader(BufReader::new(file))?)
}

fn csv_writer(path: &Path) -> Result<csv::Writer<File>> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

fn opt(v: Option<f64>) -> String {
    v.map_or(String::new(), |v| format!("{v:.6}"))
}

/// `x, y, orientation_deg, width, height` plus blob centroids when present.
pub fn write_detections_csv(path: &Path, set: &DetectionSet) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["x", "y", "orientation_deg", "width", "height", "cx", "cy"])?;
    for p in &set.points {
        let [cx, cy] = p.position();
        w.write_record([
            p.x.to_string(),
            p.y.to_string(),
            opt(p.orientation.map(f64::to_degrees)),
            opt(p.width),
            format!("{:.6}", p.height),
            format!("{cx:.4}"),
            format!("{cy:.4}"),
        ])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// File names inside a ground-truth bundle directory.
pub mod bundle {
    pub const IMAGE: &str = "image.png";
    pub const IMAGE_RAW: &str = "image.f64";
    pub const SPEC: &str = "spec.json";
    pub const MASK: &str = "gt_mask.png";
    pub const ATTRIBUTES: &str = "gt_attributes.csv";
    pub const BLOBS: &str = "gt_blobs.csv";
}

/// Writes the scene description, mask, per-pixel attributes and blob centres.
pub fn write_ground_truth(dir: &Path, spec: &SceneSpec, gt: &GroundTruth) -> Result<()> {
    write_json(&dir.join(bundle::SPEC), spec)?;
    write_mask_png(&dir.join(bundle::MASK), &gt.mask)?;
    let path = dir.join(bundle::ATTRIBUTES);
    let mut w = csv_writer(&path)?;
    w.write_record(["x", "y", "tangent_deg", "width_px"])?;
    for p in &gt.points {
        w.write_record([
            p.x.to_string(),
            p.y.to_string(),
            opt(p.orientation.map(f64::to_degrees)),
            opt(p.width),
        ])?;
    }
    w.flush().map_err(|e| Error::io(&path, e))?;
    let path = dir.join(bundle::BLOBS);
    let mut w = csv_writer(&path)?;
    w.write_record(["x", "y", "diameter_px"])?;
    for b in &gt.blobs {
        w.write_record([
            format!("{:.6}", b.center[0]),
            format!("{:.6}", b.center[1]),
            format!("{:.6}", b.diameter),
        ])?;
    }
    w.flush().map_err(|e| Error::io(&path, e))
}

fn parse_opt(s: &str) -> Result<Option<f64>> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse()
        .map(Some)
        .map_err(|_| Error::InvalidInput(format!("not a number: '{s}'")))
}

fn parse_num<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::InvalidInput(format!("not a number: '{s}'")))
}

fn csv_rows(path: &Path) -> Result<Vec<csv::StringRecord>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = csv::Reader::from_reader(file);
    r.records().map(|rec| rec.map_err(Error::from)).collect()
}

/// Loads a bundle written by [`write_ground_truth`].
pub fn read_ground_truth(dir: &Path) -> Result<GroundTruth> {
    let spec: SceneSpec = read_json(&dir.join(bundle::SPEC))?;
    let mask = read_mask_png(&dir.join(bundle::MASK))?;
    let mut points = Vec::new();
    for rec in csv_rows(&dir.join(bundle::ATTRIBUTES))? {
        points.push(GtPoint {
            x: parse_num(&rec[0])?,
            y: parse_num(&rec[1])?,
            orientation: parse_opt(&rec[2])?.map(f64::to_radians),
            width: parse_opt(&rec[3])?,
        });
    }
    let mut blobs = Vec::new();
    for rec in csv_rows(&dir.join(bundle::BLOBS))? {
        blobs.push(BlobTruth {
            center: [parse_num(&rec[0])?, parse_num(&rec[1])?],
            diameter: parse_num(&rec[2])?,
        });
    }
    if spec.kind != SceneKind::Blobs && points.len() != mask.count() {
        return Err(Error::InvalidInput(format!(
            "{}: {} attribute rows for {} mask pixels",
            dir.display(),
            points.len(),
            mask.count()
        )));
    }
    Ok(GroundTruth {
        kind: spec.kind,
        mask,
        points,
        blobs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{generate, Preset};

    #[test]
    fn raw_round_trip_is_lossless() {
        let dir = tempfile::tempdir().unwrap();
        let g = ImageGrid::from_fn(7, 5, |x, y| (x as f64 * 0.1 - y as f64).sin() * 1e-7 + f64::EPSILON);
        let p = dir.path().join("m.f64");
        write_raw(&p, &g).unwrap();
        assert_eq!(read_raw(&p).unwrap(), g);
        let h: RawHeader = read_json(&p.with_extension("json")).unwrap();
        assert_eq!(h.shape, [5, 7]);
    }

    #[test]
    fn png16_round_trip_within_quantization() {
        let dir = tempfile::tempdir().unwrap();
        let g = ImageGrid::from_fn(9, 4, |x, y| (x + 9 * y) as f64 / 35.0);
        let p = dir.path().join("m.png");
        write_png16(&p, &g, 0.0, 1.0).unwrap();
        let back = read_image(&p, Channel::Auto, 1.0).unwrap();
        for (a, b) in g.as_slice().iter().zip(back.as_slice()) {
            assert!((a - b).abs() <= 0.5 / 65535.0 + 1e-12);
        }
        let scaled = read_image(&p, Channel::Auto, 255.0).unwrap();
        assert!((scaled.get(8, 3) - 255.0).abs() < 1e-9);
    }

    #[test]
    fn colour_needs_a_channel() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.png");
        let img = image::RgbImage::from_fn(3, 2, |x, _| image::Rgb([10, 200, x as u8]));
        img.save(&p).unwrap();
        assert!(matches!(read_image(&p, Channel::Auto, 1.0), Err(Error::InvalidInput(_))));
        let g = read_image(&p, Channel::Green, 255.0).unwrap();
        assert!(g.as_slice().iter().all(|&v| (v - 200.0).abs() < 1e-9));
        let b = read_image(&p, Channel::Blue, 255.0).unwrap();
        assert!((b.get(2, 1) - 2.0).abs() < 1e-9);
    }

    #[test]
    fn pgm_is_read() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.pgm");
        std::fs::write(&p, b"P2\n2 2\n255\n0 51\n102 255\n").unwrap();
        let g = read_image(&p, Channel::Auto, 1.0).unwrap();
        assert!((g.get(1, 0) - 0.2).abs() < 1e-9 && (g.get(1, 1) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn missing_file_is_an_io_error() {
        let e = read_image(Path::new("/nonexistent/x.png"), Channel::Auto, 1.0).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn ground_truth_bundle_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        for preset in [Preset::Ridges1, Preset::BlobsLarge] {
            let mut spec = preset.spec(2);
            spec.size = 192;
            let (_, gt) = generate(&spec).unwrap();
            write_ground_truth(dir.path(), &spec, &gt).unwrap();
            let back = read_ground_truth(dir.path()).unwrap();
            assert_eq!(back.mask, gt.mask);
            assert_eq!(back.points.len(), gt.points.len());
            for (a, b) in back.points.iter().zip(&gt.points) {
                assert_eq!((a.x, a.y), (b.x, b.y));
                assert!((a.orientation.unwrap() - b.orientation.unwrap()).abs() < 1e-7);
            }
            assert_eq!(back.blobs.len(), gt.blobs.len());
        }
    }
}
