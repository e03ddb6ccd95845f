//! 8-bit PNG / PGM / PPM reading and writing.

use std::path::Path;

use ahfsr_core::image::{ImagePlane, RgbImage};
use image::{DynamicImage, GrayImage, ImageFormat, RgbImage as RgbBuffer};

use crate::error::CliError;

/// Decoded image with samples scaled to `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub enum Raster {
    Gray(ImagePlane),
    Rgb(RgbImage),
}

impl Raster {
    pub fn dims(&self) -> (usize, usize) {
        match self {
            Raster::Gray(p) => p.dims(),
            Raster::Rgb(img) => img.dims(),
        }
    }

    pub fn is_color(&self) -> bool {
        matches!(self, Raster::Rgb(_))
    }
}

fn plane_from_bytes(rows: usize, cols: usize, bytes: impl Iterator<Item = u8>) -> ImagePlane {
    let data = bytes.map(|b| b as f64 / 255.0).collect();
    ImagePlane::new(rows, cols, data).expect("decoder dimensions are consistent")
}

/// Rounds `[0, 1]` samples to 8 bits, half away from zero, after clamping.
pub fn quantize(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

pub fn read_image(path: &Path) -> Result<Raster, CliError> {
    let reader = image::ImageReader::open(path)
        .map_err(|e| CliError::io(path, e))?
        .with_guessed_format()
        .map_err(|e| CliError::io(path, e))?;
    match reader.format() {
        Some(ImageFormat::Png) | Some(ImageFormat::Pnm) => {}
        _ => return Err(CliError::io(path, "unsupported format; expected PNG or PGM/PPM")),
    }
    let img = reader.decode().map_err(|e| CliError::io(path, e))?;
    Ok(from_dynamic(img))
}

pub fn from_dynamic(img: DynamicImage) -> Raster {
    let (cols, rows) = (img.width() as usize, img.height() as usize);
    if img.color().has_color() {
        let rgb = img.into_rgb8();
        let channel = |k: usize| plane_from_bytes(rows, cols, rgb.pixels().map(move |p| p.0[k]));
        Raster::Rgb(RgbImage::new(channel(0), channel(1), channel(2)).expect("channels share dimensions"))
    } else {
        let gray = img.into_luma8();
        Raster::Gray(plane_from_bytes(rows, cols, gray.pixels().map(|p| p.0[0])))
    }
}

pub fn to_dynamic(raster: &Raster) -> DynamicImage {
    let (rows, cols) = raster.dims();
    match raster {
        Raster::Gray(p) => {
            let bytes = p.data().iter().map(|&v| quantize(v)).collect();
            DynamicImage::ImageLuma8(GrayImage::from_raw(cols as u32, rows as u32, bytes).expect("buffer size"))
        }
        Raster::Rgb(img) => {
            let mut bytes = Vec::with_capacity(rows * cols * 3);
            for ((r, g), b) in img.r.data().iter().zip(img.g.data()).zip(img.b.data()) {
                bytes.extend_from_slice(&[quantize(*r), quantize(*g), quantize(*b)]);
            }
            DynamicImage::ImageRgb8(RgbBuffer::from_raw(cols as u32, rows as u32, bytes).expect("buffer size"))
        }
    }
}

/// Writes `raster` as 8-bit; the format follows the file extension
/// (`.png`, `.pgm`, `.ppm`, `.pnm`).
pub fn write_image(path: &Path, raster: &Raster) -> Result<(), CliError> {
    let format = ImageFormat::from_path(path).map_err(|e| CliError::io(path, e))?;
    if !matches!(format, ImageFormat::Png | ImageFormat::Pnm) {
        return Err(CliError::io(path, "unsupported output format; use .png, .pgm or .ppm"));
    }
    let img = to_dynamic(raster);
    let img = match (raster, path.extension().and_then(|e| e.to_str())) {
        // a .pgm target always receives luma
        (Raster::Rgb(_), Some(ext)) if ext.eq_ignore_ascii_case("pgm") => DynamicImage::ImageLuma8(img.into_luma8()),
        _ => img,
    };
    img.save_with_format(path, format).map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantization_rounds_half_away() {
        assert_eq!(quantize(-0.3), 0);
        assert_eq!(quantize(1.7), 255);
        assert_eq!(quantize(0.5 / 255.0), 1);
        assert_eq!(quantize(1.49 / 255.0), 1);
        assert_eq!(quantize(128.0 / 255.0), 128);
    }

    #[test]
    fn gray_round_trip_through_files() {
        let dir = tempfile::tempdir().unwrap();
        let plane = ImagePlane::from_fn(5, 7, |r, c| ((r * 7 + c) * 7) as f64 / 255.0);
        for name in ["a.png", "a.pgm"] {
            let path = dir.path().join(name);
            write_image(&path, &Raster::Gray(plane.clone())).unwrap();
            let back = read_image(&path).unwrap();
            assert_eq!(back, Raster::Gray(plane.clone()));
        }
    }

    #[test]
    fn rgb_round_trip_through_files() {
        let dir = tempfile::tempdir().unwrap();
        let ch = |k: usize| ImagePlane::from_fn(3, 4, |r, c| ((r * 4 + c + k * 50) % 256) as f64 / 255.0);
        let img = Raster::Rgb(RgbImage::new(ch(0), ch(1), ch(2)).unwrap());
        for name in ["c.png", "c.ppm"] {
            let path = dir.path().join(name);
            write_image(&path, &img).unwrap();
            assert_eq!(read_image(&path).unwrap(), img);
        }
    }

    #[test]
    fn missing_and_unsupported_files() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(read_image(&dir.path().join("nope.png")), Err(CliError::Io { .. })));
        let junk = dir.path().join("junk.png");
        std::fs::write(&junk, b"not an image").unwrap();
        assert!(matches!(read_image(&junk), Err(CliError::Io { .. })));
        let plane = Raster::Gray(ImagePlane::zeros(2, 2));
        assert!(matches!(write_image(&dir.path().join("x.bmp"), &plane), Err(CliError::Io { .. })));
    }
}
