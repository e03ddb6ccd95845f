//! BT.601 RGB <-> YCbCr on `[0, 1]` samples.

use super::plane::ImagePlane;
use crate::error::{shape, Result};

/// Quantization range of the luma/chroma encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ColorRange {
    /// Y in [16, 235]/255, chroma in [16, 240]/255.
    #[default]
    Studio,
    /// Y, Cb, Cr all spanning [0, 1] (JFIF).
    Full,
}

impl ColorRange {
    /// Forward matrix rows (Y, Cb, Cr) and offsets, on the unit scale.
    fn forward(self) -> ([[f64; 3]; 3], [f64; 3]) {
        match self {
            ColorRange::Studio => (
                [
                    [65.481 / 255.0, 128.553 / 255.0, 24.966 / 255.0],
                    [-37.797 / 255.0, -74.203 / 255.0, 112.0 / 255.0],
                    [112.0 / 255.0, -93.786 / 255.0, -18.214 / 255.0],
                ],
                [16.0 / 255.0, 128.0 / 255.0, 128.0 / 255.0],
            ),
            ColorRange::Full => (
                [
                    [0.299, 0.587, 0.114],
                    [-0.168_735_891_647_856_7, -0.331_264_108_352_143_3, 0.5],
                    [0.5, -0.418_687_589_158_345_2, -0.081_312_410_841_654_8],
                ],
                [0.0, 128.0 / 255.0, 128.0 / 255.0],
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RgbImage {
    pub r: ImagePlane,
    pub g: ImagePlane,
    pub b: ImagePlane,
}

#[derive(Debug, Clone, PartialEq)]
pub struct YcbcrImage {
    pub y: ImagePlane,
    pub cb: ImagePlane,
    pub cr: ImagePlane,
}

impl RgbImage {
    pub fn new(r: ImagePlane, g: ImagePlane, b: ImagePlane) -> Result<Self> {
        r.check_same_dims(&g)?;
        r.check_same_dims(&b)?;
        Ok(Self { r, g, b })
    }

    pub fn dims(&self) -> (usize, usize) {
        self.r.dims()
    }
}

impl YcbcrImage {
    pub fn new(y: ImagePlane, cb: ImagePlane, cr: ImagePlane) -> Result<Self> {
        if y.dims() != cb.dims() || y.dims() != cr.dims() {
            return Err(shape("YCbCr channel dimensions differ"));
        }
        Ok(Self { y, cb, cr })
    }

    pub fn dims(&self) -> (usize, usize) {
        self.y.dims()
    }
}

fn apply3(m: &[[f64; 3]; 3], offset: &[f64; 3], a: &ImagePlane, b: &ImagePlane, c: &ImagePlane) -> [ImagePlane; 3] {
    let out = |k: usize| {
        let row = m[k];
        ImagePlane::new(
            a.rows(),
            a.cols(),
            a.data()
                .iter()
                .zip(b.data())
                .zip(c.data())
                .map(|((&x, &y), &z)| offset[k] + row[0] * x + row[1] * y + row[2] * z)
                .collect(),
        )
        .expect("channel dims validated on construction")
    };
    [out(0), out(1), out(2)]
}

fn invert3(m: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    let mut inv = [[0.0; 3]; 3];
    for (i, row) in inv.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            // adjugate: cofactor of (j, i)
            let (r0, r1) = match j {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let (c0, c1) = match i {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let minor = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            *v = sign * minor / det;
        }
    }
    inv
}

pub fn rgb_to_ycbcr(img: &RgbImage, range: ColorRange) -> YcbcrImage {
    let (m, off) = range.forward();
    let [y, cb, cr] = apply3(&m, &off, &img.r, &img.g, &img.b);
    YcbcrImage { y, cb, cr }
}

pub fn ycbcr_to_rgb(img: &YcbcrImage, range: ColorRange) -> RgbImage {
    let (m, off) = range.forward();
    let inv = invert3(&m);
    // rgb = inv * (ycc - off) = inv * ycc - inv * off
    let shifted: [f64; 3] = std::array::from_fn(|k| -(inv[k][0] * off[0] + inv[k][1] * off[1] + inv[k][2] * off[2]));
    let [r, g, b] = apply3(&inv, &shifted, &img.y, &img.cb, &img.cr);
    RgbImage { r, g, b }
}

/// Luma of an RGB image under the given range convention.
pub fn luma(img: &RgbImage, range: ColorRange) -> ImagePlane {
    rgb_to_ycbcr(img, range).y
}
