//! Gaussian smoothing, gradients and the ring-artifact mask.

use super::plane::ImagePlane;
use crate::error::{invalid, shape, Result};

/// Square convolution kernel with odd side length.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    size: usize,
    weights: Vec<f64>,
}

impl Kernel {
    pub fn new(size: usize, weights: Vec<f64>) -> Result<Self> {
        if size % 2 == 0 || weights.len() != size * size {
            return Err(invalid(format!("kernel must be odd and square, got size {size} with {} weights", weights.len())));
        }
        Ok(Self { size, weights })
    }

    pub fn identity(size: usize) -> Result<Self> {
        let mut weights = vec![0.0; size * size];
        if let Some(center) = weights.get_mut(size * size / 2) {
            *center = 1.0;
        }
        Self::new(size, weights)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn radius(&self) -> usize {
        self.size / 2
    }

    /// Weight at offset `(dy, dx)` from the center.
    pub fn at(&self, dy: isize, dx: isize) -> f64 {
        let r = self.radius() as isize;
        self.weights[((dy + r) as usize) * self.size + (dx + r) as usize]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Normalized Gaussian `exp(-(x² + y²) / 2σ²)` sampled on the centered
/// integer lattice.
pub fn gaussian_kernel(size: usize, sigma: f64) -> Result<Kernel> {
    if size % 2 == 0 {
        return Err(invalid(format!("gaussian kernel size must be odd, got {size}")));
    }
    if !(sigma > 0.0) {
        return Err(invalid(format!("gaussian sigma must be positive, got {sigma}")));
    }
    let r = (size / 2) as isize;
    let mut weights = Vec::with_capacity(size * size);
    for y in -r..=r {
        for x in -r..=r {
            weights.push((-((x * x + y * y) as f64) / (2.0 * sigma * sigma)).exp());
        }
    }
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    Kernel::new(size, weights)
}

/// 2-D convolution with replicate padding.
pub fn convolve(img: &ImagePlane, kernel: &Kernel) -> ImagePlane {
    let r = kernel.radius() as isize;
    ImagePlane::from_fn(img.rows(), img.cols(), |row, col| {
        let mut acc = 0.0;
        for dy in -r..=r {
            for dx in -r..=r {
                acc += kernel.at(dy, dx) * img.get_clamped(row as isize - dy, col as isize - dx);
            }
        }
        acc
    })
}

/// Gradient magnitude `sqrt(gx² + gy²)`: central differences in the
/// interior, one-sided differences on the border, unit pixel spacing.
pub fn gradient_magnitude(img: &ImagePlane) -> ImagePlane {
    let (rows, cols) = img.dims();
    let diff = |at: &dyn Fn(usize) -> f64, n: usize, i: usize| -> f64 {
        if n == 1 {
            0.0
        } else if i == 0 {
            at(1) - at(0)
        } else if i == n - 1 {
            at(n - 1) - at(n - 2)
        } else {
            0.5 * (at(i + 1) - at(i - 1))
        }
    };
    ImagePlane::from_fn(rows, cols, |r, c| {
        let gx = diff(&|j| img.get(r, j), cols, c);
        let gy = diff(&|i| img.get(i, c), rows, r);
        gx.hypot(gy)
    })
}

/// Binary mask with values exactly `0` or `1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryMask {
    rows: usize,
    cols: usize,
    data: Vec<bool>,
}

impl BinaryMask {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.data[row * self.cols + col]
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    pub fn as_plane(&self) -> ImagePlane {
        ImagePlane::from_fn(self.rows, self.cols, |r, c| if self.get(r, c) { 1.0 } else { 0.0 })
    }
}

/// Edge mask of the bicubic upsample `b`: `0` where the gradient magnitude
/// is at most `threshold`, `1` elsewhere.
pub fn ring_mask(b: &ImagePlane, threshold: f64) -> Result<BinaryMask> {
    if threshold.is_nan() || threshold < 0.0 {
        return Err(invalid(format!("mask threshold must be nonnegative, got {threshold}")));
    }
    let g = gradient_magnitude(b);
    Ok(BinaryMask::from_fn(g.rows(), g.cols(), |r, c| g.get(r, c) > threshold))
}

pub fn apply_mask(e: &ImagePlane, mask: &BinaryMask) -> Result<ImagePlane> {
    if e.dims() != mask.dims() {
        return Err(shape(format!("mask {:?} does not match plane {:?}", mask.dims(), e.dims())));
    }
    Ok(ImagePlane::from_fn(e.rows(), e.cols(), |r, c| if mask.get(r, c) { e.get(r, c) } else { 0.0 }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_normalized_and_peaked() {
        let k = gaussian_kernel(5, 1.0).unwrap();
        let sum: f64 = k.weights().iter().sum();
        assert!((sum - 1.0).abs() < 1e-15);
        let center = k.at(0, 0);
        assert!(k.weights().iter().all(|&w| w <= center));
        // 1 / (sum_{x=-2..2} exp(-x²/2))²
        let s1: f64 = (-2..=2).map(|x: i32| (-(x * x) as f64 / 2.0).exp()).sum();
        assert!((center - 1.0 / (s1 * s1)).abs() < 1e-15);
        assert!((center - 0.16210).abs() < 5e-6);
        assert!(gaussian_kernel(4, 1.0).is_err());
        assert!(gaussian_kernel(5, 0.0).is_err());
    }

    #[test]
    fn convolve_identity_and_constant() {
        let p = ImagePlane::from_fn(6, 5, |r, c| ((r * 5 + c) as f64).cos());
        let id = Kernel::identity(5).unwrap();
        assert_eq!(convolve(&p, &id), p);
        let k = gaussian_kernel(5, 1.0).unwrap();
        let flat = convolve(&ImagePlane::filled(7, 7, 0.4), &k);
        assert!(flat.data().iter().all(|v| (v - 0.4).abs() < 1e-15));
    }

    #[test]
    fn convolve_matches_quadruple_loop() {
        let p = ImagePlane::from_fn(8, 8, |r, c| ((r * 37 + c * 11) % 17) as f64 / 17.0);
        let weights: Vec<f64> = (0..9).map(|i| (i as f64 + 1.0) / 45.0).collect();
        let k = Kernel::new(3, weights.clone()).unwrap();
        let got = convolve(&p, &k);
        for r in 0..8isize {
            for c in 0..8isize {
                let mut want = 0.0;
                for i in 0..3isize {
                    for j in 0..3isize {
                        // kernel index (i, j) pairs with source (r - (i - 1), c - (j - 1))
                        let sr = (r - i + 1).clamp(0, 7) as usize;
                        let sc = (c - j + 1).clamp(0, 7) as usize;
                        want += weights[(i * 3 + j) as usize] * p.get(sr, sc);
                    }
                }
                assert!((got.get(r as usize, c as usize) - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn gradient_of_constant_and_ramp() {
        let g = gradient_magnitude(&ImagePlane::filled(5, 5, 0.7));
        assert!(g.data().iter().all(|&v| v == 0.0));
        let ramp = ImagePlane::from_fn(5, 6, |_, c| 0.1 * c as f64);
        let g = gradient_magnitude(&ramp);
        for r in 0..5 {
            for c in 0..6 {
                assert!((g.get(r, c) - 0.1).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn gradient_of_step_fixture() {
        // columns 0..2 dark, 2..4 bright
        let step = ImagePlane::from_fn(3, 4, |r, c| if c >= 2 { 1.0 } else { 0.0 } + 0.5 * (r == 2 && c == 3) as u8 as f64);
        let g = gradient_magnitude(&step);
        // row 0: gx = [0, .5, .5, 0], gy = [0, 0, 0, 0] (one-sided, rows 0/1 equal)
        let expect_row0 = [0.0, 0.5, 0.5, 0.0];
        for c in 0..4 {
            assert!((g.get(0, c) - expect_row0[c]).abs() < 1e-15);
        }
        // pixel (2,3): gx = 1.5 - 1.0 = 0.5, gy = 1.5 - 1.0 = 0.5 (one-sided)
        assert!((g.get(2, 3) - 0.5f64.hypot(0.5)).abs() < 1e-15);
        // pixel (1,3): gx = 0, gy = (1.5 - 1.0)/2
        assert!((g.get(1, 3) - 0.25).abs() < 1e-15);
        // pixel (2,2): gx = (1.5 - 0)/2, gy = 0
        assert!((g.get(2, 2) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn mask_threshold_semantics() {
        let flat = ImagePlane::filled(4, 4, 0.5);
        assert_eq!(ring_mask(&flat, 0.05).unwrap().count_ones(), 0);
        let ramp = ImagePlane::from_fn(6, 6, |_, c| 0.1 * c as f64);
        assert_eq!(ring_mask(&ramp, 0.05).unwrap().count_ones(), 36);
        assert_eq!(ring_mask(&ramp, f64::INFINITY).unwrap().count_ones(), 0);
        assert!(ring_mask(&ramp, -1.0).is_err());
    }

    #[test]
    fn mask_application() {
        let e = ImagePlane::from_fn(3, 3, |r, c| (r * 3 + c) as f64 - 4.0);
        let ones = BinaryMask::from_fn(3, 3, |_, _| true);
        let zeros = BinaryMask::from_fn(3, 3, |_, _| false);
        assert_eq!(apply_mask(&e, &ones).unwrap(), e);
        assert!(apply_mask(&e, &zeros).unwrap().data().iter().all(|&v| v == 0.0));
        let mixed = BinaryMask::from_fn(3, 3, |r, c| (r + c) % 2 == 0);
        let out = apply_mask(&e, &mixed).unwrap();
        for r in 0..3 {
            for c in 0..3 {
                let want = if (r + c) % 2 == 0 { e.get(r, c) } else { 0.0 };
                assert_eq!(out.get(r, c), want);
            }
        }
        assert!(apply_mask(&e, &BinaryMask::from_fn(2, 3, |_, _| true)).is_err());
    }
}
