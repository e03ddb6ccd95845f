//! Center-aligned resampling: cubic convolution (Keys, `a = -0.5`) with
//! antialiasing on reduction, and nearest neighbour.

use super::plane::ImagePlane;

const CUBIC_A: f64 = -0.5;

/// Keys cubic convolution kernel with `a = -0.5`.
#[inline]
pub fn cubic_kernel(x: f64) -> f64 {
    let x = x.abs();
    if x <= 1.0 {
        ((CUBIC_A + 2.0) * x - (CUBIC_A + 3.0)) * x * x + 1.0
    } else if x < 2.0 {
        ((CUBIC_A * x - 5.0 * CUBIC_A) * x + 8.0 * CUBIC_A) * x - 4.0 * CUBIC_A
    } else {
        0.0
    }
}

/// Contributions of source samples to one destination sample along an axis.
#[derive(Debug, Clone)]
struct Taps {
    indices: Vec<usize>,
    weights: Vec<f64>,
}

/// Builds the tap table mapping `src_len` samples onto `dst_len` samples.
///
/// Destination sample `d` sits at source coordinate `(d + 0.5) / scale - 0.5`.
/// When shrinking, the kernel is stretched by `1 / scale` and attenuated by
/// `scale`. Out-of-range taps are clamped to the border and weights are
/// normalized to sum to one.
fn cubic_taps(src_len: usize, dst_len: usize) -> Vec<Taps> {
    let scale = dst_len as f64 / src_len as f64;
    let (kscale, support) = if scale < 1.0 { (scale, 2.0 / scale) } else { (1.0, 2.0) };
    (0..dst_len)
        .map(|d| {
            let center = (d as f64 + 0.5) / scale - 0.5;
            let first = (center - support).floor() as isize;
            let last = (center + support).ceil() as isize;
            let mut indices = Vec::with_capacity((last - first + 1) as usize);
            let mut weights = Vec::with_capacity(indices.capacity());
            for k in first..=last {
                let w = kscale * cubic_kernel(kscale * (center - k as f64));
                if w != 0.0 {
                    indices.push(k.clamp(0, src_len as isize - 1) as usize);
                    weights.push(w);
                }
            }
            let total: f64 = weights.iter().sum();
            for w in &mut weights {
                *w /= total;
            }
            Taps { indices, weights }
        })
        .collect()
}

/// Resizes `src` to `dst_rows x dst_cols` with separable cubic convolution.
///
/// Serves both as the upsampling baseline and as the reduction operator used
/// to project fine-grid estimates back to the coarse grid.
pub fn bicubic_resize(src: &ImagePlane, dst_rows: usize, dst_cols: usize) -> ImagePlane {
    assert!(dst_rows > 0 && dst_cols > 0, "destination dimensions must be positive");
    let (src_rows, src_cols) = src.dims();
    let col_taps = cubic_taps(src_cols, dst_cols);
    let row_taps = cubic_taps(src_rows, dst_rows);

    // horizontal pass: src_rows x dst_cols
    let mut tmp = vec![0.0; src_rows * dst_cols];
    for r in 0..src_rows {
        let line = src.row(r);
        let out = &mut tmp[r * dst_cols..(r + 1) * dst_cols];
        for (o, taps) in out.iter_mut().zip(&col_taps) {
            *o = taps.indices.iter().zip(&taps.weights).map(|(&i, &w)| w * line[i]).sum();
        }
    }

    // vertical pass
    let mut data = vec![0.0; dst_rows * dst_cols];
    for (r, taps) in row_taps.iter().enumerate() {
        let out = &mut data[r * dst_cols..(r + 1) * dst_cols];
        for (&i, &w) in taps.indices.iter().zip(&taps.weights) {
            let line = &tmp[i * dst_cols..(i + 1) * dst_cols];
            for (o, v) in out.iter_mut().zip(line) {
                *o += w * v;
            }
        }
    }
    ImagePlane::new(dst_rows, dst_cols, data).expect("dimensions checked above")
}

/// Center-aligned nearest-neighbour resize.
pub fn nearest_resize(src: &ImagePlane, dst_rows: usize, dst_cols: usize) -> ImagePlane {
    assert!(dst_rows > 0 && dst_cols > 0, "destination dimensions must be positive");
    let nearest = |d: usize, src_len: usize, dst_len: usize| {
        let x = (d as f64 + 0.5) * src_len as f64 / dst_len as f64;
        (x.floor() as usize).min(src_len - 1)
    };
    let row_map: Vec<usize> = (0..dst_rows).map(|r| nearest(r, src.rows(), dst_rows)).collect();
    let col_map: Vec<usize> = (0..dst_cols).map(|c| nearest(c, src.cols(), dst_cols)).collect();
    ImagePlane::from_fn(dst_rows, dst_cols, |r, c| src.get(row_map[r], col_map[c]))
}
