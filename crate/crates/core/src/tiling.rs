//! Overlapping patch layout on the coarse image and stitching of per-patch
//! fine-grid results.
//!
//! Origins start at the top-left pixel and advance by `patch_size − overlap`
//! while the patch still fits. Trailing rows/columns that no full patch
//! reaches are left uncovered and filled from the bicubic upsample.

use log::warn;

use crate::error::{invalid, shape, Result};
use crate::image::ImagePlane;

#[derive(Debug, Clone, PartialEq)]
pub struct PatchGrid {
    patch_size: usize,
    overlap: usize,
    scale: usize,
    origins: Vec<(usize, usize)>,
    coarse_dims: (usize, usize),
    fine_dims: (usize, usize),
    /// Number of patches covering each fine pixel, row-major.
    weight_map: Vec<u32>,
}

pub fn plan_tiling(coarse_dims: (usize, usize), patch_size: usize, overlap: usize, scale: usize) -> Result<PatchGrid> {
    let (rows, cols) = coarse_dims;
    if rows == 0 || cols == 0 {
        return Err(invalid("image must be non-empty"));
    }
    if patch_size == 0 || overlap >= patch_size {
        return Err(invalid(format!("need patch_size > overlap >= 0, got {patch_size} and {overlap}")));
    }
    if scale == 0 {
        return Err(invalid("scale must be positive"));
    }
    let stride = patch_size - overlap;
    let starts = |len: usize| -> Vec<usize> {
        if len < patch_size {
            Vec::new()
        } else {
            (0..=len - patch_size).step_by(stride).collect()
        }
    };
    let row_starts = starts(rows);
    let col_starts = starts(cols);
    if row_starts.is_empty() || col_starts.is_empty() {
        warn!("image {rows}x{cols} is smaller than the {patch_size}x{patch_size} patch; falling back to bicubic");
    }
    let origins: Vec<(usize, usize)> =
        row_starts.iter().flat_map(|&r| col_starts.iter().map(move |&c| (r, c))).collect();

    let fine_dims = (rows * scale, cols * scale);
    let fine_patch = patch_size * scale;
    let mut weight_map = vec![0u32; fine_dims.0 * fine_dims.1];
    for &(r, c) in &origins {
        for fr in r * scale..r * scale + fine_patch {
            let line = &mut weight_map[fr * fine_dims.1 + c * scale..fr * fine_dims.1 + c * scale + fine_patch];
            line.iter_mut().for_each(|w| *w += 1);
        }
    }
    Ok(PatchGrid { patch_size, overlap, scale, origins, coarse_dims, fine_dims, weight_map })
}

impl PatchGrid {
    pub fn patch_size(&self) -> usize {
        self.patch_size
    }

    pub fn overlap(&self) -> usize {
        self.overlap
    }

    pub fn stride(&self) -> usize {
        self.patch_size - self.overlap
    }

    pub fn scale(&self) -> usize {
        self.scale
    }

    /// Zero-based `(row, col)` of each patch's top-left coarse pixel.
    pub fn origins(&self) -> &[(usize, usize)] {
        &self.origins
    }

    pub fn coarse_dims(&self) -> (usize, usize) {
        self.coarse_dims
    }

    pub fn fine_dims(&self) -> (usize, usize) {
        self.fine_dims
    }

    pub fn fine_patch_size(&self) -> usize {
        self.patch_size * self.scale
    }

    pub fn weight(&self, fine_row: usize, fine_col: usize) -> u32 {
        self.weight_map[fine_row * self.fine_dims.1 + fine_col]
    }

    pub fn weight_map(&self) -> &[u32] {
        &self.weight_map
    }

    pub fn is_covered(&self, fine_row: usize, fine_col: usize) -> bool {
        self.weight(fine_row, fine_col) > 0
    }

    pub fn uncovered_count(&self) -> usize {
        self.weight_map.iter().filter(|&&w| w == 0).count()
    }

    /// Coarse patch at `origin`.
    pub fn extract(&self, coarse: &ImagePlane, origin: (usize, usize)) -> Result<ImagePlane> {
        if coarse.dims() != self.coarse_dims {
            return Err(shape(format!("image {:?} does not match tiling {:?}", coarse.dims(), self.coarse_dims)));
        }
        coarse.crop(origin.0, origin.1, self.patch_size, self.patch_size)
    }

    /// Overwrites uncovered fine pixels of `plane` with `value`.
    pub fn fill_uncovered(&self, plane: &mut ImagePlane, value: impl Fn(usize, usize) -> f64) {
        let cols = self.fine_dims.1;
        for (i, &w) in self.weight_map.iter().enumerate() {
            if w == 0 {
                plane.data_mut()[i] = value(i / cols, i % cols);
            }
        }
    }
}

/// Averages per-patch fine planes with uniform weights. Uncovered pixels are
/// set to zero; [`fill_boundary`] replaces them.
pub fn stitch(patches: &[((usize, usize), ImagePlane)], grid: &PatchGrid) -> Result<ImagePlane> {
    let (rows, cols) = grid.fine_dims;
    let fp = grid.fine_patch_size();
    let mut acc = vec![0.0; rows * cols];
    for ((r, c), plane) in patches {
        if plane.dims() != (fp, fp) {
            return Err(shape(format!("patch plane {:?} should be {fp}x{fp}", plane.dims())));
        }
        let (fr0, fc0) = (r * grid.scale, c * grid.scale);
        if fr0 + fp > rows || fc0 + fp > cols {
            return Err(invalid(format!("patch origin ({r}, {c}) lies outside the tiling")));
        }
        for pr in 0..fp {
            let dst = &mut acc[(fr0 + pr) * cols + fc0..(fr0 + pr) * cols + fc0 + fp];
            for (d, v) in dst.iter_mut().zip(plane.row(pr)) {
                *d += v;
            }
        }
    }
    for (a, &w) in acc.iter_mut().zip(&grid.weight_map) {
        if w > 0 {
            *a /= w as f64;
        } else {
            *a = 0.0;
        }
    }
    ImagePlane::new(rows, cols, acc)
}

/// Takes every uncovered fine pixel from `bicubic_upsampled`.
pub fn fill_boundary(stitched: &ImagePlane, bicubic_upsampled: &ImagePlane, grid: &PatchGrid) -> Result<ImagePlane> {
    stitched.check_same_dims(bicubic_upsampled)?;
    if stitched.dims() != grid.fine_dims {
        return Err(shape(format!("plane {:?} does not match tiling {:?}", stitched.dims(), grid.fine_dims)));
    }
    let mut out = stitched.clone();
    grid.fill_uncovered(&mut out, |r, c| bicubic_upsampled.get(r, c));
    Ok(out)
}
