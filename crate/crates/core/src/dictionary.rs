//! Approximated Heaviside function (AHF) dictionaries.
//!
//! A dictionary column is the ridge function `ψ(cos θ · x + sin θ · y + c)`
//! sampled on a pixel grid, where `ψ(x) = 1/2 + arctan(x / ξ) / π`. Small `ξ`
//! gives near-step edges, large `ξ` gives smooth ramps.
//!
//! Grids use one-based normalized coordinates: pixel `(i, j)` of an
//! `rows x cols` grid (zero-based indices) sits at
//! `((i + 1) / rows, (j + 1) / cols)`. A fine grid for scale `s` is simply the
//! same construction on `s·rows x s·cols` pixels.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::admm::CoefficientVector;
use crate::error::{invalid, shape, Result};
use crate::image::ImagePlane;

/// Evaluates `1/2 + arctan(x / xi) / π`.
pub fn eval_ahf(x: f64, xi: f64) -> Result<f64> {
    if !(xi > 0.0) || !xi.is_finite() {
        return Err(invalid(format!("AHF smoothness must be positive, got {xi}")));
    }
    Ok(ahf(x, xi))
}

#[inline]
fn ahf(x: f64, xi: f64) -> f64 {
    0.5 + (x / xi).atan() / PI
}

/// Parameterization of one class of AHFs.
#[derive(Debug, Clone, PartialEq)]
pub struct AhfBasisSpec {
    xi: f64,
    angles: Vec<f64>,
    offset_count: usize,
}

impl AhfBasisSpec {
    pub fn new(xi: f64, angles: Vec<f64>, offset_count: usize) -> Result<Self> {
        if !(xi > 0.0) || !xi.is_finite() {
            return Err(invalid(format!("xi must be positive, got {xi}")));
        }
        if angles.is_empty() {
            return Err(invalid("at least one angle is required"));
        }
        if let Some(a) = angles.iter().find(|a| !(0.0..2.0 * PI).contains(*a)) {
            return Err(invalid(format!("angle {a} outside [0, 2π)")));
        }
        for (i, a) in angles.iter().enumerate() {
            if angles[..i].contains(a) {
                return Err(invalid(format!("duplicate angle {a}")));
            }
        }
        if offset_count == 0 {
            return Err(invalid("offset count must be at least 1"));
        }
        Ok(Self { xi, angles, offset_count })
    }

    /// `angle_count` directions evenly spaced on `[0, 2π)`, starting at 0.
    pub fn uniform(xi: f64, angle_count: usize, offset_count: usize) -> Result<Self> {
        let angles = (0..angle_count).map(|t| 2.0 * PI * t as f64 / angle_count as f64).collect();
        Self::new(xi, angles, offset_count)
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn offset_count(&self) -> usize {
        self.offset_count
    }

    /// Offsets `1/q, 2/q, ..., 1`.
    pub fn offsets(&self) -> impl Iterator<Item = f64> + '_ {
        let q = self.offset_count;
        (1..=q).map(move |j| j as f64 / q as f64)
    }

    /// Number of basis functions `k·q`.
    pub fn basis_size(&self) -> usize {
        self.angles.len() * self.offset_count
    }

    /// Column index of `(angle index, offset index)`.
    pub fn column(&self, angle: usize, offset: usize) -> usize {
        angle * self.offset_count + offset
    }
}

/// Column layout of a [`Dictionary`]. Only angle-major ordering exists:
/// column `t·q + j` holds angle `t`, offset `(j + 1) / q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnOrder {
    AngleMajor,
}

/// Dense matrix of AHF evaluations, one row per grid pixel (row-major pixel
/// order) and one column per basis function.
#[derive(Debug, Clone, PartialEq)]
pub struct Dictionary {
    values: DMatrix<f64>,
    grid_rows: usize,
    grid_cols: usize,
    spec: AhfBasisSpec,
    column_order: ColumnOrder,
}

impl Dictionary {
    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn grid_rows(&self) -> usize {
        self.grid_rows
    }

    pub fn grid_cols(&self) -> usize {
        self.grid_cols
    }

    pub fn grid_dims(&self) -> (usize, usize) {
        (self.grid_rows, self.grid_cols)
    }

    pub fn spec(&self) -> &AhfBasisSpec {
        &self.spec
    }

    pub fn column_order(&self) -> ColumnOrder {
        self.column_order
    }

    pub fn pixel_count(&self) -> usize {
        self.values.nrows()
    }

    pub fn basis_size(&self) -> usize {
        self.values.ncols()
    }

    /// Single-class synthesis `Ψω` reshaped to the grid.
    pub fn synthesize_one(&self, coeffs: &CoefficientVector) -> Result<ImagePlane> {
        if coeffs.len() != self.basis_size() {
            return Err(shape(format!("{} coefficients for {} basis functions", coeffs.len(), self.basis_size())));
        }
        let v = &self.values * coeffs.as_vector();
        ImagePlane::new(self.grid_rows, self.grid_cols, v.as_slice().to_vec())
    }
}

pub fn build_dictionary(spec: &AhfBasisSpec, grid_rows: usize, grid_cols: usize) -> Result<Dictionary> {
    if grid_rows == 0 || grid_cols == 0 {
        return Err(invalid(format!("dictionary grid must be non-empty, got {grid_rows}x{grid_cols}")));
    }
    let n = grid_rows * grid_cols;
    let m = spec.basis_size();
    let xi = spec.xi;
    let offsets: Vec<f64> = spec.offsets().collect();
    let mut values = DMatrix::zeros(n, m);
    for (t, &theta) in spec.angles.iter().enumerate() {
        let (sin, cos) = theta.sin_cos();
        for (j, &c) in offsets.iter().enumerate() {
            let mut col = values.column_mut(spec.column(t, j));
            for r in 0..grid_rows {
                let x = (r + 1) as f64 / grid_rows as f64;
                for s in 0..grid_cols {
                    let y = (s + 1) as f64 / grid_cols as f64;
                    col[r * grid_cols + s] = ahf(cos * x + sin * y + c, xi);
                }
            }
        }
    }
    Ok(Dictionary { values, grid_rows, grid_cols, spec: spec.clone(), column_order: ColumnOrder::AngleMajor })
}

/// Two-class synthesis `Ψ1β1 + Ψ2β2` reshaped to the shared grid.
pub fn synthesize(
    dict1: &Dictionary,
    beta1: &CoefficientVector,
    dict2: &Dictionary,
    beta2: &CoefficientVector,
) -> Result<ImagePlane> {
    if dict1.grid_dims() != dict2.grid_dims() {
        return Err(shape(format!("dictionary grids differ: {:?} vs {:?}", dict1.grid_dims(), dict2.grid_dims())));
    }
    let mut out = dict1.synthesize_one(beta1)?;
    out.add_assign(&dict2.synthesize_one(beta2)?)?;
    Ok(out)
}
