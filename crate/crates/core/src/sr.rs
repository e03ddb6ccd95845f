//! Iterative per-patch super-resolution and final layer assembly.
//!
//! For each patch the residual `L⁽ᵏ⁾` (starting from the patch itself) is
//! fitted, the coefficients are evaluated on the fine grid to give a smooth
//! layer `S⁽ᵏ⁾ = Ψ̃1β1` and an edge layer `E⁽ᵏ⁾ = Ψ̃2β2`, their sum is reduced
//! back to the coarse grid with bicubic resampling, and the reduction is
//! subtracted from the residual. Layers are summed over `τ` rounds.

use nalgebra::DVector;

use crate::admm::{admm_solve, build_normal_matrix, NormalMatrix, SolverConfig};
use crate::dictionary::{build_dictionary, AhfBasisSpec, Dictionary};
use crate::error::{invalid, shape, Result};
use crate::image::{apply_mask, bicubic_resize, convolve, gaussian_kernel, ring_mask, ImagePlane};

/// Side length of the Gaussian applied to the edge layer.
pub const EDGE_BLUR_SIZE: usize = 5;
/// Standard deviation of the Gaussian applied to the edge layer.
pub const EDGE_BLUR_SIGMA: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub struct SrConfig {
    /// Integer upscaling factor.
    pub scale: usize,
    /// Number of fit/reduce/subtract rounds.
    pub tau: usize,
    /// Smoothness of the smooth class.
    pub xi1: f64,
    /// Smoothness of the edge class; must be below `xi1`.
    pub xi2: f64,
    /// Number of ridge directions evenly spaced on `[0, 2π)`.
    pub angle_count: usize,
    pub solver: SolverConfig,
    /// Coarse patch side length.
    pub patch_size: usize,
    /// Coarse overlap between neighbouring patches.
    pub overlap: usize,
    /// Gradient threshold of the ring-artifact mask.
    pub mask_threshold: f64,
    pub mask_enabled: bool,
}

impl Default for SrConfig {
    fn default() -> Self {
        Self {
            scale: 2,
            tau: 3,
            xi1: 1e-1,
            xi2: 1e-4,
            angle_count: 12,
            solver: SolverConfig::default(),
            patch_size: 6,
            overlap: 2,
            mask_threshold: 0.05,
            mask_enabled: false,
        }
    }
}

impl SrConfig {
    pub fn validate(&self) -> Result<()> {
        if self.scale < 2 {
            return Err(invalid(format!("scale must be at least 2, got {}", self.scale)));
        }
        if self.tau == 0 {
            return Err(invalid("tau must be at least 1"));
        }
        if !(self.xi2 > 0.0) || !(self.xi1 > self.xi2) || !self.xi1.is_finite() {
            return Err(invalid(format!("need xi1 > xi2 > 0, got xi1 = {}, xi2 = {}", self.xi1, self.xi2)));
        }
        if self.angle_count == 0 {
            return Err(invalid("angle count must be at least 1"));
        }
        if self.patch_size == 0 || self.overlap >= self.patch_size {
            return Err(invalid(format!(
                "need patch size > overlap >= 0, got {} and {}",
                self.patch_size, self.overlap
            )));
        }
        if self.mask_threshold.is_nan() || self.mask_threshold < 0.0 {
            return Err(invalid(format!("mask threshold must be nonnegative, got {}", self.mask_threshold)));
        }
        if !(self.solver.lambda1 > 0.0) {
            return Err(invalid(format!("lambda1 must be positive, got {}", self.solver.lambda1)));
        }
        self.solver.validate()
    }

    /// Offsets per direction: one per coarse patch pixel.
    pub fn offset_count(&self) -> usize {
        self.patch_size * self.patch_size
    }
}

/// Coarse and fine dictionaries for both classes plus the factored normal
/// matrix. Shared read-only by every patch of a run.
#[derive(Debug, Clone)]
pub struct PatchDictionaries {
    pub coarse_smooth: Dictionary,
    pub coarse_edge: Dictionary,
    pub fine_smooth: Dictionary,
    pub fine_edge: Dictionary,
    pub normal: NormalMatrix,
}

impl PatchDictionaries {
    pub fn build(config: &SrConfig) -> Result<Self> {
        config.validate()?;
        let q = config.offset_count();
        let smooth = AhfBasisSpec::uniform(config.xi1, config.angle_count, q)?;
        let edge = AhfBasisSpec::uniform(config.xi2, config.angle_count, q)?;
        let p = config.patch_size;
        let fp = p * config.scale;
        let coarse_smooth = build_dictionary(&smooth, p, p)?;
        let coarse_edge = build_dictionary(&edge, p, p)?;
        let fine_smooth = build_dictionary(&smooth, fp, fp)?;
        let fine_edge = build_dictionary(&edge, fp, fp)?;
        let normal = build_normal_matrix(&coarse_smooth, &coarse_edge, &config.solver)?;
        Ok(Self { coarse_smooth, coarse_edge, fine_smooth, fine_edge, normal })
    }

    pub fn coarse_dims(&self) -> (usize, usize) {
        self.coarse_smooth.grid_dims()
    }

    pub fn fine_dims(&self) -> (usize, usize) {
        self.fine_smooth.grid_dims()
    }
}

/// Per-round diagnostics of [`super_resolve_patch`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IterationTrace {
    /// `‖L⁽ᵏ⁾‖₂` at the start of round `k`.
    pub residual_norms: Vec<f64>,
    /// ADMM iterations used in each round.
    pub admm_iterations: Vec<usize>,
    pub iterations_run: usize,
}

/// Smooth and edge layers of one patch on the fine grid.
#[derive(Debug, Clone)]
pub struct PatchLayers {
    pub smooth: ImagePlane,
    pub edge: ImagePlane,
    pub trace: IterationTrace,
}

/// One round's contribution, kept for inspection.
#[derive(Debug, Clone)]
pub struct RoundLayers {
    pub smooth: ImagePlane,
    pub edge: ImagePlane,
}

pub fn super_resolve_patch(patch: &ImagePlane, dicts: &PatchDictionaries, config: &SrConfig) -> Result<PatchLayers> {
    run_patch(patch, dicts, config, None)
}

/// Like [`super_resolve_patch`] but also returns every round's `S⁽ᵏ⁾`, `E⁽ᵏ⁾`.
pub fn super_resolve_patch_rounds(
    patch: &ImagePlane,
    dicts: &PatchDictionaries,
    config: &SrConfig,
) -> Result<(PatchLayers, Vec<RoundLayers>)> {
    let mut rounds = Vec::with_capacity(config.tau);
    let layers = run_patch(patch, dicts, config, Some(&mut rounds))?;
    Ok((layers, rounds))
}

fn run_patch(
    patch: &ImagePlane,
    dicts: &PatchDictionaries,
    config: &SrConfig,
    mut rounds: Option<&mut Vec<RoundLayers>>,
) -> Result<PatchLayers> {
    if patch.dims() != dicts.coarse_dims() {
        return Err(shape(format!("patch {:?} does not match dictionary grid {:?}", patch.dims(), dicts.coarse_dims())));
    }
    let (fr, fc) = dicts.fine_dims();
    let (cr, cc) = dicts.coarse_dims();
    let mut residual = DVector::from_column_slice(patch.data());
    let mut smooth = ImagePlane::zeros(fr, fc);
    let mut edge = ImagePlane::zeros(fr, fc);
    let mut trace = IterationTrace::default();

    for _ in 0..config.tau {
        trace.residual_norms.push(residual.norm());
        let sol = admm_solve(&residual, &dicts.coarse_smooth, &dicts.coarse_edge, &dicts.normal, &config.solver)?;
        trace.admm_iterations.push(sol.state.iteration);
        trace.iterations_run += 1;

        let s_k = dicts.fine_smooth.synthesize_one(&sol.beta1)?;
        let e_k = dicts.fine_edge.synthesize_one(&sol.beta2)?;
        let h_k = s_k.add(&e_k)?;
        let reduced = bicubic_resize(&h_k, cr, cc);
        for (r, d) in residual.iter_mut().zip(reduced.data()) {
            *r -= d;
        }
        smooth.add_assign(&s_k)?;
        edge.add_assign(&e_k)?;
        if let Some(rounds) = rounds.as_deref_mut() {
            rounds.push(RoundLayers { smooth: s_k, edge: e_k });
        }
    }
    Ok(PatchLayers { smooth, edge, trace })
}

/// `clamp(S + G ∗ E', 0, 1)` where `E'` is the edge layer, masked by the ring
/// mask of the bicubic upsample when enabled, and `G` is the 5x5, σ = 1
/// Gaussian with replicate borders.
pub fn assemble_output(
    smooth: &ImagePlane,
    edge: &ImagePlane,
    config: &SrConfig,
    bicubic_upsampled: &ImagePlane,
) -> Result<ImagePlane> {
    smooth.check_same_dims(edge)?;
    smooth.check_same_dims(bicubic_upsampled)?;
    let edge = masked_edge_layer(edge, config, bicubic_upsampled)?;
    let blurred = convolve(&edge, &gaussian_kernel(EDGE_BLUR_SIZE, EDGE_BLUR_SIGMA)?);
    Ok(smooth.add(&blurred)?.clamp01())
}

/// The edge layer after the optional ring mask (before blurring).
pub fn masked_edge_layer(edge: &ImagePlane, config: &SrConfig, bicubic_upsampled: &ImagePlane) -> Result<ImagePlane> {
    if config.mask_enabled {
        apply_mask(edge, &ring_mask(bicubic_upsampled, config.mask_threshold)?)
    } else {
        Ok(edge.clone())
    }
}
