//! Whole-image driver: tile, solve each patch, stitch, assemble.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::image::{bicubic_resize, ImagePlane};
use crate::sr::{assemble_output, super_resolve_patch, IterationTrace, PatchDictionaries, PatchLayers, SrConfig};
use crate::tiling::{fill_boundary, plan_tiling, stitch, PatchGrid};

/// Trace of one patch, tagged with its zero-based coarse origin.
#[derive(Debug, Clone, PartialEq)]
pub struct PatchTrace {
    pub origin: (usize, usize),
    pub trace: IterationTrace,
}

/// Full-resolution layers of a run.
#[derive(Debug, Clone)]
pub struct LayerPair {
    /// Stitched smooth layer; bicubic on uncovered pixels.
    pub smooth: ImagePlane,
    /// Stitched edge layer before masking and blurring; zero on uncovered pixels.
    pub edge: ImagePlane,
    /// Final output in `[0, 1]`.
    pub high_res: ImagePlane,
}

#[derive(Debug, Clone)]
pub struct SuperResolution {
    pub layers: LayerPair,
    pub bicubic: ImagePlane,
    pub grid: PatchGrid,
    pub traces: Vec<PatchTrace>,
}

/// Reusable upscaler holding the dictionaries for one configuration.
#[derive(Debug, Clone)]
pub struct Upscaler {
    config: SrConfig,
    dicts: PatchDictionaries,
}

impl Upscaler {
    pub fn new(config: SrConfig) -> Result<Self> {
        let dicts = PatchDictionaries::build(&config)?;
        Ok(Self { config, dicts })
    }

    pub fn config(&self) -> &SrConfig {
        &self.config
    }

    pub fn dictionaries(&self) -> &PatchDictionaries {
        &self.dicts
    }

    /// Upscales `low_res` by the configured factor.
    ///
    /// `threads` sizes the worker pool for per-patch solves; `None` uses the
    /// global rayon pool and `Some(1)` runs on the calling thread. The result
    /// does not depend on the thread count.
    pub fn run(&self, low_res: &ImagePlane, threads: Option<usize>) -> Result<SuperResolution> {
        let cfg = &self.config;
        let s = cfg.scale;
        let (rows, cols) = low_res.dims();
        let bicubic = bicubic_resize(low_res, rows * s, cols * s);
        let grid = plan_tiling((rows, cols), cfg.patch_size, cfg.overlap, s)?;

        let solve = |&origin: &(usize, usize)| -> Result<PatchLayers> {
            let patch = grid.extract(low_res, origin)?;
            super_resolve_patch(&patch, &self.dicts, cfg)
                .map_err(|e| Error::Patch { row: origin.0, col: origin.1, source: Box::new(e) })
        };
        let results: Vec<Result<PatchLayers>> = match threads {
            Some(1) => grid.origins().iter().map(solve).collect(),
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| crate::error::invalid(format!("cannot build thread pool: {e}")))?
                .install(|| grid.origins().par_iter().map(solve).collect()),
            None => grid.origins().par_iter().map(solve).collect(),
        };

        let mut smooth_patches = Vec::with_capacity(results.len());
        let mut edge_patches = Vec::with_capacity(results.len());
        let mut traces = Vec::with_capacity(results.len());
        for (&origin, result) in grid.origins().iter().zip(results) {
            let layers = result?;
            smooth_patches.push((origin, layers.smooth));
            edge_patches.push((origin, layers.edge));
            traces.push(PatchTrace { origin, trace: layers.trace });
        }

        let mut smooth = stitch(&smooth_patches, &grid)?;
        grid.fill_uncovered(&mut smooth, |r, c| bicubic.get(r, c));
        let edge = stitch(&edge_patches, &grid)?;
        let assembled = assemble_output(&smooth, &edge, cfg, &bicubic)?;
        let high_res = fill_boundary(&assembled, &bicubic, &grid)?.clamp01();

        Ok(SuperResolution { layers: LayerPair { smooth, edge, high_res }, bicubic, grid, traces })
    }
}

/// One-shot convenience wrapper around [`Upscaler`].
pub fn super_resolve(low_res: &ImagePlane, config: &SrConfig, threads: Option<usize>) -> Result<SuperResolution> {
    Upscaler::new(config.clone())?.run(low_res, threads)
}
