use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use ahfsr_core::image::{
    bicubic_resize, luma, nearest_resize, rgb_to_ycbcr, rmse, ycbcr_to_rgb, ColorRange, ImagePlane, RgbImage,
    YcbcrImage,
};
use ahfsr_core::pipeline::{PatchTrace, Upscaler};
use ahfsr_core::sr::SrConfig;
use log::info;
use serde::Serialize;

use crate::error::CliError;
use crate::io::{read_image, write_image, Raster};

/// Everything `upscale` needs; `None` overrides keep the defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    pub input_path: PathBuf,
    pub output_path: PathBuf,
    pub scale: usize,
    pub mask_enabled: bool,
    pub lambda1: Option<f64>,
    pub lambda2: Option<f64>,
    pub rho: Option<f64>,
    pub xi1: Option<f64>,
    pub xi2: Option<f64>,
    pub tau: Option<usize>,
    pub patch_size: Option<usize>,
    pub overlap: Option<usize>,
    pub angles: Option<usize>,
    pub threshold: Option<f64>,
    pub threads: Option<usize>,
    pub trace_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(input_path: impl Into<PathBuf>, output_path: impl Into<PathBuf>, scale: usize) -> Self {
        Self { input_path: input_path.into(), output_path: output_path.into(), scale, ..Self::default() }
    }

    pub fn sr_config(&self) -> Result<SrConfig, CliError> {
        if self.input_path.as_os_str().is_empty() || self.output_path.as_os_str().is_empty() {
            return Err(CliError::Usage("input and output paths must be non-empty".into()));
        }
        if self.threads == Some(0) {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        let d = SrConfig::default();
        let mut cfg = SrConfig {
            scale: self.scale,
            tau: self.tau.unwrap_or(d.tau),
            xi1: self.xi1.unwrap_or(d.xi1),
            xi2: self.xi2.unwrap_or(d.xi2),
            angle_count: self.angles.unwrap_or(d.angle_count),
            patch_size: self.patch_size.unwrap_or(d.patch_size),
            overlap: self.overlap.unwrap_or(d.overlap),
            mask_threshold: self.threshold.unwrap_or(d.mask_threshold),
            mask_enabled: self.mask_enabled,
            ..d
        };
        cfg.solver.lambda1 = self.lambda1.unwrap_or(cfg.solver.lambda1);
        cfg.solver.lambda2 = self.lambda2.unwrap_or(cfg.solver.lambda2);
        cfg.solver.rho = self.rho.unwrap_or(cfg.solver.rho);
        cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(cfg)
    }
}

#[derive(Debug, Serialize)]
struct TraceRecord<'a> {
    origin: [usize; 2],
    residual_norms: &'a [f64],
    admm_iterations: &'a [usize],
}

fn write_trace(path: &Path, traces: &[PatchTrace]) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut out = BufWriter::new(file);
    for t in traces {
        let record = TraceRecord {
            origin: [t.origin.0, t.origin.1],
            residual_norms: &t.trace.residual_norms,
            admm_iterations: &t.trace.admm_iterations,
        };
        let line = serde_json::to_string(&record).map_err(|e| CliError::io(path, e))?;
        writeln!(out, "{line}").map_err(|e| CliError::io(path, e))?;
    }
    out.flush().map_err(|e| CliError::io(path, e))
}

/// Result of a super-resolution run before it is written to disk.
#[derive(Debug, Clone)]
pub struct UpscaleOutput {
    pub image: Raster,
    pub traces: Vec<PatchTrace>,
}

/// Runs the pipeline on a decoded image. Color input goes through YCbCr:
/// luma is super-resolved, chroma is upsampled bicubically.
pub fn upscale_raster(input: &Raster, upscaler: &Upscaler, threads: Option<usize>) -> Result<UpscaleOutput, CliError> {
    let s = upscaler.config().scale;
    match input {
        Raster::Gray(plane) => {
            let sr = upscaler.run(plane, threads)?;
            Ok(UpscaleOutput { image: Raster::Gray(sr.layers.high_res), traces: sr.traces })
        }
        Raster::Rgb(rgb) => {
            let ycc = rgb_to_ycbcr(rgb, ColorRange::Studio);
            let (rows, cols) = ycc.dims();
            let sr = upscaler.run(&ycc.y, threads)?;
            let up = YcbcrImage::new(
                sr.layers.high_res,
                bicubic_resize(&ycc.cb, rows * s, cols * s),
                bicubic_resize(&ycc.cr, rows * s, cols * s),
            )?;
            let out = ycbcr_to_rgb(&up, ColorRange::Studio);
            let out = RgbImage::new(out.r.clamp01(), out.g.clamp01(), out.b.clamp01())?;
            Ok(UpscaleOutput { image: Raster::Rgb(out), traces: sr.traces })
        }
    }
}

pub fn cmd_upscale(config: &RunConfig) -> Result<UpscaleOutput, CliError> {
    let sr_config = config.sr_config()?;
    let input = read_image(&config.input_path)?;
    let (rows, cols) = input.dims();
    info!("upscaling {}x{} by {}", rows, cols, sr_config.scale);
    let upscaler = Upscaler::new(sr_config)?;
    let out = upscale_raster(&input, &upscaler, config.threads)?;
    write_image(&config.output_path, &out.image)?;
    if let Some(path) = &config.trace_path {
        write_trace(path, &out.traces)?;
    }
    Ok(out)
}

/// Plane compared by `eval`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    Y,
    Gray,
    R,
    G,
    B,
}

impl Channel {
    pub fn name(self) -> &'static str {
        match self {
            Channel::Y => "y",
            Channel::Gray => "gray",
            Channel::R => "r",
            Channel::G => "g",
            Channel::B => "b",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    /// RMSE on the 0-255 scale.
    pub rmse: f64,
    pub dims: (usize, usize),
    pub channel: Channel,
}

impl std::fmt::Display for EvalReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "RMSE {:.2}", self.rmse)
    }
}

fn select_plane(raster: &Raster, channel: Channel, range: ColorRange) -> Result<ImagePlane, CliError> {
    match (raster, channel) {
        (Raster::Gray(p), Channel::Gray | Channel::Y) => Ok(p.clone()),
        (Raster::Gray(_), _) => Err(CliError::Usage(format!("channel {} needs a color image", channel.name()))),
        (Raster::Rgb(img), Channel::Y) => Ok(luma(img, range)),
        (Raster::Rgb(img), Channel::R) => Ok(img.r.clone()),
        (Raster::Rgb(img), Channel::G) => Ok(img.g.clone()),
        (Raster::Rgb(img), Channel::B) => Ok(img.b.clone()),
        (Raster::Rgb(_), Channel::Gray) => Err(CliError::Usage("image is color; use channel y, r, g or b".into())),
    }
}

/// RMSE between two decoded images on the 0-255 scale.
pub fn eval_rasters(
    reference: &Raster,
    test: &Raster,
    channel: Option<Channel>,
    range: ColorRange,
) -> Result<EvalReport, CliError> {
    if reference.dims() != test.dims() {
        return Err(CliError::Usage(format!("image sizes differ: {:?} vs {:?}", reference.dims(), test.dims())));
    }
    if reference.is_color() != test.is_color() {
        return Err(CliError::Usage("cannot compare a grayscale image with a color image".into()));
    }
    let channel = channel.unwrap_or(if reference.is_color() { Channel::Y } else { Channel::Gray });
    let a = select_plane(reference, channel, range)?;
    let b = select_plane(test, channel, range)?;
    let value = rmse(&a, &b)? * 255.0;
    Ok(EvalReport { rmse: value, dims: reference.dims(), channel })
}

pub fn cmd_eval(reference: &Path, test: &Path, channel: Option<Channel>, full_swing: bool) -> Result<EvalReport, CliError> {
    let range = if full_swing { ColorRange::Full } else { ColorRange::Studio };
    eval_rasters(&read_image(reference)?, &read_image(test)?, channel, range)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineMethod {
    Nearest,
    Bicubic,
}

pub fn baseline_raster(input: &Raster, scale: usize, method: BaselineMethod) -> Result<Raster, CliError> {
    if scale < 1 {
        return Err(CliError::Usage("scale must be at least 1".into()));
    }
    let resize = |p: &ImagePlane| {
        let (r, c) = (p.rows() * scale, p.cols() * scale);
        match method {
            BaselineMethod::Nearest => nearest_resize(p, r, c),
            BaselineMethod::Bicubic => bicubic_resize(p, r, c).clamp01(),
        }
    };
    Ok(match input {
        Raster::Gray(p) => Raster::Gray(resize(p)),
        Raster::Rgb(img) => Raster::Rgb(RgbImage::new(resize(&img.r), resize(&img.g), resize(&img.b))?),
    })
}

pub fn cmd_baseline(input: &Path, output: &Path, scale: usize, method: BaselineMethod) -> Result<Raster, CliError> {
    let raster = read_image(input)?;
    let out = baseline_raster(&raster, scale, method)?;
    write_image(output, &out)?;
    Ok(out)
}
