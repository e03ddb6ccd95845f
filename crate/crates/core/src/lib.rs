//! Patch-based image upscaling with two dictionaries of arctangent step
//! functions (AHFs), one smooth and one sharp.
//!
//! Each low-resolution patch is represented as `Ψ1β1 + Ψ2β2`, where `Ψ1`
//! holds smooth AHFs and `Ψ2` near-step AHFs sampled on the patch grid. The
//! coefficients are fitted with a ridge penalty on `β1` and an L1 penalty on
//! `β2` ([`admm`]), then re-evaluated on a finer grid to produce a smooth
//! layer and an edge layer ([`sr`]). Patches are tiled and stitched by
//! [`tiling`], and [`pipeline`] drives a whole image.

pub mod admm;
pub mod dictionary;
pub mod error;
pub mod image;
pub mod pipeline;
pub mod sr;
pub mod tiling;

pub use error::{Error, Result};
