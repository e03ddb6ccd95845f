//! Raster planes and the classical image operators around the solver:
//! resampling, Gaussian smoothing, gradients, masks and color conversion.

mod color;
mod filter;
mod plane;
mod resample;

pub use color::{luma, rgb_to_ycbcr, ycbcr_to_rgb, ColorRange, RgbImage, YcbcrImage};
pub use filter::{apply_mask, convolve, gaussian_kernel, gradient_magnitude, ring_mask, BinaryMask, Kernel};
pub use plane::{rmse, ImagePlane};
pub use resample::{bicubic_resize, cubic_kernel, nearest_resize};
