//! Full-reference metrics: MSE, PSNR, SSIM, MS-SSIM and the Fréchet distance
//! between feature sets.
//!
//! All image metrics assume float samples with a dynamic range of 1.0.

mod frechet;
mod ssim;

pub use frechet::{frechet_distance, FeatureSet};
pub use ssim::{
    ms_ssim, ms_ssim_default, ms_ssim_level_count, ms_ssim_weights, ssim, SsimParams, MS_SSIM_WEIGHTS,
};

use crate::error::Result;
use crate::imgcore::RasterImage;

/// PSNR values above this are clamped when averaged.
pub const PSNR_CAP_DB: f64 = 100.0;

/// Mean squared difference over every sample.
pub fn mse(a: &RasterImage, b: &RasterImage) -> Result<f64> {
    a.expect_same_shape(b)?;
    let sum: f64 = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    Ok(sum / a.data().len() as f64)
}

/// Peak signal-to-noise ratio in dB for a peak of 1.0. Identical inputs give
/// `f64::INFINITY`; use [`cap_psnr`] before averaging.
pub fn psnr(a: &RasterImage, b: &RasterImage) -> Result<f64> {
    let m = mse(a, b)?;
    if m == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (1.0 / m).log10())
}

pub fn cap_psnr(db: f64) -> f64 {
    db.min(PSNR_CAP_DB)
}
