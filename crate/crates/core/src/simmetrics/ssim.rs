use crate::error::{Error, Result};
use crate::imgcore::resample::convolve_separable;
use crate::imgcore::{gaussian_kernel, Colorspace, RasterImage};

/// Canonical five-level MS-SSIM exponents.
pub const MS_SSIM_WEIGHTS: [f64; 5] = [0.0448, 0.2856, 0.3001, 0.2363, 0.1333];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SsimParams {
    pub k1: f64,
    pub k2: f64,
    pub window_sigma: f64,
    /// Odd window width in pixels.
    pub window_size: usize,
    pub dynamic_range: f64,
}

impl Default for SsimParams {
    fn default() -> Self {
        Self {
            k1: 0.01,
            k2: 0.03,
            window_sigma: 1.5,
            window_size: 11,
            dynamic_range: 1.0,
        }
    }
}

impl SsimParams {
    fn validate(&self) -> Result<()> {
        if self.window_size % 2 == 0 || self.window_size == 0 {
            return Err(Error::InvalidParams(format!("window size {} must be odd", self.window_size)));
        }
        if !(self.k1 > 0.0 && self.k2 > 0.0 && self.window_sigma > 0.0 && self.dynamic_range > 0.0) {
            return Err(Error::InvalidParams("k1, k2, sigma and dynamic range must be positive".into()));
        }
        Ok(())
    }
}

struct LevelStats {
    ssim: f64,
    cs: f64,
}

fn check_gray_pair(a: &RasterImage, b: &RasterImage, p: &SsimParams) -> Result<()> {
    p.validate()?;
    a.expect_colorspace(Colorspace::Gray)?;
    b.expect_colorspace(Colorspace::Gray)?;
    a.expect_same_shape(b)?;
    Ok(())
}

fn level_stats(x: &[f64], y: &[f64], w: usize, h: usize, p: &SsimParams) -> LevelStats {
    let kernel = gaussian_kernel(p.window_sigma, p.window_size / 2);
    let c1 = (p.k1 * p.dynamic_range).powi(2);
    let c2 = (p.k2 * p.dynamic_range).powi(2);

    // x, y, xx, yy, xy interleaved so one pass blurs all five moments
    let moments: Vec<f64> = x.iter().zip(y).flat_map(|(&a, &b)| [a, b, a * a, b * b, a * b]).collect();
    let blurred = convolve_separable(&moments, w, h, 5, &kernel);

    let mut ssim_sum = 0.0;
    let mut cs_sum = 0.0;
    for m in blurred.chunks_exact(5) {
        let (mx, my) = (m[0], m[1]);
        let vx = m[2] - mx * mx;
        let vy = m[3] - my * my;
        let cov = m[4] - mx * my;
        let l = (2.0 * mx * my + c1) / (mx * mx + my * my + c1);
        let cs = (2.0 * cov + c2) / (vx + vy + c2);
        ssim_sum += l * cs;
        cs_sum += cs;
    }
    let n = (w * h) as f64;
    LevelStats {
        ssim: ssim_sum / n,
        cs: cs_sum / n,
    }
}

/// Mean SSIM with Gaussian-weighted local moments and clamped borders.
pub fn ssim(a: &RasterImage, b: &RasterImage, p: &SsimParams) -> Result<f64> {
    check_gray_pair(a, b, p)?;
    if a.width() < p.window_size || a.height() < p.window_size {
        return Err(Error::ImageTooSmall {
            width: a.width(),
            height: a.height(),
            min: p.window_size,
        });
    }
    Ok(level_stats(a.data(), b.data(), a.width(), a.height(), p).ssim)
}

/// Number of dyadic levels an image of this size supports with the window.
pub fn ms_ssim_level_count(width: usize, height: usize, window_size: usize) -> usize {
    let (mut w, mut h, mut n) = (width, height, 0);
    while w >= window_size && h >= window_size {
        n += 1;
        w /= 2;
        h /= 2;
    }
    n
}

/// The first `levels` weights renormalised to sum to one.
pub fn ms_ssim_weights(weights: &[f64], levels: usize) -> Vec<f64> {
    let used = &weights[..levels.min(weights.len())];
    let sum: f64 = used.iter().sum();
    used.iter().map(|w| w / sum).collect()
}

fn pool2(src: &[f64], w: usize, h: usize) -> (Vec<f64>, usize, usize) {
    let (nw, nh) = (w / 2, h / 2);
    let mut out = Vec::with_capacity(nw * nh);
    for y in 0..nh {
        for x in 0..nw {
            let i = 2 * y * w + 2 * x;
            out.push((src[i] + src[i + 1] + src[i + w] + src[i + w + 1]) * 0.25);
        }
    }
    (out, nw, nh)
}

/// Multi-scale SSIM.
///
/// Levels whose mean contrast-structure (or, at the coarsest level, mean
/// SSIM) is negative contribute zero. If the image supports fewer levels
/// than `weights` has entries, the weights are truncated and renormalised.
pub fn ms_ssim(a: &RasterImage, b: &RasterImage, p: &SsimParams, weights: &[f64]) -> Result<f64> {
    check_gray_pair(a, b, p)?;
    if weights.is_empty() || weights.iter().any(|w| !(*w >= 0.0)) {
        return Err(Error::InvalidParams("MS-SSIM needs non-negative level weights".into()));
    }
    let available = ms_ssim_level_count(a.width(), a.height(), p.window_size);
    if available == 0 {
        return Err(Error::ImageTooSmall {
            width: a.width(),
            height: a.height(),
            min: p.window_size,
        });
    }
    let levels = available.min(weights.len());
    let weights = ms_ssim_weights(weights, levels);

    let (mut x, mut y) = (a.data().to_vec(), b.data().to_vec());
    let (mut w, mut h) = (a.width(), a.height());
    let mut score = 1.0;
    for (level, wt) in weights.iter().enumerate() {
        let stats = level_stats(&x, &y, w, h, p);
        if level + 1 == levels {
            score *= stats.ssim.max(0.0).powf(*wt);
        } else {
            score *= stats.cs.max(0.0).powf(*wt);
            let (nx, nw, nh) = pool2(&x, w, h);
            let (ny, _, _) = pool2(&y, w, h);
            x = nx;
            y = ny;
            w = nw;
            h = nh;
        }
    }
    Ok(score)
}

/// MS-SSIM with default parameters and the canonical five weights.
pub fn ms_ssim_default(a: &RasterImage, b: &RasterImage) -> Result<f64> {
    ms_ssim(a, b, &SsimParams::default(), &MS_SSIM_WEIGHTS)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pattern(w: usize, h: usize, seed: u64) -> RasterImage {
        let mut s = seed;
        RasterImage::gray_from_fn(w, h, |_, _| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64
        })
    }

    #[test]
    fn identical_is_one() {
        let a = pattern(32, 24, 3);
        assert!((ssim(&a, &a, &SsimParams::default()).unwrap() - 1.0).abs() < 1e-9);
        let b = pattern(64, 64, 4);
        assert!((ms_ssim_default(&b, &b).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn inverted_binary_image_is_negative() {
        let a = RasterImage::gray_from_fn(32, 32, |x, y| if (x / 3 + y / 5) % 2 == 0 { 0.0 } else { 1.0 });
        let b = a.map(|v| 1.0 - v);
        assert!(ssim(&a, &b, &SsimParams::default()).unwrap() < 0.0);
    }

    #[test]
    fn level_counts_and_weights() {
        assert_eq!(ms_ssim_level_count(128, 128, 11), 4);
        assert_eq!(ms_ssim_level_count(176, 176, 11), 5);
        assert_eq!(ms_ssim_level_count(10, 40, 11), 0);
        let w = ms_ssim_weights(&MS_SSIM_WEIGHTS, 4);
        assert_eq!(w.len(), 4);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn single_level_matches_ssim() {
        let a = pattern(40, 40, 7);
        let b = pattern(40, 40, 8).map(|v| 0.5 * v + 0.3 * 0.5);
        let s = ssim(&a, &b, &SsimParams::default()).unwrap();
        let m = ms_ssim(&a, &b, &SsimParams::default(), &[1.0]).unwrap();
        assert!(s > 0.0);
        assert!((s - m).abs() < 1e-9);
    }

    #[test]
    fn too_small() {
        let a = pattern(10, 30, 1);
        assert!(matches!(
            ssim(&a, &a, &SsimParams::default()),
            Err(Error::ImageTooSmall { .. })
        ));
        assert!(matches!(ms_ssim_default(&a, &a), Err(Error::ImageTooSmall { .. })));
    }

    #[test]
    fn rejects_even_window() {
        let a = pattern(16, 16, 1);
        let p = SsimParams { window_size: 10, ..Default::default() };
        assert!(matches!(ssim(&a, &a, &p), Err(Error::InvalidParams(_))));
    }
}
