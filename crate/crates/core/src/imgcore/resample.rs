use super::RasterImage;
use crate::error::{Error, Result};

/// Bilinear resize with pixel-centre alignment and clamp-to-edge sampling.
pub fn resize_bilinear(img: &RasterImage, width: usize, height: usize) -> Result<RasterImage> {
    if width == 0 || height == 0 {
        return Err(Error::ZeroDimension);
    }
    if width == img.width() && height == img.height() {
        return Ok(img.clone());
    }
    let (sw, sh, ch) = (img.width(), img.height(), img.channels());
    let sx = sw as f64 / width as f64;
    let sy = sh as f64 / height as f64;

    let taps = |dst: usize, scale: f64, src_len: usize| {
        let pos = ((dst as f64 + 0.5) * scale - 0.5).max(0.0);
        let i0 = (pos.floor() as usize).min(src_len - 1);
        let i1 = (i0 + 1).min(src_len - 1);
        (i0, i1, pos - i0 as f64)
    };
    let xt: Vec<_> = (0..width).map(|x| taps(x, sx, sw)).collect();

    let src = img.data();
    let mut out = Vec::with_capacity(width * height * ch);
    for y in 0..height {
        let (y0, y1, fy) = taps(y, sy, sh);
        for &(x0, x1, fx) in &xt {
            for c in 0..ch {
                let p00 = src[(y0 * sw + x0) * ch + c];
                let p10 = src[(y0 * sw + x1) * ch + c];
                let p01 = src[(y1 * sw + x0) * ch + c];
                let p11 = src[(y1 * sw + x1) * ch + c];
                let top = p00 + (p10 - p00) * fx;
                let bot = p01 + (p11 - p01) * fx;
                out.push(top + (bot - top) * fy);
            }
        }
    }
    RasterImage::new(width, height, img.colorspace(), out)
}

/// Normalised 1-D Gaussian of the given radius (length `2 * radius + 1`).
pub fn gaussian_kernel(sigma: f64, radius: usize) -> Vec<f64> {
    let mut k: Vec<f64> = (0..=2 * radius)
        .map(|i| {
            let d = i as f64 - radius as f64;
            (-d * d / (2.0 * sigma * sigma)).exp()
        })
        .collect();
    let sum: f64 = k.iter().sum();
    k.iter_mut().for_each(|v| *v /= sum);
    k
}

/// Separable Gaussian blur, radius `ceil(3 sigma)`, clamped edges.
pub fn gaussian_blur(img: &RasterImage, sigma: f64) -> Result<RasterImage> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::NonPositiveSigma(sigma));
    }
    let radius = (3.0 * sigma).ceil() as usize;
    let kernel = gaussian_kernel(sigma, radius);
    let data = convolve_separable(img.data(), img.width(), img.height(), img.channels(), &kernel);
    RasterImage::new(img.width(), img.height(), img.colorspace(), data)
}

/// Horizontal then vertical pass of a symmetric odd-length kernel with clamp-to-edge.
pub(crate) fn convolve_separable(src: &[f64], w: usize, h: usize, ch: usize, kernel: &[f64]) -> Vec<f64> {
    let r = kernel.len() / 2;
    let clamp = |i: isize, n: usize| i.clamp(0, n as isize - 1) as usize;

    let mut tmp = vec![0.0; src.len()];
    let mut padded = vec![0.0; w + 2 * r];
    let mut acc = vec![0.0; w];
    for y in 0..h {
        let row = &src[y * w * ch..(y + 1) * w * ch];
        let out = &mut tmp[y * w * ch..(y + 1) * w * ch];
        for c in 0..ch {
            for (i, p) in padded.iter_mut().enumerate() {
                *p = row[clamp(i as isize - r as isize, w) * ch + c];
            }
            acc.iter_mut().for_each(|a| *a = 0.0);
            for (k, &wt) in kernel.iter().enumerate() {
                for (a, &v) in acc.iter_mut().zip(&padded[k..k + w]) {
                    *a += wt * v;
                }
            }
            for (x, &a) in acc.iter().enumerate() {
                out[x * ch + c] = a;
            }
        }
    }

    let mut dst = vec![0.0; src.len()];
    let stride = w * ch;
    for y in 0..h {
        let out = &mut dst[y * stride..(y + 1) * stride];
        for (k, &wt) in kernel.iter().enumerate() {
            let sy = clamp(y as isize + k as isize - r as isize, h);
            let row = &tmp[sy * stride..(sy + 1) * stride];
            for (o, &v) in out.iter_mut().zip(row) {
                *o += wt * v;
            }
        }
    }
    dst
}
