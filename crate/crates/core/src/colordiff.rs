//! CIEDE2000 colour difference and the normalised colour-similarity term.

use crate::error::{Error, Result};
use crate::imgcore::LabMemo;
use crate::imgcore::{srgb_to_lab, Colorspace, LabPixel, RasterImage};

/// Mean ΔE00 at which colour similarity bottoms out at zero.
pub const DELTA_E_SATURATION: f64 = 50.0;

/// Parametric weighting factors of CIEDE2000.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ciede2000Params {
    pub k_l: f64,
    pub k_c: f64,
    pub k_h: f64,
}

impl Default for Ciede2000Params {
    fn default() -> Self {
        Self {
            k_l: 1.0,
            k_c: 1.0,
            k_h: 1.0,
        }
    }
}

const POW25_7: f64 = 6_103_515_625.0; // 25^7

#[inline]
fn hue_deg(b: f64, a: f64) -> f64 {
    if a == 0.0 && b == 0.0 {
        return 0.0;
    }
    let h = b.atan2(a).to_degrees();
    if h < 0.0 {
        h + 360.0
    } else {
        h
    }
}

/// CIEDE2000 colour difference ΔE00 between two Lab colours.
pub fn ciede2000(p: LabPixel, q: LabPixel, k: Ciede2000Params) -> Result<f64> {
    if !p.is_finite() || !q.is_finite() {
        return Err(Error::NonFiniteInput);
    }
    if !(k.k_l > 0.0 && k.k_c > 0.0 && k.k_h > 0.0) {
        return Err(Error::InvalidParams("CIEDE2000 weights must be positive".into()));
    }
    Ok(ciede2000_unchecked(p, q, k))
}

#[inline]
pub(crate) fn ciede2000_unchecked(p: LabPixel, q: LabPixel, k: Ciede2000Params) -> f64 {
    let c1 = p.a.hypot(p.b);
    let c2 = q.a.hypot(q.b);
    let c_bar7 = ((c1 + c2) * 0.5).powi(7);
    let g = 0.5 * (1.0 - (c_bar7 / (c_bar7 + POW25_7)).sqrt());

    let a1 = (1.0 + g) * p.a;
    let a2 = (1.0 + g) * q.a;
    let c1p = a1.hypot(p.b);
    let c2p = a2.hypot(q.b);
    let h1p = hue_deg(p.b, a1);
    let h2p = hue_deg(q.b, a2);

    let dl = q.l - p.l;
    let dc = c2p - c1p;
    let chroma_product = c1p * c2p;
    let dh_angle = if chroma_product == 0.0 {
        0.0
    } else {
        let d = h2p - h1p;
        if d > 180.0 {
            d - 360.0
        } else if d < -180.0 {
            d + 360.0
        } else {
            d
        }
    };
    let dh = 2.0 * chroma_product.sqrt() * (dh_angle.to_radians() * 0.5).sin();

    let l_bar = (p.l + q.l) * 0.5;
    let c_bar_p = (c1p + c2p) * 0.5;
    let h_bar = if chroma_product == 0.0 {
        h1p + h2p
    } else if (h1p - h2p).abs() <= 180.0 {
        (h1p + h2p) * 0.5
    } else if h1p + h2p < 360.0 {
        (h1p + h2p + 360.0) * 0.5
    } else {
        (h1p + h2p - 360.0) * 0.5
    };

    let t = 1.0 - 0.17 * (h_bar - 30.0).to_radians().cos()
        + 0.24 * (2.0 * h_bar).to_radians().cos()
        + 0.32 * (3.0 * h_bar + 6.0).to_radians().cos()
        - 0.20 * (4.0 * h_bar - 63.0).to_radians().cos();
    let d_theta = 30.0 * (-((h_bar - 275.0) / 25.0).powi(2)).exp();
    let c_bar_p7 = c_bar_p.powi(7);
    let r_c = 2.0 * (c_bar_p7 / (c_bar_p7 + POW25_7)).sqrt();
    let l50 = (l_bar - 50.0).powi(2);
    let s_l = 1.0 + 0.015 * l50 / (20.0 + l50).sqrt();
    let s_c = 1.0 + 0.045 * c_bar_p;
    let s_h = 1.0 + 0.015 * c_bar_p * t;
    let r_t = -(2.0 * d_theta).to_radians().sin() * r_c;

    let tl = dl / (k.k_l * s_l);
    let tc = dc / (k.k_c * s_c);
    let th = dh / (k.k_h * s_h);
    (tl * tl + tc * tc + th * th + r_t * tc * th).max(0.0).sqrt()
}

/// Mean per-pixel ΔE00 between two Lab images, optionally restricted to the
/// pixels where `mask > 0.5`.
pub fn mean_image_ciede2000(a: &RasterImage, b: &RasterImage, mask: Option<&RasterImage>) -> Result<f64> {
    a.expect_colorspace(Colorspace::Lab)?;
    b.expect_colorspace(Colorspace::Lab)?;
    a.expect_same_shape(b)?;
    if let Some(m) = mask {
        if m.width() != a.width() || m.height() != a.height() || m.channels() != 1 {
            return Err(Error::shape(a.shape_string(), m.shape_string()));
        }
    }
    let k = Ciede2000Params::default();
    let mut sum = 0.0;
    let mut count = 0usize;
    for (i, (pa, pb)) in a.data().chunks_exact(3).zip(b.data().chunks_exact(3)).enumerate() {
        if mask.is_some_and(|m| m.data()[i] <= 0.5) {
            continue;
        }
        let p = LabPixel::new(pa[0], pa[1], pa[2]);
        let q = LabPixel::new(pb[0], pb[1], pb[2]);
        if !p.is_finite() || !q.is_finite() {
            return Err(Error::NonFiniteInput);
        }
        sum += ciede2000_unchecked(p, q, k);
        count += 1;
    }
    if count == 0 {
        return Err(Error::EmptyMask);
    }
    Ok(sum / count as f64)
}

/// `1 - min(dE / 50, 1)`.
pub fn similarity_from_delta_e(mean_delta_e: f64) -> f64 {
    1.0 - (mean_delta_e / DELTA_E_SATURATION).min(1.0)
}

/// Colour similarity of two colourised renders, averaged over every pixel.
pub fn color_similarity(ca: &RasterImage, cb: &RasterImage) -> Result<f64> {
    ca.expect_same_shape(cb)?;
    let de = mean_image_ciede2000(&srgb_to_lab(ca)?, &srgb_to_lab(cb)?, None)?;
    Ok(similarity_from_delta_e(de))
}

/// Colour similarity averaged over the pixels selected by `mask`.
pub fn color_similarity_masked(ca: &RasterImage, cb: &RasterImage, mask: &RasterImage) -> Result<f64> {
    ca.expect_colorspace(Colorspace::Srgb)?;
    cb.expect_colorspace(Colorspace::Srgb)?;
    ca.expect_same_shape(cb)?;
    if mask.width() != ca.width() || mask.height() != ca.height() || mask.channels() != 1 {
        return Err(Error::shape(ca.shape_string(), mask.shape_string()));
    }
    let k = Ciede2000Params::default();
    let (mut sum, mut count) = (0.0, 0usize);
    let (mut ma, mut mb) = (LabMemo::default(), LabMemo::default());
    for (i, _) in mask.data().iter().enumerate().filter(|(_, m)| **m > 0.5) {
        let (pa, pb) = (&ca.data()[i * 3..i * 3 + 3], &cb.data()[i * 3..i * 3 + 3]);
        if pa.iter().chain(pb).any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteInput);
        }
        let p = ma.convert([pa[0], pa[1], pa[2]]);
        let q = mb.convert([pb[0], pb[1], pb[2]]);
        sum += ciede2000_unchecked(p, q, k);
        count += 1;
    }
    if count == 0 {
        return Err(Error::EmptyMask);
    }
    Ok(similarity_from_delta_e(sum / count as f64))
}
