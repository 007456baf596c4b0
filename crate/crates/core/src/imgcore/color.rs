use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::{Colorspace, RasterImage};
use crate::error::Result;

/// A CIE L*a*b* colour (D65, 2° observer).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabPixel {
    pub l: f64,
    pub a: f64,
    pub b: f64,
}

impl LabPixel {
    pub const fn new(l: f64, a: f64, b: f64) -> Self {
        Self { l, a, b }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.l, self.a, self.b]
    }

    pub fn from_array(v: [f64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    pub fn is_finite(self) -> bool {
        self.l.is_finite() && self.a.is_finite() && self.b.is_finite()
    }
}

// D65 reference white, normalised to Y = 1.
const WHITE: [f64; 3] = [0.95047, 1.0, 1.08883];

const RGB_TO_XYZ: [[f64; 3]; 3] = [
    [0.4124564, 0.3575761, 0.1804375],
    [0.2126729, 0.7151522, 0.0721750],
    [0.0193339, 0.1191920, 0.9503041],
];

/// Exact inverse of [`RGB_TO_XYZ`], so sRGB -> Lab -> sRGB round-trips.
fn xyz_to_rgb() -> &'static [[f64; 3]; 3] {
    static INV: OnceLock<[[f64; 3]; 3]> = OnceLock::new();
    INV.get_or_init(|| {
        let m = nalgebra::Matrix3::from_fn(|i, j| RGB_TO_XYZ[i][j]);
        let inv = m.try_inverse().expect("RGB_TO_XYZ is invertible");
        std::array::from_fn(|i| std::array::from_fn(|j| inv[(i, j)]))
    })
}

const EPSILON: f64 = 216.0 / 24389.0;
const KAPPA: f64 = 24389.0 / 27.0;

fn srgb_decode_exact(v: f64) -> f64 {
    if v <= 0.04045 {
        v / 12.92
    } else {
        ((v + 0.055) / 1.055).powf(2.4)
    }
}

/// Decoded values of the 256 8-bit codes `k / 255`.
fn decode_table() -> &'static [f64; 256] {
    static TABLE: OnceLock<[f64; 256]> = OnceLock::new();
    TABLE.get_or_init(|| std::array::from_fn(|k| srgb_decode_exact(k as f64 / 255.0)))
}

#[inline]
pub(crate) fn srgb_decode(v: f64) -> f64 {
    let k = (v * 255.0).round();
    if (0.0..=255.0).contains(&k) && k / 255.0 == v {
        decode_table()[k as usize]
    } else {
        srgb_decode_exact(v)
    }
}

#[inline]
pub(crate) fn srgb_encode(v: f64) -> f64 {
    if v <= 0.0031308 {
        v * 12.92
    } else {
        1.055 * v.powf(1.0 / 2.4) - 0.055
    }
}

#[inline]
fn mat3(m: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

#[inline]
fn lab_f(t: f64) -> f64 {
    if t > EPSILON {
        t.cbrt()
    } else {
        (KAPPA * t + 16.0) / 116.0
    }
}

#[inline]
fn lab_f_inv(f: f64) -> f64 {
    let f3 = f * f * f;
    if f3 > EPSILON {
        f3
    } else {
        (116.0 * f - 16.0) / KAPPA
    }
}

/// Convert one gamma-encoded sRGB triple to Lab.
pub fn srgb_to_lab_pixel(rgb: [f64; 3]) -> LabPixel {
    let lin = [srgb_decode(rgb[0]), srgb_decode(rgb[1]), srgb_decode(rgb[2])];
    let xyz = mat3(&RGB_TO_XYZ, lin);
    let fx = lab_f(xyz[0] / WHITE[0]);
    let fy = lab_f(xyz[1] / WHITE[1]);
    let fz = lab_f(xyz[2] / WHITE[2]);
    LabPixel {
        l: 116.0 * fy - 16.0,
        a: 500.0 * (fx - fy),
        b: 200.0 * (fy - fz),
    }
}

/// Remembers the last converted pixel; runs of equal pixels skip the conversion.
#[derive(Default)]
pub(crate) struct LabMemo {
    last: Option<([u64; 3], LabPixel)>,
}

impl LabMemo {
    pub(crate) fn convert(&mut self, rgb: [f64; 3]) -> LabPixel {
        let key = rgb.map(f64::to_bits);
        match self.last {
            Some((k, lab)) if k == key => lab,
            _ => {
                let lab = srgb_to_lab_pixel(rgb);
                self.last = Some((key, lab));
                lab
            }
        }
    }
}

/// Convert Lab back to gamma-encoded sRGB, clipping out-of-gamut results to [0, 1].
pub fn lab_to_srgb_pixel(lab: LabPixel) -> [f64; 3] {
    let fy = (lab.l + 16.0) / 116.0;
    let fx = fy + lab.a / 500.0;
    let fz = fy - lab.b / 200.0;
    let y = if lab.l > KAPPA * EPSILON {
        fy * fy * fy
    } else {
        lab.l / KAPPA
    };
    let xyz = [lab_f_inv(fx) * WHITE[0], y * WHITE[1], lab_f_inv(fz) * WHITE[2]];
    let lin = mat3(xyz_to_rgb(), xyz);
    lin.map(|v| srgb_encode(v.clamp(0.0, 1.0)).clamp(0.0, 1.0))
}

/// BT.601 luma on the encoded sRGB values.
pub fn to_grayscale(img: &RasterImage) -> Result<RasterImage> {
    img.expect_colorspace(Colorspace::Srgb)?;
    let data = img
        .data()
        .chunks_exact(3)
        .map(|p| 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2])
        .collect();
    RasterImage::new(img.width(), img.height(), Colorspace::Gray, data)
}

pub fn srgb_to_lab(img: &RasterImage) -> Result<RasterImage> {
    img.expect_colorspace(Colorspace::Srgb)?;
    let mut memo = LabMemo::default();
    let data = img
        .data()
        .chunks_exact(3)
        .flat_map(|p| memo.convert([p[0], p[1], p[2]]).to_array())
        .collect();
    RasterImage::new(img.width(), img.height(), Colorspace::Lab, data)
}

pub fn lab_to_srgb(img: &RasterImage) -> Result<RasterImage> {
    img.expect_colorspace(Colorspace::Lab)?;
    let data = img
        .data()
        .chunks_exact(3)
        .flat_map(|p| lab_to_srgb_pixel(LabPixel::new(p[0], p[1], p[2])))
        .collect();
    RasterImage::new(img.width(), img.height(), Colorspace::Srgb, data)
}
