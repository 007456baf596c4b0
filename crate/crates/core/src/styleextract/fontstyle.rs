//! Font style estimation by analysis-by-synthesis.
//!
//! Two descriptors are measured on the source mask: relative stroke
//! thickness (inked area over skeleton length, divided by the text height)
//! and shear (the ink-weighted x-y second moment over the y-y moment). The known source
//! text is then re-rendered with candidate styles at the same height until
//! its descriptors match, which cancels most of the dependence on content.

use super::glyphs::{FontStyle, GlyphTemplate, Layout, MAX_SLANT, MAX_WEIGHT, MIN_WEIGHT};
use super::mask::Bits;
use super::render::coverage_at_scale;
use crate::error::{Error, Result};
use crate::imgcore::{to_grayscale, Colorspace, RasterImage};

/// Joint weight and slant updates after the initial slant estimate.
const FIT_ITERATIONS: usize = 4;
/// Luma separation below which the mask is used as a hard ink map.
const MIN_INK_CONTRAST: f64 = 0.02;

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Descriptor {
    pub thickness: f64,
    pub shear: f64,
    pub height: f64,
}

/// Stroke descriptors of a binary mask with per-pixel ink in [0, 1].
pub(crate) fn describe(mask: &Bits, ink: &[f64]) -> Option<Descriptor> {
    let (_, y0, _, y1) = mask.bbox()?;
    let height = (y1 - y0 + 1) as f64;
    let skel = mask.skeleton().count();
    if skel == 0 {
        return None;
    }
    let support = mask.dilate(1);
    let area: f64 = support.v.iter().zip(ink).filter(|(m, _)| **m).map(|(_, v)| v).sum();

    let w = mask.w;
    let weighted = || support.v.iter().zip(ink).enumerate().filter(|(_, (m, _))| **m).map(|(i, (_, v))| (i, *v));
    let (mut n, mut sx, mut sy) = (0.0, 0.0, 0.0);
    for (i, v) in weighted() {
        n += v;
        sx += v * (i % w) as f64;
        sy += v * (i / w) as f64;
    }
    if n <= 0.0 {
        return None;
    }
    let (mx, my) = (sx / n, sy / n);
    let (mut mu11, mut mu02) = (0.0, 0.0);
    for (i, v) in weighted() {
        let dx = (i % w) as f64 - mx;
        let dy = (i / w) as f64 - my;
        mu11 += v * dx * dy;
        mu02 += v * dy * dy;
    }
    if mu02 <= 0.0 {
        return None;
    }
    Some(Descriptor {
        thickness: area / skel as f64 / height,
        shear: mu11 / mu02,
        height,
    })
}

fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    let mid = v.len() / 2;
    v.select_nth_unstable_by(mid, f64::total_cmp);
    let upper = v[mid];
    if v.len() % 2 == 1 {
        Some(upper)
    } else {
        let lower = v[..mid].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Some(0.5 * (lower + upper))
    }
}

/// Soft ink map from luma: 0 at the background level, 1 at the text level.
fn ink_map(img: &RasterImage, mask: &Bits) -> Result<Vec<f64>> {
    let gray = if img.colorspace() == Colorspace::Gray {
        img.clone()
    } else {
        to_grayscale(img)?
    };
    let l = gray.data();
    let fg = median(l.iter().zip(&mask.v).filter(|(_, m)| **m).map(|(v, _)| *v).collect());
    let bg = median(l.iter().zip(&mask.v).filter(|(_, m)| !**m).map(|(v, _)| *v).collect());
    Ok(match (fg, bg) {
        (Some(f), Some(b)) if (f - b).abs() > MIN_INK_CONTRAST => {
            l.iter().map(|v| ((v - b) / (f - b)).clamp(0.0, 1.0)).collect()
        }
        _ => mask.v.iter().map(|&m| m as u8 as f64).collect(),
    })
}

fn synth_descriptor(text: &str, style: FontStyle, height_px: f64) -> Result<Option<Descriptor>> {
    let lay = Layout::new(text, style)?;
    let ink_h = (lay.ink[3] - lay.ink[1]) + style.weight;
    let px_per_em = height_px / ink_h.max(1e-3);
    let (cov, w, h) = coverage_at_scale(text, style, px_per_em, 2)?;
    let mask = Bits {
        w,
        h,
        v: cov.iter().map(|&c| c >= 0.5).collect(),
    };
    Ok(describe(&mask, &cov))
}

/// Estimate the weight and slant of the text in `img`, which is assumed to
/// read `source_text`, relative to the template's stroke skeletons.
pub fn estimate_font_style(img: &RasterImage, mask: &RasterImage, tpl: &GlyphTemplate, source_text: &str) -> Result<FontStyle> {
    let bits = Bits::from_image(mask);
    if !bits.any() {
        return Err(Error::EmptyMask);
    }
    let ink = ink_map(img, &bits)?;
    let Some(src) = describe(&bits, &ink) else {
        return Ok(tpl.style());
    };
    let start = FontStyle {
        weight: tpl.style().weight,
        slant: 0.0,
    };
    let Some(upright) = synth_descriptor(source_text, start, src.height)? else {
        return Ok(tpl.style());
    };
    let mut style = FontStyle {
        weight: start.weight,
        slant: (upright.shear - src.shear).clamp(-MAX_SLANT, MAX_SLANT),
    };
    let mut prev = (0.0, upright.shear);
    for _ in 0..FIT_ITERATIONS {
        let Some(d) = synth_descriptor(source_text, style, src.height)? else {
            break;
        };
        if !(d.thickness > 0.0) {
            break;
        }
        // shear falls by about one per unit of slant; measure the local slope
        let ds = style.slant - prev.0;
        let slope = if ds.abs() > 1e-3 { (d.shear - prev.1) / ds } else { -1.0 };
        let slope = if (-2.0..=-0.5).contains(&slope) { slope } else { -1.0 };
        prev = (style.slant, d.shear);
        style.weight = (style.weight * src.thickness / d.thickness).clamp(MIN_WEIGHT, MAX_WEIGHT);
        style.slant = (style.slant + (src.shear - d.shear) / slope).clamp(-MAX_SLANT, MAX_SLANT);
    }
    Ok(style)
}
