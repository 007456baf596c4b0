//! Style disentanglement into colour, font, background and mask planes.
//!
//! The classical extractor segments the text with Otsu, takes the median
//! text and background colours, fits a font style to the stroke geometry
//! and inpaints the text away. External mode loads the same four planes
//! from disk, for example the decoded outputs of a learned encoder.

mod arabic;
mod fontstyle;
mod glyphs;
mod hangul;
mod inpaint;
pub(crate) mod mask;
mod render;

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

pub use fontstyle::estimate_font_style;
pub use glyphs::{is_rtl, FontStyle, GlyphBitmap, GlyphTemplate, COVERAGE};
pub use inpaint::{remove_text, INPAINT_RADIUS, REMOVE_DILATION};
pub use mask::{extract_text_mask, TextMask, MIN_COMPONENT_FRACTION};
pub use render::{render_text_coverage, render_text_gray, RENDER_MARGIN};

use crate::error::{Error, Result};
use crate::imgcore::io::to_single_channel;
use crate::imgcore::LabMemo;
use crate::imgcore::{lab_to_srgb_pixel, load_image, resize_bilinear, Colorspace, LabPixel, RasterImage};
use mask::Bits;

/// Side length every style plane is normalised to.
pub const STYLE_SIZE: usize = 128;

/// Bilinear mask samples above this count as text after resizing.
const MASK_RESIZE_THRESHOLD: f64 = 0.3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtractorKind {
    Classical,
    External,
}

/// Where style planes come from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtractorMode {
    Classical,
    /// Directory of `<pair_id>.<side>.{clr,fnt,bg,seg}.png` files.
    External(PathBuf),
}

impl ExtractorMode {
    pub fn kind(&self) -> ExtractorKind {
        match self {
            ExtractorMode::Classical => ExtractorKind::Classical,
            ExtractorMode::External(_) => ExtractorKind::External,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn tag(self) -> &'static str {
        match self {
            Side::A => "a",
            Side::B => "b",
        }
    }
}

/// Identifies one side of a pair for external lookups.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExternalKey<'a> {
    pub pair_id: &'a str,
    pub side: Side,
}

/// Texts involved in an extraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StyleTexts<'a> {
    /// What the image reads, if known. Font fitting falls back to `target`.
    pub source: Option<&'a str>,
    /// What the colour and font planes are rendered with.
    pub target: &'a str,
}

impl<'a> StyleTexts<'a> {
    pub fn new(source: Option<&'a str>, target: &'a str) -> Self {
        Self { source, target }
    }
}

/// Estimates behind a classical triple.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalEstimates {
    pub text_color: LabPixel,
    pub background_color: LabPixel,
    pub font: FontStyle,
    /// Segmentation found no contrast; colours and font are fallbacks.
    pub degenerate: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StyleTriple {
    pub colorized: RasterImage,
    pub font_glyph: RasterImage,
    pub background: RasterImage,
    pub mask: RasterImage,
    pub extractor: ExtractorKind,
    pub estimates: Option<ClassicalEstimates>,
}

fn lab_pixels(img: &RasterImage) -> Vec<LabPixel> {
    match img.colorspace() {
        Colorspace::Lab => img.data().chunks_exact(3).map(|p| LabPixel::new(p[0], p[1], p[2])).collect(),
        _ => {
            let mut memo = LabMemo::default();
            (0..img.len_pixels())
                .map(|i| memo.convert(img.pixel(i % img.width(), i / img.width())))
                .collect()
        }
    }
}

fn median_in_place(v: &mut [f64]) -> f64 {
    let mid = v.len() / 2;
    v.select_nth_unstable_by(mid, f64::total_cmp);
    let upper = v[mid];
    if v.len() % 2 == 1 {
        upper
    } else {
        let lower = v[..mid].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        0.5 * (lower + upper)
    }
}

fn channel_median(pixels: &[LabPixel], select: impl Fn(usize) -> bool) -> Option<LabPixel> {
    let chosen: Vec<&LabPixel> = pixels.iter().enumerate().filter(|(i, _)| select(*i)).map(|(_, p)| p).collect();
    if chosen.is_empty() {
        return None;
    }
    let mut l: Vec<f64> = chosen.iter().map(|p| p.l).collect();
    let mut a: Vec<f64> = chosen.iter().map(|p| p.a).collect();
    let mut b: Vec<f64> = chosen.iter().map(|p| p.b).collect();
    Some(LabPixel::new(median_in_place(&mut l), median_in_place(&mut a), median_in_place(&mut b)))
}

fn check_mask(img: &RasterImage, mask: &RasterImage) -> Result<()> {
    if mask.width() != img.width() || mask.height() != img.height() || mask.channels() != 1 {
        return Err(Error::shape(img.shape_string(), mask.shape_string()));
    }
    Ok(())
}

/// Per-channel median Lab colour of the masked pixels.
pub fn estimate_text_color(img: &RasterImage, mask: &RasterImage) -> Result<LabPixel> {
    check_mask(img, mask)?;
    let m = mask.data();
    channel_median(&lab_pixels(img), |i| m[i] > 0.5).ok_or(Error::EmptyMask)
}

/// Blend `fill` (ink, gray 0) and `bg` (paper, gray 1) in Lab, then encode
/// as sRGB.
pub fn colorize(gray: &RasterImage, fill: LabPixel, bg: LabPixel) -> Result<RasterImage> {
    gray.expect_colorspace(Colorspace::Gray)?;
    let fill_rgb = lab_to_srgb_pixel(fill);
    let bg_rgb = lab_to_srgb_pixel(bg);
    let mut data = Vec::with_capacity(gray.len_pixels() * 3);
    for &g in gray.data() {
        let g = g.clamp(0.0, 1.0);
        let rgb = if g == 0.0 {
            fill_rgb
        } else if g == 1.0 {
            bg_rgb
        } else {
            lab_to_srgb_pixel(LabPixel::new(
                fill.l + g * (bg.l - fill.l),
                fill.a + g * (bg.a - fill.a),
                fill.b + g * (bg.b - fill.b),
            ))
        };
        data.extend_from_slice(&rgb);
    }
    RasterImage::new(gray.width(), gray.height(), Colorspace::Srgb, data)
}

/// Font proxy: the target text rendered in the style fitted to the source
/// strokes, on a `STYLE_SIZE` square canvas.
pub fn reshape_font_template(
    img: &RasterImage,
    mask: &RasterImage,
    tpl: &GlyphTemplate,
    texts: &StyleTexts<'_>,
) -> Result<RasterImage> {
    check_mask(img, mask)?;
    let style = fit_style(img, mask, tpl, texts)?;
    render_text_gray(texts.target, &tpl.with_style(style), STYLE_SIZE, STYLE_SIZE)
}

fn fit_style(img: &RasterImage, mask: &RasterImage, tpl: &GlyphTemplate, texts: &StyleTexts<'_>) -> Result<FontStyle> {
    if let Some(src) = texts.source {
        match estimate_font_style(img, mask, tpl, src) {
            Err(Error::UncoveredCodepoint(_)) | Err(Error::EmptyText) => {}
            other => return other,
        }
    }
    estimate_font_style(img, mask, tpl, texts.target)
}

fn resize_to_style(img: &RasterImage) -> Result<RasterImage> {
    resize_bilinear(img, STYLE_SIZE, STYLE_SIZE)
}

fn as_srgb(img: &RasterImage) -> Result<RasterImage> {
    match img.colorspace() {
        Colorspace::Srgb => Ok(img.clone()),
        Colorspace::Gray => {
            let data = img.data().iter().flat_map(|&v| [v, v, v]).collect();
            RasterImage::new(img.width(), img.height(), Colorspace::Srgb, data)
        }
        found => Err(Error::WrongColorspace {
            expected: Colorspace::Srgb,
            found,
        }),
    }
}

fn extract_classical(img: &RasterImage, texts: &StyleTexts<'_>, tpl: &GlyphTemplate) -> Result<StyleTriple> {
    let img = as_srgb(img)?;
    let segmented = extract_text_mask(&img)?;
    let bits = Bits::from_image(&segmented.mask);
    let pixels = lab_pixels(&img);
    let degenerate = !bits.any();

    let (text_color, background_color, font) = if degenerate {
        let all = channel_median(&pixels, |_| true).expect("image is non-empty");
        (all, all, tpl.style())
    } else {
        let fill = channel_median(&pixels, |i| bits.v[i]).expect("mask is non-empty");
        let bg = channel_median(&pixels, |i| !bits.v[i]).unwrap_or(fill);
        (fill, bg, fit_style(&img, &segmented.mask, tpl, texts)?)
    };

    let render = render_text_gray(texts.target, tpl, STYLE_SIZE, STYLE_SIZE)?;
    let colorized = colorize(&render, text_color, background_color)?;
    let font_glyph = render_text_gray(texts.target, &tpl.with_style(font), STYLE_SIZE, STYLE_SIZE)?;

    let small = resize_to_style(&img)?;
    let small_mask = resize_to_style(&segmented.mask)?.map(|v| (v > MASK_RESIZE_THRESHOLD) as u8 as f64);
    let background = remove_text(&small, &small_mask)?;

    Ok(StyleTriple {
        colorized,
        font_glyph,
        background,
        mask: small_mask,
        extractor: ExtractorKind::Classical,
        estimates: Some(ClassicalEstimates {
            text_color,
            background_color,
            font,
            degenerate,
        }),
    })
}

/// Path of one external plane, `<dir>/<pair_id>.<side>.<plane>.png`.
pub fn external_path(dir: &Path, key: ExternalKey<'_>, plane: &str) -> PathBuf {
    dir.join(format!("{}.{}.{plane}.png", key.pair_id, key.side.tag()))
}

fn load_external(dir: &Path, key: ExternalKey<'_>) -> Result<StyleTriple> {
    let load = |plane: &str| -> Result<RasterImage> {
        let path = external_path(dir, key, plane);
        if !path.is_file() {
            return Err(Error::MissingExternalFile(path));
        }
        resize_to_style(&load_image(&path)?)
    };
    let colorized = load("clr")?;
    let font_glyph = to_single_channel(&load("fnt")?);
    let background = load("bg")?;
    let mask = to_single_channel(&load("seg")?).map(|v| (v > 0.5) as u8 as f64);
    Ok(StyleTriple {
        colorized,
        font_glyph,
        background,
        mask,
        extractor: ExtractorKind::External,
        estimates: None,
    })
}

/// Extract the style triple of one image.
///
/// `key` names the pair and side for [`ExtractorMode::External`] and is
/// ignored by the classical extractor.
pub fn extract_style(
    img: &RasterImage,
    texts: &StyleTexts<'_>,
    tpl: &GlyphTemplate,
    mode: &ExtractorMode,
    key: Option<ExternalKey<'_>>,
) -> Result<StyleTriple> {
    match mode {
        ExtractorMode::Classical => extract_classical(img, texts, tpl),
        ExtractorMode::External(dir) => {
            let key = key.ok_or_else(|| Error::InvalidParams("external extraction needs a pair id and side".into()))?;
            load_external(dir, key)
        }
    }
}
