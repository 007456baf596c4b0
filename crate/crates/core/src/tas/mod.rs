//! Text appearance similarity and the evaluation protocol around it.
//!
//! TAS compares two text images through their style triples: colour via
//! CIEDE2000 between the colourised renders, font via FSIM between the
//! font planes and background via MS-SSIM between the text-free
//! backgrounds. The score is the plain mean of the three.

mod stats;
mod text;

pub use stats::{anova, average_ranks, icc3k, pearson, spearman, AnovaTable, RatingsMatrix, RatingsTable, DEFAULT_SCALE, OVERALL};
pub use text::{exact_match, ned, normalize_for_match, rec_acc};

use serde::{Deserialize, Serialize};

use crate::colordiff::{color_similarity, color_similarity_masked};
use crate::error::{Error, Result};
use crate::fsim::{fsim, FsimParams};
use crate::imgcore::{resize_bilinear, to_grayscale, Colorspace, RasterImage};
use crate::simmetrics::{mse, ms_ssim_default, psnr, ssim, SsimParams};
use crate::styleextract::mask::Bits;
use crate::styleextract::{
    extract_style, extract_text_mask, ExternalKey, ExtractorKind, ExtractorMode, GlyphTemplate, Side, StyleTexts, StyleTriple,
    STYLE_SIZE,
};

/// How the components were pooled, recorded with every report.
pub const AGGREGATION_NOTE: &str =
    "s_clr: mean dE00 over the union of both colourised text masks (whole plane if both empty), saturating at 50; \
     s_fnt: FSIM on font planes; s_bg: MS-SSIM on luma backgrounds; planes 128x128";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TasReport {
    pub s_clr: f64,
    pub s_fnt: f64,
    pub s_bg: f64,
    pub tas: f64,
    pub extractor: ExtractorKind,
    pub note: String,
}

impl TasReport {
    /// Assemble a report from its three components, each in [0, 1].
    pub fn from_components(s_clr: f64, s_fnt: f64, s_bg: f64, extractor: ExtractorKind) -> Result<Self> {
        for (name, v) in [("s_clr", s_clr), ("s_fnt", s_fnt), ("s_bg", s_bg)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParams(format!("{name} = {v} is outside [0, 1]")));
            }
        }
        Ok(Self {
            s_clr,
            s_fnt,
            s_bg,
            tas: (s_clr + s_fnt + s_bg) / 3.0,
            extractor,
            note: AGGREGATION_NOTE.to_string(),
        })
    }
}

/// Texts of a compared pair. Both colourised renders use `target`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairTexts<'a> {
    pub source_a: Option<&'a str>,
    pub source_b: Option<&'a str>,
    pub target: &'a str,
}

impl<'a> PairTexts<'a> {
    /// Only the target text is known.
    pub fn target_only(target: &'a str) -> Self {
        Self {
            source_a: None,
            source_b: None,
            target,
        }
    }
}

fn luma(img: &RasterImage) -> Result<RasterImage> {
    match img.colorspace() {
        Colorspace::Gray => Ok(img.clone()),
        _ => to_grayscale(img),
    }
}

fn text_region(a: &RasterImage, b: &RasterImage) -> Result<Option<RasterImage>> {
    let ma = Bits::from_image(&extract_text_mask(a)?.mask);
    let mb = Bits::from_image(&extract_text_mask(b)?.mask);
    let union = ma.union(&mb);
    Ok(union.any().then(|| union.to_image()))
}

/// TAS from two already extracted style triples.
pub fn tas_from_triples(a: &StyleTriple, b: &StyleTriple) -> Result<TasReport> {
    let s_clr = match text_region(&a.colorized, &b.colorized)? {
        Some(m) => color_similarity_masked(&a.colorized, &b.colorized, &m)?,
        None => color_similarity(&a.colorized, &b.colorized)?,
    };
    let s_fnt = fsim(&luma(&a.font_glyph)?, &luma(&b.font_glyph)?, &FsimParams::default())?;
    let s_bg = ms_ssim_default(&luma(&a.background)?, &luma(&b.background)?)?;
    let extractor = if a.extractor == b.extractor {
        a.extractor
    } else {
        return Err(Error::InvalidParams("triples come from different extractors".into()));
    };
    TasReport::from_components(s_clr.clamp(0.0, 1.0), s_fnt.clamp(0.0, 1.0), s_bg.clamp(0.0, 1.0), extractor)
}

/// TAS with explicit texts. `pair_id` is needed by external extraction.
pub fn tas_with_texts(
    img_a: &RasterImage,
    img_b: &RasterImage,
    texts: &PairTexts<'_>,
    tpl: &GlyphTemplate,
    mode: &ExtractorMode,
    pair_id: Option<&str>,
) -> Result<TasReport> {
    let key = |side| pair_id.map(|pair_id| ExternalKey { pair_id, side });
    let ta = extract_style(img_a, &StyleTexts::new(texts.source_a, texts.target), tpl, mode, key(Side::A))?;
    let tb = extract_style(img_b, &StyleTexts::new(texts.source_b, texts.target), tpl, mode, key(Side::B))?;
    tas_from_triples(&ta, &tb)
}

/// Text appearance similarity of `img_a` and `img_b`, rendering `text_b`.
pub fn tas(img_a: &RasterImage, img_b: &RasterImage, text_b: &str, tpl: &GlyphTemplate, mode: &ExtractorMode) -> Result<TasReport> {
    tas_with_texts(img_a, img_b, &PairTexts::target_only(text_b), tpl, mode, None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalMode {
    /// Compare the generated image with its ground truth.
    WithGt,
    /// Compare the generated image with the source it was edited from.
    GtFree,
}

impl EvalMode {
    pub fn tag(self) -> &'static str {
        match self {
            EvalMode::WithGt => "with_gt",
            EvalMode::GtFree => "gt_free",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub pair_id: String,
    pub mode: EvalMode,
    pub ssim: f64,
    /// Uncapped; identical images give infinity.
    pub psnr: f64,
    pub mse: f64,
    pub tas: TasReport,
    /// Present when an OCR transcript of the generated image is known.
    pub ned: Option<f64>,
    pub recognized: Option<bool>,
}

/// One pair to evaluate.
#[derive(Clone, Copy, Debug)]
pub struct PairInputs<'a> {
    pub pair_id: &'a str,
    pub generated: &'a RasterImage,
    pub source: &'a RasterImage,
    pub gt: Option<&'a RasterImage>,
    /// What the source reads.
    pub source_text: &'a str,
    /// What the generated image should read.
    pub target_text: &'a str,
    /// OCR transcript of the generated image.
    pub transcript: Option<&'a str>,
}

/// Full metric vector for one pair. The reference is the ground truth in
/// [`EvalMode::WithGt`] and the source in [`EvalMode::GtFree`]; `gt` is not
/// touched in the latter. A reference of a different size is resampled to
/// the generated image's size for SSIM, PSNR and MSE.
pub fn evaluate_pair(p: &PairInputs<'_>, tpl: &GlyphTemplate, mode: EvalMode, extractor: &ExtractorMode) -> Result<MetricRow> {
    let (reference, ref_text) = match mode {
        EvalMode::WithGt => (p.gt.ok_or(Error::MissingGroundTruth)?, p.target_text),
        EvalMode::GtFree => (p.source, p.source_text),
    };
    let gen = p.generated;
    let aligned = if reference.width() == gen.width() && reference.height() == gen.height() {
        reference.clone()
    } else {
        resize_bilinear(reference, gen.width(), gen.height())?
    };
    let (g_luma, r_luma) = (luma(gen)?, luma(&aligned)?);
    let ssim_v = ssim(&r_luma, &g_luma, &SsimParams::default())?;
    let (mse_v, psnr_v) = if aligned.colorspace() == gen.colorspace() {
        (mse(&aligned, gen)?, psnr(&aligned, gen)?)
    } else {
        (mse(&r_luma, &g_luma)?, psnr(&r_luma, &g_luma)?)
    };
    let texts = PairTexts {
        source_a: Some(ref_text),
        source_b: Some(p.target_text),
        target: p.target_text,
    };
    let report = tas_with_texts(reference, gen, &texts, tpl, extractor, Some(p.pair_id))?;
    Ok(MetricRow {
        pair_id: p.pair_id.to_string(),
        mode,
        ssim: ssim_v,
        psnr: psnr_v,
        mse: mse_v,
        tas: report,
        ned: p.transcript.map(|t| ned(t, p.target_text)),
        recognized: p.transcript.map(|t| exact_match(t, p.target_text)),
    })
}

/// Side length of the planes TAS compares.
pub const PLANE_SIZE: usize = STYLE_SIZE;
