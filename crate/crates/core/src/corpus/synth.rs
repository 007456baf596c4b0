//! Controlled-variation pair generator.
//!
//! Every pair starts from a sampled style (text, font, fill colour,
//! background). Image B then changes exactly the attributes named by the
//! variation: `T` the text, `F` the font, `C` the fill colour, `B` the
//! background family and colour, `FCB` font, colour and background at once.

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::manifest::{Lang, ManifestEntry, PairManifest, SourceKind, Split};
use crate::colordiff::{ciede2000, Ciede2000Params};
use crate::error::{Error, Result};
use crate::imgcore::{save_png, srgb_to_lab_pixel, Colorspace, RasterImage};
use crate::styleextract::{render_text_coverage, GlyphTemplate};

/// Minimum CIEDE2000 between the two fills of a colour variation.
pub const MIN_FILL_DELTA_E: f64 = 20.0;
/// Minimum luma gap between the fill and the background base colour.
pub const MIN_CONTRAST: f64 = 0.45;
/// Canvas fraction left empty on each side of the text.
pub const TEXT_MARGIN: f64 = 0.12;

const MAX_DRAWS: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variation {
    T,
    F,
    C,
    B,
    #[serde(rename = "FCB")]
    Fcb,
}

impl Variation {
    pub const ALL: [Variation; 5] = [Variation::T, Variation::F, Variation::C, Variation::B, Variation::Fcb];

    pub fn tag(self) -> &'static str {
        match self {
            Variation::T => "T",
            Variation::F => "F",
            Variation::C => "C",
            Variation::B => "B",
            Variation::Fcb => "FCB",
        }
    }

    fn font(self) -> bool {
        matches!(self, Variation::F | Variation::Fcb)
    }

    fn color(self) -> bool {
        matches!(self, Variation::C | Variation::Fcb)
    }

    fn background(self) -> bool {
        matches!(self, Variation::B | Variation::Fcb)
    }
}

impl std::str::FromStr for Variation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variation::ALL
            .into_iter()
            .find(|v| v.tag().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidConfig(format!("unknown variation {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackgroundKind {
    Solid,
    Gradient,
    Noise,
}

/// A fill colour and the background base colour it is paired with, 8-bit sRGB.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaletteEntry {
    pub fill: [u8; 3],
    pub background: [u8; 3],
}

fn default_canvas() -> [usize; 2] {
    [256, 96]
}

fn default_fonts() -> Vec<String> {
    GlyphTemplate::builtin_names().into_iter().map(String::from).collect()
}

fn default_palette() -> Vec<PaletteEntry> {
    let p = |fill, background| PaletteEntry { fill, background };
    vec![
        p([20, 20, 20], [235, 232, 220]),
        p([30, 60, 150], [240, 236, 210]),
        p([150, 20, 30], [230, 225, 200]),
        p([20, 90, 50], [225, 235, 228]),
        p([250, 250, 245], [40, 45, 60]),
        p([250, 220, 60], [30, 30, 40]),
        p([240, 240, 240], [150, 30, 40]),
        p([90, 30, 110], [220, 215, 235]),
    ]
}

fn default_backgrounds() -> Vec<BackgroundKind> {
    vec![BackgroundKind::Solid, BackgroundKind::Gradient, BackgroundKind::Noise]
}

/// Korean words of two to four syllables.
pub const DEFAULT_WORDS: [&str; 40] = [
    "하늘", "바다", "나무", "사랑", "학교", "가방", "친구", "음악", "여름", "겨울", "사과", "우유", "도시", "시장",
    "공원", "기차", "편지", "그림", "노래", "바람", "하늘색", "도서관", "운동장", "자전거", "비행기", "냉장고",
    "컴퓨터", "병원", "약국", "커피", "김치", "라면", "주말", "아침", "저녁", "꽃집", "빵집", "서울역", "대한민국",
    "행복한날",
];

fn default_texts() -> Vec<String> {
    DEFAULT_WORDS.iter().map(|s| s.to_string()).collect()
}

fn default_lang() -> Lang {
    Lang::Ko
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct VariationConfig {
    #[serde(alias = "n_pairs")]
    pub n_pairs: usize,
    pub variation: Variation,
    #[serde(default)]
    pub seed: u64,
    /// `[width, height]` in pixels.
    #[serde(default = "default_canvas")]
    pub canvas: [usize; 2],
    /// Built-in font names.
    #[serde(default = "default_fonts")]
    pub fonts: Vec<String>,
    #[serde(default = "default_palette")]
    pub palette: Vec<PaletteEntry>,
    #[serde(default = "default_backgrounds")]
    pub backgrounds: Vec<BackgroundKind>,
    #[serde(default = "default_texts")]
    pub texts: Vec<String>,
    #[serde(default = "default_lang")]
    pub lang: Lang,
}

impl VariationConfig {
    pub fn new(variation: Variation, n_pairs: usize, seed: u64) -> Self {
        Self {
            n_pairs,
            variation,
            seed,
            canvas: default_canvas(),
            fonts: default_fonts(),
            palette: default_palette(),
            backgrounds: default_backgrounds(),
            texts: default_texts(),
            lang: default_lang(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.n_pairs == 0 {
            return bad("n_pairs must be at least 1".into());
        }
        if self.canvas[0] < 16 || self.canvas[1] < 16 {
            return bad(format!("canvas {:?} is smaller than 16x16", self.canvas));
        }
        if self.fonts.is_empty() {
            return bad("no fonts configured".into());
        }
        if let Some(f) = self.fonts.iter().find(|f| GlyphTemplate::builtin(f).is_none()) {
            return bad(format!("unknown font {f:?}; built-in fonts are {:?}", GlyphTemplate::builtin_names()));
        }
        if self.variation.font() && self.fonts.len() < 2 {
            return bad("font variation needs at least two fonts".into());
        }
        if self.palette.is_empty() {
            return bad("palette is empty".into());
        }
        if self.backgrounds.is_empty() {
            return bad("no background kinds configured".into());
        }
        if self.variation.background() && self.backgrounds.len() < 2 {
            return bad("background variation needs at least two background kinds".into());
        }
        let distinct = {
            let mut t = self.texts.clone();
            t.sort();
            t.dedup();
            t.len()
        };
        if distinct == 0 {
            return bad("no texts configured".into());
        }
        if self.variation == Variation::T && distinct < 2 {
            return bad("text variation needs at least two distinct texts".into());
        }
        let tpl = GlyphTemplate::default();
        for t in &self.texts {
            if t.trim().is_empty() {
                return bad("texts must be non-empty".into());
            }
            if let Some(c) = t.chars().find(|c| !c.is_whitespace() && !tpl.covers(*c)) {
                return Err(Error::UncoveredCodepoint(c));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BackgroundSpec {
    pub kind: BackgroundKind,
    /// Base colour, sRGB in [0, 1].
    pub base: [f64; 3],
    pub seed: u64,
}

/// Ground truth of one side of a pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SideTruth {
    pub text: String,
    pub font: String,
    /// sRGB in [0, 1].
    pub fill: [f64; 3],
    pub background: BackgroundSpec,
    /// Mask path relative to the output directory.
    pub mask: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SidecarEntry {
    pub pair_id: String,
    pub variation: Variation,
    pub a: SideTruth,
    pub b: SideTruth,
    pub fill_delta_e: f64,
}

/// One generated pair held in memory.
#[derive(Clone, Debug, PartialEq)]
pub struct SynthPair {
    pub image_a: RasterImage,
    pub image_b: RasterImage,
    pub mask_a: RasterImage,
    pub mask_b: RasterImage,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SynthOutput {
    /// Paths relative to the output directory.
    pub manifest: PairManifest,
    pub sidecar: Vec<SidecarEntry>,
    pub pairs: Vec<SynthPair>,
}

fn luma(c: [f64; 3]) -> f64 {
    0.299 * c[0] + 0.587 * c[1] + 0.114 * c[2]
}

fn to_unit(c: [u8; 3]) -> [f64; 3] {
    c.map(|v| v as f64 / 255.0)
}

fn quantize(v: f64) -> f64 {
    (v.clamp(0.0, 1.0) * 255.0).round() / 255.0
}

fn delta_e(a: [f64; 3], b: [f64; 3]) -> f64 {
    ciede2000(srgb_to_lab_pixel(a), srgb_to_lab_pixel(b), Ciede2000Params::default()).unwrap_or(0.0)
}

fn random_color(rng: &mut ChaCha8Rng) -> [f64; 3] {
    [rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>()]
}

/// A colour with the requested luma relation to `other`.
fn draw_color(rng: &mut ChaCha8Rng, accept: impl Fn([f64; 3]) -> bool) -> Result<[f64; 3]> {
    for _ in 0..MAX_DRAWS {
        let c = random_color(rng).map(quantize);
        if accept(c) {
            return Ok(c);
        }
    }
    Err(Error::InvalidConfig("could not draw a colour meeting the contrast constraints".into()))
}

fn contrasted(fill: [f64; 3], bg: [f64; 3]) -> bool {
    (luma(fill) - luma(bg)).abs() >= MIN_CONTRAST
}

/// Background base colours stay clear of the extremes so textures do not clip.
fn bg_in_range(bg: [f64; 3]) -> bool {
    (0.12..=0.88).contains(&luma(bg))
}

fn pick<'a, T>(rng: &mut ChaCha8Rng, items: &'a [T]) -> &'a T {
    &items[rng.random_range(0..items.len())]
}

fn pick_other<'a, T: PartialEq>(rng: &mut ChaCha8Rng, items: &'a [T], not: &T) -> &'a T {
    let others: Vec<&T> = items.iter().filter(|i| *i != not).collect();
    others[rng.random_range(0..others.len())]
}

fn hash2(seed: u64, x: i64, y: i64) -> f64 {
    let mut h = seed ^ 0x9E37_79B9_7F4A_7C15;
    for v in [x as u64, y as u64] {
        h ^= v.wrapping_mul(0xBF58_476D_1CE4_E5B9);
        h = (h ^ (h >> 31)).wrapping_mul(0x94D0_49BB_1331_11EB);
        h ^= h >> 29;
    }
    (h >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
}

fn smooth(t: f64) -> f64 {
    t * t * (3.0 - 2.0 * t)
}

/// Render a background instance; equal specs give identical images.
pub fn render_background(spec: &BackgroundSpec, w: usize, h: usize) -> RasterImage {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let grain = 0.02;
    let offset: Box<dyn Fn(usize, usize) -> f64> = match spec.kind {
        BackgroundKind::Solid => Box::new(|_, _| 0.0),
        BackgroundKind::Gradient => {
            let angle = rng.random::<f64>() * std::f64::consts::TAU;
            let amp = rng.random_range(0.12..0.2);
            let (dx, dy) = (angle.cos(), angle.sin());
            let half = 0.5 * ((w * w + h * h) as f64).sqrt();
            let (cx, cy) = (0.5 * w as f64, 0.5 * h as f64);
            Box::new(move |x, y| amp * ((x as f64 - cx) * dx + (y as f64 - cy) * dy) / half)
        }
        BackgroundKind::Noise => {
            let cell = rng.random_range(14.0..24.0);
            let amp = rng.random_range(0.1..0.16);
            let lattice = rng.random::<u64>();
            Box::new(move |x, y| {
                let (fx, fy) = (x as f64 / cell, y as f64 / cell);
                let (ix, iy) = (fx.floor() as i64, fy.floor() as i64);
                let (tx, ty) = (smooth(fx - ix as f64), smooth(fy - iy as f64));
                let v = |i, j| hash2(lattice, i, j);
                let top = v(ix, iy) * (1.0 - tx) + v(ix + 1, iy) * tx;
                let bottom = v(ix, iy + 1) * (1.0 - tx) + v(ix + 1, iy + 1) * tx;
                amp * (top * (1.0 - ty) + bottom * ty)
            })
        }
    };
    let grain_seed = rng.random::<u64>();
    RasterImage::rgb_from_fn(w, h, Colorspace::Srgb, |x, y| {
        let o = offset(x, y) + grain * hash2(grain_seed, x as i64, y as i64);
        spec.base.map(|c| c + o)
    })
}

struct Style {
    text: String,
    font: String,
    fill: [f64; 3],
    background: BackgroundSpec,
}

fn composite(style: &Style, w: usize, h: usize) -> Result<(RasterImage, RasterImage)> {
    let tpl = GlyphTemplate::builtin(&style.font).ok_or_else(|| Error::InvalidConfig(format!("unknown font {:?}", style.font)))?;
    let cov = render_text_coverage(&style.text, tpl.style(), w, h, TEXT_MARGIN)?;
    let bg = render_background(&style.background, w, h);
    let fill = style.fill;
    let img = RasterImage::rgb_from_fn(w, h, Colorspace::Srgb, |x, y| {
        let c = cov[y * w + x];
        let b = bg.pixel(x, y);
        [0, 1, 2].map(|k| quantize(fill[k] * c + b[k] * (1.0 - c)))
    });
    let mask = RasterImage::gray_from_fn(w, h, |x, y| (cov[y * w + x] >= 0.5) as u8 as f64);
    Ok((img, mask))
}

fn sample_pair(cfg: &VariationConfig, index: usize) -> Result<(Style, Style)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64 + 1);
    let v = cfg.variation;

    let entry = *pick(&mut rng, &cfg.palette);
    let fill_a = to_unit(entry.fill);
    let kind_a = *pick(&mut rng, &cfg.backgrounds);
    let a = Style {
        text: pick(&mut rng, &cfg.texts).clone(),
        font: pick(&mut rng, &cfg.fonts).clone(),
        fill: fill_a,
        background: BackgroundSpec {
            kind: kind_a,
            base: to_unit(entry.background),
            seed: rng.random(),
        },
    };

    let text = if v == Variation::T {
        pick_other(&mut rng, &cfg.texts, &a.text).clone()
    } else {
        a.text.clone()
    };
    let font = if v.font() {
        pick_other(&mut rng, &cfg.fonts, &a.font).clone()
    } else {
        a.font.clone()
    };
    let background = if v.background() {
        let kind = *pick_other(&mut rng, &cfg.backgrounds, &kind_a);
        // keep the original polarity so only the background changes character
        let dark_text = luma(a.fill) < luma(a.background.base);
        let fill_ref = a.fill;
        let base = draw_color(&mut rng, |c| {
            bg_in_range(c) && contrasted(fill_ref, c) && (luma(fill_ref) < luma(c)) == dark_text && delta_e(c, a.background.base) >= MIN_FILL_DELTA_E
        })?;
        BackgroundSpec {
            kind,
            base,
            seed: rng.random(),
        }
    } else {
        a.background
    };
    let fill = if v.color() {
        let bg = background.base;
        draw_color(&mut rng, |c| contrasted(c, bg) && delta_e(c, fill_a) >= MIN_FILL_DELTA_E)?
    } else {
        a.fill
    };
    let b = Style {
        text,
        font,
        fill,
        background,
    };
    Ok((a, b))
}

pub fn pair_id(v: Variation, index: usize) -> String {
    format!("{}-{index:05}", v.tag())
}

fn image_rel(id: &str, side: &str) -> PathBuf {
    PathBuf::from("images").join(format!("{id}.{side}.png"))
}

fn mask_rel(id: &str, side: &str) -> PathBuf {
    PathBuf::from("masks").join(format!("{id}.{side}.mask.png"))
}

/// Generate one pair by index; pairs are independent of each other.
pub fn synth_pair(cfg: &VariationConfig, index: usize) -> Result<(ManifestEntry, SidecarEntry, SynthPair)> {
    let (a, b) = sample_pair(cfg, index)?;
    let [w, h] = cfg.canvas;
    let (image_a, mask_a) = composite(&a, w, h)?;
    let (image_b, mask_b) = composite(&b, w, h)?;
    let id = pair_id(cfg.variation, index);
    let entry = ManifestEntry {
        pair_id: id.clone(),
        lang: cfg.lang,
        image_a: image_rel(&id, "a"),
        image_b: image_rel(&id, "b"),
        text_a: a.text.clone(),
        text_b: b.text.clone(),
        source: SourceKind::Synth,
        // 8:2 train/eval
        split: if index % 5 == 4 { Split::Eval } else { Split::Train },
        generated: None,
        gt: None,
        extra: Default::default(),
    };
    let truth = |s: Style, side: &str| SideTruth {
        mask: mask_rel(&id, side),
        text: s.text,
        font: s.font,
        fill: s.fill,
        background: s.background,
    };
    let sidecar = SidecarEntry {
        pair_id: id.clone(),
        variation: cfg.variation,
        fill_delta_e: delta_e(a.fill, b.fill),
        a: truth(a, "a"),
        b: truth(b, "b"),
    };
    Ok((
        entry,
        sidecar,
        SynthPair {
            image_a,
            image_b,
            mask_a,
            mask_b,
        },
    ))
}

/// Generate every pair of `cfg` in memory.
pub fn synth_variations(cfg: &VariationConfig) -> Result<SynthOutput> {
    cfg.validate()?;
    let mut entries = Vec::with_capacity(cfg.n_pairs);
    let mut sidecar = Vec::with_capacity(cfg.n_pairs);
    let mut pairs = Vec::with_capacity(cfg.n_pairs);
    for i in 0..cfg.n_pairs {
        let (e, s, p) = synth_pair(cfg, i)?;
        entries.push(e);
        sidecar.push(s);
        pairs.push(p);
    }
    Ok(SynthOutput {
        manifest: PairManifest::new(entries, PathBuf::new())?,
        sidecar,
        pairs,
    })
}

pub const MANIFEST_FILE: &str = "manifest.jsonl";
pub const SIDECAR_FILE: &str = "sidecar.jsonl";

/// Generate and write images, masks, `manifest.jsonl` and `sidecar.jsonl`
/// under `dir`. Returns the manifest with `dir` as its base.
pub fn write_synth(cfg: &VariationConfig, dir: &Path) -> Result<PairManifest> {
    let out = synth_variations(cfg)?;
    for sub in ["images", "masks"] {
        let p = dir.join(sub);
        std::fs::create_dir_all(&p).map_err(|e| Error::io(&p, e))?;
    }
    for ((e, s), p) in out.manifest.entries.iter().zip(&out.sidecar).zip(&out.pairs) {
        save_png(&p.image_a, &dir.join(&e.image_a))?;
        save_png(&p.image_b, &dir.join(&e.image_b))?;
        save_png(&p.mask_a, &dir.join(&s.a.mask))?;
        save_png(&p.mask_b, &dir.join(&s.b.mask))?;
    }
    let mut manifest = out.manifest;
    manifest.base_dir = dir.to_path_buf();
    manifest.save(&dir.join(MANIFEST_FILE))?;
    let mut buf = Vec::new();
    for s in &out.sidecar {
        serde_json::to_writer(&mut buf, s)?;
        buf.push(b'\n');
    }
    let path = dir.join(SIDECAR_FILE);
    std::fs::write(&path, buf).map_err(|e| Error::io(&path, e))?;
    Ok(manifest)
}
