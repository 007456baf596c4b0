//! Parametric glyph templates.
//!
//! Every glyph is a set of centre-line strokes in a unit em box (x right,
//! y down). A [`FontStyle`] turns the skeletons into a font by choosing the
//! stroke width and a horizontal shear. Latin and hiragana skeletons are
//! thinned from the `font8x8` bitmaps; Hangul syllables and Arabic letters
//! are drawn from hand-placed strokes.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use super::mask::Bits;
use super::{arabic, hangul};
use crate::error::{Error, Result};

/// Polyline in em units. A single point renders as a dot.
pub(crate) type Stroke = Vec<[f64; 2]>;

/// Advance of whitespace, in em.
const SPACE_ADVANCE: f64 = 0.5;

pub(crate) fn ring(cx: f64, cy: f64, rx: f64, ry: f64, n: usize) -> Stroke {
    (0..=n)
        .map(|i| {
            let t = i as f64 / n as f64 * std::f64::consts::TAU;
            [cx + rx * t.cos(), cy + ry * t.sin()]
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FontStyle {
    /// Stroke width as a fraction of the em.
    pub weight: f64,
    /// Horizontal shear; positive leans right.
    pub slant: f64,
}

impl FontStyle {
    pub const REGULAR: FontStyle = FontStyle {
        weight: 0.08,
        slant: 0.0,
    };

    pub(crate) fn clamped(self) -> Self {
        Self {
            weight: self.weight.clamp(MIN_WEIGHT, MAX_WEIGHT),
            slant: self.slant.clamp(-MAX_SLANT, MAX_SLANT),
        }
    }
}

pub(crate) const MIN_WEIGHT: f64 = 0.015;
pub(crate) const MAX_WEIGHT: f64 = 0.3;
pub(crate) const MAX_SLANT: f64 = 0.6;

const BUILTIN: [(&str, FontStyle); 5] = [
    ("regular", FontStyle::REGULAR),
    (
        "bold",
        FontStyle {
            weight: 0.15,
            slant: 0.0,
        },
    ),
    (
        "light",
        FontStyle {
            weight: 0.04,
            slant: 0.0,
        },
    ),
    (
        "italic",
        FontStyle {
            weight: 0.08,
            slant: 0.3,
        },
    ),
    (
        "bold-italic",
        FontStyle {
            weight: 0.15,
            slant: 0.3,
        },
    ),
];

/// Scripts every template covers.
pub const COVERAGE: [&str; 4] = ["latin", "hiragana", "hangul", "arabic"];

/// A glyph atlas: the shared stroke skeletons rendered in one style.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlyphTemplate {
    name: String,
    style: FontStyle,
    cell_size: usize,
}

impl Default for GlyphTemplate {
    fn default() -> Self {
        Self::builtin("regular").expect("regular is built in")
    }
}

/// Binary glyph bitmap of `size x size` pixels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlyphBitmap {
    pub size: usize,
    pub bits: Vec<bool>,
}

impl GlyphBitmap {
    pub fn ink_fraction(&self) -> f64 {
        self.bits.iter().filter(|&&b| b).count() as f64 / self.bits.len() as f64
    }
}

impl GlyphTemplate {
    pub const DEFAULT_CELL: usize = 64;

    pub fn new(name: impl Into<String>, style: FontStyle, cell_size: usize) -> Result<Self> {
        if !(style.weight > 0.0 && style.weight <= MAX_WEIGHT) || !(style.slant.abs() <= MAX_SLANT) {
            return Err(Error::InvalidParams(format!(
                "font weight must be in (0, {MAX_WEIGHT}] and |slant| <= {MAX_SLANT}"
            )));
        }
        if cell_size < 8 {
            return Err(Error::InvalidParams("glyph cell must be at least 8 px".into()));
        }
        Ok(Self {
            name: name.into(),
            style,
            cell_size,
        })
    }

    pub fn builtin(name: &str) -> Option<Self> {
        BUILTIN.iter().find(|(n, _)| *n == name).map(|(n, s)| Self {
            name: (*n).to_string(),
            style: *s,
            cell_size: Self::DEFAULT_CELL,
        })
    }

    pub fn builtin_names() -> Vec<&'static str> {
        BUILTIN.iter().map(|(n, _)| *n).collect()
    }

    pub fn with_style(&self, style: FontStyle) -> Self {
        Self {
            name: self.name.clone(),
            style: style.clamped(),
            cell_size: self.cell_size,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn style(&self) -> FontStyle {
        self.style
    }

    pub fn cell_size(&self) -> usize {
        self.cell_size
    }

    pub fn coverage(&self) -> &'static [&'static str] {
        &COVERAGE
    }

    pub fn covers(&self, c: char) -> bool {
        c.is_whitespace() || glyph_strokes(c).is_some()
    }

    /// The glyph for `c` rasterised into one cell, sheared glyphs included.
    pub fn bitmap(&self, c: char) -> Result<GlyphBitmap> {
        let strokes = if c.is_whitespace() {
            Vec::new()
        } else {
            glyph_strokes(c).ok_or(Error::UncoveredCodepoint(c))?
        };
        let lay = Layout::from_glyphs(vec![(strokes, 1.0)], self.style);
        let n = self.cell_size;
        let (bw, bh) = lay.padded_size(self.style.weight);
        let scale = n as f64 / bw.max(bh);
        let cov = super::render::rasterize_fit(&lay, self.style.weight, scale, n, n);
        Ok(GlyphBitmap {
            size: n,
            bits: cov.iter().map(|&v| v >= 0.5).collect(),
        })
    }
}

fn bitmap_skeleton(rows: &[u8; 8]) -> Option<Vec<Stroke>> {
    let mut b = Bits::new(10, 10);
    for (y, row) in rows.iter().enumerate() {
        for x in 0..8 {
            if row >> x & 1 == 1 {
                b.v[(y + 1) * 10 + x + 1] = true;
            }
        }
    }
    if !b.any() {
        return None;
    }
    let sk = b.skeleton();
    let pt = |x: isize, y: isize| [(x as f64 - 0.5) / 8.0, (y as f64 - 0.5) / 8.0];
    let mut strokes = Vec::new();
    for y in 0..10isize {
        for x in 0..10isize {
            if !sk.at(x, y) {
                continue;
            }
            let mut linked = false;
            for (dx, dy) in [(1, 0), (0, 1)] {
                if sk.at(x + dx, y + dy) {
                    strokes.push(vec![pt(x, y), pt(x + dx, y + dy)]);
                    linked = true;
                }
            }
            for (dx, dy) in [(1, 1), (-1, 1)] {
                if sk.at(x + dx, y + dy) && !sk.at(x + dx, y) && !sk.at(x, y + dy) {
                    strokes.push(vec![pt(x, y), pt(x + dx, y + dy)]);
                    linked = true;
                }
            }
            let has_prev = [(-1, 0), (0, -1), (-1, -1), (1, -1)]
                .iter()
                .any(|&(dx, dy)| sk.at(x + dx, y + dy));
            if !linked && !has_prev {
                strokes.push(vec![pt(x, y)]);
            }
        }
    }
    Some(strokes)
}

struct BitmapAtlas {
    basic: Vec<Option<Vec<Stroke>>>,
    hiragana: Vec<Option<Vec<Stroke>>>,
}

fn atlas() -> &'static BitmapAtlas {
    static ATLAS: OnceLock<BitmapAtlas> = OnceLock::new();
    ATLAS.get_or_init(|| BitmapAtlas {
        basic: font8x8::legacy::BASIC_LEGACY
            .iter()
            .enumerate()
            .map(|(i, rows)| if i < 0x21 || i == 0x7F { None } else { bitmap_skeleton(rows) })
            .collect(),
        hiragana: font8x8::legacy::HIRAGANA_LEGACY.iter().map(bitmap_skeleton).collect(),
    })
}

/// Skeleton strokes for a non-whitespace character.
pub(crate) fn glyph_strokes(c: char) -> Option<Vec<Stroke>> {
    let cp = c as u32;
    if cp < 0x80 {
        return atlas().basic[cp as usize].clone();
    }
    if (0x3040..0x30A0).contains(&cp) {
        return atlas().hiragana[(cp - 0x3040) as usize].clone();
    }
    if hangul::is_hangul(c) {
        return hangul::glyph(c);
    }
    if arabic::is_arabic(c) {
        return arabic::glyph(c);
    }
    None
}

/// True when the text should run right to left.
pub fn is_rtl(text: &str) -> bool {
    text.chars().any(arabic::is_arabic)
}

/// A line of text as sheared line segments in em units.
#[derive(Clone, Debug)]
pub(crate) struct Layout {
    pub segments: Vec<([f64; 2], [f64; 2])>,
    /// Cell box `(x0, y0, x1, y1)` after shear.
    pub cell: [f64; 4],
    /// Extent of the stroke centre lines `(x0, y0, x1, y1)`.
    pub ink: [f64; 4],
}

impl Layout {
    pub fn new(text: &str, style: FontStyle) -> Result<Self> {
        let text: String = text.nfc().collect();
        if text.is_empty() {
            return Err(Error::EmptyText);
        }
        let mut glyphs = Vec::new();
        for c in text.chars() {
            if c.is_whitespace() {
                glyphs.push((Vec::new(), SPACE_ADVANCE));
            } else {
                glyphs.push((glyph_strokes(c).ok_or(Error::UncoveredCodepoint(c))?, 1.0));
            }
        }
        if is_rtl(&text) {
            glyphs.reverse();
        }
        Ok(Self::from_glyphs(glyphs, style))
    }

    fn from_glyphs(glyphs: Vec<(Vec<Stroke>, f64)>, style: FontStyle) -> Self {
        let shear = |p: [f64; 2], pen: f64| [pen + p[0] + style.slant * (1.0 - p[1]), p[1]];
        let mut segments = Vec::new();
        let mut ink = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
        let mut pen = 0.0;
        for (strokes, advance) in glyphs {
            for st in &strokes {
                let pts: Vec<[f64; 2]> = st.iter().map(|&p| shear(p, pen)).collect();
                for p in &pts {
                    ink = [ink[0].min(p[0]), ink[1].min(p[1]), ink[2].max(p[0]), ink[3].max(p[1])];
                }
                if pts.len() == 1 {
                    segments.push((pts[0], pts[0]));
                }
                for w in pts.windows(2) {
                    segments.push((w[0], w[1]));
                }
            }
            pen += advance;
        }
        if segments.is_empty() {
            ink = [0.0, 0.0, 0.0, 0.0];
        }
        let (x0, x1) = if style.slant >= 0.0 {
            (0.0, pen + style.slant)
        } else {
            (style.slant, pen)
        };
        Self {
            segments,
            cell: [x0, 0.0, x1, 1.0],
            ink,
        }
    }

    /// Cell box size padded by half a stroke on every side.
    pub fn padded_size(&self, weight: f64) -> (f64, f64) {
        (self.cell[2] - self.cell[0] + weight, self.cell[3] - self.cell[1] + weight)
    }
}
