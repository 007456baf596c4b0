//! Binary mask utilities and the Otsu text segmenter.

use std::collections::VecDeque;
use std::sync::OnceLock;

use crate::error::Result;
use crate::imgcore::{to_grayscale, Colorspace, RasterImage};

/// Components smaller than this fraction of the image area are dropped.
pub const MIN_COMPONENT_FRACTION: f64 = 0.001;

/// A segmented text mask plus whether the input had no usable contrast.
#[derive(Clone, Debug, PartialEq)]
pub struct TextMask {
    pub mask: RasterImage,
    /// Set when luma is single-valued; the mask is then empty.
    pub degenerate: bool,
}

/// Row-major boolean plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Bits {
    pub w: usize,
    pub h: usize,
    pub v: Vec<bool>,
}

impl Bits {
    pub fn new(w: usize, h: usize) -> Self {
        Self {
            w,
            h,
            v: vec![false; w * h],
        }
    }

    pub fn from_image(img: &RasterImage) -> Self {
        Self {
            w: img.width(),
            h: img.height(),
            v: img.data().iter().map(|&x| x > 0.5).collect(),
        }
    }

    pub fn to_image(&self) -> RasterImage {
        let data = self.v.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
        RasterImage::new(self.w, self.h, Colorspace::Gray, data).expect("dimensions already validated")
    }

    #[inline]
    pub fn at(&self, x: isize, y: isize) -> bool {
        x >= 0 && y >= 0 && (x as usize) < self.w && (y as usize) < self.h && self.v[y as usize * self.w + x as usize]
    }

    pub fn count(&self) -> usize {
        self.v.iter().filter(|&&b| b).count()
    }

    pub fn any(&self) -> bool {
        self.v.iter().any(|&b| b)
    }

    /// Inclusive bounding box `(x0, y0, x1, y1)`.
    pub fn bbox(&self) -> Option<(usize, usize, usize, usize)> {
        let mut bb: Option<(usize, usize, usize, usize)> = None;
        for y in 0..self.h {
            for x in 0..self.w {
                if self.v[y * self.w + x] {
                    bb = Some(match bb {
                        None => (x, y, x, y),
                        Some((a, b, c, d)) => (a.min(x), b.min(y), c.max(x), d.max(y)),
                    });
                }
            }
        }
        bb
    }

    pub fn union(&self, other: &Self) -> Self {
        Self {
            w: self.w,
            h: self.h,
            v: self.v.iter().zip(&other.v).map(|(a, b)| *a || *b).collect(),
        }
    }

    /// Square (Chebyshev) dilation.
    pub fn dilate(&self, r: usize) -> Self {
        self.square_filter(r, true)
    }

    /// Square erosion; outside the image counts as set.
    pub fn erode(&self, r: usize) -> Self {
        self.square_filter(r, false)
    }

    fn square_filter(&self, r: usize, dilate: bool) -> Self {
        if r == 0 {
            return self.clone();
        }
        let (w, h) = (self.w, self.h);
        let mut tmp = vec![false; w * h];
        for (src, dst) in self.v.chunks_exact(w).zip(tmp.chunks_exact_mut(w)) {
            window_filter(src, r, dilate, dst);
        }
        let mut out = vec![false; w * h];
        let mut counts = vec![0u32; w];
        let add = |counts: &mut [u32], row: &[bool], sign: bool| {
            for (c, &v) in counts.iter_mut().zip(row) {
                if sign {
                    *c += v as u32;
                } else {
                    *c -= v as u32;
                }
            }
        };
        for y in 0..r.min(h) {
            add(&mut counts, &tmp[y * w..(y + 1) * w], true);
        }
        for y in 0..h {
            if y + r < h {
                add(&mut counts, &tmp[(y + r) * w..(y + r + 1) * w], true);
            }
            if y > r {
                add(&mut counts, &tmp[(y - r - 1) * w..(y - r) * w], false);
            }
            let full = ((y + r + 1).min(h) - y.saturating_sub(r)) as u32;
            for (o, &c) in out[y * w..(y + 1) * w].iter_mut().zip(&counts) {
                *o = if dilate { c > 0 } else { c == full };
            }
        }
        Self { w, h, v: out }
    }

    /// 8-connected component labels (0 = background) and component sizes.
    pub fn components(&self) -> (Vec<u32>, Vec<usize>) {
        let (w, h) = (self.w, self.h);
        let mut labels = vec![0u32; w * h];
        let mut sizes = vec![0usize];
        let mut queue = VecDeque::new();
        for start in 0..w * h {
            if !self.v[start] || labels[start] != 0 {
                continue;
            }
            let id = sizes.len() as u32;
            let mut size = 0;
            labels[start] = id;
            queue.push_back(start);
            while let Some(i) = queue.pop_front() {
                size += 1;
                let (x, y) = ((i % w) as isize, (i / w) as isize);
                for dy in -1..=1 {
                    for dx in -1..=1 {
                        let (nx, ny) = (x + dx, y + dy);
                        if self.at(nx, ny) {
                            let j = ny as usize * w + nx as usize;
                            if labels[j] == 0 {
                                labels[j] = id;
                                queue.push_back(j);
                            }
                        }
                    }
                }
            }
            sizes.push(size);
        }
        (labels, sizes)
    }

    /// Drop components with fewer than `min_size` pixels.
    pub fn remove_small(&self, min_size: usize) -> Self {
        let (labels, sizes) = self.components();
        Self {
            w: self.w,
            h: self.h,
            v: labels.iter().map(|&l| l != 0 && sizes[l as usize] >= min_size).collect(),
        }
    }

    /// Zhang–Suen thinning to a one-pixel skeleton.
    pub fn skeleton(&self) -> Self {
        let (w, h) = (self.w, self.h);
        // one-pixel false border so neighbours need no bounds checks
        let pw = w + 2;
        let mut img = vec![false; pw * (h + 2)];
        for y in 0..h {
            img[(y + 1) * pw + 1..(y + 1) * pw + 1 + w].copy_from_slice(&self.v[y * w..(y + 1) * w]);
        }
        let table = thinning_table();
        let mut live: Vec<usize> = (0..img.len()).filter(|&i| img[i]).collect();
        let mut to_clear = Vec::new();
        loop {
            let mut changed = false;
            for pass in 0..2 {
                to_clear.clear();
                for &i in &live {
                    // P2..P9 clockwise from north, P2 in the lowest bit
                    let code = img[i - pw] as usize
                        | (img[i - pw + 1] as usize) << 1
                        | (img[i + 1] as usize) << 2
                        | (img[i + pw + 1] as usize) << 3
                        | (img[i + pw] as usize) << 4
                        | (img[i + pw - 1] as usize) << 5
                        | (img[i - 1] as usize) << 6
                        | (img[i - pw - 1] as usize) << 7;
                    if table[pass][code] {
                        to_clear.push(i);
                    }
                }
                for &i in &to_clear {
                    img[i] = false;
                }
                if !to_clear.is_empty() {
                    changed = true;
                    live.retain(|&i| img[i]);
                }
            }
            if !changed {
                break;
            }
        }
        let v = (1..=h).flat_map(|y| img[y * pw + 1..y * pw + 1 + w].iter().copied()).collect();
        Self { w, h, v }
    }
}

/// Zhang-Suen deletion test for both sub-iterations, indexed by the
/// neighbour code.
fn thinning_table() -> &'static [[bool; 256]; 2] {
    static TABLE: OnceLock<[[bool; 256]; 2]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [[false; 256]; 2];
        for code in 0..256usize {
            let p: [bool; 8] = std::array::from_fn(|k| code >> k & 1 == 1);
            let b = p.iter().filter(|&&v| v).count();
            let a = (0..8).filter(|&k| !p[k] && p[(k + 1) % 8]).count();
            if !(2..=6).contains(&b) || a != 1 {
                continue;
            }
            let (p2, p4, p6, p8) = (p[0], p[2], p[4], p[6]);
            t[0][code] = !(p2 && p4 && p6) && !(p4 && p6 && p8);
            t[1][code] = !(p2 && p4 && p8) && !(p2 && p6 && p8);
        }
        t
    })
}

/// Otsu threshold over a 256-bin histogram; pixels in bins `<= t` form the
/// lower class. `None` when only one bin is populated.
pub(crate) fn otsu_threshold(hist: &[u64; 256]) -> Option<usize> {
    let total: u64 = hist.iter().sum();
    if hist.iter().filter(|&&c| c > 0).count() < 2 {
        return None;
    }
    let sum_all: f64 = hist.iter().enumerate().map(|(i, &c)| i as f64 * c as f64).sum();
    let (mut w0, mut sum0) = (0u64, 0.0);
    let mut best = (f64::NEG_INFINITY, 0usize);
    for t in 0..255 {
        w0 += hist[t];
        sum0 += t as f64 * hist[t] as f64;
        let w1 = total - w0;
        if w0 == 0 || w1 == 0 {
            continue;
        }
        let m0 = sum0 / w0 as f64;
        let m1 = (sum_all - sum0) / w1 as f64;
        let between = w0 as f64 * w1 as f64 * (m0 - m1) * (m0 - m1);
        if between > best.0 {
            best = (between, t);
        }
    }
    Some(best.1)
}

pub(crate) fn luma_bins(luma: &[f64]) -> Vec<u8> {
    luma.iter().map(|&l| (l.clamp(0.0, 1.0) * 255.0).round() as u8).collect()
}

/// Segment text from background.
///
/// Otsu on luma, with the foreground taken to be the class that touches the
/// image border less; small components are dropped and the result closed
/// with a 3x3 element.
pub fn extract_text_mask(img: &RasterImage) -> Result<TextMask> {
    let gray = if img.colorspace() == Colorspace::Gray {
        img.clone()
    } else {
        to_grayscale(img)?
    };
    let (w, h) = (gray.width(), gray.height());
    let bins = luma_bins(gray.data());
    let mut hist = [0u64; 256];
    for &b in &bins {
        hist[b as usize] += 1;
    }
    let Some(t) = otsu_threshold(&hist) else {
        return Ok(TextMask {
            mask: Bits::new(w, h).to_image(),
            degenerate: true,
        });
    };
    let low: Vec<bool> = bins.iter().map(|&b| b as usize <= t).collect();

    let (mut border, mut border_low) = (0usize, 0usize);
    for y in 0..h {
        for x in 0..w {
            if x == 0 || y == 0 || x + 1 == w || y + 1 == h {
                border += 1;
                border_low += low[y * w + x] as usize;
            }
        }
    }
    let border_high = border - border_low;
    // ties go to the dark class
    let text_is_low = border_low <= border_high;
    let raw = Bits {
        w,
        h,
        v: low.iter().map(|&l| l == text_is_low).collect(),
    };
    let min_size = (MIN_COMPONENT_FRACTION * (w * h) as f64).ceil() as usize;
    let cleaned = raw.remove_small(min_size.max(1));
    let closed = cleaned.dilate(1).erode(1);
    Ok(TextMask {
        mask: closed.to_image(),
        degenerate: false,
    })
}

/// 1-D max (dilate) or min (erode) over a `2r+1` window. Outside samples
/// count as false for dilation and true for erosion.
fn window_filter(src: &[bool], r: usize, dilate: bool, out: &mut [bool]) {
    let n = src.len();
    let mut ones = src[..r.min(n)].iter().filter(|&&v| v).count();
    for (i, o) in out.iter_mut().enumerate() {
        if i + r < n {
            ones += src[i + r] as usize;
        }
        if i > r {
            ones -= src[i - r - 1] as usize;
        }
        let full = (i + r + 1).min(n) - i.saturating_sub(r);
        *o = if dilate { ones > 0 } else { ones == full };
    }
}
