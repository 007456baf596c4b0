use super::glyphs::{FontStyle, GlyphTemplate, Layout};
use crate::error::{Error, Result};
use crate::imgcore::{Colorspace, RasterImage};

/// Fraction of the canvas left empty on each side by [`render_text_gray`].
pub const RENDER_MARGIN: f64 = 0.05;

/// Anti-aliased stroke coverage in [0, 1]. Em point `p` lands on pixel
/// coordinate `o + scale * p`.
pub(crate) fn rasterize(lay: &Layout, weight: f64, scale: f64, ox: f64, oy: f64, w: usize, h: usize) -> Vec<f64> {
    let mut cov = vec![0.0f64; w * h];
    let hw = 0.5 * weight * scale;
    let reach = hw + 1.0;
    for &(a, b) in &lay.segments {
        let (ax, ay) = (ox + scale * a[0], oy + scale * a[1]);
        let (bx, by) = (ox + scale * b[0], oy + scale * b[1]);
        let (dx, dy) = (bx - ax, by - ay);
        let len2 = dx * dx + dy * dy;
        let x0 = (ax.min(bx) - reach).floor().max(0.0) as usize;
        let y0 = (ay.min(by) - reach).floor().max(0.0) as usize;
        let x1 = ((ax.max(bx) + reach).ceil().max(0.0) as usize).min(w);
        let y1 = ((ay.max(by) + reach).ceil().max(0.0) as usize).min(h);
        for py in y0..y1 {
            let cy = py as f64 + 0.5;
            for px in x0..x1 {
                let cx = px as f64 + 0.5;
                let t = if len2 > 0.0 {
                    (((cx - ax) * dx + (cy - ay) * dy) / len2).clamp(0.0, 1.0)
                } else {
                    0.0
                };
                let (ex, ey) = (cx - ax - t * dx, cy - ay - t * dy);
                let c = (hw - (ex * ex + ey * ey).sqrt() + 0.5).clamp(0.0, 1.0);
                let slot = &mut cov[py * w + px];
                if c > *slot {
                    *slot = c;
                }
            }
        }
    }
    cov
}

/// Rasterise with the padded cell box centred in a `w x h` canvas.
pub(crate) fn rasterize_fit(lay: &Layout, weight: f64, scale: f64, w: usize, h: usize) -> Vec<f64> {
    let cx = 0.5 * (lay.cell[0] + lay.cell[2]);
    let cy = 0.5 * (lay.cell[1] + lay.cell[3]);
    rasterize(lay, weight, scale, 0.5 * w as f64 - scale * cx, 0.5 * h as f64 - scale * cy, w, h)
}

/// Ink coverage of `text` fitted into a `w x h` canvas with `margin` per side.
pub fn render_text_coverage(text: &str, style: FontStyle, w: usize, h: usize, margin: f64) -> Result<Vec<f64>> {
    if w == 0 || h == 0 {
        return Err(Error::ZeroDimension);
    }
    let lay = Layout::new(text, style)?;
    let (bw, bh) = lay.padded_size(style.weight);
    let usable = 1.0 - 2.0 * margin;
    let scale = (usable * w as f64 / bw).min(usable * h as f64 / bh);
    Ok(rasterize_fit(&lay, style.weight, scale, w, h))
}

/// Ink coverage of `text` at `px_per_em`, on a canvas just large enough
/// plus `pad` pixels per side. Returns `(coverage, width, height)`.
pub(crate) fn coverage_at_scale(text: &str, style: FontStyle, px_per_em: f64, pad: usize) -> Result<(Vec<f64>, usize, usize)> {
    let lay = Layout::new(text, style)?;
    let (bw, bh) = lay.padded_size(style.weight);
    let w = (bw * px_per_em).ceil() as usize + 2 * pad;
    let h = (bh * px_per_em).ceil() as usize + 2 * pad;
    Ok((rasterize_fit(&lay, style.weight, px_per_em, w, h), w, h))
}

/// Grayscale render of `text`: paper 1.0, ink 0.0, centred and uniformly
/// scaled into the canvas.
pub fn render_text_gray(text: &str, tpl: &GlyphTemplate, width: usize, height: usize) -> Result<RasterImage> {
    let cov = render_text_coverage(text, tpl.style(), width, height, RENDER_MARGIN)?;
    RasterImage::new(width, height, Colorspace::Gray, cov.into_iter().map(|c| 1.0 - c).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn column_centroid(img: &RasterImage, x0: usize, x1: usize) -> f64 {
        let (mut m, mut s) = (0.0, 0.0);
        for y in 0..img.height() {
            for x in x0..x1 {
                let ink = 1.0 - img.get(x, y, 0);
                m += ink * x as f64;
                s += ink;
            }
        }
        m / s
    }

    #[test]
    fn empty_text() {
        assert!(matches!(
            render_text_gray("", &GlyphTemplate::default(), 32, 32),
            Err(Error::EmptyText)
        ));
    }

    #[test]
    fn single_glyph_area_scaling() {
        let tpl = GlyphTemplate::default();
        let bm = tpl.bitmap('한').unwrap();
        let img = render_text_gray("한", &tpl, 128, 128).unwrap();
        let ink = img.data().iter().map(|v| 1.0 - v).sum::<f64>() / (128.0 * 128.0);
        // bitmap cell spans the padded box; the render spans 90% of the canvas
        let scale = 0.9;
        let expected = bm.ink_fraction() * scale * scale;
        assert!((ink - expected).abs() / expected < 0.05, "{ink} vs {expected}");
    }

    #[test]
    fn centred() {
        let img = render_text_gray("ㅁ", &GlyphTemplate::default(), 64, 64).unwrap();
        let c = column_centroid(&img, 0, 64);
        assert!((c - 31.5).abs() < 0.5, "{c}");
    }

    #[test]
    fn arabic_runs_right_to_left() {
        // the heavier glyph pulls the centroid towards its side
        let tpl = GlyphTemplate::default();
        let centroid = |t: &str| column_centroid(&render_text_gray(t, &tpl, 128, 64).unwrap(), 0, 128);
        // beh outweighs alef; logical first letter sits on the right
        assert!(centroid("اب") < centroid("با"));
        // 'M' outweighs '.'; logical first letter sits on the left
        assert!(centroid("M.") < centroid(".M"));
    }
}
