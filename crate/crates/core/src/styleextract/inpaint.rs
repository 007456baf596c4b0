//! Fast-marching inpainting (Telea 2004).

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use super::mask::Bits;
use crate::error::Result;
use crate::imgcore::RasterImage;

/// Mask dilation applied before inpainting, in pixels.
pub const REMOVE_DILATION: usize = 2;
/// Neighbourhood radius used to estimate each filled pixel.
pub const INPAINT_RADIUS: f64 = 5.0;

const FAR: f64 = 1.0e6;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Flag {
    Known,
    Band,
    Inside,
}

#[derive(PartialEq)]
struct Entry {
    t: f64,
    idx: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    // min-heap on (t, idx)
    fn cmp(&self, other: &Self) -> Ordering {
        other.t.total_cmp(&self.t).then_with(|| other.idx.cmp(&self.idx))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Neighbour offset within the fill radius, in row-major order.
struct Offset {
    dx: isize,
    dy: isize,
    rx: f64,
    ry: f64,
    len: f64,
    dst: f64,
}

fn disk() -> &'static [Offset] {
    static DISK: OnceLock<Vec<Offset>> = OnceLock::new();
    DISK.get_or_init(|| {
        let rad = INPAINT_RADIUS as isize;
        let r2max = INPAINT_RADIUS * INPAINT_RADIUS;
        let mut v = Vec::new();
        for dy in -rad..=rad {
            for dx in -rad..=rad {
                let (rx, ry) = (-dx as f64, -dy as f64);
                let r2 = rx * rx + ry * ry;
                if r2 > r2max || r2 == 0.0 {
                    continue;
                }
                v.push(Offset {
                    dx,
                    dy,
                    rx,
                    ry,
                    len: r2.sqrt(),
                    dst: 1.0 / r2,
                });
            }
        }
        v
    })
}

struct Fmm<'a> {
    w: usize,
    h: usize,
    ch: usize,
    flag: Vec<Flag>,
    t: Vec<f64>,
    img: &'a mut [f64],
    /// Per pixel and channel `(gx, gy)`, valid for known pixels.
    grads: Vec<[(f64, f64); 4]>,
}

impl Fmm<'_> {
    fn known(&self, x: isize, y: isize) -> bool {
        self.inb(x, y) && self.flag[y as usize * self.w + x as usize] != Flag::Inside
    }

    fn inb(&self, x: isize, y: isize) -> bool {
        x >= 0 && y >= 0 && (x as usize) < self.w && (y as usize) < self.h
    }

    fn solve(&self, a: (isize, isize), b: (isize, isize)) -> f64 {
        let fa = self.inb(a.0, a.1) && self.flag[a.1 as usize * self.w + a.0 as usize] == Flag::Known;
        let fb = self.inb(b.0, b.1) && self.flag[b.1 as usize * self.w + b.0 as usize] == Flag::Known;
        let ta = if fa { self.t[a.1 as usize * self.w + a.0 as usize] } else { FAR };
        let tb = if fb { self.t[b.1 as usize * self.w + b.0 as usize] } else { FAR };
        match (fa, fb) {
            (true, true) => {
                let d = ta - tb;
                let r = (2.0 - d * d).max(0.0).sqrt();
                let s = (ta + tb - r) * 0.5;
                if s >= ta && s >= tb {
                    s
                } else {
                    let s = s + r;
                    if s >= ta && s >= tb {
                        s
                    } else {
                        FAR
                    }
                }
            }
            (true, false) => 1.0 + ta,
            (false, true) => 1.0 + tb,
            (false, false) => FAR,
        }
    }

    fn grad_t(&self, x: isize, y: isize) -> (f64, f64) {
        let i = y as usize * self.w + x as usize;
        let tv = |xx: isize, yy: isize| self.t[yy as usize * self.w + xx as usize];
        let g = |lo: bool, hi: bool, tlo: f64, thi: f64| match (lo, hi) {
            (true, true) => 0.5 * (thi - tlo),
            (false, true) => thi - self.t[i],
            (true, false) => self.t[i] - tlo,
            (false, false) => 0.0,
        };
        let (l, r) = (self.known(x - 1, y), self.known(x + 1, y));
        let gx = g(
            l,
            r,
            if l { tv(x - 1, y) } else { 0.0 },
            if r { tv(x + 1, y) } else { 0.0 },
        );
        let (u, d) = (self.known(x, y - 1), self.known(x, y + 1));
        let gy = g(
            u,
            d,
            if u { tv(x, y - 1) } else { 0.0 },
            if d { tv(x, y + 1) } else { 0.0 },
        );
        (gx, gy)
    }

    /// Image gradient at a known pixel, one `(gx, gy)` per channel.
    fn grad_i(&self, x: isize, y: isize) -> [(f64, f64); 4] {
        let (l, r) = (self.known(x - 1, y), self.known(x + 1, y));
        let (u, d) = (self.known(x, y - 1), self.known(x, y + 1));
        let base = |xx: isize, yy: isize| (yy as usize * self.w + xx as usize) * self.ch;
        let centre = base(x, y);
        let diff = |hi: usize, lo: usize, c: usize, half: bool| {
            let v = self.img[hi + c] - self.img[lo + c];
            if half {
                0.5 * v
            } else {
                v
            }
        };
        let mut out = [(0.0, 0.0); 4];
        for (c, g) in out.iter_mut().enumerate().take(self.ch) {
            g.0 = match (l, r) {
                (true, true) => diff(base(x + 1, y), base(x - 1, y), c, true),
                (false, true) => diff(base(x + 1, y), centre, c, false),
                (true, false) => diff(centre, base(x - 1, y), c, false),
                (false, false) => 0.0,
            };
            g.1 = match (u, d) {
                (true, true) => diff(base(x, y + 1), base(x, y - 1), c, true),
                (false, true) => diff(base(x, y + 1), centre, c, false),
                (true, false) => diff(centre, base(x, y - 1), c, false),
                (false, false) => 0.0,
            };
        }
        out
    }

    fn fill(&mut self, x: isize, y: isize) {
        let i = y as usize * self.w + x as usize;
        let (gtx, gty) = self.grad_t(x, y);
        let mut acc = [0.0f64; 4];
        let mut wsum = 0.0;
        let rad = INPAINT_RADIUS as isize;
        let interior = x >= rad && y >= rad && x + rad < self.w as isize && y + rad < self.h as isize;
        let w = self.w as isize;
        for o in disk() {
            let k = if interior {
                let k = (i as isize + o.dy * w + o.dx) as usize;
                if self.flag[k] == Flag::Inside {
                    continue;
                }
                k
            } else {
                let (kx, ky) = (x + o.dx, y + o.dy);
                if !self.known(kx, ky) {
                    continue;
                }
                ky as usize * self.w + kx as usize
            };
            let mut dir = (o.rx * gtx + o.ry * gty).abs() / o.len;
            if dir <= 0.01 {
                dir = 1e-6;
            }
            let lev = 1.0 / (1.0 + (self.t[k] - self.t[i]).abs());
            let wgt = dir * o.dst * lev;
            for (c, (gx, gy)) in self.grads[k].iter().enumerate().take(self.ch) {
                acc[c] += wgt * (self.img[k * self.ch + c] + gx * o.rx + gy * o.ry);
            }
            wsum += wgt;
        }
        if wsum > 0.0 {
            for c in 0..self.ch {
                self.img[i * self.ch + c] = (acc[c] / wsum).clamp(0.0, 1.0);
            }
        }
    }

    /// Refresh cached gradients after `(x, y)` became known.
    fn refresh_grads(&mut self, x: isize, y: isize) {
        for (nx, ny) in [(x, y), (x - 1, y), (x + 1, y), (x, y - 1), (x, y + 1)] {
            if self.known(nx, ny) {
                self.grads[ny as usize * self.w + nx as usize] = self.grad_i(nx, ny);
            }
        }
    }
}

/// Fill the masked pixels from their surroundings. `mask` is used as is.
pub(crate) fn telea(img: &RasterImage, mask: &Bits) -> RasterImage {
    let (w, h, ch) = (img.width(), img.height(), img.channels());
    let mut out = img.clone();
    if !mask.any() || mask.count() == w * h {
        return out;
    }
    let mut flag = vec![Flag::Known; w * h];
    let mut t = vec![0.0; w * h];
    for i in 0..w * h {
        if mask.v[i] {
            flag[i] = Flag::Inside;
            t[i] = FAR;
        }
    }
    let mut heap = BinaryHeap::new();
    for y in 0..h as isize {
        for x in 0..w as isize {
            let i = y as usize * w + x as usize;
            if mask.v[i] {
                continue;
            }
            let touches = [(1, 0), (-1, 0), (0, 1), (0, -1)]
                .iter()
                .any(|&(dx, dy)| mask.at(x + dx, y + dy));
            if touches {
                flag[i] = Flag::Band;
                heap.push(Entry { t: 0.0, idx: i });
            }
        }
    }
    let mut fmm = Fmm {
        w,
        h,
        ch,
        flag,
        t,
        img: out.data_mut(),
        grads: vec![[(0.0, 0.0); 4]; w * h],
    };
    for y in 0..h as isize {
        for x in 0..w as isize {
            if fmm.known(x, y) {
                fmm.grads[y as usize * w + x as usize] = fmm.grad_i(x, y);
            }
        }
    }
    while let Some(Entry { idx, .. }) = heap.pop() {
        if fmm.flag[idx] == Flag::Known {
            continue;
        }
        fmm.flag[idx] = Flag::Known;
        let (x, y) = ((idx % w) as isize, (idx / w) as isize);
        for (nx, ny) in [(x - 1, y), (x, y - 1), (x + 1, y), (x, y + 1)] {
            if !fmm.inb(nx, ny) {
                continue;
            }
            let j = ny as usize * w + nx as usize;
            if fmm.flag[j] != Flag::Inside {
                continue;
            }
            let d = fmm
                .solve((nx - 1, ny), (nx, ny - 1))
                .min(fmm.solve((nx + 1, ny), (nx, ny - 1)))
                .min(fmm.solve((nx - 1, ny), (nx, ny + 1)))
                .min(fmm.solve((nx + 1, ny), (nx, ny + 1)));
            fmm.t[j] = d;
            fmm.fill(nx, ny);
            fmm.flag[j] = Flag::Band;
            fmm.refresh_grads(nx, ny);
            heap.push(Entry { t: d, idx: j });
        }
    }
    out
}

/// Remove text: dilate the mask by two pixels, then inpaint.
pub fn remove_text(img: &RasterImage, mask: &RasterImage) -> Result<RasterImage> {
    if mask.width() != img.width() || mask.height() != img.height() || mask.channels() != 1 {
        return Err(crate::error::Error::shape(img.shape_string(), mask.shape_string()));
    }
    let bits = Bits::from_image(mask);
    if !bits.any() {
        return Ok(img.clone());
    }
    Ok(telea(img, &bits.dilate(REMOVE_DILATION)))
}
