//! Naive reference implementations. Slow on purpose; share no code with
//! the library beyond the input types.

use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct C {
    pub re: f64,
    pub im: f64,
}

impl C {
    pub fn new(re: f64, im: f64) -> Self {
        C { re, im }
    }
    fn mul(self, o: C) -> C {
        C::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
    fn add(self, o: C) -> C {
        C::new(self.re + o.re, self.im + o.im)
    }
    fn abs(self) -> f64 {
        (self.re * self.re + self.im * self.im).sqrt()
    }
}

// ---- colour ----

pub fn srgb_to_lab(rgb: [f64; 3]) -> [f64; 3] {
    let lin = |c: f64| if c > 0.04045 { ((c + 0.055) / 1.055).powf(2.4) } else { c / 12.92 };
    let (r, g, b) = (lin(rgb[0]), lin(rgb[1]), lin(rgb[2]));
    let x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
    let y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
    let z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;
    let f = |t: f64| {
        let e = (6.0f64 / 29.0).powi(3);
        if t > e {
            t.powf(1.0 / 3.0)
        } else {
            t / (3.0 * (6.0f64 / 29.0).powi(2)) + 4.0 / 29.0
        }
    };
    let (fx, fy, fz) = (f(x / 0.95047), f(y), f(z / 1.08883));
    [116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)]
}

/// CIEDE2000 following the step list of Sharma, Wu and Dalal (2005),
/// angles kept in radians.
pub fn ciede2000(p: [f64; 3], q: [f64; 3]) -> f64 {
    let [l1, a1, b1] = p;
    let [l2, a2, b2] = q;
    let cab = ((a1 * a1 + b1 * b1).sqrt() + (a2 * a2 + b2 * b2).sqrt()) / 2.0;
    let g = 0.5 * (1.0 - (cab.powi(7) / (cab.powi(7) + 25f64.powi(7))).sqrt());
    let a1p = a1 * (1.0 + g);
    let a2p = a2 * (1.0 + g);
    let c1p = (a1p * a1p + b1 * b1).sqrt();
    let c2p = (a2p * a2p + b2 * b2).sqrt();
    let hp = |b: f64, a: f64| {
        if b == 0.0 && a == 0.0 {
            0.0
        } else {
            let h = b.atan2(a);
            if h < 0.0 {
                h + 2.0 * PI
            } else {
                h
            }
        }
    };
    let h1p = hp(b1, a1p);
    let h2p = hp(b2, a2p);

    let dlp = l2 - l1;
    let dcp = c2p - c1p;
    let dhp = if c1p * c2p == 0.0 {
        0.0
    } else if (h2p - h1p).abs() <= PI {
        h2p - h1p
    } else if h2p - h1p > PI {
        h2p - h1p - 2.0 * PI
    } else {
        h2p - h1p + 2.0 * PI
    };
    let d_hp = 2.0 * (c1p * c2p).sqrt() * (dhp / 2.0).sin();

    let lbp = (l1 + l2) / 2.0;
    let cbp = (c1p + c2p) / 2.0;
    let hbp = if c1p * c2p == 0.0 {
        h1p + h2p
    } else if (h1p - h2p).abs() <= PI {
        (h1p + h2p) / 2.0
    } else if h1p + h2p < 2.0 * PI {
        (h1p + h2p + 2.0 * PI) / 2.0
    } else {
        (h1p + h2p - 2.0 * PI) / 2.0
    };
    let deg = PI / 180.0;
    let t = 1.0 - 0.17 * (hbp - 30.0 * deg).cos() + 0.24 * (2.0 * hbp).cos() + 0.32 * (3.0 * hbp + 6.0 * deg).cos()
        - 0.20 * (4.0 * hbp - 63.0 * deg).cos();
    let dtheta = 30.0 * deg * (-((hbp / deg - 275.0) / 25.0).powi(2)).exp();
    let rc = 2.0 * (cbp.powi(7) / (cbp.powi(7) + 25f64.powi(7))).sqrt();
    let sl = 1.0 + 0.015 * (lbp - 50.0).powi(2) / (20.0 + (lbp - 50.0).powi(2)).sqrt();
    let sc = 1.0 + 0.045 * cbp;
    let sh = 1.0 + 0.015 * cbp * t;
    let rt = -(2.0 * dtheta).sin() * rc;
    ((dlp / sl).powi(2) + (dcp / sc).powi(2) + (d_hp / sh).powi(2) + rt * (dcp / sc) * (d_hp / sh)).sqrt()
}

// ---- SSIM family ----

fn gauss2d(sigma: f64, size: usize) -> Vec<Vec<f64>> {
    let r = (size / 2) as f64;
    let mut k = vec![vec![0.0; size]; size];
    let mut total = 0.0;
    for (i, row) in k.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            let (dy, dx) = (i as f64 - r, j as f64 - r);
            *v = (-(dx * dx + dy * dy) / (2.0 * sigma * sigma)).exp();
            total += *v;
        }
    }
    k.iter_mut().flatten().for_each(|v| *v /= total);
    k
}

/// Mean SSIM and mean contrast-structure with an 11-tap, sigma 1.5
/// Gaussian window, replicated borders, dynamic range 1.
pub fn ssim_parts(x: &[f64], y: &[f64], w: usize, h: usize) -> (f64, f64) {
    let k = gauss2d(1.5, 11);
    let c1 = 0.01f64.powi(2);
    let c2 = 0.03f64.powi(2);
    let at = |img: &[f64], px: i64, py: i64| {
        let cx = px.max(0).min(w as i64 - 1) as usize;
        let cy = py.max(0).min(h as i64 - 1) as usize;
        img[cy * w + cx]
    };
    let (mut s_sum, mut cs_sum) = (0.0, 0.0);
    for py in 0..h as i64 {
        for px in 0..w as i64 {
            let (mut mx, mut my, mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
            for (i, row) in k.iter().enumerate() {
                for (j, &wt) in row.iter().enumerate() {
                    let (qx, qy) = (px + j as i64 - 5, py + i as i64 - 5);
                    let (a, b) = (at(x, qx, qy), at(y, qx, qy));
                    mx += wt * a;
                    my += wt * b;
                    sxx += wt * a * a;
                    syy += wt * b * b;
                    sxy += wt * a * b;
                }
            }
            let vx = sxx - mx * mx;
            let vy = syy - my * my;
            let cov = sxy - mx * my;
            let l = (2.0 * mx * my + c1) / (mx * mx + my * my + c1);
            let cs = (2.0 * cov + c2) / (vx + vy + c2);
            s_sum += l * cs;
            cs_sum += cs;
        }
    }
    let n = (w * h) as f64;
    (s_sum / n, cs_sum / n)
}

pub fn ssim(x: &[f64], y: &[f64], w: usize, h: usize) -> f64 {
    ssim_parts(x, y, w, h).0
}

/// Five-level MS-SSIM with 2x2 mean pooling between levels; the weights
/// are truncated and renormalised when fewer levels fit.
pub fn ms_ssim(x: &[f64], y: &[f64], w: usize, h: usize) -> f64 {
    let weights = [0.0448, 0.2856, 0.3001, 0.2363, 0.1333];
    let mut levels = 0;
    let (mut tw, mut th) = (w, h);
    while tw >= 11 && th >= 11 && levels < 5 {
        levels += 1;
        tw /= 2;
        th /= 2;
    }
    let total: f64 = weights[..levels].iter().sum();
    let (mut x, mut y, mut w, mut h) = (x.to_vec(), y.to_vec(), w, h);
    let mut out = 1.0;
    for lvl in 0..levels {
        let (s, cs) = ssim_parts(&x, &y, w, h);
        let e = weights[lvl] / total;
        if lvl == levels - 1 {
            out *= s.max(0.0).powf(e);
        } else {
            out *= cs.max(0.0).powf(e);
            let down = |img: &[f64]| {
                let mut o = Vec::new();
                for yy in 0..h / 2 {
                    for xx in 0..w / 2 {
                        let s = img[2 * yy * w + 2 * xx]
                            + img[2 * yy * w + 2 * xx + 1]
                            + img[(2 * yy + 1) * w + 2 * xx]
                            + img[(2 * yy + 1) * w + 2 * xx + 1];
                        o.push(s / 4.0);
                    }
                }
                o
            };
            x = down(&x);
            y = down(&y);
            w /= 2;
            h /= 2;
        }
    }
    out
}

// ---- Fréchet ----

pub fn mean_cov2(rows: &[[f64; 2]]) -> ([f64; 2], [[f64; 2]; 2]) {
    let n = rows.len() as f64;
    let m = [rows.iter().map(|r| r[0]).sum::<f64>() / n, rows.iter().map(|r| r[1]).sum::<f64>() / n];
    let mut c = [[0.0; 2]; 2];
    for r in rows {
        for i in 0..2 {
            for j in 0..2 {
                c[i][j] += (r[i] - m[i]) * (r[j] - m[j]);
            }
        }
    }
    for row in &mut c {
        for v in row {
            *v /= n - 1.0;
        }
    }
    (m, c)
}

/// Closed form for 2x2 covariances: `tr sqrt(M) = sqrt(tr M + 2 sqrt(det M))`
/// for any M similar to a PSD matrix.
pub fn frechet_2d(ma: [f64; 2], ca: [[f64; 2]; 2], mb: [f64; 2], cb: [[f64; 2]; 2]) -> f64 {
    let prod = [
        [ca[0][0] * cb[0][0] + ca[0][1] * cb[1][0], ca[0][0] * cb[0][1] + ca[0][1] * cb[1][1]],
        [ca[1][0] * cb[0][0] + ca[1][1] * cb[1][0], ca[1][0] * cb[0][1] + ca[1][1] * cb[1][1]],
    ];
    let tr = prod[0][0] + prod[1][1];
    let det = prod[0][0] * prod[1][1] - prod[0][1] * prod[1][0];
    let tr_sqrt = (tr + 2.0 * det.max(0.0).sqrt()).sqrt();
    let dm = (ma[0] - mb[0]).powi(2) + (ma[1] - mb[1]).powi(2);
    dm + ca[0][0] + ca[1][1] + cb[0][0] + cb[1][1] - 2.0 * tr_sqrt
}

// ---- statistics ----

/// Rank by counting: `#smaller + (#equal + 1) / 2`.
pub fn ranks(x: &[f64]) -> Vec<f64> {
    x.iter()
        .map(|&v| {
            let less = x.iter().filter(|&&u| u < v).count() as f64;
            let eq = x.iter().filter(|&&u| u == v).count() as f64;
            less + (eq + 1.0) / 2.0
        })
        .collect()
}

pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let syy: f64 = y.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt())
}

pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    pearson(&ranks(x), &ranks(y))
}

/// ICC(3,k) from total, row and column sums of squares.
pub fn icc3k(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    let k = rows[0].len();
    let all: Vec<f64> = rows.iter().flatten().copied().collect();
    let grand = all.iter().sum::<f64>() / all.len() as f64;
    let sst: f64 = all.iter().map(|v| (v - grand).powi(2)).sum();
    let ssr: f64 = rows
        .iter()
        .map(|r| k as f64 * (r.iter().sum::<f64>() / k as f64 - grand).powi(2))
        .sum();
    let ssc: f64 = (0..k)
        .map(|j| n as f64 * (rows.iter().map(|r| r[j]).sum::<f64>() / n as f64 - grand).powi(2))
        .sum();
    let sse = sst - ssr - ssc;
    let msr = ssr / (n - 1) as f64;
    let mse = sse / ((n - 1) * (k - 1)) as f64;
    (msr - mse) / msr
}

// ---- text ----

pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for j in 0..=b.len() {
        d[0][j] = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let sub = d[i - 1][j - 1] + usize::from(a[i - 1] != b[j - 1]);
            d[i][j] = sub.min(d[i - 1][j] + 1).min(d[i][j - 1] + 1);
        }
    }
    d[a.len()][b.len()]
}

pub fn ned(a: &str, b: &str) -> f64 {
    let m = a.chars().count().max(b.chars().count());
    if m == 0 {
        1.0
    } else {
        1.0 - levenshtein(a, b) as f64 / m as f64
    }
}

// ---- FSIM ----

fn freq(i: usize, n: usize) -> f64 {
    if n % 2 == 0 {
        ((i + n / 2) % n) as f64 / n as f64 - 0.5
    } else {
        let k = (i + (n - 1) / 2) % n;
        (k as f64 - ((n - 1) / 2) as f64) / (n - 1) as f64
    }
}

/// Log-Gabor filters `[orientation][scale]` in unshifted FFT layout, with
/// four scales from wavelength 6 (mult 2), sigmaOnf 0.55, four
/// orientations with dThetaOnSigma 1.2 and a (0.45, 15) Butterworth.
pub fn log_gabor(w: usize, h: usize) -> Vec<Vec<Vec<f64>>> {
    let (ns, no) = (4, 4);
    let theta_sigma = PI / no as f64 / 1.2;
    let mut bank = vec![vec![vec![0.0; w * h]; ns]; no];
    for y in 0..h {
        for x in 0..w {
            let (u, v) = (freq(x, w), freq(y, h));
            let r = (u * u + v * v).sqrt();
            let theta = (-v).atan2(u);
            let lp = 1.0 / (1.0 + (r / 0.45).powi(30));
            for (o, per_o) in bank.iter_mut().enumerate() {
                let angl = o as f64 * PI / no as f64;
                let ds = theta.sin() * angl.cos() - theta.cos() * angl.sin();
                let dc = theta.cos() * angl.cos() + theta.sin() * angl.sin();
                let dt = ds.atan2(dc).abs();
                let spread = (-dt * dt / (2.0 * theta_sigma * theta_sigma)).exp();
                for (s, f) in per_o.iter_mut().enumerate() {
                    let fo = 1.0 / (6.0 * 2f64.powi(s as i32));
                    let radial = if x == 0 && y == 0 {
                        0.0
                    } else {
                        (-((r / fo).ln()).powi(2) / (2.0 * 0.55f64.ln().powi(2))).exp() * lp
                    };
                    f[y * w + x] = radial * spread;
                }
            }
        }
    }
    bank
}

/// Direct 2-D DFT, row pass then column pass. `sign` -1 forward, +1 inverse
/// (unnormalised).
pub fn dft2(data: &[C], w: usize, h: usize, sign: f64) -> Vec<C> {
    let tw = |k: usize, n: usize| {
        let a = sign * 2.0 * PI * k as f64 / n as f64;
        C::new(a.cos(), a.sin())
    };
    let mut rows = vec![C::new(0.0, 0.0); w * h];
    for y in 0..h {
        for u in 0..w {
            let mut acc = C::new(0.0, 0.0);
            for x in 0..w {
                acc = acc.add(data[y * w + x].mul(tw((u * x) % w, w)));
            }
            rows[y * w + u] = acc;
        }
    }
    let mut out = vec![C::new(0.0, 0.0); w * h];
    for u in 0..w {
        for v in 0..h {
            let mut acc = C::new(0.0, 0.0);
            for y in 0..h {
                acc = acc.add(rows[y * w + u].mul(tw((v * y) % h, h)));
            }
            out[v * w + u] = acc;
        }
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Filtering {
    /// Multiply spectra, inverse DFT.
    Spectral,
    /// Circular convolution with the spatial kernels.
    Spatial,
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        (s[n / 2 - 1] + s[n / 2]) / 2.0
    }
}

/// Phase congruency of an image in [0,1] scaled to 0-255 internally, with
/// k = 2 median noise compensation; output clamped to [0,1].
pub fn phase_congruency(img: &[f64], w: usize, h: usize, mode: Filtering) -> Vec<f64> {
    let n = w * h;
    let bank = log_gabor(w, h);
    let pixels: Vec<C> = img.iter().map(|&v| C::new(v * 255.0, 0.0)).collect();
    let spectrum = dft2(&pixels, w, h, -1.0);
    let spatial = |f: &[f64]| -> Vec<C> {
        let fc: Vec<C> = f.iter().map(|&v| C::new(v, 0.0)).collect();
        dft2(&fc, w, h, 1.0).into_iter().map(|c| C::new(c.re / n as f64, c.im / n as f64)).collect()
    };
    let mut energy_all = vec![0.0; n];
    let mut an_all = vec![0.0; n];
    let eps = 1e-4;
    for per_o in &bank {
        let mut eo: Vec<Vec<C>> = Vec::new();
        let mut ifft_filters: Vec<Vec<f64>> = Vec::new();
        for f in per_o {
            let kern = spatial(f);
            ifft_filters.push(kern.iter().map(|c| c.re * (n as f64).sqrt()).collect());
            let resp = match mode {
                Filtering::Spectral => {
                    let prod: Vec<C> = spectrum.iter().zip(f).map(|(s, &g)| C::new(s.re * g, s.im * g)).collect();
                    dft2(&prod, w, h, 1.0).into_iter().map(|c| C::new(c.re / n as f64, c.im / n as f64)).collect()
                }
                Filtering::Spatial => {
                    let mut out = vec![C::new(0.0, 0.0); n];
                    for y in 0..h {
                        for x in 0..w {
                            let mut acc = C::new(0.0, 0.0);
                            for qy in 0..h {
                                for qx in 0..w {
                                    let ky = (y + h - qy) % h;
                                    let kx = (x + w - qx) % w;
                                    acc = acc.add(pixels[qy * w + qx].mul(kern[ky * w + kx]));
                                }
                            }
                            out[y * w + x] = acc;
                        }
                    }
                    out
                }
            };
            eo.push(resp);
        }
        let mut sum_e = vec![0.0; n];
        let mut sum_o = vec![0.0; n];
        for resp in &eo {
            for i in 0..n {
                sum_e[i] += resp[i].re;
                sum_o[i] += resp[i].im;
                an_all[i] += resp[i].abs();
            }
        }
        let mut energy = vec![0.0; n];
        for i in 0..n {
            let x_energy = (sum_e[i].powi(2) + sum_o[i].powi(2)).sqrt() + eps;
            let (me, mo) = (sum_e[i] / x_energy, sum_o[i] / x_energy);
            for resp in &eo {
                let (e, o) = (resp[i].re, resp[i].im);
                energy[i] += e * me + o * mo - (e * mo - o * me).abs();
            }
        }
        let em_n: f64 = per_o[0].iter().map(|v| v * v).sum();
        let e2: Vec<f64> = eo[0].iter().map(|c| c.abs().powi(2)).collect();
        let mean_e2n = -median(&e2) / 0.5f64.ln();
        let noise_power = mean_e2n / em_n;
        let mut est_sum_an2 = 0.0;
        for f in &ifft_filters {
            est_sum_an2 += f.iter().map(|v| v * v).sum::<f64>();
        }
        let mut est_sum_aiaj = 0.0;
        for si in 0..ifft_filters.len() {
            for sj in si + 1..ifft_filters.len() {
                est_sum_aiaj += ifft_filters[si].iter().zip(&ifft_filters[sj]).map(|(a, b)| a * b).sum::<f64>();
            }
        }
        let est_noise_energy2 = 2.0 * noise_power * est_sum_an2 + 4.0 * noise_power * est_sum_aiaj;
        let tau = (est_noise_energy2 / 2.0).sqrt();
        let t = (tau * (PI / 2.0).sqrt() + 2.0 * ((2.0 - PI / 2.0) * tau * tau).sqrt()) / 1.7;
        for i in 0..n {
            energy_all[i] += (energy[i] - t).max(0.0);
        }
    }
    (0..n).map(|i| (energy_all[i] / (an_all[i] + eps)).clamp(0.0, 1.0)).collect()
}

/// Scharr gradient magnitude in 8-bit units, replicated borders.
pub fn gradient(img: &[f64], w: usize, h: usize) -> Vec<f64> {
    let kx = [[-3.0, 0.0, 3.0], [-10.0, 0.0, 10.0], [-3.0, 0.0, 3.0]];
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            let (mut gx, mut gy) = (0.0, 0.0);
            for dy in 0..3 {
                for dx in 0..3 {
                    let sx = (x as i64 + dx as i64 - 1).clamp(0, w as i64 - 1) as usize;
                    let sy = (y as i64 + dy as i64 - 1).clamp(0, h as i64 - 1) as usize;
                    let v = img[sy * w + sx] * 255.0 / 16.0;
                    gx += kx[dy][dx] * v;
                    gy += kx[dx][dy] * v;
                }
            }
            out[y * w + x] = (gx * gx + gy * gy).sqrt();
        }
    }
    out
}

pub fn fsim(a: &[f64], b: &[f64], w: usize, h: usize) -> f64 {
    let pa = phase_congruency(a, w, h, Filtering::Spectral);
    let pb = phase_congruency(b, w, h, Filtering::Spectral);
    let ga = gradient(a, w, h);
    let gb = gradient(b, w, h);
    let (t1, t2) = (0.85, 160.0);
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..w * h {
        let spc = (2.0 * pa[i] * pb[i] + t1) / (pa[i].powi(2) + pb[i].powi(2) + t1);
        let sg = (2.0 * ga[i] * gb[i] + t2) / (ga[i].powi(2) + gb[i].powi(2) + t2);
        let m = pa[i].max(pb[i]);
        num += spc * sg * m;
        den += m;
    }
    num / den
}
