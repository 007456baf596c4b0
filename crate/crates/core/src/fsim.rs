//! Feature similarity (FSIM) over phase congruency and gradient magnitude.
//!
//! Phase congruency follows Kovesi's log-Gabor formulation with a
//! median-based noise estimate, the variant the FSIM reference code ships.
//! Both maps are computed on 0–255 scaled luma so that `t2` keeps its usual
//! 8-bit calibration.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use rustfft::num_complex::Complex64;
use rustfft::FftDirection;

use crate::error::{Error, Result};
use crate::imgcore::fft::{transform_2d, transform_2d_transposed};
use crate::imgcore::{log_gabor_bank, Colorspace, FilterBank, LogGaborParams, RasterImage};

/// Smallest side accepted by [`phase_congruency`].
pub const MIN_PC_SIZE: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NoiseMethod {
    /// Noise energy from the median squared response at the finest scale.
    Median,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FsimParams {
    pub scales: usize,
    pub orientations: usize,
    pub min_wavelength: f64,
    pub mult: f64,
    pub sigma_onf: f64,
    pub d_theta_on_sigma: f64,
    /// Standard deviations of noise energy above the mean to reject.
    pub noise_k: f64,
    pub t1: f64,
    /// Gradient stability constant, in 8-bit units.
    pub t2: f64,
    pub epsilon: f64,
    pub noise_method: NoiseMethod,
}

impl Default for FsimParams {
    fn default() -> Self {
        Self {
            scales: 4,
            orientations: 4,
            min_wavelength: 6.0,
            mult: 2.0,
            sigma_onf: 0.55,
            d_theta_on_sigma: 1.2,
            noise_k: 2.0,
            t1: 0.85,
            t2: 160.0,
            epsilon: 1e-4,
            noise_method: NoiseMethod::Median,
        }
    }
}

impl FsimParams {
    fn validate(&self) -> Result<()> {
        let positive = [
            self.min_wavelength,
            self.mult,
            self.sigma_onf,
            self.d_theta_on_sigma,
            self.noise_k,
            self.t1,
            self.t2,
            self.epsilon,
        ];
        if self.scales < 2 || self.orientations < 1 || positive.iter().any(|v| !(*v > 0.0)) {
            return Err(Error::InvalidParams(
                "FSIM needs >= 2 scales, >= 1 orientation and positive constants".into(),
            ));
        }
        Ok(())
    }

    fn bank_params(&self) -> LogGaborParams {
        LogGaborParams {
            scales: self.scales,
            orientations: self.orientations,
            min_wavelength: self.min_wavelength,
            mult: self.mult,
            sigma_onf: self.sigma_onf,
            d_theta_on_sigma: self.d_theta_on_sigma,
            lowpass: Some((0.45, 15)),
        }
    }
}

/// Filters plus the per-orientation noise constants that depend only on them.
struct PcBank {
    filters: Vec<Vec<f64>>,
    /// Sum of squared filter values at the finest scale, per orientation.
    em_n: Vec<f64>,
    /// Sum over scales and pixels of the squared spatial filters.
    sum_an2: Vec<f64>,
    /// Sum over scale pairs of the spatial filter cross products.
    sum_aiaj: Vec<f64>,
    scales: usize,
}

impl PcBank {
    fn build(bank: &FilterBank) -> Self {
        let (w, h) = (bank.width, bank.height);
        let n = w * h;
        let (ns, no) = (bank.scales(), bank.orientations());
        let mut filters = Vec::with_capacity(ns * no);
        let mut em_n = Vec::with_capacity(no);
        let mut sum_an2 = Vec::with_capacity(no);
        let mut sum_aiaj = Vec::with_capacity(no);
        let root_n = (n as f64).sqrt();
        for o in 0..no {
            let mut spatial: Vec<Vec<f64>> = Vec::with_capacity(ns);
            for s in 0..ns {
                let f = bank.filter(s, o);
                if s == 0 {
                    em_n.push(f.iter().map(|v| v * v).sum());
                }
                let mut buf: Vec<Complex64> = f.iter().map(|&v| Complex64::new(v, 0.0)).collect();
                transform_2d(&mut buf, w, h, FftDirection::Inverse);
                spatial.push(buf.iter().map(|c| c.re / n as f64 * root_n).collect());
                filters.push(f);
            }
            let an2: f64 = spatial.iter().flat_map(|p| p.iter().map(|v| v * v)).sum();
            let mut aiaj = 0.0;
            for si in 0..ns {
                for sj in si + 1..ns {
                    aiaj += spatial[si].iter().zip(&spatial[sj]).map(|(a, b)| a * b).sum::<f64>();
                }
            }
            sum_an2.push(an2);
            sum_aiaj.push(aiaj);
        }
        Self {
            filters,
            em_n,
            sum_an2,
            sum_aiaj,
            scales: ns,
        }
    }

    fn filter(&self, s: usize, o: usize) -> &[f64] {
        &self.filters[o * self.scales + s]
    }
}

type BankKey = (usize, usize, [u64; 5], usize, usize);

fn cached_bank(w: usize, h: usize, p: &FsimParams) -> Result<Arc<PcBank>> {
    static CACHE: OnceLock<Mutex<HashMap<BankKey, Arc<PcBank>>>> = OnceLock::new();
    let key: BankKey = (
        w,
        h,
        [
            p.min_wavelength.to_bits(),
            p.mult.to_bits(),
            p.sigma_onf.to_bits(),
            p.d_theta_on_sigma.to_bits(),
            0,
        ],
        p.scales,
        p.orientations,
    );
    let cache = CACHE.get_or_init(Default::default);
    if let Some(b) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return Ok(Arc::clone(b));
    }
    let bank = Arc::new(PcBank::build(&log_gabor_bank(w, h, p.bank_params())?));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    Ok(Arc::clone(guard.entry(key).or_insert(bank)))
}

fn median(values: &mut [f64]) -> f64 {
    let n = values.len();
    let mid = n / 2;
    let (_, upper, _) = values.select_nth_unstable_by(mid, f64::total_cmp);
    let upper = *upper;
    if n % 2 == 1 {
        upper
    } else {
        let lower = values[..mid].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        0.5 * (lower + upper)
    }
}

fn expect_gray(img: &RasterImage) -> Result<()> {
    img.expect_colorspace(Colorspace::Gray)
}

/// Phase congruency map in [0, 1].
pub fn phase_congruency(img: &RasterImage, p: &FsimParams) -> Result<RasterImage> {
    expect_gray(img)?;
    p.validate()?;
    let (w, h) = (img.width(), img.height());
    if w < MIN_PC_SIZE || h < MIN_PC_SIZE {
        return Err(Error::ImageTooSmall {
            width: w,
            height: h,
            min: MIN_PC_SIZE,
        });
    }
    let bank = cached_bank(w, h, p)?;
    let n = w * h;
    let inv_n = 1.0 / n as f64;
    let eps = p.epsilon;

    let mut spectrum: Vec<Complex64> = img.data().iter().map(|&v| Complex64::new(v * 255.0, 0.0)).collect();
    transform_2d(&mut spectrum, w, h, FftDirection::Forward);

    let mut energy_all = vec![0.0; n];
    let mut an_all = vec![0.0; n];
    let mut eo: Vec<Vec<Complex64>> = vec![vec![Complex64::new(0.0, 0.0); n]; p.scales];
    let mut sum_e = vec![0.0; n];
    let mut sum_o = vec![0.0; n];
    let mut energy = vec![0.0; n];
    let mut scratch = vec![0.0; n];
    let mut product = vec![Complex64::new(0.0, 0.0); n];

    // responses and every per-pixel accumulator live in transposed layout
    for o in 0..p.orientations {
        sum_e.iter_mut().for_each(|v| *v = 0.0);
        sum_o.iter_mut().for_each(|v| *v = 0.0);
        for (s, resp) in eo.iter_mut().enumerate() {
            let filt = bank.filter(s, o);
            for ((r, &x), &f) in product.iter_mut().zip(&spectrum).zip(filt) {
                *r = x * f;
            }
            transform_2d_transposed(&mut product, resp, w, h, FftDirection::Inverse);
            for (i, r) in resp.iter_mut().enumerate() {
                *r *= inv_n;
                an_all[i] += r.norm_sqr().sqrt();
                sum_e[i] += r.re;
                sum_o[i] += r.im;
            }
        }

        for i in 0..n {
            let inv = 1.0 / ((sum_e[i] * sum_e[i] + sum_o[i] * sum_o[i]).sqrt() + eps);
            let (mean_e, mean_o) = (sum_e[i] * inv, sum_o[i] * inv);
            let mut acc = 0.0;
            for resp in &eo {
                let (e, od) = (resp[i].re, resp[i].im);
                acc += e * mean_e + od * mean_o - (e * mean_o - od * mean_e).abs();
            }
            energy[i] = acc;
        }

        let threshold = match p.noise_method {
            NoiseMethod::Median => {
                for (dst, r) in scratch.iter_mut().zip(&eo[0]) {
                    *dst = r.norm_sqr();
                }
                let median_e2n = median(&mut scratch);
                let mean_e2n = -median_e2n / 0.5f64.ln();
                let noise_power = mean_e2n / bank.em_n[o];
                let est_noise_energy2 = 2.0 * noise_power * bank.sum_an2[o] + 4.0 * noise_power * bank.sum_aiaj[o];
                let tau = (est_noise_energy2 / 2.0).sqrt();
                let mean = tau * (PI / 2.0).sqrt();
                let sigma = ((2.0 - PI / 2.0) * tau * tau).sqrt();
                (mean + p.noise_k * sigma) / 1.7
            }
        };
        for (acc, &e) in energy_all.iter_mut().zip(&energy) {
            *acc += (e - threshold).max(0.0);
        }
    }

    let mut data = vec![0.0; n];
    for x in 0..w {
        for y in 0..h {
            let t = x * h + y;
            data[y * w + x] = (energy_all[t] / (an_all[t] + eps)).clamp(0.0, 1.0);
        }
    }
    RasterImage::new(w, h, Colorspace::Gray, data)
}

/// Scharr gradient magnitude on 0–255 scaled luma, kernel `[3 10 3]/16`
/// across and `[-1 0 1]` along the derivative direction, clamped borders.
///
/// The result is in 8-bit gradient units, not [0, 1].
pub fn gradient_magnitude(img: &RasterImage) -> Result<RasterImage> {
    expect_gray(img)?;
    let (w, h) = (img.width(), img.height());
    let d = img.data();
    let at = |x: isize, y: isize| -> f64 {
        let xx = x.clamp(0, w as isize - 1) as usize;
        let yy = y.clamp(0, h as isize - 1) as usize;
        d[yy * w + xx] * 255.0
    };
    let mut out = Vec::with_capacity(w * h);
    for y in 0..h as isize {
        for x in 0..w as isize {
            let gx = (3.0 * (at(x + 1, y - 1) - at(x - 1, y - 1))
                + 10.0 * (at(x + 1, y) - at(x - 1, y))
                + 3.0 * (at(x + 1, y + 1) - at(x - 1, y + 1)))
                / 16.0;
            let gy = (3.0 * (at(x - 1, y + 1) - at(x - 1, y - 1))
                + 10.0 * (at(x, y + 1) - at(x, y - 1))
                + 3.0 * (at(x + 1, y + 1) - at(x + 1, y - 1)))
                / 16.0;
            out.push((gx * gx + gy * gy).sqrt());
        }
    }
    RasterImage::new(w, h, Colorspace::Gray, out)
}

/// Luma-only FSIM in [0, 1].
pub fn fsim(a: &RasterImage, b: &RasterImage, p: &FsimParams) -> Result<f64> {
    expect_gray(a)?;
    expect_gray(b)?;
    a.expect_same_shape(b)?;
    let pc_a = phase_congruency(a, p)?;
    let pc_b = phase_congruency(b, p)?;
    let g_a = gradient_magnitude(a)?;
    let g_b = gradient_magnitude(b)?;

    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..a.len_pixels() {
        let (p1, p2) = (pc_a.data()[i], pc_b.data()[i]);
        let (g1, g2) = (g_a.data()[i], g_b.data()[i]);
        let s_pc = (2.0 * p1 * p2 + p.t1) / (p1 * p1 + p2 * p2 + p.t1);
        let s_g = (2.0 * g1 * g2 + p.t2) / (g1 * g1 + g2 * g2 + p.t2);
        let pc_m = p1.max(p2);
        num += s_pc * s_g * pc_m;
        den += pc_m;
    }
    if den == 0.0 {
        if a.data() == b.data() {
            return Ok(1.0);
        }
        return Err(Error::DegenerateInput("both phase congruency maps are zero".into()));
    }
    Ok((num / den).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step(w: usize, h: usize) -> RasterImage {
        RasterImage::gray_from_fn(w, h, |x, _| if x < w / 2 { 0.2 } else { 0.8 })
    }

    #[test]
    fn constant_has_no_congruency() {
        let img = RasterImage::filled(32, 32, Colorspace::Gray, 0.4);
        let pc = phase_congruency(&img, &FsimParams::default()).unwrap();
        assert!(pc.data().iter().cloned().fold(0.0, f64::max) < 0.05);
    }

    #[test]
    fn step_edge_ridge() {
        let n = 128;
        let img = step(n, n);
        let pc = phase_congruency(&img, &FsimParams::default()).unwrap();
        let (mut ridge, mut off, mut n_off) = (0.0, 0.0, 0);
        for y in 0..n {
            ridge += pc.get(n / 2 - 1, y, 0).max(pc.get(n / 2, y, 0));
            for x in 0..n {
                // the FFT sees a second edge at the wrap-around
                let d = x.abs_diff(n / 2).min(x).min(n - 1 - x);
                if d >= 8 {
                    off += pc.get(x, y, 0);
                    n_off += 1;
                }
            }
        }
        let ridge = ridge / n as f64;
        let off = off / n_off as f64;
        assert!(ridge > 5.0 * off, "ridge {ridge} off {off}");
    }

    #[test]
    fn too_small_for_pc() {
        let img = RasterImage::filled(15, 40, Colorspace::Gray, 0.0);
        assert!(matches!(
            phase_congruency(&img, &FsimParams::default()),
            Err(Error::ImageTooSmall { min: 16, .. })
        ));
    }

    #[test]
    fn gradient_of_constant_and_ramp() {
        let c = RasterImage::filled(5, 5, Colorspace::Gray, 0.3);
        assert!(gradient_magnitude(&c).unwrap().data().iter().all(|&v| v == 0.0));
        let s = 3.0;
        let ramp = RasterImage::gray_from_fn(5, 5, |_, y| y as f64 * s / 255.0);
        let g = gradient_magnitude(&ramp).unwrap();
        assert!((g.get(2, 2, 0) - 2.0 * s).abs() < 1e-9);
    }

    #[test]
    fn fsim_identity_and_degenerate() {
        let img = step(32, 32);
        assert!((fsim(&img, &img, &FsimParams::default()).unwrap() - 1.0).abs() < 1e-6);
        let flat = RasterImage::filled(32, 32, Colorspace::Gray, 0.5);
        assert_eq!(fsim(&flat, &flat, &FsimParams::default()).unwrap(), 1.0);
    }

    #[test]
    fn cached_and_fresh_banks_agree() {
        let img = RasterImage::gray_from_fn(24, 20, |x, y| ((x * 7 + y * 3) % 5) as f64 / 5.0);
        let p = FsimParams::default();
        let first = phase_congruency(&img, &p).unwrap();
        let fresh = PcBank::build(&log_gabor_bank(24, 20, p.bank_params()).unwrap());
        let cached = cached_bank(24, 20, &p).unwrap();
        assert_eq!(fresh.filters, cached.filters);
        assert_eq!(fresh.sum_an2, cached.sum_an2);
        assert_eq!(phase_congruency(&img, &p).unwrap(), first);
    }

    #[test]
    fn median_even_and_odd() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 3.0, 2.0]), 2.5);
    }
}
