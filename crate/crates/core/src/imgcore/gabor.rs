use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Parameters of a log-Gabor filter bank in the layout used for phase congruency.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogGaborParams {
    pub scales: usize,
    pub orientations: usize,
    /// Wavelength of the finest scale, in pixels.
    pub min_wavelength: f64,
    /// Ratio between successive wavelengths.
    pub mult: f64,
    /// Bandwidth: ratio of the radial Gaussian's sigma to the centre frequency.
    pub sigma_onf: f64,
    /// Orientation spacing over angular sigma.
    pub d_theta_on_sigma: f64,
    /// Butterworth low-pass `(cutoff, order)` applied to every radial
    /// component, or `None`.
    pub lowpass: Option<(f64, i32)>,
}

impl Default for LogGaborParams {
    fn default() -> Self {
        Self {
            scales: 4,
            orientations: 4,
            min_wavelength: 6.0,
            mult: 2.0,
            sigma_onf: 0.55,
            d_theta_on_sigma: 1.2,
            lowpass: Some((0.45, 15)),
        }
    }
}

/// Frequency-domain log-Gabor filters laid out in FFT order (DC at index 0).
///
/// Filters are real valued; `filter(s, o)` is the radial component of scale
/// `s` times the angular spread of orientation `o`.
#[derive(Clone, Debug, PartialEq)]
pub struct FilterBank {
    pub width: usize,
    pub height: usize,
    pub params: LogGaborParams,
    radial: Vec<Vec<f64>>,
    angular: Vec<Vec<f64>>,
}

impl FilterBank {
    pub fn scales(&self) -> usize {
        self.radial.len()
    }

    pub fn orientations(&self) -> usize {
        self.angular.len()
    }

    pub fn radial(&self, scale: usize) -> &[f64] {
        &self.radial[scale]
    }

    pub fn angular(&self, orientation: usize) -> &[f64] {
        &self.angular[orientation]
    }

    pub fn filter(&self, scale: usize, orientation: usize) -> Vec<f64> {
        self.radial[scale]
            .iter()
            .zip(&self.angular[orientation])
            .map(|(r, a)| r * a)
            .collect()
    }

    /// Centre frequency (cycles/pixel) of a scale.
    pub fn center_frequency(&self, scale: usize) -> f64 {
        1.0 / (self.params.min_wavelength * self.params.mult.powi(scale as i32))
    }
}

/// Normalised signed frequency of FFT index `i` on an axis of length `n`,
/// using the `n - 1` denominator for odd lengths.
pub(crate) fn axis_frequency(i: usize, n: usize) -> f64 {
    if n == 1 {
        return 0.0;
    }
    if n % 2 == 0 {
        let k = if i < n / 2 { i as f64 } else { i as f64 - n as f64 };
        k / n as f64
    } else {
        let half = (n - 1) / 2;
        let k = if i <= half { i as f64 } else { i as f64 - n as f64 };
        k / (n - 1) as f64
    }
}

pub fn log_gabor_bank(width: usize, height: usize, params: LogGaborParams) -> Result<FilterBank> {
    let p = params;
    if width == 0 || height == 0 {
        return Err(Error::ZeroDimension);
    }
    if p.scales < 1 || p.orientations < 1 {
        return Err(Error::InvalidBankParams("need at least one scale and one orientation".into()));
    }
    if !(p.min_wavelength >= 2.0) {
        return Err(Error::InvalidBankParams(format!(
            "minimum wavelength {} is below 2 pixels",
            p.min_wavelength
        )));
    }
    if !(p.mult > 0.0) || !(p.sigma_onf > 0.0 && p.sigma_onf < 1.0) || !(p.d_theta_on_sigma > 0.0) {
        return Err(Error::InvalidBankParams(
            "mult and dThetaOnSigma must be positive and sigmaOnf in (0, 1)".into(),
        ));
    }

    let n = width * height;
    let mut radius = vec![0.0; n];
    let mut sin_t = vec![0.0; n];
    let mut cos_t = vec![0.0; n];
    for y in 0..height {
        let fy = axis_frequency(y, height);
        for x in 0..width {
            let fx = axis_frequency(x, width);
            let i = y * width + x;
            radius[i] = (fx * fx + fy * fy).sqrt();
            let theta = (-fy).atan2(fx);
            sin_t[i] = theta.sin();
            cos_t[i] = theta.cos();
        }
    }
    let lowpass: Option<Vec<f64>> = p.lowpass.map(|(cutoff, order)| {
        radius
            .iter()
            .map(|&r| 1.0 / (1.0 + (r / cutoff).powi(2 * order)))
            .collect()
    });
    // avoid log(0) at DC; the DC bin is zeroed afterwards
    radius[0] = 1.0;

    let log_sigma2 = 2.0 * p.sigma_onf.ln().powi(2);
    let radial = (0..p.scales)
        .map(|s| {
            let f0 = 1.0 / (p.min_wavelength * p.mult.powi(s as i32));
            let mut plane: Vec<f64> = radius
                .iter()
                .map(|&r| (-(r / f0).ln().powi(2) / log_sigma2).exp())
                .collect();
            if let Some(lp) = &lowpass {
                plane.iter_mut().zip(lp).for_each(|(v, l)| *v *= l);
            }
            plane[0] = 0.0;
            plane
        })
        .collect();

    let theta_sigma = PI / p.orientations as f64 / p.d_theta_on_sigma;
    let angular = (0..p.orientations)
        .map(|o| {
            let angle = o as f64 * PI / p.orientations as f64;
            let (sa, ca) = angle.sin_cos();
            sin_t
                .iter()
                .zip(&cos_t)
                .map(|(&st, &ct)| {
                    let ds = st * ca - ct * sa;
                    let dc = ct * ca + st * sa;
                    let dtheta = ds.atan2(dc).abs();
                    (-dtheta * dtheta / (2.0 * theta_sigma * theta_sigma)).exp()
                })
                .collect()
        })
        .collect();

    Ok(FilterBank {
        width,
        height,
        params,
        radial,
        angular,
    })
}
