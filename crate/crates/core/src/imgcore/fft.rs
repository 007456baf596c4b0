use std::sync::{Arc, Mutex, OnceLock};

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

use super::{Colorspace, RasterImage};
use crate::error::{Error, Result};

/// A 2-D array of complex samples, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPlane {
    pub width: usize,
    pub height: usize,
    pub data: Vec<Complex64>,
}

impl ComplexPlane {
    pub fn zeros(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            data: vec![Complex64::new(0.0, 0.0); width * height],
        }
    }

    #[inline]
    pub fn at(&self, x: usize, y: usize) -> Complex64 {
        self.data[y * self.width + x]
    }

    /// Inverse transform keeping the complex result.
    pub fn inverse(&self) -> ComplexPlane {
        let mut out = self.clone();
        transform_2d(&mut out.data, self.width, self.height, FftDirection::Inverse);
        let scale = 1.0 / (self.width * self.height) as f64;
        out.data.iter_mut().for_each(|v| *v *= scale);
        out
    }
}

fn plan(len: usize, dir: FftDirection) -> Arc<dyn Fft<f64>> {
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    let planner = PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()));
    let mut guard = planner.lock().unwrap_or_else(|e| e.into_inner());
    guard.plan_fft(len, dir)
}

/// Unnormalised in-place 2-D transform.
pub(crate) fn transform_2d(data: &mut [Complex64], w: usize, h: usize, dir: FftDirection) {
    let mut tmp = vec![Complex64::new(0.0, 0.0); w * h];
    transform_2d_transposed(data, &mut tmp, w, h, dir);
    transpose(&tmp, data, h, w);
}

/// Unnormalised 2-D transform of `data` (`w` x `h`, row-major) written to
/// `out` in transposed layout (`h` x `w`, so `out[x * h + y]`). `data` is
/// used as scratch.
pub(crate) fn transform_2d_transposed(data: &mut [Complex64], out: &mut [Complex64], w: usize, h: usize, dir: FftDirection) {
    let row_fft = plan(w, dir);
    let col_fft = plan(h, dir);
    let len = row_fft.get_inplace_scratch_len().max(col_fft.get_inplace_scratch_len());
    let mut scratch = vec![Complex64::new(0.0, 0.0); len];
    row_fft.process_with_scratch(data, &mut scratch);
    transpose(data, out, w, h);
    col_fft.process_with_scratch(out, &mut scratch);
}

/// `dst[x * h + y] = src[y * w + x]`.
pub(crate) fn transpose(src: &[Complex64], dst: &mut [Complex64], w: usize, h: usize) {
    const B: usize = 16;
    for y0 in (0..h).step_by(B) {
        let y1 = (y0 + B).min(h);
        for x0 in (0..w).step_by(B) {
            let x1 = (x0 + B).min(w);
            for y in y0..y1 {
                let row = &src[y * w + x0..y * w + x1];
                for (x, &v) in (x0..x1).zip(row) {
                    dst[x * h + y] = v;
                }
            }
        }
    }
}

/// Forward DFT of a single-channel image (unnormalised, DC at index 0).
pub fn fft2(img: &RasterImage) -> Result<ComplexPlane> {
    if img.channels() != 1 {
        return Err(Error::WrongColorspace {
            expected: Colorspace::Gray,
            found: img.colorspace(),
        });
    }
    let mut data: Vec<Complex64> = img.data().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    transform_2d(&mut data, img.width(), img.height(), FftDirection::Forward);
    Ok(ComplexPlane {
        width: img.width(),
        height: img.height(),
        data,
    })
}

/// Inverse DFT (scaled by 1/N), returning the real part as a gray image.
pub fn ifft2(plane: &ComplexPlane) -> RasterImage {
    let inv = plane.inverse();
    RasterImage::new(
        plane.width,
        plane.height,
        Colorspace::Gray,
        inv.data.iter().map(|c| c.re).collect(),
    )
    .expect("plane dimensions are non-zero")
}
