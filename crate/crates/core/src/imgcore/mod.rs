//! Image containers, colour conversion, resampling and the filtering
//! primitives the metrics are built from.
//!
//! Samples are `f64` in planar-interleaved row-major order. Quantisation to
//! 8 bits only happens in [`io`].

mod color;
pub(crate) mod fft;
pub(crate) mod gabor;
pub mod io;
pub(crate) mod resample;

pub(crate) use color::LabMemo;
pub use color::{lab_to_srgb, lab_to_srgb_pixel, srgb_to_lab, srgb_to_lab_pixel, to_grayscale, LabPixel};
pub use fft::{fft2, ifft2, ComplexPlane};
pub use gabor::{log_gabor_bank, FilterBank, LogGaborParams};
pub use io::{decode_image, encode_png, load_image, save_png};
pub use resample::{gaussian_blur, gaussian_kernel, resize_bilinear};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Colorspace {
    /// Gamma-encoded sRGB in [0, 1].
    Srgb,
    /// Linear-light RGB in [0, 1].
    Linear,
    /// Single channel luma in [0, 1].
    Gray,
    /// CIE L*a*b* under D65.
    Lab,
}

impl Colorspace {
    pub fn channels(self) -> usize {
        match self {
            Colorspace::Gray => 1,
            _ => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RasterImage {
    width: usize,
    height: usize,
    colorspace: Colorspace,
    data: Vec<f64>,
}

impl RasterImage {
    pub fn new(width: usize, height: usize, colorspace: Colorspace, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::ZeroDimension);
        }
        let expected = width * height * colorspace.channels();
        if data.len() != expected {
            return Err(Error::BadBufferLength {
                expected,
                got: data.len(),
            });
        }
        Ok(Self {
            width,
            height,
            colorspace,
            data,
        })
    }

    /// Image with every sample of every pixel set to `value`.
    ///
    /// # Panics
    /// If either dimension is zero.
    pub fn filled(width: usize, height: usize, colorspace: Colorspace, value: f64) -> Self {
        assert!(width > 0 && height > 0, "zero image dimension");
        Self {
            width,
            height,
            colorspace,
            data: vec![value; width * height * colorspace.channels()],
        }
    }

    /// Image where every pixel takes the colour `pixel` (3-channel spaces).
    pub fn uniform(width: usize, height: usize, colorspace: Colorspace, pixel: [f64; 3]) -> Self {
        assert!(colorspace.channels() == 3, "uniform() needs a 3-channel colorspace");
        let data = std::iter::repeat_n(pixel, width * height).flatten().collect();
        Self {
            width,
            height,
            colorspace,
            data,
        }
    }

    /// Grayscale image built from a per-pixel function.
    pub fn gray_from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        assert!(width > 0 && height > 0, "zero image dimension");
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            colorspace: Colorspace::Gray,
            data,
        }
    }

    /// Three-channel image built from a per-pixel function.
    pub fn rgb_from_fn(
        width: usize,
        height: usize,
        colorspace: Colorspace,
        mut f: impl FnMut(usize, usize) -> [f64; 3],
    ) -> Self {
        assert!(width > 0 && height > 0, "zero image dimension");
        assert!(colorspace.channels() == 3);
        let mut data = Vec::with_capacity(width * height * 3);
        for y in 0..height {
            for x in 0..width {
                data.extend_from_slice(&f(x, y));
            }
        }
        Self {
            width,
            height,
            colorspace,
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.colorspace.channels()
    }

    pub fn colorspace(&self) -> Colorspace {
        self.colorspace
    }

    pub fn len_pixels(&self) -> usize {
        self.width * self.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, c: usize) -> f64 {
        self.data[(y * self.width + x) * self.channels() + c]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, c: usize, v: f64) {
        let ch = self.channels();
        self.data[(y * self.width + x) * ch + c] = v;
    }

    /// The three samples at `(x, y)`; gray images repeat their single sample.
    #[inline]
    pub fn pixel(&self, x: usize, y: usize) -> [f64; 3] {
        let ch = self.channels();
        let i = (y * self.width + x) * ch;
        if ch == 1 {
            [self.data[i]; 3]
        } else {
            [self.data[i], self.data[i + 1], self.data[i + 2]]
        }
    }

    #[inline]
    pub fn set_pixel(&mut self, x: usize, y: usize, p: [f64; 3]) {
        let ch = self.channels();
        let i = (y * self.width + x) * ch;
        self.data[i..i + ch].copy_from_slice(&p[..ch]);
    }

    /// Relabel the colorspace without touching samples. Channel count must agree.
    pub fn with_colorspace(mut self, colorspace: Colorspace) -> Result<Self> {
        if colorspace.channels() != self.channels() {
            return Err(Error::WrongColorspace {
                expected: colorspace,
                found: self.colorspace,
            });
        }
        self.colorspace = colorspace;
        Ok(self)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            width: self.width,
            height: self.height,
            colorspace: self.colorspace,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.width == other.width && self.height == other.height && self.channels() == other.channels()
    }

    pub(crate) fn shape_string(&self) -> String {
        format!("{}x{}x{}", self.width, self.height, self.channels())
    }

    pub(crate) fn expect_colorspace(&self, expected: Colorspace) -> Result<()> {
        if self.colorspace != expected {
            return Err(Error::WrongColorspace {
                expected,
                found: self.colorspace,
            });
        }
        Ok(())
    }

    pub(crate) fn expect_same_shape(&self, other: &Self) -> Result<()> {
        if !self.same_shape(other) {
            return Err(Error::shape(self.shape_string(), other.shape_string()));
        }
        Ok(())
    }

    /// Mean over all samples.
    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }

    /// Rotate 90 degrees clockwise.
    pub fn rotate90(&self) -> Self {
        let (w, h, ch) = (self.width, self.height, self.channels());
        let mut data = vec![0.0; self.data.len()];
        for y in 0..h {
            for x in 0..w {
                // (x, y) -> (h - 1 - y, x) in a h-wide image
                let nx = h - 1 - y;
                let ny = x;
                for c in 0..ch {
                    data[(ny * h + nx) * ch + c] = self.data[(y * w + x) * ch + c];
                }
            }
        }
        Self {
            width: h,
            height: w,
            colorspace: self.colorspace,
            data,
        }
    }
}
