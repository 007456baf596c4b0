//! PNG / baseline JPEG decode and PNG encode.

use std::io::Cursor;
use std::path::Path;

use image::{ImageFormat, RgbImage, GrayImage};

use super::{Colorspace, RasterImage};
use crate::error::{Error, Result};

/// Decode PNG or JPEG bytes into an sRGB image in [0, 1].
///
/// Transparent pixels are composited over white.
pub fn decode_image(bytes: &[u8]) -> Result<RasterImage> {
    let format = image::guess_format(bytes).map_err(|e| {
        if bytes.len() < 8 {
            Error::MalformedImage(format!("{} bytes is too short to be an image", bytes.len()))
        } else {
            Error::UnsupportedFormat(e.to_string())
        }
    })?;
    if !matches!(format, ImageFormat::Png | ImageFormat::Jpeg) {
        return Err(Error::UnsupportedFormat(format!("{format:?}")));
    }
    let dynimg = image::load_from_memory_with_format(bytes, format)
        .map_err(|e| Error::MalformedImage(e.to_string()))?;
    let rgba = dynimg.to_rgba8();
    let (w, h) = rgba.dimensions();
    let mut data = Vec::with_capacity(w as usize * h as usize * 3);
    for p in rgba.pixels() {
        let alpha = p[3] as f64 / 255.0;
        for c in 0..3 {
            let v = p[c] as f64 / 255.0;
            data.push(if p[3] == 255 { v } else { v * alpha + (1.0 - alpha) });
        }
    }
    RasterImage::new(w as usize, h as usize, Colorspace::Srgb, data)
}

pub fn load_image(path: &Path) -> Result<RasterImage> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_image(&bytes)
}

#[inline]
fn quantize(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

/// Encode as 8-bit PNG. Gray images become single-channel PNGs; Lab and
/// linear images are rejected.
pub fn encode_png(img: &RasterImage) -> Result<Vec<u8>> {
    let (w, h) = (img.width() as u32, img.height() as u32);
    let mut out = Cursor::new(Vec::new());
    match img.colorspace() {
        Colorspace::Gray => {
            let buf = GrayImage::from_raw(w, h, img.data().iter().map(|&v| quantize(v)).collect())
                .expect("buffer size matches dimensions");
            buf.write_to(&mut out, ImageFormat::Png)
        }
        Colorspace::Srgb => {
            let buf = RgbImage::from_raw(w, h, img.data().iter().map(|&v| quantize(v)).collect())
                .expect("buffer size matches dimensions");
            buf.write_to(&mut out, ImageFormat::Png)
        }
        other => {
            return Err(Error::WrongColorspace {
                expected: Colorspace::Srgb,
                found: other,
            })
        }
    }
    .map_err(|e| Error::MalformedImage(e.to_string()))?;
    Ok(out.into_inner())
}

pub fn save_png(img: &RasterImage, path: &Path) -> Result<()> {
    let bytes = encode_png(img)?;
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Decoded gray PNGs come back as sRGB triples; collapse them to one channel.
pub(crate) fn to_single_channel(img: &RasterImage) -> RasterImage {
    if img.channels() == 1 {
        return img.clone();
    }
    let data = img.data().chunks_exact(3).map(|p| (p[0] + p[1] + p[2]) / 3.0).collect();
    RasterImage::new(img.width(), img.height(), Colorspace::Gray, data).expect("same pixel count")
}
