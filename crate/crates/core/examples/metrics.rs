//! Full-reference metrics on a noisy copy of a gradient.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use taseval::colordiff::{ciede2000, Ciede2000Params};
use taseval::fsim::{fsim, FsimParams};
use taseval::imgcore::{LabPixel, RasterImage};
use taseval::simmetrics::{ms_ssim_default, mse, psnr, ssim, SsimParams};

fn main() -> taseval::Result<()> {
    let clean = RasterImage::gray_from_fn(192, 192, |x, y| ((x + 2 * y) % 96) as f64 / 95.0);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for sigma in [0.0, 0.02, 0.05, 0.1] {
        let noisy = RasterImage::gray_from_fn(192, 192, |x, y| {
            let v = clean.data()[y * 192 + x] + sigma * (rng.random::<f64>() - 0.5) * 2.0;
            v.clamp(0.0, 1.0)
        });
        println!(
            "noise {sigma:<4}  mse {:.5}  psnr {:>6.2}  ssim {:.4}  ms-ssim {:.4}  fsim {:.4}",
            mse(&clean, &noisy)?,
            psnr(&clean, &noisy)?,
            ssim(&clean, &noisy, &SsimParams::default())?,
            ms_ssim_default(&clean, &noisy)?,
            fsim(&clean, &noisy, &FsimParams::default())?,
        );
    }
    let a = LabPixel::new(50.0, 2.6772, -79.7751);
    let b = LabPixel::new(50.0, 0.0, -82.7485);
    println!("dE00 {:.4}", ciede2000(a, b, Ciede2000Params::default())?);
    Ok(())
}
