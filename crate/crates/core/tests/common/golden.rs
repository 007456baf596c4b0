//! Library-versus-oracle comparisons, shared by the golden tests and the
//! acceptance report.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use taseval::colordiff::{ciede2000, Ciede2000Params};
use taseval::fsim::{fsim, gradient_magnitude, phase_congruency, FsimParams};
use taseval::imgcore::{srgb_to_lab_pixel, LabPixel, RasterImage};
use taseval::simmetrics::{frechet_distance, ms_ssim_default, ssim, FeatureSet, SsimParams};
use taseval::styleextract::{render_text_gray, GlyphTemplate};
use taseval::tas::{icc3k, ned, spearman, RatingsMatrix};

use super::oracle;

/// One comparison: largest deviation seen and the tolerance it must meet.
#[derive(Debug)]
pub struct Check {
    pub name: &'static str,
    pub err: f64,
    pub tol: f64,
}

impl Check {
    pub fn pass(&self) -> bool {
        self.err <= self.tol
    }
}

fn check(name: &'static str, pairs: impl IntoIterator<Item = (f64, f64)>, tol: f64) -> Check {
    let err = pairs.into_iter().map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Check { name, err, tol }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn noise(w: usize, h: usize, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    (0..w * h).map(|_| r.random::<f64>()).collect()
}

pub fn gray(w: usize, h: usize, data: Vec<f64>) -> RasterImage {
    RasterImage::gray_from_fn(w, h, |x, y| data[y * w + x])
}

/// Sharma, Wu and Dalal (2005) test pairs with their published ΔE00.
pub const SHARMA: [([f64; 3], [f64; 3], f64); 34] = [
    ([50.0, 2.6772, -79.7751], [50.0, 0.0, -82.7485], 2.0425),
    ([50.0, 3.1571, -77.2803], [50.0, 0.0, -82.7485], 2.8615),
    ([50.0, 2.8361, -74.0200], [50.0, 0.0, -82.7485], 3.4412),
    ([50.0, -1.3802, -84.2814], [50.0, 0.0, -82.7485], 1.0000),
    ([50.0, -1.1848, -84.8006], [50.0, 0.0, -82.7485], 1.0000),
    ([50.0, -0.9009, -85.5211], [50.0, 0.0, -82.7485], 1.0000),
    ([50.0, 0.0, 0.0], [50.0, -1.0, 2.0], 2.3669),
    ([50.0, -1.0, 2.0], [50.0, 0.0, 0.0], 2.3669),
    ([50.0, 2.4900, -0.0010], [50.0, -2.4900, 0.0009], 7.1792),
    ([50.0, 2.4900, -0.0010], [50.0, -2.4900, 0.0010], 7.1792),
    ([50.0, 2.4900, -0.0010], [50.0, -2.4900, 0.0011], 7.2195),
    ([50.0, 2.4900, -0.0010], [50.0, -2.4900, 0.0012], 7.2195),
    ([50.0, -0.0010, 2.4900], [50.0, 0.0009, -2.4900], 4.8045),
    ([50.0, -0.0010, 2.4900], [50.0, 0.0010, -2.4900], 4.8045),
    ([50.0, -0.0010, 2.4900], [50.0, 0.0011, -2.4900], 4.7461),
    ([50.0, 2.5, 0.0], [50.0, 0.0, -2.5], 4.3065),
    ([50.0, 2.5, 0.0], [73.0, 25.0, -18.0], 27.1492),
    ([50.0, 2.5, 0.0], [61.0, -5.0, 29.0], 22.8977),
    ([50.0, 2.5, 0.0], [56.0, -27.0, -3.0], 31.9030),
    ([50.0, 2.5, 0.0], [58.0, 24.0, 15.0], 19.4535),
    ([50.0, 2.5, 0.0], [50.0, 3.1736, 0.5854], 1.0000),
    ([50.0, 2.5, 0.0], [50.0, 3.2972, 0.0], 1.0000),
    ([50.0, 2.5, 0.0], [50.0, 1.8634, 0.5757], 1.0000),
    ([50.0, 2.5, 0.0], [50.0, 3.2592, 0.3350], 1.0000),
    ([60.2574, -34.0099, 36.2677], [60.4626, -34.1751, 39.4387], 1.2644),
    ([63.0109, -31.0961, -5.8663], [62.8187, -29.7946, -4.0864], 1.2630),
    ([61.2901, 3.7196, -5.3901], [61.4292, 2.2480, -4.9620], 1.8731),
    ([35.0831, -44.1164, 3.7933], [35.0232, -40.0716, 1.5901], 1.8645),
    ([22.7233, 20.0904, -46.6940], [23.0331, 14.9730, -42.5619], 2.0373),
    ([36.4612, 47.8580, 18.3852], [36.2715, 50.5065, 21.2231], 1.4146),
    ([90.8027, -2.0831, 1.4410], [91.1528, -1.6435, 0.0447], 1.4441),
    ([90.9257, -0.5406, -0.9208], [88.6381, -0.8985, -0.7239], 1.5381),
    ([6.7747, -0.2908, -2.4247], [5.8714, -0.0985, -2.2286], 0.6377),
    ([2.0776, 0.0795, -1.1350], [0.9033, -0.0636, -0.5514], 0.9082),
];

fn lab(v: [f64; 3]) -> LabPixel {
    LabPixel::from_array(v)
}

fn de(p: [f64; 3], q: [f64; 3]) -> f64 {
    ciede2000(lab(p), lab(q), Ciede2000Params::default()).unwrap()
}

pub fn ciede2000_checks() -> Vec<Check> {
    let published = check("ciede2000 vs published pairs", SHARMA.iter().map(|(p, q, d)| (de(*p, *q), *d)), 5e-5);
    let published_oracle = check(
        "ciede2000 oracle vs published pairs",
        SHARMA.iter().map(|(p, q, d)| (oracle::ciede2000(*p, *q), *d)),
        5e-5,
    );
    let mut r = rng(2000);
    let random: Vec<(f64, f64)> = (0..2000)
        .map(|_| {
            let p = [r.random_range(0.0..100.0), r.random_range(-100.0..100.0), r.random_range(-100.0..100.0)];
            let q = [r.random_range(0.0..100.0), r.random_range(-100.0..100.0), r.random_range(-100.0..100.0)];
            (de(p, q), oracle::ciede2000(p, q))
        })
        .collect();
    let random = check("ciede2000 vs oracle, random Lab", random, 1e-9);
    let conv = check(
        "sRGB to Lab vs oracle",
        (0..500).flat_map(|i| {
            let mut r = rng(7000 + i);
            let rgb = [r.random::<f64>(), r.random::<f64>(), r.random::<f64>()];
            let a = srgb_to_lab_pixel(rgb).to_array();
            let b = oracle::srgb_to_lab(rgb);
            (0..3).map(move |k| (a[k], b[k]))
        }),
        1e-9,
    );
    vec![published, published_oracle, random, conv]
}

pub fn ssim_checks() -> Vec<Check> {
    let (w, h) = (32, 32);
    let x = noise(w, h, 11);
    let y: Vec<f64> = x.iter().zip(noise(w, h, 12)).map(|(a, n)| (0.7 * a + 0.3 * n).clamp(0.0, 1.0)).collect();
    let lib = ssim(&gray(w, h, x.clone()), &gray(w, h, y.clone()), &SsimParams::default()).unwrap();
    let s = check("ssim 32x32 vs windowed oracle", [(lib, oracle::ssim(&x, &y, w, h))], 1e-6);

    let (w, h) = (176, 176);
    let x: Vec<f64> = (0..w * h)
        .map(|i| {
            let (px, py) = ((i % w) as f64, (i / w) as f64);
            0.5 + 0.3 * (px / 7.0).sin() * (py / 11.0).cos()
        })
        .zip(noise(w, h, 21))
        .map(|(v, n)| (v + 0.1 * (n - 0.5)).clamp(0.0, 1.0))
        .collect();
    let y: Vec<f64> = x.iter().zip(noise(w, h, 22)).map(|(a, n)| (a + 0.15 * (n - 0.5)).clamp(0.0, 1.0)).collect();
    let lib = ms_ssim_default(&gray(w, h, x.clone()), &gray(w, h, y.clone())).unwrap();
    let m = check("ms-ssim 176x176 vs multi-scale oracle", [(lib, oracle::ms_ssim(&x, &y, w, h))], 1e-5);
    vec![s, m]
}

pub fn fsim_checks() -> Vec<Check> {
    // bars for phase congruency
    let (w, h) = (32, 32);
    let bars: Vec<f64> = (0..w * h).map(|i| if (i % w) / 4 % 2 == 0 { 0.2 } else { 0.8 }).collect();
    let lib = phase_congruency(&gray(w, h, bars.clone()), &FsimParams::default()).unwrap();
    let ora = oracle::phase_congruency(&bars, w, h, oracle::Filtering::Spatial);
    let pc = check("phase congruency 32x32 bars vs spatial convolution", lib.data().iter().copied().zip(ora), 1e-4);

    let ramp: Vec<f64> = (0..25).map(|i| (i / 5) as f64 * 3.0 / 255.0).collect();
    let g = gradient_magnitude(&gray(5, 5, ramp.clone())).unwrap();
    let og = oracle::gradient(&ramp, 5, 5);
    let mut pairs: Vec<(f64, f64)> = g.data().iter().copied().zip(og).collect();
    // slope 3 per row: interior magnitude is 2 * 3
    pairs.push((g.data()[2 * 5 + 2], 6.0));
    let grad = check("Scharr magnitude 5x5 ramp vs hand convolution", pairs, 1e-9);

    let tpl_a = GlyphTemplate::builtin("regular").unwrap();
    let tpl_b = GlyphTemplate::builtin("bold").unwrap();
    let a = render_text_gray("가", &tpl_a, 64, 64).unwrap();
    let b = render_text_gray("가", &tpl_b, 64, 64).unwrap();
    let lib = fsim(&a, &b, &FsimParams::default()).unwrap();
    let ora = oracle::fsim(a.data(), b.data(), 64, 64);
    let f = check("fsim 64x64 glyph, two fonts, vs oracle", [(lib, ora)], 1e-4);
    vec![pc, grad, f]
}

pub fn frechet_checks() -> Vec<Check> {
    let mut r = rng(31);
    let mut sample = |n: usize, m: [f64; 2], l: [[f64; 2]; 2]| -> Vec<[f64; 2]> {
        (0..n)
            .map(|_| {
                let z: [f64; 2] = [
                    rand_distr::Distribution::sample(&rand_distr::StandardNormal, &mut r),
                    rand_distr::Distribution::sample(&rand_distr::StandardNormal, &mut r),
                ];
                [m[0] + l[0][0] * z[0], m[1] + l[1][0] * z[0] + l[1][1] * z[1]]
            })
            .collect()
    };
    // Cholesky factors of [[4, 1.2], [1.2, 1]] and [[1, -0.5], [-0.5, 2]]
    let la = [[2.0, 0.0], [0.6, 0.8]];
    let lb = [[1.0, 0.0], [-0.5, (1.75f64).sqrt()]];
    let a = sample(20_000, [0.0, 0.0], la);
    let b = sample(20_000, [1.0, -2.0], lb);
    let fs = |v: &[[f64; 2]]| FeatureSet::from_rows(&v.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap();
    let lib = frechet_distance(&fs(&a), &fs(&b)).unwrap();
    let (ma, ca) = oracle::mean_cov2(&a);
    let (mb, cb) = oracle::mean_cov2(&b);
    let exact = check("frechet vs closed form on sample moments", [(lib, oracle::frechet_2d(ma, ca, mb, cb))], 1e-9);
    let analytic = oracle::frechet_2d([0.0, 0.0], [[4.0, 1.2], [1.2, 1.0]], [1.0, -2.0], [[1.0, -0.5], [-0.5, 2.0]]);
    // sampling tolerance: spread of the estimate over independent draws is
    // well under 0.15 at this sample size
    let sampled = check("frechet vs analytic Gaussian value", [(lib, analytic)], 0.15);
    vec![exact, sampled]
}

pub fn stats_checks() -> Vec<Check> {
    let mut r = rng(41);
    let mut sp = Vec::new();
    for _ in 0..50 {
        let n = r.random_range(3..40);
        // coarse values force ties
        let x: Vec<f64> = (0..n).map(|_| r.random_range(0..6) as f64).collect();
        let y: Vec<f64> = (0..n).map(|_| r.random_range(0..6) as f64 + r.random::<f64>().round()).collect();
        if let Ok(v) = spearman(&x, &y) {
            sp.push((v, oracle::spearman(&x, &y)));
        }
    }
    let s = check("spearman with ties vs brute-force ranks", sp, 1e-12);

    let mut ic = Vec::new();
    for seed in 0..30 {
        let mut r = rng(500 + seed);
        let n = r.random_range(3..20);
        let k = r.random_range(2..6);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                let base = r.random_range(1.0..10.0);
                (0..k).map(|_| base + r.random_range(-2.0..2.0)).collect()
            })
            .collect();
        let lib = icc3k(&RatingsMatrix::from_rows(&rows).unwrap()).unwrap();
        ic.push((lib, oracle::icc3k(&rows)));
    }
    let hand = vec![vec![1.0, 2.0, 3.0], vec![2.0, 2.0, 4.0], vec![3.0, 5.0, 4.0]];
    ic.push((icc3k(&RatingsMatrix::from_rows(&hand).unwrap()).unwrap(), 45.0 / 56.0));
    let i = check("icc(3,k) vs sums-of-squares oracle", ic, 1e-9);

    let words = ["abc", "abd", "", "하늘색", "하늘", "kitten", "sitting", "مرحبا", "مرحب", "flaw", "lawn"];
    let mut nd = Vec::new();
    for a in words {
        for b in words {
            nd.push((ned(a, b), oracle::ned(a, b)));
        }
    }
    nd.push((ned("abc", "abd"), 1.0 - 1.0 / 3.0));
    let t = check("ned vs dynamic-programming oracle", nd, 1e-12);
    vec![s, i, t]
}

/// Oracle outputs recorded when the oracles were written.
pub fn frozen_checks() -> Vec<Check> {
    let red = srgb_to_lab_pixel([1.0, 0.0, 0.0]).to_array();
    let red = check(
        "sRGB red to Lab vs recorded oracle value",
        red.into_iter().zip([53.24079414130722, 80.09245959641109, 67.20319651585301]),
        1e-9,
    );
    let first = check(
        "first published pair vs recorded oracle value",
        [(de(SHARMA[0].0, SHARMA[0].1), 2.042459680156571)],
        1e-4,
    );
    let a = render_text_gray("가", &GlyphTemplate::builtin("regular").unwrap(), 64, 64).unwrap();
    let b = render_text_gray("가", &GlyphTemplate::builtin("bold").unwrap(), 64, 64).unwrap();
    let f = check(
        "fsim glyph pair vs recorded oracle value",
        [(fsim(&a, &b, &FsimParams::default()).unwrap(), 0.6701164854872118)],
        1e-4,
    );
    vec![red, first, f]
}

pub fn all_checks() -> Vec<Check> {
    let mut v = ciede2000_checks();
    v.extend(ssim_checks());
    v.extend(fsim_checks());
    v.extend(frechet_checks());
    v.extend(stats_checks());
    v.extend(frozen_checks());
    v
}
