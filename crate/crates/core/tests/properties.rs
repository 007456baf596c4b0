use proptest::prelude::*;
use taseval::colordiff::{ciede2000, Ciede2000Params};
use taseval::fsim::{fsim, FsimParams};
use taseval::imgcore::{lab_to_srgb_pixel, srgb_to_lab_pixel, LabPixel, RasterImage};
use taseval::simmetrics::{mse, ssim, SsimParams};
use taseval::styleextract::ExtractorKind;
use taseval::tas::{icc3k, ned, spearman, RatingsMatrix, TasReport};

fn gray(w: usize, h: usize, v: &[f64]) -> RasterImage {
    RasterImage::new(w, h, taseval::imgcore::Colorspace::Gray, v.to_vec()).unwrap()
}

fn lab() -> impl Strategy<Value = LabPixel> {
    (0.0..100.0f64, -100.0..100.0f64, -100.0..100.0f64).prop_map(|(l, a, b)| LabPixel::new(l, a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ciede2000_is_symmetric_and_zero_on_diagonal(p in lab(), q in lab()) {
        let k = Ciede2000Params::default();
        let d = ciede2000(p, q, k).unwrap();
        prop_assert!(d >= 0.0);
        prop_assert!((d - ciede2000(q, p, k).unwrap()).abs() < 1e-9);
        prop_assert_eq!(ciede2000(p, p, k).unwrap(), 0.0);
    }

    #[test]
    fn srgb_lab_round_trip(r in 0.0..1.0f64, g in 0.0..1.0f64, b in 0.0..1.0f64) {
        let back = lab_to_srgb_pixel(srgb_to_lab_pixel([r, g, b]));
        for (x, y) in back.iter().zip([r, g, b]) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn mse_and_ssim_are_symmetric(v in prop::collection::vec(0.0..1.0f64, 2 * 24 * 24)) {
        let (a, b) = (gray(24, 24, &v[..576]), gray(24, 24, &v[576..]));
        prop_assert_eq!(mse(&a, &b).unwrap(), mse(&b, &a).unwrap());
        let p = SsimParams::default();
        let s = ssim(&a, &b, &p).unwrap();
        prop_assert!((s - ssim(&b, &a, &p).unwrap()).abs() < 1e-12);
        prop_assert!(s <= 1.0 + 1e-12);
        prop_assert!((ssim(&a, &a, &p).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn spearman_ignores_monotone_transforms(x in prop::collection::vec(-10.0..10.0f64, 5..30), seed in 0u64..1000) {
        let y: Vec<f64> = x.iter().enumerate().map(|(i, v)| v.sin() + ((i as u64 * 31 + seed) % 7) as f64).collect();
        if let Ok(r) = spearman(&x, &y) {
            let x2: Vec<f64> = x.iter().map(|v| v.exp()).collect();
            let y2: Vec<f64> = y.iter().map(|v| 3.0 * v + 1.0).collect();
            prop_assert!((r - spearman(&x2, &y2).unwrap()).abs() < 1e-12);
            prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&r));
        }
    }

    #[test]
    fn identical_raters_agree_perfectly(scores in prop::collection::vec(1.0..5.0f64, 4..20), k in 2usize..5) {
        let rows: Vec<Vec<f64>> = scores.iter().map(|&s| vec![s; k]).collect();
        let m = RatingsMatrix::from_rows(&rows).unwrap();
        if let Ok(icc) = icc3k(&m) {
            prop_assert!((icc - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn ned_is_a_bounded_similarity(a in "[가-힣a-z ]{0,12}", b in "[가-힣a-z ]{0,12}") {
        let v = ned(&a, &b);
        prop_assert!((0.0..=1.0).contains(&v));
        prop_assert_eq!(v, ned(&b, &a));
        prop_assert_eq!(ned(&a, &a), 1.0);
    }

    #[test]
    fn tas_is_the_mean_of_its_components(c in 0.0..=1.0f64, f in 0.0..=1.0f64, g in 0.0..=1.0f64) {
        let r = TasReport::from_components(c, f, g, ExtractorKind::Classical).unwrap();
        prop_assert!((0.0..=1.0).contains(&r.tas));
        prop_assert!((r.tas - (c + f + g) / 3.0).abs() < 1e-15);
    }

    #[test]
    fn tas_rejects_out_of_range_components(c in 1.0001..5.0f64) {
        prop_assert!(TasReport::from_components(c, 0.5, 0.5, ExtractorKind::Classical).is_err());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn fsim_is_symmetric_and_bounded(v in prop::collection::vec(0.0..1.0f64, 2 * 32 * 32)) {
        let (a, b) = (gray(32, 32, &v[..1024]), gray(32, 32, &v[1024..]));
        let p = FsimParams::default();
        let s = fsim(&a, &b, &p).unwrap();
        prop_assert!((s - fsim(&b, &a, &p).unwrap()).abs() < 1e-12);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&s));
        prop_assert!((fsim(&a, &a, &p).unwrap() - 1.0).abs() < 1e-12);
    }
}
