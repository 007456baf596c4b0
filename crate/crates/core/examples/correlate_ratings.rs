//! Spearman and ICC(3,k) of a toy metric against three simulated raters.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use taseval::corpus::{correlate, write_correlations_csv, MetricTable};
use taseval::tas::RatingsTable;

fn main() -> taseval::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let noise = Normal::new(0.0, 0.6).unwrap();
    let mut report = String::from("pair_id,tas,ssim\n");
    let mut ratings = String::from("item,r1,r2,r3\n");
    for i in 0..12 {
        let quality = i as f64 / 11.0;
        let ssim = 0.5 + 0.4 * ((i * 7) % 12) as f64 / 11.0;
        report.push_str(&format!("p{i:02},{quality:.4},{ssim:.4}\n"));
        let r: Vec<String> = (0..3)
            .map(|_| format!("{:.2}", (1.0 + 4.0 * quality + noise.sample(&mut rng)).clamp(1.0, 5.0)))
            .collect();
        ratings.push_str(&format!("p{i:02},{}\n", r.join(",")));
    }
    let m = MetricTable::from_csv_reader(report.as_bytes())?;
    let r = RatingsTable::from_csv_reader(ratings.as_bytes())?;
    let rows = correlate(&m, &r)?;
    write_correlations_csv(&rows, std::io::stdout())
}
