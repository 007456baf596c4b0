//! Synthesize a set, score it in GT-free mode and print the summary.

use taseval::corpus::{evaluate_manifest, parse_manifest, summary_table, write_synth, EvalOptions, Variation, VariationConfig, MANIFEST_FILE};
use taseval::styleextract::ExtractorMode;
use taseval::tas::EvalMode;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let mut cfg = VariationConfig::new(Variation::Fcb, 6, 5);
    cfg.canvas = [160, 64];
    write_synth(&cfg, dir.path())?;
    let m = parse_manifest(&dir.path().join(MANIFEST_FILE))?;
    let report = evaluate_manifest(&m, None, &EvalOptions::new(EvalMode::GtFree, ExtractorMode::Classical))?;
    for row in &report.rows {
        match (&row.metrics, &row.error) {
            (Some(r), _) => println!("{}  ssim {:.4}  tas {:.4}", row.pair_id, r.ssim, r.tas.tas),
            (None, Some(e)) => println!("{}  error {e}", row.pair_id),
            _ => {}
        }
    }
    print!("{}", summary_table(&report));
    Ok(())
}
