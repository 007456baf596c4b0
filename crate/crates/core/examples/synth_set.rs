//! Write a small controlled-variation set with manifest and sidecar.
//!
//!     cargo run --release --example synth_set -- out_dir

use std::path::PathBuf;

use taseval::corpus::{validate_manifest, write_synth, Variation, VariationConfig};

fn main() -> taseval::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "synth_set".into()));
    for v in Variation::ALL {
        let cfg = VariationConfig::new(v, 4, 2024);
        let m = write_synth(&cfg, &out.join(v.tag()))?;
        let report = validate_manifest(&m);
        println!("{}: {} pairs, {} violations", v.tag(), m.len(), report.violations.len());
    }
    Ok(())
}
