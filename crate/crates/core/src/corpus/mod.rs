//! Manifests, synthetic variation sets, batch evaluation and rating
//! agreement.

mod correlate;
mod eval;
mod manifest;
mod ocr;
mod synth;

pub use correlate::{correlate, write_correlations_csv, CorrelationRow, MetricTable, CORRELATIONS_CSV};
pub use eval::{
    aggregate, evaluate_manifest, run_eval, summary_table, write_metrics_csv, Aggregate, EvalOptions, EvalReport,
    ReportRow, RunMetadata, CSV_HEADER, METRICS_CSV, REC_ACC_RULE, REPORT_JSON, THREADS_ENV,
};
pub use manifest::{
    import_csv, import_csv_reader, parse_manifest, validate_manifest, Lang, ManifestEntry, PairManifest, SourceKind,
    Split, ValidationReport, Violation, ViolationKind, MIN_AREA,
};
pub use ocr::Transcripts;
pub use synth::{
    pair_id, render_background, synth_pair, synth_variations, write_synth, BackgroundKind, BackgroundSpec,
    PaletteEntry, SideTruth, SidecarEntry, SynthOutput, SynthPair, Variation, VariationConfig, DEFAULT_WORDS,
    MANIFEST_FILE, MIN_CONTRAST, MIN_FILL_DELTA_E, SIDECAR_FILE, TEXT_MARGIN,
};
