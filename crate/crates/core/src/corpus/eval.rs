//! Batch evaluation over a manifest.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::manifest::{Lang, ManifestEntry, PairManifest};
use super::ocr::Transcripts;
use crate::error::{Error, Result};
use crate::imgcore::load_image;
use crate::simmetrics::{cap_psnr, PSNR_CAP_DB};
use crate::styleextract::{ExtractorMode, FontStyle, GlyphTemplate};
use crate::tas::{evaluate_pair, EvalMode, MetricRow, PairInputs, AGGREGATION_NOTE};

/// Environment variable bounding the worker count.
pub const THREADS_ENV: &str = "TASEVAL_THREADS";
pub const METRICS_CSV: &str = "metrics.csv";
pub const REPORT_JSON: &str = "report.json";
pub const REC_ACC_RULE: &str = "NFC, whitespace removed, no case folding";

#[derive(Clone, Debug)]
pub struct EvalOptions {
    pub mode: EvalMode,
    pub extractor: ExtractorMode,
    pub template: GlyphTemplate,
    /// Worker count; `None` reads [`THREADS_ENV`], then uses all cores.
    pub threads: Option<usize>,
}

impl EvalOptions {
    pub fn new(mode: EvalMode, extractor: ExtractorMode) -> Self {
        Self {
            mode,
            extractor,
            template: GlyphTemplate::default(),
            threads: None,
        }
    }
}

/// A scored pair or the reason it could not be scored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub pair_id: String,
    pub lang: Lang,
    pub metrics: Option<MetricRow>,
    pub error: Option<String>,
}

/// Means over the scored rows of one language, or of all rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub lang: String,
    pub scored: usize,
    pub errors: usize,
    pub ssim: f64,
    /// Mean of PSNR values capped at [`PSNR_CAP_DB`].
    pub psnr: f64,
    pub mse: f64,
    pub s_clr: f64,
    pub s_fnt: f64,
    pub s_bg: f64,
    pub tas: f64,
    /// Over rows with a transcript.
    pub ned: Option<f64>,
    pub rec_acc: Option<f64>,
    pub transcribed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub toolkit_version: String,
    pub mode: EvalMode,
    pub extractor: String,
    pub template: String,
    pub template_style: FontStyle,
    pub aggregation: String,
    pub psnr_cap_db: f64,
    pub rec_acc_rule: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub metadata: RunMetadata,
    /// Sorted by pair id.
    pub rows: Vec<ReportRow>,
    /// One entry per language in sorted order, then `all`.
    pub aggregates: Vec<Aggregate>,
}

fn extractor_label(mode: &ExtractorMode) -> String {
    match mode {
        ExtractorMode::Classical => "classical".into(),
        ExtractorMode::External(dir) => format!("external:{}", dir.display()),
    }
}

fn score_entry(m: &PairManifest, e: &ManifestEntry, ocr: Option<&Transcripts>, opts: &EvalOptions) -> Result<MetricRow> {
    let generated = load_image(&m.resolve(e.generated.as_ref().unwrap_or(&e.image_b)))?;
    let source = load_image(&m.resolve(&e.image_a))?;
    let gt = match opts.mode {
        EvalMode::GtFree => None,
        EvalMode::WithGt => {
            let path = match (&e.gt, &e.generated) {
                (Some(gt), _) => gt,
                (None, Some(_)) => &e.image_b,
                (None, None) => return Err(Error::MissingGroundTruth),
            };
            Some(load_image(&m.resolve(path))?)
        }
    };
    let inputs = PairInputs {
        pair_id: &e.pair_id,
        generated: &generated,
        source: &source,
        gt: gt.as_ref(),
        source_text: &e.text_a,
        target_text: &e.text_b,
        transcript: ocr.and_then(|t| t.scored(&e.pair_id)),
    };
    evaluate_pair(&inputs, &opts.template, opts.mode, &opts.extractor)
}

fn worker_count(opts: &EvalOptions) -> Option<usize> {
    opts.threads.or_else(|| std::env::var(THREADS_ENV).ok()?.trim().parse().ok()).filter(|&n| n > 0)
}

fn mean(values: impl Iterator<Item = f64>) -> (f64, usize) {
    let (mut sum, mut n) = (0.0, 0);
    for v in values {
        sum += v;
        n += 1;
    }
    (if n == 0 { f64::NAN } else { sum / n as f64 }, n)
}

/// Means over `rows` in their given order.
pub fn aggregate<'a>(label: &str, rows: impl Iterator<Item = &'a ReportRow> + Clone) -> Aggregate {
    let scored: Vec<&MetricRow> = rows.clone().filter_map(|r| r.metrics.as_ref()).collect();
    let errors = rows.filter(|r| r.metrics.is_none()).count();
    let m = |f: &dyn Fn(&MetricRow) -> f64| mean(scored.iter().map(|r| f(r))).0;
    let (ned, transcribed) = mean(scored.iter().filter_map(|r| r.ned));
    let (rec, _) = mean(scored.iter().filter_map(|r| r.recognized.map(|b| b as u8 as f64)));
    Aggregate {
        lang: label.to_string(),
        scored: scored.len(),
        errors,
        ssim: m(&|r| r.ssim),
        psnr: m(&|r| cap_psnr(r.psnr)),
        mse: m(&|r| r.mse),
        s_clr: m(&|r| r.tas.s_clr),
        s_fnt: m(&|r| r.tas.s_fnt),
        s_bg: m(&|r| r.tas.s_bg),
        tas: m(&|r| r.tas.tas),
        ned: (transcribed > 0).then_some(ned),
        rec_acc: (transcribed > 0).then_some(rec),
        transcribed,
    }
}

fn aggregates(rows: &[ReportRow]) -> Vec<Aggregate> {
    let mut langs: Vec<Lang> = rows.iter().map(|r| r.lang).collect();
    langs.sort();
    langs.dedup();
    let mut out: Vec<Aggregate> = langs
        .iter()
        .map(|&l| aggregate(l.tag(), rows.iter().filter(move |r| r.lang == l)))
        .collect();
    out.push(aggregate("all", rows.iter()));
    out
}

/// Score every entry. Per-pair failures become error rows.
pub fn evaluate_manifest(m: &PairManifest, ocr: Option<&Transcripts>, opts: &EvalOptions) -> Result<EvalReport> {
    let mut order: Vec<&ManifestEntry> = m.entries.iter().collect();
    order.sort_by(|a, b| a.pair_id.cmp(&b.pair_id));
    let score = |e: &&ManifestEntry| {
        let (metrics, error) = match score_entry(m, e, ocr, opts) {
            Ok(r) => (Some(r), None),
            Err(err) => (None, Some(err.to_string())),
        };
        ReportRow {
            pair_id: e.pair_id.clone(),
            lang: e.lang,
            metrics,
            error,
        }
    };
    let rows: Vec<ReportRow> = match worker_count(opts) {
        Some(1) => order.iter().map(score).collect(),
        threads => {
            let mut b = rayon::ThreadPoolBuilder::new();
            if let Some(n) = threads {
                b = b.num_threads(n);
            }
            let pool = b.build().map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
            pool.install(|| order.par_iter().map(score).collect())
        }
    };
    Ok(EvalReport {
        metadata: RunMetadata {
            toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
            mode: opts.mode,
            extractor: extractor_label(&opts.extractor),
            template: opts.template.name().to_string(),
            template_style: opts.template.style(),
            aggregation: AGGREGATION_NOTE.to_string(),
            psnr_cap_db: PSNR_CAP_DB,
            rec_acc_rule: REC_ACC_RULE.to_string(),
        },
        aggregates: aggregates(&rows),
        rows,
    })
}

pub const CSV_HEADER: [&str; 14] = [
    "pair_id", "lang", "mode", "extractor", "ssim", "psnr", "mse", "s_clr", "s_fnt", "s_bg", "tas", "ned", "recognized", "error",
];

fn fmt_opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

/// Per-pair CSV; floats use the shortest round-trip representation.
pub fn write_metrics_csv(report: &EvalReport, out: impl std::io::Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in &report.rows {
        let mut rec = vec![r.pair_id.clone(), r.lang.tag().to_string()];
        match &r.metrics {
            Some(m) => rec.extend([
                m.mode.tag().to_string(),
                format!("{:?}", m.tas.extractor).to_lowercase(),
                m.ssim.to_string(),
                m.psnr.to_string(),
                m.mse.to_string(),
                m.tas.s_clr.to_string(),
                m.tas.s_fnt.to_string(),
                m.tas.s_bg.to_string(),
                m.tas.tas.to_string(),
                fmt_opt(m.ned),
                fmt_opt(m.recognized),
                String::new(),
            ]),
            None => {
                rec.extend(std::iter::repeat_n(String::new(), 11));
                rec.push(r.error.clone().unwrap_or_default());
            }
        }
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| Error::io("<metrics csv>", e))?;
    Ok(())
}

fn fmt_prec(v: f64, prec: usize) -> String {
    if v.is_nan() {
        "-".into()
    } else {
        format!("{v:.prec$}")
    }
}

fn fmt4(v: f64) -> String {
    fmt_prec(v, 4)
}

/// Plain-text table: one line per language plus the overall line.
pub fn summary_table(report: &EvalReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<6} {:>6} {:>6} {:>7} {:>8} {:>9} {:>7} {:>7} {:>7} {:>7} {:>7} {:>7}",
        "lang", "pairs", "errors", "SSIM", "PSNR", "MSE", "s_clr", "s_fnt", "s_bg", "TAS", "RecAcc", "NED"
    );
    for a in &report.aggregates {
        let _ = writeln!(
            s,
            "{:<6} {:>6} {:>6} {:>7} {:>8} {:>9} {:>7} {:>7} {:>7} {:>7} {:>7} {:>7}",
            a.lang,
            a.scored,
            a.errors,
            fmt4(a.ssim),
            fmt_prec(a.psnr, 2),
            fmt_prec(a.mse, 6),
            fmt4(a.s_clr),
            fmt4(a.s_fnt),
            fmt4(a.s_bg),
            fmt4(a.tas),
            a.rec_acc.map_or("-".into(), fmt4),
            a.ned.map_or("-".into(), fmt4),
        );
    }
    s
}

/// Evaluate, then write `metrics.csv` and `report.json` into `out_dir`.
pub fn run_eval(m: &PairManifest, ocr: Option<&Transcripts>, opts: &EvalOptions, out_dir: &Path) -> Result<EvalReport> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let report = evaluate_manifest(m, ocr, opts)?;
    let mut csv_buf = Vec::new();
    write_metrics_csv(&report, &mut csv_buf)?;
    let csv_path = out_dir.join(METRICS_CSV);
    std::fs::write(&csv_path, csv_buf).map_err(|e| Error::io(&csv_path, e))?;
    let json_path = out_dir.join(REPORT_JSON);
    let json = serde_json::to_vec_pretty(&report)?;
    std::fs::write(&json_path, json).map_err(|e| Error::io(&json_path, e))?;
    Ok(report)
}
