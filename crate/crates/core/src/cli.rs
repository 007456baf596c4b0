//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 I/O error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::corpus::{
    correlate, parse_manifest, run_eval, summary_table, validate_manifest, write_correlations_csv, write_synth,
    EvalOptions, MetricTable, Transcripts, VariationConfig, CORRELATIONS_CSV,
};
use crate::error::{Error, Result};
use crate::imgcore::load_image;
use crate::styleextract::{ExtractorMode, GlyphTemplate};
use crate::tas::{tas_with_texts, EvalMode, PairTexts, RatingsTable};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "taseval", version, about = "Scene-text-editing evaluation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Gt,
    Gtfree,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check manifest entries against the dataset filters.
    Validate { manifest: PathBuf },
    /// Generate a controlled-variation pair set from a JSON config.
    Synth {
        config: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Score every pair of a manifest.
    Eval {
        manifest: PathBuf,
        #[arg(long, value_enum, default_value = "gt")]
        mode: ModeArg,
        /// `classical` or `external:<dir>`.
        #[arg(long, default_value = "classical")]
        extractor: String,
        /// Tab-separated OCR transcripts.
        #[arg(long)]
        ocr: Option<PathBuf>,
        /// Built-in glyph template used for re-rendering.
        #[arg(long, default_value = "regular")]
        template: String,
        /// Worker count; overrides TASEVAL_THREADS.
        #[arg(long)]
        threads: Option<usize>,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Spearman and ICC(3,k) of a metrics CSV against human ratings.
    Correlate {
        report: PathBuf,
        ratings: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Score a single pair and print the report as JSON.
    Tas {
        image_a: PathBuf,
        image_b: PathBuf,
        #[arg(long)]
        text_b: String,
        /// Text shown in image A, if known.
        #[arg(long)]
        text_a: Option<String>,
        #[arg(long, default_value = "classical")]
        extractor: String,
        #[arg(long, default_value = "regular")]
        template: String,
        /// Pair id for external style files.
        #[arg(long)]
        pair_id: Option<String>,
    },
}

fn parse_extractor(s: &str) -> Result<ExtractorMode> {
    match s.split_once(':') {
        None if s == "classical" => Ok(ExtractorMode::Classical),
        Some(("external", dir)) if !dir.is_empty() => Ok(ExtractorMode::External(dir.into())),
        _ => Err(Error::InvalidConfig(format!(
            "extractor must be `classical` or `external:<dir>`, got {s:?}"
        ))),
    }
}

fn template(name: &str) -> Result<GlyphTemplate> {
    GlyphTemplate::builtin(name).ok_or_else(|| {
        Error::InvalidConfig(format!(
            "unknown template {name:?}; built-in templates are {:?}",
            GlyphTemplate::builtin_names()
        ))
    })
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidConfig(_) => EXIT_USAGE,
        e if e.is_io() => EXIT_IO,
        _ => EXIT_DATA,
    }
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    let w = |out: &mut dyn Write, s: &str| out.write_all(s.as_bytes()).map_err(|e| Error::io("<stdout>", e));
    match cmd {
        Command::Validate { manifest } => {
            let m = parse_manifest(&manifest)?;
            let report = validate_manifest(&m);
            w(out, &serde_json::to_string_pretty(&report)?)?;
            w(out, "\n")?;
            Ok(if report.is_clean() { EXIT_OK } else { EXIT_DATA })
        }
        Command::Synth { config, out: dir } => {
            let text = std::fs::read_to_string(&config).map_err(|e| Error::io(&config, e))?;
            let cfg: VariationConfig = serde_json::from_str(&text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
            let m = write_synth(&cfg, &dir)?;
            w(out, &format!("wrote {} pairs to {}\n", m.len(), dir.display()))?;
            Ok(EXIT_OK)
        }
        Command::Eval {
            manifest,
            mode,
            extractor,
            ocr,
            template: tpl,
            threads,
            out: dir,
        } => {
            let mode = match mode {
                ModeArg::Gt => EvalMode::WithGt,
                ModeArg::Gtfree => EvalMode::GtFree,
            };
            let mut opts = EvalOptions::new(mode, parse_extractor(&extractor)?);
            opts.template = template(&tpl)?;
            opts.threads = threads;
            let m = parse_manifest(&manifest)?;
            let ocr = ocr.map(|p| Transcripts::load(&p)).transpose()?;
            let report = run_eval(&m, ocr.as_ref(), &opts, &dir)?;
            w(out, &summary_table(&report))?;
            Ok(EXIT_OK)
        }
        Command::Correlate { report, ratings, out: dir } => {
            let metrics = MetricTable::load(&report)?;
            let ratings = RatingsTable::load(&ratings)?;
            let rows = correlate(&metrics, &ratings)?;
            let mut buf = Vec::new();
            write_correlations_csv(&rows, &mut buf)?;
            std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
            let path = dir.join(CORRELATIONS_CSV);
            std::fs::write(&path, &buf).map_err(|e| Error::io(&path, e))?;
            w(out, &String::from_utf8_lossy(&buf))?;
            Ok(EXIT_OK)
        }
        Command::Tas {
            image_a,
            image_b,
            text_b,
            text_a,
            extractor,
            template: tpl,
            pair_id,
        } => {
            let mode = parse_extractor(&extractor)?;
            let tpl = template(&tpl)?;
            let a = load_image(&image_a)?;
            let b = load_image(&image_b)?;
            let texts = PairTexts {
                source_a: text_a.as_deref(),
                source_b: Some(&text_b),
                target: &text_b,
            };
            let r = tas_with_texts(&a, &b, &texts, &tpl, &mode, pair_id.as_deref())?;
            w(out, &serde_json::to_string_pretty(&r)?)?;
            w(out, "\n")?;
            Ok(EXIT_OK)
        }
    }
}

/// Parse `args` (program name first), run, and return the exit code.
/// Output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    run(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
