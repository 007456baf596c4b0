//! Agreement between metrics and human ratings.

use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simmetrics::cap_psnr;
use crate::tas::{icc3k, spearman, RatingsTable};

/// Report columns that are identifiers or flags, never correlated.
const NON_METRIC: [&str; 6] = ["pair_id", "item", "lang", "mode", "extractor", "error"];

/// Per-item metric values read from a report CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricTable {
    pub items: Vec<String>,
    /// `(name, values)` with one value per item.
    pub metrics: Vec<(String, Vec<f64>)>,
}

impl MetricTable {
    /// First column is the item id. Columns whose cells are all numeric
    /// become metrics; `recognized` is read as 0/1. PSNR is capped.
    pub fn from_csv_reader(reader: impl Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let header = rdr.headers()?.clone();
        let mut items = Vec::new();
        let mut cols: Vec<Vec<Option<f64>>> = vec![Vec::new(); header.len()];
        for rec in rdr.records() {
            let rec = rec?;
            items.push(rec[0].to_string());
            for (j, cell) in rec.iter().enumerate() {
                let v = match cell {
                    "true" => Some(1.0),
                    "false" => Some(0.0),
                    c => c.parse::<f64>().ok(),
                };
                cols[j].push(v);
            }
        }
        let metrics = header
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, name)| !NON_METRIC.contains(name))
            .filter_map(|(j, name)| {
                let vals: Option<Vec<f64>> = cols[j].iter().copied().collect();
                let vals = vals?;
                let vals = if name == "psnr" { vals.into_iter().map(cap_psnr).collect() } else { vals };
                Some((name.to_string(), vals))
            })
            .collect();
        Ok(Self { items, metrics })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv_reader(f)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationRow {
    /// `spearman` or `icc3k`.
    pub statistic: String,
    /// Metric name for Spearman, attribute name for ICC.
    pub target: String,
    pub value: Option<f64>,
    pub n: usize,
    /// Why `value` is missing.
    pub note: String,
}

/// Spearman rho of each metric against the per-item mean human score, then
/// ICC(3,k) per rated attribute and on the per-item attribute mean.
pub fn correlate(metrics: &MetricTable, ratings: &RatingsTable) -> Result<Vec<CorrelationRow>> {
    let items = ratings.items();
    if metrics.items != items {
        let first = metrics.items.iter().zip(items).position(|(a, b)| a != b);
        let msg = match first {
            Some(i) => format!("row {}: report has {:?}, ratings have {:?}", i + 1, metrics.items[i], items[i]),
            None => format!("report has {} items, ratings have {}", metrics.items.len(), items.len()),
        };
        return Err(Error::ItemMismatch(msg));
    }
    let combined = ratings.attribute_mean();
    let human = combined.item_means();
    let row = |statistic: &str, target: &str, r: Result<f64>, n| {
        let (value, note) = match r {
            Ok(v) => (Some(v), String::new()),
            Err(e) => (None, e.to_string()),
        };
        CorrelationRow {
            statistic: statistic.into(),
            target: target.into(),
            value,
            n,
            note,
        }
    };
    let mut out = Vec::new();
    for (name, vals) in &metrics.metrics {
        out.push(row("spearman", name, spearman(vals, &human), vals.len()));
    }
    for (attr, m) in &ratings.attributes {
        out.push(row("icc3k", attr, icc3k(m), m.n_items()));
    }
    if ratings.attributes.len() > 1 {
        out.push(row("icc3k", "mean", icc3k(&combined), combined.n_items()));
    }
    Ok(out)
}

pub fn write_correlations_csv(rows: &[CorrelationRow], out: impl std::io::Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["statistic", "target", "value", "n", "note"])?;
    for r in rows {
        w.write_record([
            r.statistic.clone(),
            r.target.clone(),
            r.value.map(|v| v.to_string()).unwrap_or_default(),
            r.n.to_string(),
            r.note.clone(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<correlations csv>", e))?;
    Ok(())
}

pub const CORRELATIONS_CSV: &str = "correlations.csv";
