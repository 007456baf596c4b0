//! Rank correlation and rater agreement.

use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ranks starting at 1; tied values share the mean of their positions.
pub fn average_ranks(x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&i, &j| x[i].total_cmp(&x[j]));
    let mut ranks = vec![0.0; x.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && x[order[end]] == x[order[start]] {
            end += 1;
        }
        // positions start+1 ..= end
        let mean = (start + 1 + end) as f64 * 0.5;
        for &i in &order[start..end] {
            ranks[i] = mean;
        }
        start = end;
    }
    ranks
}

pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: x.len() });
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::ConstantInput);
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Spearman's rho: Pearson correlation of average ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 3 {
        return Err(Error::TooFewSamples { needed: 3, got: x.len() });
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput);
    }
    pearson(&average_ranks(x), &average_ranks(y))
}

/// Items x raters score table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatingsMatrix {
    items: Vec<String>,
    raters: Vec<String>,
    /// Row-major, one row per item.
    scores: Vec<f64>,
    /// Free-form description of the rating scale.
    pub scale: String,
}

pub const DEFAULT_SCALE: &str = "1-10";

impl RatingsMatrix {
    pub fn new(items: Vec<String>, raters: Vec<String>, scores: Vec<f64>) -> Result<Self> {
        if raters.len() < 2 {
            return Err(Error::TooFewSamples {
                needed: 2,
                got: raters.len(),
            });
        }
        if scores.len() != items.len() * raters.len() {
            return Err(Error::BadBufferLength {
                expected: items.len() * raters.len(),
                got: scores.len(),
            });
        }
        if scores.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteInput);
        }
        Ok(Self {
            items,
            raters,
            scores,
            scale: DEFAULT_SCALE.to_string(),
        })
    }

    /// Matrix with generated item and rater names.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let k = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != k) {
            return Err(Error::LengthMismatch(k, bad.len()));
        }
        Self::new(
            (0..rows.len()).map(|i| format!("item{i}")).collect(),
            (0..k).map(|j| format!("rater{j}")).collect(),
            rows.concat(),
        )
    }

    pub fn n_items(&self) -> usize {
        self.items.len()
    }

    pub fn n_raters(&self) -> usize {
        self.raters.len()
    }

    pub fn items(&self) -> &[String] {
        &self.items
    }

    pub fn raters(&self) -> &[String] {
        &self.raters
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let k = self.raters.len();
        &self.scores[i * k..(i + 1) * k]
    }

    pub fn item_means(&self) -> Vec<f64> {
        (0..self.n_items())
            .map(|i| self.row(i).iter().sum::<f64>() / self.n_raters() as f64)
            .collect()
    }
}

/// Ratings file contents: one matrix per rated attribute, keyed by name.
/// A file without an attribute column yields a single `overall` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct RatingsTable {
    pub attributes: Vec<(String, RatingsMatrix)>,
}

pub const OVERALL: &str = "overall";

impl RatingsTable {
    /// CSV with header `item[,attribute],rater1,rater2,...`.
    pub fn from_csv_reader(reader: impl Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).flexible(true).from_reader(reader);
        let header = rdr.headers()?.clone();
        let has_attr = header.get(1).is_some_and(|h| h.eq_ignore_ascii_case("attribute"));
        let first_rater = if has_attr { 2 } else { 1 };
        let raters: Vec<String> = header.iter().skip(first_rater).map(str::to_string).collect();
        let mut attrs: Vec<(String, Vec<String>, Vec<f64>)> = Vec::new();
        for (n, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let line = n + 2;
            if rec.len() != header.len() {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected {} fields, got {}", header.len(), rec.len()),
                });
            }
            let item = rec[0].to_string();
            let attr = if has_attr { rec[1].to_string() } else { OVERALL.to_string() };
            let mut scores = Vec::with_capacity(raters.len());
            for f in rec.iter().skip(first_rater) {
                scores.push(f.parse::<f64>().map_err(|e| Error::Parse {
                    line,
                    msg: format!("score {f:?}: {e}"),
                })?);
            }
            let slot = match attrs.iter().position(|(a, _, _)| *a == attr) {
                Some(p) => p,
                None => {
                    attrs.push((attr, Vec::new(), Vec::new()));
                    attrs.len() - 1
                }
            };
            attrs[slot].1.push(item);
            attrs[slot].2.extend(scores);
        }
        if attrs.is_empty() {
            return Err(Error::EmptyBatch);
        }
        let attributes = attrs
            .into_iter()
            .map(|(a, items, scores)| Ok((a, RatingsMatrix::new(items, raters.clone(), scores)?)))
            .collect::<Result<Vec<_>>>()?;
        let items = attributes[0].1.items();
        if let Some((a, m)) = attributes.iter().find(|(_, m)| m.items() != items) {
            return Err(Error::ItemMismatch(format!("attribute {a:?} lists {} items in a different order", m.n_items())));
        }
        Ok(Self { attributes })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv_reader(f)
    }

    pub fn items(&self) -> &[String] {
        self.attributes[0].1.items()
    }

    /// Per item and rater, the mean over attributes.
    pub fn attribute_mean(&self) -> RatingsMatrix {
        let first = &self.attributes[0].1;
        let n = self.attributes.len() as f64;
        let scores = (0..first.scores.len())
            .map(|i| self.attributes.iter().map(|(_, m)| m.scores[i]).sum::<f64>() / n)
            .collect();
        RatingsMatrix {
            items: first.items.clone(),
            raters: first.raters.clone(),
            scores,
            scale: first.scale.clone(),
        }
    }
}

/// Two-way ANOVA mean squares of an items x raters table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnovaTable {
    pub ms_rows: f64,
    pub ms_cols: f64,
    pub ms_error: f64,
}

pub fn anova(m: &RatingsMatrix) -> Result<AnovaTable> {
    let (n, k) = (m.n_items(), m.n_raters());
    if n < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: n });
    }
    let grand = m.scores.iter().sum::<f64>() / (n * k) as f64;
    let row_means = m.item_means();
    let col_means: Vec<f64> = (0..k)
        .map(|j| (0..n).map(|i| m.row(i)[j]).sum::<f64>() / n as f64)
        .collect();
    let ss_rows = k as f64 * row_means.iter().map(|r| (r - grand).powi(2)).sum::<f64>();
    let ss_cols = n as f64 * col_means.iter().map(|c| (c - grand).powi(2)).sum::<f64>();
    let mut ss_err = 0.0;
    for i in 0..n {
        for j in 0..k {
            let r = m.row(i)[j] - row_means[i] - col_means[j] + grand;
            ss_err += r * r;
        }
    }
    Ok(AnovaTable {
        ms_rows: ss_rows / (n - 1) as f64,
        ms_cols: ss_cols / (k - 1) as f64,
        ms_error: ss_err / ((n - 1) * (k - 1)) as f64,
    })
}

/// ICC(3,k): consistency of the mean of k fixed raters.
pub fn icc3k(m: &RatingsMatrix) -> Result<f64> {
    let a = anova(m)?;
    let scale = m.scores.iter().map(|v| v * v).sum::<f64>() / m.scores.len() as f64;
    if a.ms_rows <= 1e-14 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::DegenerateVariance);
    }
    Ok((a.ms_rows - a.ms_error) / a.ms_rows)
}
