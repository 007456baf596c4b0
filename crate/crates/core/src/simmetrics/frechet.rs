use std::io::Read;
use std::path::Path;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"FSET";

/// Eigenvalues below this fraction of the largest are treated as zero.
const EIGEN_CLAMP: f64 = 1e-10;

/// `n` samples of `d`-dimensional features, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureSet {
    n: usize,
    d: usize,
    rows: Vec<f64>,
}

impl FeatureSet {
    pub fn new(n: usize, d: usize, rows: Vec<f64>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidFeatureSet("feature dimension is zero".into()));
        }
        if rows.len() != n * d {
            return Err(Error::InvalidFeatureSet(format!(
                "{} values for {n}x{d} features",
                rows.len()
            )));
        }
        if n < 2 {
            return Err(Error::DegenerateCovariance(format!("{n} samples; covariance needs at least 2")));
        }
        if rows.iter().any(|v| !v.is_finite()) {
            return Err(Error::DegenerateCovariance("non-finite feature value".into()));
        }
        Ok(Self { n, d, rows })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != d) {
            return Err(Error::InvalidFeatureSet(format!("ragged rows: {} vs {d}", bad.len())));
        }
        Self::new(rows.len(), d, rows.concat())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i * self.d..(i + 1) * self.d]
    }

    pub fn mean(&self) -> DVector<f64> {
        let mut mu = DVector::zeros(self.d);
        for i in 0..self.n {
            for (j, v) in self.row(i).iter().enumerate() {
                mu[j] += v;
            }
        }
        mu / self.n as f64
    }

    /// Unbiased sample covariance.
    pub fn covariance(&self) -> DMatrix<f64> {
        let mu = self.mean();
        let mut cov = DMatrix::zeros(self.d, self.d);
        for i in 0..self.n {
            let r = self.row(i);
            for a in 0..self.d {
                let da = r[a] - mu[a];
                for b in a..self.d {
                    cov[(a, b)] += da * (r[b] - mu[b]);
                }
            }
        }
        for a in 0..self.d {
            for b in a..self.d {
                let v = cov[(a, b)] / (self.n - 1) as f64;
                cov[(a, b)] = v;
                cov[(b, a)] = v;
            }
        }
        cov
    }

    /// Little-endian `FSET` file: magic, `u32 n`, `u32 d`, then `n * d` f64.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(12 + self.rows.len() * 8);
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&(self.n as u32).to_le_bytes());
        out.extend_from_slice(&(self.d as u32).to_le_bytes());
        for v in &self.rows {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(mut bytes: &[u8]) -> Result<Self> {
        let mut header = [0u8; 12];
        bytes
            .read_exact(&mut header)
            .map_err(|_| Error::InvalidFeatureSet("truncated header".into()))?;
        if &header[..4] != MAGIC {
            return Err(Error::InvalidFeatureSet("bad magic, expected FSET".into()));
        }
        let n = u32::from_le_bytes(header[4..8].try_into().unwrap()) as usize;
        let d = u32::from_le_bytes(header[8..12].try_into().unwrap()) as usize;
        let expected = n
            .checked_mul(d)
            .and_then(|c| c.checked_mul(8))
            .ok_or_else(|| Error::InvalidFeatureSet("header overflows".into()))?;
        if bytes.len() != expected {
            return Err(Error::InvalidFeatureSet(format!(
                "payload is {} bytes, header implies {expected}",
                bytes.len()
            )));
        }
        let rows = bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Self::new(n, d, rows)
    }

    /// Comma-separated rows of numbers; a non-numeric first row is taken as a header.
    pub fn from_csv_reader(reader: impl std::io::Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut rows = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let parsed: std::result::Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
            match parsed {
                Ok(r) => rows.push(r),
                Err(_) if i == 0 => continue,
                Err(e) => {
                    return Err(Error::Parse {
                        line: i + 1,
                        msg: e.to_string(),
                    })
                }
            }
        }
        Self::from_rows(&rows)
    }

    /// Load from a binary `FSET` file, or CSV when the extension is `.csv`.
    pub fn load(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
            Self::from_csv_reader(bytes.as_slice())
        } else {
            Self::from_bytes(&bytes)
        }
    }
}

fn psd_sqrt(m: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(m.clone());
    let max = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
    let floor = EIGEN_CLAMP * max;
    let roots = eig
        .eigenvalues
        .map(|l| if l > floor { l.sqrt() } else { 0.0 });
    &eig.eigenvectors * DMatrix::from_diagonal(&roots) * eig.eigenvectors.transpose()
}

fn trace_sqrt_psd(m: &DMatrix<f64>) -> f64 {
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let max = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
    let floor = EIGEN_CLAMP * max;
    eig.eigenvalues
        .iter()
        .map(|&l| if l > floor { l.sqrt() } else { 0.0 })
        .sum()
}

/// Fréchet distance between Gaussians fitted to two feature sets:
/// `|mu_a - mu_b|^2 + tr(S_a + S_b - 2 (S_a S_b)^(1/2))`.
///
/// The cross term is evaluated as `tr((S_a^(1/2) S_b S_a^(1/2))^(1/2))`, which
/// keeps every eigenproblem symmetric. Rank-deficient covariances are fine.
pub fn frechet_distance(fa: &FeatureSet, fb: &FeatureSet) -> Result<f64> {
    if fa.d != fb.d {
        return Err(Error::DimensionMismatch(fa.d, fb.d));
    }
    let (mu_a, mu_b) = (fa.mean(), fb.mean());
    let (cov_a, cov_b) = (fa.covariance(), fb.covariance());
    let root_a = psd_sqrt(&cov_a);
    let cross = trace_sqrt_psd(&(&root_a * &cov_b * &root_a));
    let dist = (mu_a - mu_b).norm_squared() + cov_a.trace() + cov_b.trace() - 2.0 * cross;
    if !dist.is_finite() {
        return Err(Error::DegenerateCovariance("distance is not finite".into()));
    }
    Ok(dist.max(0.0))
}
