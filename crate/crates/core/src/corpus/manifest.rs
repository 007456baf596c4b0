//! JSON-lines pair manifests.

use std::collections::{BTreeMap, HashSet};
use std::io::{BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imgcore::load_image;

/// Images below this many pixels are rejected by validation.
pub const MIN_AREA: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Lang {
    Ko,
    Ar,
    Ja,
    Other,
}

impl Lang {
    pub fn tag(self) -> &'static str {
        match self {
            Lang::Ko => "ko",
            Lang::Ar => "ar",
            Lang::Ja => "ja",
            Lang::Other => "other",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceKind {
    Open,
    Crawl,
    Synth,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Eval,
}

/// One same-style pair. Paths are relative to the manifest's directory
/// unless absolute.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ManifestEntry {
    #[serde(alias = "pair_id")]
    pub pair_id: String,
    pub lang: Lang,
    #[serde(alias = "image_a")]
    pub image_a: PathBuf,
    #[serde(alias = "image_b")]
    pub image_b: PathBuf,
    #[serde(alias = "text_a")]
    pub text_a: String,
    #[serde(alias = "text_b")]
    pub text_b: String,
    pub source: SourceKind,
    pub split: Split,
    /// Edited output to score; image B is scored when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated: Option<PathBuf>,
    /// Ground-truth edit; image B serves as ground truth for a
    /// `generated` image when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gt: Option<PathBuf>,
    /// Fields this toolkit does not interpret, kept for round trips.
    #[serde(flatten)]
    pub extra: BTreeMap<String, serde_json::Value>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairManifest {
    pub entries: Vec<ManifestEntry>,
    /// Directory relative paths are resolved against.
    pub base_dir: PathBuf,
}

impl PairManifest {
    pub fn new(entries: Vec<ManifestEntry>, base_dir: impl Into<PathBuf>) -> Result<Self> {
        check_unique(entries.iter().map(|e| e.pair_id.as_str()))?;
        Ok(Self {
            entries,
            base_dir: base_dir.into(),
        })
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Parse JSON lines; blank lines are skipped.
    pub fn from_reader(reader: impl Read, base_dir: impl Into<PathBuf>) -> Result<Self> {
        let mut entries = Vec::new();
        for (n, line) in BufReader::new(reader).lines().enumerate() {
            let line = line.map_err(|e| Error::Parse {
                line: n + 1,
                msg: e.to_string(),
            })?;
            if line.trim().is_empty() {
                continue;
            }
            let entry: ManifestEntry = serde_json::from_str(&line).map_err(|e| Error::Parse {
                line: n + 1,
                msg: e.to_string(),
            })?;
            entries.push(entry);
        }
        Self::new(entries, base_dir)
    }

    pub fn write_jsonl(&self, mut out: impl Write) -> Result<()> {
        for e in &self.entries {
            serde_json::to_writer(&mut out, e)?;
            out.write_all(b"\n").map_err(|err| Error::io("<manifest>", err))?;
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf)?;
        std::fs::write(path, buf).map_err(|e| Error::io(path, e))
    }
}

fn check_unique<'a>(ids: impl Iterator<Item = &'a str>) -> Result<()> {
    let mut seen = HashSet::new();
    for id in ids {
        if !seen.insert(id) {
            return Err(Error::DuplicatePairId(id.to_string()));
        }
    }
    Ok(())
}

fn parent_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

/// Read a JSON-lines manifest.
pub fn parse_manifest(path: &Path) -> Result<PairManifest> {
    let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    PairManifest::from_reader(f, parent_dir(path))
}

#[derive(Deserialize)]
struct CsvRow {
    pair_id: String,
    lang: Lang,
    image_a: PathBuf,
    image_b: PathBuf,
    text_a: String,
    text_b: String,
    source: SourceKind,
    split: Split,
    #[serde(default)]
    generated: Option<PathBuf>,
    #[serde(default)]
    gt: Option<PathBuf>,
}

/// Import a CSV manifest with header
/// `pair_id,lang,image_a,image_b,text_a,text_b,source,split[,generated,gt]`.
pub fn import_csv(path: &Path) -> Result<PairManifest> {
    let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    import_csv_reader(f, parent_dir(path))
}

pub fn import_csv_reader(reader: impl Read, base_dir: impl Into<PathBuf>) -> Result<PairManifest> {
    let mut rdr = csv::Reader::from_reader(reader);
    let mut entries = Vec::new();
    for (n, row) in rdr.deserialize::<CsvRow>().enumerate() {
        let r = row.map_err(|e| Error::Parse {
            line: n + 2,
            msg: e.to_string(),
        })?;
        let empty_to_none = |p: Option<PathBuf>| p.filter(|p| !p.as_os_str().is_empty());
        entries.push(ManifestEntry {
            pair_id: r.pair_id,
            lang: r.lang,
            image_a: r.image_a,
            image_b: r.image_b,
            text_a: r.text_a,
            text_b: r.text_b,
            source: r.source,
            split: r.split,
            generated: empty_to_none(r.generated),
            gt: empty_to_none(r.gt),
            extra: BTreeMap::new(),
        });
    }
    PairManifest::new(entries, base_dir)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ViolationKind {
    MissingFile { path: PathBuf },
    Undecodable { path: PathBuf, reason: String },
    AreaTooSmall { path: PathBuf, width: usize, height: usize },
    NotLandscape { path: PathBuf, width: usize, height: usize },
    EmptyText { field: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub pair_id: String,
    #[serde(flatten)]
    pub kind: ViolationKind,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check every entry: files decode, area at least [`MIN_AREA`], width
/// greater than height, texts non-empty. The manifest is not modified.
pub fn validate_manifest(m: &PairManifest) -> ValidationReport {
    let mut report = ValidationReport {
        checked: m.len(),
        violations: Vec::new(),
    };
    for e in &m.entries {
        let mut flag = |kind| {
            report.violations.push(Violation {
                pair_id: e.pair_id.clone(),
                kind,
            })
        };
        for (field, text) in [("textA", &e.text_a), ("textB", &e.text_b)] {
            if text.trim().is_empty() {
                flag(ViolationKind::EmptyText { field: field.into() });
            }
        }
        let paths = [Some(&e.image_a), Some(&e.image_b), e.generated.as_ref(), e.gt.as_ref()];
        for rel in paths.into_iter().flatten() {
            let path = m.resolve(rel);
            if !path.is_file() {
                flag(ViolationKind::MissingFile { path });
                continue;
            }
            let img = match load_image(&path) {
                Ok(img) => img,
                Err(err) => {
                    flag(ViolationKind::Undecodable {
                        path,
                        reason: err.to_string(),
                    });
                    continue;
                }
            };
            let (width, height) = (img.width(), img.height());
            if width * height < MIN_AREA {
                flag(ViolationKind::AreaTooSmall {
                    path: path.clone(),
                    width,
                    height,
                });
            }
            if width <= height {
                flag(ViolationKind::NotLandscape { path, width, height });
            }
        }
    }
    report
}
