//! OCR transcript files: `pair_id<TAB>side<TAB>text`, one per line.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use crate::error::{Error, Result};

/// Transcripts keyed by pair id and side. Side `gen` names an edited
/// output; `a` and `b` name the manifest images.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Transcripts {
    map: HashMap<(String, String), String>,
}

const SIDES: [&str; 3] = ["a", "b", "gen"];

impl Transcripts {
    /// A first line starting with `pair_id` is treated as a header. Text
    /// may be empty but the two tabs are required.
    pub fn from_reader(reader: impl Read) -> Result<Self> {
        let mut map = HashMap::new();
        for (n, line) in BufReader::new(reader).lines().enumerate() {
            let line_no = n + 1;
            let line = line.map_err(|e| Error::Parse {
                line: line_no,
                msg: e.to_string(),
            })?;
            let line = line.strip_suffix('\r').unwrap_or(&line);
            if line.is_empty() || (n == 0 && line.starts_with("pair_id\t")) {
                continue;
            }
            let mut parts = line.splitn(3, '\t');
            let (Some(id), Some(side), Some(text)) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "expected pair_id<TAB>side<TAB>text".into(),
                });
            };
            let side = side.trim().to_ascii_lowercase();
            if !SIDES.contains(&side.as_str()) {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("side {side:?} is not one of {SIDES:?}"),
                });
            }
            map.insert((id.trim().to_string(), side), text.to_string());
        }
        Ok(Self { map })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_reader(f)
    }

    pub fn get(&self, pair_id: &str, side: &str) -> Option<&str> {
        self.map.get(&(pair_id.to_string(), side.to_string())).map(String::as_str)
    }

    /// Transcript of the image being scored: `gen`, falling back to `b`.
    pub fn scored(&self, pair_id: &str) -> Option<&str> {
        self.get(pair_id, "gen").or_else(|| self.get(pair_id, "b"))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_lookup() {
        let t = Transcripts::from_reader("pair_id\tside\ttext\np1\tb\t하늘 색\np1\tgen\t하늘\np2\ta\t\n".as_bytes()).unwrap();
        assert_eq!(t.scored("p1"), Some("하늘"));
        assert_eq!(t.get("p1", "b"), Some("하늘 색"));
        assert_eq!(t.get("p2", "a"), Some(""));
        assert_eq!(t.scored("p2"), None);
    }

    #[test]
    fn bad_lines() {
        assert!(matches!(
            Transcripts::from_reader("p1\tb\tx\np2 b y\n".as_bytes()),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Transcripts::from_reader("p1\tc\tx\n".as_bytes()),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
