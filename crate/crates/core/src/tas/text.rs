//! Text-correctness metrics for OCR transcripts.

use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

/// Normalised edit similarity `1 - lev / max_len` over NFC code points.
/// Two empty strings score 1, exactly one empty string scores 0.
pub fn ned(pred: &str, gt: &str) -> f64 {
    let p: String = pred.nfc().collect();
    let g: String = gt.nfc().collect();
    let longest = p.chars().count().max(g.chars().count());
    if longest == 0 {
        return 1.0;
    }
    1.0 - strsim::levenshtein(&p, &g) as f64 / longest as f64
}

/// NFC with all whitespace removed. No case folding.
pub fn normalize_for_match(s: &str) -> String {
    s.nfc().filter(|c| !c.is_whitespace()).collect()
}

pub fn exact_match(pred: &str, gt: &str) -> bool {
    normalize_for_match(pred) == normalize_for_match(gt)
}

/// Fraction of `(pred, gt)` rows that match after normalisation.
pub fn rec_acc<P: AsRef<str>, G: AsRef<str>>(rows: &[(P, G)]) -> Result<f64> {
    if rows.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let hits = rows.iter().filter(|(p, g)| exact_match(p.as_ref(), g.as_ref())).count();
    Ok(hits as f64 / rows.len() as f64)
}
