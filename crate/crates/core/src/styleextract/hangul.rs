//! Hangul syllables composed from stroke-skeleton jamo.

use super::glyphs::{ring, Stroke};

const SYLLABLE_BASE: u32 = 0xAC00;
const SYLLABLE_LAST: u32 = 0xD7A3;

const INITIALS: [char; 19] = [
    'ㄱ', 'ㄲ', 'ㄴ', 'ㄷ', 'ㄸ', 'ㄹ', 'ㅁ', 'ㅂ', 'ㅃ', 'ㅅ', 'ㅆ', 'ㅇ', 'ㅈ', 'ㅉ', 'ㅊ', 'ㅋ', 'ㅌ', 'ㅍ', 'ㅎ',
];
const VOWELS: [char; 21] = [
    'ㅏ', 'ㅐ', 'ㅑ', 'ㅒ', 'ㅓ', 'ㅔ', 'ㅕ', 'ㅖ', 'ㅗ', 'ㅘ', 'ㅙ', 'ㅚ', 'ㅛ', 'ㅜ', 'ㅝ', 'ㅞ', 'ㅟ', 'ㅠ', 'ㅡ', 'ㅢ', 'ㅣ',
];
const FINALS: [char; 27] = [
    'ㄱ', 'ㄲ', 'ㄳ', 'ㄴ', 'ㄵ', 'ㄶ', 'ㄷ', 'ㄹ', 'ㄺ', 'ㄻ', 'ㄼ', 'ㄽ', 'ㄾ', 'ㄿ', 'ㅀ', 'ㅁ', 'ㅂ', 'ㅄ', 'ㅅ', 'ㅆ', 'ㅇ',
    'ㅈ', 'ㅊ', 'ㅋ', 'ㅌ', 'ㅍ', 'ㅎ',
];

type BoxF = [f64; 4];

fn s(points: &[(f64, f64)]) -> Stroke {
    points.iter().map(|&(x, y)| [x, y]).collect()
}

fn base_consonant(c: char) -> Vec<Stroke> {
    match c {
        'ㄱ' => vec![s(&[(0.05, 0.1), (0.9, 0.1), (0.9, 0.95)])],
        'ㄴ' => vec![s(&[(0.1, 0.05), (0.1, 0.9), (0.95, 0.9)])],
        'ㄷ' => vec![s(&[(0.92, 0.1), (0.1, 0.1), (0.1, 0.9), (0.95, 0.9)])],
        'ㄹ' => vec![s(&[(0.1, 0.08), (0.9, 0.08), (0.9, 0.5), (0.1, 0.5), (0.1, 0.92), (0.95, 0.92)])],
        'ㅁ' => vec![s(&[(0.1, 0.1), (0.9, 0.1), (0.9, 0.9), (0.1, 0.9), (0.1, 0.1)])],
        'ㅂ' => vec![
            s(&[(0.1, 0.05), (0.1, 0.92), (0.9, 0.92), (0.9, 0.05)]),
            s(&[(0.1, 0.48), (0.9, 0.48)]),
        ],
        'ㅅ' => vec![s(&[(0.5, 0.05), (0.08, 0.95)]), s(&[(0.36, 0.38), (0.92, 0.95)])],
        'ㅇ' => vec![ring(0.5, 0.5, 0.4, 0.42, 20)],
        'ㅈ' => vec![
            s(&[(0.1, 0.1), (0.85, 0.1)]),
            s(&[(0.55, 0.1), (0.08, 0.95)]),
            s(&[(0.38, 0.45), (0.92, 0.95)]),
        ],
        'ㅊ' => vec![
            s(&[(0.5, 0.0), (0.5, 0.14)]),
            s(&[(0.1, 0.24), (0.85, 0.24)]),
            s(&[(0.55, 0.24), (0.08, 0.95)]),
            s(&[(0.4, 0.55), (0.92, 0.95)]),
        ],
        'ㅋ' => vec![s(&[(0.05, 0.1), (0.9, 0.1), (0.9, 0.95)]), s(&[(0.1, 0.5), (0.9, 0.5)])],
        'ㅌ' => vec![
            s(&[(0.92, 0.08), (0.1, 0.08), (0.1, 0.92), (0.95, 0.92)]),
            s(&[(0.1, 0.5), (0.88, 0.5)]),
        ],
        'ㅍ' => vec![
            s(&[(0.05, 0.1), (0.95, 0.1)]),
            s(&[(0.05, 0.9), (0.95, 0.9)]),
            s(&[(0.33, 0.1), (0.33, 0.9)]),
            s(&[(0.67, 0.1), (0.67, 0.9)]),
        ],
        'ㅎ' => vec![
            s(&[(0.5, 0.0), (0.5, 0.12)]),
            s(&[(0.12, 0.24), (0.88, 0.24)]),
            ring(0.5, 0.64, 0.3, 0.28, 20),
        ],
        _ => Vec::new(),
    }
}

fn consonant_parts(c: char) -> Option<(char, Option<char>)> {
    Some(match c {
        'ㄲ' => ('ㄱ', Some('ㄱ')),
        'ㄸ' => ('ㄷ', Some('ㄷ')),
        'ㅃ' => ('ㅂ', Some('ㅂ')),
        'ㅆ' => ('ㅅ', Some('ㅅ')),
        'ㅉ' => ('ㅈ', Some('ㅈ')),
        'ㄳ' => ('ㄱ', Some('ㅅ')),
        'ㄵ' => ('ㄴ', Some('ㅈ')),
        'ㄶ' => ('ㄴ', Some('ㅎ')),
        'ㄺ' => ('ㄹ', Some('ㄱ')),
        'ㄻ' => ('ㄹ', Some('ㅁ')),
        'ㄼ' => ('ㄹ', Some('ㅂ')),
        'ㄽ' => ('ㄹ', Some('ㅅ')),
        'ㄾ' => ('ㄹ', Some('ㅌ')),
        'ㄿ' => ('ㄹ', Some('ㅍ')),
        'ㅀ' => ('ㄹ', Some('ㅎ')),
        'ㅄ' => ('ㅂ', Some('ㅅ')),
        c if !base_consonant(c).is_empty() => (c, None),
        _ => return None,
    })
}

fn consonant(c: char) -> Option<Vec<Stroke>> {
    let (a, b) = consonant_parts(c)?;
    Some(match b {
        None => base_consonant(a),
        Some(b) => {
            let mut out = place(&base_consonant(a), [0.0, 0.0, 0.47, 1.0]);
            out.extend(place(&base_consonant(b), [0.53, 0.0, 1.0, 1.0]));
            out
        }
    })
}

/// Map unit-box strokes into `bx`.
fn place(strokes: &[Stroke], bx: BoxF) -> Vec<Stroke> {
    strokes
        .iter()
        .map(|st| {
            st.iter()
                .map(|p| [bx[0] + p[0] * (bx[2] - bx[0]), bx[1] + p[1] * (bx[3] - bx[1])])
                .collect()
        })
        .collect()
}

fn vert(x: f64) -> Stroke {
    s(&[(x, 0.0), (x, 1.0)])
}

fn hline(y: f64, x0: f64, x1: f64) -> Stroke {
    s(&[(x0, y), (x1, y)])
}

fn vline(x: f64, y0: f64, y1: f64) -> Stroke {
    s(&[(x, y0), (x, y1)])
}

/// Vertical component of a vowel (right-hand column).
fn vowel_vertical(c: char) -> Vec<Stroke> {
    match c {
        'ㅏ' => vec![vert(0.35), hline(0.5, 0.35, 0.8)],
        'ㅐ' => vec![vert(0.3), vert(0.75), hline(0.5, 0.3, 0.75)],
        'ㅑ' => vec![vert(0.35), hline(0.38, 0.35, 0.8), hline(0.62, 0.35, 0.8)],
        'ㅒ' => vec![vert(0.3), vert(0.75), hline(0.38, 0.3, 0.75), hline(0.62, 0.3, 0.75)],
        'ㅓ' => vec![vert(0.65), hline(0.5, 0.2, 0.65)],
        'ㅔ' => vec![vert(0.4), vert(0.8), hline(0.5, 0.05, 0.4)],
        'ㅕ' => vec![vert(0.65), hline(0.38, 0.2, 0.65), hline(0.62, 0.2, 0.65)],
        'ㅖ' => vec![vert(0.4), vert(0.8), hline(0.38, 0.05, 0.4), hline(0.62, 0.05, 0.4)],
        'ㅣ' => vec![vert(0.5)],
        _ => Vec::new(),
    }
}

/// Horizontal component of a vowel (under the initial).
fn vowel_horizontal(c: char) -> Vec<Stroke> {
    match c {
        'ㅗ' => vec![hline(0.7, 0.0, 1.0), vline(0.5, 0.25, 0.7)],
        'ㅛ' => vec![hline(0.7, 0.0, 1.0), vline(0.35, 0.3, 0.7), vline(0.65, 0.3, 0.7)],
        'ㅜ' => vec![hline(0.3, 0.0, 1.0), vline(0.5, 0.3, 0.85)],
        'ㅠ' => vec![hline(0.3, 0.0, 1.0), vline(0.35, 0.3, 0.85), vline(0.65, 0.3, 0.85)],
        'ㅡ' => vec![hline(0.5, 0.0, 1.0)],
        _ => Vec::new(),
    }
}

/// (horizontal part, vertical part) of a vowel.
fn vowel_parts(c: char) -> (Option<char>, Option<char>) {
    match c {
        'ㅘ' => (Some('ㅗ'), Some('ㅏ')),
        'ㅙ' => (Some('ㅗ'), Some('ㅐ')),
        'ㅚ' => (Some('ㅗ'), Some('ㅣ')),
        'ㅝ' => (Some('ㅜ'), Some('ㅓ')),
        'ㅞ' => (Some('ㅜ'), Some('ㅔ')),
        'ㅟ' => (Some('ㅜ'), Some('ㅣ')),
        'ㅢ' => (Some('ㅡ'), Some('ㅣ')),
        'ㅗ' | 'ㅛ' | 'ㅜ' | 'ㅠ' | 'ㅡ' => (Some(c), None),
        _ => (None, Some(c)),
    }
}

fn syllable(l: usize, v: usize, t: Option<usize>) -> Vec<Stroke> {
    let (hp, vp) = vowel_parts(VOWELS[v]);
    let initial = consonant(INITIALS[l]).unwrap_or_default();
    // boxes: initial, horizontal vowel part, vertical vowel part, final
    let (bl, bh, bv, bt): (BoxF, BoxF, BoxF, BoxF) = match (hp.is_some(), vp.is_some(), t.is_some()) {
        (false, _, false) => ([0.06, 0.12, 0.56, 0.88], [0.0; 4], [0.5, 0.04, 0.96, 0.96], [0.0; 4]),
        (false, _, true) => (
            [0.06, 0.06, 0.56, 0.5],
            [0.0; 4],
            [0.5, 0.02, 0.96, 0.6],
            [0.15, 0.66, 0.85, 0.96],
        ),
        (true, false, false) => ([0.2, 0.04, 0.8, 0.48], [0.04, 0.46, 0.96, 0.96], [0.0; 4], [0.0; 4]),
        (true, false, true) => (
            [0.22, 0.02, 0.78, 0.3],
            [0.04, 0.28, 0.96, 0.62],
            [0.0; 4],
            [0.2, 0.66, 0.8, 0.96],
        ),
        (true, true, false) => (
            [0.06, 0.04, 0.6, 0.44],
            [0.02, 0.42, 0.68, 0.96],
            [0.6, 0.02, 0.98, 0.98],
            [0.0; 4],
        ),
        (true, true, true) => (
            [0.06, 0.02, 0.56, 0.3],
            [0.02, 0.28, 0.66, 0.62],
            [0.6, 0.02, 0.98, 0.64],
            [0.2, 0.66, 0.8, 0.96],
        ),
    };
    let mut out = place(&initial, bl);
    if let Some(h) = hp {
        out.extend(place(&vowel_horizontal(h), bh));
    }
    if let Some(v) = vp {
        out.extend(place(&vowel_vertical(v), bv));
    }
    if let Some(t) = t {
        out.extend(place(&consonant(FINALS[t]).unwrap_or_default(), bt));
    }
    out
}

/// Strokes for a precomposed syllable or a compatibility jamo.
pub(crate) fn glyph(c: char) -> Option<Vec<Stroke>> {
    let cp = c as u32;
    if (SYLLABLE_BASE..=SYLLABLE_LAST).contains(&cp) {
        let idx = (cp - SYLLABLE_BASE) as usize;
        let t = idx % 28;
        return Some(syllable(idx / 588, (idx % 588) / 28, (t > 0).then(|| t - 1)));
    }
    if let Some(strokes) = consonant(c) {
        return Some(place(&strokes, [0.1, 0.1, 0.9, 0.9]));
    }
    if VOWELS.contains(&c) {
        let (hp, vp) = vowel_parts(c);
        let mut out = Vec::new();
        match (hp, vp) {
            (Some(h), Some(v)) => {
                out.extend(place(&vowel_horizontal(h), [0.05, 0.3, 0.65, 0.9]));
                out.extend(place(&vowel_vertical(v), [0.55, 0.05, 0.95, 0.95]));
            }
            (Some(h), None) => out.extend(place(&vowel_horizontal(h), [0.05, 0.1, 0.95, 0.9])),
            (None, Some(v)) => out.extend(place(&vowel_vertical(v), [0.25, 0.05, 0.75, 0.95])),
            (None, None) => {}
        }
        return Some(out);
    }
    None
}

pub(crate) fn is_hangul(c: char) -> bool {
    let cp = c as u32;
    (SYLLABLE_BASE..=SYLLABLE_LAST).contains(&cp) || (0x3131..=0x3163).contains(&cp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_syllable_has_strokes_inside_the_cell() {
        for cp in SYLLABLE_BASE..=SYLLABLE_LAST {
            let c = char::from_u32(cp).unwrap();
            let g = glyph(c).unwrap();
            assert!(g.len() >= 2, "{c}");
            for p in g.iter().flatten() {
                assert!((0.0..=1.0).contains(&p[0]) && (0.0..=1.0).contains(&p[1]), "{c}");
            }
        }
    }

    #[test]
    fn compatibility_jamo_covered() {
        for cp in 0x3131..=0x3163u32 {
            let c = char::from_u32(cp).unwrap();
            assert!(glyph(c).is_some_and(|g| !g.is_empty()), "{c}");
        }
    }

    #[test]
    fn final_consonant_adds_strokes() {
        let ga = glyph('가').unwrap().len();
        let gak = glyph('각').unwrap().len();
        assert!(gak > ga);
    }
}
