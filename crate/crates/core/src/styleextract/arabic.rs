//! Isolated-form Arabic letters as stroke skeletons with point dots.

use super::glyphs::{ring, Stroke};

fn s(points: &[(f64, f64)]) -> Stroke {
    points.iter().map(|&(x, y)| [x, y]).collect()
}

/// `n` dots centred at `(cx, cy)`; three dots form a triangle.
fn dots(n: usize, cx: f64, cy: f64) -> Vec<Stroke> {
    const GAP: f64 = 0.12;
    match n {
        1 => vec![vec![[cx, cy]]],
        2 => vec![vec![[cx - GAP / 2.0, cy]], vec![[cx + GAP / 2.0, cy]]],
        3 => vec![
            vec![[cx - GAP / 2.0, cy]],
            vec![[cx + GAP / 2.0, cy]],
            vec![[cx, cy - GAP * 0.9]],
        ],
        _ => Vec::new(),
    }
}

fn hamza(cx: f64, cy: f64) -> Stroke {
    s(&[(cx + 0.06, cy - 0.05), (cx - 0.04, cy - 0.03), (cx, cy + 0.02), (cx + 0.07, cy + 0.02), (cx - 0.06, cy + 0.07)])
}

fn beh_body() -> Stroke {
    s(&[(0.1, 0.5), (0.15, 0.7), (0.85, 0.7), (0.9, 0.5)])
}

fn jeem_body() -> Stroke {
    s(&[(0.25, 0.3), (0.75, 0.3), (0.35, 0.5), (0.3, 0.7), (0.45, 0.88), (0.85, 0.9)])
}

fn seen_body() -> Vec<Stroke> {
    vec![
        s(&[(0.92, 0.45), (0.92, 0.68), (0.5, 0.68)]),
        s(&[(0.78, 0.5), (0.78, 0.68)]),
        s(&[(0.64, 0.5), (0.64, 0.68)]),
        s(&[(0.5, 0.68), (0.48, 0.86), (0.15, 0.88), (0.1, 0.7)]),
    ]
}

fn sad_body() -> Vec<Stroke> {
    vec![
        s(&[(0.9, 0.68), (0.8, 0.45), (0.55, 0.48), (0.55, 0.68), (0.9, 0.68)]),
        s(&[(0.55, 0.68), (0.5, 0.86), (0.15, 0.88), (0.1, 0.7)]),
    ]
}

fn tah_body() -> Vec<Stroke> {
    vec![
        s(&[(0.2, 0.68), (0.35, 0.45), (0.75, 0.5), (0.9, 0.68), (0.2, 0.68)]),
        s(&[(0.35, 0.1), (0.35, 0.68)]),
    ]
}

fn ain_body() -> Stroke {
    s(&[(0.7, 0.3), (0.45, 0.28), (0.45, 0.48), (0.7, 0.5), (0.35, 0.62), (0.3, 0.85), (0.8, 0.9)])
}

fn feh_body() -> Vec<Stroke> {
    vec![ring(0.75, 0.52, 0.11, 0.11, 12), s(&[(0.86, 0.68), (0.1, 0.68), (0.08, 0.5)])]
}

fn yeh_body() -> Stroke {
    s(&[(0.8, 0.4), (0.55, 0.5), (0.75, 0.7), (0.25, 0.72), (0.15, 0.55)])
}

fn waw_body() -> Vec<Stroke> {
    vec![ring(0.62, 0.5, 0.12, 0.11, 12), s(&[(0.74, 0.5), (0.68, 0.75), (0.3, 0.9)])]
}

pub(crate) fn is_arabic(c: char) -> bool {
    ('\u{0600}'..='\u{06FF}').contains(&c)
}

pub(crate) fn glyph(c: char) -> Option<Vec<Stroke>> {
    let alef = || s(&[(0.5, 0.15), (0.5, 0.75)]);
    let mut g: Vec<Stroke> = match c {
        '\u{0621}' => vec![hamza(0.5, 0.6)],
        '\u{0622}' => vec![alef(), s(&[(0.3, 0.08), (0.4, 0.03), (0.6, 0.1), (0.7, 0.05)])],
        '\u{0623}' => vec![alef(), hamza(0.5, 0.05)],
        '\u{0624}' => {
            let mut w = waw_body();
            w.push(hamza(0.62, 0.25));
            w
        }
        '\u{0625}' => vec![alef(), hamza(0.5, 0.88)],
        '\u{0626}' => vec![yeh_body(), hamza(0.55, 0.25)],
        '\u{0627}' => vec![alef()],
        '\u{0628}' => [vec![beh_body()], dots(1, 0.5, 0.85)].concat(),
        '\u{0629}' => [vec![ring(0.5, 0.58, 0.2, 0.16, 16)], dots(2, 0.5, 0.28)].concat(),
        '\u{062A}' => [vec![beh_body()], dots(2, 0.5, 0.5)].concat(),
        '\u{062B}' => [vec![beh_body()], dots(3, 0.5, 0.5)].concat(),
        '\u{062C}' => [vec![jeem_body()], dots(1, 0.55, 0.62)].concat(),
        '\u{062D}' => vec![jeem_body()],
        '\u{062E}' => [vec![jeem_body()], dots(1, 0.5, 0.15)].concat(),
        '\u{062F}' => vec![s(&[(0.45, 0.35), (0.7, 0.68), (0.25, 0.7)])],
        '\u{0630}' => [vec![s(&[(0.45, 0.35), (0.7, 0.68), (0.25, 0.7)])], dots(1, 0.45, 0.2)].concat(),
        '\u{0631}' => vec![s(&[(0.65, 0.45), (0.6, 0.7), (0.3, 0.9)])],
        '\u{0632}' => [vec![s(&[(0.65, 0.45), (0.6, 0.7), (0.3, 0.9)])], dots(1, 0.65, 0.28)].concat(),
        '\u{0633}' => seen_body(),
        '\u{0634}' => [seen_body(), dots(3, 0.75, 0.36)].concat(),
        '\u{0635}' => sad_body(),
        '\u{0636}' => [sad_body(), dots(1, 0.72, 0.3)].concat(),
        '\u{0637}' => tah_body(),
        '\u{0638}' => [tah_body(), dots(1, 0.6, 0.3)].concat(),
        '\u{0639}' => vec![ain_body()],
        '\u{063A}' => [vec![ain_body()], dots(1, 0.55, 0.12)].concat(),
        '\u{0640}' => vec![s(&[(0.0, 0.68), (1.0, 0.68)])],
        '\u{0641}' => [feh_body(), dots(1, 0.75, 0.25)].concat(),
        '\u{0642}' => [feh_body(), dots(2, 0.75, 0.25)].concat(),
        '\u{0643}' => vec![
            s(&[(0.85, 0.12), (0.85, 0.68), (0.1, 0.68), (0.08, 0.5)]),
            s(&[(0.45, 0.4), (0.6, 0.45)]),
        ],
        '\u{0644}' => vec![s(&[(0.7, 0.1), (0.7, 0.72), (0.55, 0.88), (0.3, 0.88), (0.2, 0.7)])],
        '\u{0645}' => vec![ring(0.68, 0.55, 0.13, 0.12, 12), s(&[(0.55, 0.58), (0.3, 0.58), (0.3, 0.95)])],
        '\u{0646}' => [vec![s(&[(0.15, 0.5), (0.2, 0.8), (0.8, 0.8), (0.85, 0.5)])], dots(1, 0.5, 0.42)].concat(),
        '\u{0647}' => vec![ring(0.5, 0.55, 0.2, 0.18, 16)],
        '\u{0648}' => waw_body(),
        '\u{0649}' => vec![yeh_body()],
        '\u{064A}' => [vec![yeh_body()], dots(2, 0.5, 0.88)].concat(),
        _ => return None,
    };
    for st in &mut g {
        for p in st.iter_mut() {
            p[0] = p[0].clamp(0.0, 1.0);
            p[1] = p[1].clamp(0.0, 1.0);
        }
    }
    Some(g)
}
