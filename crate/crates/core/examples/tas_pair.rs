//! Score one synthetic pair per variation with the classical extractor.
//!
//!     cargo run --release --example tas_pair

use taseval::corpus::{synth_pair, Variation, VariationConfig};
use taseval::styleextract::{ExtractorMode, GlyphTemplate};
use taseval::tas::{tas_with_texts, PairTexts};

fn main() -> taseval::Result<()> {
    let tpl = GlyphTemplate::builtin("regular").expect("built-in template");
    println!("{:<4} {:>6} {:>6} {:>6} {:>6}", "var", "s_clr", "s_fnt", "s_bg", "tas");
    for v in Variation::ALL {
        let cfg = VariationConfig::new(v, 1, 7);
        let (_, truth, pair) = synth_pair(&cfg, 0)?;
        let texts = PairTexts {
            source_a: Some(&truth.a.text),
            source_b: Some(&truth.b.text),
            target: &truth.b.text,
        };
        let r = tas_with_texts(&pair.image_a, &pair.image_b, &texts, &tpl, &ExtractorMode::Classical, None)?;
        println!("{:<4} {:>6.4} {:>6.4} {:>6.4} {:>6.4}", v.tag(), r.s_clr, r.s_fnt, r.s_bg, r.tas);
    }
    Ok(())
}
