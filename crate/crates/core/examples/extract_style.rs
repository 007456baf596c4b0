//! Extract the style triple of a synthetic image and write the planes.
//!
//!     cargo run --release --example extract_style -- out_dir

use std::path::PathBuf;

use taseval::corpus::{synth_pair, Variation, VariationConfig};
use taseval::imgcore::save_png;
use taseval::styleextract::{extract_style, ExtractorMode, GlyphTemplate, StyleTexts};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "style_planes".into()));
    std::fs::create_dir_all(&out)?;
    let (_, truth, pair) = synth_pair(&VariationConfig::new(Variation::C, 1, 11), 0)?;
    let tpl = GlyphTemplate::builtin("regular").expect("built-in template");
    let texts = StyleTexts::new(Some(&truth.a.text), &truth.a.text);
    let t = extract_style(&pair.image_a, &texts, &tpl, &ExtractorMode::Classical, None)?;
    if let Some(e) = &t.estimates {
        println!("text colour {:?}", e.text_color);
        println!("background  {:?}", e.background_color);
        println!("font        {:?}", e.font);
    }
    save_png(&pair.image_a, &out.join("input.png"))?;
    save_png(&t.colorized, &out.join("clr.png"))?;
    save_png(&t.font_glyph, &out.join("fnt.png"))?;
    save_png(&t.background, &out.join("bg.png"))?;
    save_png(&t.mask, &out.join("seg.png"))?;
    println!("planes written to {}", out.display());
    Ok(())
}
