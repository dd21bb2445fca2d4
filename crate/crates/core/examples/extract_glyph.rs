//! Vectorize a synthetic "T" glyph and print the resulting program.

use bezier_glyph::extraction::{extract_glyph_traced, ExtractionConfig, RasterImage};
use bezier_glyph::serialization::{emit_bezierseq, DEFAULT_PRECISION};

fn t_glyph() -> RasterImage {
    let (w, h) = (160, 160);
    let mut img = RasterImage::filled(w, h, 255).unwrap();
    for y in 0..h {
        for x in 0..w {
            let bar = (20..140).contains(&x) && (24..34).contains(&y);
            let stem = (75..85).contains(&x) && (24..140).contains(&y);
            if bar || stem {
                img.set(x, y, 0);
            }
        }
    }
    img
}

fn main() {
    let config = ExtractionConfig::default();
    let trace = extract_glyph_traced(&t_glyph(), &config).expect("the glyph has ink");
    println!(
        "ink pixels {}, skeleton pixels {}, paths {}, strokes {}",
        trace.binary.count_foreground(),
        trace.skeleton.count_foreground(),
        trace.segmentation.paths.len(),
        trace.strokes.len()
    );
    println!("{}", emit_bezierseq(&trace.strokes, DEFAULT_PRECISION).unwrap());
}

#[cfg(test)]
#[test]
fn example_runs() {
    main();
}
