//! Parse model output leniently, inspect diagnostics, re-emit and export SVG.

use bezier_glyph::serialization::{emit_bezierseq, emit_svg, parse_bezierseq, ParseMode, DEFAULT_PRECISION};

fn main() {
    let model_output = "Sure! <bezierseq><bezier>(0.1 0.1) (0.5 0.9) (0.9 0.1)</bezier>\
                        <bezier>(0.2 0.5) (oops)</bezier>\
                        <bezier>(0.2, 0.5) (0.8, 0.5)</bezier></bezierseq>";

    let strict = parse_bezierseq(model_output, ParseMode::Strict);
    println!("strict: {}", strict.map(|_| "ok".to_owned()).unwrap_or_else(|e| e.to_string()));

    let (seq, diags) = parse_bezierseq(model_output, ParseMode::Lenient).unwrap();
    println!("lenient: {} strokes kept", seq.len());
    for d in &diags.errors {
        println!("  byte {}: {}", d.offset, d.message);
    }

    let text = emit_bezierseq(&seq, DEFAULT_PRECISION).unwrap();
    println!("{text}");
    let (again, clean) = parse_bezierseq(&text, ParseMode::Strict).unwrap();
    assert!(clean.is_clean());
    assert_eq!(emit_bezierseq(&again, DEFAULT_PRECISION).unwrap(), text);

    print!("{}", emit_svg(&seq, 256, 256, 3.0).unwrap());
}

#[cfg(test)]
#[test]
fn example_runs() {
    main();
}
