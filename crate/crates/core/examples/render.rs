//! Rasterize a program to PNG and PGM in the temp directory.

use bezier_glyph::geometry::{BezierCurve, Point2, StrokeSequence};
use bezier_glyph::rendering::rasterize_strokes;

fn main() {
    let seq = StrokeSequence::normalized(vec![
        BezierCurve::new(vec![Point2::new(0.1, 0.1), Point2::new(0.5, 1.0), Point2::new(0.9, 0.1)]).unwrap(),
        BezierCurve::line(Point2::new(0.25, 0.4), Point2::new(0.75, 0.4)),
    ]);
    let canvas = rasterize_strokes(&seq, (256, 256), 4.0).unwrap();
    println!("{} of {} pixels inked", canvas.ink_count(), canvas.pixels().len());

    let dir = std::env::temp_dir();
    let png = dir.join("bezier-glyph-render.png");
    let pgm = dir.join("bezier-glyph-render.pgm");
    std::fs::write(&png, canvas.to_png().unwrap()).unwrap();
    std::fs::write(&pgm, canvas.to_pgm().unwrap()).unwrap();
    println!("wrote {} and {}", png.display(), pgm.display());
}

#[cfg(test)]
#[test]
fn example_runs() {
    main();
}
