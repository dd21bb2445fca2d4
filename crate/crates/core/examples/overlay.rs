//! Draw a glyph under labeled normalized axes.

use bezier_glyph::geometry::{BezierCurve, Point2, StrokeSequence};
use bezier_glyph::rendering::{overlay_layout, render_axis_overlay, AxisOverlayConfig, GlyphSource};

fn main() {
    let seq = StrokeSequence::normalized(vec![
        BezierCurve::new(vec![
            Point2::new(0.2, 0.2),
            Point2::new(0.2, 0.9),
            Point2::new(0.8, 0.9),
            Point2::new(0.8, 0.2),
        ])
        .unwrap(),
        BezierCurve::line(Point2::new(0.2, 0.5), Point2::new(0.8, 0.5)),
    ]);
    let config = AxisOverlayConfig::default();
    let layout = overlay_layout(&config).unwrap();
    println!(
        "plot region {:?}, {} x ticks, {} y ticks, font scale {}",
        layout.plot,
        layout.x_ticks.len(),
        layout.y_ticks.len(),
        layout.font_scale
    );
    let canvas = render_axis_overlay(GlyphSource::Strokes(&seq), &config).unwrap();
    let path = std::env::temp_dir().join("bezier-glyph-overlay.png");
    std::fs::write(&path, canvas.to_png().unwrap()).unwrap();
    println!("wrote {}", path.display());
}

#[cfg(test)]
#[test]
fn example_runs() {
    main();
}
