//! The `<bezierseq>` program text format and SVG export.
//!
//! Canonical form, as written by [`emit_bezierseq`]:
//!
//! ```text
//! <bezierseq><bezier>(0.000 0.000) (0.500 1.000) (1.000 0.000)</bezier></bezierseq>
//! ```
//!
//! The parser is more forgiving than the emitter. It accepts any whitespace
//! between tags and points, a comma between the two numbers of a point,
//! plain or scientific notation, and arbitrary text before the opening
//! `<bezierseq>` or after the closing tag. In lenient mode malformed strokes
//! are skipped with a diagnostic and parsing resumes at the next tag.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{precondition, Error, Result};
use crate::geometry::{BezierCurve, Point2, StrokeSequence, MAX_DEGREE};

pub const DEFAULT_PRECISION: usize = 3;

const OPEN_SEQ: &str = "<bezierseq>";
const CLOSE_SEQ: &str = "</bezierseq>";
const OPEN_CURVE: &str = "<bezier>";
const CLOSE_CURVE: &str = "</bezier>";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParseMode {
    /// Abort on the first defect.
    Strict,
    /// Keep every well-formed stroke and report the rest.
    #[default]
    Lenient,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    /// Byte offset into the parsed text.
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ParseDiagnostics {
    pub errors: Vec<Diagnostic>,
    /// Set when lenient parsing had to salvage around a defect.
    pub recovered: bool,
}

impl ParseDiagnostics {
    pub fn is_clean(&self) -> bool {
        self.errors.is_empty()
    }
}

/// A parsed program together with the text it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct BezierSeqDocument {
    pub sequence: StrokeSequence,
    pub source_text: Option<String>,
}

impl BezierSeqDocument {
    pub fn parse(text: &str, mode: ParseMode) -> Result<(Self, ParseDiagnostics)> {
        let (sequence, diags) = parse_bezierseq(text, mode)?;
        Ok((
            Self {
                sequence,
                source_text: Some(text.to_owned()),
            },
            diags,
        ))
    }

    pub fn emit(&self, precision: usize) -> Result<String> {
        emit_bezierseq(&self.sequence, precision)
    }
}

fn format_coord(v: f64, precision: usize) -> String {
    // Adding 0.0 turns -0.0 into 0.0.
    format!("{:.*}", precision, v.clamp(0.0, 1.0) + 0.0)
}

/// Serializes a normalized sequence, clamping coordinates into `[0, 1]`.
pub fn emit_bezierseq(sequence: &StrokeSequence, precision: usize) -> Result<String> {
    sequence.require_normalized()?;
    let mut out = String::from(OPEN_SEQ);
    for curve in &sequence.strokes {
        out.push_str(OPEN_CURVE);
        for (i, p) in curve.control_points().iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(
                out,
                "({} {})",
                format_coord(p.x, precision),
                format_coord(p.y, precision)
            );
        }
        out.push_str(CLOSE_CURVE);
    }
    out.push_str(CLOSE_SEQ);
    Ok(out)
}

fn find_bytes(haystack: &[u8], needle: &str) -> Option<usize> {
    haystack
        .windows(needle.len())
        .position(|w| w == needle.as_bytes())
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    mode: ParseMode,
    diags: ParseDiagnostics,
}

/// A defect that strict mode turns into an error.
struct Abort(Diagnostic);

type Step<T> = std::result::Result<T, Abort>;

impl<'a> Parser<'a> {
    fn report(&mut self, offset: usize, message: impl Into<String>) -> Step<()> {
        let d = Diagnostic {
            offset,
            message: message.into(),
        };
        match self.mode {
            ParseMode::Strict => Err(Abort(d)),
            ParseMode::Lenient => {
                self.diags.errors.push(d);
                self.diags.recovered = true;
                Ok(())
            }
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn at(&self, tag: &str) -> bool {
        self.bytes[self.pos..].starts_with(tag.as_bytes())
    }

    fn at_end(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    /// Moves to the next stroke boundary: just past a `</bezier>`, or onto a
    /// `<bezier>` / `</bezierseq>`, whichever comes first.
    fn resync(&mut self) {
        let rest = &self.bytes[self.pos..];
        let candidates = [
            find_bytes(rest, CLOSE_CURVE).map(|i| (i, CLOSE_CURVE.len())),
            find_bytes(rest, OPEN_CURVE).map(|i| (i, 0)),
            find_bytes(rest, CLOSE_SEQ).map(|i| (i, 0)),
        ];
        match candidates.into_iter().flatten().min() {
            Some((i, skip)) => self.pos += i + skip,
            None => self.pos = self.bytes.len(),
        }
    }

    fn number(&mut self) -> Option<f64> {
        let start = self.pos;
        let b = self.bytes;
        let mut i = self.pos;
        if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
            i += 1;
        }
        let mut digits = 0;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
            digits += 1;
        }
        if i < b.len() && b[i] == b'.' {
            i += 1;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
                digits += 1;
            }
        }
        if digits == 0 {
            return None;
        }
        if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
            let mut j = i + 1;
            if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
                j += 1;
            }
            let exp_start = j;
            while j < b.len() && b[j].is_ascii_digit() {
                j += 1;
            }
            if j > exp_start {
                i = j;
            }
        }
        let value: f64 = std::str::from_utf8(&b[start..i]).ok()?.parse().ok()?;
        self.pos = i;
        Some(value)
    }

    /// Parses `( x y )`; `None` leaves the cursor at the offending byte.
    fn point(&mut self) -> Option<Point2> {
        debug_assert_eq!(self.bytes[self.pos], b'(');
        self.pos += 1;
        self.skip_ws();
        let x = self.number()?;
        self.skip_ws();
        if !self.at_end() && self.bytes[self.pos] == b',' {
            self.pos += 1;
            self.skip_ws();
        }
        let y = self.number()?;
        self.skip_ws();
        if self.at_end() || self.bytes[self.pos] != b')' {
            return None;
        }
        self.pos += 1;
        Some(Point2::new(x, y))
    }

    fn clamp_point(&mut self, p: Point2, offset: usize) -> Step<Option<Point2>> {
        if !p.is_finite() {
            self.report(offset, "coordinate is not finite")?;
            return Ok(None);
        }
        let clamped = Point2::new(p.x.clamp(0.0, 1.0), p.y.clamp(0.0, 1.0));
        if clamped != p {
            self.report(
                offset,
                format!("coordinate ({} {}) outside [0, 1], clamped", p.x, p.y),
            )?;
        }
        Ok(Some(clamped))
    }

    /// Cursor is just past `<bezier>`.
    fn stroke(&mut self, tag_offset: usize) -> Step<Option<BezierCurve>> {
        let mut points = Vec::new();
        let mut valid = true;
        loop {
            self.skip_ws();
            if self.at_end() {
                self.report(tag_offset, "unterminated <bezier> element")?;
                return Ok(None);
            }
            if self.at(CLOSE_CURVE) {
                self.pos += CLOSE_CURVE.len();
                break;
            }
            let offset = self.pos;
            if self.bytes[self.pos] == b'(' {
                match self.point() {
                    Some(p) => match self.clamp_point(p, offset)? {
                        Some(p) => points.push(p),
                        None => valid = false,
                    },
                    None => {
                        let at = self.pos;
                        self.report(at, "malformed control point")?;
                        self.resync();
                        return Ok(None);
                    }
                }
            } else {
                self.report(offset, "unexpected text inside <bezier>")?;
                self.resync();
                return Ok(None);
            }
        }
        if !(2..=MAX_DEGREE + 1).contains(&points.len()) {
            self.report(
                tag_offset,
                format!(
                    "stroke has {} control points, expected 2 to {}",
                    points.len(),
                    MAX_DEGREE + 1
                ),
            )?;
            return Ok(None);
        }
        Ok(if valid {
            BezierCurve::new(points).ok()
        } else {
            None
        })
    }

    fn document(&mut self) -> Step<Vec<BezierCurve>> {
        let Some(open) = self.src.find(OPEN_SEQ) else {
            return Err(Abort(Diagnostic {
                offset: 0,
                message: "missing <bezierseq> wrapper".into(),
            }));
        };
        self.pos = open + OPEN_SEQ.len();
        let mut strokes = Vec::new();
        loop {
            self.skip_ws();
            if self.at_end() {
                self.report(self.bytes.len(), "missing </bezierseq>")?;
                break;
            }
            if self.at(CLOSE_SEQ) {
                break;
            }
            let offset = self.pos;
            if self.at(OPEN_CURVE) {
                self.pos += OPEN_CURVE.len();
                if let Some(c) = self.stroke(offset)? {
                    strokes.push(c);
                }
            } else {
                self.report(offset, "unexpected text between strokes")?;
                // Always make progress past the offending byte.
                self.pos += 1;
                self.resync();
            }
        }
        Ok(strokes)
    }
}

/// Parses program text.
///
/// A missing `<bezierseq>` opening tag is an error in both modes. In strict
/// mode any other defect is an error as well; in lenient mode it becomes a
/// diagnostic and the offending stroke is dropped.
pub fn parse_bezierseq(text: &str, mode: ParseMode) -> Result<(StrokeSequence, ParseDiagnostics)> {
    let mut parser = Parser {
        src: text,
        bytes: text.as_bytes(),
        pos: 0,
        mode,
        diags: ParseDiagnostics::default(),
    };
    match parser.document() {
        Ok(strokes) => Ok((StrokeSequence::normalized(strokes), parser.diags)),
        Err(Abort(d)) => Err(Error::Parse {
            offset: d.offset,
            message: d.message,
        }),
    }
}

fn svg_number(v: f64) -> String {
    let s = format!("{:.3}", v);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" || s.is_empty() {
        "0".to_owned()
    } else {
        s.to_owned()
    }
}

/// Renders strokes as SVG paths on a `width`×`height` canvas, flipping y to
/// raster orientation.
pub fn emit_svg(
    sequence: &StrokeSequence,
    width: u32,
    height: u32,
    stroke_width_px: f64,
) -> Result<String> {
    sequence.require_normalized()?;
    if width == 0 || height == 0 {
        return Err(precondition("SVG canvas must be non-empty"));
    }
    let (w, h) = (width as f64, height as f64);
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n"
    );
    for curve in &sequence.strokes {
        let pts: Vec<String> = curve
            .control_points()
            .iter()
            .map(|p| format!("{} {}", svg_number(p.x * w), svg_number((1.0 - p.y) * h)))
            .collect();
        let cmd = match curve.degree() {
            1 => "L",
            2 => "Q",
            _ => "C",
        };
        let _ = writeln!(
            out,
            "<path d=\"M {} {} {}\" fill=\"none\" stroke=\"black\" stroke-width=\"{}\" stroke-linecap=\"round\" stroke-linejoin=\"round\"/>",
            pts[0],
            cmd,
            pts[1..].join(" "),
            svg_number(stroke_width_px)
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}
