use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::json;

use crate::extraction::{extract_glyph, RasterImage};
use crate::geometry::StrokeSequence;
use crate::metrics::{format_percent, geometric_score, MetricConfig, ScoreReport, Tally};
use crate::rendering::{rasterize_strokes, render_axis_overlay, GlyphSource};
use crate::serialization::{emit_bezierseq, emit_svg, parse_bezierseq, ParseMode};

use super::config::{apply_config_text, ConfigSet};
use super::{
    BatchScoreArgs, ConfigSnapshot, ExtractArgs, FileStatus, OverlayArgs, RenderArgs, RunManifest,
    ScoreArgs, WinrateArgs, EXIT_OK, EXIT_PARTIAL,
};

type CmdResult = Result<i32, String>;

const PROGRAM_EXT: &str = "bezierseq";
const SVG_STROKE_PX: f64 = 3.0;

fn load_config(path: Option<&Path>) -> Result<ConfigSet, String> {
    let mut set = ConfigSet::default();
    if let Some(p) = path {
        let text = fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
        apply_config_text(&mut set, &text).map_err(|e| format!("{}: {e}", p.display()))?;
    }
    Ok(set)
}

fn snapshot(set: &ConfigSet) -> ConfigSnapshot {
    ConfigSnapshot {
        extraction: set.extraction.clone(),
        metric: set.metric.clone(),
        overlay: set.overlay.clone(),
    }
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, String> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| e.to_string())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), String> {
    fs::write(path, bytes).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(out: &mut dyn Write, line: impl std::fmt::Display) -> Result<(), String> {
    writeln!(out, "{line}").map_err(|e| e.to_string())
}

fn sibling(input: &Path, dir: Option<&Path>, suffix: &str) -> PathBuf {
    let stem = input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let dir = dir
        .map(Path::to_path_buf)
        .unwrap_or_else(|| input.parent().map(Path::to_path_buf).unwrap_or_default());
    dir.join(format!("{stem}{suffix}"))
}

fn write_manifest(path: &Path, manifest: &RunManifest) -> Result<(), String> {
    let mut text = serde_json::to_string_pretty(manifest).map_err(|e| e.to_string())?;
    text.push('\n');
    write_file(path, text.as_bytes())
}

/// Reads and parses a program, forwarding lenient-mode diagnostics to `stderr`.
fn read_program(path: &Path, mode: ParseMode, stderr: &mut dyn Write) -> Result<StrokeSequence, String> {
    let (seq, diags) = load_program(path, mode)?;
    for d in diags {
        let _ = writeln!(stderr, "warning: {d}");
    }
    Ok(seq)
}

fn load_program(path: &Path, mode: ParseMode) -> Result<(StrokeSequence, Vec<String>), String> {
    let bytes = fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let text = String::from_utf8_lossy(&bytes);
    let (seq, diags) = parse_bezierseq(&text, mode).map_err(|e| format!("{}: {e}", path.display()))?;
    let notes = diags
        .errors
        .iter()
        .map(|d| format!("{}: byte {}: {}", path.display(), d.offset, d.message))
        .collect();
    Ok((seq, notes))
}

fn extract_one(input: &Path, outputs: &[PathBuf], set: &ConfigSet, svg: bool, precision: usize) -> Result<usize, String> {
    let bytes = fs::read(input).map_err(|e| e.to_string())?;
    let image = RasterImage::decode(&bytes).map_err(|e| e.to_string())?;
    let seq = extract_glyph(&image, &set.extraction).map_err(|e| e.to_string())?;
    let text = emit_bezierseq(&seq, precision).map_err(|e| e.to_string())?;
    write_file(&outputs[0], format!("{text}\n").as_bytes())?;
    if svg {
        let side = image.width().max(image.height());
        let doc = emit_svg(&seq, side, side, SVG_STROKE_PX).map_err(|e| e.to_string())?;
        write_file(&outputs[1], doc.as_bytes())?;
    }
    Ok(seq.len())
}

pub(super) fn extract(args: ExtractArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    let mut set = load_config(args.config.as_deref())?;
    set.apply_extraction(&args.extraction);
    set.extraction.validate().map_err(|e| e.to_string())?;
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    }

    let mut claimed = BTreeSet::new();
    let plan: Vec<(PathBuf, Vec<PathBuf>, bool)> = args
        .inputs
        .iter()
        .map(|input| {
            let mut outs = vec![sibling(input, args.out.as_deref(), &format!(".{PROGRAM_EXT}"))];
            if args.svg {
                outs.push(sibling(input, args.out.as_deref(), ".svg"));
            }
            let fresh = claimed.insert(outs[0].clone());
            (input.clone(), outs, fresh)
        })
        .collect();

    let files: Vec<FileStatus> = pool(args.jobs)?.install(|| {
        plan.par_iter()
            .map(|(input, outs, fresh)| {
                let result = if *fresh {
                    extract_one(input, outs, &set, args.svg, args.precision)
                } else {
                    Err(format!("output {} collides with an earlier input", outs[0].display()))
                };
                let input = input.display().to_string();
                match result {
                    Ok(n) => FileStatus {
                        input,
                        status: "ok".into(),
                        outputs: outs.iter().map(|p| p.display().to_string()).collect(),
                        strokes: Some(n),
                        error: None,
                    },
                    Err(e) => FileStatus {
                        input,
                        status: "failed".into(),
                        outputs: Vec::new(),
                        strokes: None,
                        error: Some(e),
                    },
                }
            })
            .collect()
    });

    let mut failed = false;
    for f in &files {
        match &f.error {
            None => emit(stdout, format!("ok {} -> {}", f.input, f.outputs.join(", ")))?,
            Some(e) => {
                failed = true;
                let _ = writeln!(stderr, "failed {}: {e}", f.input);
            }
        }
    }
    let manifest_path = args.manifest.clone().unwrap_or_else(|| {
        let dir = args
            .out
            .clone()
            .or_else(|| args.inputs[0].parent().map(Path::to_path_buf))
            .unwrap_or_default();
        dir.join("manifest.json")
    });
    write_manifest(&manifest_path, &RunManifest::new("extract", snapshot(&set), files))?;
    Ok(if failed { EXIT_PARTIAL } else { EXIT_OK })
}

fn mode(strict: bool) -> ParseMode {
    if strict {
        ParseMode::Strict
    } else {
        ParseMode::Lenient
    }
}

pub(super) fn score(args: ScoreArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    let mut set = load_config(args.config.as_deref())?;
    set.apply_metric(&args.metric);
    set.metric.validate().map_err(|e| e.to_string())?;
    let gt = read_program(&args.gt, ParseMode::Strict, stderr)?;
    let gen = read_program(&args.gen, mode(args.strict), stderr)?;
    let report = geometric_score(&gt, &gen, &set.metric).map_err(|e| e.to_string())?;
    emit(stdout, serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?)?;
    Ok(EXIT_OK)
}

fn program_names(dir: &Path) -> Result<BTreeMap<String, PathBuf>, String> {
    let entries = fs::read_dir(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    let mut out = BTreeMap::new();
    for entry in entries {
        let path = entry.map_err(|e| e.to_string())?.path();
        if path.is_file() && path.extension().is_some_and(|x| x == PROGRAM_EXT) {
            if let Some(name) = path.file_name() {
                out.insert(name.to_string_lossy().into_owned(), path);
            }
        }
    }
    Ok(out)
}

enum PairOutcome {
    Scored(ScoreReport),
    Missing(ScoreReport),
    Skipped,
    Failed(String),
}

fn score_pair(gt: &Path, gen: Option<&Path>, metric: &MetricConfig, strict: bool, missing_as_zero: bool) -> PairOutcome {
    let run = || -> Result<PairOutcome, String> {
        let gt_seq = load_program(gt, ParseMode::Strict)?.0;
        match gen {
            Some(g) => {
                let gen_seq = load_program(g, mode(strict))?.0;
                geometric_score(&gt_seq, &gen_seq, metric)
                    .map(PairOutcome::Scored)
                    .map_err(|e| e.to_string())
            }
            None if missing_as_zero => geometric_score(&gt_seq, &StrokeSequence::empty(), metric)
                .map(PairOutcome::Missing)
                .map_err(|e| e.to_string()),
            None => Ok(PairOutcome::Skipped),
        }
    };
    run().unwrap_or_else(PairOutcome::Failed)
}

fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        0.0
    } else {
        values.iter().sum::<f64>() / values.len() as f64
    }
}

pub(super) fn batch_score(args: BatchScoreArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    let mut set = load_config(args.config.as_deref())?;
    set.apply_metric(&args.metric);
    set.metric.validate().map_err(|e| e.to_string())?;
    let gt = program_names(&args.gt_dir)?;
    let gen = program_names(&args.gen_dir)?;
    if !gt.keys().any(|k| gen.contains_key(k)) {
        return Err(format!(
            "no matching .{PROGRAM_EXT} file names in {} and {}",
            args.gt_dir.display(),
            args.gen_dir.display()
        ));
    }

    let pairs: Vec<(&String, &PathBuf, Option<&PathBuf>)> =
        gt.iter().map(|(name, path)| (name, path, gen.get(name))).collect();
    let outcomes: Vec<PairOutcome> = pool(args.jobs)?.install(|| {
        pairs
            .par_iter()
            .map(|(_, g, h)| score_pair(g, h.map(PathBuf::as_path), &set.metric, args.strict, args.missing_as_zero))
            .collect()
    });

    let mut scored: Vec<&ScoreReport> = Vec::new();
    let (mut missing, mut skipped, mut failed) = (Vec::new(), Vec::new(), Vec::new());
    let mut files = Vec::new();
    for ((name, gt_path, _), outcome) in pairs.iter().zip(&outcomes) {
        let (status, error) = match outcome {
            PairOutcome::Scored(r) => {
                scored.push(r);
                emit(stdout, json!({"name": name, "status": "ok", "report": r}))?;
                ("ok", None)
            }
            PairOutcome::Missing(r) => {
                scored.push(r);
                missing.push(name.as_str());
                emit(stdout, json!({"name": name, "status": "missing", "report": r}))?;
                ("missing", None)
            }
            PairOutcome::Skipped => {
                skipped.push(name.as_str());
                emit(stdout, json!({"name": name, "status": "skipped"}))?;
                ("skipped", None)
            }
            PairOutcome::Failed(e) => {
                failed.push(name.as_str());
                let _ = writeln!(stderr, "failed {name}: {e}");
                emit(stdout, json!({"name": name, "status": "failed", "error": e}))?;
                ("failed", Some(e.clone()))
            }
        };
        files.push(FileStatus {
            input: gt_path.display().to_string(),
            status: status.into(),
            outputs: Vec::new(),
            strokes: None,
            error,
        });
    }
    let unmatched: Vec<&str> = gen.keys().filter(|k| !gt.contains_key(*k)).map(String::as_str).collect();
    let pick = |f: fn(&ScoreReport) -> f64| mean(&scored.iter().map(|r| f(r)).collect::<Vec<_>>());
    let summary = json!({"summary": {
        "scored": scored.len(),
        "mean_geometric": pick(|r| r.geometric),
        "mean_distance": pick(|r| r.distance),
        "mean_angle": pick(|r| r.angle),
        "mean_length": pick(|r| r.length),
        "missing": missing,
        "skipped": skipped,
        "failed": failed,
        "unmatched_gen": unmatched,
    }});
    emit(stdout, summary)?;
    if let Some(path) = &args.manifest {
        write_manifest(path, &RunManifest::new("batch-score", snapshot(&set), files))?;
    }
    Ok(if failed.is_empty() { EXIT_OK } else { EXIT_PARTIAL })
}

pub(super) fn render(args: RenderArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    let seq = read_program(&args.input, ParseMode::Lenient, stderr)?;
    let png = match (&args.png, &args.pgm, &args.svg) {
        (None, None, None) => Some(sibling(&args.input, None, ".png")),
        _ => args.png.clone(),
    };
    let canvas = rasterize_strokes(&seq, (args.size, args.size), args.stroke_width).map_err(|e| e.to_string())?;
    if let Some(p) = png {
        write_file(&p, &canvas.to_png().map_err(|e| e.to_string())?)?;
        emit(stdout, format!("wrote {}", p.display()))?;
    }
    if let Some(p) = &args.pgm {
        write_file(p, &canvas.to_pgm().map_err(|e| e.to_string())?)?;
        emit(stdout, format!("wrote {}", p.display()))?;
    }
    if let Some(p) = &args.svg {
        let doc = emit_svg(&seq, args.size, args.size, args.stroke_width).map_err(|e| e.to_string())?;
        write_file(p, doc.as_bytes())?;
        emit(stdout, format!("wrote {}", p.display()))?;
    }
    Ok(EXIT_OK)
}

pub(super) fn overlay(args: OverlayArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    let mut set = load_config(args.config.as_deref())?;
    set.apply_overlay(&args.overlay);
    set.overlay.validate().map_err(|e| e.to_string())?;
    let is_program = args.input.extension().is_some_and(|x| x == PROGRAM_EXT);
    let canvas = if is_program {
        let seq = read_program(&args.input, ParseMode::Lenient, stderr)?;
        render_axis_overlay(GlyphSource::Strokes(&seq), &set.overlay)
    } else {
        let bytes = fs::read(&args.input).map_err(|e| format!("{}: {e}", args.input.display()))?;
        let image = RasterImage::decode(&bytes).map_err(|e| format!("{}: {e}", args.input.display()))?;
        render_axis_overlay(GlyphSource::Image(&image), &set.overlay)
    }
    .map_err(|e| e.to_string())?;
    let out = args.out.clone().unwrap_or_else(|| sibling(&args.input, None, ".overlay.png"));
    write_file(&out, &canvas.to_png().map_err(|e| e.to_string())?)?;
    emit(stdout, format!("wrote {}", out.display()))?;
    Ok(EXIT_OK)
}

/// Parses `wins,ties,losses` rows, with an optional leading label column.
/// A first line that is not numeric is taken as a header.
fn parse_winrate_csv(text: &str) -> Result<Vec<(String, Tally)>, String> {
    let mut rows = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let (label, nums) = match fields.len() {
            3 => (None, &fields[..]),
            4 => (Some(fields[0]), &fields[1..]),
            k => return Err(format!("line {}: expected 3 or 4 fields, got {k}", n + 1)),
        };
        let parsed: Result<Vec<u64>, _> = nums.iter().map(|s| s.parse::<u64>()).collect();
        match parsed {
            Ok(v) => {
                let label = label.map_or_else(|| (rows.len() + 1).to_string(), str::to_owned);
                rows.push((label, Tally::new(v[0], v[1], v[2])));
            }
            Err(_) if rows.is_empty() && n == first_content_line(text) => continue,
            Err(_) => return Err(format!("line {}: counts must be non-negative integers", n + 1)),
        }
    }
    Ok(rows)
}

fn first_content_line(text: &str) -> usize {
    text.lines()
        .position(|l| !l.trim().is_empty() && !l.trim().starts_with('#'))
        .unwrap_or(0)
}

pub(super) fn winrate(args: WinrateArgs, stdout: &mut dyn Write) -> CmdResult {
    if !args.counts.len().is_multiple_of(3) {
        return Err("counts must come in `wins ties losses` triplets".into());
    }
    let mut rows: Vec<(String, Tally)> = args
        .counts
        .chunks(3)
        .enumerate()
        .map(|(i, c)| ((i + 1).to_string(), Tally::new(c[0], c[1], c[2])))
        .collect();
    if let Some(path) = &args.csv {
        let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        rows.extend(parse_winrate_csv(&text).map_err(|e| format!("{}: {e}", path.display()))?);
    }
    if rows.is_empty() {
        return Err("no counts given".into());
    }
    let mut lines = Vec::new();
    for (label, t) in &rows {
        let rate = t.win_rate().map_err(|e| format!("row {label}: {e}"))?;
        lines.push(format!("{label}: {}", format_percent(rate)));
    }
    if rows.len() > 1 {
        let pooled: Tally = rows.iter().map(|r| r.1).sum();
        lines.push(format!("pooled: {}", format_percent(pooled.win_rate().map_err(|e| e.to_string())?)));
    }
    for l in lines {
        emit(stdout, l)?;
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_rows() {
        let rows = parse_winrate_csv("annotator,wins,ties,losses\nA1,142,7,1\n\nA5, 114, 34, 2\n").unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0], ("A1".to_owned(), Tally::new(142, 7, 1)));
        let bare = parse_winrate_csv("1,2,3\n").unwrap();
        assert_eq!(bare[0].0, "1");
        assert!(parse_winrate_csv("1,2,3\nx,y,z\n").is_err());
        assert!(parse_winrate_csv("1,2\n").is_err());
    }
}
