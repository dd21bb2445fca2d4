//! `key = value` configuration files.

use crate::extraction::ExtractionConfig;
use crate::metrics::MetricConfig;
use crate::rendering::AxisOverlayConfig;

use super::{ExtractionFlags, MetricFlags, OverlayFlags};

/// All tunable configuration, starting from defaults.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConfigSet {
    pub extraction: ExtractionConfig,
    pub metric: MetricConfig,
    pub overlay: AxisOverlayConfig,
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
    value
        .parse()
        .map_err(|_| format!("invalid value `{value}` for `{key}`"))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, String> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(format!("invalid value `{value}` for `{key}`")),
    }
}

impl ConfigSet {
    /// Sets one field by name. Keys are the field names, with `-` and `_`
    /// interchangeable.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let (e, m, o) = (&mut self.extraction, &mut self.metric, &mut self.overlay);
        match key.replace('-', "_").as_str() {
            "binarize_threshold" => e.binarize_threshold = value.parse()?,
            "rdp_epsilon" => e.rdp_epsilon = parse(key, value)?,
            "merge_gap" => e.merge_gap = parse(key, value)?,
            "merge_angle" => e.merge_angle = parse(key, value)?,
            "min_path_pixels" => e.min_path_pixels = parse(key, value)?,
            "fit_tolerance" => e.fit_tolerance = parse(key, value)?,
            "sample_count" => m.sample_count = parse(key, value)?,
            "w_distance" => m.w_distance = parse(key, value)?,
            "w_length" => m.w_length = parse(key, value)?,
            "w_angle" => m.w_angle = parse(key, value)?,
            "sigmoid_center" => m.sigmoid_center = parse(key, value)?,
            "sigmoid_steepness" => m.sigmoid_steepness = parse(key, value)?,
            "apply_sigmoid" => m.apply_sigmoid = parse_bool(key, value)?,
            "margin_frac" => o.margin_frac = parse(key, value)?,
            "tick_step" => o.tick_step = parse(key, value)?,
            "label_decimals" => o.label_decimals = parse(key, value)?,
            "glyph_stroke_px" => o.glyph_stroke_px = parse(key, value)?,
            "size" => o.size = parse(key, value)?,
            _ => return Err(format!("unknown configuration key `{key}`")),
        }
        Ok(())
    }

    pub(super) fn apply_extraction(&mut self, f: &ExtractionFlags) {
        let e = &mut self.extraction;
        if let Some(v) = f.binarize_threshold {
            e.binarize_threshold = v;
        }
        if let Some(v) = f.rdp_epsilon {
            e.rdp_epsilon = v;
        }
        if let Some(v) = f.merge_gap {
            e.merge_gap = v;
        }
        if let Some(v) = f.merge_angle {
            e.merge_angle = v;
        }
        if let Some(v) = f.min_path_pixels {
            e.min_path_pixels = v;
        }
        if let Some(v) = f.fit_tolerance {
            e.fit_tolerance = v;
        }
    }

    pub(super) fn apply_metric(&mut self, f: &MetricFlags) {
        let m = &mut self.metric;
        if let Some(v) = f.sample_count {
            m.sample_count = v;
        }
        if let Some(v) = f.w_distance {
            m.w_distance = v;
        }
        if let Some(v) = f.w_length {
            m.w_length = v;
        }
        if let Some(v) = f.w_angle {
            m.w_angle = v;
        }
        if let Some(v) = f.sigmoid_center {
            m.sigmoid_center = v;
        }
        if let Some(v) = f.sigmoid_steepness {
            m.sigmoid_steepness = v;
        }
        if f.no_sigmoid {
            m.apply_sigmoid = false;
        }
    }

    pub(super) fn apply_overlay(&mut self, f: &OverlayFlags) {
        let o = &mut self.overlay;
        if let Some(v) = f.margin_frac {
            o.margin_frac = v;
        }
        if let Some(v) = f.tick_step {
            o.tick_step = v;
        }
        if let Some(v) = f.label_decimals {
            o.label_decimals = v;
        }
        if let Some(v) = f.glyph_stroke_px {
            o.glyph_stroke_px = v;
        }
        if let Some(v) = f.size {
            o.size = v;
        }
    }
}

/// Applies a configuration file: one `key = value` per line, `#` comments
/// and blank lines ignored.
pub fn apply_config_text(set: &mut ConfigSet, text: &str) -> Result<(), String> {
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key=value", n + 1))?;
        set.set(key.trim(), value.trim())
            .map_err(|e| format!("line {}: {e}", n + 1))?;
    }
    Ok(())
}
