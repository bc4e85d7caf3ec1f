//! CSV schemas for curves and sample clouds.
//!
//! All floats are printed with 17 significant digits, enough to round-trip
//! an f64 exactly. The left curve endpoint has no finite supporting slope;
//! its `alpha` field is written as `-inf` (which `f64::from_str` accepts).

use uncurve_core::uncertainty::{SpreadPoint, UncertaintyCurve};

fn fmt(x: f64) -> String {
    if x == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{x:.16e}")
    }
}

/// `alpha,spectral_spread,graph_spread,lower_gap`, one row per curve point
/// sorted by spectral spread; `lower_gap` is the certified bound gap of the
/// segment to the right of the point (0 for the last row).
pub fn write_curve(curve: &UncertaintyCurve) -> String {
    let mut out = String::from("alpha,spectral_spread,graph_spread,lower_gap\n");
    for (i, pt) in curve.points().iter().enumerate() {
        let alpha = pt.alpha.unwrap_or(f64::NEG_INFINITY);
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt(alpha),
            fmt(pt.s),
            fmt(pt.g),
            fmt(curve.segment_gap(i))
        ));
    }
    out
}

/// `spectral_spread,graph_spread`, one row per point.
pub fn write_cloud(points: &[SpreadPoint]) -> String {
    let mut out = String::from("spectral_spread,graph_spread\n");
    for pt in points {
        out.push_str(&format!("{},{}\n", fmt(pt.s), fmt(pt.g)));
    }
    out
}

#[derive(Debug, Clone, Copy)]
pub struct CurveRow {
    /// Supporting-line slope; kept so parsed rows carry the full schema.
    #[allow(dead_code)]
    pub alpha: f64,
    pub s: f64,
    pub g: f64,
    pub lower_gap: f64,
}

fn parse_f64(field: &str, line: usize) -> Result<f64, String> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|_| format!("line {line}: bad number {field:?}"))
}

pub fn parse_curve(text: &str) -> Result<Vec<CurveRow>, String> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == "alpha,spectral_spread,graph_spread,lower_gap" => {}
        other => {
            return Err(format!(
                "expected curve CSV header, got {:?}",
                other.map(|(_, h)| h)
            ))
        }
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(format!("line {}: expected 4 fields", i + 1));
        }
        rows.push(CurveRow {
            alpha: parse_f64(fields[0], i + 1)?,
            s: parse_f64(fields[1], i + 1)?,
            g: parse_f64(fields[2], i + 1)?,
            lower_gap: parse_f64(fields[3], i + 1)?,
        });
    }
    if rows.is_empty() {
        return Err("curve CSV has no data rows".to_string());
    }
    Ok(rows)
}

pub fn parse_cloud(text: &str) -> Result<Vec<(f64, f64)>, String> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == "spectral_spread,graph_spread" => {}
        other => {
            return Err(format!(
                "expected cloud CSV header, got {:?}",
                other.map(|(_, h)| h)
            ))
        }
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 2 {
            return Err(format!("line {}: expected 2 fields", i + 1));
        }
        rows.push((parse_f64(fields[0], i + 1)?, parse_f64(fields[1], i + 1)?));
    }
    if rows.is_empty() {
        return Err("cloud CSV has no data rows".to_string());
    }
    Ok(rows)
}
