//! JSON, CSV and SVG writers.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use fovk::error::Result;
use serde::Serialize;

/// Version of the JSON documents written by the CLI.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
struct Versioned<'a, T: Serialize> {
    schema_version: u32,
    #[serde(flatten)]
    body: &'a T,
}

pub fn write_json<T: Serialize>(path: &Path, body: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(&Versioned {
        schema_version: SCHEMA_VERSION,
        body,
    })?;
    s.push('\n');
    fs::write(path, s)?;
    Ok(())
}

pub fn write_csv<R: Serialize>(path: &Path, rows: &[R]) -> Result<()> {
    let io = |e: csv::Error| fovk::Error::Io(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    for r in rows {
        w.serialize(r).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

pub struct Series<'a> {
    pub label: &'a str,
    pub color: &'a str,
    pub dashed: bool,
    pub points: Vec<(f64, f64)>,
}

const W: f64 = 560.0;
const H: f64 = 380.0;
const PAD: f64 = 48.0;

/// Semilog plot of positive values against degree or iteration.
pub fn overlay_svg(title: &str, series: &[Series]) -> String {
    let floor = 1e-16;
    let x_max = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.0))
        .fold(1.0f64, f64::max);
    let ys = series.iter().flat_map(|s| s.points.iter().map(|p| p.1.max(floor)));
    let (lo, hi) = ys.fold((f64::MAX, f64::MIN), |(a, b), y| (a.min(y), b.max(y)));
    let (lo, hi) = if lo > hi { (1e-8, 1.0) } else { (lo, hi) };
    let d_lo = lo.log10().floor();
    let d_hi = hi.log10().ceil().max(d_lo + 1.0);
    let px = |x: f64| PAD + x / x_max * (W - 2.0 * PAD);
    let py = |y: f64| H - PAD - (y.max(floor).log10() - d_lo) / (d_hi - d_lo) * (H - 2.0 * PAD);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let mut d = d_lo;
    while d <= d_hi {
        let y = py(10f64.powf(d));
        let _ = writeln!(
            s,
            r##"<line x1="{PAD}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/><text x="4" y="{:.2}" font-family="sans-serif" font-size="10">1e{d}</text>"##,
            W - PAD,
            y + 3.0
        );
        d += 1.0;
    }
    let _ = writeln!(
        s,
        r##"<rect x="{PAD}" y="{PAD}" width="{:.2}" height="{:.2}" fill="none" stroke="#888888"/>"##,
        W - 2.0 * PAD,
        H - 2.0 * PAD
    );
    for (k, se) in series.iter().enumerate() {
        if se.points.is_empty() {
            continue;
        }
        let pts: Vec<String> = se.points.iter().map(|(x, y)| format!("{:.2},{:.2}", px(*x), py(*y))).collect();
        let dash = if se.dashed { r#" stroke-dasharray="5 3""# } else { "" };
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"{dash}/>"#,
            pts.join(" "),
            se.color
        );
        let ly = PAD + 14.0 * (k as f64 + 1.0);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{ly:.2}" font-family="sans-serif" font-size="11" fill="{}">{}</text>"#,
            W - PAD - 150.0,
            se.color,
            se.label
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{PAD}" y="20" font-family="sans-serif" font-size="12">{title}</text>"#
    );
    s.push_str("</svg>\n");
    s
}
