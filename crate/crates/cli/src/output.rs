//! Stable output formats: CSV tables, JSON documents, and minimal SVG
//! polyline plots.
//!
//! Column sets are frozen and covered by golden-file tests:
//!
//! ```text
//! quadrature: t,log_value,error,scaled,prediction,ratio
//! converge:   t,log_value,error,scaled,prediction,ratio,slope
//! montecarlo: t,p_hat,std_err,n,seed
//! ```
//!
//! Numbers use `.` as the decimal separator; empty cells mean "not defined
//! here" (e.g. scaled quantities at t ≤ 1).

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{Context, Result};
use ibm_exit::montecarlo::McEstimate;

use crate::run::Row;

pub const QUADRATURE_HEADER: &[&str] = &["t", "log_value", "error", "scaled", "prediction", "ratio"];
pub const CONVERGE_HEADER: &[&str] =
    &["t", "log_value", "error", "scaled", "prediction", "ratio", "slope"];
pub const MONTECARLO_HEADER: &[&str] = &["t", "p_hat", "std_err", "n", "seed"];

/// Shortest round-trip decimal for the usual range, scientific notation for
/// extremes so cells never balloon to hundreds of zeros.
pub fn fmt_f64(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else if v.is_finite() && (1e-4..1e15).contains(&v.abs()) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn opt_f64(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

fn write_records<W: io::Write>(
    out: W,
    header: &[&str],
    records: &[Vec<String>],
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for r in records {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes one CSV table to `path`, or to stdout when no path is configured.
pub fn write_csv(path: Option<&Path>, header: &[&str], records: &[Vec<String>]) -> Result<()> {
    match path {
        Some(p) => {
            let f = File::create(p).with_context(|| format!("cannot create {}", p.display()))?;
            write_records(f, header, records)
        }
        None => write_records(io::stdout().lock(), header, records),
    }
}

pub fn quadrature_records(rows: &[Row]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| {
            vec![
                fmt_f64(r.t),
                fmt_f64(r.est.log_value),
                fmt_f64(r.est.rel_error()),
                opt_f64(r.scaled),
                opt_f64(r.prediction),
                opt_f64(r.ratio),
            ]
        })
        .collect()
}

pub fn converge_records(rows: &[Row], slopes: &[Option<f64>]) -> Vec<Vec<String>> {
    rows.iter()
        .zip(slopes)
        .map(|(r, s)| {
            vec![
                fmt_f64(r.t),
                fmt_f64(r.est.log_value),
                fmt_f64(r.est.rel_error()),
                opt_f64(r.scaled),
                opt_f64(r.prediction),
                opt_f64(r.ratio),
                opt_f64(*s),
            ]
        })
        .collect()
}

pub fn montecarlo_records(ts: &[f64], ests: &[McEstimate]) -> Vec<Vec<String>> {
    ts.iter()
        .zip(ests)
        .map(|(&t, e)| {
            vec![
                fmt_f64(t),
                fmt_f64(e.p_hat),
                fmt_f64(e.std_err),
                e.n.to_string(),
                e.seed.to_string(),
            ]
        })
        .collect()
}

/// Writes a JSON document to `path`, with `-` (or no path where allowed)
/// meaning stdout.
pub fn write_json<T: serde::Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match path {
        Some(p) if p.as_os_str() != "-" => {
            let mut f = File::create(p).with_context(|| format!("cannot create {}", p.display()))?;
            writeln!(f, "{text}")?;
        }
        _ => println!("{text}"),
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// SVG polyline plots
// ---------------------------------------------------------------------------

/// One chart panel: named series of (x, y) points, drawn as polylines.
pub struct Panel {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<(String, Vec<(f64, f64)>)>,
}

const PANEL_W: f64 = 640.0;
const PANEL_H: f64 = 320.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 34.0;
const MARGIN_B: f64 = 42.0;
const PALETTE: &[&str] = &["#1b6ca8", "#c0392b", "#2e8b57", "#8e44ad"];

fn bbox(series: &[(String, Vec<(f64, f64)>)]) -> (f64, f64, f64, f64) {
    let (mut x0, mut x1, mut y0, mut y1) =
        (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (_, pts) in series {
        for &(x, y) in pts {
            if x.is_finite() && y.is_finite() {
                x0 = x0.min(x);
                x1 = x1.max(x);
                y0 = y0.min(y);
                y1 = y1.max(y);
            }
        }
    }
    if !x0.is_finite() {
        return (0.0, 1.0, 0.0, 1.0);
    }
    // degenerate spans get symmetric padding so the scale stays finite
    if x1 - x0 <= 0.0 {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if y1 - y0 <= 0.0 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    (x0, x1, y0, y1)
}

fn render_panel(svg: &mut String, panel: &Panel, y_off: f64) {
    use std::fmt::Write as _;
    let (x0, x1, y0, y1) = bbox(&panel.series);
    let px = |x: f64| MARGIN_L + (x - x0) / (x1 - x0) * (PANEL_W - MARGIN_L - MARGIN_R);
    let py =
        |y: f64| y_off + MARGIN_T + (y1 - y) / (y1 - y0) * (PANEL_H - MARGIN_T - MARGIN_B);
    let _ = write!(
        svg,
        r##"<rect x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="#888"/>"##,
        MARGIN_L,
        y_off + MARGIN_T,
        PANEL_W - MARGIN_L - MARGIN_R,
        PANEL_H - MARGIN_T - MARGIN_B
    );
    let _ = write!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-size="13" font-family="monospace">{}</text>"#,
        MARGIN_L,
        y_off + 20.0,
        panel.title
    );
    // four ticks per axis with value labels
    for i in 0..=3 {
        let fx = x0 + (x1 - x0) * i as f64 / 3.0;
        let fy = y0 + (y1 - y0) * i as f64 / 3.0;
        let _ = write!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-size="10" font-family="monospace" text-anchor="middle">{:.3}</text>"#,
            px(fx),
            y_off + PANEL_H - MARGIN_B + 14.0,
            fx
        );
        let _ = write!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-size="10" font-family="monospace" text-anchor="end">{:.3}</text>"#,
            MARGIN_L - 6.0,
            py(fy) + 3.0,
            fy
        );
    }
    let _ = write!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-size="11" font-family="monospace" text-anchor="middle">{}</text>"#,
        (MARGIN_L + PANEL_W - MARGIN_R) / 2.0,
        y_off + PANEL_H - 6.0,
        panel.x_label
    );
    let _ = write!(
        svg,
        r#"<text x="14" y="{:.1}" font-size="11" font-family="monospace" transform="rotate(-90 14 {:.1})" text-anchor="middle">{}</text>"#,
        y_off + PANEL_H / 2.0,
        y_off + PANEL_H / 2.0,
        panel.y_label
    );
    for (k, (name, pts)) in panel.series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let path: Vec<String> = pts
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        if !path.is_empty() {
            let _ = write!(
                svg,
                r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
                color,
                path.join(" ")
            );
        }
        let _ = write!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-size="10" font-family="monospace" fill="{}">{}</text>"#,
            PANEL_W - MARGIN_R - 150.0,
            y_off + MARGIN_T + 14.0 + 13.0 * k as f64,
            color,
            name
        );
    }
}

/// Renders stacked panels into one standalone SVG document.
pub fn render_svg(panels: &[Panel]) -> String {
    let total_h = PANEL_H * panels.len() as f64;
    let mut svg = format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{PANEL_W}" height="{total_h}" viewBox="0 0 {PANEL_W} {total_h}">"#
    );
    svg.push_str(r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (i, p) in panels.iter().enumerate() {
        render_panel(&mut svg, p, PANEL_H * i as f64);
    }
    svg.push_str("</svg>\n");
    svg
}

pub fn write_svg(path: &Path, panels: &[Panel]) -> Result<()> {
    std::fs::write(path, render_svg(panels))
        .with_context(|| format!("cannot write {}", path.display()))
}
