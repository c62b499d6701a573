use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::FigureData;
use crate::error::{Error, Result};
use crate::monogamy::Theory;
use crate::numfmt::sig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum FigureFormat {
    Svg,
    Csv,
    Json,
}

/// `beta,f_qm,f_ns,f_cond`, one row per sample; `f_qm` is empty above the
/// Tsirelson bound.
pub fn render_csv(data: &FigureData) -> String {
    let mut out = String::from("beta,f_qm,f_ns,f_cond\n");
    for s in &data.samples {
        let fq = s.f_quantum.map(sig).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{}",
            sig(s.beta),
            fq,
            sig(s.f_nosignalling),
            sig(s.f_condition)
        );
    }
    out
}

/// Pretty-printed JSON with shortest round-trip float representation.
pub fn render_json(data: &FigureData) -> String {
    let mut s = serde_json::to_string_pretty(data).expect("figure data serialises");
    s.push('\n');
    s
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 20.0;
const MARGIN_BOTTOM: f64 = 60.0;
const BETA_RANGE: (f64, f64) = (0.75, 1.0);
const F_RANGE: (f64, f64) = (0.5, 0.85);

fn x_of(beta: f64) -> f64 {
    let span = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    MARGIN_LEFT + (beta - BETA_RANGE.0) / (BETA_RANGE.1 - BETA_RANGE.0) * span
}

fn y_of(f: f64) -> f64 {
    let span = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    HEIGHT - MARGIN_BOTTOM - (f - F_RANGE.0) / (F_RANGE.1 - F_RANGE.0) * span
}

fn polyline(out: &mut String, id: &str, stroke: &str, dash: Option<&str>, points: &[(f64, f64)]) {
    if points.is_empty() {
        return;
    }
    let pts: Vec<String> = points
        .iter()
        .map(|&(b, f)| format!("{},{}", sig(x_of(b)), sig(y_of(f))))
        .collect();
    let dash = dash
        .map(|d| format!(" stroke-dasharray=\"{d}\""))
        .unwrap_or_default();
    let _ = writeln!(
        out,
        "  <polyline id=\"{id}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"2\"{dash} points=\"{}\"/>",
        pts.join(" ")
    );
}

fn marker(out: &mut String, id: &str, fill: &str, beta: f64, f: f64, label: &str) {
    let (cx, cy) = (x_of(beta), y_of(f));
    let _ = writeln!(
        out,
        "  <circle id=\"{id}\" cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"{fill}\" stroke=\"black\" stroke-width=\"1\"/>",
        sig(cx),
        sig(cy)
    );
    let _ = writeln!(
        out,
        "  <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">{label}</text>",
        sig(cx + 6.0),
        sig(cy - 6.0)
    );
}

/// Standalone SVG 1.1 rendering of the figure. Output depends only on `data`.
pub fn render_svg(data: &FigureData) -> Result<String> {
    if data.samples.is_empty() {
        return Err(Error::usage("cannot plot a figure without samples"));
    }
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = WIDTH,
        h = HEIGHT
    );
    let _ = writeln!(
        out,
        r#"  <rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );

    // axes box
    let (x0, x1) = (x_of(BETA_RANGE.0), x_of(BETA_RANGE.1));
    let (y0, y1) = (y_of(F_RANGE.0), y_of(F_RANGE.1));
    let _ = writeln!(
        out,
        r#"  <rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black" stroke-width="1"/>"#,
        sig(x0),
        sig(y1),
        sig(x1 - x0),
        sig(y0 - y1)
    );
    for k in 0..=5 {
        let b = BETA_RANGE.0 + 0.05 * k as f64;
        let x = sig(x_of(b));
        let _ = writeln!(
            out,
            r#"  <line x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="black" stroke-width="1"/>"#,
            sig(y0),
            sig(y0 + 5.0)
        );
        let _ = writeln!(
            out,
            r#"  <text x="{x}" y="{}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
            sig(y0 + 18.0),
            sig(b)
        );
    }
    for k in 0..=7 {
        let f = F_RANGE.0 + 0.05 * k as f64;
        let y = sig(y_of(f));
        let _ = writeln!(
            out,
            r#"  <line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="black" stroke-width="1"/>"#,
            sig(x0 - 5.0),
            sig(x0)
        );
        let _ = writeln!(
            out,
            r#"  <text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"#,
            sig(x0 - 8.0),
            sig(y_of(f) + 4.0),
            sig(f)
        );
    }
    let _ = writeln!(
        out,
        r#"  <text x="{}" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle">β (Alice–Bob CHSH winning probability)</text>"#,
        sig((x0 + x1) / 2.0),
        sig(HEIGHT - 15.0)
    );
    let _ = writeln!(
        out,
        r#"  <text x="18" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 18 {})">f (max Alice–Eve winning probability)</text>"#,
        sig((y0 + y1) / 2.0),
        sig((y0 + y1) / 2.0)
    );

    let quantum: Vec<(f64, f64)> = data
        .samples
        .iter()
        .filter_map(|s| s.f_quantum.map(|f| (s.beta, f)))
        .collect();
    let nosig: Vec<(f64, f64)> = data
        .samples
        .iter()
        .map(|s| (s.beta, s.f_nosignalling))
        .collect();
    let boundary: Vec<(f64, f64)> = data
        .samples
        .iter()
        .map(|s| (s.beta, s.f_condition))
        .collect();
    polyline(&mut out, "curve-quantum", "#1f77b4", None, &quantum);
    polyline(&mut out, "curve-no-signalling", "#d62728", None, &nosig);
    polyline(
        &mut out,
        "curve-condition",
        "#2ca02c",
        Some("6 4"),
        &boundary,
    );

    marker(
        &mut out,
        "point-p",
        "black",
        data.point_p.beta,
        data.point_p.f,
        "P",
    );
    for i in &data.intersections {
        let (id, fill) = match i.theory {
            Theory::Quantum => ("intersection-quantum", "#1f77b4"),
            Theory::NoSignalling => ("intersection-no-signalling", "#d62728"),
            Theory::Custom => ("intersection-custom", "#9467bd"),
        };
        marker(&mut out, id, fill, i.beta, i.f, &sig(i.beta));
    }

    let legend = [
        ("#1f77b4", "quantum monogamy"),
        ("#d62728", "no-signalling monogamy"),
        ("#2ca02c", "security boundary (3 − h(β))/4"),
    ];
    for (k, (color, label)) in legend.iter().enumerate() {
        let y = MARGIN_TOP + 20.0 + 18.0 * k as f64;
        let lx = x1 - 230.0;
        let _ = writeln!(
            out,
            r#"  <line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{color}" stroke-width="2"/>"#,
            sig(lx),
            sig(y),
            sig(lx + 24.0),
            sig(y)
        );
        let _ = writeln!(
            out,
            r#"  <text x="{}" y="{}" font-family="sans-serif" font-size="12">{label}</text>"#,
            sig(lx + 30.0),
            sig(y + 4.0)
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub fn emit_svg(data: &FigureData, path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &render_svg(data)?)
}

pub fn emit_csv(data: &FigureData, path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &render_csv(data))
}

pub fn emit_json(data: &FigureData, path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &render_json(data))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::figio::sample_figure;

    #[test]
    fn csv_contract() {
        let csv = render_csv(&sample_figure(3).unwrap());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "beta,f_qm,f_ns,f_cond");
        assert!(lines[1].starts_with("0.75,0.75,0.75,"));
        assert!(lines[2].starts_with("0.875,,0.625,"));
        assert!(lines[3].starts_with("1,,0.5,0.75"));
    }

    #[test]
    fn svg_rejects_empty() {
        let mut fig = sample_figure(2).unwrap();
        fig.samples.clear();
        assert!(render_svg(&fig).is_err());
    }

    #[test]
    fn unwritable_path() {
        let fig = sample_figure(2).unwrap();
        let err = emit_svg(&fig, "/nonexistent-dir/fig.svg").unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }
}
