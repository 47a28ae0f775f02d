//! Plain SVG line plots of CSV columns.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which columns to draw.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlotSpec {
    pub x: String,
    pub y: String,
    /// Half-height of an error bar at each point.
    pub err: Option<String>,
    /// One line per distinct value of this column.
    pub group: Option<String>,
    pub title: String,
}

impl PlotSpec {
    /// `p_hat` against `m` with `se` bars, one line per `n`.
    pub fn threshold() -> Self {
        Self {
            x: "m".into(),
            y: "p_hat".into(),
            err: Some("se".into()),
            group: Some("n".into()),
            title: "rainbow perfect matching probability".into(),
        }
    }
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 56.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

struct Point {
    x: f64,
    y: f64,
    err: f64,
}

fn column(headers: &csv::StringRecord, name: &str) -> Result<usize> {
    headers
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| Error::Parse(format!("CSV has no column {name:?}")))
}

fn number(record: &csv::StringRecord, idx: usize, line: usize) -> Result<f64> {
    let field = record.get(idx).unwrap_or("");
    field
        .parse()
        .map_err(|_| Error::Parse(format!("line {line}: {field:?} is not a number")))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Render `spec` from CSV text as an SVG document. The output depends only
/// on the input bytes.
pub fn emit_plot(csv_text: &str, spec: &PlotSpec) -> Result<String> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(csv_text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::Parse(e.to_string()))?
        .clone();
    if headers.is_empty() || headers.iter().all(str::is_empty) {
        return Err(Error::Parse("empty CSV".into()));
    }
    let xi = column(&headers, &spec.x)?;
    let yi = column(&headers, &spec.y)?;
    let ei = spec
        .err
        .as_deref()
        .map(|e| column(&headers, e))
        .transpose()?;
    let gi = spec
        .group
        .as_deref()
        .map(|g| column(&headers, g))
        .transpose()?;

    let mut series: BTreeMap<String, Vec<Point>> = BTreeMap::new();
    for (r, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        let line = r + 2;
        let point = Point {
            x: number(&record, xi, line)?,
            y: number(&record, yi, line)?,
            err: ei
                .map(|i| number(&record, i, line))
                .transpose()?
                .unwrap_or(0.0),
        };
        let key = gi
            .map(|i| record.get(i).unwrap_or("").to_string())
            .unwrap_or_default();
        series.entry(key).or_default().push(point);
    }
    if series.is_empty() {
        return Err(Error::Parse("CSV has no data rows".into()));
    }

    let all = series.values().flatten();
    let (mut x0, mut x1, mut y0, mut y1) = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for p in all {
        x0 = x0.min(p.x);
        x1 = x1.max(p.x);
        y0 = y0.min(p.y - p.err);
        y1 = y1.max(p.y + p.err);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut svg = String::new();
    let w = &mut svg;
    writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .unwrap();
    writeln!(w, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        w,
        r#"<text x="{:.1}" y="24" text-anchor="middle" font-family="sans-serif" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(&spec.title)
    )
    .unwrap();
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    writeln!(
        w,
        r#"<path d="M{left:.1},{top:.1} L{left:.1},{bottom:.1} L{right:.1},{bottom:.1}" stroke="black" fill="none"/>"#
    )
    .unwrap();
    for (t, anchor, x) in [(x0, "start", left), (x1, "end", right)] {
        writeln!(
            w,
            r#"<text x="{x:.1}" y="{:.1}" text-anchor="{anchor}" font-family="sans-serif" font-size="11">{t}</text>"#,
            bottom + 18.0
        )
        .unwrap();
    }
    writeln!(
        w,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-family="sans-serif" font-size="12">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 14.0,
        escape(&spec.x)
    )
    .unwrap();
    for (v, y) in [(y0, bottom), (y1, top)] {
        writeln!(
            w,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end" font-family="sans-serif" font-size="11">{v:.3}</text>"#,
            left - 6.0,
            y + 4.0
        )
        .unwrap();
    }
    writeln!(
        w,
        r#"<text x="16" y="{:.1}" text-anchor="middle" font-family="sans-serif" font-size="12" transform="rotate(-90 16 {:.1})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(&spec.y)
    )
    .unwrap();

    for (s, (name, points)) in series.iter().enumerate() {
        let color = PALETTE[s % PALETTE.len()];
        let mut pts: Vec<&Point> = points.iter().collect();
        pts.sort_by(|a, b| a.x.total_cmp(&b.x));
        let path: Vec<String> = pts
            .iter()
            .enumerate()
            .map(|(i, p)| {
                format!(
                    "{}{:.2},{:.2}",
                    if i == 0 { 'M' } else { 'L' },
                    sx(p.x),
                    sy(p.y)
                )
            })
            .collect();
        writeln!(
            w,
            r#"<path d="{}" stroke="{color}" fill="none"/>"#,
            path.join(" ")
        )
        .unwrap();
        for p in &pts {
            if p.err > 0.0 {
                writeln!(
                    w,
                    r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="{color}"/>"#,
                    sy(p.y - p.err),
                    sy(p.y + p.err),
                    x = sx(p.x)
                )
                .unwrap();
            }
            writeln!(
                w,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                sx(p.x),
                sy(p.y)
            )
            .unwrap();
        }
        if let Some(g) = &spec.group {
            writeln!(
                w,
                r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" fill="{color}">{}={}</text>"#,
                right - 70.0,
                top + 14.0 * (s as f64 + 1.0),
                escape(g),
                escape(name)
            )
            .unwrap();
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
