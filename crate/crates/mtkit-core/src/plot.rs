//! Minimal deterministic SVG plotting for experiment CSV output. The
//! renderer is intentionally tiny: fixed layout, text-only output, no
//! external assets, byte-identical for identical input.

use crate::circle::fmt_g17;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct PlotSpec {
    pub x_col: String,
    pub y_col: String,
    pub title: String,
    pub width: u32,
    pub height: u32,
    /// Draw a connecting polyline in addition to the point markers.
    pub line: bool,
}

impl PlotSpec {
    pub fn line_plot(x_col: &str, y_col: &str, title: &str) -> Self {
        PlotSpec {
            x_col: x_col.to_string(),
            y_col: y_col.to_string(),
            title: title.to_string(),
            width: 640,
            height: 420,
            line: true,
        }
    }
}

fn parse_csv(csv: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = csv.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::invalid("empty CSV: missing header"))?;
    let cols: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let vals: Vec<f64> = line
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::invalid(format!("row {}: bad number {s:?}", i + 2)))
            })
            .collect::<Result<_>>()?;
        if vals.len() != cols.len() {
            return Err(Error::invalid(format!(
                "row {} has {} fields, header has {}",
                i + 2,
                vals.len(),
                cols.len()
            )));
        }
        rows.push(vals);
    }
    if rows.is_empty() {
        return Err(Error::invalid("empty CSV: no data rows"));
    }
    Ok((cols, rows))
}

/// Render a CSV column pair as a self-contained SVG document.
pub fn emit_plot(csv: &str, spec: &PlotSpec) -> Result<String> {
    let (cols, rows) = parse_csv(csv)?;
    let xi = cols
        .iter()
        .position(|c| *c == spec.x_col)
        .ok_or_else(|| Error::invalid(format!("missing column {:?}", spec.x_col)))?;
    let yi = cols
        .iter()
        .position(|c| *c == spec.y_col)
        .ok_or_else(|| Error::invalid(format!("missing column {:?}", spec.y_col)))?;

    let xs: Vec<f64> = rows.iter().map(|r| r[xi]).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r[yi]).collect();
    let (x_lo, x_hi) = bounds(&xs);
    let (y_lo, y_hi) = bounds(&ys);

    let w = spec.width as f64;
    let h = spec.height as f64;
    let (ml, mr, mt, mb) = (70.0, 20.0, 40.0, 50.0);
    let px = |x: f64| ml + (x - x_lo) / (x_hi - x_lo) * (w - ml - mr);
    let py = |y: f64| h - mb - (y - y_lo) / (y_hi - y_lo) * (h - mt - mb);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" \
         viewBox=\"0 0 {} {}\">\n",
        spec.width, spec.height, spec.width, spec.height
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-family=\"monospace\" \
         font-size=\"14\">{}</text>\n",
        w / 2.0,
        xml_escape(&spec.title)
    ));
    // axes
    svg.push_str(&format!(
        "<line x1=\"{ml}\" y1=\"{0}\" x2=\"{1}\" y2=\"{0}\" stroke=\"black\"/>\n",
        h - mb,
        w - mr
    ));
    svg.push_str(&format!(
        "<line x1=\"{ml}\" y1=\"{mt}\" x2=\"{ml}\" y2=\"{}\" stroke=\"black\"/>\n",
        h - mb
    ));
    // axis labels and endpoint ticks
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"monospace\" \
         font-size=\"12\">{}</text>\n",
        w / 2.0,
        h - 12.0,
        xml_escape(&spec.x_col)
    ));
    svg.push_str(&format!(
        "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" font-family=\"monospace\" \
         font-size=\"12\" transform=\"rotate(-90 16 {})\">{}</text>\n",
        h / 2.0,
        h / 2.0,
        xml_escape(&spec.y_col)
    ));
    for (v, x) in [(x_lo, px(x_lo)), (x_hi, px(x_hi))] {
        svg.push_str(&format!(
            "<text x=\"{x}\" y=\"{}\" text-anchor=\"middle\" font-family=\"monospace\" \
             font-size=\"10\">{}</text>\n",
            h - mb + 16.0,
            short(v)
        ));
    }
    for (v, y) in [(y_lo, py(y_lo)), (y_hi, py(y_hi))] {
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{y}\" text-anchor=\"end\" font-family=\"monospace\" \
             font-size=\"10\">{}</text>\n",
            ml - 6.0,
            short(v)
        ));
    }
    if spec.line {
        let pts: Vec<String> = xs
            .iter()
            .zip(&ys)
            .map(|(&x, &y)| format!("{},{}", coord(px(x)), coord(py(y))))
            .collect();
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            pts.join(" ")
        ));
    }
    for (&x, &y) in xs.iter().zip(&ys) {
        svg.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"#1f77b4\"/>\n",
            coord(px(x)),
            coord(py(y))
        ));
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn bounds(vals: &[f64]) -> (f64, f64) {
    let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        let pad = (hi - lo) * 0.05;
        (lo - pad, hi + pad)
    }
}

fn coord(v: f64) -> String {
    format!("{:.2}", v)
}

fn short(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e7 {
        format!("{}", v as i64)
    } else if v.abs() >= 1e-3 && v.abs() < 1e4 {
        format!("{:.3}", v)
    } else {
        fmt_g17(v)
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
