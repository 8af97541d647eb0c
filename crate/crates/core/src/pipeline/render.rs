//! Text, JSON and SVG output for barcodes.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::zigzag::Barcode;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    /// `H{p} [b,d]` over diagram positions.
    Text,
    /// `H{p} [b,d]` over field steps.
    Steps,
    Svg,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "text" => Ok(Format::Text),
            "steps" => Ok(Format::Steps),
            "svg" => Ok(Format::Svg),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

#[derive(Serialize)]
struct BarRecord {
    dim: usize,
    birth: usize,
    death: usize,
    birth_step: usize,
    death_step: usize,
}

/// The barcode as a JSON list of `{dim, birth, death, birth_step, death_step}`.
pub fn barcode_json(barcode: &Barcode) -> Result<String> {
    let records: Vec<BarRecord> = barcode
        .bars
        .iter()
        .map(|b| BarRecord {
            dim: b.dim,
            birth: b.birth,
            death: b.death,
            birth_step: b.birth_step(),
            death_step: b.death_step(),
        })
        .collect();
    Ok(serde_json::to_string_pretty(&records)? + "\n")
}

fn color(dim: usize) -> &'static str {
    match dim {
        0 => "#d62728",
        1 => "#2ca02c",
        2 => "#1f77b4",
        _ => "#7f7f7f",
    }
}

fn svg(barcode: &Barcode) -> String {
    const LEFT: f64 = 60.0;
    const UNIT: f64 = 40.0;
    const ROW: f64 = 18.0;
    const TOP: f64 = 20.0;
    let len = barcode.len.max(1);
    let width = LEFT + UNIT * len as f64 + 20.0;
    let axis_y = TOP + ROW * barcode.bars.len() as f64 + 10.0;
    let height = axis_y + 40.0;
    let x = |pos: f64| LEFT + UNIT * (pos - 1.0);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(
        out,
        r#"<rect width="{width}" height="{height}" fill="white"/>"#
    );
    for (row, bar) in barcode.bars.iter().enumerate() {
        let y = TOP + ROW * row as f64;
        let x0 = x(bar.birth as f64);
        let w = UNIT * (bar.death - bar.birth + 1) as f64;
        let _ = writeln!(
            out,
            r#"<rect x="{x0}" y="{y}" width="{w}" height="{}" fill="{}"><title>H{} [{},{}]</title></rect>"#,
            ROW - 6.0,
            color(bar.dim),
            bar.dim,
            bar.birth,
            bar.death
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="11" font-family="sans-serif">H{}</text>"#,
            LEFT - 30.0,
            y + ROW - 8.0,
            bar.dim
        );
    }
    let _ = writeln!(
        out,
        r#"<line x1="{LEFT}" y1="{axis_y}" x2="{}" y2="{axis_y}" stroke="black"/>"#,
        LEFT + UNIT * len as f64
    );
    for pos in (1..=barcode.len).step_by(2) {
        let cx = x(pos as f64) + UNIT / 2.0;
        let _ = writeln!(
            out,
            r#"<text x="{cx}" y="{}" font-size="11" font-family="sans-serif" text-anchor="middle">{}</text>"#,
            axis_y + 15.0,
            pos / 2 + 1
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="11" font-family="sans-serif" text-anchor="middle">step</text>"#,
        LEFT + UNIT * len as f64 / 2.0,
        axis_y + 32.0
    );
    out.push_str("</svg>\n");
    out
}

pub fn render_barcode(barcode: &Barcode, format: Format) -> String {
    match format {
        Format::Text => barcode
            .bars
            .iter()
            .map(|b| format!("H{} [{},{}]\n", b.dim, b.birth, b.death))
            .collect(),
        Format::Steps => barcode
            .bars
            .iter()
            .map(|b| format!("H{} [{},{}]\n", b.dim, b.birth_step(), b.death_step()))
            .collect(),
        Format::Svg => svg(barcode),
    }
}
