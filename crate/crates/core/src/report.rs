//! JSON, CSV and SVG renderings of a [`RankingReport`].
//!
//! Output carries no timestamps and uses fixed field order, so identical
//! inputs give byte-identical files.

use std::fmt::Write as _;
use std::io::Write;

use serde::Serialize;

use crate::consistency::ConsistencyReport;
use crate::ranking::{Aggregation, RankingReport, Validation};

/// Decimal places for scores and weights in emitted reports.
pub const REPORT_DECIMALS: i32 = 4;

pub fn round_report(x: f64) -> f64 {
    let p = 10f64.powi(REPORT_DECIMALS);
    let r = (x * p).round() / p;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

#[derive(Serialize)]
struct WeightOut<'a> {
    label: &'a str,
    weight: f64,
    d_prime: f64,
}

#[derive(Serialize)]
struct RowOut<'a> {
    rank: usize,
    label: &'a str,
    score_real: f64,
    score_normalized: f64,
}

#[derive(Serialize)]
struct Document<'a, C: Serialize> {
    consistency: &'a ConsistencyReport,
    weights: Vec<WeightOut<'a>>,
    weight_max: f64,
    aggregation: Aggregation,
    report_scale: f64,
    ranking: Vec<RowOut<'a>>,
    mse: Option<f64>,
    validation: Option<&'a Validation>,
    config_echo: &'a C,
}

fn rows(report: &RankingReport, scale: f64) -> Vec<RowOut<'_>> {
    report
        .rows
        .iter()
        .map(|r| RowOut {
            rank: r.rank,
            label: &r.label,
            score_real: round_report(r.score_real * scale),
            score_normalized: round_report(r.score_normalized * scale),
        })
        .collect()
}

/// Pretty JSON report; scores are multiplied by `scale` and rounded.
pub fn to_json<C: Serialize>(report: &RankingReport, scale: f64, config_echo: &C) -> String {
    let w = &report.weights;
    let doc = Document {
        consistency: &report.consistency,
        weights: w
            .labels
            .iter()
            .zip(&w.weights)
            .zip(&w.d_prime)
            .map(|((label, &weight), &d)| WeightOut {
                label,
                weight: round_report(weight),
                d_prime: round_report(d),
            })
            .collect(),
        weight_max: w.max_degree(),
        aggregation: report.aggregation,
        report_scale: scale,
        ranking: rows(report, scale),
        mse: report.validation.as_ref().map(|v| v.mse),
        validation: report.validation.as_ref(),
        config_echo,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
    s.push('\n');
    s
}

/// `rank,label,score_real,score_normalized` rows.
pub fn write_csv<W: Write>(report: &RankingReport, scale: f64, writer: W) -> Result<(), csv::Error> {
    let mut wtr = csv::Writer::from_writer(writer);
    for row in rows(report, scale) {
        wtr.serialize(row)?;
    }
    wtr.flush()?;
    Ok(())
}

fn escape_xml(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Horizontal bar chart of the real-path scores, in rank order.
pub fn render_svg(report: &RankingReport, scale: f64) -> String {
    const LABEL_W: f64 = 190.0;
    const BAR_MAX: f64 = 380.0;
    const ROW_H: f64 = 26.0;
    const TOP: f64 = 40.0;

    let data = rows(report, scale);
    let max = data.iter().map(|r| r.score_real).fold(0.0, f64::max);
    let width = LABEL_W + BAR_MAX + 80.0;
    let height = TOP + ROW_H * data.len() as f64 + 20.0;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="22" font-size="14" text-anchor="middle">Fuzzy-AHP score per criterion</text>"#,
        width / 2.0
    );
    for (i, r) in data.iter().enumerate() {
        let y = TOP + ROW_H * i as f64;
        let w = if max > 0.0 { BAR_MAX * r.score_real / max } else { 0.0 };
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
            LABEL_W - 8.0,
            y + 15.0,
            escape_xml(r.label)
        );
        let _ = writeln!(
            svg,
            r##"<rect x="{LABEL_W:.1}" y="{:.1}" width="{w:.2}" height="{:.1}" fill="#4a7ab5"/>"##,
            y + 3.0,
            ROW_H - 6.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.1}">{:.4}</text>"#,
            LABEL_W + w + 6.0,
            y + 15.0,
            r.score_real
        );
    }
    svg.push_str("</svg>\n");
    svg
}
