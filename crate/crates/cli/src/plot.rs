//! Minimal deterministic SVG plots of two table columns.

use std::fmt::Write;

use thiserror::Error;

use crate::table::TableFile;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 500.0;
const MARGIN: f64 = 60.0;
const TICKS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotStyle {
    Line,
    Scatter,
}

#[derive(Debug, Error, PartialEq)]
pub enum PlotError {
    #[error("column {0} does not exist")]
    MissingColumn(usize),
    #[error("non-numeric value `{value}` in column `{column}`, row {row}")]
    NonNumeric {
        column: String,
        row: usize,
        value: String,
    },
}

fn numeric(cell: &str) -> Option<f64> {
    if let Ok(v) = cell.parse::<f64>() {
        return v.is_finite().then_some(v);
    }
    let (p, q) = cell.split_once('/')?;
    let (p, q): (f64, f64) = (p.trim().parse().ok()?, q.trim().parse().ok()?);
    (q != 0.0).then_some(p / q)
}

fn column(table: &TableFile, index: usize) -> Result<Vec<f64>, PlotError> {
    let name = table
        .header()
        .get(index)
        .ok_or(PlotError::MissingColumn(index))?;
    table
        .rows()
        .iter()
        .enumerate()
        .map(|(row, cells)| {
            numeric(&cells[index]).ok_or_else(|| PlotError::NonNumeric {
                column: name.clone(),
                row,
                value: cells[index].clone(),
            })
        })
        .collect()
}

fn range(values: &[f64]) -> (f64, f64) {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Render `y_col` against `x_col` as an 800x500 SVG.
pub fn render_plot(
    table: &TableFile,
    x_col: usize,
    y_col: usize,
    style: PlotStyle,
) -> Result<String, PlotError> {
    let xs = column(table, x_col)?;
    let ys = column(table, y_col)?;
    let (x_lo, x_hi) = range(&xs);
    let (y_lo, y_hi) = range(&ys);
    let plot_w = WIDTH - 2.0 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let px = |x: f64| MARGIN + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let py = |y: f64| HEIGHT - MARGIN - (y - y_lo) / (y_hi - y_lo) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        svg,
        r#"<path d="M{left} {top} L{left} {bottom} L{right} {bottom}" fill="none" stroke="black"/>"#
    );
    for i in 0..=TICKS {
        let t = i as f64 / TICKS as f64;
        let (xv, yv) = (x_lo + t * (x_hi - x_lo), y_lo + t * (y_hi - y_lo));
        let (tx, ty) = (px(xv), py(yv));
        let _ = writeln!(
            svg,
            r#"<line x1="{tx:.2}" y1="{bottom}" x2="{tx:.2}" y2="{:.2}" stroke="black"/><text x="{tx:.2}" y="{:.2}" font-size="11" text-anchor="middle">{xv:.3}</text>"#,
            bottom + 5.0,
            bottom + 18.0
        );
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{ty:.2}" x2="{left}" y2="{ty:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{yv:.3}</text>"#,
            left - 5.0,
            left - 8.0,
            ty + 4.0
        );
    }
    let header = table.header();
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-size="13" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 15.0,
        escape(&header[x_col])
    );
    let _ = writeln!(
        svg,
        r#"<text x="15" y="{:.2}" font-size="13" text-anchor="middle" transform="rotate(-90 15 {:.2})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(&header[y_col])
    );
    match style {
        PlotStyle::Line if !xs.is_empty() => {
            let points: Vec<String> = xs
                .iter()
                .zip(&ys)
                .map(|(x, y)| format!("{:.2},{:.2}", px(*x), py(*y)))
                .collect();
            let _ = writeln!(
                svg,
                r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="1"/>"#,
                points.join(" ")
            );
        }
        PlotStyle::Scatter => {
            for (x, y) in xs.iter().zip(&ys) {
                let _ = writeln!(
                    svg,
                    r#"<circle cx="{:.2}" cy="{:.2}" r="1.5" fill="steelblue"/>"#,
                    px(*x),
                    py(*y)
                );
            }
        }
        PlotStyle::Line => {}
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series_table(n: usize) -> TableFile {
        let mut t = TableFile::new(["n", "x"]);
        let mut x = 0.5f64;
        for i in 0..n {
            t.push_row(vec![i.to_string(), x.to_string()]);
            x = if x <= 0.5 { 1.5 * x } else { 1.5 * (1.0 - x) };
        }
        t
    }

    #[test]
    fn line_plot_is_deterministic() {
        let t = series_table(301);
        let a = render_plot(&t, 0, 1, PlotStyle::Line).unwrap();
        let b = render_plot(&t, 0, 1, PlotStyle::Line).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("<polyline"));
        assert!(a.starts_with("<svg") && a.contains(r#"width="800" height="500""#));
        assert!(a.contains(">n</text>") && a.contains(">x</text>"));
    }

    #[test]
    fn scatter_has_one_marker_per_row() {
        let mut t = TableFile::new(["x0", "outcome", "final", "distance"]);
        for i in 0..10 {
            t.push_row(vec![
                format!("{i}/10"),
                "cycle_low".into(),
                "0.46".into(),
                "1e-5".into(),
            ]);
        }
        let svg = render_plot(&t, 0, 2, PlotStyle::Scatter).unwrap();
        assert_eq!(svg.matches("<circle").count(), 10);
    }

    #[test]
    fn empty_table_still_has_axes() {
        let t = TableFile::new(["n", "x"]);
        let svg = render_plot(&t, 0, 1, PlotStyle::Line).unwrap();
        assert!(svg.contains("<path") && !svg.contains("<polyline"));
    }

    #[test]
    fn non_numeric_column_is_an_error() {
        let mut t = TableFile::new(["x0", "outcome"]);
        t.push_row(vec!["0.1".into(), "cycle_low".into()]);
        assert!(matches!(
            render_plot(&t, 0, 1, PlotStyle::Scatter),
            Err(PlotError::NonNumeric { row: 0, .. })
        ));
        assert_eq!(
            render_plot(&t, 0, 5, PlotStyle::Line),
            Err(PlotError::MissingColumn(5))
        );
    }
}
