//! Static SVG charts drawn from a [`SummaryReport`].
//!
//! Rendering reads nothing but the report, and every coordinate is printed
//! with two decimals, so the same report always produces the same bytes.
//!
//! Boxplots use a vertical [`LinearScale`]. Gap charts map the fixed domain
//! `[-1, 1]` onto pixel rows `[440, 40]` ([`GAP_SCALE`]); accuracy charts map
//! `[0, 1]` onto the same rows ([`UNIT_SCALE`]). The box spans q1 to q3, the
//! line inside it is the median, and the whiskers reach the minimum and
//! maximum (no outlier points).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::metrics::MetricKind;
use crate::stats::{Measure, Summary, SummaryReport};

const WIDTH: f64 = 160.0;
const MARGIN_LEFT: f64 = 60.0;
const PLOT_TOP: f64 = 40.0;
const PLOT_HEIGHT: f64 = 400.0;
const BOX_WIDTH: f64 = 60.0;

/// Affine map from a data interval onto a pixel interval. `range.0` is the
/// pixel for `domain.0`; values outside the domain are clamped.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearScale {
    pub domain: (f64, f64),
    pub range: (f64, f64),
}

pub const GAP_SCALE: LinearScale = LinearScale {
    domain: (-1.0, 1.0),
    range: (PLOT_TOP + PLOT_HEIGHT, PLOT_TOP),
};

pub const UNIT_SCALE: LinearScale = LinearScale {
    domain: (0.0, 1.0),
    range: (PLOT_TOP + PLOT_HEIGHT, PLOT_TOP),
};

impl LinearScale {
    pub fn map(&self, v: f64) -> f64 {
        let (d0, d1) = self.domain;
        let (r0, r1) = self.range;
        let t = ((v - d0) / (d1 - d0)).clamp(0.0, 1.0);
        r0 + t * (r1 - r0)
    }
}

/// Pixel rows of one box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoxGeometry {
    pub whisker_low: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub whisker_high: f64,
}

pub fn box_geometry(summary: &Summary, scale: &LinearScale) -> BoxGeometry {
    BoxGeometry {
        whisker_low: scale.map(summary.min),
        q1: scale.map(summary.q1),
        median: scale.map(summary.median),
        q3: scale.map(summary.q3),
        whisker_high: scale.map(summary.max),
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn open_svg(out: &mut String, width: f64, height: f64, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="20" text-anchor="middle" font-size="13">{}</text>"#,
        width / 2.0,
        escape(title)
    );
}

fn axis(out: &mut String, scale: &LinearScale, right: f64) {
    let (d0, d1) = scale.domain;
    let _ = writeln!(
        out,
        r#"<line x1="{MARGIN_LEFT:.2}" y1="{:.2}" x2="{MARGIN_LEFT:.2}" y2="{:.2}" stroke="black"/>"#,
        scale.range.0, scale.range.1
    );
    for i in 0..=4 {
        let v = d0 + (d1 - d0) * i as f64 / 4.0;
        let y = scale.map(v);
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{MARGIN_LEFT:.2}" y2="{y:.2}" stroke="black"/>"#,
            MARGIN_LEFT - 4.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{v:.2}</text>"#,
            MARGIN_LEFT - 6.0,
            y + 4.0
        );
    }
    if d0 < 0.0 && d1 > 0.0 {
        let y = scale.map(0.0);
        let _ = writeln!(
            out,
            r##"<line x1="{MARGIN_LEFT:.2}" y1="{y:.2}" x2="{right:.2}" y2="{y:.2}" stroke="#999999" stroke-dasharray="4 3"/>"##
        );
    }
}

fn draw_box(out: &mut String, center: f64, g: &BoxGeometry) {
    let half = BOX_WIDTH / 2.0;
    let cap = BOX_WIDTH / 4.0;
    let _ = writeln!(
        out,
        r#"<line x1="{center:.2}" y1="{:.2}" x2="{center:.2}" y2="{:.2}" stroke="black"/>"#,
        g.whisker_high, g.q3
    );
    let _ = writeln!(
        out,
        r#"<line x1="{center:.2}" y1="{:.2}" x2="{center:.2}" y2="{:.2}" stroke="black"/>"#,
        g.q1, g.whisker_low
    );
    for y in [g.whisker_low, g.whisker_high] {
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="black"/>"#,
            center - cap,
            center + cap
        );
    }
    let _ = writeln!(
        out,
        r##"<rect x="{:.2}" y="{:.2}" width="{BOX_WIDTH:.2}" height="{:.2}" fill="#9ecae1" stroke="black"/>"##,
        center - half,
        g.q3,
        g.q1 - g.q3
    );
    let _ = writeln!(
        out,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="2"/>"#,
        center - half,
        g.median,
        center + half,
        g.median
    );
}

/// One box per entry, left to right. Entries without a summary (all
/// replicates undefined) get a label instead of a box.
pub struct BoxEntry<'a> {
    pub label: String,
    pub summary: Option<&'a Summary>,
    pub undefined: usize,
}

pub fn boxplot_svg(title: &str, entries: &[BoxEntry<'_>], scale: &LinearScale) -> String {
    let width = MARGIN_LEFT + WIDTH * entries.len().max(1) as f64;
    let height = PLOT_TOP + PLOT_HEIGHT + 50.0;
    let mut out = String::new();
    open_svg(&mut out, width, height, title);
    axis(&mut out, scale, width);
    for (i, e) in entries.iter().enumerate() {
        let center = MARGIN_LEFT + WIDTH * (i as f64 + 0.5);
        match e.summary {
            Some(s) => draw_box(&mut out, center, &box_geometry(s, scale)),
            None => {
                let _ = writeln!(
                    out,
                    r##"<text x="{center:.2}" y="{:.2}" text-anchor="middle" fill="#b30000">all undefined</text>"##,
                    PLOT_TOP + PLOT_HEIGHT / 2.0
                );
            }
        }
        let _ = writeln!(
            out,
            r#"<text x="{center:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            PLOT_TOP + PLOT_HEIGHT + 18.0,
            escape(&e.label)
        );
        if e.undefined > 0 {
            let _ = writeln!(
                out,
                r#"<text x="{center:.2}" y="{:.2}" text-anchor="middle">undefined: {}</text>"#,
                PLOT_TOP + PLOT_HEIGHT + 34.0,
                e.undefined
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

fn heat_colour(v: f64, max_abs: f64, signed: bool) -> String {
    if max_abs <= 0.0 {
        return "#ffffff".to_owned();
    }
    let t = (v.abs() / max_abs).clamp(0.0, 1.0);
    let (r, g, b) = if signed && v < 0.0 {
        (33.0, 102.0, 172.0)
    } else if signed {
        (178.0, 24.0, 43.0)
    } else {
        (8.0, 48.0, 107.0)
    };
    let mix = |c: f64| (255.0 - t * (255.0 - c)).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(r), mix(g), mix(b))
}

/// A grid with one row per (variant, class) and one column per
/// (metric, size). `signed` picks a diverging palette around zero.
pub fn heat_table_svg(title: &str, report: &SummaryReport, pick: fn(&Summary) -> Option<f64>, signed: bool) -> String {
    const CELL_W: f64 = 90.0;
    const CELL_H: f64 = 24.0;
    const LABEL_W: f64 = 180.0;
    let columns: Vec<(MetricKind, usize)> = MetricKind::ALL
        .into_iter()
        .flat_map(|k| report.sizes.iter().map(move |&s| (k, s)))
        .collect();
    let rows: Vec<(&str, &str)> = report
        .variants
        .iter()
        .flat_map(|v| report.classes.iter().map(move |c| (v.as_str(), c.as_str())))
        .collect();
    let value = |(variant, class): (&str, &str), (kind, size): (MetricKind, usize)| {
        report
            .gap_summary(variant, size, kind, class)
            .and_then(|g| g.summary.as_ref())
            .and_then(pick)
    };
    let max_abs = rows
        .iter()
        .flat_map(|&r| columns.iter().filter_map(move |&c| value(r, c)))
        .fold(0.0_f64, |m, v| m.max(v.abs()));

    let width = LABEL_W + CELL_W * columns.len() as f64 + 10.0;
    let height = 60.0 + CELL_H * (rows.len() + 1) as f64;
    let mut out = String::new();
    open_svg(&mut out, width, height, title);
    let top = 40.0;
    for (j, (kind, size)) in columns.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{kind} @ {size}</text>"#,
            LABEL_W + CELL_W * (j as f64 + 0.5),
            top + CELL_H * 0.65
        );
    }
    for (i, &row) in rows.iter().enumerate() {
        let y = top + CELL_H * (i + 1) as f64;
        let label = if report.variants.len() > 1 { format!("{} / {}", row.0, row.1) } else { row.1.to_owned() };
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LABEL_W - 8.0,
            y + CELL_H * 0.65,
            escape(&label)
        );
        for (j, &col) in columns.iter().enumerate() {
            let x = LABEL_W + CELL_W * j as f64;
            let v = value(row, col);
            let fill = v.map_or_else(|| "#eeeeee".to_owned(), |v| heat_colour(v, max_abs, signed));
            let _ = writeln!(
                out,
                r#"<rect x="{x:.2}" y="{y:.2}" width="{CELL_W:.2}" height="{CELL_H:.2}" fill="{fill}" stroke="white"/>"#
            );
            let text = v.map_or_else(|| "undefined".to_owned(), |v| format!("{v:.5}"));
            let dark = v.is_some_and(|v| max_abs > 0.0 && v.abs() / max_abs > 0.6);
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" fill="{}">{text}</text>"#,
                x + CELL_W / 2.0,
                y + CELL_H * 0.65,
                if dark { "white" } else { "black" }
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

fn file_component(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_alphanumeric() || c == '-' || c == '.' { c } else { '_' })
        .collect()
}

fn write(path: PathBuf, text: &str, written: &mut Vec<PathBuf>) -> Result<()> {
    fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    written.push(path);
    Ok(())
}

/// Writes `boxplots/<variant>_<metric>_<class>_<size>.svg` for every gap
/// summary, `variance_heat.svg`, `mean_heat.svg` and `accuracy.svg`.
/// Returns the written paths in write order.
pub fn render_report(report: &SummaryReport, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let boxes = out_dir.join("boxplots");
    fs::create_dir_all(&boxes).map_err(|e| Error::io(&boxes, e))?;
    let (g, h) = &report.groups;
    let mut written = Vec::new();

    for s in &report.gap_summaries {
        let name = format!(
            "{}_{}_{}_{}.svg",
            file_component(&s.variant),
            s.metric.code(),
            file_component(&s.class),
            s.size
        );
        let title = format!("{} gap ({g} - {h}), class {}, size {}", s.metric, s.class, s.size);
        let entry = BoxEntry {
            label: format!("{} replicates", s.replicates),
            summary: s.summary.as_ref(),
            undefined: s.undefined_count,
        };
        write(boxes.join(name), &boxplot_svg(&title, &[entry], &GAP_SCALE), &mut written)?;
    }

    let variance = heat_table_svg("Variance of the gap across replicates", report, |s| s.variance, false);
    write(out_dir.join("variance_heat.svg"), &variance, &mut written)?;
    let mean = heat_table_svg("Mean gap across replicates", report, |s| Some(s.mean), true);
    write(out_dir.join("mean_heat.svg"), &mean, &mut written)?;

    let accuracy: Vec<BoxEntry<'_>> = report
        .performance
        .iter()
        .filter(|p| p.measure == Measure::Accuracy)
        .map(|p| BoxEntry {
            label: if report.variants.len() > 1 {
                format!("{} @ {}", p.variant, p.size)
            } else {
                format!("size {}", p.size)
            },
            summary: p.summary.as_ref(),
            undefined: p.undefined_count,
        })
        .collect();
    write(
        out_dir.join("accuracy.svg"),
        &boxplot_svg("Accuracy across replicates", &accuracy, &UNIT_SCALE),
        &mut written,
    )?;
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn five(min: f64, q1: f64, median: f64, q3: f64, max: f64) -> Summary {
        Summary {
            count: 5,
            mean: median,
            variance: Some(0.1),
            min,
            q1,
            median,
            q3,
            max,
            undefined_count: 0,
        }
    }

    #[test]
    fn gap_scale_geometry() {
        let g = box_geometry(&five(0.0, 0.25, 0.5, 0.75, 1.0), &GAP_SCALE);
        assert_eq!(
            g,
            BoxGeometry {
                whisker_low: 240.0,
                q1: 190.0,
                median: 140.0,
                q3: 90.0,
                whisker_high: 40.0,
            }
        );
        assert_eq!(GAP_SCALE.map(-1.0), 440.0);
        assert_eq!(GAP_SCALE.map(3.0), 40.0);
        assert_eq!(UNIT_SCALE.map(0.5), 240.0);
    }

    #[test]
    fn box_drawn_at_geometry() {
        let s = five(0.0, 0.25, 0.5, 0.75, 1.0);
        let svg = boxplot_svg("t", &[BoxEntry { label: "x".into(), summary: Some(&s), undefined: 0 }], &GAP_SCALE);
        assert!(svg.contains(r#"<rect x="110.00" y="90.00" width="60.00" height="100.00""#), "{svg}");
        assert!(svg.contains(r#"y1="140.00" x2="170.00" y2="140.00""#));
    }

    #[test]
    fn labels_are_escaped() {
        let svg = boxplot_svg("a<b & c", &[], &UNIT_SCALE);
        assert!(svg.contains("a&lt;b &amp; c"));
    }

    #[test]
    fn heat_colours() {
        assert_eq!(heat_colour(0.0, 1.0, false), "#ffffff");
        assert_eq!(heat_colour(1.0, 1.0, false), "#08306b");
        assert_eq!(heat_colour(-1.0, 1.0, true), "#2166ac");
        assert_eq!(heat_colour(0.3, 0.0, true), "#ffffff");
    }
}
