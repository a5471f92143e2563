//! Deterministic SVG renderings of the report figures.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::{at, AnalysisReport, PipelineError, Stage};
use crate::elicitation::Relation;
use crate::metrics::StatusCounts;

const STATUS_COLORS: [&str; 3] = ["#4c72b0", "#dd8452", "#55a868"];
const GROUP_COLORS: [&str; 3] = ["#4c72b0", "#dd8452", "#8c8c8c"];

struct Svg {
    body: String,
    width: f64,
    height: f64,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl Svg {
    fn new(width: f64, height: f64) -> Self {
        Self {
            body: String::new(),
            width,
            height,
        }
    }

    fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, fill: &str) {
        let _ = writeln!(
            self.body,
            r#"<rect x="{x:.2}" y="{y:.2}" width="{w:.2}" height="{h:.2}" fill="{fill}"/>"#
        );
    }

    fn outline(&mut self, x: f64, y: f64, w: f64, h: f64) {
        let _ = writeln!(
            self.body,
            r##"<rect x="{x:.2}" y="{y:.2}" width="{w:.2}" height="{h:.2}" fill="none" stroke="#bbbbbb"/>"##
        );
    }

    fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64) {
        let _ = writeln!(
            self.body,
            r##"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="#333333"/>"##
        );
    }

    fn text(&mut self, x: f64, y: f64, anchor: &str, size: u32, s: &str) {
        let _ = writeln!(
            self.body,
            r#"<text x="{x:.2}" y="{y:.2}" text-anchor="{anchor}" font-size="{size}" font-family="sans-serif">{}</text>"#,
            escape(s)
        );
    }

    fn polyline(&mut self, points: &[(f64, f64)], stroke: &str) {
        if points.is_empty() {
            return;
        }
        let coords: Vec<String> = points.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        let _ = writeln!(
            self.body,
            r#"<polyline points="{}" fill="none" stroke="{stroke}" stroke-width="1.5"/>"#,
            coords.join(" ")
        );
    }

    fn circle(&mut self, x: f64, y: f64, r: f64, fill: &str) {
        let _ = writeln!(
            self.body,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="{r:.2}" fill="{fill}" fill-opacity="0.5"/>"#
        );
    }

    fn legend(&mut self, x: f64, y: f64, entries: &[(&str, &str)]) {
        for (i, (label, color)) in entries.iter().enumerate() {
            let ly = y + 16.0 * i as f64;
            self.rect(x, ly - 9.0, 10.0, 10.0, color);
            self.text(x + 14.0, ly, "start", 11, label);
        }
    }

    fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
             <rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n{}</svg>\n",
            self.body,
            w = self.width,
            h = self.height
        )
    }
}

/// Axis frame with a [0, 1] y scale.
fn unit_axes(svg: &mut Svg, x: f64, y: f64, w: f64, h: f64) {
    svg.line(x, y + h, x + w, y + h);
    svg.line(x, y, x, y + h);
    for tick in [0.0, 0.5, 1.0] {
        let ty = y + h - tick * h;
        svg.line(x - 4.0, ty, x, ty);
        svg.text(x - 6.0, ty + 4.0, "end", 10, &format!("{tick:.1}"));
    }
}

/// One stacked bar per (label, counts) with matched/missing/mismatched shares.
fn status_figure(title: &str, bars: &[(String, &StatusCounts)]) -> String {
    let bar_w = 28.0;
    let gap = 14.0;
    let (left, top, plot_h) = (50.0, 40.0, 240.0);
    let width = left + bars.len() as f64 * (bar_w + gap) + 140.0;
    let mut svg = Svg::new(width, top + plot_h + 70.0);
    svg.text(width / 2.0, 20.0, "middle", 14, title);
    unit_axes(&mut svg, left, top, bars.len() as f64 * (bar_w + gap) + gap, plot_h);
    for (i, (label, c)) in bars.iter().enumerate() {
        let x = left + gap + i as f64 * (bar_w + gap);
        let mut y = top + plot_h;
        for (share, color) in [c.matched_share(), c.missing_share(), c.mismatched_share()]
            .into_iter()
            .zip(STATUS_COLORS)
        {
            let h = share * plot_h;
            svg.rect(x, y - h, bar_w, h, color);
            y -= h;
        }
        if c.retained() == 0 {
            svg.outline(x, top, bar_w, plot_h);
        }
        svg.text(x + bar_w / 2.0, top + plot_h + 16.0, "middle", 10, label);
    }
    svg.legend(
        width - 120.0,
        top + 10.0,
        &[("matched", STATUS_COLORS[0]), ("missing", STATUS_COLORS[1]), ("mismatched", STATUS_COLORS[2])],
    );
    svg.finish()
}

fn curves_figure(report: &AnalysisReport) -> String {
    let (pw, ph) = (200.0, 150.0);
    let mut svg = Svg::new(3.0 * (pw + 60.0) + 20.0, 2.0 * (ph + 70.0) + 40.0);
    svg.text(svg.width / 2.0, 20.0, "middle", 14, "Match rate by elicitation frequency threshold");
    for (i, curve) in report.analysis.curves.iter().enumerate() {
        let x = 50.0 + (i % 3) as f64 * (pw + 60.0);
        let y = 50.0 + (i / 3) as f64 * (ph + 70.0);
        unit_axes(&mut svg, x, y, pw, ph);
        svg.text(x + pw / 2.0, y - 6.0, "middle", 12, curve.relation.as_str());
        svg.text(x + pw / 2.0, y + ph + 30.0, "middle", 10, "frequency threshold");
        for tick in [0.0, 0.5, 1.0] {
            svg.text(x + tick * pw, y + ph + 14.0, "middle", 10, &format!("{tick:.1}"));
        }
        let pts: Vec<(f64, f64)> = curve
            .points
            .iter()
            .map(|p| (x + p.threshold * pw, y + ph - p.match_rate * ph))
            .collect();
        svg.polyline(&pts, STATUS_COLORS[0]);
    }
    svg.finish()
}

fn matrix_figure(report: &AnalysisReport) -> String {
    let m = &report.analysis.matrix.overall;
    let cell = 50.0;
    let (left, top) = (70.0, 60.0);
    let mut svg = Svg::new(left + 6.0 * cell + 30.0, top + 6.0 * cell + 50.0);
    svg.text(svg.width / 2.0, 20.0, "middle", 14, "Mismatch likelihood (column: elicited, row: documented)");
    for (j, elicited) in Relation::ALL.into_iter().enumerate() {
        svg.text(left + (j as f64 + 0.5) * cell, top - 8.0, "middle", 11, elicited.as_str());
        for (i, documented) in Relation::ALL.into_iter().enumerate() {
            let (x, y) = (left + j as f64 * cell, top + i as f64 * cell);
            let value = m.populated[j].then(|| m.get(documented, elicited)).flatten();
            match value {
                Some(v) => {
                    // white to dark blue
                    let shade = |lo: f64, hi: f64| (lo + (hi - lo) * v).round() as u8;
                    let fill = format!("#{:02x}{:02x}{:02x}", shade(255.0, 8.0), shade(255.0, 48.0), shade(255.0, 107.0));
                    svg.rect(x, y, cell, cell, &fill);
                    svg.text(x + cell / 2.0, y + cell / 2.0 + 4.0, "middle", 10, &format!("{v:.2}"));
                }
                None => svg.outline(x, y, cell, cell),
            }
        }
    }
    for (i, documented) in Relation::ALL.into_iter().enumerate() {
        svg.text(left - 8.0, top + (i as f64 + 0.5) * cell + 4.0, "end", 11, documented.as_str());
    }
    svg.finish()
}

fn distances_figure(report: &AnalysisReport) -> String {
    let (pw, ph) = (260.0, 200.0);
    let dists = &report.analysis.distances;
    let max_d = dists
        .iter()
        .flat_map(|d| d.points.iter().map(|p| p.0))
        .max()
        .unwrap_or(1)
        .max(2);
    let mut svg = Svg::new(dists.len() as f64 * (pw + 70.0) + 30.0, ph + 110.0);
    svg.text(svg.width / 2.0, 20.0, "middle", 14, "Elicitation frequency by hypernym path distance");
    for (i, d) in dists.iter().enumerate() {
        let (x, y) = (50.0 + i as f64 * (pw + 70.0), 50.0);
        unit_axes(&mut svg, x, y, pw, ph);
        let title = match d.spearman {
            Some(rho) => format!("{} (rho = {rho:.2})", d.relation.as_str()),
            None => d.relation.as_str().to_string(),
        };
        svg.text(x + pw / 2.0, y - 6.0, "middle", 12, &title);
        let sx = |dist: u32| x + (f64::from(dist) - 1.0) / (f64::from(max_d) - 1.0) * pw;
        for dist in 1..=max_d {
            svg.text(sx(dist), y + ph + 14.0, "middle", 10, &dist.to_string());
        }
        svg.text(x + pw / 2.0, y + ph + 30.0, "middle", 10, "distance");
        for &(dist, f) in &d.points {
            svg.circle(sx(dist), y + ph - f * ph, 2.5, STATUS_COLORS[0]);
        }
    }
    svg.finish()
}

fn gloss_figure(report: &AnalysisReport) -> String {
    let bar_w = 16.0;
    let group_w = 3.0 * bar_w + 20.0;
    let (left, top, ph) = (50.0, 40.0, 220.0);
    let comps = &report.gloss.comparisons;
    let width = left + comps.len() as f64 * group_w + 150.0;
    let mut svg = Svg::new(width, top + ph + 60.0);
    svg.text(width / 2.0, 20.0, "middle", 14, &format!("Gloss similarity ({})", report.gloss.scorer));
    unit_axes(&mut svg, left, top, comps.len() as f64 * group_w + 10.0, ph);
    for (i, c) in comps.iter().enumerate() {
        let gx = left + 10.0 + i as f64 * group_w;
        for (k, (g, color)) in [c.matched, c.missing, c.unrelated].iter().zip(GROUP_COLORS).enumerate() {
            let x = gx + k as f64 * bar_w;
            match g.mean {
                Some(m) => svg.rect(x, top + ph - m * ph, bar_w - 2.0, m * ph, color),
                None => svg.outline(x, top, bar_w - 2.0, ph),
            }
        }
        svg.text(gx + 1.5 * bar_w, top + ph + 16.0, "middle", 10, c.relation.as_str());
    }
    svg.legend(
        width - 130.0,
        top + 10.0,
        &[("matched", GROUP_COLORS[0]), ("missing", GROUP_COLORS[1]), ("unrelated", GROUP_COLORS[2])],
    );
    svg.finish()
}

/// Writes the figure files under `output_dir/figures` and returns their paths.
pub fn emit_plots(report: &AnalysisReport, output_dir: &Path) -> Result<Vec<PathBuf>, PipelineError> {
    let dir = output_dir.join("figures");
    fs::create_dir_all(&dir).map_err(at(Stage::Report))?;
    let status = &report.analysis.status_dist;
    let all: Vec<(String, &StatusCounts)> =
        status.all.iter().map(|c| (c.relation.as_str().to_string(), c)).collect();
    let split: Vec<(String, &StatusCounts)> = status
        .hapax
        .iter()
        .zip(&status.non_hapax)
        .flat_map(|(h, n)| [(format!("{}-h", h.relation.as_str()), h), (format!("{}-nh", n.relation.as_str()), n)])
        .collect();
    let figures = [
        ("status_distribution.svg", status_figure("Match status per relation", &all)),
        (
            "status_distribution_hapax.svg",
            status_figure("Match status, hapax (h) and non-hapax (nh)", &split),
        ),
        ("match_rate_curves.svg", curves_figure(report)),
        ("mismatch_matrix.svg", matrix_figure(report)),
        ("distances.svg", distances_figure(report)),
        ("gloss_similarity.svg", gloss_figure(report)),
    ];
    let mut paths = Vec::new();
    for (name, svg) in figures {
        let path = dir.join(name);
        fs::write(&path, svg).map_err(at(Stage::Report))?;
        paths.push(path);
    }
    Ok(paths)
}
