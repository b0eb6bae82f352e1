//! Static SVG figures for a run: the computed front, the weights on the
//! simplex, and the metric curves.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::harness::{reference_front, RunRecord};
use crate::problems::Problem;

pub const FRONT_SVG: &str = "front.svg";
pub const SIMPLEX_SVG: &str = "simplex.svg";
pub const METRICS_SVG: &str = "metrics.svg";

const PANEL: f64 = 360.0;
const MARGIN: f64 = 48.0;
const SOLUTION_COLOR: &str = "#c0392b";
const INITIAL_COLOR: &str = "#7f8c8d";
const CURVE_COLOR: &str = "#2c3e50";

/// Affine map from a data rectangle onto a pixel panel (y pointing up).
#[derive(Clone, Copy)]
struct Frame {
    x0: f64,
    y0: f64,
    lo: [f64; 2],
    hi: [f64; 2],
}

impl Frame {
    fn new(x0: f64, y0: f64, lo: [f64; 2], hi: [f64; 2]) -> Self {
        let widen = |a: f64, b: f64| {
            if b - a > 1e-12 {
                (a, b)
            } else {
                (a - 0.5, b + 0.5)
            }
        };
        let (lx, hx) = widen(lo[0], hi[0]);
        let (ly, hy) = widen(lo[1], hi[1]);
        Frame {
            x0,
            y0,
            lo: [lx, ly],
            hi: [hx, hy],
        }
    }

    fn px(&self, x: f64) -> f64 {
        self.x0 + (x - self.lo[0]) / (self.hi[0] - self.lo[0]) * PANEL
    }

    fn py(&self, y: f64) -> f64 {
        self.y0 + PANEL - (y - self.lo[1]) / (self.hi[1] - self.lo[1]) * PANEL
    }

    fn axes(&self, svg: &mut String, xlabel: &str, ylabel: &str) {
        let (x0, y0) = (self.x0, self.y0);
        let _ = write!(
            svg,
            r##"<rect x="{x0}" y="{y0}" width="{PANEL}" height="{PANEL}" fill="none" stroke="#999"/>"##
        );
        let _ = write!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="13">{xlabel}</text>"#,
            x0 + PANEL / 2.0,
            y0 + PANEL + 32.0
        );
        let _ = write!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="13" transform="rotate(-90 {:.1} {:.1})">{ylabel}</text>"#,
            x0 - 30.0,
            y0 + PANEL / 2.0,
            x0 - 30.0,
            y0 + PANEL / 2.0
        );
        for (value, px) in [(self.lo[0], x0), (self.hi[0], x0 + PANEL)] {
            let _ = write!(
                svg,
                r#"<text x="{px:.1}" y="{:.1}" text-anchor="middle" font-size="10">{}</text>"#,
                y0 + PANEL + 14.0,
                tick(value)
            );
        }
        for (value, py) in [(self.lo[1], y0 + PANEL), (self.hi[1], y0)] {
            let _ = write!(
                svg,
                r#"<text x="{:.1}" y="{py:.1}" text-anchor="end" font-size="10">{}</text>"#,
                x0 - 4.0,
                tick(value)
            );
        }
    }
}

fn tick(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-2 || v.abs() >= 1e4) {
        format!("{v:.1e}")
    } else {
        format!("{v:.2}")
    }
}

fn document(width: f64, height: f64, title: &str, body: &str) -> String {
    format!(
        concat!(
            r#"<?xml version="1.0" encoding="UTF-8"?>"#,
            "\n",
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif">"#,
            "\n",
            r#"<rect width="100%" height="100%" fill="white"/>"#,
            r#"<text x="{tx}" y="20" text-anchor="middle" font-size="15">{title}</text>"#,
            "\n{body}\n</svg>\n"
        ),
        w = width,
        h = height,
        tx = width / 2.0,
        title = title,
        body = body
    )
}

fn bounds(points: &[[f64; 2]]) -> ([f64; 2], [f64; 2]) {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in points {
        for a in 0..2 {
            lo[a] = lo[a].min(p[a]);
            hi[a] = hi[a].max(p[a]);
        }
    }
    let pad = |a: usize| 0.05 * (hi[a] - lo[a]).max(1e-9);
    (
        [lo[0] - pad(0), lo[1] - pad(1)],
        [hi[0] + pad(0), hi[1] + pad(1)],
    )
}

fn markers(
    svg: &mut String,
    frame: &Frame,
    points: &[[f64; 2]],
    class: &str,
    radius: f64,
    fill: &str,
) {
    for p in points {
        let _ = write!(
            svg,
            r#"<circle class="{class}" cx="{:.2}" cy="{:.2}" r="{radius}" fill="{fill}"/>"#,
            frame.px(p[0]),
            frame.py(p[1])
        );
    }
}

fn polyline(svg: &mut String, frame: &Frame, points: &[[f64; 2]], class: &str, color: &str) {
    let coords: Vec<String> = points
        .iter()
        .map(|p| format!("{:.2},{:.2}", frame.px(p[0]), frame.py(p[1])))
        .collect();
    let _ = write!(
        svg,
        r#"<polyline class="{class}" points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
        coords.join(" ")
    );
}

pub fn front_svg(record: &RunRecord) -> Result<String> {
    let problem = record.config.problem()?;
    let m = problem.m();
    let fronts = &record.final_step().fronts;
    let title = format!(
        "{} / {} : front at k = {}",
        problem,
        record.config.dynamics,
        record.final_step().k
    );
    let mut body = String::new();
    match m {
        2 => {
            let sols: Vec<[f64; 2]> = fronts.iter().map(|f| [f[0], f[1]]).collect();
            let curve = problem.front_curve(400).unwrap_or_default();
            let all: Vec<[f64; 2]> = sols.iter().chain(&curve).copied().collect();
            let (lo, hi) = bounds(&all);
            let frame = Frame::new(MARGIN + 10.0, 36.0, lo, hi);
            frame.axes(&mut body, "f1", "f2");
            if !curve.is_empty() {
                polyline(&mut body, &frame, &curve, "front", CURVE_COLOR);
            }
            markers(&mut body, &frame, &sols, "solution", 4.0, SOLUTION_COLOR);
            Ok(document(
                PANEL + 2.0 * MARGIN + 20.0,
                PANEL + 90.0,
                &title,
                &body,
            ))
        }
        3 => {
            let reference = reference_front(
                &crate::config::ExperimentConfig {
                    reference_size: crate::config::Setting::Fixed(600),
                    ..record.config.clone()
                },
                &problem,
            )?;
            for (panel, (a, b)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
                let sols: Vec<[f64; 2]> = fronts.iter().map(|f| [f[a], f[b]]).collect();
                let refs: Vec<[f64; 2]> = reference.iter().map(|f| [f[a], f[b]]).collect();
                let all: Vec<[f64; 2]> = sols.iter().chain(&refs).copied().collect();
                let (lo, hi) = bounds(&all);
                let frame = Frame::new(
                    MARGIN + 10.0 + panel as f64 * (PANEL + MARGIN + 20.0),
                    36.0,
                    lo,
                    hi,
                );
                frame.axes(&mut body, &format!("f{}", a + 1), &format!("f{}", b + 1));
                markers(&mut body, &frame, &refs, "reference", 1.2, "#bdc3c7");
                markers(&mut body, &frame, &sols, "solution", 3.5, SOLUTION_COLOR);
            }
            Ok(document(
                3.0 * (PANEL + MARGIN + 20.0) + MARGIN,
                PANEL + 90.0,
                &title,
                &body,
            ))
        }
        _ => Err(Error::UnsupportedDimension(format!(
            "plots need m in {{2, 3}}, got {m}"
        ))),
    }
}

pub fn simplex_svg(record: &RunRecord) -> Result<String> {
    let first = &record.history[0].weights;
    let last = &record.final_step().weights;
    let m = first[0].dim();
    let title = format!(
        "weights: k = 0 (grey) and k = {} (red)",
        record.final_step().k
    );
    let mut body = String::new();
    match m {
        2 => {
            let frame = Frame::new(MARGIN, 36.0, [0.0, -1.0], [1.0, 1.0]);
            let y = frame.py(0.0);
            let _ = write!(
                body,
                r#"<line x1="{:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="{CURVE_COLOR}"/>"#,
                frame.px(0.0),
                frame.px(1.0)
            );
            let _ = write!(
                body,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="12">w1</text>"#,
                frame.px(0.5),
                y + 40.0
            );
            let initial: Vec<[f64; 2]> = first.iter().map(|w| [w[0], 0.15]).collect();
            let fin: Vec<[f64; 2]> = last.iter().map(|w| [w[0], -0.15]).collect();
            markers(&mut body, &frame, &initial, "initial", 3.5, INITIAL_COLOR);
            markers(&mut body, &frame, &fin, "weight", 3.5, SOLUTION_COLOR);
            Ok(document(PANEL + 2.0 * MARGIN, PANEL + 72.0, &title, &body))
        }
        3 => {
            // barycentric: e1 bottom-left, e2 bottom-right, e3 top
            let h = 3f64.sqrt() / 2.0;
            let to_plane = |w: &crate::simplex::Weight| [w[1] + 0.5 * w[2], h * w[2]];
            let frame = Frame::new(MARGIN, 36.0, [-0.05, -0.05], [1.05, 1.05]);
            let tri = [[0.0, 0.0], [1.0, 0.0], [0.5, h], [0.0, 0.0]];
            polyline(&mut body, &frame, &tri, "simplex", CURVE_COLOR);
            for (label, p) in [("e1", [0.0, 0.0]), ("e2", [1.0, 0.0]), ("e3", [0.5, h])] {
                let _ = write!(
                    body,
                    r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="12">{label}</text>"#,
                    frame.px(p[0]),
                    frame.py(p[1]) + if p[1] > 0.0 { -6.0 } else { 16.0 }
                );
            }
            let initial: Vec<[f64; 2]> = first.iter().map(to_plane).collect();
            let fin: Vec<[f64; 2]> = last.iter().map(to_plane).collect();
            markers(&mut body, &frame, &initial, "initial", 2.5, INITIAL_COLOR);
            markers(&mut body, &frame, &fin, "weight", 3.0, SOLUTION_COLOR);
            Ok(document(PANEL + 2.0 * MARGIN, PANEL + 72.0, &title, &body))
        }
        _ => Err(Error::UnsupportedDimension(format!(
            "plots need m in {{2, 3}}, got {m}"
        ))),
    }
}

/// Log-scale ordinate range covering the positive values of every series.
pub fn log_range(series: &[&[f64]]) -> (f64, f64) {
    let positive = series
        .iter()
        .flat_map(|s| s.iter())
        .copied()
        .filter(|v| *v > 0.0 && v.is_finite());
    let (lo, hi) = positive.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
        (a.min(v), b.max(v))
    });
    if !lo.is_finite() {
        return (1e-3, 1.0);
    }
    let lo = 10f64.powf(lo.log10().floor());
    let hi = 10f64.powf(hi.log10().ceil());
    if hi > lo {
        (lo, hi)
    } else {
        (lo / 10.0, hi * 10.0)
    }
}

pub fn metrics_svg(record: &RunRecord) -> Result<String> {
    let s = &record.metrics;
    let (ylo, yhi) = log_range(&[&s.energy, &s.igd]);
    let kmax = s.k.last().copied().unwrap_or(1).max(1) as f64;
    let frame = Frame::new(MARGIN + 20.0, 36.0, [0.0, ylo.log10()], [kmax, yhi.log10()]);
    let mut body = String::new();
    let _ = write!(
        body,
        r#"<g class="plot" data-ymin="{ylo:e}" data-ymax="{yhi:e}">"#
    );
    frame.axes(&mut body, "k", "log10 value");
    let floor = ylo;
    for (name, values, color) in [("energy", &s.energy, "#2980b9"), ("igd", &s.igd, "#c0392b")] {
        let pts: Vec<[f64; 2]> =
            s.k.iter()
                .zip(values.iter())
                .map(|(k, v)| [*k as f64, v.max(floor).log10()])
                .collect();
        polyline(&mut body, &frame, &pts, name, color);
    }
    let _ = write!(
        body,
        concat!(
            r##"<text x="{x:.1}" y="{y1:.1}" font-size="12" fill="#2980b9">energy</text>"##,
            r##"<text x="{x:.1}" y="{y2:.1}" font-size="12" fill="#c0392b">IGD</text>"##
        ),
        x = frame.px(0.0) + PANEL + 8.0,
        y1 = 60.0,
        y2 = 78.0
    );
    body.push_str("</g>");
    Ok(document(
        PANEL + 2.0 * MARGIN + 80.0,
        PANEL + 90.0,
        "metrics vs adaptation step",
        &body,
    ))
}

/// Writes `front.svg`, `simplex.svg` and `metrics.svg` into `dir`.
pub fn plot_svg(record: &RunRecord, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    for (name, text) in [
        (FRONT_SVG, front_svg(record)?),
        (SIMPLEX_SVG, simplex_svg(record)?),
        (METRICS_SVG, metrics_svg(record)?),
    ] {
        let path = dir.join(name);
        fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}
