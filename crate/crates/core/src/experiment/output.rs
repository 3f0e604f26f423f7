use super::run::{Backend, Curve, SimulationResult, StateKind};
use crate::{Error, Result};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub fn result_csv(result: &SimulationResult) -> String {
    let mut out = String::from("tau,variant,R\n");
    for curve in &result.curves {
        let name = curve.variant();
        for (tau, r) in result.samples.iter().zip(&curve.values) {
            let _ = writeln!(out, "{tau:.11e},{name},{r:.11e}");
        }
    }
    out
}

pub fn gates_csv(result: &SimulationResult) -> String {
    let mut out = String::from("step,t,dt,g,single_qubit,two_qubit,swaps\n");
    for (i, s) in result.steps.iter().enumerate() {
        let _ = writeln!(
            out,
            "{i},{:.11e},{:.11e},{:.11e},{},{},{}",
            s.t, s.dt, s.g, s.single_qubit, s.two_qubit, s.swaps
        );
    }
    out
}

/// Writes `result.csv`, `gates.csv`, `config.echo.json` and `plot.svg`.
pub fn emit_outputs(result: &SimulationResult, dir: &Path) -> Result<Vec<PathBuf>> {
    let io = |path: &Path| {
        let path = path.display().to_string();
        move |source| Error::Io { path, source }
    };
    std::fs::create_dir_all(dir).map_err(io(dir))?;
    let files = [
        ("result.csv", result_csv(result)),
        ("gates.csv", gates_csv(result)),
        ("config.echo.json", result.config.to_json() + "\n"),
        ("plot.svg", plot_svg(result)),
    ];
    let mut written = Vec::new();
    for (name, body) in files {
        let path = dir.join(name);
        std::fs::write(&path, body).map_err(io(&path))?;
        written.push(path);
    }
    Ok(written)
}

const WIDTH: f64 = 900.0;
const PANEL_H: f64 = 220.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 200.0;
const TOP: f64 = 20.0;
const GAP: f64 = 50.0;

struct Panel {
    top: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Panel {
    fn x(&self, v: f64) -> f64 {
        LEFT + v / self.x_max * (WIDTH - LEFT - RIGHT)
    }

    fn y(&self, v: f64) -> f64 {
        self.top + PANEL_H - (v - self.y_min) / (self.y_max - self.y_min) * PANEL_H
    }

    fn frame(&self, out: &mut String, title: &str, y_label: &str) {
        let (x0, x1) = (self.x(0.0), self.x(self.x_max));
        let (y0, y1) = (self.top, self.top + PANEL_H);
        let _ = writeln!(
            out,
            r#"<rect x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{PANEL_H:.2}" fill="none" stroke="black"/>"#,
            x1 - x0
        );
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" font-size="14">{title}</text>"#, x0, y0 - 5.0);
        let _ = writeln!(
            out,
            r#"<text x="15" y="{:.2}" font-size="12" transform="rotate(-90 15 {:.2})">{y_label}</text>"#,
            y0 + PANEL_H / 2.0,
            y0 + PANEL_H / 2.0
        );
        let ticks = 9;
        for i in 0..=ticks {
            let v = self.x_max * f64::from(i) / f64::from(ticks);
            let x = self.x(v);
            let _ = writeln!(
                out,
                r#"<line x1="{x:.2}" y1="{y1:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" font-size="10" text-anchor="middle">{v:.1}</text>"#,
                y1 + 4.0,
                y1 + 16.0
            );
        }
        for v in [self.y_min, 0.5 * (self.y_min + self.y_max), self.y_max] {
            let y = self.y(v);
            let _ = writeln!(
                out,
                r#"<line x1="{:.2}" y1="{y:.2}" x2="{x0:.2}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" font-size="10" text-anchor="end">{v:.3}</text>"#,
                x0 - 4.0,
                x0 - 6.0,
                y + 3.0
            );
        }
    }

    fn polyline(&self, out: &mut String, xs: &[f64], ys: &[f64], style: &str) {
        let pts: Vec<String> = xs
            .iter()
            .zip(ys)
            .map(|(&x, &y)| format!("{:.2},{:.2}", self.x(x), self.y(y)))
            .collect();
        let _ = writeln!(out, r#"<polyline fill="none" {style} points="{}"/>"#, pts.join(" "));
    }
}

fn style(backend: &Backend, noisy_index: usize) -> &'static str {
    match backend {
        Backend::Ideal => r##"stroke="#1f3b8c" stroke-width="2""##,
        Backend::Oracle => r##"stroke="#6fa8dc" stroke-width="2" stroke-dasharray="6,4""##,
        Backend::Noisy(_) if noisy_index % 2 == 0 => {
            r##"stroke="#2e9e44" stroke-width="1.5" stroke-dasharray="12,5""##
        }
        Backend::Noisy(_) => r##"stroke="#c2185b" stroke-width="1.5" stroke-dasharray="2,3""##,
    }
}

fn range(values: &[f64]) -> (f64, f64) {
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    let pad = ((hi - lo) * 0.05).max(1e-3);
    (lo - pad, hi + pad)
}

/// Three stacked panels: `g(tau)`, the mean-field return probability and the
/// exact-ground-state return probability.
pub fn plot_svg(result: &SimulationResult) -> String {
    let height = TOP + 3.0 * (PANEL_H + GAP);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}">"#
    );
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    let x_max = result.samples.last().copied().unwrap_or(1.0).max(f64::EPSILON);

    let (lo, hi) = range(&result.coupling);
    let panel = Panel { top: TOP, x_max, y_min: lo, y_max: hi };
    panel.frame(&mut out, "(a) coupling g(tau)", "g");
    if !result.coupling.is_empty() {
        panel.polyline(&mut out, &result.samples, &result.coupling, r#"stroke="black" stroke-width="2""#);
    }

    for (row, kind, title) in [
        (1.0, StateKind::Meanfield, "(b) return probability, mean-field initial state"),
        (2.0, StateKind::Exact, "(c) return probability, exact ground state"),
    ] {
        let curves: Vec<&Curve> = result.curves.iter().filter(|c| c.kind == kind).collect();
        let all: Vec<f64> = curves.iter().flat_map(|c| c.values.iter().copied()).collect();
        let (lo, hi) = range(&all);
        let panel = Panel {
            top: TOP + row * (PANEL_H + GAP),
            x_max,
            y_min: lo.max(0.0),
            y_max: hi.min(1.0 + 1e-9).max(lo.max(0.0) + 1e-3),
        };
        panel.frame(&mut out, title, "R");
        let mut noisy = 0;
        for (i, c) in curves.iter().enumerate() {
            let st = style(&c.backend, noisy);
            if matches!(c.backend, Backend::Noisy(_)) {
                noisy += 1;
            }
            panel.polyline(&mut out, &result.samples, &c.values, st);
            let ly = panel.top + 15.0 + 16.0 * i as f64;
            let lx = WIDTH - RIGHT + 10.0;
            let _ = writeln!(
                out,
                r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" {st}/><text x="{:.2}" y="{:.2}" font-size="11">{}</text>"#,
                lx + 30.0,
                lx + 35.0,
                ly + 4.0,
                c.variant()
            );
        }
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">tau</text>"#,
        LEFT + (WIDTH - LEFT - RIGHT) / 2.0,
        height - 8.0
    );
    out.push_str("</svg>\n");
    out
}
