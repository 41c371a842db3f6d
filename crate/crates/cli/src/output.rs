//! Artifact emission: CSV tables with full-precision plain-decimal numbers,
//! JSON summaries with the config echo, and a minimal static SVG line chart.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use hopfwind_core::oracle::EvansTrace;
use hopfwind_core::phase::PhaseSeries;

/// Plain-decimal formatting with 17 significant digits, enough for exact
/// f64 round-trips.
pub fn fmt_g17(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (16 - magnitude).clamp(0, 340) as usize;
    format!("{x:.decimals$}")
}

pub fn write_text(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content).with_context(|| format!("writing {}", path.display()))
}

pub fn phase_series_csv(series: &PhaseSeries) -> String {
    let mut out = String::from("x,gp_at_x,relative\n");
    for (k, &x) in series.x_grid.iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{},{}",
            fmt_g17(x),
            fmt_g17(series.gp_at_x[k]),
            fmt_g17(series.relative[k])
        );
    }
    out
}

pub fn evans_trace_csv(trace: &EvansTrace) -> String {
    let mut out = String::from("re_lambda,im_lambda,re_E,im_E,log_mag,unwrapped_arg\n");
    for (j, lambda) in trace.lambdas.iter().enumerate() {
        let value = trace.values[j];
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_g17(lambda.re),
            fmt_g17(lambda.im),
            fmt_g17(value.re),
            fmt_g17(value.im),
            fmt_g17(trace.log_magnitudes[j]),
            fmt_g17(trace.unwrapped_arg[j])
        );
    }
    out
}

/// Rows of (s, branch, re, im).
pub fn spectrum_csv(rows: &[(f64, char, f64, f64)]) -> String {
    let mut out = String::from("s,branch,re,im\n");
    for (s, branch, re, im) in rows {
        let _ = writeln!(out, "{},{},{},{}", fmt_g17(*s), branch, fmt_g17(*re), fmt_g17(*im));
    }
    out
}

/// A single-polyline chart of the relative phase against the integration
/// endpoint, with numeric axis ticks. Static markup, no renderer involved.
pub fn phase_transition_svg(series: &PhaseSeries) -> String {
    const WIDTH: f64 = 800.0;
    const HEIGHT: f64 = 500.0;
    const LEFT: f64 = 70.0;
    const RIGHT: f64 = 20.0;
    const TOP: f64 = 20.0;
    const BOTTOM: f64 = 50.0;

    let x_min = *series.x_grid.first().unwrap();
    let x_max = *series.x_grid.last().unwrap();
    let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for &r in &series.relative {
        y_min = y_min.min(r);
        y_max = y_max.max(r);
    }
    if (y_max - y_min).abs() < 1e-9 {
        y_min -= 0.5;
        y_max += 0.5;
    }
    let pad = 0.05 * (y_max - y_min);
    y_min -= pad;
    y_max += pad;

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = move |x: f64| LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let sy = move |y: f64| TOP + (y_max - y) / (y_max - y_min) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" \
         font-family=\"monospace\" font-size=\"12\">"
    );
    let _ = writeln!(svg, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>");

    // axes
    let _ = writeln!(
        svg,
        "<line x1=\"{LEFT}\" y1=\"{TOP}\" x2=\"{LEFT}\" y2=\"{}\" stroke=\"black\"/>",
        TOP + plot_h
    );
    let _ = writeln!(
        svg,
        "<line x1=\"{LEFT}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>",
        TOP + plot_h,
        LEFT + plot_w,
        TOP + plot_h
    );

    // ticks
    const N_TICKS: usize = 5;
    for i in 0..=N_TICKS {
        let frac = i as f64 / N_TICKS as f64;
        let x_val = x_min + frac * (x_max - x_min);
        let px = sx(x_val);
        let _ = writeln!(
            svg,
            "<line x1=\"{px:.2}\" y1=\"{0}\" x2=\"{px:.2}\" y2=\"{1}\" stroke=\"black\"/>",
            TOP + plot_h,
            TOP + plot_h + 5.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{px:.2}\" y=\"{}\" text-anchor=\"middle\">{x_val:.2}</text>",
            TOP + plot_h + 20.0
        );

        let y_val = y_min + frac * (y_max - y_min);
        let py = sy(y_val);
        let _ = writeln!(
            svg,
            "<line x1=\"{0}\" y1=\"{py:.2}\" x2=\"{1}\" y2=\"{py:.2}\" stroke=\"black\"/>",
            LEFT - 5.0,
            LEFT
        );
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{:.2}\" text-anchor=\"end\">{y_val:.3}</text>",
            LEFT - 9.0,
            py + 4.0
        );
    }

    let _ = writeln!(
        svg,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">integration endpoint x1</text>",
        LEFT + plot_w / 2.0,
        HEIGHT - 8.0
    );
    let _ = writeln!(
        svg,
        "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">relative phase</text>",
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );

    let mut points = String::new();
    for (k, &x) in series.x_grid.iter().enumerate() {
        let _ = write!(points, "{:.3},{:.3} ", sx(x), sy(series.relative[k]));
    }
    let _ = writeln!(
        svg,
        "<polyline points=\"{}\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>",
        points.trim_end()
    );
    let _ = writeln!(svg, "</svg>");
    svg
}
