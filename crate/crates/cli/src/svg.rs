//! Minimal deterministic SVG charts: line plots and a grayscale raster.
//!
//! Output depends only on the data: fixed canvas size, fixed number
//! formatting, no timestamps or random ids.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;
const TICKS: usize = 5;

pub struct Axes<'a> {
    pub title: &'a str,
    pub x_label: &'a str,
    pub y_label: &'a str,
}

fn extent(values: &[f64]) -> (f64, f64) {
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if hi > lo {
        (lo, hi)
    } else {
        let pad = if lo == 0.0 { 1.0 } else { lo.abs() * 0.5 };
        (lo - pad, hi + pad)
    }
}

fn tick_label(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 {
        "0".into()
    } else if !(1e-3..1e4).contains(&a) {
        format!("{x:.2e}")
    } else {
        format!("{x:.3}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - TOP - BOTTOM)
    }
}

fn open(out: &mut String, axes: &Axes, frame: &Frame) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="20" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(axes.title)
    );
    let (x0, y0, x1, y1) = (LEFT, HEIGHT - BOTTOM, WIDTH - RIGHT, TOP);
    let _ = writeln!(
        out,
        r#"<path d="M{x0:.1} {y1:.1} L{x0:.1} {y0:.1} L{x1:.1} {y0:.1}" fill="none" stroke="black"/>"#
    );
    for k in 0..=TICKS {
        let f = k as f64 / TICKS as f64;
        let xv = frame.x.0 + f * (frame.x.1 - frame.x.0);
        let yv = frame.y.0 + f * (frame.y.1 - frame.y.0);
        let (px, py) = (frame.px(xv), frame.py(yv));
        let _ = writeln!(
            out,
            r#"<line x1="{px:.1}" y1="{y0:.1}" x2="{px:.1}" y2="{:.1}" stroke="black"/><text x="{px:.1}" y="{:.1}" font-family="sans-serif" font-size="10" text-anchor="middle">{}</text>"#,
            y0 + 4.0,
            y0 + 16.0,
            tick_label(xv)
        );
        let _ = writeln!(
            out,
            r#"<line x1="{:.1}" y1="{py:.1}" x2="{x0:.1}" y2="{py:.1}" stroke="black"/><text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="10" text-anchor="end">{}</text>"#,
            x0 - 4.0,
            x0 - 6.0,
            py + 3.0,
            tick_label(yv)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 12.0,
        escape(axes.x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{:.1}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(axes.y_label)
    );
}

/// Single polyline through `(xs[i], ys[i])`.
pub fn line_plot(axes: &Axes, xs: &[f64], ys: &[f64]) -> String {
    let frame = Frame {
        x: extent(xs),
        y: extent(ys),
    };
    let mut out = String::new();
    open(&mut out, axes, &frame);
    let mut points = String::new();
    for (i, (&x, &y)) in xs.iter().zip(ys).enumerate() {
        if i > 0 {
            points.push(' ');
        }
        let _ = write!(points, "{:.2},{:.2}", frame.px(x), frame.py(y));
    }
    let _ = writeln!(
        out,
        r#"<polyline points="{points}" fill="none" stroke="black" stroke-width="1.5"/>"#
    );
    if xs.len() == 1 {
        let _ = writeln!(
            out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="black"/>"#,
            frame.px(xs[0]),
            frame.py(ys[0])
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Grayscale raster: `values[i][k]` drawn at `(xs[k], ys[i])`, darker for
/// larger values.
pub fn raster(axes: &Axes, xs: &[f64], ys: &[f64], values: &[Vec<f64>]) -> String {
    let frame = Frame {
        x: extent(xs),
        y: extent(ys),
    };
    let vmax = values
        .iter()
        .flatten()
        .cloned()
        .fold(0.0_f64, f64::max);
    let mut out = String::new();
    open(&mut out, axes, &frame);
    let cell_w = (WIDTH - LEFT - RIGHT) / xs.len() as f64;
    let cell_h = (HEIGHT - TOP - BOTTOM) / ys.len() as f64;
    for (i, row) in values.iter().enumerate() {
        // first row at the bottom
        let y = HEIGHT - BOTTOM - (i + 1) as f64 * cell_h;
        for (k, &v) in row.iter().enumerate() {
            let level = if vmax > 0.0 { v / vmax } else { 0.0 };
            let shade = (255.0 * (1.0 - level)).round().clamp(0.0, 255.0) as u8;
            let _ = writeln!(
                out,
                r#"<rect x="{:.2}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="rgb({shade},{shade},{shade})"/>"#,
                LEFT + k as f64 * cell_w,
                cell_w + 0.05,
                cell_h + 0.05
            );
        }
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="20" font-family="sans-serif" font-size="10" text-anchor="end">max {}</text>"#,
        WIDTH - RIGHT,
        tick_label(vmax)
    );
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const AXES: Axes = Axes {
        title: "t < 1 & more",
        x_label: "x",
        y_label: "y",
    };

    #[test]
    fn line_plot_is_deterministic_and_well_formed() {
        let xs = [0.0, 1.0, 2.0];
        let ys = [0.0, 0.5, 0.25];
        let a = line_plot(&AXES, &xs, &ys);
        assert_eq!(a, line_plot(&AXES, &xs, &ys));
        assert!(a.starts_with("<svg") && a.ends_with("</svg>\n"));
        assert!(a.contains("t &lt; 1 &amp; more"));
        assert!(a.contains("<polyline"));
    }

    #[test]
    fn flat_and_single_point_data() {
        let s = line_plot(&AXES, &[1.0], &[0.0]);
        assert!(s.contains("<circle"));
        assert!(!s.contains("NaN"));
    }

    #[test]
    fn raster_cells() {
        let s = raster(&AXES, &[0.0, 1.0], &[0.0, 1.0, 2.0], &[vec![0.0, 1.0], vec![0.5, 0.0], vec![0.0, 0.0]]);
        assert_eq!(s.matches("<rect").count(), 1 + 6);
        assert!(s.contains("rgb(0,0,0)"));
        assert!(s.contains("rgb(128,128,128)"));
    }
}
