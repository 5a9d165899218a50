//! Minimal SVG documents: a line plot and a categorical raster.

use std::fmt::Write;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 180.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 56.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

pub struct Series<'a> {
    pub label: &'a str,
    pub xs: &'a [f64],
    pub ys: &'a [f64],
}

fn tick(x: f64) -> String {
    if x == 0.0 || (1e-2..1e4).contains(&x.abs()) {
        let s = format!("{x:.3}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        if s == "-0" {
            "0".into()
        } else {
            s.into()
        }
    } else {
        format!("{x:.2e}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn header(out: &mut String, title: &str, x_label: &str, y_label: &str) {
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        LEFT + plot_w / 2.0,
        escape(title)
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 12.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="18" y="{0:.1}" text-anchor="middle" transform="rotate(-90 18 {0:.1})">{1}</text>"#,
        TOP + plot_h / 2.0,
        escape(y_label)
    );
}

fn axes(out: &mut String, x_ticks: &[(f64, String)], y_ticks: &[(f64, String)]) {
    let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, HEIGHT - BOTTOM, TOP);
    let _ = writeln!(
        out,
        r#"<path d="M{x0:.1} {y1:.1} V{y0:.1} H{x1:.1}" fill="none" stroke="black"/>"#
    );
    for (px, label) in x_ticks {
        let _ = writeln!(
            out,
            r#"<line x1="{px:.1}" y1="{y0:.1}" x2="{px:.1}" y2="{:.1}" stroke="black"/><text x="{px:.1}" y="{:.1}" text-anchor="middle">{label}</text>"#,
            y0 + 5.0,
            y0 + 19.0
        );
    }
    for (py, label) in y_ticks {
        let _ = writeln!(
            out,
            r#"<line x1="{:.1}" y1="{py:.1}" x2="{x0:.1}" y2="{py:.1}" stroke="black"/><text x="{:.1}" y="{:.1}" text-anchor="end">{label}</text>"#,
            x0 - 5.0,
            x0 - 8.0,
            py + 4.0
        );
    }
}

fn legend(out: &mut String, entries: &[(&str, &str)], swatch: bool) {
    let x = WIDTH - RIGHT + 16.0;
    for (i, (label, colour)) in entries.iter().enumerate() {
        let y = TOP + 10.0 + 20.0 * i as f64;
        if swatch {
            let _ = writeln!(
                out,
                r#"<rect x="{x:.1}" y="{:.1}" width="12" height="12" fill="{colour}"/>"#,
                y - 6.0
            );
        } else {
            let _ = writeln!(
                out,
                r#"<line x1="{x:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="{colour}" stroke-width="2"/>"#,
                x + 18.0
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}">{}</text>"#,
            x + 24.0,
            y + 4.0,
            escape(label)
        );
    }
}

/// Padded `[lo, hi]` over the finite values; degenerate ranges are widened.
fn range<'a>(values: impl Iterator<Item = &'a f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(*v), hi.max(*v))
        });
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo <= 1e-12 * hi.abs().max(lo.abs()).max(1e-300) {
        let pad = if lo == 0.0 { 1.0 } else { 0.5 * lo.abs() };
        return (lo - pad, hi + pad);
    }
    let pad = 0.04 * (hi - lo);
    (lo - pad, hi + pad)
}

/// Line plot of every series on shared linear axes. Non-finite points break
/// the polyline.
pub fn line_plot(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let (xlo, xhi) = range(series.iter().flat_map(|s| s.xs.iter()));
    let (ylo, yhi) = range(series.iter().flat_map(|s| s.ys.iter()));
    let px = |x: f64| LEFT + (x - xlo) / (xhi - xlo) * (WIDTH - LEFT - RIGHT);
    let py = |y: f64| HEIGHT - BOTTOM - (y - ylo) / (yhi - ylo) * (HEIGHT - TOP - BOTTOM);

    let mut out = String::new();
    header(&mut out, title, x_label, y_label);
    let ticks = |lo: f64, hi: f64, map: &dyn Fn(f64) -> f64| -> Vec<(f64, String)> {
        (0..=4)
            .map(|i| lo + (hi - lo) * i as f64 / 4.0)
            .map(|v| (map(v), tick(v)))
            .collect()
    };
    axes(&mut out, &ticks(xlo, xhi, &px), &ticks(ylo, yhi, &py));

    for (i, s) in series.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let mut d = String::new();
        let mut pen_down = false;
        for (x, y) in s.xs.iter().zip(s.ys) {
            if !(x.is_finite() && y.is_finite()) {
                pen_down = false;
                continue;
            }
            let _ = write!(d, "{}{:.2} {:.2} ", if pen_down { "L" } else { "M" }, px(*x), py(*y));
            pen_down = true;
        }
        let _ = writeln!(
            out,
            r#"<path d="{}" fill="none" stroke="{colour}" stroke-width="1.5"/>"#,
            d.trim_end()
        );
    }
    let entries: Vec<(&str, &str)> = series
        .iter()
        .enumerate()
        .map(|(i, s)| (s.label, PALETTE[i % PALETTE.len()]))
        .collect();
    legend(&mut out, &entries, false);
    out.push_str("</svg>\n");
    out
}

/// Categorical map; `cells[iy][ix]` indexes `categories`, and row 0 is drawn
/// at the bottom. Axis ticks show the first, middle and last coordinates.
pub fn raster(
    title: &str,
    x_label: &str,
    y_label: &str,
    xs: &[f64],
    ys: &[f64],
    cells: &[Vec<usize>],
    categories: &[&str],
) -> String {
    let (nx, ny) = (xs.len(), ys.len());
    let cw = (WIDTH - LEFT - RIGHT) / nx as f64;
    let ch = (HEIGHT - TOP - BOTTOM) / ny as f64;

    let mut out = String::new();
    header(&mut out, title, x_label, y_label);
    for (iy, row) in cells.iter().enumerate() {
        for (ix, cat) in row.iter().enumerate() {
            let _ = writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                LEFT + ix as f64 * cw,
                HEIGHT - BOTTOM - (iy + 1) as f64 * ch,
                cw + 0.05,
                ch + 0.05,
                PALETTE[cat % PALETTE.len()]
            );
        }
    }
    let picks = |n: usize| {
        let mut v = vec![0, n / 2, n - 1];
        v.dedup();
        v
    };
    let x_ticks: Vec<(f64, String)> = picks(nx)
        .into_iter()
        .map(|i| (LEFT + (i as f64 + 0.5) * cw, tick(xs[i])))
        .collect();
    let y_ticks: Vec<(f64, String)> = picks(ny)
        .into_iter()
        .map(|i| (HEIGHT - BOTTOM - (i as f64 + 0.5) * ch, tick(ys[i])))
        .collect();
    axes(&mut out, &x_ticks, &y_ticks);
    let entries: Vec<(&str, &str)> = categories
        .iter()
        .enumerate()
        .map(|(i, c)| (*c, PALETTE[i % PALETTE.len()]))
        .collect();
    legend(&mut out, &entries, true);
    out.push_str("</svg>\n");
    out
}
