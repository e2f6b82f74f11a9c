//! Minimal SVG line charts.

use std::fmt::Write;

use crate::error::validation;
use crate::Result;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const MARGIN: (f64, f64, f64, f64) = (70.0, 160.0, 40.0, 50.0); // left, right, top, bottom
const COLORS: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

/// One named curve.
#[derive(Clone, Debug)]
pub struct Series {
    pub name: String,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

fn nice_ticks(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let span = (hi - lo).max(1e-300);
    let raw = span / n as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| span / s <= n as f64).unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() * step;
    (0..)
        .map(|i| first + i as f64 * step)
        .take_while(|v| *v <= hi + 1e-9 * step)
        .collect()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders `series` as a line chart with axes, ticks and a legend.
pub fn line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> Result<String> {
    let finite = |v: &&f64| v.is_finite();
    let xs: Vec<f64> = series.iter().flat_map(|s| s.x.iter().filter(finite).copied()).collect();
    let ys: Vec<f64> = series.iter().flat_map(|s| s.y.iter().filter(finite).copied()).collect();
    if xs.is_empty() || ys.is_empty() {
        return validation("nothing to plot");
    }
    let (x0, x1) = (xs.iter().cloned().fold(f64::INFINITY, f64::min), xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
    let (mut y0, mut y1) = (ys.iter().cloned().fold(f64::INFINITY, f64::min), ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
    if y1 - y0 < 1e-12 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let pad = 0.05 * (y1 - y0);
    let (y0, y1) = (y0 - pad, y1 + pad);
    let x1 = if x1 > x0 { x1 } else { x0 + 1.0 };
    let (l, r, t, b) = MARGIN;
    let pw = WIDTH - l - r;
    let ph = HEIGHT - t - b;
    let sx = |x: f64| l + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| t + (y1 - y) / (y1 - y0) * ph;

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#, l + pw / 2.0, escape(title));
    let _ = writeln!(s, r#"<rect x="{l}" y="{t}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);
    for v in nice_ticks(x0, x1, 8) {
        let x = sx(v);
        let _ = writeln!(s, r##"<line x1="{x:.2}" y1="{}" x2="{x:.2}" y2="{}" stroke="#ddd"/>"##, t, t + ph);
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{}" text-anchor="middle">{}</text>"#, t + ph + 16.0, fmt_tick(v));
    }
    for v in nice_ticks(y0, y1, 6) {
        let y = sy(v);
        let _ = writeln!(s, r##"<line x1="{l}" y1="{y:.2}" x2="{}" y2="{y:.2}" stroke="#ddd"/>"##, l + pw);
        let _ = writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#, l - 6.0, y + 4.0, fmt_tick(v));
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, l + pw / 2.0, HEIGHT - 12.0, escape(x_label));
    let _ = writeln!(
        s,
        r#"<text x="18" y="{0}" text-anchor="middle" transform="rotate(-90 18 {0})">{1}</text>"#,
        t + ph / 2.0,
        escape(y_label)
    );
    for (i, ser) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = ser
            .x
            .iter()
            .zip(&ser.y)
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|(&x, &y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, pts.join(" "));
        let ly = t + 14.0 + 18.0 * i as f64;
        let lx = l + pw + 12.0;
        let _ = writeln!(s, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#, lx + 20.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, lx + 26.0, ly + 4.0, escape(&ser.name));
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn fmt_tick(v: f64) -> String {
    let r = (v * 1e6).round() / 1e6;
    if r == 0.0 {
        "0".into()
    } else {
        format!("{r}")
    }
}

/// Line chart of columns `y_cols` against the first column of a CSV file's text.
pub fn plot_csv(csv_text: &str, y_cols: &[&str], title: &str, y_label: &str) -> Result<String> {
    let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| crate::Error::Validation(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let idx: Vec<usize> = y_cols
        .iter()
        .map(|c| headers.iter().position(|h| h == c).ok_or_else(|| crate::Error::Validation(format!("no column {c}"))))
        .collect::<Result<_>>()?;
    let mut x = Vec::new();
    let mut ys = vec![Vec::new(); idx.len()];
    for rec in reader.records() {
        let rec = rec.map_err(|e| crate::Error::Validation(e.to_string()))?;
        let parse = |i: usize| rec.get(i).and_then(|v| v.parse::<f64>().ok()).unwrap_or(f64::NAN);
        x.push(parse(0));
        for (y, &i) in ys.iter_mut().zip(&idx) {
            y.push(parse(i));
        }
    }
    let series: Vec<Series> = y_cols
        .iter()
        .zip(ys)
        .map(|(n, y)| Series { name: (*n).to_string(), x: x.clone(), y })
        .collect();
    line_chart(title, &headers[0], y_label, &series)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ticks_cover_range() {
        let t = nice_ticks(0.0, 300.0, 8);
        assert_eq!(t.first(), Some(&0.0));
        assert_eq!(t.last(), Some(&300.0));
    }

    #[test]
    fn plot_from_csv_text() {
        let svg = plot_csv("t_fs,a,b\n0,1,2\n1,2,3\n", &["a", "b"], "x", "y").unwrap();
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(plot_csv("t_fs,a\n0,1\n", &["c"], "x", "y").is_err());
    }
}
