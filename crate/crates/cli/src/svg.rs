//! Minimal SVG charts: line, scatter and grouped bar panels.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 52.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
    body: String,
}

impl Frame {
    fn new(title: &str, x_label: &str, y_label: &str, x: (f64, f64), y: (f64, f64)) -> Self {
        let pad = |(lo, hi): (f64, f64)| {
            if hi > lo {
                (lo, hi)
            } else {
                (lo - 0.5, hi + 0.5)
            }
        };
        let mut frame = Self {
            x: pad(x),
            y: pad(y),
            body: String::new(),
        };
        let (pw, ph) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
        let b = &mut frame.body;
        let _ = write!(
            b,
            r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="rgb(51,51,51)"/>"#
        );
        let _ = write!(
            b,
            r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            LEFT + pw / 2.0,
            escape(title)
        );
        let _ = write!(
            b,
            r#"<text x="{}" y="{}" text-anchor="middle" font-size="12">{}</text>"#,
            LEFT + pw / 2.0,
            HEIGHT - 12.0,
            escape(x_label)
        );
        let _ = write!(
            b,
            r#"<text x="16" y="{}" text-anchor="middle" font-size="12" transform="rotate(-90 16 {})">{}</text>"#,
            TOP + ph / 2.0,
            TOP + ph / 2.0,
            escape(y_label)
        );
        for i in 0..=4 {
            let t = i as f64 / 4.0;
            let xv = frame.x.0 + t * (frame.x.1 - frame.x.0);
            let yv = frame.y.0 + t * (frame.y.1 - frame.y.0);
            let (px, py) = (frame.px(xv), frame.py(yv));
            let b = &mut frame.body;
            let _ = write!(
                b,
                r#"<text x="{px:.1}" y="{}" text-anchor="middle" font-size="10">{}</text>"#,
                TOP + ph + 14.0,
                tick(xv)
            );
            let _ = write!(
                b,
                r#"<text x="{}" y="{:.1}" text-anchor="end" font-size="10">{}</text>"#,
                LEFT - 4.0,
                py + 3.0,
                tick(yv)
            );
        }
        frame
    }

    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - TOP - BOTTOM)
    }

    fn legend(&mut self, index: usize, name: &str, color: &str) {
        let y = TOP + 10.0 + 18.0 * index as f64;
        let x = WIDTH - RIGHT + 12.0;
        let _ = write!(
            self.body,
            r#"<rect x="{x}" y="{}" width="10" height="10" fill="{color}"/><text x="{}" y="{}" font-size="11">{}</text>"#,
            y - 9.0,
            x + 14.0,
            y,
            escape(name)
        );
    }

    fn finish(self) -> String {
        format!(
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif"><rect width="100%" height="100%" fill="white"/>{}</svg>
"#,
            self.body
        )
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn tick(v: f64) -> String {
    let s = format!("{v:.2}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn bounds<'a>(values: impl Iterator<Item = &'a f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
        (lo.min(v), hi.max(v))
    })
}

fn color(i: usize) -> &'static str {
    PALETTE[i % PALETTE.len()]
}

pub fn line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let x = bounds(series.iter().flat_map(|s| s.points.iter().map(|p| &p.0)));
    let y = bounds(series.iter().flat_map(|s| s.points.iter().map(|p| &p.1)));
    let mut frame = Frame::new(title, x_label, y_label, x, (y.0.min(0.0), y.1));
    for (i, s) in series.iter().enumerate() {
        let path: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", frame.px(x), frame.py(y)))
            .collect();
        let _ = write!(
            frame.body,
            r#"<polyline fill="none" stroke="{}" stroke-width="2" points="{}"/>"#,
            color(i),
            path.join(" ")
        );
        frame.legend(i, &s.name, color(i));
    }
    frame.finish()
}

/// Scatter groups plus an optional highlighted overlay (drawn as rings).
pub fn scatter_chart(
    title: &str,
    x_label: &str,
    y_label: &str,
    groups: &[Series],
    overlay: Option<&Series>,
) -> String {
    let all = || groups.iter().chain(overlay).flat_map(|s| s.points.iter());
    let x = bounds(all().map(|p| &p.0));
    let y = bounds(all().map(|p| &p.1));
    let mut frame = Frame::new(title, x_label, y_label, x, y);
    for (i, s) in groups.iter().enumerate() {
        for &(x, y) in &s.points {
            let _ = write!(
                frame.body,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{}" fill-opacity="0.5"/>"#,
                frame.px(x),
                frame.py(y),
                color(i)
            );
        }
        frame.legend(i, &s.name, color(i));
    }
    if let Some(s) = overlay {
        for &(x, y) in &s.points {
            let _ = write!(
                frame.body,
                r#"<circle cx="{:.2}" cy="{:.2}" r="6" fill="none" stroke="black" stroke-width="1.5"/>"#,
                frame.px(x),
                frame.py(y)
            );
        }
        frame.legend(groups.len(), &s.name, "black");
    }
    frame.finish()
}

/// Grouped bars: one group per category, one bar per series.
pub fn bar_chart(
    title: &str,
    x_label: &str,
    y_label: &str,
    categories: &[String],
    series: &[Series],
) -> String {
    let top = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.1))
        .fold(0.0f64, f64::max);
    let n = categories.len().max(1) as f64;
    let mut frame = Frame::new(title, x_label, y_label, (0.0, n), (0.0, top));
    let group_width = (WIDTH - LEFT - RIGHT) / n;
    let bar_width = group_width * 0.8 / series.len().max(1) as f64;
    for (i, s) in series.iter().enumerate() {
        for (c, &(_, value)) in s.points.iter().enumerate() {
            let x0 = LEFT + group_width * (c as f64 + 0.1) + bar_width * i as f64;
            let y0 = frame.py(value);
            let _ = write!(
                frame.body,
                r#"<rect x="{x0:.2}" y="{y0:.2}" width="{bar_width:.2}" height="{:.2}" fill="{}"/>"#,
                frame.py(0.0) - y0,
                color(i)
            );
        }
        frame.legend(i, &s.name, color(i));
    }
    for (c, name) in categories.iter().enumerate() {
        let _ = write!(
            frame.body,
            r#"<text x="{:.2}" y="{}" text-anchor="middle" font-size="10">{}</text>"#,
            LEFT + group_width * (c as f64 + 0.5),
            HEIGHT - BOTTOM + 28.0,
            escape(name)
        );
    }
    frame.finish()
}
