//! Minimal SVG line charts.

use std::fmt::Write;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 110.0;
const LEGEND_ROW: f64 = 18.0;

/// Named plot colours and the stroke used to draw them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Color {
    Blue,
    Red,
    Green,
    Yellow,
}

impl Color {
    pub fn name(self) -> &'static str {
        match self {
            Color::Blue => "Blue",
            Color::Red => "Red",
            Color::Green => "Green",
            Color::Yellow => "Yellow",
        }
    }

    fn stroke(self) -> &'static str {
        match self {
            Color::Blue => "#1f4fd8",
            Color::Red => "#d62728",
            Color::Green => "#2ca02c",
            // plain yellow vanishes on white
            Color::Yellow => "#e6b400",
        }
    }
}

pub struct Series<'a> {
    pub label: String,
    pub color: Color,
    pub values: &'a [f64],
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

/// One polyline per series against the sample index, with a legend naming
/// each series' colour.
pub fn line_chart(title: &str, y_label: &str, series: &[Series]) -> String {
    let finite = || {
        series
            .iter()
            .flat_map(|s| s.values.iter().copied())
            .filter(|v| v.is_finite())
    };
    let (mut lo, mut hi) = finite().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(v), h.max(v)));
    if !lo.is_finite() {
        (lo, hi) = (-1.0, 1.0);
    } else if hi - lo < 1e-12 {
        lo -= 1.0;
        hi += 1.0;
    }
    let n = series.iter().map(|s| s.values.len()).max().unwrap_or(0).max(2);
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let px = |i: usize| LEFT + plot_w * i as f64 / (n - 1) as f64;
    let py = |v: f64| TOP + plot_h * (hi - v) / (hi - lo);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let _ = writeln!(
        svg,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="gray"/>"#
    );
    if lo < 0.0 && hi > 0.0 {
        let z = py(0.0);
        let _ = writeln!(
            svg,
            r#"<line x1="{LEFT}" y1="{z:.2}" x2="{:.2}" y2="{z:.2}" stroke="lightgray" stroke-dasharray="4 3"/>"#,
            LEFT + plot_w
        );
    }
    for (v, anchor_y) in [(hi, TOP + 4.0), (lo, TOP + plot_h)] {
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{anchor_y:.2}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            escape(&format!("{v:.2}"))
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0,
        escape(y_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">frame</text>"#,
        LEFT + plot_w / 2.0,
        TOP + plot_h + 28.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{LEFT}" y="{:.2}" text-anchor="middle">0</text><text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        TOP + plot_h + 16.0,
        LEFT + plot_w,
        TOP + plot_h + 16.0,
        n - 1
    );

    for s in series {
        let mut points = String::new();
        for (i, &v) in s.values.iter().enumerate().filter(|(_, v)| v.is_finite()) {
            let _ = write!(
                points,
                "{}{:.2},{:.2}",
                if points.is_empty() { "" } else { " " },
                px(i),
                py(v)
            );
        }
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{points}"><title>{}</title></polyline>"#,
            s.color.stroke(),
            escape(&s.label)
        );
    }

    let legend_top = TOP + plot_h + 44.0;
    for (row, s) in series.iter().enumerate() {
        let y = legend_top + row as f64 * LEGEND_ROW;
        let _ = writeln!(
            svg,
            r#"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{}" stroke-width="3"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            LEFT + 24.0,
            s.color.stroke(),
            LEFT + 32.0,
            y + 4.0,
            escape(&format!("{}: {}", s.color.name(), s.label))
        );
    }
    svg.push_str("</svg>\n");
    svg
}
