//! Self-contained SVG line plots with axes, ticks and a legend.

use std::fmt::Write as _;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 78.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 56.0;

pub const PALETTE: [&str; 6] = [
    "#1f4e9c", "#c0392b", "#1e8449", "#7d3c98", "#b9770e", "#212f3d",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    Line,
    Dashed,
    Markers,
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub color: &'static str,
    pub style: Style,
    /// Disjoint pieces; each is drawn as its own polyline.
    pub pieces: Vec<Vec<(f64, f64)>>,
}

impl Series {
    pub fn line(label: impl Into<String>, color: &'static str, points: Vec<(f64, f64)>) -> Self {
        Self {
            label: label.into(),
            color,
            style: Style::Line,
            pieces: vec![points],
        }
    }

    pub fn styled(mut self, style: Style) -> Self {
        self.style = style;
        self
    }
}

#[derive(Debug, Clone)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub x_scale: Scale,
    pub y_scale: Scale,
    /// Fixed x window; data outside it is clipped.
    pub x_limits: Option<(f64, f64)>,
    pub series: Vec<Series>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Ticks at 1, 2 or 5 times a power of ten, about `target` of them.
pub fn nice_ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    if !(hi > lo) {
        return vec![lo];
    }
    let raw = (hi - lo) / target.max(1) as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|k| k * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if !(1e-3..1e5).contains(&a) {
        return format!("{v:.0e}");
    }
    let s = format!("{v:.4}");
    s.trim_end_matches('0').trim_end_matches('.').to_owned()
}

struct Axis {
    lo: f64,
    hi: f64,
    scale: Scale,
}

impl Axis {
    fn fit(values: impl Iterator<Item = f64>, scale: Scale) -> Self {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values {
            let v = match scale {
                Scale::Linear => v,
                Scale::Log if v > 0.0 => v.log10(),
                Scale::Log => continue,
            };
            if v.is_finite() {
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        if !lo.is_finite() {
            (lo, hi) = (0.0, 1.0);
        }
        if hi - lo < 1e-12 * (1.0 + lo.abs()) {
            (lo, hi) = (lo - 0.5, hi + 0.5);
        }
        if scale == Scale::Linear {
            let pad = 0.04 * (hi - lo);
            (lo, hi) = (lo - pad, hi + pad);
        }
        Self { lo, hi, scale }
    }

    fn frac(&self, v: f64) -> Option<f64> {
        let v = match self.scale {
            Scale::Linear => v,
            Scale::Log if v > 0.0 => v.log10(),
            Scale::Log => return None,
        };
        v.is_finite().then(|| (v - self.lo) / (self.hi - self.lo))
    }

    /// Tick positions in data units.
    fn ticks(&self) -> Vec<f64> {
        match self.scale {
            Scale::Linear => nice_ticks(self.lo, self.hi, 6),
            Scale::Log => {
                let (a, b) = (self.lo.ceil() as i32, self.hi.floor() as i32);
                let stride = (((b - a) as f64) / 8.0).ceil().max(1.0) as i32;
                (a..=b)
                    .step_by(stride as usize)
                    .map(|k| 10f64.powi(k))
                    .collect()
            }
        }
    }
}

impl Plot {
    pub fn new(
        title: impl Into<String>,
        x_label: impl Into<String>,
        y_label: impl Into<String>,
    ) -> Self {
        Self {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            x_scale: Scale::Linear,
            y_scale: Scale::Linear,
            x_limits: None,
            series: Vec::new(),
        }
    }

    pub fn log_log(mut self) -> Self {
        self.x_scale = Scale::Log;
        self.y_scale = Scale::Log;
        self
    }

    pub fn with_x_limits(mut self, lo: f64, hi: f64) -> Self {
        self.x_limits = Some((lo, hi));
        self
    }

    pub fn push(&mut self, s: Series) {
        self.series.push(s);
    }

    pub fn render(&self) -> String {
        let points = || self.series.iter().flat_map(|s| s.pieces.iter().flatten());
        let inside = |x: f64| self.x_limits.is_none_or(|(lo, hi)| x >= lo && x <= hi);
        let xa = match self.x_limits {
            Some((lo, hi)) => Axis::fit([lo, hi].into_iter(), self.x_scale),
            None => Axis::fit(points().map(|p| p.0), self.x_scale),
        };
        let ya = Axis::fit(points().filter(|p| inside(p.0)).map(|p| p.1), self.y_scale);
        let (pw, ph) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
        let px = |f: f64| LEFT + f * pw;
        let py = |f: f64| TOP + (1.0 - f) * ph;

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(
            s,
            r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            s,
            r##"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="#444"/>"##
        );
        for t in xa.ticks() {
            let Some(f) = xa.frac(t) else { continue };
            if !(0.0..=1.0).contains(&f) {
                continue;
            }
            let x = px(f);
            let _ = writeln!(
                s,
                r##"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{y1:.2}" stroke="#444"/><line x1="{x:.2}" y1="{TOP}" x2="{x:.2}" y2="{y0:.2}" stroke="#ddd" stroke-width="0.5"/><text x="{x:.2}" y="{ty:.2}" text-anchor="middle">{}</text>"##,
                tick_label(t),
                y0 = TOP + ph,
                y1 = TOP + ph + 5.0,
                ty = TOP + ph + 19.0
            );
        }
        for t in ya.ticks() {
            let Some(f) = ya.frac(t) else { continue };
            if !(0.0..=1.0).contains(&f) {
                continue;
            }
            let y = py(f);
            let _ = writeln!(
                s,
                r##"<line x1="{x0:.2}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="#444"/><line x1="{LEFT}" y1="{y:.2}" x2="{x1:.2}" y2="{y:.2}" stroke="#ddd" stroke-width="0.5"/><text x="{tx:.2}" y="{ty:.2}" text-anchor="end">{}</text>"##,
                tick_label(t),
                x0 = LEFT - 5.0,
                x1 = LEFT + pw,
                tx = LEFT - 8.0,
                ty = y + 4.0
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            LEFT + pw / 2.0,
            HEIGHT - 14.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="18" y="{cy}" text-anchor="middle" transform="rotate(-90 18 {cy})">{}</text>"#,
            escape(&self.y_label),
            cy = TOP + ph / 2.0
        );

        let _ = writeln!(
            s,
            r#"<clipPath id="plot-area"><rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}"/></clipPath><g clip-path="url(#plot-area)">"#
        );
        for series in &self.series {
            for piece in &series.pieces {
                let mapped: Vec<(f64, f64)> = piece
                    .iter()
                    .filter_map(|&(x, y)| Some((px(xa.frac(x)?), py(ya.frac(y)?))))
                    .collect();
                if mapped.is_empty() {
                    continue;
                }
                match series.style {
                    Style::Markers => {
                        for (x, y) in mapped {
                            let _ = writeln!(
                                s,
                                r#"<circle cx="{x:.2}" cy="{y:.2}" r="2" fill="{}"/>"#,
                                series.color
                            );
                        }
                    }
                    Style::Line | Style::Dashed => {
                        let dash = if series.style == Style::Dashed {
                            r#" stroke-dasharray="6 4""#
                        } else {
                            ""
                        };
                        let pts: Vec<String> = mapped
                            .iter()
                            .map(|(x, y)| format!("{x:.2},{y:.2}"))
                            .collect();
                        let _ = writeln!(
                            s,
                            r#"<polyline fill="none" stroke="{}" stroke-width="1.6"{dash} points="{}"/>"#,
                            series.color,
                            pts.join(" ")
                        );
                    }
                }
            }
        }
        s.push_str("</g>\n");

        let rows = self.series.len() as f64;
        let widest = self
            .series
            .iter()
            .map(|x| x.label.chars().count())
            .max()
            .unwrap_or(0) as f64;
        let (lw, lh) = (36.0 + 7.0 * widest, 8.0 + 18.0 * rows);
        let (lx, ly) = (LEFT + pw - lw - 8.0, TOP + 8.0);
        if !self.series.is_empty() {
            let _ = writeln!(
                s,
                r##"<rect x="{lx:.2}" y="{ly:.2}" width="{lw:.2}" height="{lh:.2}" fill="white" fill-opacity="0.85" stroke="#888"/>"##
            );
        }
        for (i, series) in self.series.iter().enumerate() {
            let y = ly + 16.0 + 18.0 * i as f64;
            let mark = match series.style {
                Style::Markers => format!(
                    r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{}"/>"#,
                    lx + 17.0,
                    y - 4.0,
                    series.color
                ),
                Style::Line | Style::Dashed => format!(
                    r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{}" stroke-width="2"{}/>"#,
                    lx + 6.0,
                    y - 4.0,
                    lx + 28.0,
                    y - 4.0,
                    series.color,
                    if series.style == Style::Dashed {
                        r#" stroke-dasharray="6 4""#
                    } else {
                        ""
                    }
                ),
            };
            let _ = writeln!(
                s,
                r#"{mark}<text x="{:.2}" y="{y:.2}">{}</text>"#,
                lx + 34.0,
                escape(&series.label)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ticks_are_round() {
        assert_eq!(
            nice_ticks(0.0, 10.0, 5),
            vec![0.0, 2.0, 4.0, 6.0, 8.0, 10.0]
        );
        let t = nice_ticks(-3.3, 1.7, 6);
        assert!(t
            .iter()
            .all(|v| (v * 1.0).fract().abs() < 1e-12 || (v * 2.0).fract().abs() < 1e-12));
        assert_eq!(nice_ticks(1.0, 1.0, 5), vec![1.0]);
    }

    #[test]
    fn render_is_self_contained() {
        let mut p = Plot::new("a < b", "x", "rho");
        p.push(Series::line(
            "plus",
            PALETTE[0],
            vec![(0.0, 1.0), (1.0, 2.0)],
        ));
        p.push(
            Series::line("minus", PALETTE[1], vec![(0.0, 2.0), (1.0, f64::NAN)])
                .styled(Style::Dashed),
        );
        let svg = p.render();
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert!(svg.contains("a &lt; b"));
        assert!(!svg.contains("href"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains(">plus</text>") && svg.contains(">minus</text>"));
    }

    #[test]
    fn log_axes_skip_nonpositive() {
        let mut p = Plot::new("t", "rho", "p").log_log();
        p.push(Series::line(
            "p",
            PALETTE[0],
            vec![(0.0, 1.0), (0.1, 1.0), (10.0, 100.0)],
        ));
        let svg = p.render();
        assert!(svg.contains(">100</text>") || svg.contains(">1e2</text>"));
    }

    #[test]
    fn x_limits_fix_the_window() {
        let mut p = Plot::new("t", "x", "y").with_x_limits(0.0, 1.0);
        p.push(Series::line(
            "a",
            PALETTE[0],
            vec![(-1e4, 0.0), (0.5, 1.0), (1e4, 0.0)],
        ));
        let svg = p.render();
        assert!(!svg.contains(">-10000</text>") && !svg.contains(">-1e4</text>"));
        assert!(svg.contains(">0.5</text>") || svg.contains(">0.4</text>"));
    }
}
