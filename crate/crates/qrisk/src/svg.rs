//! Static SVG scatter plot of a risk-return profile with its fitted line.

use std::fmt::Write;

use qrisk_core::backtest::RiskReturnProfile;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 60.0;
const TICKS: usize = 5;

struct Axis {
    lo: f64,
    hi: f64,
}

impl Axis {
    fn new(values: impl Iterator<Item = f64>) -> Self {
        let (mut lo, mut hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        if hi <= lo {
            lo -= 0.5;
            hi += 0.5;
        }
        let pad = 0.08 * (hi - lo);
        Axis {
            lo: lo - pad,
            hi: hi + pad,
        }
    }

    fn frac(&self, v: f64) -> f64 {
        (v - self.lo) / (self.hi - self.lo)
    }
}

/// Renders the profile; the output depends only on the profile values.
pub fn render(profile: &RiskReturnProfile) -> String {
    let xs = Axis::new(profile.points.iter().map(|p| p.mean_risk));
    let ys = Axis::new(profile.points.iter().map(|p| 100.0 * p.e_rel));
    let px = |x: f64| MARGIN + xs.frac(x) * (WIDTH - 1.5 * MARGIN);
    let py = |y: f64| HEIGHT - MARGIN - ys.frac(y) * (HEIGHT - 1.5 * MARGIN);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (x0, x1, y0, y1) = (px(xs.lo), px(xs.hi), py(ys.lo), py(ys.hi));
    let _ = writeln!(
        s,
        r#"<path d="M{x0:.2} {y1:.2} V{y0:.2} H{x1:.2}" fill="none" stroke="black"/>"#
    );
    for i in 0..=TICKS {
        let t = i as f64 / TICKS as f64;
        let xv = xs.lo + t * (xs.hi - xs.lo);
        let yv = ys.lo + t * (ys.hi - ys.lo);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{xv:.3}</text>"#,
            px(xv),
            y0 + 18.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{yv:.3}</text>"#,
            x0 - 6.0,
            py(yv) + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{} (mean bin risk)</text>"#,
        0.5 * (x0 + x1),
        HEIGHT - 12.0,
        profile.measure
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{:.2}" text-anchor="middle" transform="rotate(-90 14 {:.2})">E_rel (% per month)</text>"#,
        0.5 * (y0 + y1),
        0.5 * (y0 + y1)
    );
    let f = &profile.fit;
    let _ = writeln!(
        s,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="crimson" stroke-width="1.5"/>"#,
        px(xs.lo),
        py(100.0 * f.predict(xs.lo)),
        px(xs.hi),
        py(100.0 * f.predict(xs.hi))
    );
    for p in &profile.points {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="black"/>"#,
            px(p.mean_risk),
            py(100.0 * p.e_rel)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}">p0 = {:.5}, p1 = {:.5}, chi2 = {:.4}</text>"#,
        x0 + 10.0,
        py(ys.hi) + 16.0,
        f.p0,
        f.p1,
        f.chi2
    );
    s.push_str("</svg>\n");
    s
}
