//! Deterministic SVG plots. Coordinates are printed with fixed precision so
//! the same input always yields the same bytes.

use std::fmt::Write;

use crate::dist::std_normal_pdf;
use crate::meta::ForestRow;

const FONT: &str = "font-family=\"sans-serif\" font-size=\"12\"";

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Tick values 1, 2, 5 times powers of ten inside `[lo, hi]`.
fn log_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let mut ticks = vec![];
    let start = lo.log10().floor() as i32 - 1;
    let end = hi.log10().ceil() as i32 + 1;
    for e in start..=end {
        for m in [1.0, 2.0, 5.0] {
            let t = m * 10f64.powi(e);
            if t >= lo && t <= hi {
                ticks.push(t);
            }
        }
    }
    ticks
}

fn tick_label(t: f64) -> String {
    let s = format!("{t:.3}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Forest plot: one box and whisker per study, a diamond for the combined
/// row, a log-scaled odds ratio axis and a dashed reference line at 1.
pub fn forest(rows: &[ForestRow]) -> String {
    let (left, right, top, row_h) = (330.0, 730.0, 30.0, 28.0);
    let width = 760.0;
    let height = top + row_h * (rows.len() as f64 + 1.0) + 40.0;

    let lo = rows.iter().map(|r| r.lo).fold(1.0f64, f64::min) / 1.25;
    let hi = rows.iter().map(|r| r.hi).fold(1.0f64, f64::max) * 1.25;
    let (llo, lhi) = (lo.ln(), hi.ln());
    let x = |v: f64| left + (right - left) * (v.ln() - llo) / (lhi - llo);
    let axis_y = top + row_h * (rows.len() as f64 + 0.5);

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\">"
    );
    let _ = writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    let _ = writeln!(
        s,
        "<line class=\"reference\" x1=\"{0:.2}\" y1=\"{1:.2}\" x2=\"{0:.2}\" y2=\"{2:.2}\" stroke=\"grey\" stroke-dasharray=\"4 3\"/>",
        x(1.0),
        top - 10.0,
        axis_y
    );
    for (i, r) in rows.iter().enumerate() {
        let y = top + row_h * (i as f64 + 0.5);
        let _ = writeln!(
            s,
            "<text x=\"10\" y=\"{:.2}\" {FONT}>{}</text>",
            y + 4.0,
            escape(&r.label)
        );
        let _ = writeln!(
            s,
            "<text x=\"{:.2}\" y=\"{:.2}\" {FONT} text-anchor=\"end\" fill=\"#444\">{:.3} ({:.3}, {:.3})</text>",
            left - 12.0,
            y + 4.0,
            r.or,
            r.lo,
            r.hi
        );
        if r.combined {
            let _ = writeln!(
                s,
                "<polygon class=\"combined\" points=\"{:.2},{y:.2} {:.2},{:.2} {:.2},{y:.2} {:.2},{:.2}\" fill=\"black\"/>",
                x(r.lo),
                x(r.or),
                y - 7.0,
                x(r.hi),
                x(r.or),
                y + 7.0
            );
        } else {
            let _ = writeln!(
                s,
                "<line class=\"whisker\" x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"black\"/>",
                x(r.lo),
                x(r.hi)
            );
            let _ = writeln!(
                s,
                "<rect class=\"study\" x=\"{:.2}\" y=\"{:.2}\" width=\"8\" height=\"8\" fill=\"black\"/>",
                x(r.or) - 4.0,
                y - 4.0
            );
        }
    }
    let _ = writeln!(
        s,
        "<line x1=\"{left:.2}\" y1=\"{axis_y:.2}\" x2=\"{right:.2}\" y2=\"{axis_y:.2}\" stroke=\"black\"/>"
    );
    for t in log_ticks(lo, hi) {
        let _ = writeln!(
            s,
            "<line x1=\"{0:.2}\" y1=\"{1:.2}\" x2=\"{0:.2}\" y2=\"{2:.2}\" stroke=\"black\"/>",
            x(t),
            axis_y,
            axis_y + 5.0
        );
        let _ = writeln!(
            s,
            "<text x=\"{:.2}\" y=\"{:.2}\" {FONT} text-anchor=\"middle\">{}</text>",
            x(t),
            axis_y + 18.0,
            tick_label(t)
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"{:.2}\" y=\"{:.2}\" {FONT} text-anchor=\"middle\">Odds ratio (log scale)</text>",
        0.5 * (left + right),
        axis_y + 34.0
    );
    s.push_str("</svg>\n");
    s
}

/// Input for [`qcurve`].
pub struct QCurve<'a> {
    /// `(mu_star, q)` samples in increasing `mu_star`.
    pub samples: &'a [(f64, f64)],
    /// The marked point `(theta0 + eps, q)`.
    pub marked: (f64, f64),
    pub theta0: f64,
    /// Distance of the estimate from `theta0`.
    pub distance: f64,
    pub se: f64,
}

/// Two panels: the Q curve with its marked point, and the sampling density
/// at the marked null with both tails beyond `theta0 -/+ distance` shaded.
pub fn qcurve(c: &QCurve) -> String {
    let (width, panel_h, left, right) = (640.0, 220.0, 60.0, 610.0);
    let height = 2.0 * panel_h + 60.0;
    let (x0, x1) = (
        c.samples.first().map_or(0.0, |p| p.0),
        c.samples.last().map_or(1.0, |p| p.0),
    );
    let x = |v: f64| left + (right - left) * (v - x0) / (x1 - x0);

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\">"
    );
    let _ = writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");

    // Panel 1: q against mu_star, y in [0, 1].
    let (t1, b1) = (20.0, panel_h);
    let y1 = |q: f64| b1 - (b1 - t1) * q;
    let pts: Vec<String> = c
        .samples
        .iter()
        .map(|(m, q)| format!("{:.2},{:.2}", x(*m), y1(*q)))
        .collect();
    let _ = writeln!(
        s,
        "<polyline class=\"qcurve\" points=\"{}\" fill=\"none\" stroke=\"black\"/>",
        pts.join(" ")
    );
    let _ = writeln!(
        s,
        "<line x1=\"{left:.2}\" y1=\"{b1:.2}\" x2=\"{right:.2}\" y2=\"{b1:.2}\" stroke=\"black\"/>"
    );
    let _ = writeln!(
        s,
        "<line x1=\"{left:.2}\" y1=\"{t1:.2}\" x2=\"{left:.2}\" y2=\"{b1:.2}\" stroke=\"black\"/>"
    );
    for q in [0.0, 0.5, 1.0] {
        let _ = writeln!(
            s,
            "<text x=\"{:.2}\" y=\"{:.2}\" {FONT} text-anchor=\"end\">{q:.1}</text>",
            left - 6.0,
            y1(q) + 4.0
        );
    }
    let (mx, mq) = c.marked;
    let _ = writeln!(
        s,
        "<circle class=\"marked\" cx=\"{:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"crimson\"/>",
        x(mx),
        y1(mq)
    );
    let (label_dx, anchor) = if x(mx) > 0.5 * (left + right) {
        (-8.0, "end")
    } else {
        (8.0, "start")
    };
    let _ = writeln!(
        s,
        "<text x=\"{:.2}\" y=\"{:.2}\" {FONT} fill=\"crimson\" text-anchor=\"{anchor}\">q({mx:.3}) = {mq:.4}</text>",
        x(mx) + label_dx,
        y1(mq) - 8.0
    );
    let _ = writeln!(
        s,
        "<text x=\"{:.2}\" y=\"14\" {FONT} text-anchor=\"middle\">Q value against null mean</text>",
        0.5 * (left + right)
    );

    // Panel 2: sampling density N(mx, se^2), tails shaded.
    let (t2, b2) = (panel_h + 40.0, 2.0 * panel_h + 20.0);
    let (cut_lo, cut_hi) = (c.theta0 - c.distance, c.theta0 + c.distance);
    let x0 = cut_lo.min(mx - 4.0 * c.se) - 0.5 * c.se;
    let x1 = cut_hi.max(mx + 4.0 * c.se) + 0.5 * c.se;
    let x = |v: f64| left + (right - left) * (v - x0) / (x1 - x0);
    let peak = std_normal_pdf(0.0) / c.se;
    let y2 = |d: f64| b2 - (b2 - t2) * d / peak;
    let dens = |v: f64| std_normal_pdf((v - mx) / c.se) / c.se;
    let n = 240;
    let grid: Vec<f64> = (0..=n)
        .map(|k| x0 + (x1 - x0) * k as f64 / n as f64)
        .collect();
    for (a, b) in [(x0, cut_lo), (cut_hi, x1)] {
        let (a, b) = (a.max(x0), b.min(x1));
        if a >= b {
            continue;
        }
        let mut poly = vec![format!("{:.2},{:.2}", x(a), b2)];
        poly.push(format!("{:.2},{:.2}", x(a), y2(dens(a))));
        poly.extend(
            grid.iter()
                .filter(|v| **v > a && **v < b)
                .map(|v| format!("{:.2},{:.2}", x(*v), y2(dens(*v)))),
        );
        poly.push(format!("{:.2},{:.2}", x(b), y2(dens(b))));
        poly.push(format!("{:.2},{:.2}", x(b), b2));
        let _ = writeln!(
            s,
            "<polygon class=\"tail\" points=\"{}\" fill=\"#c8c8ff\"/>",
            poly.join(" ")
        );
    }
    let pts: Vec<String> = grid
        .iter()
        .map(|v| format!("{:.2},{:.2}", x(*v), y2(dens(*v))))
        .collect();
    let _ = writeln!(
        s,
        "<polyline points=\"{}\" fill=\"none\" stroke=\"black\"/>",
        pts.join(" ")
    );
    let _ = writeln!(
        s,
        "<line x1=\"{left:.2}\" y1=\"{b2:.2}\" x2=\"{right:.2}\" y2=\"{b2:.2}\" stroke=\"black\"/>"
    );
    for v in [cut_lo, mx, cut_hi] {
        let _ = writeln!(
            s,
            "<text x=\"{:.2}\" y=\"{:.2}\" {FONT} text-anchor=\"middle\">{v:.3}</text>",
            x(v),
            b2 + 16.0
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"{:.2}\" y=\"{:.2}\" {FONT} text-anchor=\"middle\">Sampling density at the marked null; shaded area = Q value</text>",
        0.5 * (left + right),
        t2 - 8.0
    );
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ticks_cover_range() {
        assert_eq!(log_ticks(0.09, 1.3), vec![0.1, 0.2, 0.5, 1.0]);
        assert_eq!(tick_label(0.5), "0.5");
        assert_eq!(tick_label(2.0), "2");
    }

    #[test]
    fn labels_escaped() {
        let rows = vec![ForestRow {
            label: "A<B".into(),
            or: 0.5,
            lo: 0.2,
            hi: 1.2,
            combined: false,
        }];
        assert!(forest(&rows).contains("A&lt;B"));
    }
}
