//! Comparison charts of cross-validation reports: mean AUC and accuracy
//! against the number of selected features, with shaded 95% CI bands.

use std::fmt::Write as _;

use crate::io::format_f64;
use crate::mvpa::CvReport;

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// One CSV row per (series, k).
pub fn comparison_csv(series: &[(String, CvReport)]) -> String {
    let mut out = String::from("series,method,k,k_used,mean_auc,ci95_auc,mean_accuracy,ci95_accuracy\n");
    for (name, report) in series {
        for s in &report.per_k {
            let _ = writeln!(
                out,
                "{name},{},{},{},{},{},{},{}",
                report.config.cv.method,
                s.k,
                s.k_used,
                format_f64(s.mean_auc),
                format_f64(s.ci95_auc),
                format_f64(s.mean_accuracy),
                format_f64(s.ci95_accuracy)
            );
        }
    }
    out
}

struct Panel {
    x0: f64,
    y0: f64,
    w: f64,
    h: f64,
    k_min: f64,
    k_max: f64,
}

impl Panel {
    fn px(&self, k: f64) -> f64 {
        let span = (self.k_max - self.k_min).max(1.0);
        self.x0 + (k - self.k_min) / span * self.w
    }

    fn py(&self, v: f64) -> f64 {
        self.y0 + (1.0 - v.clamp(0.0, 1.0)) * self.h
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders a two-panel SVG (AUC left, accuracy right).
pub fn comparison_svg(series: &[(String, CvReport)]) -> String {
    let ks = series.iter().flat_map(|(_, r)| r.per_k.iter().map(|s| s.k as f64));
    let (k_min, k_max) = ks.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), k| (a.min(k), b.max(k)));
    let (k_min, k_max) = if k_min.is_finite() { (k_min, k_max) } else { (0.0, 1.0) };

    let (width, height) = (1000.0, 420.0);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);

    type Metric = fn(&crate::mvpa::KSummary) -> (f64, f64);
    let metrics: [(&str, Metric); 2] = [
        ("AUC", |s| (s.mean_auc, s.ci95_auc)),
        ("Accuracy", |s| (s.mean_accuracy, s.ci95_accuracy)),
    ];
    for (pi, (title, metric)) in metrics.iter().enumerate() {
        let panel = Panel {
            x0: 70.0 + pi as f64 * 490.0,
            y0: 40.0,
            w: 400.0,
            h: 300.0,
            k_min,
            k_max,
        };
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="25" text-anchor="middle" font-size="14">Mean {title} (95% CI)</text>"#,
            panel.x0 + panel.w / 2.0
        );
        for i in 0..=5 {
            let v = i as f64 / 5.0;
            let y = panel.py(v);
            let _ = writeln!(
                svg,
                r##"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{v:.1}</text>"##,
                panel.x0,
                panel.x0 + panel.w,
                panel.x0 - 6.0,
                y + 4.0
            );
        }
        let n_ticks = 7;
        for i in 0..=n_ticks {
            let k = k_min + (k_max - k_min) * i as f64 / n_ticks as f64;
            let x = panel.px(k);
            let _ = writeln!(
                svg,
                r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{k:.0}</text>"#,
                panel.y0 + panel.h + 16.0
            );
        }
        let _ = writeln!(
            svg,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            panel.x0, panel.y0, panel.w, panel.h
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">number of selected features</text>"#,
            panel.x0 + panel.w / 2.0,
            panel.y0 + panel.h + 34.0
        );

        for (si, (_, report)) in series.iter().enumerate() {
            let color = PALETTE[si % PALETTE.len()];
            let pts: Vec<(f64, f64, f64)> = report
                .per_k
                .iter()
                .map(|s| {
                    let (m, h) = metric(s);
                    (s.k as f64, m, h)
                })
                .collect();
            let upper = pts.iter().map(|&(k, m, h)| format!("{:.2},{:.2}", panel.px(k), panel.py(m + h)));
            let lower = pts.iter().rev().map(|&(k, m, h)| format!("{:.2},{:.2}", panel.px(k), panel.py(m - h)));
            let band: Vec<String> = upper.chain(lower).collect();
            let _ = writeln!(
                svg,
                r#"<polygon points="{}" fill="{color}" fill-opacity="0.2" stroke="none"/>"#,
                band.join(" ")
            );
            let line: Vec<String> = pts
                .iter()
                .map(|&(k, m, _)| format!("{:.2},{:.2}", panel.px(k), panel.py(m)))
                .collect();
            let _ = writeln!(
                svg,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
                line.join(" ")
            );
        }
    }

    for (si, (name, _)) in series.iter().enumerate() {
        let color = PALETTE[si % PALETTE.len()];
        let x = 70.0 + si as f64 * 180.0;
        let _ = writeln!(
            svg,
            r#"<rect x="{x}" y="395" width="14" height="4" fill="{color}"/><text x="{}" y="401">{}</text>"#,
            x + 20.0,
            escape(name)
        );
    }
    svg.push_str("</svg>\n");
    svg
}
