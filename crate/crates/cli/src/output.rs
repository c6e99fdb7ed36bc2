//! CSV and SVG emitters. Numbers carry 17 significant digits so that files
//! round-trip to the same `f64`s.

use std::fmt::Write as _;

use qcx_core::qc::BeltramiEstimate;
use qcx_core::Complex64;

pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "nan".to_string()
    }
}

pub struct Csv {
    text: String,
    columns: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut text = header.join(",");
        text.push('\n');
        Self { text, columns: header.len() }
    }

    pub fn row(&mut self, values: &[f64]) {
        assert_eq!(values.len(), self.columns, "csv row width");
        for (i, v) in values.iter().enumerate() {
            if i > 0 {
                self.text.push(',');
            }
            self.text.push_str(&num(*v));
        }
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}

pub fn beltrami_csv(est: &BeltramiEstimate) -> String {
    let mut csv = Csv::new(&["re_z", "im_z", "re_mu", "im_mu", "abs_mu"]);
    for s in &est.samples {
        let mu = s.mu.unwrap_or(Complex64::new(f64::NAN, f64::NAN));
        csv.row(&[s.z.re, s.z.im, mu.re, mu.im, mu.norm()]);
    }
    csv.finish()
}

const STOPS: [(f64, [u8; 3]); 5] = [
    (0.0, [68, 1, 84]),
    (0.25, [59, 82, 139]),
    (0.5, [33, 145, 140]),
    (0.75, [94, 201, 98]),
    (1.0, [253, 231, 37]),
];

fn color(t: f64) -> String {
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.0 };
    let i = STOPS.iter().rposition(|(s, _)| *s <= t).unwrap_or(0).min(STOPS.len() - 2);
    let (t0, c0) = STOPS[i];
    let (t1, c1) = STOPS[i + 1];
    let u = (t - t0) / (t1 - t0);
    let ch = |k: usize| (c0[k] as f64 + u * (c1[k] as f64 - c0[k] as f64)).round() as u8;
    format!("#{:02x}{:02x}{:02x}", ch(0), ch(1), ch(2))
}

/// Heat map of `|μ|` at the sample points, linear scale over `[0, max|μ|]`.
pub fn beltrami_svg(est: &BeltramiEstimate, title: &str) -> String {
    const SIZE: f64 = 480.0;
    const PAD: f64 = 20.0;
    const LEGEND: f64 = 110.0;
    let pts: Vec<(Complex64, f64)> = est
        .samples
        .iter()
        .filter_map(|s| s.mu.map(|m| (s.z, m.norm())))
        .collect();
    let extent = pts.iter().map(|(z, _)| z.re.abs().max(z.im.abs())).fold(1.0, f64::max) * 1.02;
    let max = pts.iter().map(|p| p.1).fold(0.0, f64::max);
    let scale = (SIZE - 2.0 * PAD) / (2.0 * extent);
    let to_px = |z: Complex64| (PAD + (z.re + extent) * scale, PAD + (extent - z.im) * scale);
    let dot = (SIZE / 240.0).max(1.0);

    let mut svg = String::new();
    let width = SIZE + LEGEND;
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{SIZE}" viewBox="0 0 {width} {SIZE}" style="background:#ffffff;font-family:sans-serif;font-size:11px">"#
    );
    let _ = writeln!(svg, "<title>{}</title>", escape(title));
    let _ = writeln!(
        svg,
        r#"<rect x="{PAD}" y="{PAD}" width="{0}" height="{0}" style="fill:#f4f4f4;stroke:#999999"/>"#,
        SIZE - 2.0 * PAD
    );
    let (cx, cy) = to_px(Complex64::new(0.0, 0.0));
    let _ = writeln!(
        svg,
        r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="{:.2}" style="fill:none;stroke:#cc0000;stroke-dasharray:4 3"/>"#,
        scale
    );
    for (z, m) in &pts {
        let (x, y) = to_px(*z);
        let t = if max > 0.0 { m / max } else { 0.0 };
        let _ = writeln!(svg, r#"<circle cx="{x:.2}" cy="{y:.2}" r="{dot:.2}" style="fill:{}"/>"#, color(t));
    }

    let lx = SIZE + 10.0;
    let bar_top = PAD + 20.0;
    let bar_h = SIZE - 2.0 * PAD - 40.0;
    let steps = 64;
    for i in 0..steps {
        let t = 1.0 - i as f64 / (steps - 1) as f64;
        let y = bar_top + bar_h * i as f64 / steps as f64;
        let _ = writeln!(
            svg,
            r#"<rect x="{lx}" y="{y:.2}" width="18" height="{:.2}" style="fill:{}"/>"#,
            bar_h / steps as f64 + 0.5,
            color(t)
        );
    }
    let _ = writeln!(svg, r#"<text x="{lx}" y="{}" style="fill:#000000">|mu|</text>"#, PAD + 8.0);
    let _ = writeln!(svg, r#"<text x="{}" y="{:.2}" style="fill:#000000">{max:.4}</text>"#, lx + 22.0, bar_top + 8.0);
    let _ = writeln!(svg, r#"<text x="{}" y="{:.2}" style="fill:#000000">0</text>"#, lx + 22.0, bar_top + bar_h);
    let _ = writeln!(
        svg,
        r#"<text x="{lx}" y="{:.2}" style="fill:#333333">linear</text>"#,
        bar_top + bar_h + 16.0
    );
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use qcx_core::qc::BeltramiSample;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE] {
            let s = num(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s.split('e').next().unwrap().trim_start_matches('-').replace('.', "");
            assert_eq!(mantissa.len(), 17);
        }
        assert_eq!(num(f64::NAN), "nan");
    }

    #[test]
    fn csv_layout() {
        let mut c = Csv::new(&["a", "b"]);
        c.row(&[1.0, -0.5]);
        let text = c.finish();
        assert_eq!(text, "a,b\n1.0000000000000000e0,-5.0000000000000000e-1\n");
        assert!(!text.contains('\r'));
    }

    #[test]
    fn colors_span_the_scale() {
        assert_eq!(color(0.0), "#440154");
        assert_eq!(color(1.0), "#fde725");
        assert_eq!(color(f64::NAN), "#440154");
    }

    #[test]
    fn svg_is_self_contained() {
        let est = BeltramiEstimate {
            samples: vec![
                BeltramiSample { z: Complex64::new(1.5, 0.0), mu: Some(Complex64::new(0.25, 0.0)) },
                BeltramiSample { z: Complex64::new(-2.0, 1.0), mu: None },
            ],
            sup_abs_mu: 0.25,
            worst_point: Complex64::new(1.5, 0.0),
            max_dilatation: 5.0 / 3.0,
            h: 1e-5,
            sup_abs_mu_half_step: 0.25,
            stable: true,
            indeterminate: 1,
            skipped: 0,
        };
        let svg = beltrami_svg(&est, "a < b");
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert!(!svg.contains("href") && !svg.contains("<style") && !svg.contains("url("));
        assert!(svg.contains("0.2500") && svg.contains("a &lt; b"));
    }
}
