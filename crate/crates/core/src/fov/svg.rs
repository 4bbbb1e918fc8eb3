//! SVG pictures of a certificate: the shaded region, the field-of-values
//! outline, the removed disk (dashed) and the lines `Im z = ±c` (dotted).

use std::fmt::Write;

use num_complex::Complex64;

use crate::fov::certificate::FovCertificate;

const SIZE: f64 = 480.0;

struct View {
    cx: f64,
    cy: f64,
    half: f64,
}

impl View {
    fn map(&self, z: Complex64) -> (f64, f64) {
        let s = SIZE / (2.0 * self.half);
        ((z.re - self.cx) * s + SIZE / 2.0, SIZE / 2.0 - (z.im - self.cy) * s)
    }

    fn len(&self, r: f64) -> f64 {
        r * SIZE / (2.0 * self.half)
    }
}

fn path(view: &View, pts: &[Complex64]) -> String {
    let mut d = String::new();
    for (k, z) in pts.iter().enumerate() {
        let (x, y) = view.map(*z);
        let _ = write!(d, "{}{x:.2},{y:.2} ", if k == 0 { "M" } else { "L" });
    }
    d.push('Z');
    d
}

/// Renders the certificate as a standalone SVG document.
pub fn certificate_svg(cert: &FovCertificate) -> String {
    let mut pts: Vec<Complex64> = cert.boundary.points.clone();
    pts.extend(cert.region.samples());
    pts.push(Complex64::new(0.0, 0.0));
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for z in &pts {
        x0 = x0.min(z.re);
        x1 = x1.max(z.re);
        y0 = y0.min(z.im);
        y1 = y1.max(z.im);
    }
    let r = cert.inner_radius;
    x0 = x0.min(-r);
    x1 = x1.max(r);
    y0 = y0.min(-r);
    y1 = y1.max(r);
    let half = 0.55 * (x1 - x0).max(y1 - y0).max(1e-12);
    let view = View {
        cx: 0.5 * (x0 + x1),
        cy: 0.5 * (y0 + y1),
        half,
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if !cert.region.loops.is_empty() {
        let d: Vec<String> = cert.region.loops.iter().map(|l| path(&view, l)).collect();
        let _ = writeln!(
            s,
            r##"<path d="{}" fill="#9ec5e8" fill-rule="evenodd" stroke="#1f4e79" stroke-width="1"/>"##,
            d.join(" ")
        );
    }
    for z in &cert.region.discrete {
        let (x, y) = view.map(*z);
        let _ = writeln!(s, r##"<circle cx="{x:.2}" cy="{y:.2}" r="2" fill="#1f4e79"/>"##);
    }
    if cert.boundary.points.len() > 1 {
        let _ = writeln!(
            s,
            r##"<path d="{}" fill="none" stroke="black" stroke-width="0.8"/>"##,
            path(&view, &cert.boundary.points)
        );
    }
    let (ox, oy) = view.map(Complex64::new(0.0, 0.0));
    let _ = writeln!(
        s,
        r##"<circle cx="{ox:.2}" cy="{oy:.2}" r="{:.2}" fill="none" stroke="#c00000" stroke-dasharray="6 4"/>"##,
        view.len(r)
    );
    for sign in [1.0, -1.0] {
        let (_, y) = view.map(Complex64::new(0.0, sign * cert.c));
        let _ = writeln!(
            s,
            r##"<line x1="0" y1="{y:.2}" x2="{SIZE}" y2="{y:.2}" stroke="#555555" stroke-dasharray="1 3"/>"##
        );
    }
    let _ = writeln!(s, r##"<line x1="0" y1="{oy:.2}" x2="{SIZE}" y2="{oy:.2}" stroke="#bbbbbb"/>"##);
    let _ = writeln!(s, r##"<line x1="{ox:.2}" y1="0" x2="{ox:.2}" y2="{SIZE}" stroke="#bbbbbb"/>"##);
    let _ = writeln!(
        s,
        r#"<text x="8" y="18" font-family="sans-serif" font-size="12">a={:.4} b={:.4} c={:.4} bc={:.4}</text>"#,
        cert.a, cert.b, cert.c, cert.bc
    );
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fov::certificate::{certificate, CertificateOptions};
    use crate::linalg::dense::Matrix;
    use crate::linalg::space::WeightedSpace;

    #[test]
    fn renders_region_and_guides() {
        let a = Matrix::from_row_slice(2, 2, &[1.0, 0.8, 0.0, 1.0]);
        let cert = certificate(&a, &WeightedSpace::euclidean(2), &CertificateOptions::default()).unwrap();
        let svg = certificate_svg(&cert);
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("evenodd"));
        assert!(svg.contains("stroke-dasharray=\"6 4\""));
        assert!(svg.trim_end().ends_with("</svg>"));
    }
}
