//! The region `Ω_CG = W ∩ {|z| ≥ ρ}` of a convex set `W` with a disk about
//! the origin removed, sampled along its boundary.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default number of boundary samples.
pub const DEFAULT_SAMPLES: usize = 512;
/// Fewest samples assigned to any one loop.
const MIN_LOOP_SAMPLES: usize = 16;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RegionCG {
    /// Closed boundary loops, each positively oriented (region on the left).
    pub loops: Vec<Vec<Complex64>>,
    /// Point samples of a region without interior (a segment or a point).
    pub discrete: Vec<Complex64>,
    pub inner_radius: f64,
    /// Whether no part of the region winds around the origin.
    pub origin_excluded: bool,
}

#[derive(Debug, Clone, Copy)]
enum Piece {
    Line(Complex64, Complex64),
    /// Arc of the circle `|z| = r` from angle `from` through `sweep`.
    Arc { r: f64, from: f64, sweep: f64 },
}

impl Piece {
    fn length(&self) -> f64 {
        match *self {
            Piece::Line(a, b) => (b - a).norm(),
            Piece::Arc { r, sweep, .. } => r * sweep.abs(),
        }
    }

    fn at(&self, t: f64) -> Complex64 {
        match *self {
            Piece::Line(a, b) => a + (b - a) * t,
            Piece::Arc { r, from, sweep } => Complex64::from_polar(r, from + sweep * t),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Crossing {
    edge: usize,
    t: f64,
    z: Complex64,
    entering: bool,
}

fn signed_area(p: &[Complex64]) -> f64 {
    let n = p.len();
    (0..n).map(|i| p[i].re * p[(i + 1) % n].im - p[(i + 1) % n].re * p[i].im).sum::<f64>() / 2.0
}

/// Winding number of a closed polyline about the origin.
pub fn winding_number(points: &[Complex64]) -> i64 {
    let n = points.len();
    if n < 2 {
        return 0;
    }
    let total: f64 = (0..n).map(|i| (points[(i + 1) % n] / points[i]).arg()).sum();
    (total / (2.0 * PI)).round() as i64
}

/// Removes consecutive near-duplicates and orients counter-clockwise.
fn clean(points: &[Complex64], tol: f64) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::with_capacity(points.len());
    for &z in points {
        if out.last().is_none_or(|l: &Complex64| (z - l).norm() > tol) {
            out.push(z);
        }
    }
    while out.len() > 1 && (out[0] - out[out.len() - 1]).norm() <= tol {
        out.pop();
    }
    if signed_area(&out) < 0.0 {
        out.reverse();
    }
    out
}

fn sample_loop(pieces: &[Piece], count: usize) -> Vec<Complex64> {
    let lengths: Vec<f64> = pieces.iter().map(Piece::length).collect();
    let total: f64 = lengths.iter().sum();
    // Piece start points plus uniform arc-length samples, in loop order.
    let mut marks: Vec<(f64, Complex64)> = Vec::with_capacity(count + pieces.len());
    let mut offset = 0.0;
    for (p, len) in pieces.iter().zip(&lengths) {
        if matches!(p, Piece::Arc { .. }) || pieces.len() <= 64 {
            marks.push((offset, p.at(0.0)));
        }
        offset += len;
    }
    let mut piece = 0;
    let mut start = 0.0;
    for k in 0..count {
        let s = total * k as f64 / count as f64;
        while piece + 1 < pieces.len() && s >= start + lengths[piece] {
            start += lengths[piece];
            piece += 1;
        }
        let t = if lengths[piece] > 0.0 {
            ((s - start) / lengths[piece]).clamp(0.0, 1.0)
        } else {
            0.0
        };
        marks.push((s, pieces[piece].at(t)));
    }
    marks.sort_by(|a, b| a.0.total_cmp(&b.0));
    let tol = 1e-12 * total.max(f64::MIN_POSITIVE);
    let mut out: Vec<Complex64> = Vec::with_capacity(marks.len());
    for (_, z) in marks {
        if out.last().is_none_or(|l: &Complex64| (z - l).norm() > tol) {
            out.push(z);
        }
    }
    out
}

fn polygon_pieces(p: &[Complex64]) -> Vec<Piece> {
    (0..p.len()).map(|i| Piece::Line(p[i], p[(i + 1) % p.len()])).collect()
}

/// Intersections of the edge `a → b` with `|z| = r` for `t ∈ [0, 1)`.
fn edge_crossings(edge: usize, a: Complex64, b: Complex64, r: f64, out: &mut Vec<Crossing>) {
    let d = b - a;
    let qa = d.norm_sqr();
    if qa == 0.0 {
        return;
    }
    let qb = 2.0 * (a.conj() * d).re;
    let qc = a.norm_sqr() - r * r;
    let disc = qb * qb - 4.0 * qa * qc;
    if disc <= 0.0 {
        return;
    }
    let sq = disc.sqrt();
    for t in [(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)] {
        if (0.0..1.0).contains(&t) {
            let z = a + d * t;
            let slope = 2.0 * (z.conj() * d).re;
            out.push(Crossing {
                edge,
                t,
                z,
                entering: slope < 0.0,
            });
        }
    }
}

impl RegionCG {
    /// `conv(points) ∩ {|z| ≥ rho}` for the vertices of a convex polygon.
    pub fn from_convex(points: &[Complex64], rho: f64, n_samples: usize) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyRegion);
        }
        if !(rho >= 0.0 && rho.is_finite()) {
            return Err(Error::InvalidParams(format!("inner radius {rho} must be non-negative")));
        }
        let scale = points.iter().fold(rho, |m, z| m.max(z.norm())).max(f64::MIN_POSITIVE);
        let poly = clean(points, 1e-12 * scale);
        if poly.len() < 3 || signed_area(&poly).abs() <= 1e-10 * scale * scale {
            return Self::degenerate(&poly, rho, n_samples, scale);
        }

        let mut crossings = Vec::new();
        for i in 0..poly.len() {
            edge_crossings(i, poly[i], poly[(i + 1) % poly.len()], rho, &mut crossings);
        }
        let mut loops: Vec<Vec<Piece>> = Vec::new();
        if crossings.len() < 2 {
            let inside = poly.iter().filter(|z| z.norm() < rho).count();
            if inside == poly.len() {
                // The polygon lies in the closed disk: keep whatever touches the circle.
                let rim: Vec<Complex64> = poly.iter().copied().filter(|z| z.norm() >= rho * (1.0 - 1e-8)).collect();
                if rim.is_empty() {
                    return Err(Error::EmptyRegion);
                }
                return Ok(Self {
                    loops: Vec::new(),
                    discrete: rim,
                    inner_radius: rho,
                    origin_excluded: true,
                });
            }
            loops.push(polygon_pieces(&poly));
            if rho > 0.0 && winding_number(&poly) != 0 {
                // the whole disk sits inside: annulus with a clockwise hole
                loops.push(vec![Piece::Arc {
                    r: rho,
                    from: 0.0,
                    sweep: -2.0 * PI,
                }]);
            }
        } else {
            loops = Self::trace(&poly, &crossings, rho);
        }
        Ok(Self::sampled(&loops, rho, n_samples))
    }

    /// Follows the polygon from each exit to the next entry, then the circle
    /// clockwise to the nearest exit, until the loop closes.
    fn trace(poly: &[Complex64], crossings: &[Crossing], rho: f64) -> Vec<Vec<Piece>> {
        let mut order: Vec<usize> = (0..crossings.len()).collect();
        order.sort_by(|&a, &b| {
            (crossings[a].edge, crossings[a].t)
                .partial_cmp(&(crossings[b].edge, crossings[b].t))
                .expect("finite crossings")
        });
        let pos: Vec<usize> = {
            let mut p = vec![0; crossings.len()];
            for (k, &c) in order.iter().enumerate() {
                p[c] = k;
            }
            p
        };
        let np = poly.len();
        let mut used = vec![false; crossings.len()];
        let mut loops = Vec::new();
        for &start in &order {
            if used[start] || crossings[start].entering {
                continue;
            }
            let mut pieces = Vec::new();
            let mut cur = start;
            for _ in 0..crossings.len() {
                used[cur] = true;
                // polygon walk to the next crossing in polygon order
                let next = order[(pos[cur] + 1) % order.len()];
                let (a, b) = (&crossings[cur], &crossings[next]);
                let mut z = a.z;
                let mut e = a.edge;
                let same_edge = b.edge == a.edge && b.t > a.t;
                if !same_edge {
                    loop {
                        e = (e + 1) % np;
                        pieces.push(Piece::Line(z, poly[e]));
                        z = poly[e];
                        if e == b.edge {
                            break;
                        }
                    }
                }
                pieces.push(Piece::Line(z, b.z));
                used[next] = true;
                // clockwise along the circle to the nearest exit
                let phi = b.z.arg();
                let (exit, sweep) = crossings
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.entering)
                    .map(|(i, c)| (i, (phi - c.z.arg()).rem_euclid(2.0 * PI)))
                    .map(|(i, d)| (i, if d == 0.0 { 2.0 * PI } else { d }))
                    .min_by(|x, y| x.1.total_cmp(&y.1))
                    .expect("an exit exists for every entry");
                pieces.push(Piece::Arc {
                    r: rho,
                    from: phi,
                    sweep: -sweep,
                });
                if exit == start {
                    break;
                }
                cur = exit;
            }
            loops.push(pieces);
        }
        loops
    }

    fn sampled(loops: &[Vec<Piece>], rho: f64, n_samples: usize) -> Self {
        let lengths: Vec<f64> = loops.iter().map(|l| l.iter().map(Piece::length).sum()).collect();
        let total: f64 = lengths.iter().sum();
        let loops: Vec<Vec<Complex64>> = loops
            .iter()
            .zip(&lengths)
            .map(|(l, len)| {
                let share = (n_samples as f64 * len / total).round() as usize;
                sample_loop(l, share.max(MIN_LOOP_SAMPLES))
            })
            .collect();
        let origin_excluded = loops.iter().all(|l| winding_number(l) == 0);
        Self {
            loops,
            discrete: Vec::new(),
            inner_radius: rho,
            origin_excluded,
        }
    }

    /// A segment or a point: sampled directly, with the part inside the disk
    /// removed.
    fn degenerate(poly: &[Complex64], rho: f64, n_samples: usize, scale: f64) -> Result<Self> {
        let (mut p, mut q) = (poly[0], poly[0]);
        let mut best = 0.0;
        for &a in poly {
            for &b in poly {
                if (a - b).norm() > best {
                    best = (a - b).norm();
                    p = a;
                    q = b;
                }
            }
        }
        let keep = |z: &Complex64| z.norm() >= rho * (1.0 - 1e-8);
        let mut pts: Vec<Complex64> = if best <= 1e-12 * scale {
            vec![p]
        } else {
            let mut s: Vec<(f64, Complex64)> = (0..n_samples.max(2))
                .map(|k| {
                    let t = k as f64 / (n_samples.max(2) - 1) as f64;
                    (t, p + (q - p) * t)
                })
                .collect();
            let mut cross = Vec::new();
            edge_crossings(0, p, q, rho, &mut cross);
            s.extend(cross.iter().map(|c| (c.t, c.z)));
            s.sort_by(|a, b| a.0.total_cmp(&b.0));
            s.into_iter().map(|x| x.1).collect()
        };
        pts.retain(keep);
        if pts.is_empty() {
            return Err(Error::EmptyRegion);
        }
        Ok(Self {
            loops: Vec::new(),
            discrete: pts,
            inner_radius: rho,
            origin_excluded: true,
        })
    }

    /// The surrogate `Ω_D = {1/b ≤ |z| ≤ a} ∩ {|Im z| ≤ c}`.
    pub fn slab_annulus(a: f64, b: f64, c: f64, n_samples: usize) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && c >= 0.0) || !(a * b >= 1.0 - 1e-12) {
            return Err(Error::InvalidParams(format!("need a, b > 0, c ≥ 0 and ab ≥ 1, got a={a}, b={b}, c={c}")));
        }
        let mut angles: Vec<f64> = (0..2048).map(|k| 2.0 * PI * k as f64 / 2048.0).collect();
        if c < a {
            let al = (c / a).asin();
            angles.extend([al, PI - al, PI + al, 2.0 * PI - al]);
            angles.sort_by(f64::total_cmp);
        }
        let outer: Vec<Complex64> = angles
            .iter()
            .map(|t| {
                let z = Complex64::from_polar(a, *t);
                Complex64::new(z.re, z.im.clamp(-c, c))
            })
            .collect();
        Self::from_convex(&outer, 1.0 / b, n_samples)
    }

    /// All sample points.
    pub fn samples(&self) -> Vec<Complex64> {
        let mut s: Vec<Complex64> = self.loops.iter().flatten().copied().collect();
        s.extend(&self.discrete);
        s
    }

    pub fn is_discrete(&self) -> bool {
        self.loops.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(c: Complex64, r: f64, n: usize) -> Vec<Complex64> {
        (0..n).map(|k| c + Complex64::from_polar(r, 2.0 * PI * k as f64 / n as f64)).collect()
    }

    #[test]
    fn untouched_polygon() {
        let r = RegionCG::from_convex(&circle(Complex64::new(3.0, 0.0), 1.0, 64), 0.5, 256).unwrap();
        assert_eq!(r.loops.len(), 1);
        assert!(r.origin_excluded);
    }

    #[test]
    fn annulus_surrounds_origin() {
        let r = RegionCG::from_convex(&circle(Complex64::new(0.0, 0.0), 2.0, 64), 0.5, 256).unwrap();
        assert_eq!(r.loops.len(), 2);
        assert!(!r.origin_excluded);
        assert!(r.samples().iter().all(|z| z.norm() >= 0.5 - 1e-10));
    }

    #[test]
    fn disk_splits_a_stadium() {
        // convex hull of two disks on either side of the origin
        let mut pts = circle(Complex64::new(-1.0, 0.0), 0.25, 64);
        pts.extend(circle(Complex64::new(2.0, 0.0), 1.2, 64));
        let mut hull = crate::fov::region::tests::hull(&pts);
        hull.dedup();
        let r = RegionCG::from_convex(&hull, 0.75, 512).unwrap();
        assert_eq!(r.loops.len(), 2);
        assert!(r.origin_excluded);
        assert!(r.samples().iter().all(|z| z.norm() >= 0.75 - 1e-10));
        // a small disk fits inside the hull: annulus around the origin
        let r = RegionCG::from_convex(&hull, 0.3, 512).unwrap();
        assert_eq!(r.loops.len(), 2);
        assert!(!r.origin_excluded);
    }

    #[test]
    fn bite_out_of_the_edge() {
        let sq = [
            Complex64::new(-0.2, -1.0),
            Complex64::new(2.0, -1.0),
            Complex64::new(2.0, 1.0),
            Complex64::new(-0.2, 1.0),
        ];
        let r = RegionCG::from_convex(&sq, 0.5, 256).unwrap();
        assert_eq!(r.loops.len(), 1);
        assert!(r.origin_excluded);
        assert!(r.samples().iter().all(|z| z.norm() >= 0.5 - 1e-10));
    }

    #[test]
    fn segment_and_point() {
        let seg = [Complex64::new(-1.0, 0.0), Complex64::new(2.0, 0.0)];
        let r = RegionCG::from_convex(&seg, 0.5, 100).unwrap();
        assert!(r.is_discrete());
        assert!(r.discrete.iter().all(|z| z.norm() >= 0.5 - 1e-10));
        assert!(r.discrete.iter().any(|z| (z.re + 0.5).abs() < 1e-12));
        let p = RegionCG::from_convex(&[Complex64::new(1.5, 0.0)], 1.5, 10).unwrap();
        assert_eq!(p.discrete.len(), 1);
        assert!(RegionCG::from_convex(&[Complex64::new(1.0, 0.0)], 1.5, 10).is_err());
    }

    #[test]
    fn slab_annulus_components() {
        let r = RegionCG::slab_annulus(2.0, 1.5, 0.5, 512).unwrap();
        assert_eq!(r.loops.len(), 2);
        assert!(r.origin_excluded);
        let r = RegionCG::slab_annulus(2.0, 1.5, 0.8, 512).unwrap();
        assert!(!r.origin_excluded);
        for z in r.samples() {
            assert!(z.norm() >= 1.0 / 1.5 - 1e-10 && z.norm() <= 2.0 + 1e-10 && z.im.abs() <= 0.8 + 1e-12);
        }
    }

    /// Monotone-chain convex hull, counter-clockwise.
    pub(crate) fn hull(pts: &[Complex64]) -> Vec<Complex64> {
        let mut p = pts.to_vec();
        p.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        let cross = |o: Complex64, a: Complex64, b: Complex64| (a - o).re * (b - o).im - (a - o).im * (b - o).re;
        let mut lower: Vec<Complex64> = Vec::new();
        for &z in &p {
            while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], z) <= 0.0 {
                lower.pop();
            }
            lower.push(z);
        }
        let mut upper: Vec<Complex64> = Vec::new();
        for &z in p.iter().rev() {
            while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], z) <= 0.0 {
                upper.pop();
            }
            upper.push(z);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        lower
    }
}
