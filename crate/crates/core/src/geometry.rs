//! Polygon primitives: constant-spacing resampling, perimeter, Chamfer
//! distance, self-intersection counting, bounding boxes and ray casting.
//!
//! Contours are closed implicitly: the last vertex connects back to the
//! first. Points are represented as complex numbers `z = x + iy` throughout
//! the crate so that a contour doubles as a periodic complex signal.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Consecutive vertices closer than this are merged at construction.
pub const DUPLICATE_EPS: f64 = 1e-12;

/// Cross products below this magnitude are treated as collinear in the
/// segment-intersection predicate.
const COLLINEAR_EPS: f64 = 1e-12;

/// An ordered closed loop of 2-D points in pixel coordinates.
///
/// Invariants enforced at construction: at least 3 vertices, all coordinates
/// finite, and no consecutive duplicates (including the wrap-around pair).
/// Zero-length edges would break arc-length parameterization downstream.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    points: Vec<Complex64>,
}

impl Polygon {
    pub fn new(points: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        Self::from_complex(points.into_iter().map(|(x, y)| Complex64::new(x, y)))
    }

    pub fn from_complex(points: impl IntoIterator<Item = Complex64>) -> Result<Self> {
        let raw: Vec<Complex64> = points.into_iter().collect();
        if raw.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidPolygon("non-finite coordinate".into()));
        }
        let mut kept: Vec<Complex64> = Vec::with_capacity(raw.len());
        for z in raw {
            if kept.last().is_none_or(|p| (z - p).norm() >= DUPLICATE_EPS) {
                kept.push(z);
            }
        }
        // The closing edge must not be degenerate either.
        while kept.len() > 1 && (kept[kept.len() - 1] - kept[0]).norm() < DUPLICATE_EPS {
            kept.pop();
        }
        if kept.len() < 3 {
            return Err(Error::InvalidPolygon(
                "fewer than 3 distinct vertices".into(),
            ));
        }
        Ok(Polygon { points: kept })
    }

    /// Builds a polygon from a flat `[x1, y1, x2, y2, ...]` coordinate list.
    pub fn from_flat_xy(coords: &[f64]) -> Result<Self> {
        if coords.len() % 2 != 0 {
            return Err(Error::InvalidPolygon(
                "odd number of coordinates in flat list".into(),
            ));
        }
        Self::new(coords.chunks_exact(2).map(|c| (c[0], c[1])))
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees >= 3 vertices
    }

    /// Sum of Euclidean edge lengths, including the closing edge.
    pub fn perimeter(&self) -> f64 {
        closed_perimeter(&self.points)
    }

    /// Axis-aligned tight bounds of the vertices.
    pub fn bounding_box(&self) -> BoundingBox {
        BoundingBox::of_points(&self.points)
    }

    /// Shoelace area; positive for counter-clockwise orientation.
    pub fn signed_area(&self) -> f64 {
        signed_area(&self.points)
    }

    /// Area centroid (not the vertex mean).
    pub fn centroid(&self) -> Complex64 {
        let n = self.points.len();
        let mut a2 = 0.0;
        let mut cx = 0.0;
        let mut cy = 0.0;
        for i in 0..n {
            let p = self.points[i];
            let q = self.points[(i + 1) % n];
            let w = p.re * q.im - q.re * p.im;
            a2 += w;
            cx += (p.re + q.re) * w;
            cy += (p.im + q.im) * w;
        }
        if a2.abs() < 1e-300 {
            // Collinear vertices: fall back to the vertex mean.
            let sum: Complex64 = self.points.iter().sum();
            return sum / self.points.len() as f64;
        }
        Complex64::new(cx / (3.0 * a2), cy / (3.0 * a2))
    }
}

/// N complex points on a contour; the FFT-ready form of a polygon when
/// produced by [`resample`], and the decoded form of a descriptor.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourSamples {
    points: Vec<Complex64>,
}

impl ContourSamples {
    pub fn new(points: Vec<Complex64>) -> Result<Self> {
        if points.len() < 4 {
            return Err(Error::InvalidPolygon(
                "contour samples need at least 4 points".into(),
            ));
        }
        if points.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidPolygon("non-finite sample".into()));
        }
        Ok(ContourSamples { points })
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Perimeter of the closed polyline through the samples.
    pub fn perimeter(&self) -> f64 {
        closed_perimeter(&self.points)
    }
}

impl AsRef<[Complex64]> for ContourSamples {
    fn as_ref(&self) -> &[Complex64] {
        &self.points
    }
}

fn closed_perimeter(points: &[Complex64]) -> f64 {
    let n = points.len();
    (0..n).map(|i| (points[(i + 1) % n] - points[i]).norm()).sum()
}

/// Shoelace formula over a point loop; positive when counter-clockwise.
pub fn signed_area(points: &[Complex64]) -> f64 {
    let n = points.len();
    let mut acc = 0.0;
    for i in 0..n {
        let p = points[i];
        let q = points[(i + 1) % n];
        acc += p.re * q.im - q.re * p.im;
    }
    acc / 2.0
}

/// Sum of signed exterior angles along the closed loop. Equals 2π times the
/// turning number for a generic contour, so values past ±2π indicate a
/// contour that circles more than once.
pub fn total_turning(points: &[Complex64]) -> f64 {
    let n = points.len();
    if n < 3 {
        return 0.0;
    }
    let mut total = 0.0;
    for i in 0..n {
        let a = points[i];
        let b = points[(i + 1) % n];
        let c = points[(i + 2) % n];
        let u = b - a;
        let v = c - b;
        if u.norm() < DUPLICATE_EPS || v.norm() < DUPLICATE_EPS {
            continue;
        }
        let cross = u.re * v.im - u.im * v.re;
        let dot = u.re * v.re + u.im * v.im;
        total += cross.atan2(dot);
    }
    total
}

/// Re-parameterizes a polygon by arc length: `n_pts` points equally spaced
/// along the boundary, starting at vertex 0 and preserving orientation.
pub fn resample(p: &Polygon, n_pts: usize) -> Result<ContourSamples> {
    if n_pts < 4 {
        return Err(Error::Domain(format!(
            "resample needs n_pts >= 4, got {n_pts}"
        )));
    }
    let verts = p.points();
    let n = verts.len();
    let mut cum = Vec::with_capacity(n + 1);
    cum.push(0.0);
    for i in 0..n {
        let len = (verts[(i + 1) % n] - verts[i]).norm();
        cum.push(cum[i] + len);
    }
    let total = cum[n];
    if total < DUPLICATE_EPS {
        return Err(Error::DegenerateContour);
    }
    let spacing = total / n_pts as f64;
    let mut out = Vec::with_capacity(n_pts);
    let mut edge = 0usize;
    for j in 0..n_pts {
        let s = j as f64 * spacing;
        while edge + 1 < n && cum[edge + 1] <= s {
            edge += 1;
        }
        let a = verts[edge];
        let b = verts[(edge + 1) % n];
        let edge_len = cum[edge + 1] - cum[edge];
        let frac = if edge_len > 0.0 {
            (s - cum[edge]) / edge_len
        } else {
            0.0
        };
        out.push(a + (b - a) * frac);
    }
    ContourSamples::new(out)
}

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

impl BoundingBox {
    pub fn of_points(points: &[Complex64]) -> BoundingBox {
        let mut bb = BoundingBox {
            min_x: f64::INFINITY,
            min_y: f64::INFINITY,
            max_x: f64::NEG_INFINITY,
            max_y: f64::NEG_INFINITY,
        };
        for z in points {
            bb.min_x = bb.min_x.min(z.re);
            bb.min_y = bb.min_y.min(z.im);
            bb.max_x = bb.max_x.max(z.re);
            bb.max_y = bb.max_y.max(z.im);
        }
        bb
    }

    pub fn contains_strict(&self, x: f64, y: f64) -> bool {
        x > self.min_x && x < self.max_x && y > self.min_y && y < self.max_y
    }

    pub fn width(&self) -> f64 {
        self.max_x - self.min_x
    }

    pub fn height(&self) -> f64 {
        self.max_y - self.min_y
    }
}

/// Per-direction reduction of the nearest-neighbor distances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reduction {
    Mean,
    Sum,
}

/// Chamfer distance convention. The default — sum of the two directional
/// means of squared distances — matches the common point-cloud library
/// behavior; the switches exist for experimentation.
#[derive(Debug, Clone, Copy)]
pub struct ChamferConfig {
    pub reduction_a: Reduction,
    pub reduction_b: Reduction,
    pub squared: bool,
}

impl Default for ChamferConfig {
    fn default() -> Self {
        ChamferConfig {
            reduction_a: Reduction::Mean,
            reduction_b: Reduction::Mean,
            squared: true,
        }
    }
}

/// Index and squared distance of the nearest point of `set`; ties resolve
/// to the lowest index.
pub(crate) fn nearest_point(z: Complex64, set: &[Complex64]) -> (usize, f64) {
    let mut best = 0usize;
    let mut best_d = f64::INFINITY;
    for (i, w) in set.iter().enumerate() {
        let d = (z - w).norm_sqr();
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    (best, best_d)
}

fn directional(from: &[Complex64], to: &[Complex64], reduction: Reduction, squared: bool) -> f64 {
    let sum: f64 = from
        .iter()
        .map(|&z| {
            let (_, d2) = nearest_point(z, to);
            if squared {
                d2
            } else {
                d2.sqrt()
            }
        })
        .sum();
    match reduction {
        Reduction::Mean => sum / from.len() as f64,
        Reduction::Sum => sum,
    }
}

/// Symmetrized Chamfer distance with the default convention: mean over `a`
/// of squared distance to the nearest point of `b`, plus the same with the
/// roles swapped.
pub fn chamfer_distance(a: &[Complex64], b: &[Complex64]) -> Result<f64> {
    chamfer_distance_with(a, b, &ChamferConfig::default())
}

pub fn chamfer_distance_with(
    a: &[Complex64],
    b: &[Complex64],
    cfg: &ChamferConfig,
) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    Ok(directional(a, b, cfg.reduction_a, cfg.squared)
        + directional(b, a, cfg.reduction_b, cfg.squared))
}

fn orient(a: Complex64, b: Complex64, c: Complex64) -> i8 {
    let v = (b.re - a.re) * (c.im - a.im) - (b.im - a.im) * (c.re - a.re);
    if v > COLLINEAR_EPS {
        1
    } else if v < -COLLINEAR_EPS {
        -1
    } else {
        0
    }
}

fn on_segment(a: Complex64, b: Complex64, p: Complex64) -> bool {
    // Assumes a, b, p collinear.
    p.re <= a.re.max(b.re) + COLLINEAR_EPS
        && p.re >= a.re.min(b.re) - COLLINEAR_EPS
        && p.im <= a.im.max(b.im) + COLLINEAR_EPS
        && p.im >= a.im.min(b.im) - COLLINEAR_EPS
}

/// Whether segments `p1q1` and `p2q2` intersect. Touching (an endpoint on
/// the other segment) counts as an intersection.
pub fn segments_intersect(p1: Complex64, q1: Complex64, p2: Complex64, q2: Complex64) -> bool {
    let o1 = orient(p1, q1, p2);
    let o2 = orient(p1, q1, q2);
    let o3 = orient(p2, q2, p1);
    let o4 = orient(p2, q2, q1);
    if o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0 {
        return true;
    }
    (o1 == 0 && on_segment(p1, q1, p2))
        || (o2 == 0 && on_segment(p1, q1, q2))
        || (o3 == 0 && on_segment(p2, q2, p1))
        || (o4 == 0 && on_segment(p2, q2, q1))
}

/// Number of unordered pairs of non-adjacent closed-loop edges that
/// intersect. Shared endpoints of adjacent edges never count; any contact
/// between non-adjacent edges does.
pub fn count_self_intersections(points: &[Complex64]) -> usize {
    let n = points.len();
    if n < 4 {
        return 0;
    }
    let mut count = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            let gap = j - i;
            if gap == 1 || gap == n - 1 {
                continue; // adjacent edges share an endpoint
            }
            let (p1, q1) = (points[i], points[(i + 1) % n]);
            let (p2, q2) = (points[j], points[(j + 1) % n]);
            if segments_intersect(p1, q1, p2, q2) {
                count += 1;
            }
        }
    }
    count
}

/// How a ray picks among several boundary intersections.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RayHit {
    /// Farthest intersection — matches polar ground-truth construction.
    Farthest,
    /// Nearest intersection, available for ablation.
    Nearest,
}

/// Radial distance samples produced by casting rays from a center point.
#[derive(Debug, Clone)]
pub struct RhoSamples {
    /// Distance from the center to the selected boundary hit, one per ray.
    pub rho: Vec<f64>,
    /// False when some ray crossed the boundary more than twice, i.e. the
    /// shape is not star-shaped with respect to the center.
    pub star_shaped: bool,
}

/// Casts `n_rays` rays at regular angular intervals from `center` and
/// records the boundary-hit distance per ray.
pub fn ray_rho_samples(
    p: &Polygon,
    center: (f64, f64),
    n_rays: usize,
    hit: RayHit,
) -> Result<RhoSamples> {
    if n_rays < 2 {
        return Err(Error::Domain(format!(
            "ray casting needs n_rays >= 2, got {n_rays}"
        )));
    }
    let (cx, cy) = center;
    if !cx.is_finite() || !cy.is_finite() {
        return Err(Error::Domain("non-finite center".into()));
    }
    if !p.bounding_box().contains_strict(cx, cy) {
        return Err(Error::CenterOutsideBounds { x: cx, y: cy });
    }
    let c = Complex64::new(cx, cy);
    let verts = p.points();
    let n = verts.len();
    let mut rho = Vec::with_capacity(n_rays);
    let mut star_shaped = true;
    for j in 0..n_rays {
        let theta = TAU * j as f64 / n_rays as f64;
        let d = Complex64::cis(theta);
        let mut hits: Vec<f64> = Vec::new();
        for i in 0..n {
            let a = verts[i];
            let b = verts[(i + 1) % n];
            let e = b - a;
            let denom = d.re * e.im - d.im * e.re;
            let ac = a - c;
            if denom.abs() > COLLINEAR_EPS {
                let t = (ac.re * e.im - ac.im * e.re) / denom;
                let s = (ac.re * d.im - ac.im * d.re) / denom;
                if t >= -COLLINEAR_EPS && (-1e-9..=1.0 + 1e-9).contains(&s) {
                    hits.push(t.max(0.0));
                }
            } else {
                // Ray parallel to the edge: collinear overlap contributes
                // the endpoint distances.
                let cross = ac.re * d.im - ac.im * d.re;
                if cross.abs() < COLLINEAR_EPS {
                    for q in [a, b] {
                        let t = (q - c).re * d.re + (q - c).im * d.im;
                        if t >= -COLLINEAR_EPS {
                            hits.push(t.max(0.0));
                        }
                    }
                }
            }
        }
        if hits.is_empty() {
            return Err(Error::CenterOutsideContour);
        }
        hits.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut distinct: Vec<f64> = Vec::with_capacity(hits.len());
        for t in hits {
            if distinct
                .last()
                .is_none_or(|&prev| (t - prev).abs() > 1e-9 * t.max(1.0))
            {
                distinct.push(t);
            }
        }
        if distinct.len() > 2 {
            star_shaped = false;
        }
        rho.push(match hit {
            RayHit::Farthest => *distinct.last().unwrap(),
            RayHit::Nearest => distinct[0],
        });
    }
    Ok(RhoSamples { rho, star_shaped })
}
