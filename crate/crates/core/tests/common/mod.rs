//! Shared test support: independent oracles, seeded generators and the
//! bundled fixture corpus. Every oracle here is written against the math
//! directly, not against the library code paths it checks.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;
use std::path::PathBuf;

use contour_codec::Polygon;

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

/// Arc-length resampling by an explicit scalar walk: accumulate edge lengths,
/// then binary-search each target arc position.
pub fn resample_walk(verts: &[(f64, f64)], n_pts: usize) -> Vec<(f64, f64)> {
    let n = verts.len();
    let mut cum = vec![0.0];
    for i in 0..n {
        let (x0, y0) = verts[i];
        let (x1, y1) = verts[(i + 1) % n];
        let len = ((x1 - x0).powi(2) + (y1 - y0).powi(2)).sqrt();
        cum.push(cum[i] + len);
    }
    let total = cum[n];
    (0..n_pts)
        .map(|j| {
            let s = total * j as f64 / n_pts as f64;
            // Last cum entry <= s.
            let mut lo = 0usize;
            let mut hi = n;
            while lo + 1 < hi {
                let mid = (lo + hi) / 2;
                if cum[mid] <= s {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let (x0, y0) = verts[lo];
            let (x1, y1) = verts[(lo + 1) % n];
            let seg = cum[lo + 1] - cum[lo];
            let f = if seg > 0.0 { (s - cum[lo]) / seg } else { 0.0 };
            (x0 + (x1 - x0) * f, y0 + (y1 - y0) * f)
        })
        .collect()
}

/// Direct Fourier-series analysis of one frequency, no FFT and no twiddle
/// tables: `F_k = (1/N) * sum_j z_j * exp(-2*pi*i*j*k/N)`.
pub fn dft_naive(samples: &[Complex64], k: i64) -> Complex64 {
    let n = samples.len() as f64;
    let sum: Complex64 = samples
        .iter()
        .enumerate()
        .map(|(j, &z)| {
            let angle = -TAU * (j as f64) * (k as f64) / n;
            z * Complex64::new(angle.cos(), angle.sin())
        })
        .sum();
    sum / n
}

/// Direct synthesis at `m_pts` points from `(k, F_k)` pairs.
pub fn idft_naive(coeffs: &[(i64, Complex64)], m_pts: usize) -> Vec<Complex64> {
    (0..m_pts)
        .map(|t| {
            coeffs
                .iter()
                .map(|&(k, c)| {
                    let angle = TAU * (k as f64) * (t as f64) / m_pts as f64;
                    c * Complex64::new(angle.cos(), angle.sin())
                })
                .sum()
        })
        .collect()
}

/// Brute-force symmetrized Chamfer distance: sum of the two directional
/// means of squared nearest-neighbor distances, via the full O(|a|*|b|)
/// table.
pub fn chamfer_brute(a: &[Complex64], b: &[Complex64]) -> f64 {
    fn mean_min(from: &[Complex64], to: &[Complex64]) -> f64 {
        from.iter()
            .map(|p| {
                to.iter()
                    .map(|q| (p - q).norm_sqr())
                    .fold(f64::INFINITY, f64::min)
            })
            .sum::<f64>()
            / from.len() as f64
    }
    mean_min(a, b) + mean_min(b, a)
}

/// Central finite difference of a scalar function of packed real
/// coordinates.
pub fn central_diff(f: &mut dyn FnMut(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let mut xs = x.to_vec();
    (0..x.len())
        .map(|i| {
            let orig = xs[i];
            xs[i] = orig + h;
            let fp = f(&xs);
            xs[i] = orig - h;
            let fm = f(&xs);
            xs[i] = orig;
            (fp - fm) / (2.0 * h)
        })
        .collect()
}

/// Max relative error between analytic and finite-difference gradients with
/// a small absolute floor to keep near-zero entries comparable.
pub fn max_rel_err(analytic: &[f64], fd: &[f64]) -> f64 {
    analytic
        .iter()
        .zip(fd)
        .map(|(a, d)| (a - d).abs() / a.abs().max(d.abs()).max(1e-6))
        .fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// Seeded generators
// ---------------------------------------------------------------------------

/// Random simple polygon: jittered angles around a center with random radii.
/// Star-shaped by construction, hence simple.
pub fn random_polygon(rng: &mut ChaCha8Rng, min_v: usize, max_v: usize) -> Polygon {
    let v = rng.gen_range(min_v..=max_v);
    let cx = rng.gen_range(-200.0..200.0);
    let cy = rng.gen_range(-200.0..200.0);
    let pts: Vec<(f64, f64)> = (0..v)
        .map(|i| {
            let jitter: f64 = rng.gen_range(0.05..0.95);
            let th = TAU * (i as f64 + jitter) / v as f64;
            let r = rng.gen_range(10.0..100.0);
            (cx + r * th.cos(), cy + r * th.sin())
        })
        .collect();
    Polygon::new(pts).expect("generated polygon is valid")
}

pub fn random_points(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale)))
        .collect()
}

// ---------------------------------------------------------------------------
// Hand-built fixtures
// ---------------------------------------------------------------------------

/// A concave fixture polygon together with a polar-admissible center.
pub struct ConcaveFixture {
    pub name: &'static str,
    pub file: &'static str,
    pub points: Vec<(f64, f64)>,
    pub center: (f64, f64),
}

/// Thin band swept along a centerline: one pass offset to the left of the
/// curve, the return pass offset to the right.
fn band(centerline: &[(f64, f64)], half_width: f64) -> Vec<(f64, f64)> {
    let n = centerline.len();
    let normal_at = |i: usize| -> (f64, f64) {
        let (x0, y0) = centerline[i.saturating_sub(1)];
        let (x1, y1) = centerline[(i + 1).min(n - 1)];
        let (dx, dy) = (x1 - x0, y1 - y0);
        let len = (dx * dx + dy * dy).sqrt().max(1e-12);
        (-dy / len, dx / len)
    };
    let mut pts = Vec::with_capacity(2 * n);
    for i in 0..n {
        let (nx, ny) = normal_at(i);
        let (x, y) = centerline[i];
        pts.push((x + half_width * nx, y + half_width * ny));
    }
    for i in (0..n).rev() {
        let (nx, ny) = normal_at(i);
        let (x, y) = centerline[i];
        pts.push((x - half_width * nx, y - half_width * ny));
    }
    pts
}

fn parabola_band(
    depth_left: f64,
    depth_right: f64,
    tilt_deg: f64,
    origin: (f64, f64),
    half_width: f64,
) -> Vec<(f64, f64)> {
    let rot = tilt_deg.to_radians();
    let centerline: Vec<(f64, f64)> = (0..=32)
        .map(|i| {
            let t = -40.0 + 80.0 * i as f64 / 32.0;
            let depth = if t < 0.0 { depth_left } else { depth_right };
            let (x, y) = (t, t * t * depth / 1600.0);
            (
                origin.0 + x * rot.cos() - y * rot.sin(),
                origin.1 + x * rot.sin() + y * rot.cos(),
            )
        })
        .collect();
    band(&centerline, half_width)
}

/// Deep thin U: a parabolic band with long legs around a wide cavity. Every
/// interior center sees rays that cross the boundary more than twice, while
/// the traversal itself is close to a tall ellipse.
pub fn nonstar_u() -> ConcaveFixture {
    ConcaveFixture {
        name: "u",
        file: "nonstar_u.txt",
        points: parabola_band(75.0, 75.0, 0.0, (60.0, 20.0), 6.0),
        center: (60.0, 20.0),
    }
}

/// Giraffe-leg silhouette: two thin legs of unequal length joined at the
/// bottom.
pub fn nonstar_legs() -> ConcaveFixture {
    ConcaveFixture {
        name: "legs",
        file: "nonstar_legs.txt",
        points: parabola_band(60.0, 95.0, 0.0, (60.0, 20.0), 6.0),
        center: (60.0, 20.0),
    }
}

/// The deep U rotated by 30 degrees, so no axis alignment helps anyone.
pub fn nonstar_tilted() -> ConcaveFixture {
    ConcaveFixture {
        name: "tilted",
        file: "nonstar_tilted.txt",
        points: parabola_band(75.0, 75.0, 30.0, (60.0, 30.0), 6.0),
        center: (60.0, 30.0),
    }
}

pub fn nonstar_fixtures() -> Vec<ConcaveFixture> {
    vec![nonstar_u(), nonstar_legs(), nonstar_tilted()]
}

/// Asymmetric star-shaped blob: strictly positive radius, so any fit through
/// its center is well posed, but no symmetry to cancel the odd Chebyshev
/// coefficients.
pub fn star_blob() -> ConcaveFixture {
    let points = (0..96)
        .map(|j| {
            let th = TAU * j as f64 / 96.0;
            let r = 50.0 + 12.0 * th.sin() + 7.0 * (2.0 * th).cos() + 4.0 * (3.0 * th).sin();
            (120.0 + r * th.cos(), 120.0 + r * th.sin())
        })
        .collect();
    ConcaveFixture {
        name: "star_blob",
        file: "star_blob.txt",
        points,
        center: (120.0, 120.0),
    }
}

/// Generates the 50-polygon annotation corpus: smooth blobs, spiky stars and
/// elongated shapes in image-like pixel coordinates.
pub fn corpus_polygons(seed: u64) -> Vec<Vec<(f64, f64)>> {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut polys = Vec::with_capacity(50);
    for idx in 0..50usize {
        let cx = rng.gen_range(120.0..520.0);
        let cy = rng.gen_range(120.0..360.0);
        let base = rng.gen_range(25.0..80.0);
        let kind = idx % 5;
        let v = if kind == 3 {
            rng.gen_range(36..=48usize)
        } else {
            rng.gen_range(24..=48usize)
        };
        let mut harmonics: Vec<(f64, f64, f64)> = (1..=4)
            .map(|k| {
                (
                    k as f64,
                    rng.gen_range(0.0..0.22 / k as f64),
                    rng.gen_range(0.0..TAU),
                )
            })
            .collect();
        if kind == 3 {
            // Star-like: one stronger mid-frequency lobe pattern.
            let lobes = rng.gen_range(5..=7) as f64;
            harmonics.push((lobes, rng.gen_range(0.08..0.12), rng.gen_range(0.0..TAU)));
        }
        let squash = if kind == 4 {
            rng.gen_range(1.6..2.2)
        } else {
            1.0
        };
        let pts: Vec<(f64, f64)> = (0..v)
            .map(|i| {
                let th = TAU * i as f64 / v as f64;
                let mut r = base;
                for &(k, a, phi) in &harmonics {
                    r += base * a * (k * th + phi).cos();
                }
                let (x, y) = (r * th.cos() * squash, r * th.sin());
                (
                    ((cx + x) * 100.0).round() / 100.0,
                    ((cy + y) * 100.0).round() / 100.0,
                )
            })
            .collect();
        polys.push(pts);
    }
    polys
}
