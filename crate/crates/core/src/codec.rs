//! Complex Fourier encoding and decoding of closed contours.
//!
//! A contour is read as one periodic complex function `C(t) = X(t) + iY(t)`,
//! `t in [0, 1)`, sampled at N equally spaced points. The descriptor holds
//! the Fourier series coefficients `F_k` for `k in [-n, n]`, normalized on
//! the analysis side (`1/N`) so that a descriptor decodes at any resolution
//! without rescaling. A polar `rho(theta)` encoder is provided as the
//! baseline it replaces: that form can only represent star-shaped contours.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::geometry::{ray_rho_samples, ContourSamples, Polygon, RayHit};

/// Below this work estimate (`harmonics x samples`) transforms run as direct
/// summation; above it they go through an FFT. The direct path doubles as an
/// internal cross-check for the FFT path.
const DIRECT_PATH_LIMIT: usize = 1 << 14;

/// Storage order of the coefficients: k = 0, 1, -1, 2, -2, ... so that a
/// truncation by |k| is a prefix cut.
#[inline]
pub(crate) fn slot_of(k: i64) -> usize {
    if k == 0 {
        0
    } else if k > 0 {
        (2 * k - 1) as usize
    } else {
        (-2 * k) as usize
    }
}

#[inline]
pub(crate) fn freq_of(slot: usize) -> i64 {
    if slot == 0 {
        0
    } else if slot % 2 == 1 {
        ((slot + 1) / 2) as i64
    } else {
        -((slot / 2) as i64)
    }
}

/// Complex Fourier series coefficients of a closed contour, frequencies
/// `-n ..= n` in pixel units. `F_0` is the contour centroid.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierDescriptor {
    /// Coefficients in the order 0, 1, -1, 2, -2, ...; length `2n + 1`.
    coeffs: Vec<Complex64>,
}

impl FourierDescriptor {
    /// Builds a descriptor from coefficients in storage order
    /// (0, 1, -1, 2, -2, ...). The length must be odd.
    pub fn from_interleaved(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.len() % 2 == 0 {
            return Err(Error::MalformedDescriptor(format!(
                "coefficient count must be odd and nonzero, got {}",
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::MalformedDescriptor(
                "non-finite coefficient".into(),
            ));
        }
        Ok(FourierDescriptor { coeffs })
    }

    /// Max harmonic `n`; frequencies run over `-n ..= n`.
    pub fn max_harmonic(&self) -> usize {
        (self.coeffs.len() - 1) / 2
    }

    /// Number of complex coefficients, `2n + 1`.
    pub fn complex_len(&self) -> usize {
        self.coeffs.len()
    }

    /// Number of stored real values: one complex coefficient counts as two.
    pub fn n_real_coeffs(&self) -> usize {
        2 * self.coeffs.len()
    }

    /// Coefficient at frequency `k`; zero outside the stored range, which is
    /// exactly how the truncated series reads.
    pub fn coeff(&self, k: i64) -> Complex64 {
        let slot = slot_of(k);
        self.coeffs.get(slot).copied().unwrap_or(Complex64::ZERO)
    }

    /// Coefficients in storage order.
    pub fn interleaved(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `(frequency, coefficient)` pairs in storage order.
    pub fn iter_freqs(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(s, &c)| (freq_of(s), c))
    }

    /// Contour centroid, `F_0`.
    pub fn centroid(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// Evaluates the continuous curve at parameter `t` (period 1).
    pub fn eval_at(&self, t: f64) -> Complex64 {
        self.iter_freqs()
            .map(|(k, c)| c * Complex64::cis(TAU * k as f64 * t))
            .sum()
    }

    /// Text record: a line with `n`, then `2n + 1` lines of `k re im` in
    /// storage order. Round-trips bit-exactly.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{}\n", self.max_harmonic()));
        for (k, c) in self.iter_freqs() {
            out.push_str(&format!("{} {} {}\n", k, c.re, c.im));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let n: usize = lines
            .next()
            .ok_or_else(|| Error::MalformedDescriptor("empty descriptor".into()))?
            .trim()
            .parse()
            .map_err(|_| Error::MalformedDescriptor("bad harmonic count line".into()))?;
        let mut coeffs = Vec::with_capacity(2 * n + 1);
        for slot in 0..(2 * n + 1) {
            let line = lines.next().ok_or_else(|| {
                Error::MalformedDescriptor(format!("expected {} coefficient lines", 2 * n + 1))
            })?;
            let mut parts = line.split_whitespace();
            let k: i64 = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::MalformedDescriptor("bad frequency".into()))?;
            if k != freq_of(slot) {
                return Err(Error::MalformedDescriptor(format!(
                    "frequency {} out of order, expected {}",
                    k,
                    freq_of(slot)
                )));
            }
            let re: f64 = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::MalformedDescriptor("bad real part".into()))?;
            let im: f64 = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::MalformedDescriptor("bad imaginary part".into()))?;
            coeffs.push(Complex64::new(re, im));
        }
        if lines.next().is_some() {
            return Err(Error::MalformedDescriptor("trailing data".into()));
        }
        Self::from_interleaved(coeffs)
    }

    /// Binary record: little-endian f64 pairs `(re, im)` in storage order.
    pub fn to_binary(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(16 * self.coeffs.len());
        for c in &self.coeffs {
            out.extend_from_slice(&c.re.to_le_bytes());
            out.extend_from_slice(&c.im.to_le_bytes());
        }
        out
    }

    pub fn from_binary(bytes: &[u8]) -> Result<Self> {
        if bytes.len() % 16 != 0 {
            return Err(Error::MalformedDescriptor(format!(
                "binary length {} is not a multiple of 16",
                bytes.len()
            )));
        }
        let coeffs: Vec<Complex64> = bytes
            .chunks_exact(16)
            .map(|ch| {
                Complex64::new(
                    f64::from_le_bytes(ch[0..8].try_into().unwrap()),
                    f64::from_le_bytes(ch[8..16].try_into().unwrap()),
                )
            })
            .collect();
        Self::from_interleaved(coeffs)
    }
}

fn dft_direct(samples: &[Complex64], n: usize) -> Vec<Complex64> {
    let len = samples.len();
    let scale = 1.0 / len as f64;
    // Twiddles indexed by (j * k) mod len keep the angles exact for large
    // products.
    let tw: Vec<Complex64> = (0..len)
        .map(|r| Complex64::cis(-TAU * r as f64 / len as f64))
        .collect();
    let mut coeffs = vec![Complex64::ZERO; 2 * n + 1];
    for (slot, c) in coeffs.iter_mut().enumerate() {
        let k = freq_of(slot);
        let mut acc = Complex64::ZERO;
        for (j, &z) in samples.iter().enumerate() {
            let r = (j as i64 * k).rem_euclid(len as i64) as usize;
            acc += z * tw[r];
        }
        *c = acc * scale;
    }
    coeffs
}

fn dft_fft(samples: &[Complex64], n: usize) -> Vec<Complex64> {
    let len = samples.len();
    let scale = 1.0 / len as f64;
    let mut buf = samples.to_vec();
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);
    (0..(2 * n + 1))
        .map(|slot| {
            let k = freq_of(slot);
            buf[k.rem_euclid(len as i64) as usize] * scale
        })
        .collect()
}

/// Encodes contour samples into `2n + 1` Fourier series coefficients:
/// `F_k = (1/N) * sum_j z_j * exp(-2*pi*i*j*k/N)`.
pub fn encode(c: &ContourSamples, n: usize) -> Result<FourierDescriptor> {
    let len = c.len();
    if 2 * n + 1 > len {
        return Err(Error::HarmonicsExceedSamples {
            harmonics: n,
            required: 2 * n + 1,
            samples: len,
        });
    }
    let coeffs = if n * len < DIRECT_PATH_LIMIT {
        dft_direct(c.points(), n)
    } else {
        dft_fft(c.points(), n)
    };
    FourierDescriptor::from_interleaved(coeffs)
}

fn idft_direct(d: &FourierDescriptor, m_pts: usize) -> Vec<Complex64> {
    let tw: Vec<Complex64> = (0..m_pts)
        .map(|r| Complex64::cis(TAU * r as f64 / m_pts as f64))
        .collect();
    (0..m_pts)
        .map(|t| {
            d.iter_freqs()
                .map(|(k, c)| {
                    let r = (k * t as i64).rem_euclid(m_pts as i64) as usize;
                    c * tw[r]
                })
                .sum()
        })
        .collect()
}

fn idft_fft(d: &FourierDescriptor, m_pts: usize) -> Vec<Complex64> {
    let mut buf = vec![Complex64::ZERO; m_pts];
    for (k, c) in d.iter_freqs() {
        buf[k.rem_euclid(m_pts as i64) as usize] += c;
    }
    FftPlanner::new().plan_fft_inverse(m_pts).process(&mut buf);
    buf
}

/// Decodes a descriptor at `m_pts` points:
/// `z_t = sum_k F_k * exp(2*pi*i*k*t/m_pts)`.
///
/// Decoding is resolution-free: any two resolutions sample the same
/// continuous curve (`eval_at` at `t/m_pts`).
pub fn decode(d: &FourierDescriptor, m_pts: usize) -> Result<ContourSamples> {
    let required = d.complex_len();
    if m_pts < required {
        return Err(Error::ResolutionTooLow { m_pts, required });
    }
    if m_pts < 4 {
        return Err(Error::Domain(format!(
            "decode needs m_pts >= 4, got {m_pts}"
        )));
    }
    let pts = if required * m_pts < DIRECT_PATH_LIMIT {
        idft_direct(d, m_pts)
    } else {
        idft_fft(d, m_pts)
    };
    ContourSamples::new(pts)
}

/// Keeps frequencies with `|k| <= n_keep` and zeroes the rest; the stored
/// frequency range is unchanged.
pub fn truncate(d: &FourierDescriptor, n_keep: usize) -> Result<FourierDescriptor> {
    if n_keep > d.max_harmonic() {
        return Err(Error::CutoffExceedsHarmonics {
            n_keep,
            max_harmonic: d.max_harmonic(),
        });
    }
    let coeffs = d
        .iter_freqs()
        .map(|(k, c)| {
            if k.unsigned_abs() as usize <= n_keep {
                c
            } else {
                Complex64::ZERO
            }
        })
        .collect();
    FourierDescriptor::from_interleaved(coeffs)
}

/// Zeroes every coefficient with `|F_k| < threshold`, except the -1, 0 and 1
/// frequencies which are never dropped.
pub fn sparsify(d: &FourierDescriptor, threshold: f64) -> FourierDescriptor {
    let coeffs = d
        .iter_freqs()
        .map(|(k, c)| {
            if k.abs() > 1 && c.norm() < threshold {
                Complex64::ZERO
            } else {
                c
            }
        })
        .collect();
    FourierDescriptor { coeffs }
}

/// Polar contour encoding: a center point plus Fourier coefficients of the
/// 2π-periodic radial function `rho(theta)`. Conjugate symmetry
/// `G_{-k} = conj(G_k)` keeps the reconstruction real.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarDescriptor {
    center: Complex64,
    /// Coefficients in the order 0, 1, -1, 2, -2, ...; length `2m + 1`.
    rho_coeffs: Vec<Complex64>,
    star_shaped: bool,
}

impl PolarDescriptor {
    /// Builds from a center and coefficients in storage order; the conjugate
    /// symmetry must already hold within `1e-9`.
    pub fn from_parts(
        center: (f64, f64),
        rho_coeffs: Vec<Complex64>,
        star_shaped: bool,
    ) -> Result<Self> {
        if rho_coeffs.is_empty() || rho_coeffs.len() % 2 == 0 {
            return Err(Error::MalformedDescriptor(
                "polar coefficient count must be odd".into(),
            ));
        }
        let m = (rho_coeffs.len() - 1) / 2;
        let scale = rho_coeffs.iter().map(|c| c.norm()).fold(1.0, f64::max);
        for k in 1..=m {
            let pos = rho_coeffs[slot_of(k as i64)];
            let neg = rho_coeffs[slot_of(-(k as i64))];
            if (neg - pos.conj()).norm() > 1e-9 * scale {
                return Err(Error::MalformedDescriptor(format!(
                    "conjugate symmetry violated at frequency {k}"
                )));
            }
        }
        if rho_coeffs[0].im.abs() > 1e-9 * scale {
            return Err(Error::MalformedDescriptor(
                "zero-frequency coefficient must be real".into(),
            ));
        }
        Ok(PolarDescriptor {
            center: Complex64::new(center.0, center.1),
            rho_coeffs,
            star_shaped,
        })
    }

    pub fn center(&self) -> (f64, f64) {
        (self.center.re, self.center.im)
    }

    pub fn max_harmonic(&self) -> usize {
        (self.rho_coeffs.len() - 1) / 2
    }

    /// Independent real values: `G_0` plus two per positive frequency. The
    /// center is not counted; detection pipelines get it for free.
    pub fn n_real_coeffs(&self) -> usize {
        self.rho_coeffs.len()
    }

    pub fn rho_coeff(&self, k: i64) -> Complex64 {
        let slot = slot_of(k);
        self.rho_coeffs.get(slot).copied().unwrap_or(Complex64::ZERO)
    }

    /// Whether every cast ray crossed the boundary at most twice during
    /// encoding; false means the shape is not star-shaped w.r.t. the center.
    pub fn star_shaped(&self) -> bool {
        self.star_shaped
    }

    /// Evaluates `rho(theta)`; the imaginary part cancels by symmetry and is
    /// discarded.
    pub fn rho_eval(&self, theta: f64) -> f64 {
        let sum: Complex64 = self
            .rho_coeffs
            .iter()
            .enumerate()
            .map(|(s, &c)| c * Complex64::cis(freq_of(s) as f64 * theta))
            .sum();
        sum.re
    }
}

/// Encodes a polygon in polar form: `n_rays` rays cast from `center` at
/// regular angular intervals, each taking the farthest boundary hit, then a
/// Fourier transform of the radial samples.
pub fn encode_polar(
    p: &Polygon,
    center: (f64, f64),
    m: usize,
    n_rays: usize,
) -> Result<PolarDescriptor> {
    encode_polar_with(p, center, m, n_rays, RayHit::Farthest)
}

/// [`encode_polar`] with an explicit hit-selection mode.
pub fn encode_polar_with(
    p: &Polygon,
    center: (f64, f64),
    m: usize,
    n_rays: usize,
    hit: RayHit,
) -> Result<PolarDescriptor> {
    if n_rays < 2 * m + 1 {
        return Err(Error::HarmonicsExceedSamples {
            harmonics: m,
            required: 2 * m + 1,
            samples: n_rays,
        });
    }
    let rho = ray_rho_samples(p, center, n_rays, hit)?;
    let coeffs = rho_fourier_coeffs(&rho.rho, m);
    PolarDescriptor::from_parts(center, coeffs, rho.star_shaped)
}

/// DFT of real radial samples with conjugate symmetry enforced exactly:
/// negative frequencies are stored as conjugates of the positive ones.
pub(crate) fn rho_fourier_coeffs(rho: &[f64], m: usize) -> Vec<Complex64> {
    let len = rho.len();
    let scale = 1.0 / len as f64;
    let mut coeffs = vec![Complex64::ZERO; 2 * m + 1];
    coeffs[0] = Complex64::new(rho.iter().sum::<f64>() * scale, 0.0);
    for k in 1..=m {
        let mut acc = Complex64::ZERO;
        for (j, &r) in rho.iter().enumerate() {
            let ang = -TAU * ((j * k) % len) as f64 / len as f64;
            acc += r * Complex64::cis(ang);
        }
        acc *= scale;
        coeffs[slot_of(k as i64)] = acc;
        coeffs[slot_of(-(k as i64))] = acc.conj();
    }
    coeffs
}

/// A decoded polar contour. `negative_rho` warns that the reconstructed
/// radial function dipped below zero somewhere, which the polar form cannot
/// express geometrically.
#[derive(Debug, Clone)]
pub struct PolarDecoded {
    pub samples: ContourSamples,
    pub negative_rho: bool,
}

/// Decodes a polar descriptor at `m_pts` angles `theta_t = 2*pi*t/m_pts`:
/// `z_t = center + rho(theta_t) * (cos theta_t + i sin theta_t)`.
pub fn decode_polar(d: &PolarDescriptor, m_pts: usize) -> Result<PolarDecoded> {
    let required = d.rho_coeffs.len();
    if m_pts < required {
        return Err(Error::ResolutionTooLow { m_pts, required });
    }
    if m_pts < 4 {
        return Err(Error::Domain(format!(
            "decode needs m_pts >= 4, got {m_pts}"
        )));
    }
    let mut negative = false;
    let mut pts = Vec::with_capacity(m_pts);
    for t in 0..m_pts {
        let theta = TAU * t as f64 / m_pts as f64;
        let rho = d.rho_eval(theta);
        if rho < 0.0 {
            negative = true;
        }
        pts.push(d.center + rho * Complex64::cis(theta));
    }
    Ok(PolarDecoded {
        samples: ContourSamples::new(pts)?,
        negative_rho: negative,
    })
}
