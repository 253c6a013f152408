//! Shape losses with analytic gradients, and a fixed-step gradient-descent
//! fitter for descriptors.
//!
//! Three terms act on a decoded contour: a symmetrized Chamfer distance to
//! the target points, an L2 penalty on the (root-sum-squared) edge lengths,
//! and an L1 penalty on coefficient magnitudes that exempts the -1, 0, 1
//! frequencies. Point-space gradients are pulled back to coefficient space
//! through the adjoint of the linear decode map.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

use crate::codec::{decode, encode, FourierDescriptor};
use crate::error::{Error, Result};
use crate::geometry::{nearest_point, resample, BoundingBox, ContourSamples, Polygon};

/// Optional plateau detector for the perimeter-penalty decay: the weight is
/// zeroed once the windowed average of the perimeter term stops moving.
#[derive(Debug, Clone, Copy)]
pub struct PlateauDecay {
    pub window: usize,
    pub rel_tol: f64,
}

impl Default for PlateauDecay {
    fn default() -> Self {
        PlateauDecay {
            window: 200,
            rel_tol: 1e-4,
        }
    }
}

/// Loss weights and the perimeter-decay schedule.
#[derive(Debug, Clone)]
pub struct LossConfig {
    pub lambda_cd: f64,
    pub lambda_perim: f64,
    pub lambda_coeff: f64,
    /// Iteration at which the perimeter weight drops to zero; `None` keeps
    /// it active for the whole run.
    pub perim_decay_iteration: Option<usize>,
    /// Normalizer of the coefficient penalty; `None` means the number of
    /// complex coefficients `2n + 1` of the descriptor being scored.
    pub n_c: Option<usize>,
    /// Automatic steady-state decay, off by default.
    pub plateau_decay: Option<PlateauDecay>,
}

impl Default for LossConfig {
    fn default() -> Self {
        LossConfig {
            lambda_cd: 1.0,
            lambda_perim: 0.01,
            lambda_coeff: 500.0,
            perim_decay_iteration: Some(2000),
            n_c: None,
            plateau_decay: None,
        }
    }
}

impl LossConfig {
    /// Perimeter weight at a given iteration: exactly `lambda_perim` before
    /// the decay iteration and exactly zero from it onward.
    pub fn perim_lambda_at(&self, iteration: usize) -> f64 {
        match self.perim_decay_iteration {
            Some(at) if iteration >= at => 0.0,
            _ => self.lambda_perim,
        }
    }
}

/// Symmetrized Chamfer distance between decoded and target points, with the
/// exact gradient with respect to each decoded point (packed as
/// `dL/dx + i dL/dy`).
pub fn loss_chamfer(
    decoded: &[Complex64],
    target: &[Complex64],
) -> Result<(f64, Vec<Complex64>)> {
    if decoded.is_empty() || target.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let na = decoded.len() as f64;
    let nb = target.len() as f64;
    let mut grad = vec![Complex64::ZERO; decoded.len()];
    let mut sum_forward = 0.0;
    for (i, &z) in decoded.iter().enumerate() {
        let (j, d2) = nearest_point(z, target);
        sum_forward += d2;
        grad[i] += 2.0 * (z - target[j]) / na;
    }
    let mut sum_backward = 0.0;
    for &w in target {
        let (i, d2) = nearest_point(w, decoded);
        sum_backward += d2;
        grad[i] += 2.0 * (decoded[i] - w) / nb;
    }
    Ok((sum_forward / na + sum_backward / nb, grad))
}

/// Perimeter penalty `lambda * sqrt(sum_i |z_i - z_{i+1}|^2)` over the
/// closed loop, with its exact gradient. At a fully collapsed contour the
/// subgradient is taken as zero.
pub fn loss_perimeter(decoded: &[Complex64], lambda: f64) -> Result<(f64, Vec<Complex64>)> {
    let n = decoded.len();
    if n < 3 {
        return Err(Error::Domain(format!(
            "perimeter loss needs at least 3 points, got {n}"
        )));
    }
    let mut sum_sq = 0.0;
    for i in 0..n {
        sum_sq += (decoded[i] - decoded[(i + 1) % n]).norm_sqr();
    }
    let root = sum_sq.sqrt();
    if lambda == 0.0 || root < 1e-300 {
        return Ok((lambda * root, vec![Complex64::ZERO; n]));
    }
    let scale = lambda / root;
    let grad = (0..n)
        .map(|i| {
            let prev = decoded[(i + n - 1) % n];
            let next = decoded[(i + 1) % n];
            scale * (2.0 * decoded[i] - prev - next)
        })
        .collect();
    Ok((lambda * root, grad))
}

/// L1 penalty `(lambda / N_c) * sum_{|k| >= 2} |F_k|` with gradient
/// `F/|F|` per coefficient (zero at the origin), in storage order.
pub fn loss_coeff(d: &FourierDescriptor, cfg: &LossConfig) -> (f64, Vec<Complex64>) {
    let n_c = cfg.n_c.unwrap_or(d.complex_len()).max(1);
    let scale = cfg.lambda_coeff / n_c as f64;
    let mut value = 0.0;
    let grad = d
        .iter_freqs()
        .map(|(k, c)| {
            if k.abs() <= 1 {
                return Complex64::ZERO;
            }
            let norm = c.norm();
            value += scale * norm;
            if norm > 0.0 {
                scale * c / norm
            } else {
                Complex64::ZERO
            }
        })
        .collect();
    (value, grad)
}

/// Adjoint of the decode map: pulls a point-space cotangent back to
/// coefficient space, `G_k = sum_t g_t * exp(-2*pi*i*k*t/m)` in storage
/// order. Decode is linear, so this is exact.
pub fn decode_adjoint(point_grad: &[Complex64], n: usize) -> Vec<Complex64> {
    let m = point_grad.len();
    let tw: Vec<Complex64> = (0..m)
        .map(|r| Complex64::cis(-TAU * r as f64 / m as f64))
        .collect();
    let mut out = vec![Complex64::ZERO; 2 * n + 1];
    for (slot, g) in out.iter_mut().enumerate() {
        let k = crate::codec::freq_of(slot);
        let mut acc = Complex64::ZERO;
        for (t, &gt) in point_grad.iter().enumerate() {
            let r = (k * t as i64).rem_euclid(m as i64) as usize;
            acc += gt * tw[r];
        }
        *g = acc;
    }
    out
}

/// The three loss terms, each already multiplied by its weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossTerms {
    pub l_cd: f64,
    pub l_perim: f64,
    pub l_coeff: f64,
}

impl LossTerms {
    pub fn total(&self) -> f64 {
        self.l_cd + self.l_perim + self.l_coeff
    }
}

/// Value, per-term breakdown, and the full coefficient-space gradient of the
/// shape loss.
#[derive(Debug, Clone)]
pub struct TotalLoss {
    pub value: f64,
    pub terms: LossTerms,
    /// Gradient per coefficient in storage order (0, 1, -1, 2, -2, ...).
    pub grad: Vec<Complex64>,
}

/// Decodes the descriptor at the target's resolution and evaluates
/// `lambda_cd * L_CD + lambda_perim(iteration) * L_perim + L_coeff`, with
/// the exact coefficient-space gradient.
pub fn total_shape_loss(
    d: &FourierDescriptor,
    target: &ContourSamples,
    cfg: &LossConfig,
    iteration: usize,
) -> Result<TotalLoss> {
    let decoded = decode(d, target.len())?;
    let (cd, cd_grad) = loss_chamfer(decoded.points(), target.points())?;
    let lambda_perim = cfg.perim_lambda_at(iteration);
    let (perim, perim_grad) = loss_perimeter(decoded.points(), lambda_perim)?;
    let (coeff, coeff_grad) = loss_coeff(d, cfg);
    let point_grad: Vec<Complex64> = cd_grad
        .iter()
        .zip(&perim_grad)
        .map(|(c, p)| cfg.lambda_cd * c + p)
        .collect();
    let mut grad = decode_adjoint(&point_grad, d.max_harmonic());
    for (g, c) in grad.iter_mut().zip(&coeff_grad) {
        *g += c;
    }
    let terms = LossTerms {
        l_cd: cfg.lambda_cd * cd,
        l_perim: perim,
        l_coeff: coeff,
    };
    Ok(TotalLoss {
        value: terms.total(),
        terms,
        grad,
    })
}

/// Starting point for the fitter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitMode {
    /// Encode of the resampled target — starts near the optimum.
    Warm,
    /// A circle through the target's centroid and mean radius.
    ColdCircle,
    /// A seeded random descriptor with decaying magnitudes; use distinct
    /// seeds for restarts.
    Random { seed: u64 },
}

/// Fitter settings: plain gradient descent with a fixed step; classical
/// momentum is available but off by default.
#[derive(Debug, Clone, Copy)]
pub struct FitOptions {
    pub steps: usize,
    pub step_size: f64,
    pub momentum: f64,
    pub init: InitMode,
}

impl FitOptions {
    pub fn new(steps: usize, step_size: f64) -> Self {
        FitOptions {
            steps,
            step_size,
            momentum: 0.0,
            init: InitMode::Warm,
        }
    }

    pub fn with_init(mut self, init: InitMode) -> Self {
        self.init = init;
        self
    }

    pub fn with_momentum(mut self, momentum: f64) -> Self {
        self.momentum = momentum;
        self
    }
}

/// One row of the per-iteration loss trace; the term columns are the
/// weighted values that sum to `total`.
#[derive(Debug, Clone, Copy)]
pub struct TraceRow {
    pub iter: usize,
    pub l_cd: f64,
    pub l_perim: f64,
    pub l_coeff: f64,
    pub total: f64,
}

/// Outcome of a descriptor fit.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub descriptor: FourierDescriptor,
    pub trace: Vec<TraceRow>,
    pub iterations: usize,
    /// Chamfer distance of the final decode against the resampled target.
    pub final_chamfer: f64,
}

/// Renders a loss trace as CSV with header `iter,l_cd,l_perim,l_coeff,total`.
pub fn trace_to_csv(trace: &[TraceRow]) -> String {
    let mut out = String::from("iter,l_cd,l_perim,l_coeff,total\n");
    for row in trace {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.iter, row.l_cd, row.l_perim, row.l_coeff, row.total
        ));
    }
    out
}

fn init_descriptor(
    target: &ContourSamples,
    n: usize,
    init: InitMode,
) -> Result<FourierDescriptor> {
    match init {
        InitMode::Warm => encode(target, n),
        InitMode::ColdCircle => {
            let mean: Complex64 =
                target.points().iter().sum::<Complex64>() / target.len() as f64;
            let radius = target
                .points()
                .iter()
                .map(|z| (z - mean).norm())
                .sum::<f64>()
                / target.len() as f64;
            let mut coeffs = vec![Complex64::ZERO; 2 * n + 1];
            coeffs[0] = mean;
            if n >= 1 {
                coeffs[1] = Complex64::new(radius, 0.0);
            }
            FourierDescriptor::from_interleaved(coeffs)
        }
        InitMode::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let bb = BoundingBox::of_points(target.points());
            let center = Complex64::new(
                (bb.min_x + bb.max_x) / 2.0,
                (bb.min_y + bb.max_y) / 2.0,
            );
            let extent = bb.width().max(bb.height()).max(1.0) / 2.0;
            let mut coeffs = vec![Complex64::ZERO; 2 * n + 1];
            coeffs[0] = center;
            for (slot, c) in coeffs.iter_mut().enumerate().skip(1) {
                let k = crate::codec::freq_of(slot);
                let mag = extent * rng.gen_range(0.05..0.35) / (1.0 + k.abs() as f64);
                let phase = rng.gen_range(0.0..TAU);
                *c = mag * Complex64::cis(phase);
            }
            FourierDescriptor::from_interleaved(coeffs)
        }
    }
}

/// Fits a descriptor to a target polygon by fixed-step gradient descent on
/// the total shape loss. Deterministic given the inputs and the init seed.
///
/// The smooth terms (Chamfer, perimeter) step along their gradients; the
/// non-smooth coefficient penalty is applied proximally, soft-thresholding
/// each penalized coefficient by `step * lambda_coeff / N_c` after the
/// gradient step. Plain subgradient steps would oscillate around zero at
/// exactly that amplitude; the proximal step reaches zero and stays there.
pub fn fit_descriptor(
    target: &Polygon,
    n: usize,
    n_pts: usize,
    cfg: &LossConfig,
    opts: &FitOptions,
) -> Result<FitResult> {
    if opts.steps == 0 {
        return Err(Error::Domain("fit needs at least one step".into()));
    }
    let target_samples = resample(target, n_pts)?;
    let init = init_descriptor(&target_samples, n, opts.init)?;
    let mut coeffs = init.interleaved().to_vec();
    let mut velocity = vec![Complex64::ZERO; coeffs.len()];
    let mut trace = Vec::with_capacity(opts.steps);
    let n_c = cfg.n_c.unwrap_or(coeffs.len()).max(1);
    let shrink = opts.step_size * cfg.lambda_coeff / n_c as f64;

    // Plateau bookkeeping for the optional automatic decay.
    let mut plateau_triggered = false;
    let mut perim_history: Vec<f64> = Vec::new();
    let mut cfg_now = cfg.clone();

    for it in 0..opts.steps {
        if plateau_triggered {
            cfg_now.lambda_perim = 0.0;
        }
        let d = FourierDescriptor::from_interleaved(coeffs.clone())
            .map_err(|_| Error::Divergence { iteration: it })?;
        let smooth_cfg = LossConfig {
            lambda_coeff: 0.0,
            ..cfg_now.clone()
        };
        let tl = total_shape_loss(&d, &target_samples, &smooth_cfg, it)?;
        let (l_coeff, _) = loss_coeff(&d, &cfg_now);
        let total = tl.value + l_coeff;
        if !total.is_finite() {
            return Err(Error::Divergence { iteration: it });
        }
        trace.push(TraceRow {
            iter: it,
            l_cd: tl.terms.l_cd,
            l_perim: tl.terms.l_perim,
            l_coeff,
            total,
        });
        for (slot, ((c, v), g)) in coeffs.iter_mut().zip(&mut velocity).zip(&tl.grad).enumerate() {
            *v = opts.momentum * *v - opts.step_size * g;
            *c += *v;
            let k = crate::codec::freq_of(slot);
            if k.abs() > 1 && shrink > 0.0 {
                let norm = c.norm();
                *c = if norm <= shrink {
                    Complex64::ZERO
                } else {
                    *c * (1.0 - shrink / norm)
                };
            }
        }
        if let Some(p) = cfg.plateau_decay {
            if !plateau_triggered && cfg_now.perim_lambda_at(it) > 0.0 {
                perim_history.push(tl.terms.l_perim);
                let w = p.window.max(1);
                if perim_history.len() >= 2 * w && perim_history.len() % w == 0 {
                    let recent: f64 =
                        perim_history[perim_history.len() - w..].iter().sum::<f64>() / w as f64;
                    let earlier: f64 = perim_history
                        [perim_history.len() - 2 * w..perim_history.len() - w]
                        .iter()
                        .sum::<f64>()
                        / w as f64;
                    if (recent - earlier).abs() <= p.rel_tol * earlier.abs().max(1e-12) {
                        plateau_triggered = true;
                    }
                }
            }
        }
    }

    let descriptor = FourierDescriptor::from_interleaved(coeffs)
        .map_err(|_| Error::Divergence { iteration: opts.steps })?;
    let decoded = decode(&descriptor, n_pts)?;
    let final_chamfer =
        crate::geometry::chamfer_distance(decoded.points(), target_samples.points())?;
    Ok(FitResult {
        descriptor,
        trace,
        iterations: opts.steps,
        final_chamfer,
    })
}
