//! Chebyshev-series analysis of polar contour functions.
//!
//! A truncated Chebyshev expansion of the radial function `rho` is only
//! periodic — `rho(-1) = rho(1)` after mapping `theta in [0, 2pi]` onto
//! `x in [-1, 1]` — when the odd coefficients sum to zero. An unconstrained
//! least-squares fit has no reason to satisfy that identity, so the
//! reconstructed contour generically tears at `theta = 2pi`. This module
//! evaluates series, measures that periodicity gap in closed form, and runs
//! both the unconstrained and the constrained fit to exhibit the defect.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::geometry::{ray_rho_samples, Polygon, RayHit};

/// Real coefficients `alpha_0 ..= alpha_N` of a truncated Chebyshev series.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevSeries {
    alphas: Vec<f64>,
}

impl ChebyshevSeries {
    pub fn new(alphas: Vec<f64>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::Domain("series needs at least one coefficient".into()));
        }
        if alphas.iter().any(|a| !a.is_finite()) {
            return Err(Error::Domain("non-finite Chebyshev coefficient".into()));
        }
        Ok(ChebyshevSeries { alphas })
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn degree(&self) -> usize {
        self.alphas.len() - 1
    }
}

const DOMAIN_SLACK: f64 = 1e-12;

/// Evaluates `sum_n alpha_n T_n(x)` by the Clenshaw recurrence.
pub fn cheb_eval(s: &ChebyshevSeries, x: f64) -> Result<f64> {
    if !(x.is_finite() && x.abs() <= 1.0 + DOMAIN_SLACK) {
        return Err(Error::Domain(format!("x = {x} outside [-1, 1]")));
    }
    let a = s.alphas();
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &ak in a.iter().skip(1).rev() {
        let tmp = b1;
        b1 = 2.0 * x * b1 - b2 + ak;
        b2 = tmp;
    }
    Ok(x * b1 - b2 + a[0])
}

/// `rho(1) - rho(-1)` in closed form. Since `T_n(1) = 1`, `T_2n(-1) = 1`
/// and `T_{2n+1}(-1) = -1`, the gap equals twice the sum of the odd
/// coefficients; it vanishes exactly when the series is periodic.
pub fn periodicity_gap(s: &ChebyshevSeries) -> f64 {
    2.0 * s.alphas().iter().skip(1).step_by(2).sum::<f64>()
}

fn design_matrix(xs: &[f64], degree: usize) -> DMatrix<f64> {
    let rows = xs.len();
    let mut m = DMatrix::zeros(rows, degree + 1);
    for (r, &x) in xs.iter().enumerate() {
        let mut t_prev = 1.0;
        let mut t_cur = x;
        m[(r, 0)] = 1.0;
        if degree >= 1 {
            m[(r, 1)] = x;
        }
        for c in 2..=degree {
            let t_next = 2.0 * x * t_cur - t_prev;
            m[(r, c)] = t_next;
            t_prev = t_cur;
            t_cur = t_next;
        }
    }
    m
}

fn sample_rho(
    p: &Polygon,
    center: (f64, f64),
    n_samples: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let rho = ray_rho_samples(p, center, n_samples, RayHit::Farthest)?;
    // theta_j = 2*pi*j/n maps linearly onto x_j = 2*j/n - 1.
    let xs = (0..n_samples)
        .map(|j| 2.0 * j as f64 / n_samples as f64 - 1.0)
        .collect();
    Ok((xs, rho.rho))
}

fn solve_least_squares(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    let cols = a.ncols();
    let svd = a.clone().svd(true, true);
    if svd.rank(1e-10) < cols {
        return Err(Error::RankDeficient);
    }
    svd.solve(b, 1e-10).map_err(|_| Error::RankDeficient)
}

/// Samples `rho(theta)` by ray casting, maps `theta` onto `[-1, 1]`, and
/// least-squares fits a Chebyshev series of the given degree with no
/// periodicity constraint. Returns the series and its periodicity gap.
pub fn cheb_fit_rho(
    p: &Polygon,
    center: (f64, f64),
    degree: usize,
    n_samples: usize,
) -> Result<(ChebyshevSeries, f64)> {
    if n_samples <= degree {
        return Err(Error::Domain(format!(
            "need more samples than the degree: {n_samples} <= {degree}"
        )));
    }
    let (xs, rho) = sample_rho(p, center, n_samples)?;
    let a = design_matrix(&xs, degree);
    let b = DVector::from_vec(rho);
    let alphas = solve_least_squares(&a, &b)?;
    let series = ChebyshevSeries::new(alphas.iter().copied().collect())?;
    let gap = periodicity_gap(&series);
    Ok((series, gap))
}

/// [`cheb_fit_rho`] with the linear constraint `sum of odd alphas = 0`
/// appended, which forces the gap to zero. Solved as a KKT system.
pub fn cheb_fit_rho_constrained(
    p: &Polygon,
    center: (f64, f64),
    degree: usize,
    n_samples: usize,
) -> Result<(ChebyshevSeries, f64)> {
    if n_samples <= degree {
        return Err(Error::Domain(format!(
            "need more samples than the degree: {n_samples} <= {degree}"
        )));
    }
    let (xs, rho) = sample_rho(p, center, n_samples)?;
    let a = design_matrix(&xs, degree);
    let b = DVector::from_vec(rho);
    let cols = degree + 1;

    // KKT system: [ 2 A^T A  c ; c^T  0 ] [alpha; mu] = [2 A^T b; 0]
    let ata = a.transpose() * &a;
    let atb = a.transpose() * &b;
    let mut kkt = DMatrix::zeros(cols + 1, cols + 1);
    for i in 0..cols {
        for j in 0..cols {
            kkt[(i, j)] = 2.0 * ata[(i, j)];
        }
    }
    for i in (1..cols).step_by(2) {
        kkt[(i, cols)] = 1.0;
        kkt[(cols, i)] = 1.0;
    }
    let mut rhs = DVector::zeros(cols + 1);
    for i in 0..cols {
        rhs[i] = 2.0 * atb[i];
    }
    let sol = kkt.lu().solve(&rhs).ok_or(Error::RankDeficient)?;
    let series = ChebyshevSeries::new(sol.iter().take(cols).copied().collect())?;
    let gap = periodicity_gap(&series);
    Ok((series, gap))
}
