//! Random-matrix verification machinery: the semicircle eigenvalue density
//! and its band edge, the resolvent trace `f(lambda) = Tr(lambda - X)^{-1}`
//! in numerical and closed form, signal-eigenvalue root solving, eigenvalue
//! interlacing under a rank-1 update, and the first-order eigenvalue
//! variance probe.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::blockmodel::{contrast_vector, BlockParams};
use crate::error::{Error, Result};
use crate::seeding::stable_seed;
use crate::spectral::eigenvalues_sym;

/// Edge of the noise spectral band, `gamma = 2 sigma sqrt(n)`.
pub fn band_edge(sigma: f64, n: usize) -> f64 {
    2.0 * sigma * (n as f64).sqrt()
}

/// Semicircle eigenvalue density
/// `phi(z) = sqrt(4 n sigma^2 - z^2) / (2 pi n sigma^2)`, zero outside the
/// band.
pub fn semicircle_density(sigma: f64, n: usize, z: f64) -> f64 {
    let support = 4.0 * n as f64 * sigma * sigma;
    if sigma == 0.0 || z * z >= support {
        return 0.0;
    }
    (support - z * z).sqrt() / (2.0 * PI * n as f64 * sigma * sigma)
}

/// Semicircle probability mass on `[lo, hi]`, from the closed-form
/// antiderivative of the density.
pub fn semicircle_mass(sigma: f64, n: usize, lo: f64, hi: f64) -> f64 {
    let gamma = band_edge(sigma, n);
    if gamma == 0.0 || hi <= lo {
        return 0.0;
    }
    let anti = |z: f64| {
        let z = z.clamp(-gamma, gamma);
        0.5 * (z * (gamma * gamma - z * z).max(0.0).sqrt() + gamma * gamma * (z / gamma).asin())
    };
    // Normalizer: the full-band integral of sqrt(gamma^2 - z^2) is
    // pi gamma^2 / 2.
    (anti(hi) - anti(lo)) / (0.5 * PI * gamma * gamma)
}

/// Normalized eigenvalue histogram over the noise band, against the
/// semicircle reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralDensity {
    /// `bins + 1` edges spanning `[-gamma, gamma]`.
    pub bin_edges: Vec<f64>,
    /// Mass per bin, normalized over the eigenvalues that fall in the band
    /// (sums to 1).
    pub bin_mass: Vec<f64>,
    pub sigma: f64,
    pub n: usize,
}

impl SpectralDensity {
    /// Bins the eigenvalues of one noise realization into `bins` equal-width
    /// bins over `[-gamma, gamma]`.
    pub fn from_eigenvalues(eigenvalues: &[f64], sigma: f64, n: usize, bins: usize) -> Self {
        assert!(bins > 0, "need at least one bin");
        let gamma = band_edge(sigma, n);
        let width = 2.0 * gamma / bins as f64;
        let bin_edges: Vec<f64> = (0..=bins).map(|b| -gamma + b as f64 * width).collect();
        let mut counts = vec![0usize; bins];
        let mut inside = 0usize;
        for &ev in eigenvalues {
            if ev < -gamma || ev > gamma {
                continue;
            }
            let b = (((ev + gamma) / width) as usize).min(bins - 1);
            counts[b] += 1;
            inside += 1;
        }
        let bin_mass = counts
            .iter()
            .map(|&c| {
                if inside == 0 {
                    0.0
                } else {
                    c as f64 / inside as f64
                }
            })
            .collect();
        SpectralDensity {
            bin_edges,
            bin_mass,
            sigma,
            n,
        }
    }

    /// Semicircle mass of each bin.
    pub fn reference_mass(&self) -> Vec<f64> {
        self.bin_edges
            .windows(2)
            .map(|w| semicircle_mass(self.sigma, self.n, w[0], w[1]))
            .collect()
    }

    /// L1 distance between the empirical and semicircle bin masses.
    pub fn l1_distance(&self) -> f64 {
        self.bin_mass
            .iter()
            .zip(self.reference_mass())
            .map(|(&emp, refm)| (emp - refm).abs())
            .sum()
    }

    pub fn bin_centers(&self) -> Vec<f64> {
        self.bin_edges
            .windows(2)
            .map(|w| 0.5 * (w[0] + w[1]))
            .collect()
    }
}

/// Full resolvent trace `sum_i 1 / (lambda - omega_i)` from precomputed
/// eigenvalues. Errors when `lambda` sits within `1e-9` of an eigenvalue.
pub fn f_numeric_from_eigenvalues(eigenvalues: &[f64], lambda: f64) -> Result<f64> {
    let mut min_dist = f64::INFINITY;
    for &w in eigenvalues {
        min_dist = min_dist.min((lambda - w).abs());
    }
    if min_dist <= 1e-9 {
        return Err(Error::NearPole {
            lambda,
            dist: min_dist,
        });
    }
    Ok(eigenvalues.iter().map(|&w| 1.0 / (lambda - w)).sum())
}

/// Resolvent trace of a symmetric matrix, `f(lambda) = Tr(lambda - X)^{-1}`.
pub fn f_numeric(x: &DMatrix<f64>, lambda: f64) -> Result<f64> {
    f_numeric_from_eigenvalues(&eigenvalues_sym(x)?, lambda)
}

/// Closed-form resolvent trace outside the band:
/// `f(lambda) = (lambda - sign(lambda) sqrt(lambda^2 - 4 n sigma^2)) / (2 sigma^2)`,
/// the branch that decays like `n / lambda`. Defined only for
/// `|lambda| > gamma`.
pub fn f_analytic(sigma: f64, n: usize, lambda: f64) -> Result<f64> {
    let gamma = band_edge(sigma, n);
    if lambda.abs() <= gamma {
        return Err(Error::InsideBand { lambda, gamma });
    }
    if sigma == 0.0 {
        return Ok(n as f64 / lambda);
    }
    let disc = lambda * lambda - 4.0 * n as f64 * sigma * sigma;
    Ok((lambda - lambda.signum() * disc.sqrt()) / (2.0 * sigma * sigma))
}

/// Largest solution of `f_analytic(lambda) = 1/nu`, located by bisection on
/// `(gamma + 1e-6 gamma, gamma + 10 n sigma]` (the bracket is doubled as
/// needed). `f` is strictly decreasing there, so the root is unique; it
/// exists only for `|nu| >= sigma/sqrt(n)`. Negative `nu` solves the
/// mirrored problem below `-gamma`.
pub fn solve_signal_eigenvalue(sigma: f64, n: usize, nu: f64) -> Result<f64> {
    if sigma <= 0.0 || !sigma.is_finite() {
        return Err(Error::InvalidParams(format!(
            "root solving needs sigma > 0, got {sigma}"
        )));
    }
    if nu == 0.0 {
        return Err(Error::UndetectableSignal {
            nu,
            crit: sigma / (n as f64).sqrt(),
        });
    }
    if nu < 0.0 {
        return Ok(-solve_signal_eigenvalue(sigma, n, -nu)?);
    }
    let crit = sigma / (n as f64).sqrt();
    if nu < crit {
        return Err(Error::UndetectableSignal { nu, crit });
    }
    let gamma = band_edge(sigma, n);
    let target = 1.0 / nu;
    let lo = gamma * (1.0 + 1e-6);
    let mut hi = gamma + 10.0 * n as f64 * sigma;
    // f(lo) >= the on-edge value sqrt(n)/sigma >= 1/nu, so only the upper
    // end may need to grow.
    for _ in 0..64 {
        if f_analytic(sigma, n, hi)? < target {
            break;
        }
        hi *= 2.0;
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if f_analytic(sigma, n, mid)? >= target {
            a = mid;
        } else {
            b = mid;
        }
        if (b - a) <= 1e-13 * b {
            break;
        }
    }
    Ok(0.5 * (a + b))
}

/// Numerical and analytic resolvent traces sampled on a grid of `points`
/// values of `lambda` spanning `[lo_gamma, hi_gamma]` in units of the band
/// edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceFunction {
    pub lambda_grid: Vec<f64>,
    pub f_numeric: Vec<f64>,
    pub f_analytic: Vec<f64>,
}

impl TraceFunction {
    pub fn sample(
        x: &DMatrix<f64>,
        sigma: f64,
        lo_gamma: f64,
        hi_gamma: f64,
        points: usize,
    ) -> Result<TraceFunction> {
        if !(lo_gamma > 1.0 && hi_gamma > lo_gamma && points >= 2) {
            return Err(Error::InvalidParams(
                "trace grid needs 1 < lo_gamma < hi_gamma and at least 2 points".into(),
            ));
        }
        let n = x.nrows();
        let eigenvalues = eigenvalues_sym(x)?;
        let gamma = band_edge(sigma, n);
        let mut lambda_grid = Vec::with_capacity(points);
        let mut numeric = Vec::with_capacity(points);
        let mut analytic = Vec::with_capacity(points);
        for k in 0..points {
            let frac = k as f64 / (points - 1) as f64;
            let lambda = gamma * (lo_gamma + (hi_gamma - lo_gamma) * frac);
            lambda_grid.push(lambda);
            numeric.push(f_numeric_from_eigenvalues(&eigenvalues, lambda)?);
            analytic.push(f_analytic(sigma, n, lambda)?);
        }
        Ok(TraceFunction {
            lambda_grid,
            f_numeric: numeric,
            f_analytic: analytic,
        })
    }

    /// Largest relative deviation between the two traces.
    pub fn max_relative_error(&self) -> f64 {
        self.f_numeric
            .iter()
            .zip(&self.f_analytic)
            .map(|(&num, &ana)| ((num - ana) / ana).abs())
            .fold(0.0, f64::max)
    }
}

/// Checks that the eigenvalues of `X + nu n u_c u_c^T` interlace those of
/// `X` (leading eigenvalue pushed outward on the side of `nu`). For
/// `nu = 0` the spectra must coincide.
pub fn interlacing_check(x: &DMatrix<f64>, nu: f64) -> Result<bool> {
    let n = x.nrows();
    let base = eigenvalues_sym(x)?;
    let uc = contrast_vector(n);
    let spiked_matrix = x + (&uc * uc.transpose()) * (nu * n as f64);
    let spiked = eigenvalues_sym(&spiked_matrix)?;
    let scale = base
        .first()
        .map(|v| v.abs())
        .unwrap_or(0.0)
        .max(base.last().map(|v| v.abs()).unwrap_or(0.0))
        .max(1.0);
    let tol = 1e-9 * scale;
    if nu == 0.0 {
        return Ok(base
            .iter()
            .zip(&spiked)
            .all(|(&a, &b)| (a - b).abs() <= tol));
    }
    // Descending order: for nu > 0, z_i in [w_i, w_{i-1}] with z_1 >= w_1;
    // mirrored for nu < 0.
    let (outer, inner) = if nu > 0.0 {
        (&spiked, &base)
    } else {
        (&base, &spiked)
    };
    for i in 0..n {
        if outer[i] < inner[i] - tol {
            return Ok(false);
        }
        if i + 1 < n && inner[i] < outer[i + 1] - tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Monte-Carlo estimate of the first-order shift `u_c^T X u_c` of the
/// contrast eigenvalue: zero-mean, with variance `2 sigma^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceProbe {
    pub sample_mean: f64,
    pub sample_variance: f64,
    /// First-order prediction `2 sigma^2`.
    pub predicted_variance: f64,
    pub trials: usize,
}

/// Samples `u_c^T X u_c` over independent noise draws (per-trial seeds are
/// derived from the params seed). Needs at least 100 trials.
pub fn lambda1_variance_test(params: &BlockParams, trials: usize) -> Result<VarianceProbe> {
    if trials < 100 {
        return Err(Error::InvalidParams(format!(
            "variance probe needs at least 100 trials, got {trials}"
        )));
    }
    let uc = contrast_vector(params.n());
    let mut samples = Vec::with_capacity(trials);
    for k in 0..trials {
        let seed = stable_seed(params.seed(), &[k as u64]);
        let x = params.with_seed(seed).noise_matrix();
        samples.push((uc.transpose() * &x * &uc)[(0, 0)]);
    }
    let mean = samples.iter().sum::<f64>() / trials as f64;
    let variance =
        samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (trials - 1) as f64;
    Ok(VarianceProbe {
        sample_mean: mean,
        sample_variance: variance,
        predicted_variance: 2.0 * params.derive().var_avg,
        trials,
    })
}
