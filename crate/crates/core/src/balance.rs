//! Structural balance dynamics `dY/dt = Y^2`: closed-form resolvent
//! solution, fixed-step RK4 integration as an independent cross-check,
//! blow-up time, and the rank-1 sign matrix the dynamics converge to.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::blockmodel::SignedAdjacency;
use crate::error::{Error, Result};
use crate::spectral::{eigen_sym, eigenvalues_sym, Spectrum};

/// Entry magnitude treated as a numerical blow-up during integration.
pub const OVERFLOW_LIMIT: f64 = 1e12;

/// Resolvent condition number above which the closed form is refused.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Relative eigenvalue gap below which the leading direction is ambiguous.
pub const DEGENERACY_GAP: f64 = 1e-10;

/// A leading eigenvalue below this fraction of the spectral radius counts
/// as non-positive (an exact zero lands at roundoff scale).
pub const BLOWUP_EIGENVALUE_TOL: f64 = 1e-12;

fn effectively_positive(lambda_1: f64, lambda_n: f64) -> bool {
    lambda_1 > BLOWUP_EIGENVALUE_TOL * lambda_1.abs().max(lambda_n.abs())
}

/// Blow-up diagnostics for an initial condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlowupInfo {
    /// Divergence time `t* = 1 / lambda_max`.
    pub t_star: f64,
    /// Leading eigenvalue of `Y(0)`.
    pub lambda_max: f64,
}

/// Finite blow-up time of the dynamics started from `y0`.
///
/// The resolvent `(I - Y0 t)^{-1}` first turns singular at `t = 1/lambda_1`,
/// so the time is computed spectrally rather than by watching the
/// integration overflow. Errors when `lambda_1 <= 0` (no finite-time
/// blow-up).
pub fn blowup_time(y0: &DMatrix<f64>) -> Result<BlowupInfo> {
    let eigenvalues = eigenvalues_sym(y0)?;
    let lambda_max = eigenvalues[0];
    if !effectively_positive(lambda_max, *eigenvalues.last().unwrap()) {
        return Err(Error::NoBlowup { lambda_max });
    }
    Ok(BlowupInfo {
        t_star: 1.0 / lambda_max,
        lambda_max,
    })
}

/// Closed-form solution `Y(t) = Y0 (I - Y0 t)^{-1}` for `0 <= t < t*`.
///
/// Fails past the blow-up time or when the resolvent's condition number
/// exceeds [`CONDITION_LIMIT`]; the error carries `t*`.
pub fn closed_form(y0: &DMatrix<f64>, t: f64) -> Result<DMatrix<f64>> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidParams(format!(
            "time must be finite and nonnegative, got {t}"
        )));
    }
    let eigenvalues = eigenvalues_sym(y0)?;
    let n = y0.nrows();
    let lambda_1 = eigenvalues[0];
    let lambda_n = eigenvalues[n - 1];
    let t_star = if lambda_1 > 0.0 {
        1.0 / lambda_1
    } else {
        f64::INFINITY
    };
    if t >= t_star {
        return Err(Error::BeyondBlowup { t, t_star });
    }
    // The resolvent spectrum is 1 - t*lambda_i, positive for t < t*, so the
    // extremes give the exact condition number.
    let smallest = 1.0 - t * lambda_1;
    let largest = (1.0 - t * lambda_n).max(smallest);
    let cond = largest / smallest;
    if cond > CONDITION_LIMIT {
        return Err(Error::IllConditioned { t, cond, t_star });
    }
    let resolvent = DMatrix::identity(n, n) - y0 * t;
    let solved = resolvent
        .lu()
        .solve(y0)
        .ok_or(Error::IllConditioned { t, cond, t_star })?;
    // Y0 commutes with the resolvent, so the product is symmetric;
    // resymmetrize the roundoff.
    Ok((&solved + solved.transpose()) * 0.5)
}

/// Classical fixed-step RK4 integration of `dY/dt = Y^2` from `Y0` to
/// `t_end`.
///
/// Errors with the last completed time once any entry exceeds
/// [`OVERFLOW_LIMIT`].
pub fn integrate_numeric(y0: &DMatrix<f64>, t_end: f64, dt: f64) -> Result<DMatrix<f64>> {
    integrate_observed(y0, t_end, dt, |_, _| {})
}

/// RK4 integration that reports `(t, &Y)` after every accepted step
/// (and once at `t = 0`), for trajectory dumps.
pub fn integrate_observed<F>(
    y0: &DMatrix<f64>,
    t_end: f64,
    dt: f64,
    mut observe: F,
) -> Result<DMatrix<f64>>
where
    F: FnMut(f64, &DMatrix<f64>),
{
    if !(dt > 0.0 && dt.is_finite()) || !t_end.is_finite() || t_end < 0.0 {
        return Err(Error::InvalidParams(format!(
            "integration needs t_end >= 0 and dt > 0, got t_end = {t_end}, dt = {dt}"
        )));
    }
    crate::spectral::check_symmetric(y0)?;
    let mut y = y0.clone();
    let mut t = 0.0f64;
    observe(t, &y);
    while t < t_end {
        let step = dt.min(t_end - t);
        let k1 = &y * &y;
        let y2 = &y + &k1 * (step / 2.0);
        let k2 = &y2 * &y2;
        let y3 = &y + &k2 * (step / 2.0);
        let k3 = &y3 * &y3;
        let y4 = &y + &k3 * step;
        let k4 = &y4 * &y4;
        let next = &y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (step / 6.0);
        if next.amax() > OVERFLOW_LIMIT || !next.iter().all(|v| v.is_finite()) {
            return Err(Error::Overflow { last_t: t });
        }
        y = next;
        t += step;
        observe(t, &y);
    }
    Ok(y)
}

/// Final adjacency state of the balance dynamics: the sign outer product
/// `sign(u1) sign(u1)^T` of the leading eigenvector of `Y0`, zero components
/// counted as positive. The result is a complete `{-1,+1}` matrix and is
/// invariant under rescaling `Y0` by any positive factor.
pub fn final_state(y0: &DMatrix<f64>) -> Result<SignedAdjacency> {
    let spectrum = eigen_sym(y0)?;
    final_state_from_spectrum(&spectrum)
}

/// Same extraction when the spectrum of `Y0` (or of any positive multiple of
/// it) is already available.
pub fn final_state_from_spectrum(spectrum: &Spectrum) -> Result<SignedAdjacency> {
    let n = spectrum.leading_vector().len();
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParams(format!(
            "final states need an even node count >= 4, got {n}"
        )));
    }
    let lambda_1 = spectrum.lambda1();
    if !effectively_positive(lambda_1, spectrum.lambda_n()) {
        return Err(Error::NoBlowup {
            lambda_max: lambda_1,
        });
    }
    let gap = (lambda_1 - spectrum.lambda2()) / lambda_1.abs();
    if gap <= DEGENERACY_GAP {
        return Err(Error::DegenerateLeadingPair { gap });
    }
    Ok(sign_outer(spectrum.leading_vector()))
}

fn sign_outer(u: &DVector<f64>) -> SignedAdjacency {
    let signs: Vec<i8> = u.iter().map(|&v| if v >= 0.0 { 1 } else { -1 }).collect();
    SignedAdjacency::from_sign_vector(&signs)
}
