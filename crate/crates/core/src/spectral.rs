//! Dense symmetric eigendecomposition and the analytic spectral theory:
//! predicted signal eigenvalues, noise-band edge, transition boundaries, and
//! regime classification.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::blockmodel::DerivedParams;
use crate::error::{Error, Result};

/// Sign-agreement fraction above which a leading eigenvector is treated as
/// carrying block (contrast) or uniform (homogeneous) structure. Finite-size
/// fuzz near a transition flips a few components, so exact agreement is not
/// required.
pub const BLOCK_SIGN_THRESHOLD: f64 = 0.90;

/// Full spectrum of a symmetric matrix with the extreme eigenvectors.
#[derive(Debug, Clone)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    leading: DVector<f64>,
    trailing: DVector<f64>,
}

impl Spectrum {
    /// Eigenvalues sorted in descending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn lambda1(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn lambda_n(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }

    /// Second-largest eigenvalue.
    pub fn lambda2(&self) -> f64 {
        self.eigenvalues[1]
    }

    /// Unit eigenvector of the largest eigenvalue.
    pub fn leading_vector(&self) -> &DVector<f64> {
        &self.leading
    }

    /// Unit eigenvector of the smallest eigenvalue.
    pub fn trailing_vector(&self) -> &DVector<f64> {
        &self.trailing
    }
}

pub(crate) fn check_symmetric(matrix: &DMatrix<f64>) -> Result<()> {
    if matrix.nrows() != matrix.ncols() {
        return Err(Error::InvalidParams(format!(
            "matrix must be square, got {}x{}",
            matrix.nrows(),
            matrix.ncols()
        )));
    }
    if matrix.is_empty() {
        return Err(Error::InvalidParams("matrix must be nonempty".into()));
    }
    let mut max_asym = 0.0f64;
    for i in 0..matrix.nrows() {
        for j in (i + 1)..matrix.ncols() {
            max_asym = max_asym.max((matrix[(i, j)] - matrix[(j, i)]).abs());
        }
    }
    let tol = 1e-10 * matrix.amax().max(1.0);
    if max_asym > tol {
        return Err(Error::NotSymmetric {
            max_asymmetry: max_asym,
        });
    }
    Ok(())
}

/// Full eigendecomposition of a dense symmetric matrix (Householder
/// tridiagonalization followed by implicitly shifted QR sweeps).
///
/// Rejects inputs whose asymmetry exceeds `1e-10` relative to the largest
/// entry.
pub fn eigen_sym(matrix: &DMatrix<f64>) -> Result<Spectrum> {
    check_symmetric(matrix)?;
    let es = matrix.clone().symmetric_eigen();
    let n = matrix.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| es.eigenvalues[b].total_cmp(&es.eigenvalues[a]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| es.eigenvalues[k]).collect();
    let leading = es.eigenvectors.column(order[0]).into_owned();
    let trailing = es.eigenvectors.column(order[n - 1]).into_owned();
    Ok(Spectrum {
        eigenvalues,
        leading,
        trailing,
    })
}

/// Eigenvalues only, sorted descending. Skips the eigenvector accumulation,
/// which dominates the cost for large matrices.
pub fn eigenvalues_sym(matrix: &DMatrix<f64>) -> Result<Vec<f64>> {
    check_symmetric(matrix)?;
    let mut vals: Vec<f64> = matrix.symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    Ok(vals)
}

/// Predicted spectral landmarks for a parameter point: the contrast and
/// homogeneous signal eigenvalues, the noise-band edge, and the critical
/// signal strengths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralPrediction {
    /// Predicted contrast eigenvalue `nu*n + sigma^2/nu`; `None` when
    /// `nu = 0` (no community signal to place).
    #[serde(rename = "lambda_C")]
    pub lambda_contrast: Option<f64>,
    /// Predicted homogeneous eigenvalue `mu*n + sigma^2/mu`; `None` when
    /// `mu = 0`.
    #[serde(rename = "lambda_H")]
    pub lambda_homog: Option<f64>,
    /// Noise-band edge `2*sigma*sqrt(n)`.
    pub gamma: f64,
    /// Critical contrast strength `sigma/sqrt(n)`.
    pub nu_crit: f64,
    /// Critical homogeneous strength `sigma/sqrt(n)`.
    pub mu_crit: f64,
    /// Whether the community structure is spectrally detectable
    /// (`|nu| >= nu_crit`).
    pub detect_contrast: bool,
    /// Whether the homogeneous structure is spectrally detectable
    /// (`|mu| >= mu_crit`).
    pub detect_homog: bool,
}

/// Evaluates the signal-eigenvalue and band-edge formulas at a parameter
/// point. Detectability at exact equality with the band edge counts as
/// detectable.
pub fn predict_signal(dp: &DerivedParams, n: usize) -> SpectralPrediction {
    let nf = n as f64;
    let sigma = dp.sigma();
    let gamma = 2.0 * sigma * nf.sqrt();
    let crit = sigma / nf.sqrt();
    let lambda_contrast = (dp.nu != 0.0).then(|| dp.nu * nf + dp.var_avg / dp.nu);
    let lambda_homog = (dp.mu != 0.0).then(|| dp.mu * nf + dp.var_avg / dp.mu);
    SpectralPrediction {
        lambda_contrast,
        lambda_homog,
        gamma,
        nu_crit: crit,
        mu_crit: crit,
        detect_contrast: dp.nu != 0.0 && dp.nu.abs() >= crit,
        detect_homog: dp.mu != 0.0 && dp.mu.abs() >= crit,
    }
}

/// Sparse-limit critical signal strength `sqrt((d_in + d_out) / (2n))`.
///
/// This is the approximation that drops the `mu^2 + nu^2` contribution to
/// the tie variance; the exact criticals come out of [`predict_signal`].
pub fn crit_sparse(d_in: f64, d_out: f64, n: usize) -> f64 {
    ((d_in + d_out) / (2.0 * n as f64)).sqrt()
}

/// The four signal/band-edge crossings: contrast signal against the positive
/// or negative edge, homogeneous signal likewise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransitionKind {
    Assortative,
    Disassortative,
    Prosocial,
    Antisocial,
}

/// A critical outgroup animosity, clipped to `[0, 1]` when the closed form
/// lands outside the probability range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryValue {
    pub p_out_neg: f64,
    pub clipped: bool,
}

fn clip_unit(raw: f64) -> BoundaryValue {
    BoundaryValue {
        p_out_neg: raw.clamp(0.0, 1.0),
        clipped: !(0.0..=1.0).contains(&raw),
    }
}

fn check_boundary_inputs(d_in: f64, d_out: f64, p_in_pos: f64) -> Result<()> {
    for (name, v) in [("d_in", d_in), ("d_out", d_out), ("p_in_pos", p_in_pos)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::InvalidParams(format!(
                "{name} must lie in [0, 1], got {v}"
            )));
        }
    }
    if d_out == 0.0 {
        return Err(Error::InvalidParams(
            "boundary requires d_out > 0".to_string(),
        ));
    }
    Ok(())
}

/// Large-n critical outgroup animosity at which the chosen signal eigenvalue
/// meets the band edge:
///
/// ```text
/// p_out_neg = 1/2 -/+ (d_in/d_out)(p_in_pos - 1/2)
///             +/- sqrt((d_in + d_out - 8 d_in^2 (p_in_pos - 1/2)^2) / 2n) / d_out
/// ```
///
/// with signs fixed by the transition kind.
pub fn boundary_outgroup_animosity(
    d_in: f64,
    d_out: f64,
    p_in_pos: f64,
    n: usize,
    kind: TransitionKind,
) -> Result<BoundaryValue> {
    check_boundary_inputs(d_in, d_out, p_in_pos)?;
    let q = d_in + d_out - 8.0 * d_in * d_in * (p_in_pos - 0.5) * (p_in_pos - 0.5);
    if q < 0.0 {
        return Err(Error::InfeasibleBoundary { discriminant: q });
    }
    let spread = (q / (2.0 * n as f64)).sqrt() / d_out;
    let tilt = (d_in / d_out) * (p_in_pos - 0.5);
    let raw = match kind {
        TransitionKind::Assortative => 0.5 - tilt + spread,
        TransitionKind::Disassortative => 0.5 - tilt - spread,
        TransitionKind::Prosocial => 0.5 + tilt - spread,
        TransitionKind::Antisocial => 0.5 + tilt + spread,
    };
    Ok(clip_unit(raw))
}

/// Finite-n critical outgroup animosity: solves the exact crossing condition
/// `signal^2 (n + 1) + other^2 = (d_in + d_out) / 2` for the expected
/// outgroup tie value, without the large-n simplification. At the returned
/// point the predicted signal eigenvalue equals the band edge to roundoff.
pub fn boundary_outgroup_animosity_exact(
    d_in: f64,
    d_out: f64,
    p_in_pos: f64,
    n: usize,
    kind: TransitionKind,
) -> Result<BoundaryValue> {
    check_boundary_inputs(d_in, d_out, p_in_pos)?;
    let nf = n as f64;
    let avg_in = d_in * (2.0 * p_in_pos - 1.0);
    let disc = 2.0 * (d_in + d_out) / (nf + 2.0)
        - 4.0 * (nf + 1.0) * avg_in * avg_in / ((nf + 2.0) * (nf + 2.0));
    if disc < 0.0 {
        return Err(Error::InfeasibleBoundary { discriminant: disc });
    }
    let s = disc.sqrt();
    let tilt = nf / (nf + 2.0) * avg_in;
    let avg_out = match kind {
        TransitionKind::Assortative => tilt - s,
        TransitionKind::Disassortative => tilt + s,
        TransitionKind::Prosocial => -tilt + s,
        TransitionKind::Antisocial => -tilt - s,
    };
    Ok(clip_unit(0.5 * (1.0 - avg_out / d_out)))
}

/// Critical outgroup animosity on the symmetric slice
/// `p_in_pos = p_out_neg`, `d_in = d_out = d`:
/// `p_out_neg = (1 + sqrt(1/(d n))) / 2`.
pub fn boundary_symmetric_case(d: f64, n: usize) -> Result<f64> {
    if !(d > 0.0 && d <= 1.0) {
        return Err(Error::InvalidParams(format!(
            "symmetric boundary requires d in (0, 1], got {d}"
        )));
    }
    Ok(0.5 * (1.0 + (1.0 / (d * n as f64)).sqrt()))
}

/// The three final-state regimes of the balance dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// Two hostile factions aligned with the identity blocks.
    AssortativeTwoFaction,
    /// Two hostile factions uncorrelated with the identity blocks.
    MixedTwoFaction,
    /// A single all-positive faction.
    Harmonious,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Regime::AssortativeTwoFaction => "assortative_two_faction",
            Regime::MixedTwoFaction => "mixed_two_faction",
            Regime::Harmonious => "harmonious",
        };
        f.write_str(s)
    }
}

/// Predicts the final-state regime from the parameters alone, using the
/// exact criticals. The dynamics follow the leading eigenvector, so only
/// positive-edge crossings matter: assortative when the contrast signal
/// leads and clears the band, harmonious when the homogeneous signal does
/// (ties `nu == mu` go to harmonious).
pub fn classify_params(dp: &DerivedParams, n: usize) -> Regime {
    let crit = dp.sigma() / (n as f64).sqrt();
    if dp.nu >= crit && dp.nu > dp.mu {
        Regime::AssortativeTwoFaction
    } else if dp.mu >= crit && dp.mu >= dp.nu {
        Regime::Harmonious
    } else {
        Regime::MixedTwoFaction
    }
}

/// Structure read off a leading eigenvector's sign pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LeadingVectorShape {
    /// Signs agree with the two-block contrast pattern (up to global sign).
    ContrastLike,
    /// Nearly one common sign.
    HomogeneousLike,
    /// Neither pattern.
    NoiseLike,
}

/// Outcome of classifying an observed spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumClassification {
    pub regime: Regime,
    pub shape: LeadingVectorShape,
    /// Fraction of components whose sign matches the contrast pattern, after
    /// the best global sign flip.
    pub contrast_agreement: f64,
    /// Fraction of components sharing the majority sign.
    pub majority_sign_fraction: f64,
    /// Whether the observed leading eigenvalue clears the predicted
    /// band edge.
    pub outside_band: bool,
}

/// Diagnoses the leading eigenvector of an observed spectrum and maps it to
/// a regime: a block sign pattern means the factions track identity, a
/// uniform pattern means one harmonious faction, anything else is mixed.
/// Zero components count as positive.
pub fn classify_spectrum(
    spectrum: &Spectrum,
    prediction: &SpectralPrediction,
) -> SpectrumClassification {
    let u = spectrum.leading_vector();
    let n = u.len();
    let half = n / 2;
    let mut contrast_matches = 0usize;
    let mut positives = 0usize;
    for i in 0..n {
        let positive = u[i] >= 0.0;
        if positive {
            positives += 1;
        }
        if positive == (i < half) {
            contrast_matches += 1;
        }
    }
    let contrast_agreement = contrast_matches.max(n - contrast_matches) as f64 / n as f64;
    let majority_sign_fraction = positives.max(n - positives) as f64 / n as f64;
    let shape = if contrast_agreement >= BLOCK_SIGN_THRESHOLD {
        LeadingVectorShape::ContrastLike
    } else if majority_sign_fraction >= BLOCK_SIGN_THRESHOLD {
        LeadingVectorShape::HomogeneousLike
    } else {
        LeadingVectorShape::NoiseLike
    };
    let regime = match shape {
        LeadingVectorShape::ContrastLike => Regime::AssortativeTwoFaction,
        LeadingVectorShape::HomogeneousLike => Regime::Harmonious,
        LeadingVectorShape::NoiseLike => Regime::MixedTwoFaction,
    };
    SpectrumClassification {
        regime,
        shape,
        contrast_agreement,
        majority_sign_fraction,
        outside_band: spectrum.lambda1() >= prediction.gamma,
    }
}
