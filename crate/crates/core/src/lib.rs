//! Simulation and verification laboratory for signed networks with
//! two-community structure.
//!
//! The pipeline: [`blockmodel`] draws random signed adjacency matrices from
//! a two-block stochastic model and computes the closed-form signal/noise
//! quantities; [`spectral`] decomposes networks and predicts where the
//! signal eigenvalues sit relative to the noise band, including the
//! detectability and sociality transition boundaries; [`balance`] evolves
//! networks under the structural-balance dynamics `dY/dt = Y^2` to their
//! rank-1 sign outcome; [`metrics`] measures final states (signed
//! assortativity, homogeneity, the joint z metric, triadic balance);
//! [`rmt`] holds the independent random-matrix verification machinery
//! (semicircle density, resolvent traces, interlacing, eigenvalue-shift
//! variance); [`sweep`] runs deterministic parameter grids in parallel.

pub mod balance;
pub mod blockmodel;
pub mod error;
pub mod io;
pub mod metrics;
pub mod rmt;
pub mod seeding;
pub mod spectral;
pub mod sweep;

pub use balance::{blowup_time, closed_form, final_state, integrate_numeric, BlowupInfo};
pub use blockmodel::{
    contrast_vector, homogeneous_vector, BlockParams, DerivedParams, SignedAdjacency,
};
pub use error::{Error, Result};
pub use metrics::{assortativity, homogeneity, is_balanced, z_metric, Assortativity};
pub use spectral::{
    boundary_outgroup_animosity, boundary_symmetric_case, classify_params, classify_spectrum,
    eigen_sym, eigenvalues_sym, predict_signal, Regime, SpectralPrediction, Spectrum,
    TransitionKind,
};
pub use sweep::{run_cell, run_sweep, CellOutcome, OutcomeRecord, SweepConfig, SweepResult};
