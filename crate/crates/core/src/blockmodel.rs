//! Stochastic block model for two-community signed networks.
//!
//! Networks have `n` nodes split into equal identity groups A (indices
//! `0..n/2`) and B (indices `n/2..n`). A tie between an ingroup pair forms
//! with probability `d_in` and, conditional on forming, is positive with
//! probability `p_in_pos`; outgroup pairs use `d_out` and `p_out_pos`.

use nalgebra::{DMatrix, DVector};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Generating parameters of the two-block signed network model.
///
/// Constructed through [`BlockParams::new`], which enforces the invariants
/// (`n` even and at least 4, probabilities in `[0, 1]`), so a value of this
/// type is always valid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBlockParams", into = "RawBlockParams")]
pub struct BlockParams {
    n: usize,
    d_in: f64,
    d_out: f64,
    p_in_pos: f64,
    p_out_pos: f64,
    zero_diagonal: bool,
    seed: u64,
}

/// Wire form of [`BlockParams`]: a flat JSON object.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawBlockParams {
    pub n: usize,
    pub d_in: f64,
    pub d_out: f64,
    pub p_in_pos: f64,
    pub p_out_pos: f64,
    #[serde(default = "default_zero_diagonal")]
    pub zero_diagonal: bool,
    #[serde(default)]
    pub seed: u64,
}

fn default_zero_diagonal() -> bool {
    true
}

impl TryFrom<RawBlockParams> for BlockParams {
    type Error = Error;

    fn try_from(raw: RawBlockParams) -> Result<Self> {
        BlockParams::new(raw.n, raw.d_in, raw.d_out, raw.p_in_pos, raw.p_out_pos)
            .map(|p| p.with_zero_diagonal(raw.zero_diagonal).with_seed(raw.seed))
    }
}

impl From<BlockParams> for RawBlockParams {
    fn from(p: BlockParams) -> Self {
        RawBlockParams {
            n: p.n,
            d_in: p.d_in,
            d_out: p.d_out,
            p_in_pos: p.p_in_pos,
            p_out_pos: p.p_out_pos,
            zero_diagonal: p.zero_diagonal,
            seed: p.seed,
        }
    }
}

impl BlockParams {
    /// Validates and builds a parameter set. Self-ties are disabled by
    /// default (`zero_diagonal = true`) and the seed starts at 0.
    pub fn new(n: usize, d_in: f64, d_out: f64, p_in_pos: f64, p_out_pos: f64) -> Result<Self> {
        if n < 4 || !n.is_multiple_of(2) {
            return Err(Error::InvalidParams(format!(
                "n must be even and >= 4, got {n}"
            )));
        }
        for (name, v) in [
            ("d_in", d_in),
            ("d_out", d_out),
            ("p_in_pos", p_in_pos),
            ("p_out_pos", p_out_pos),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParams(format!(
                    "{name} must lie in [0, 1], got {v}"
                )));
            }
        }
        Ok(BlockParams {
            n,
            d_in,
            d_out,
            p_in_pos,
            p_out_pos,
            zero_diagonal: true,
            seed: 0,
        })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// `false` re-enables the model's random self-ties; the default zeroes
    /// the diagonal as is usual for social networks.
    pub fn with_zero_diagonal(mut self, zero_diagonal: bool) -> Self {
        self.zero_diagonal = zero_diagonal;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d_in(&self) -> f64 {
        self.d_in
    }

    pub fn d_out(&self) -> f64 {
        self.d_out
    }

    pub fn p_in_pos(&self) -> f64 {
        self.p_in_pos
    }

    pub fn p_out_pos(&self) -> f64 {
        self.p_out_pos
    }

    /// Ingroup animosity, always derived from the affinity.
    pub fn p_in_neg(&self) -> f64 {
        1.0 - self.p_in_pos
    }

    /// Outgroup animosity, always derived from the affinity.
    pub fn p_out_neg(&self) -> f64 {
        1.0 - self.p_out_pos
    }

    pub fn zero_diagonal(&self) -> bool {
        self.zero_diagonal
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Closed-form signal and noise quantities implied by the parameters.
    pub fn derive(&self) -> DerivedParams {
        let avg_in = self.d_in * (2.0 * self.p_in_pos - 1.0);
        let avg_out = self.d_out * (2.0 * self.p_out_pos - 1.0);
        let mu = 0.5 * (avg_in + avg_out);
        let nu = 0.5 * (avg_in - avg_out);
        let var_in = self.d_in - avg_in * avg_in;
        let var_out = self.d_out - avg_out * avg_out;
        DerivedParams {
            // Stored as mu +/- nu so the outer-product split of the expected
            // matrix is exact in floating point.
            avg_in: mu + nu,
            avg_out: mu - nu,
            mu,
            nu,
            var_in,
            var_out,
            var_avg: 0.5 * (var_in + var_out),
            density: 0.5 * (self.d_in + self.d_out),
        }
    }

    /// Draws one signed adjacency matrix. Deterministic in the seed: the
    /// upper triangle is sampled in row-major order, one uniform draw per
    /// pair, mapped through cumulative thresholds (tie density first, then
    /// sign), and mirrored for symmetry.
    pub fn generate(&self) -> SignedAdjacency {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut adj = SignedAdjacency::zeros(self.n);
        let half = self.n / 2;
        for i in 0..self.n {
            let start = if self.zero_diagonal { i + 1 } else { i };
            for j in start..self.n {
                let ingroup = (i < half) == (j < half);
                let (density, p_pos) = if ingroup {
                    (self.d_in, self.p_in_pos)
                } else {
                    (self.d_out, self.p_out_pos)
                };
                let u = unit_f64(&mut rng);
                let tie = if u < density * p_pos {
                    1
                } else if u < density {
                    -1
                } else {
                    0
                };
                if tie != 0 {
                    adj.set_pair(i, j, tie);
                }
            }
        }
        adj
    }

    /// Expected adjacency matrix: `avg_in` on the diagonal blocks, `avg_out`
    /// on the off-diagonal blocks. Equals the rank-2 sum
    /// `mu*n*u_h*u_h^T + nu*n*u_c*u_c^T` exactly.
    pub fn expected_matrix(&self) -> DMatrix<f64> {
        let dp = self.derive();
        let half = self.n / 2;
        DMatrix::from_fn(self.n, self.n, |i, j| {
            if (i < half) == (j < half) {
                dp.avg_in
            } else {
                dp.avg_out
            }
        })
    }

    /// One realization of the zero-mean noise matrix `X = A - <A>`.
    pub fn noise_matrix(&self) -> DMatrix<f64> {
        self.generate().to_dense() - self.expected_matrix()
    }
}

/// Quantities computed from [`BlockParams`]: expected tie values, the signal
/// parameters `mu` (grand mean) and `nu` (ingroup/outgroup half-difference),
/// and the noise variances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedParams {
    /// Expected ingroup tie value; equals `mu + nu` exactly.
    pub avg_in: f64,
    /// Expected outgroup tie value; equals `mu - nu` exactly.
    pub avg_out: f64,
    pub mu: f64,
    pub nu: f64,
    /// Ingroup tie variance.
    pub var_in: f64,
    /// Outgroup tie variance.
    pub var_out: f64,
    /// Average tie variance `sigma^2 = (var_in + var_out) / 2`; also equals
    /// `density - mu^2 - nu^2`.
    pub var_avg: f64,
    /// Overall expected tie density `(d_in + d_out) / 2`.
    pub density: f64,
}

impl DerivedParams {
    /// Noise scale `sigma`.
    pub fn sigma(&self) -> f64 {
        self.var_avg.max(0.0).sqrt()
    }

    /// The same derived quantities after swapping `mu` and `nu`, i.e. after
    /// flipping the sign of every outgroup tie. Used by symmetry checks.
    pub fn signal_swapped(&self) -> DerivedParams {
        DerivedParams {
            avg_in: self.avg_in,
            avg_out: -self.avg_out,
            mu: self.nu,
            nu: self.mu,
            ..*self
        }
    }
}

/// Symmetric signed adjacency matrix over `{-1, 0, +1}` with the fixed
/// A-then-B node labeling (first half of the indices is group A).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedAdjacency {
    n: usize,
    entries: Vec<i8>,
}

impl SignedAdjacency {
    /// Empty network on `n` nodes (`n` even, at least 4).
    pub fn zeros(n: usize) -> Self {
        assert!(
            n >= 4 && n.is_multiple_of(2),
            "node count must be even and >= 4"
        );
        SignedAdjacency {
            n,
            entries: vec![0; n * n],
        }
    }

    /// Builds the complete rank-1 sign matrix `s s^T` from a `{-1,+1}` sign
    /// vector (diagonal entries come out as `+1`).
    pub fn from_sign_vector(signs: &[i8]) -> Self {
        assert!(signs.iter().all(|&s| s == 1 || s == -1));
        let n = signs.len();
        let mut adj = SignedAdjacency::zeros(n);
        for i in 0..n {
            for j in 0..n {
                adj.entries[i * n + j] = signs[i] * signs[j];
            }
        }
        adj
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Nodes `0..half` are group A, the rest group B.
    pub fn half(&self) -> usize {
        self.n / 2
    }

    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.entries[i * self.n + j]
    }

    /// Sets entry `(i, j)` and its mirror, keeping the matrix symmetric.
    pub fn set_pair(&mut self, i: usize, j: usize, value: i8) {
        debug_assert!(value == -1 || value == 0 || value == 1);
        self.entries[i * self.n + j] = value;
        self.entries[j * self.n + i] = value;
    }

    /// True when both nodes belong to the same identity group.
    pub fn same_block(&self, i: usize, j: usize) -> bool {
        let half = self.half();
        (i < half) == (j < half)
    }

    /// Nonzero entries of the upper triangle (including the diagonal),
    /// row-major.
    pub fn iter_upper_nonzero(&self) -> impl Iterator<Item = (usize, usize, i8)> + '_ {
        (0..self.n).flat_map(move |i| {
            (i..self.n).filter_map(move |j| {
                let v = self.get(i, j);
                (v != 0).then_some((i, j, v))
            })
        })
    }

    pub fn tie_count(&self) -> usize {
        self.iter_upper_nonzero().count()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| f64::from(self.get(i, j)))
    }
}

/// Unit-norm homogeneous signal vector (all components equal).
pub fn homogeneous_vector(n: usize) -> DVector<f64> {
    DVector::from_element(n, 1.0 / (n as f64).sqrt())
}

/// Unit-norm contrast signal vector: positive on group A, negative on
/// group B.
pub fn contrast_vector(n: usize) -> DVector<f64> {
    assert!(
        n.is_multiple_of(2),
        "contrast vector needs an even node count"
    );
    let c = 1.0 / (n as f64).sqrt();
    DVector::from_fn(n, |i, _| if i < n / 2 { c } else { -c })
}

/// Uniform draw on `[0, 1)` from the top 53 bits of the generator, so the
/// sampled stream does not depend on the rand crate's float conversion.
fn unit_f64(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
