//! Outcome measurement for signed networks: discrete-type assortativity on
//! the positive and negative tie subgraphs, leading-eigenvector homogeneity,
//! the joint z metric, and the triadic balance check.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::blockmodel::{BlockParams, SignedAdjacency};
use crate::error::{Error, Result};

/// Assortativity of the two tie-sign subgraphs and their signed combination
/// `r = (r_pos - r_neg) / 2`.
///
/// A coefficient whose subgraph has no ties, or whose denominator
/// `1 - sum_i a_i^2` vanishes, is reported as 0 with the corresponding
/// `*_degenerate` flag set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Assortativity {
    pub r_pos: f64,
    pub r_neg: f64,
    pub r: f64,
    pub pos_degenerate: bool,
    pub neg_degenerate: bool,
}

/// Newman's discrete-type assortativity from a 2x2 matrix of directed tie
/// counts (every undirected tie counted once per direction, self-ties once).
fn newman_coefficient(counts: [[u64; 2]; 2]) -> (f64, bool) {
    let total: u64 = counts.iter().flatten().sum();
    if total == 0 {
        return (0.0, true);
    }
    let e: Vec<f64> = counts
        .iter()
        .flatten()
        .map(|&c| c as f64 / total as f64)
        .collect();
    let trace = e[0] + e[3];
    let a0 = e[0] + e[1];
    let a1 = e[2] + e[3];
    let sum_a2 = a0 * a0 + a1 * a1;
    let denom = 1.0 - sum_a2;
    if denom.abs() < 1e-12 {
        (0.0, true)
    } else {
        ((trace - sum_a2) / denom, false)
    }
}

/// Signed assortativity with respect to the fixed A/B block labeling.
///
/// Errors when the network has no ties at all.
pub fn assortativity(adj: &SignedAdjacency) -> Result<Assortativity> {
    let n = adj.n();
    let half = adj.half();
    let mut pos = [[0u64; 2]; 2];
    let mut neg = [[0u64; 2]; 2];
    for i in 0..n {
        let bi = usize::from(i >= half);
        for j in 0..n {
            let bj = usize::from(j >= half);
            match adj.get(i, j) {
                1 => pos[bi][bj] += 1,
                -1 => neg[bi][bj] += 1,
                _ => {}
            }
        }
    }
    let ties: u64 = pos.iter().flatten().sum::<u64>() + neg.iter().flatten().sum::<u64>();
    if ties == 0 {
        return Err(Error::EmptyNetwork);
    }
    let (r_pos, pos_degenerate) = newman_coefficient(pos);
    let (r_neg, neg_degenerate) = newman_coefficient(neg);
    Ok(Assortativity {
        r_pos,
        r_neg,
        r: 0.5 * (r_pos - r_neg),
        pos_degenerate,
        neg_degenerate,
    })
}

/// Analytic reference: assortativity computed from the expected tie counts
/// of the block model instead of a realized draw. Produced networks are
/// measured with [`assortativity`]; this variant exists for closed-form
/// sanity checks of the coefficient curves.
pub fn expected_assortativity(params: &BlockParams) -> Assortativity {
    let n = params.n() as f64;
    // Ordered ingroup cells per block, diagonal excluded unless self-ties
    // are enabled.
    let in_cells = if params.zero_diagonal() {
        (n / 2.0) * (n / 2.0 - 1.0)
    } else {
        (n / 2.0) * (n / 2.0)
    };
    let out_cells = (n / 2.0) * (n / 2.0);
    let coefficient = |p_in: f64, p_out: f64| -> (f64, bool) {
        let within = in_cells * params.d_in() * p_in;
        let between = out_cells * params.d_out() * p_out;
        let total = 2.0 * within + 2.0 * between;
        if total == 0.0 {
            return (0.0, true);
        }
        let trace = 2.0 * within / total;
        let a = 0.5; // both groups carry identical expected tie ends
        let sum_a2 = 2.0 * a * a;
        let denom = 1.0 - sum_a2;
        ((trace - sum_a2) / denom, false)
    };
    let (r_pos, pos_degenerate) = coefficient(params.p_in_pos(), params.p_out_pos());
    let (r_neg, neg_degenerate) = coefficient(params.p_in_neg(), params.p_out_neg());
    Assortativity {
        r_pos,
        r_neg,
        r: 0.5 * (r_pos - r_neg),
        pos_degenerate,
        neg_degenerate,
    }
}

/// Homogeneity of an eigenvector: the fraction of components carrying the
/// majority sign, zeros counted as positive. Ranges over `[1/2, 1]`.
pub fn homogeneity(vector: &DVector<f64>) -> Result<f64> {
    let n = vector.len();
    if n == 0 || vector.iter().all(|&v| v == 0.0) {
        return Err(Error::ZeroVector);
    }
    let positives = vector.iter().filter(|&&v| v >= 0.0).count();
    Ok(positives.max(n - positives) as f64 / n as f64)
}

/// Joint regime metric `z = r - 2h + 1`: +1 for a fully assortative
/// two-faction state, 0 for a mixed two-faction state, -1 for a harmonious
/// single faction.
pub fn z_metric(r: f64, h: f64) -> f64 {
    r - 2.0 * h + 1.0
}

/// Result of the triadic balance scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalanceCheck {
    pub balanced: bool,
    /// First triad (by lexicographic node order) whose tie-sign product is
    /// negative, when unbalanced.
    pub violating_triad: Option<(usize, usize, usize)>,
}

/// Checks structural balance of a complete signed network: every triad must
/// have a positive tie-sign product (zero or two negative ties).
///
/// Errors when any off-diagonal pair has no tie.
pub fn is_balanced(adj: &SignedAdjacency) -> Result<BalanceCheck> {
    let n = adj.n();
    for i in 0..n {
        for j in (i + 1)..n {
            if adj.get(i, j) == 0 {
                return Err(Error::IncompleteNetwork { i, j });
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let vij = i32::from(adj.get(i, j));
            for k in (j + 1)..n {
                let product = vij * i32::from(adj.get(j, k)) * i32::from(adj.get(i, k));
                if product < 0 {
                    return Ok(BalanceCheck {
                        balanced: false,
                        violating_triad: Some((i, j, k)),
                    });
                }
            }
        }
    }
    Ok(BalanceCheck {
        balanced: true,
        violating_triad: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Two-faction matrix aligned with the blocks: +1 within, -1 between.
    fn faction_matrix(n: usize, diagonal: i8) -> SignedAdjacency {
        let mut adj = SignedAdjacency::zeros(n);
        for i in 0..n {
            for j in i..n {
                if i == j {
                    if diagonal != 0 {
                        adj.set_pair(i, i, diagonal);
                    }
                } else if adj.same_block(i, j) {
                    adj.set_pair(i, j, 1);
                } else {
                    adj.set_pair(i, j, -1);
                }
            }
        }
        adj
    }

    fn all_positive(n: usize) -> SignedAdjacency {
        SignedAdjacency::from_sign_vector(&vec![1i8; n])
    }

    #[test]
    fn assortativity_two_faction_state() {
        for diagonal in [0, 1] {
            let a = assortativity(&faction_matrix(20, diagonal)).unwrap();
            assert!((a.r_pos - 1.0).abs() < 1e-15);
            assert!((a.r_neg + 1.0).abs() < 1e-15);
            assert!((a.r - 1.0).abs() < 1e-15);
            assert!(!a.pos_degenerate && !a.neg_degenerate);
        }
    }

    #[test]
    fn assortativity_harmonious_state() {
        // The complete all-positive matrix splits its ties evenly across the
        // four blocks, so r_pos is exactly zero and r_neg is flagged.
        let a = assortativity(&all_positive(30)).unwrap();
        assert_eq!(a.r_pos, 0.0);
        assert_eq!(a.r_neg, 0.0);
        assert_eq!(a.r, 0.0);
        assert!(!a.pos_degenerate);
        assert!(a.neg_degenerate);
    }

    #[test]
    fn assortativity_four_node_example() {
        // A = {0, 1}, B = {2, 3}; positive ties (0,1), (0,2); negative ties
        // (2,3), (1,3). Counting tie ends per block gives
        // r_pos = r_neg = -1/3.
        let mut adj = SignedAdjacency::zeros(4);
        adj.set_pair(0, 1, 1);
        adj.set_pair(0, 2, 1);
        adj.set_pair(2, 3, -1);
        adj.set_pair(1, 3, -1);
        let a = assortativity(&adj).unwrap();
        assert!((a.r_pos - (-1.0 / 3.0)).abs() < 1e-15);
        assert!((a.r_neg - (-1.0 / 3.0)).abs() < 1e-15);
        assert_eq!(a.r, 0.0);
    }

    #[test]
    fn assortativity_empty_network_errors() {
        let adj = SignedAdjacency::zeros(8);
        assert!(matches!(assortativity(&adj), Err(Error::EmptyNetwork)));
    }

    #[test]
    fn assortativity_degenerate_denominator() {
        // All positive ties inside block A: a_A = 1 makes the denominator
        // vanish.
        let mut adj = SignedAdjacency::zeros(8);
        adj.set_pair(0, 1, 1);
        adj.set_pair(1, 2, 1);
        let a = assortativity(&adj).unwrap();
        assert_eq!(a.r_pos, 0.0);
        assert!(a.pos_degenerate);
    }

    #[test]
    fn assortativity_block_relabel_invariance() {
        // Swapping the two blocks relabels i -> (i + half) mod n.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 20;
        let mut adj = SignedAdjacency::zeros(n);
        for i in 0..n {
            for j in (i + 1)..n {
                let v = match rng.random_range(0..3u8) {
                    0 => -1,
                    1 => 0,
                    _ => 1,
                };
                adj.set_pair(i, j, v);
            }
        }
        let mut swapped = SignedAdjacency::zeros(n);
        for i in 0..n {
            for j in (i + 1)..n {
                let si = (i + n / 2) % n;
                let sj = (j + n / 2) % n;
                swapped.set_pair(si, sj, adj.get(i, j));
            }
        }
        let a = assortativity(&adj).unwrap();
        let b = assortativity(&swapped).unwrap();
        assert!((a.r_pos - b.r_pos).abs() < 1e-12);
        assert!((a.r_neg - b.r_neg).abs() < 1e-12);
    }

    #[test]
    fn random_sign_outer_products_average_to_zero_r() {
        // For s drawn uniformly from {-1,+1}^n the rank-1 state s s^T is
        // balanced with r centered on zero.
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let n = 100;
        let mut sum_r = 0.0;
        for _ in 0..200 {
            let signs: Vec<i8> = (0..n)
                .map(|_| if rng.random::<bool>() { 1 } else { -1 })
                .collect();
            let adj = SignedAdjacency::from_sign_vector(&signs);
            assert!(is_balanced(&adj).unwrap().balanced);
            sum_r += assortativity(&adj).unwrap().r;
        }
        let mean_r = sum_r / 200.0;
        assert!(mean_r.abs() < 0.05, "mean r = {mean_r}");
    }

    #[test]
    fn aligned_sign_outer_product_is_fully_assortative() {
        let n = 16;
        let signs: Vec<i8> = (0..n).map(|i| if i < n / 2 { 1 } else { -1 }).collect();
        let adj = SignedAdjacency::from_sign_vector(&signs);
        let a = assortativity(&adj).unwrap();
        assert!((a.r - 1.0).abs() < 1e-15);
        assert!(is_balanced(&adj).unwrap().balanced);
    }

    #[test]
    fn expected_assortativity_tracks_the_affinity() {
        // Fixed d_in = 0.5, d_out = 0.3, p_out_neg = 0.7: with no ingroup
        // affinity all positive ties are outgroup (r_pos = -1); raising the
        // affinity pushes r upward.
        let at = |p_in_pos: f64| {
            let p = BlockParams::new(100, 0.5, 0.3, p_in_pos, 0.3).unwrap();
            expected_assortativity(&p)
        };
        assert!((at(0.0).r_pos - (-1.0)).abs() < 1e-12);
        assert!(at(0.0).r < 0.0);
        assert!(at(1.0).r > 0.0);
        let mut prev = at(0.0).r;
        for k in 1..=10 {
            let r = at(k as f64 / 10.0).r;
            assert!(r > prev);
            prev = r;
        }

        // Realized counts converge to the expected-count coefficients.
        let p = BlockParams::new(400, 0.5, 0.3, 0.8, 0.3)
            .unwrap()
            .with_seed(5);
        let measured = assortativity(&p.generate()).unwrap();
        let analytic = expected_assortativity(&p);
        assert!((measured.r - analytic.r).abs() < 0.02);
    }

    #[test]
    fn homogeneity_examples() {
        let all_pos = DVector::from_element(50, 0.3);
        assert_eq!(homogeneity(&all_pos).unwrap(), 1.0);

        let contrast = crate::blockmodel::contrast_vector(100);
        assert_eq!(homogeneity(&contrast).unwrap(), 0.5);

        let v = DVector::from_fn(100, |i, _| if i < 70 { 1.0 } else { -1.0 });
        assert_eq!(homogeneity(&v).unwrap(), 0.7);

        // Zeros count as positive.
        let with_zero = DVector::from_vec(vec![0.0, -1.0, -1.0, -1.0]);
        assert_eq!(homogeneity(&with_zero).unwrap(), 0.75);

        assert!(matches!(
            homogeneity(&DVector::zeros(5)),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn homogeneity_sign_flip_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let v = DVector::from_fn(61, |_, _| rng.random::<f64>() - 0.5);
        let flipped = -&v;
        // Flipping can move zeros across the boundary, but this vector has
        // none.
        assert_eq!(homogeneity(&v).unwrap(), homogeneity(&flipped).unwrap());
    }

    #[test]
    fn z_metric_corners() {
        assert_eq!(z_metric(1.0, 0.5), 1.0);
        assert_eq!(z_metric(0.0, 1.0), -1.0);
        assert_eq!(z_metric(0.0, 0.5), 0.0);
    }

    #[test]
    fn balance_examples() {
        assert!(is_balanced(&all_positive(10)).unwrap().balanced);
        assert!(is_balanced(&faction_matrix(10, 1)).unwrap().balanced);

        // One negative tie in an otherwise positive triangle.
        let mut adj = all_positive(4);
        adj.set_pair(0, 1, -1);
        let check = is_balanced(&adj).unwrap();
        assert!(!check.balanced);
        assert_eq!(check.violating_triad, Some((0, 1, 2)));
    }

    #[test]
    fn balance_requires_complete_network() {
        let mut adj = all_positive(6);
        adj.set_pair(2, 4, 0);
        assert!(matches!(
            is_balanced(&adj),
            Err(Error::IncompleteNetwork { i: 2, j: 4 })
        ));
    }
}
