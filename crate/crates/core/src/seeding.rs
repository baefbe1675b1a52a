//! Deterministic seed derivation for parallel Monte-Carlo runs.
//!
//! Every replicate gets its own 64-bit seed computed from a master seed and
//! its grid coordinates, so results are independent of scheduling order and
//! worker count.

/// SplitMix64 finalizer step.
fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a master seed with an ordered list of coordinates into one seed.
///
/// The mapping is stable: it is part of the output contract, since sweep
/// CSVs must be bit-reproducible across releases and worker counts.
pub fn stable_seed(master: u64, parts: &[u64]) -> u64 {
    let mut h = splitmix64(master);
    for &p in parts {
        h = splitmix64(h ^ p.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stable_values_are_frozen() {
        // Guard against accidental changes to the seed stream.
        assert_eq!(stable_seed(0, &[]), 16294208416658607535);
        assert_eq!(stable_seed(1, &[2, 3, 4]), 12868731445068901858);
        assert_eq!(stable_seed(42, &[0, 0, 0]), 13934464819154148243);
    }

    #[test]
    fn order_matters() {
        assert_ne!(stable_seed(7, &[1, 2, 3]), stable_seed(7, &[3, 2, 1]));
        assert_ne!(stable_seed(7, &[1]), stable_seed(8, &[1]));
    }

    #[test]
    fn no_collisions_at_sweep_scale() {
        // 10^4 grid cells x 10^3 replicates.
        let mut seeds = Vec::with_capacity(10_000_000);
        for i in 0..100u64 {
            for j in 0..100u64 {
                for k in 0..1000u64 {
                    seeds.push(stable_seed(12345, &[i, j, k]));
                }
            }
        }
        seeds.sort_unstable();
        let unique = seeds.windows(2).all(|w| w[0] != w[1]);
        assert!(unique, "derived seeds collide within a 10^7-replicate grid");
    }
}
