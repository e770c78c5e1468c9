//! Seed plumbing. All randomness in the crate flows from one root seed
//! through named sub-generators, so runs are reproducible end to end and
//! independent subsystems never share a stream by accident.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Derive a deterministic generator for `label` from the root seed.
pub fn sub_rng(seed: u64, label: &str) -> ChaCha8Rng {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update(label.as_bytes());
    let digest = hasher.finalize();
    let mut key = [0u8; 32];
    key.copy_from_slice(&digest[..32]);
    ChaCha8Rng::from_seed(key)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn labeled_streams_are_stable_and_distinct() {
        let a: u64 = sub_rng(7, "alpha").random();
        let a2: u64 = sub_rng(7, "alpha").random();
        let b: u64 = sub_rng(7, "beta").random();
        assert_eq!(a, a2);
        assert_ne!(a, b);
    }
}
