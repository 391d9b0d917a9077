//! Seed derivation.
//!
//! Every stochastic operation receives an explicit `u64` seed. Child seeds for
//! replicates, candidate parameters and bootstrap draws are derived from a
//! parent seed with a counter-based SplitMix64 mix, so results do not depend
//! on evaluation order or thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// The generator used throughout the crate.
pub type GraphRng = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the `index`-th child stream of `parent`.
pub fn derive_seed(parent: u64, index: u64) -> u64 {
    splitmix64(parent ^ splitmix64(index.wrapping_mul(GOLDEN_GAMMA) ^ 0x5851_f42d_4c95_7f2d))
}

/// Seed of the child stream of `parent` named by `label`.
pub fn derive_seed_for(parent: u64, label: &str) -> u64 {
    let digest = Sha256::digest(label.as_bytes());
    let mut word = [0u8; 8];
    word.copy_from_slice(&digest[..8]);
    derive_seed(parent, u64::from_le_bytes(word))
}

pub fn rng_from_seed(seed: u64) -> GraphRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Lower-case hex SHA-256 of `text`.
pub(crate) fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}
