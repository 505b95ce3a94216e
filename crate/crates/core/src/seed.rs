//! Keyed seed derivation.
//!
//! All randomness in a run flows from a single root seed. Sub-seeds are
//! derived from the root plus string tags (portfolio names, event names,
//! rep indices), so adding one job never perturbs the draws of another.

use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;

const FNV_OFFSET: u64 = 0xcbf29ce484222325;
const FNV_PRIME: u64 = 0x100000001b3;

fn fnv1a(state: u64, bytes: &[u8]) -> u64 {
    let mut h = state;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

/// Derive a sub-seed from `root` and an ordered list of tags.
pub fn derive_seed(root: u64, tags: &[&str]) -> u64 {
    let mut h = fnv1a(FNV_OFFSET, &root.to_le_bytes());
    for tag in tags {
        h = fnv1a(h, tag.as_bytes());
        h = fnv1a(h, &[0x1f]); // separator so ("ab","c") != ("a","bc")
    }
    h
}

/// Deterministic generator for a derived seed.
pub fn rng_for(root: u64, tags: &[&str]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(root, tags))
}
