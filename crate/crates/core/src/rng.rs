//! Seeded, splittable randomness.
//!
//! Every random choice in the crate is drawn from ChaCha8 keyed by a 64-bit
//! seed; independent substreams are selected with the ChaCha stream id, so a
//! construction is a pure function of its seed regardless of thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Substream tags.
pub mod stream {
    pub const EMBEDDING: u64 = 1;
    pub const CHOOSE_Z: u64 = 2;
    pub const VOLUME: u64 = 3;
    pub const SUBLEVEL: u64 = 4;
}

/// Generator for substream `stream` of `seed`.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Derives a child seed, e.g. for a recursive construction level.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    use rand::RngCore;
    let mut rng = substream(seed, stream::SUBLEVEL);
    rng.set_word_pos(u128::from(tag) * 16);
    rng.next_u64()
}

/// Fresh seed from system entropy, for unseeded runs that still record their seed.
pub fn entropy_seed() -> u64 {
    rand::random()
}
