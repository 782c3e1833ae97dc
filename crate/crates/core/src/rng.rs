//! Counter-style RNG substreams.
//!
//! Every random draw in the simulator comes from a ChaCha8 stream addressed by
//! `(seed, domain, a, b)`. Results therefore depend only on the addressing,
//! never on which worker thread ran the job or in which order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Domain {
    Scenario = 1,
    Uav = 2,
    Pair = 3,
    Sample = 4,
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Combines words into a single 64-bit key.
pub fn hash_words(words: &[u64]) -> u64 {
    words
        .iter()
        .fold(0x243F_6A88_85A3_08D3u64, |acc, &w| mix64(acc ^ mix64(w)))
}

/// Opens the stream addressed by `(seed, domain, a, b)`.
pub fn substream(seed: u64, domain: Domain, a: u64, b: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    let mut s = seed;
    for chunk in key.chunks_exact_mut(8) {
        s = mix64(s);
        chunk.copy_from_slice(&s.to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(hash_words(&[domain as u64, a, b]));
    rng
}
