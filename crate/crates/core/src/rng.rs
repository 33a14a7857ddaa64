//! Seeded random number generation with independent substreams.
//!
//! Every randomized routine takes a u64 seed and derives one counter-based
//! generator per logical trial. Trials own disjoint streams, so results do
//! not depend on thread count or scheduling order.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator for the trial numbered `stream` under the given master seed.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
