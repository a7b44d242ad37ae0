//! Deterministic random streams.
//!
//! A master seed keys a ChaCha8 generator; replication `r` reads stream `r`
//! of that key. Streams are independent of scheduling, so results do not
//! depend on thread count or completion order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> StreamRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for replication `replication` under `master`.
pub fn replication_rng(master: u64, replication: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(replication);
    rng
}
