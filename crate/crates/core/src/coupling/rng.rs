//! Reproducible random streams.
//!
//! Every stream is a ChaCha8 generator whose key is derived from the user
//! seed and a purpose tag, and whose stream id is the trial (or sample)
//! index. A trial consumes its own stream sequentially, so results do not
//! depend on how trials are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// What a stream is used for; distinct purposes never share key material.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    Coupling = 1,
    Collector = 2,
    LowerBound = 3,
    SingleCard = 4,
    Lazy = 5,
    Wilson = 6,
    Functions = 7,
    Validity = 8,
}

pub fn stream(seed: u64, purpose: Purpose, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(purpose as u64).to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}
