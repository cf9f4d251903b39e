//! Shared fixtures for the criterion benches.

use decohere::states::random_state;
use decohere::CMat;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic random states of dimension `d`.
pub fn fixed_states(d: usize, count: usize, seed: u64) -> Vec<CMat> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_state(d, &mut rng)).collect()
}
