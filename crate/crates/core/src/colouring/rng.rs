use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Reproducible random stream identified by `(master_seed, stream_id)`.
///
/// The generator is pinned: ChaCha8 keyed by `ChaCha8Rng::seed_from_u64(
/// master_seed)` with its stream counter set to `stream_id`. Colours are
/// drawn one per vertex in index order with `gen_range(0..k)`. Monte Carlo
/// trial `t` always uses stream `t`, so results do not depend on how trials
/// are scheduled.
#[derive(Clone, Debug)]
pub struct SeededRng {
    master_seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_id);
        SeededRng {
            master_seed,
            stream_id,
            rng,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// A fresh generator on another stream of the same master seed.
    pub fn stream(&self, stream_id: u64) -> SeededRng {
        SeededRng::new(self.master_seed, stream_id)
    }

    pub fn below(&mut self, k: u32) -> u32 {
        self.rng.gen_range(0..k)
    }
}
