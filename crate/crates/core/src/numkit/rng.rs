use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::UnitVector3;

/// Counter-based random stream addressed by `(seed, stream_id)`.
///
/// Backed by ChaCha8, whose keystream is a pure function of key, stream
/// number and word position. Shards with distinct `stream_id`s are
/// independent and can run in any order.
#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    stream_id: u64,
    inner: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream_id);
        Self { seed, stream_id, inner }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Number of 32-bit words consumed so far.
    pub fn position(&self) -> u128 {
        self.inner.get_word_pos()
    }

    /// Uniform draw in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }
    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }
    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// Uniform direction on S² by inverse CDF: z uniform on [−1, 1], azimuth uniform.
pub fn sample_isotropic_direction(rng: &mut RandomStream) -> UnitVector3 {
    let z = 2.0 * rng.uniform() - 1.0;
    let phi = 2.0 * std::f64::consts::PI * rng.uniform();
    let r = (1.0 - z * z).max(0.0).sqrt();
    let (x, y) = (r * phi.cos(), r * phi.sin());
    // Rounding can leave |v| a few ulp off; renormalizing keeps the invariant tight.
    UnitVector3::normalize(x, y, z).expect("isotropic draw is never zero")
}
