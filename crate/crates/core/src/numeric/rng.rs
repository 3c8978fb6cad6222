use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Source of the two primitive draws every sampler needs.
///
/// Samplers are written against this trait so that tests can substitute an
/// exhaustive enumerator for the pseudo-random stream.
pub trait Randomness {
    /// Uniform integer in `0..n`; `n >= 1`.
    fn below(&mut self, n: u64) -> u64;

    /// Uniform integer in `0..2^53`, read as the fraction `k / 2^53`.
    fn fraction53(&mut self) -> u64;
}

/// Deterministic, splittable random stream.
///
/// ChaCha8 keyed by the seed, with the 64-bit stream id selecting an
/// independent keystream. Output is identical across platforms.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    inner: ChaCha8Rng,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    fn with_stream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self { seed, stream, inner }
    }

    /// Independent child stream derived from `(seed, stream, id)`.
    pub fn substream(&self, id: u64) -> Self {
        let child = splitmix64(self.stream ^ splitmix64(id.wrapping_add(1)));
        Self::with_stream(self.seed, child)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform double in `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        self.fraction53() as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

impl Randomness for RngStream {
    // Lemire's multiply-and-reject; unbiased for every n.
    fn below(&mut self, n: u64) -> u64 {
        assert!(n >= 1, "empty range");
        let threshold = n.wrapping_neg() % n;
        loop {
            let m = self.next_u64() as u128 * n as u128;
            if (m as u64) >= threshold {
                return (m >> 64) as u64;
            }
        }
    }

    fn fraction53(&mut self) -> u64 {
        self.next_u64() >> 11
    }
}

/// Uniform random permutation of `0..n` by Fisher-Yates.
pub(crate) fn permutation<R: Randomness + ?Sized>(n: usize, rng: &mut R) -> Vec<u64> {
    let mut perm: Vec<u64> = (0..n as u64).collect();
    for k in (1..n).rev() {
        let j = rng.below(k as u64 + 1) as usize;
        perm.swap(k, j);
    }
    perm
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_seeds_equal_streams() {
        let mut a = RngStream::new(99);
        let mut b = RngStream::new(99);
        for _ in 0..100_000 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn pinned_output() {
        // Frozen values: any change here breaks seed stability of every sampler.
        let mut s = RngStream::new(42);
        let got: Vec<u64> = (0..3).map(|_| s.next_u64()).collect();
        assert_eq!(got, PINNED_SEED_42.to_vec());
        let mut c = RngStream::new(42).substream(7);
        assert_eq!(c.next_u64(), PINNED_SUBSTREAM_42_7);
    }

    const PINNED_SEED_42: [u64; 3] = [12578764544318200737, 17529487244874322312, 7886285670807131020];
    const PINNED_SUBSTREAM_42_7: u64 = 7950980275151959158;

    #[test]
    fn substreams_differ() {
        let root = RngStream::new(5);
        let mut a = root.substream(0);
        let mut b = root.substream(1);
        let mut r = root.clone();
        let xa: Vec<u64> = (0..4).map(|_| a.next_u64()).collect();
        let xb: Vec<u64> = (0..4).map(|_| b.next_u64()).collect();
        let xr: Vec<u64> = (0..4).map(|_| r.next_u64()).collect();
        assert_ne!(xa, xb);
        assert_ne!(xa, xr);
    }

    #[test]
    fn below_in_range_and_roughly_uniform() {
        let mut s = RngStream::new(1);
        let mut counts = [0u32; 7];
        for _ in 0..70_000 {
            counts[s.below(7) as usize] += 1;
        }
        for c in counts {
            assert!((9_500..10_500).contains(&c), "{counts:?}");
        }
        assert_eq!(s.below(1), 0);
    }

    #[test]
    fn permutation_is_bijection() {
        let mut s = RngStream::new(3);
        for n in 0..20 {
            let mut p = permutation(n, &mut s);
            p.sort_unstable();
            assert_eq!(p, (0..n as u64).collect::<Vec<_>>());
        }
    }

    #[test]
    fn uniform_in_unit_interval() {
        let mut s = RngStream::new(11);
        for _ in 0..10_000 {
            let u = s.uniform();
            assert!((0.0..1.0).contains(&u));
        }
    }
}
