use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// `size_bytes` of ChaCha20 output seeded with `seed`.
pub fn gen_payload(size_bytes: usize, seed: u64) -> Vec<u8> {
    let mut out = vec![0u8; size_bytes];
    ChaCha20Rng::seed_from_u64(seed).fill_bytes(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::MIB;

    #[test]
    fn same_seed_same_bytes() {
        assert_eq!(gen_payload(16, 1), gen_payload(16, 1));
        assert_eq!(gen_payload(16, 1).len(), 16);
    }

    #[test]
    fn different_seeds_differ() {
        assert_ne!(gen_payload(MIB, 1), gen_payload(MIB, 2));
    }

    #[test]
    fn byte_histogram_is_uniform() {
        let data = gen_payload(20 * MIB, 1);
        assert_eq!(data.len(), 20 * MIB);
        let mut counts = [0u64; 256];
        for &b in &data {
            counts[b as usize] += 1;
        }
        let expected = data.len() as f64 / 256.0;
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        // 255 degrees of freedom: mean 255, sd about 22.6. 400 is past 6 sd.
        assert!(chi2 < 400.0, "chi-square {chi2}");
    }
}
