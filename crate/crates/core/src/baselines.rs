//! Comparison encryptors.
//!
//! * `naive_encrypt` — one ciphertext per value, value in slot 0.
//! * `batch_encrypt` — full slot packing, one encryption per chunk.
//! * radix caching — precomputed encryptions of radix powers, scalars
//!   assembled by digit selection plus a random encryption of zero. Scalar
//!   only (slot 0), with the fractional part quantized to the configured
//!   number of radix digits.

use rand::Rng;

use crate::ckks::{add_ct_ct, encrypt, Ciphertext, PublicKey};
use crate::encoding::{encode_fast, SlotVector};
use crate::error::{Error, Result};
use crate::metrics::OpCounters;
use crate::params::SchemeParams;

/// One ciphertext per value.
pub fn naive_encrypt<R: Rng>(
    params: &SchemeParams,
    pk: &PublicKey,
    values: &[f64],
    rng: &mut R,
    ctr: &mut OpCounters,
) -> Result<Vec<Ciphertext>> {
    values
        .iter()
        .map(|&v| {
            let m = SlotVector::new(params, vec![v])?;
            let pt = encode_fast(params, &m, params.scale(), ctr)?;
            encrypt(params, pk, &pt, rng, ctr)
        })
        .collect()
}

/// Standard packed encryption, `batch_size` values per ciphertext.
pub fn batch_encrypt<R: Rng>(
    params: &SchemeParams,
    pk: &PublicKey,
    values: &[f64],
    batch_size: usize,
    rng: &mut R,
    ctr: &mut OpCounters,
) -> Result<Vec<Ciphertext>> {
    if batch_size == 0 || batch_size > params.slot_count() {
        return Err(Error::BatchSizeOutOfRange {
            got: batch_size,
            max: params.slot_count(),
        });
    }
    values
        .chunks(batch_size)
        .map(|chunk| {
            let mut padded = chunk.to_vec();
            padded.resize(batch_size, 0.0);
            let m = SlotVector::new(params, padded)?;
            let pt = encode_fast(params, &m, params.scale(), ctr)?;
            encrypt(params, pk, &pt, rng, ctr)
        })
        .collect()
}

/// Cached encryptions of r^k for k in [-frac_bits, int_bits], plus a pool of
/// fresh encryptions of zero used to re-randomize assembled scalars.
pub struct RadixCache {
    radix: u32,
    int_bits: u32,
    frac_bits: u32,
    /// powers[i] encrypts r^(i - frac_bits) in slot 0.
    powers: Vec<Ciphertext>,
    zero_pool: Vec<Ciphertext>,
}

impl RadixCache {
    pub fn radix(&self) -> u32 {
        self.radix
    }

    pub fn int_bits(&self) -> u32 {
        self.int_bits
    }

    pub fn frac_bits(&self) -> u32 {
        self.frac_bits
    }

    /// Number of cached power ciphertexts (int_bits + frac_bits + 1).
    pub fn power_count(&self) -> usize {
        self.powers.len()
    }

    pub fn pool_count(&self) -> usize {
        self.zero_pool.len()
    }

    /// Total cached ciphertexts: powers plus zero pool.
    pub fn cache_size(&self) -> usize {
        self.powers.len() + self.zero_pool.len()
    }

    pub fn power(&self, exponent: i32) -> Option<&Ciphertext> {
        let idx = exponent + self.frac_bits as i32;
        if idx < 0 {
            return None;
        }
        self.powers.get(idx as usize)
    }
}

pub const DEFAULT_RADIX: u32 = 2;
pub const DEFAULT_INT_BITS: u32 = 4;
pub const DEFAULT_FRAC_BITS: u32 = 16;
pub const DEFAULT_ZERO_POOL: usize = 16;

pub fn rache_precompute<R: Rng>(
    params: &SchemeParams,
    pk: &PublicKey,
    radix: u32,
    int_bits: u32,
    frac_bits: u32,
    pool_size: usize,
    rng: &mut R,
    ctr: &mut OpCounters,
) -> Result<RadixCache> {
    if radix < 2 {
        return Err(Error::Config(format!("radix {radix} must be at least 2")));
    }
    if int_bits + frac_bits > 52 {
        return Err(Error::Config(format!(
            "{int_bits} integer + {frac_bits} fraction digits exceed double-precision faithfulness"
        )));
    }
    let top = (radix as f64).powi(int_bits as i32);
    if top > params.max_message_magnitude() {
        return Err(Error::Config(format!(
            "largest cached power {top} exceeds the magnitude budget {}",
            params.max_message_magnitude()
        )));
    }
    if pool_size == 0 {
        return Err(Error::Config("zero pool must not be empty".into()));
    }
    let mut powers = Vec::with_capacity((int_bits + frac_bits + 1) as usize);
    for k in -(frac_bits as i32)..=(int_bits as i32) {
        let v = (radix as f64).powi(k);
        let m = SlotVector::new(params, vec![v])?;
        let pt = encode_fast(params, &m, params.scale(), ctr)?;
        powers.push(encrypt(params, pk, &pt, rng, ctr)?);
    }
    let zero_pt = encode_fast(
        params,
        &SlotVector::new(params, vec![0.0])?,
        params.scale(),
        ctr,
    )?;
    let zero_pool = (0..pool_size)
        .map(|_| encrypt(params, pk, &zero_pt, rng, ctr))
        .collect::<Result<_>>()?;
    Ok(RadixCache {
        radix,
        int_bits,
        frac_bits,
        powers,
        zero_pool,
    })
}

/// Assemble a scalar from cached radix powers. The value is quantized to
/// `frac_bits` fractional digits; magnitudes at or above r^int_bits error.
/// Negative values are assembled from |v| and negated.
///
/// Additions performed: one for the zero-pool entry plus the sum of the
/// digits (for radix 2, popcount + 1).
pub fn rache_encrypt_scalar<R: Rng>(
    params: &SchemeParams,
    cache: &RadixCache,
    v: f64,
    rng: &mut R,
    ctr: &mut OpCounters,
) -> Result<Ciphertext> {
    if !v.is_finite() {
        return Err(Error::NonFinite(0));
    }
    let r = cache.radix as f64;
    let magnitude = v.abs();
    if magnitude >= r.powi(cache.int_bits as i32) {
        return Err(Error::RadixRange {
            value: v,
            int_bits: cache.int_bits,
            frac_bits: cache.frac_bits,
        });
    }
    // Digits of |v| · r^frac_bits, least significant first.
    let mut quantized = (magnitude * r.powi(cache.frac_bits as i32)).round() as u64;

    let mut acc = Ciphertext::zero(params, params.scale(), 0);
    let pool_idx = rng.gen_range(0..cache.zero_pool.len());
    acc = add_ct_ct(&acc, &cache.zero_pool[pool_idx], ctr)?;

    let mut exponent = -(cache.frac_bits as i32);
    while quantized > 0 {
        let digit = quantized % cache.radix as u64;
        for _ in 0..digit {
            let power = cache.power(exponent).ok_or(Error::RadixRange {
                value: v,
                int_bits: cache.int_bits,
                frac_bits: cache.frac_bits,
            })?;
            acc = add_ct_ct(&acc, power, ctr)?;
        }
        quantized /= cache.radix as u64;
        exponent += 1;
    }
    if v < 0.0 {
        acc = acc.negate();
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ckks::{decrypt, keygen, SecretKey};
    use crate::encoding::decode;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn setup(n: usize, seed: u64) -> (SchemeParams, SecretKey, PublicKey, ChaCha12Rng) {
        let params = SchemeParams::with_ring_degree(n).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let mut ctr = OpCounters::new();
        let (sk, pk) = keygen(&params, &mut rng, &mut ctr).unwrap();
        (params, sk, pk, rng)
    }

    fn slot0(params: &SchemeParams, sk: &SecretKey, ct: &Ciphertext) -> f64 {
        let mut ctr = OpCounters::new();
        decode(params, &decrypt(params, sk, ct, &mut ctr).unwrap()).unwrap().values()[0]
    }

    const TOY_SLACK: f64 = 1e-2;

    #[test]
    fn naive_one_ciphertext_per_value() {
        let (params, sk, pk, mut rng) = setup(256, 1);
        let mut ctr = OpCounters::new();
        let values = [0.5, -0.25, 0.75];
        let cts = naive_encrypt(&params, &pk, &values, &mut rng, &mut ctr).unwrap();
        assert_eq!(cts.len(), 3);
        assert_eq!(ctr.encryptions, 3);
        for (v, ct) in values.iter().zip(&cts) {
            assert!((slot0(&params, &sk, ct) - v).abs() <= TOY_SLACK);
        }
    }

    #[test]
    fn naive_empty_input() {
        let (params, _, pk, mut rng) = setup(64, 2);
        let mut ctr = OpCounters::new();
        let cts = naive_encrypt(&params, &pk, &[], &mut rng, &mut ctr).unwrap();
        assert!(cts.is_empty());
        assert_eq!(ctr.encryptions, 0);
    }

    #[test]
    fn naive_cost_scales_linearly() {
        let (params, _, pk, mut rng) = setup(64, 3);
        let mut one = OpCounters::new();
        naive_encrypt(&params, &pk, &[0.5], &mut rng, &mut one).unwrap();
        let mut many = OpCounters::new();
        let values = vec![0.25; 64];
        naive_encrypt(&params, &pk, &values, &mut rng, &mut many).unwrap();
        assert_eq!(many.encryptions, 64 * one.encryptions);
        assert_eq!(many.ntts, 64 * one.ntts);
        assert_eq!(many.gaussian_samples, 64 * one.gaussian_samples);
        assert_eq!(many.ring_muls, 64 * one.ring_muls);
    }

    #[test]
    fn batch_chunk_counts() {
        let (params, _, pk, mut rng) = setup(64, 4);
        let mut ctr = OpCounters::new();
        let slots = params.slot_count();
        let full = vec![0.5; slots];
        let cts = batch_encrypt(&params, &pk, &full, slots, &mut rng, &mut ctr).unwrap();
        assert_eq!(cts.len(), 1);
        let over = vec![0.5; slots + 1];
        let cts = batch_encrypt(&params, &pk, &over, slots, &mut rng, &mut ctr).unwrap();
        assert_eq!(cts.len(), 2);
    }

    #[test]
    fn batch_roundtrip() {
        let (params, sk, pk, mut rng) = setup(256, 5);
        let mut ctr = OpCounters::new();
        let values: Vec<f64> = (0..300).map(|i| ((i % 17) as f64 - 8.0) / 10.0).collect();
        let cts = batch_encrypt(&params, &pk, &values, params.slot_count(), &mut rng, &mut ctr)
            .unwrap();
        let mut recovered = Vec::new();
        for ct in &cts {
            let pt = decrypt(&params, &sk, ct, &mut ctr).unwrap();
            recovered.extend_from_slice(decode(&params, &pt).unwrap().values());
        }
        for (a, b) in values.iter().zip(&recovered) {
            assert!((a - b).abs() <= TOY_SLACK);
        }
    }

    #[test]
    fn batch_rejects_bad_batch_size() {
        let (params, _, pk, mut rng) = setup(64, 6);
        let mut ctr = OpCounters::new();
        assert!(batch_encrypt(&params, &pk, &[0.5], 0, &mut rng, &mut ctr).is_err());
        assert!(batch_encrypt(&params, &pk, &[0.5], 64, &mut rng, &mut ctr).is_err());
    }

    #[test]
    fn rache_power_entries() {
        let (params, sk, pk, mut rng) = setup(256, 7);
        let mut ctr = OpCounters::new();
        let cache = rache_precompute(&params, &pk, 2, 4, 4, 4, &mut rng, &mut ctr).unwrap();
        assert_eq!(cache.power_count(), 9);
        assert_eq!(cache.cache_size(), 9 + 4);
        for k in -4i32..=4 {
            let expected = 2.0f64.powi(k);
            let got = slot0(&params, &sk, cache.power(k).unwrap());
            assert!((got - expected).abs() <= TOY_SLACK, "2^{k}: {got}");
        }
    }

    #[test]
    fn rache_degenerate_cache_is_single_one() {
        let (params, sk, pk, mut rng) = setup(256, 8);
        let mut ctr = OpCounters::new();
        let cache = rache_precompute(&params, &pk, 2, 0, 0, 1, &mut rng, &mut ctr).unwrap();
        assert_eq!(cache.power_count(), 1);
        assert!((slot0(&params, &sk, cache.power(0).unwrap()) - 1.0).abs() <= TOY_SLACK);
    }

    #[test]
    fn rache_zero_uses_pool_only() {
        let (params, sk, pk, mut rng) = setup(256, 9);
        let mut ctr = OpCounters::new();
        let cache = rache_precompute(&params, &pk, 2, 4, 4, 4, &mut rng, &mut ctr).unwrap();
        let before = ctr;
        let ct = rache_encrypt_scalar(&params, &cache, 0.0, &mut rng, &mut ctr).unwrap();
        assert_eq!(ctr.since(&before).ct_additions, 1);
        assert!(slot0(&params, &sk, &ct).abs() <= TOY_SLACK);
    }

    #[test]
    fn rache_assembles_5_25() {
        let (params, sk, pk, mut rng) = setup(256, 10);
        let mut ctr = OpCounters::new();
        let cache = rache_precompute(&params, &pk, 2, 4, 4, 4, &mut rng, &mut ctr).unwrap();
        let before = ctr;
        let ct = rache_encrypt_scalar(&params, &cache, 5.25, &mut rng, &mut ctr).unwrap();
        // 5.25 = 4 + 1 + 0.25: three digits set, plus the zero-pool entry.
        assert_eq!(ctr.since(&before).ct_additions, 4);
        assert!((slot0(&params, &sk, &ct) - 5.25).abs() <= TOY_SLACK);
    }

    #[test]
    fn rache_addition_count_is_popcount_plus_one() {
        let (params, _, pk, mut rng) = setup(64, 11);
        let mut ctr = OpCounters::new();
        let cache = rache_precompute(&params, &pk, 2, 4, 8, 4, &mut rng, &mut ctr).unwrap();
        for v in [0.5f64, 1.5, 7.75, 3.0, 0.0078125] {
            let digits = (v * 256.0).round() as u64;
            let before = ctr;
            rache_encrypt_scalar(&params, &cache, v, &mut rng, &mut ctr).unwrap();
            let adds = ctr.since(&before).ct_additions;
            assert_eq!(adds, digits.count_ones() as u64 + 1, "value {v}");
            assert!(adds <= (4 + 8 + 1) + 1);
        }
    }

    #[test]
    fn rache_handles_negative_values() {
        let (params, sk, pk, mut rng) = setup(256, 12);
        let mut ctr = OpCounters::new();
        let cache = rache_precompute(&params, &pk, 2, 4, 8, 4, &mut rng, &mut ctr).unwrap();
        let ct = rache_encrypt_scalar(&params, &cache, -3.5, &mut rng, &mut ctr).unwrap();
        assert!((slot0(&params, &sk, &ct) + 3.5).abs() <= TOY_SLACK);
    }

    #[test]
    fn rache_quantizes_fraction() {
        let (params, sk, pk, mut rng) = setup(256, 13);
        let mut ctr = OpCounters::new();
        let cache = rache_precompute(&params, &pk, 2, 2, 8, 4, &mut rng, &mut ctr).unwrap();
        let v = 0.3; // not representable in 8 fraction bits
        let ct = rache_encrypt_scalar(&params, &cache, v, &mut rng, &mut ctr).unwrap();
        let got = slot0(&params, &sk, &ct);
        let quantized = (v * 256.0).round() / 256.0;
        assert!((got - quantized).abs() <= TOY_SLACK);
        assert!((got - v).abs() <= 1.0 / 256.0);
    }

    #[test]
    fn rache_rejects_out_of_range() {
        let (params, _, pk, mut rng) = setup(64, 14);
        let mut ctr = OpCounters::new();
        let cache = rache_precompute(&params, &pk, 2, 2, 4, 4, &mut rng, &mut ctr).unwrap();
        assert!(matches!(
            rache_encrypt_scalar(&params, &cache, 4.0, &mut rng, &mut ctr),
            Err(Error::RadixRange { .. })
        ));
        assert!(matches!(
            rache_encrypt_scalar(&params, &cache, -10.0, &mut rng, &mut ctr),
            Err(Error::RadixRange { .. })
        ));
    }

    #[test]
    fn rache_rejects_bad_config() {
        let (params, _, pk, mut rng) = setup(64, 15);
        let mut ctr = OpCounters::new();
        assert!(rache_precompute(&params, &pk, 1, 4, 4, 4, &mut rng, &mut ctr).is_err());
        assert!(rache_precompute(&params, &pk, 2, 30, 30, 4, &mut rng, &mut ctr).is_err());
        assert!(rache_precompute(&params, &pk, 2, 20, 4, 4, &mut rng, &mut ctr).is_err());
        assert!(rache_precompute(&params, &pk, 2, 4, 4, 0, &mut rng, &mut ctr).is_err());
    }

    #[test]
    fn rache_radix_three() {
        let (params, sk, pk, mut rng) = setup(256, 16);
        let mut ctr = OpCounters::new();
        let cache = rache_precompute(&params, &pk, 3, 3, 3, 4, &mut rng, &mut ctr).unwrap();
        // 7 = 2·3 + 1, digits (1, 2) in base 3.
        let before = ctr;
        let ct = rache_encrypt_scalar(&params, &cache, 7.0, &mut rng, &mut ctr).unwrap();
        assert_eq!(ctr.since(&before).ct_additions, 4); // pool + 1 + 2
        assert!((slot0(&params, &sk, &ct) - 7.0).abs() <= TOY_SLACK);
    }
}
