//! Cached batch encryption.
//!
//! One public-key encryption of a fixed base vector is paid up front; every
//! batch after that is produced without touching the public key or the
//! encryption samplers:
//!
//! 1. precompute — select a base vector b (no zero entries), encode it with
//!    the explicit evaluation-matrix path, encrypt it once.
//! 2. reconstruct — scale the target batch slot-wise by 1/b, encode the
//!    scaled batch, and multiply it into the cached ciphertext with ⊛.
//! 3. randomize — add a rounded-Gaussian polynomial with ⊕ so repeated
//!    encryptions of the same batch are distinct ciphertexts.
//!
//! The cached ciphertext's components are kept in the evaluation domain with
//! Shoup companions, so a reconstruction costs one forward transform, two
//! pointwise products, and two inverse transforms.

use std::time::{Duration, Instant};

use rand::Rng;

use crate::ckks::{add_ct_pt, encrypt, Ciphertext, PublicKey};
use crate::encoding::{build_vandermonde, encode_fast, encode_vandermonde, Plaintext, SlotVector};
use crate::error::{Error, Result};
use crate::metrics::OpCounters;
use crate::params::SchemeParams;
use crate::ring::{Domain, RingElement, ShoupPoly};
use crate::sampling::sample_gaussian;

/// How the base vector is chosen.
#[derive(Debug, Clone)]
pub enum SelectionPolicy {
    /// All slots equal to one: scaling is the identity.
    AllOnes,
    /// A caller-supplied base vector.
    FixedVector(Vec<f64>),
    /// The k most frequently used values from a usage histogram.
    FrequencyTopK { histogram: Vec<(f64, u64)>, k: usize },
}

impl SelectionPolicy {
    /// The base vector this policy selects for the given candidates.
    pub fn select(&self, candidates: &SlotVector) -> Result<Vec<f64>> {
        let base = match self {
            SelectionPolicy::AllOnes => vec![1.0; candidates.len().max(1)],
            SelectionPolicy::FixedVector(v) => v.clone(),
            SelectionPolicy::FrequencyTopK { histogram, k } => {
                if *k == 0 {
                    return Err(Error::Config("frequency policy needs k >= 1".into()));
                }
                let mut sorted = histogram.clone();
                sorted.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.total_cmp(&b.0)));
                sorted.truncate(*k);
                if sorted.len() < *k {
                    return Err(Error::Config(format!(
                        "histogram has {} entries, need {k}",
                        sorted.len()
                    )));
                }
                sorted.into_iter().map(|(v, _)| v).collect()
            }
        };
        for (i, &v) in base.iter().enumerate() {
            if v == 0.0 || !v.is_finite() {
                return Err(Error::ZeroBaseSlot { index: i });
            }
        }
        Ok(base)
    }
}

/// Cost record for one precomputation.
#[derive(Debug, Clone, Copy)]
pub struct CreationStats {
    pub wall: Duration,
    pub counters: OpCounters,
}

/// A reusable encrypted base vector.
pub struct CacheEntry {
    base_slots: SlotVector,
    base_plaintext: Plaintext,
    base_ciphertext: Ciphertext,
    c0_eval: ShoupPoly,
    c1_eval: ShoupPoly,
    creation: CreationStats,
}

impl CacheEntry {
    pub fn base_slots(&self) -> &SlotVector {
        &self.base_slots
    }

    pub fn base_plaintext(&self) -> &Plaintext {
        &self.base_plaintext
    }

    pub fn base_ciphertext(&self) -> &Ciphertext {
        &self.base_ciphertext
    }

    /// Batch capacity of this entry.
    pub fn dim(&self) -> usize {
        self.base_slots.len()
    }

    pub fn creation_stats(&self) -> &CreationStats {
        &self.creation
    }

    pub(crate) fn from_ciphertext(
        params: &SchemeParams,
        base_slots: SlotVector,
        base_plaintext: Plaintext,
        base_ciphertext: Ciphertext,
        creation: CreationStats,
    ) -> Result<Self> {
        let mut scratch = OpCounters::new();
        let c0_eval = ShoupPoly::from_coefficient(base_ciphertext.c0(), params, &mut scratch)?;
        let c1_eval = ShoupPoly::from_coefficient(base_ciphertext.c1(), params, &mut scratch)?;
        Ok(Self {
            base_slots,
            base_plaintext,
            base_ciphertext,
            c0_eval,
            c1_eval,
            creation,
        })
    }
}

/// Build a cache entry: select, encode (explicit path), encrypt once.
pub fn precompute<R: Rng>(
    params: &SchemeParams,
    candidates: &SlotVector,
    policy: &SelectionPolicy,
    pk: &PublicKey,
    rng: &mut R,
    ctr: &mut OpCounters,
) -> Result<CacheEntry> {
    let started = Instant::now();
    let before = *ctr;

    let base = policy.select(candidates)?;
    let base_slots = SlotVector::new(params, base)?;
    // The evaluation system wants a power-of-two dimension; a short base
    // vector is padded with zero slots at encode time, which stay unused.
    let sys_dim = base_slots.len().next_power_of_two();
    let sys = build_vandermonde(params, sys_dim)?;
    let base_plaintext = encode_vandermonde(params, &base_slots, &sys, params.scale(), ctr)?;
    let base_ciphertext = encrypt(params, pk, &base_plaintext, rng, ctr)?;
    ctr.precomputes += 1;

    // Converting the cached components is part of the precomputation bill.
    let entry_ctr_snapshot = *ctr;
    let mut conv = OpCounters::new();
    let c0_eval = ShoupPoly::from_coefficient(base_ciphertext.c0(), params, &mut conv)?;
    let c1_eval = ShoupPoly::from_coefficient(base_ciphertext.c1(), params, &mut conv)?;
    *ctr += conv;

    let creation = CreationStats {
        wall: started.elapsed(),
        counters: entry_ctr_snapshot.since(&before) + conv,
    };
    Ok(CacheEntry {
        base_slots,
        base_plaintext,
        base_ciphertext,
        c0_eval,
        c1_eval,
        creation,
    })
}

/// Produce a ciphertext for `m` from the cache: scale slot-wise by the base,
/// encode, apply ⊛. No public-key work, no encryption sampling.
pub fn reconstruct(
    params: &SchemeParams,
    cache: &CacheEntry,
    m: &SlotVector,
    ctr: &mut OpCounters,
) -> Result<Ciphertext> {
    if cache.base_ciphertext.c0().ring_degree() != params.ring_degree()
        || cache.base_ciphertext.c0().modulus() != params.modulus()
    {
        return Err(Error::ParamMismatch {
            n_left: cache.base_ciphertext.c0().ring_degree(),
            q_left: cache.base_ciphertext.c0().modulus(),
            n_right: params.ring_degree(),
            q_right: params.modulus(),
        });
    }
    if m.len() > cache.dim() {
        return Err(Error::TooManySlots {
            got: m.len(),
            max: cache.dim(),
        });
    }
    let budget = params.max_message_magnitude();
    let base = cache.base_slots.values();
    let mut scaled = Vec::with_capacity(m.len());
    for (i, &v) in m.values().iter().enumerate() {
        let s = v / base[i];
        if !s.is_finite() || s.abs() > budget {
            return Err(Error::MagnitudeOverflow {
                value: s,
                budget,
            });
        }
        scaled.push(s);
    }
    let scaled = SlotVector::new(params, scaled)?;
    let pt = encode_fast(params, &scaled, params.scale(), ctr)?;

    let p_eval = pt
        .poly()
        .clone()
        .into_domain(Domain::Evaluation, params, ctr)?;
    let mut c0 = cache.c0_eval.pointwise(p_eval.coeffs());
    ctr.ring_muls += 1;
    params.ntt().inverse_inplace(&mut c0);
    ctr.ntts += 1;
    let mut c1 = cache.c1_eval.pointwise(p_eval.coeffs());
    ctr.ring_muls += 1;
    params.ntt().inverse_inplace(&mut c1);
    ctr.ntts += 1;
    ctr.reconstructions += 1;

    let q = params.modulus();
    Ok(Ciphertext::from_parts(
        RingElement::from_raw(c0, Domain::Coefficient, q),
        RingElement::from_raw(c1, Domain::Coefficient, q),
        params.scale() * params.scale(),
        1,
    ))
}

/// Add a fresh rounded-Gaussian polynomial into the ciphertext with ⊕.
pub fn randomize<R: Rng>(
    params: &SchemeParams,
    ct: &Ciphertext,
    sigma_rand: f64,
    rng: &mut R,
    ctr: &mut OpCounters,
) -> Result<Ciphertext> {
    let noise = sample_gaussian(params, sigma_rand, rng, ctr)?;
    let out = add_ct_pt(params, ct, &noise, ctr)?;
    ctr.randomizations += 1;
    Ok(out)
}

/// The batch-encryption entry point: reconstruct, then randomize.
pub fn nemesis_encrypt<R: Rng>(
    params: &SchemeParams,
    cache: &CacheEntry,
    m: &SlotVector,
    sigma_rand: f64,
    rng: &mut R,
    ctr: &mut OpCounters,
) -> Result<Ciphertext> {
    let ct = reconstruct(params, cache, m, ctr)?;
    randomize(params, &ct, sigma_rand, rng, ctr)
}

/// Split a long weight vector into batches and encrypt each one from the
/// cache. The final chunk is zero-padded; decoding and concatenating the
/// first `weights.len()` slots recovers the input.
pub fn chunk_and_encrypt<R: Rng>(
    params: &SchemeParams,
    cache: &CacheEntry,
    weights: &[f64],
    batch_size: usize,
    sigma_rand: f64,
    rng: &mut R,
    ctr: &mut OpCounters,
) -> Result<Vec<Ciphertext>> {
    if batch_size == 0 || batch_size > params.slot_count() {
        return Err(Error::BatchSizeOutOfRange {
            got: batch_size,
            max: params.slot_count(),
        });
    }
    if batch_size > cache.dim() {
        return Err(Error::BatchSizeOutOfRange {
            got: batch_size,
            max: cache.dim(),
        });
    }
    let mut out = Vec::with_capacity(weights.len().div_ceil(batch_size));
    for chunk in weights.chunks(batch_size) {
        let mut padded = chunk.to_vec();
        padded.resize(batch_size, 0.0);
        let m = SlotVector::new(params, padded)?;
        out.push(nemesis_encrypt(params, cache, &m, sigma_rand, rng, ctr)?);
    }
    Ok(out)
}
