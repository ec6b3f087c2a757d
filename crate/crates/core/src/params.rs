//! Scheme parameters.
//!
//! A parameter set fixes the quotient ring Z_q[X]/(X^N + 1), the encoding
//! scale, and the two noise widths (base encryption and ciphertext
//! randomization). The modulus is a single NTT-friendly prime: the pipeline
//! multiplies a ciphertext by a plaintext at most once, so one ~59-bit prime
//! gives enough headroom for the squared scale without a modulus chain.

use std::sync::Arc;

use crate::encoding::FftPlans;
use crate::error::{Error, Result};
use crate::modops;
use crate::ring::NttTable;

/// Default ring degree.
pub const DEFAULT_RING_DEGREE: usize = 4096;

/// Default coefficient modulus: a 59-bit prime with q ≡ 1 (mod 8192), so a
/// primitive 2N-th root of unity exists for every power-of-two N ≤ 4096.
pub const DEFAULT_MODULUS: u64 = 576_460_752_303_415_297;

/// Default encoding scale Δ = 2^25.
pub const DEFAULT_SCALE_LOG2: u32 = 25;

/// Conventional lattice noise width for base encryption.
pub const DEFAULT_SIGMA: f64 = 3.2;

/// Default bound on the magnitude of any encoded slot value.
pub const DEFAULT_MAX_MESSAGE_MAGNITUDE: f64 = 64.0;

#[derive(Clone)]
pub struct SchemeParams {
    n: usize,
    q: u64,
    scale: f64,
    sigma_enc: f64,
    sigma_rand: f64,
    max_message_magnitude: f64,
    ntt: Arc<NttTable>,
    fft: Arc<FftPlans>,
}

impl std::fmt::Debug for SchemeParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SchemeParams")
            .field("n", &self.n)
            .field("q", &self.q)
            .field("scale", &self.scale)
            .field("sigma_enc", &self.sigma_enc)
            .field("sigma_rand", &self.sigma_rand)
            .field("max_message_magnitude", &self.max_message_magnitude)
            .finish()
    }
}

impl SchemeParams {
    pub fn new(
        n: usize,
        q: u64,
        scale: f64,
        sigma_enc: f64,
        sigma_rand: f64,
        max_message_magnitude: f64,
    ) -> Result<Self> {
        if !n.is_power_of_two() || n < 8 {
            return Err(Error::InvalidParams(format!(
                "ring degree {n} must be a power of two, at least 8"
            )));
        }
        if n > (1 << 20) {
            return Err(Error::InvalidParams(format!("ring degree {n} too large")));
        }
        if q >= 1 << 63 || !modops::is_prime_u64(q) {
            return Err(Error::InvalidParams(format!(
                "modulus {q} must be a prime below 2^63"
            )));
        }
        if (q - 1) % (2 * n as u64) != 0 {
            return Err(Error::InvalidParams(format!(
                "modulus {q} is not 1 mod 2N = {}",
                2 * n
            )));
        }
        if !(scale > 0.0) || !scale.is_finite() || scale.log2().fract() != 0.0 {
            return Err(Error::InvalidParams(format!(
                "scale {scale} must be a positive power of two"
            )));
        }
        if !(sigma_enc > 0.0) || !(sigma_rand > 0.0) {
            return Err(Error::InvalidParams(
                "noise widths must be positive".into(),
            ));
        }
        if !(max_message_magnitude > 0.0) {
            return Err(Error::InvalidParams(
                "message magnitude budget must be positive".into(),
            ));
        }
        // Headroom so a once-multiplied ciphertext still decrypts: after one
        // plaintext multiplication the scale is Δ² and coefficients reach
        // Δ² * |message|, which must stay clear of q/2.
        if scale * scale * max_message_magnitude >= q as f64 / 2.0 {
            return Err(Error::InvalidParams(format!(
                "scale² * magnitude budget = {} exceeds q/2 = {}",
                scale * scale * max_message_magnitude,
                q as f64 / 2.0
            )));
        }
        let ntt = Arc::new(NttTable::new(n, q)?);
        let fft = Arc::new(FftPlans::new(n));
        Ok(Self {
            n,
            q,
            scale,
            sigma_enc,
            sigma_rand,
            max_message_magnitude,
            ntt,
            fft,
        })
    }

    /// Reference parameter set: N = 4096, 59-bit prime, Δ = 2^25, σ = 3.2.
    pub fn default_set() -> Self {
        Self::new(
            DEFAULT_RING_DEGREE,
            DEFAULT_MODULUS,
            (1u64 << DEFAULT_SCALE_LOG2) as f64,
            DEFAULT_SIGMA,
            DEFAULT_SIGMA,
            DEFAULT_MAX_MESSAGE_MAGNITUDE,
        )
        .expect("reference parameter set is valid")
    }

    /// Reference set at a different ring degree. Degrees up to 4096 reuse the
    /// default prime; larger degrees search for a matching one.
    pub fn with_ring_degree(n: usize) -> Result<Self> {
        let q = if n <= DEFAULT_RING_DEGREE && (DEFAULT_MODULUS - 1) % (2 * n as u64) == 0 {
            DEFAULT_MODULUS
        } else {
            modops::find_ntt_prime(59, 2 * n as u64).ok_or_else(|| {
                Error::InvalidParams(format!("no 59-bit prime ≡ 1 mod {}", 2 * n))
            })?
        };
        Self::new(
            n,
            q,
            (1u64 << DEFAULT_SCALE_LOG2) as f64,
            DEFAULT_SIGMA,
            DEFAULT_SIGMA,
            DEFAULT_MAX_MESSAGE_MAGNITUDE,
        )
    }

    /// Override the randomization width, keeping everything else.
    pub fn with_sigma_rand(mut self, sigma_rand: f64) -> Result<Self> {
        if !(sigma_rand > 0.0) {
            return Err(Error::InvalidParams(
                "randomization width must be positive".into(),
            ));
        }
        self.sigma_rand = sigma_rand;
        Ok(self)
    }

    pub fn ring_degree(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn modulus_bits(&self) -> u32 {
        64 - self.q.leading_zeros()
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn scale_log2(&self) -> u32 {
        self.scale.log2() as u32
    }

    pub fn sigma_enc(&self) -> f64 {
        self.sigma_enc
    }

    pub fn sigma_rand(&self) -> f64 {
        self.sigma_rand
    }

    pub fn max_message_magnitude(&self) -> f64 {
        self.max_message_magnitude
    }

    pub fn slot_count(&self) -> usize {
        self.n / 2
    }

    pub(crate) fn ntt(&self) -> &NttTable {
        &self.ntt
    }

    pub(crate) fn fft(&self) -> &FftPlans {
        &self.fft
    }

    /// True when the other set describes the same quotient ring.
    pub fn same_ring(&self, other: &SchemeParams) -> bool {
        self.n == other.n && self.q == other.q
    }
}
