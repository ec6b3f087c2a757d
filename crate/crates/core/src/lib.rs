//! A self-contained CKKS-style homomorphic encryption library built around
//! cached batch encryption: pay for one public-key encryption of a base
//! vector up front, then produce ciphertexts for arbitrary batches with a
//! scale-and-multiply reconstruction plus Gaussian re-randomization.
//!
//! The crate also ships the comparison encryptors (per-value, packed-batch,
//! and radix-cache), a federated-averaging harness over encrypted weights,
//! and deterministic operation counters so cost claims can be asserted
//! exactly in tests and benchmarks.

pub mod baselines;
pub mod cache;
pub mod ckks;
pub mod encoding;
pub mod error;
pub mod fl;
pub mod io;
pub mod metrics;
pub mod modops;
pub mod params;
pub mod ring;
pub mod sampling;
pub mod tolerances;

pub use cache::{
    chunk_and_encrypt, nemesis_encrypt, precompute, randomize, reconstruct, CacheEntry,
    SelectionPolicy,
};
pub use ckks::{
    add_ct_ct, add_ct_pt, decrypt, encrypt, keygen, mul_ct_pt, Ciphertext, PublicKey, SecretKey,
};
pub use encoding::{
    build_vandermonde, decode, encode_fast, encode_vandermonde, Plaintext, SlotVector,
    VandermondeSystem,
};
pub use error::{Error, Result};
pub use metrics::OpCounters;
pub use params::SchemeParams;
pub use ring::{Domain, RingElement};
