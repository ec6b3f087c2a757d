//! Binary persistence.
//!
//! All formats are little-endian with a 4-byte magic and a version byte:
//!
//! * `NMCT` ciphertext: magic, version, N (u64), q (u64), scale (f64), then
//!   the c0 and c1 coefficient arrays (N u64 each, coefficient domain).
//! * `NMPK` public key / `NMSK` secret key: same header with the parameter
//!   scale, then the key polynomial(s).
//! * `NMCE` cache entry: magic, version, base slot count (u64), base slots
//!   (f64 each), then an embedded `NMCT` ciphertext. The base plaintext is
//!   re-encoded on load.
//! * `NEMW` weight vector: magic, version, count (u64), count f64 values.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::time::Duration;

use crate::cache::{CacheEntry, CreationStats};
use crate::ckks::{Ciphertext, PublicKey, SecretKey};
use crate::encoding::{build_vandermonde, encode_vandermonde, SlotVector};
use crate::error::{Error, Result};
use crate::metrics::OpCounters;
use crate::params::SchemeParams;
use crate::ring::{Domain, RingElement};

pub const MAGIC_CIPHERTEXT: &[u8; 4] = b"NMCT";
pub const MAGIC_PUBLIC_KEY: &[u8; 4] = b"NMPK";
pub const MAGIC_SECRET_KEY: &[u8; 4] = b"NMSK";
pub const MAGIC_CACHE_ENTRY: &[u8; 4] = b"NMCE";
pub const MAGIC_WEIGHTS: &[u8; 4] = b"NEMW";

pub const FORMAT_VERSION: u8 = 1;

fn write_header(w: &mut impl Write, magic: &[u8; 4], params: &SchemeParams, scale: f64) -> Result<()> {
    w.write_all(magic)?;
    w.write_all(&[FORMAT_VERSION])?;
    w.write_all(&(params.ring_degree() as u64).to_le_bytes())?;
    w.write_all(&params.modulus().to_le_bytes())?;
    w.write_all(&scale.to_le_bytes())?;
    Ok(())
}

fn read_header(r: &mut impl Read, magic: &[u8; 4], params: &SchemeParams) -> Result<f64> {
    let mut got_magic = [0u8; 4];
    r.read_exact(&mut got_magic)
        .map_err(|_| Error::CorruptFile("missing magic".into()))?;
    if &got_magic != magic {
        return Err(Error::CorruptFile(format!(
            "magic mismatch: expected {:?}, got {:?}",
            std::str::from_utf8(magic).unwrap_or("?"),
            String::from_utf8_lossy(&got_magic)
        )));
    }
    let version = read_u8(r)?;
    if version != FORMAT_VERSION {
        return Err(Error::CorruptFile(format!("unsupported version {version}")));
    }
    let n = read_u64(r)? as usize;
    let q = read_u64(r)?;
    if n != params.ring_degree() || q != params.modulus() {
        return Err(Error::ParamMismatch {
            n_left: n,
            q_left: q,
            n_right: params.ring_degree(),
            q_right: params.modulus(),
        });
    }
    read_f64(r)
}

fn read_u8(r: &mut impl Read) -> Result<u8> {
    let mut b = [0u8; 1];
    r.read_exact(&mut b)
        .map_err(|_| Error::CorruptFile("truncated".into()))?;
    Ok(b[0])
}

fn read_u64(r: &mut impl Read) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)
        .map_err(|_| Error::CorruptFile("truncated".into()))?;
    Ok(u64::from_le_bytes(b))
}

fn read_f64(r: &mut impl Read) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)
        .map_err(|_| Error::CorruptFile("truncated".into()))?;
    Ok(f64::from_le_bytes(b))
}

fn write_poly(w: &mut impl Write, poly: &RingElement) -> Result<()> {
    for &c in poly.coeffs() {
        w.write_all(&c.to_le_bytes())?;
    }
    Ok(())
}

fn read_poly(r: &mut impl Read, params: &SchemeParams) -> Result<RingElement> {
    let n = params.ring_degree();
    let mut coeffs = vec![0u64; n];
    for c in coeffs.iter_mut() {
        *c = read_u64(r)?;
    }
    RingElement::from_coeffs(params, coeffs, Domain::Coefficient)
        .map_err(|e| Error::CorruptFile(format!("bad coefficients: {e}")))
}

pub fn write_ciphertext(w: &mut impl Write, params: &SchemeParams, ct: &Ciphertext) -> Result<()> {
    write_header(w, MAGIC_CIPHERTEXT, params, ct.scale())?;
    let mut scratch = OpCounters::new();
    let c0 = ct.c0().clone().into_domain(Domain::Coefficient, params, &mut scratch)?;
    let c1 = ct.c1().clone().into_domain(Domain::Coefficient, params, &mut scratch)?;
    write_poly(w, &c0)?;
    write_poly(w, &c1)?;
    Ok(())
}

pub fn read_ciphertext(r: &mut impl Read, params: &SchemeParams) -> Result<Ciphertext> {
    let scale = read_header(r, MAGIC_CIPHERTEXT, params)?;
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::CorruptFile(format!("bad scale {scale}")));
    }
    let c0 = read_poly(r, params)?;
    let c1 = read_poly(r, params)?;
    let depth = if scale == params.scale() { 0 } else { 1 };
    Ok(Ciphertext::from_parts(c0, c1, scale, depth))
}

pub fn write_public_key(w: &mut impl Write, params: &SchemeParams, pk: &PublicKey) -> Result<()> {
    write_header(w, MAGIC_PUBLIC_KEY, params, params.scale())?;
    write_poly(w, pk.pk0())?;
    write_poly(w, pk.pk1())
}

pub fn read_public_key(r: &mut impl Read, params: &SchemeParams) -> Result<PublicKey> {
    read_header(r, MAGIC_PUBLIC_KEY, params)?;
    let pk0 = read_poly(r, params)?;
    let pk1 = read_poly(r, params)?;
    PublicKey::from_polys(params, pk0, pk1)
}

pub fn write_secret_key(w: &mut impl Write, params: &SchemeParams, sk: &SecretKey) -> Result<()> {
    write_header(w, MAGIC_SECRET_KEY, params, params.scale())?;
    write_poly(w, sk.poly())
}

pub fn read_secret_key(r: &mut impl Read, params: &SchemeParams) -> Result<SecretKey> {
    read_header(r, MAGIC_SECRET_KEY, params)?;
    let s = read_poly(r, params)?;
    SecretKey::from_poly(params, s)
}

pub fn write_cache_entry(w: &mut impl Write, params: &SchemeParams, entry: &CacheEntry) -> Result<()> {
    w.write_all(MAGIC_CACHE_ENTRY)?;
    w.write_all(&[FORMAT_VERSION])?;
    let base = entry.base_slots().values();
    w.write_all(&(base.len() as u64).to_le_bytes())?;
    for &v in base {
        w.write_all(&v.to_le_bytes())?;
    }
    write_ciphertext(w, params, entry.base_ciphertext())
}

/// Load a cache entry; the base plaintext is re-encoded from the stored base
/// slots, and creation stats are zeroed (the cost was paid elsewhere).
pub fn read_cache_entry(r: &mut impl Read, params: &SchemeParams) -> Result<CacheEntry> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)
        .map_err(|_| Error::CorruptFile("missing magic".into()))?;
    if &magic != MAGIC_CACHE_ENTRY {
        return Err(Error::CorruptFile("magic mismatch for cache entry".into()));
    }
    let version = read_u8(r)?;
    if version != FORMAT_VERSION {
        return Err(Error::CorruptFile(format!("unsupported version {version}")));
    }
    let count = read_u64(r)? as usize;
    if count > params.slot_count() {
        return Err(Error::CorruptFile(format!(
            "base vector of {count} slots exceeds capacity"
        )));
    }
    let mut base = vec![0.0f64; count];
    for v in base.iter_mut() {
        *v = read_f64(r)?;
    }
    let base_ciphertext = read_ciphertext(r, params)?;
    let base_slots = SlotVector::new(params, base)
        .map_err(|e| Error::CorruptFile(format!("bad base slots: {e}")))?;
    for (i, &b) in base_slots.values().iter().enumerate() {
        if b == 0.0 {
            return Err(Error::CorruptFile(format!("zero base slot at {i}")));
        }
    }
    let mut scratch = OpCounters::new();
    let sys = build_vandermonde(params, base_slots.len().next_power_of_two())?;
    let base_plaintext =
        encode_vandermonde(params, &base_slots, &sys, params.scale(), &mut scratch)?;
    CacheEntry::from_ciphertext(
        params,
        base_slots,
        base_plaintext,
        base_ciphertext,
        CreationStats {
            wall: Duration::ZERO,
            counters: OpCounters::new(),
        },
    )
}

pub fn write_weights(w: &mut impl Write, weights: &[f64]) -> Result<()> {
    w.write_all(MAGIC_WEIGHTS)?;
    w.write_all(&[FORMAT_VERSION])?;
    w.write_all(&(weights.len() as u64).to_le_bytes())?;
    for &v in weights {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_weights(r: &mut impl Read) -> Result<Vec<f64>> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)
        .map_err(|_| Error::CorruptFile("missing magic".into()))?;
    if &magic != MAGIC_WEIGHTS {
        return Err(Error::CorruptFile(format!(
            "magic mismatch: expected NEMW, got {:?}",
            String::from_utf8_lossy(&magic)
        )));
    }
    let version = read_u8(r)?;
    if version != FORMAT_VERSION {
        return Err(Error::CorruptFile(format!("unsupported version {version}")));
    }
    let count = read_u64(r)? as usize;
    let mut weights = vec![0.0f64; count];
    for v in weights.iter_mut() {
        *v = read_f64(r)?;
    }
    Ok(weights)
}

pub fn save_weights(path: &Path, weights: &[f64]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_weights(&mut w, weights)?;
    w.flush()?;
    Ok(())
}

pub fn load_weights(path: &Path) -> Result<Vec<f64>> {
    let mut r = BufReader::new(File::open(path)?);
    read_weights(&mut r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cache::{precompute, SelectionPolicy};
    use crate::ckks::{decrypt, encrypt, keygen};
    use crate::encoding::{decode, encode_fast};
    use crate::reconstruct;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn params() -> SchemeParams {
        SchemeParams::with_ring_degree(64).unwrap()
    }

    #[test]
    fn ciphertext_roundtrip() {
        let params = params();
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        let mut ctr = OpCounters::new();
        let (_, pk) = keygen(&params, &mut rng, &mut ctr).unwrap();
        let m = SlotVector::new(&params, vec![0.5; 32]).unwrap();
        let pt = encode_fast(&params, &m, params.scale(), &mut ctr).unwrap();
        let ct = encrypt(&params, &pk, &pt, &mut rng, &mut ctr).unwrap();
        let mut buf = Vec::new();
        write_ciphertext(&mut buf, &params, &ct).unwrap();
        let back = read_ciphertext(&mut &buf[..], &params).unwrap();
        assert_eq!(ct, back);
        assert_eq!(back.depth(), 0);
    }

    #[test]
    fn depth_one_scale_survives() {
        let params = params();
        let ct = Ciphertext::zero(&params, params.scale() * params.scale(), 1);
        let mut buf = Vec::new();
        write_ciphertext(&mut buf, &params, &ct).unwrap();
        let back = read_ciphertext(&mut &buf[..], &params).unwrap();
        assert_eq!(back.depth(), 1);
        assert_eq!(back.scale(), params.scale() * params.scale());
    }

    #[test]
    fn key_roundtrips() {
        let params = params();
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        let mut ctr = OpCounters::new();
        let (sk, pk) = keygen(&params, &mut rng, &mut ctr).unwrap();

        let mut buf = Vec::new();
        write_secret_key(&mut buf, &params, &sk).unwrap();
        let sk2 = read_secret_key(&mut &buf[..], &params).unwrap();
        assert_eq!(sk.poly(), sk2.poly());

        let mut buf = Vec::new();
        write_public_key(&mut buf, &params, &pk).unwrap();
        let pk2 = read_public_key(&mut &buf[..], &params).unwrap();
        assert_eq!(pk.pk0(), pk2.pk0());
        assert_eq!(pk.pk1(), pk2.pk1());
    }

    #[test]
    fn cache_entry_roundtrip_still_reconstructs() {
        let params = params();
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let mut ctr = OpCounters::new();
        let (sk, pk) = keygen(&params, &mut rng, &mut ctr).unwrap();
        let candidates = SlotVector::new(&params, vec![1.0; 16]).unwrap();
        let entry = precompute(
            &params,
            &candidates,
            &SelectionPolicy::AllOnes,
            &pk,
            &mut rng,
            &mut ctr,
        )
        .unwrap();

        let mut buf = Vec::new();
        write_cache_entry(&mut buf, &params, &entry).unwrap();
        let loaded = read_cache_entry(&mut &buf[..], &params).unwrap();
        assert_eq!(loaded.dim(), 16);
        assert_eq!(loaded.base_ciphertext(), entry.base_ciphertext());
        assert_eq!(loaded.base_plaintext().poly(), entry.base_plaintext().poly());

        let m = SlotVector::new(&params, vec![0.25; 16]).unwrap();
        let ct = reconstruct(&params, &loaded, &m, &mut ctr).unwrap();
        let out = decode(&params, &decrypt(&params, &sk, &ct, &mut ctr).unwrap()).unwrap();
        for &v in &out.values()[..16] {
            assert!((v - 0.25).abs() <= 1e-2);
        }
    }

    #[test]
    fn weights_roundtrip_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.nemw");
        let weights = vec![1.0, -0.5, 0.25];
        save_weights(&path, &weights).unwrap();
        let back = load_weights(&path).unwrap();
        assert_eq!(weights, back);
    }

    #[test]
    fn truncated_weights_rejected() {
        let mut buf = Vec::new();
        write_weights(&mut buf, &[1.0, 2.0, 3.0]).unwrap();
        buf.truncate(buf.len() - 4);
        assert!(matches!(
            read_weights(&mut &buf[..]),
            Err(Error::CorruptFile(_))
        ));
    }

    #[test]
    fn magic_mismatch_rejected() {
        let mut buf = Vec::new();
        write_weights(&mut buf, &[1.0]).unwrap();
        buf[0] = b'X';
        assert!(matches!(
            read_weights(&mut &buf[..]),
            Err(Error::CorruptFile(_))
        ));

        let params = params();
        let ct = Ciphertext::zero(&params, params.scale(), 0);
        let mut buf = Vec::new();
        write_ciphertext(&mut buf, &params, &ct).unwrap();
        assert!(read_public_key(&mut &buf[..], &params).is_err());
    }

    #[test]
    fn foreign_params_rejected() {
        let p64 = params();
        let p128 = SchemeParams::with_ring_degree(128).unwrap();
        let ct = Ciphertext::zero(&p64, p64.scale(), 0);
        let mut buf = Vec::new();
        write_ciphertext(&mut buf, &p64, &ct).unwrap();
        assert!(matches!(
            read_ciphertext(&mut &buf[..], &p128),
            Err(Error::ParamMismatch { .. })
        ));
    }

    #[test]
    fn unreduced_coefficients_rejected() {
        let params = params();
        let ct = Ciphertext::zero(&params, params.scale(), 0);
        let mut buf = Vec::new();
        write_ciphertext(&mut buf, &params, &ct).unwrap();
        // Overwrite the first coefficient with u64::MAX.
        let coeff_start = 4 + 1 + 8 + 8 + 8;
        buf[coeff_start..coeff_start + 8].copy_from_slice(&u64::MAX.to_le_bytes());
        assert!(matches!(
            read_ciphertext(&mut &buf[..], &params),
            Err(Error::CorruptFile(_))
        ));
    }
}
