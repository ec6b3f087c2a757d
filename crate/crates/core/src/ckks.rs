//! RLWE keys, public-key encryption, and the homomorphic operators the
//! pipeline needs: ciphertext+ciphertext addition, ciphertext+polynomial
//! addition (⊕), and ciphertext-by-plaintext multiplication (⊛).
//!
//! A ciphertext is (c0, c1) with c0 + c1·s ≈ message polynomial. There is no
//! rescaling: one multiplication takes the scale from Δ to Δ², decoding
//! divides it back out, and the modulus is sized so that is always safe.
//! Ciphertexts at the API boundary are in the coefficient domain; operations
//! move through the evaluation domain internally and count every transform.

use rand::Rng;

use crate::encoding::Plaintext;
use crate::error::{Error, Result};
use crate::metrics::OpCounters;
use crate::modops::add_mod;
use crate::params::SchemeParams;
use crate::ring::{Domain, RingElement, ShoupPoly};
use crate::sampling::{sample_gaussian, sample_ternary, sample_uniform};

/// Ternary secret, with its evaluation image cached for decryption.
pub struct SecretKey {
    s: RingElement,
    s_eval: ShoupPoly,
}

impl SecretKey {
    pub fn poly(&self) -> &RingElement {
        &self.s
    }

    pub(crate) fn from_poly(params: &SchemeParams, s: RingElement) -> Result<Self> {
        let mut scratch = OpCounters::new();
        let s_eval = ShoupPoly::from_coefficient(&s, params, &mut scratch)?;
        Ok(Self { s, s_eval })
    }
}

/// Key pair component (pk0, pk1) with pk0 + pk1·s equal to a small error.
pub struct PublicKey {
    pk0: RingElement,
    pk1: RingElement,
    pk0_eval: ShoupPoly,
    pk1_eval: ShoupPoly,
}

impl PublicKey {
    pub fn pk0(&self) -> &RingElement {
        &self.pk0
    }

    pub fn pk1(&self) -> &RingElement {
        &self.pk1
    }

    pub(crate) fn from_polys(
        params: &SchemeParams,
        pk0: RingElement,
        pk1: RingElement,
    ) -> Result<Self> {
        let mut scratch = OpCounters::new();
        let pk0_eval = ShoupPoly::from_coefficient(&pk0, params, &mut scratch)?;
        let pk1_eval = ShoupPoly::from_coefficient(&pk1, params, &mut scratch)?;
        Ok(Self {
            pk0,
            pk1,
            pk0_eval,
            pk1_eval,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ciphertext {
    c0: RingElement,
    c1: RingElement,
    scale: f64,
    depth: u8,
}

impl Ciphertext {
    pub fn c0(&self) -> &RingElement {
        &self.c0
    }

    pub fn c1(&self) -> &RingElement {
        &self.c1
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// 0 for a fresh ciphertext, 1 once multiplied by a plaintext.
    pub fn depth(&self) -> u8 {
        self.depth
    }

    pub(crate) fn from_parts(c0: RingElement, c1: RingElement, scale: f64, depth: u8) -> Self {
        debug_assert_eq!(c0.ring_degree(), c1.ring_degree());
        debug_assert_eq!(c0.modulus(), c1.modulus());
        Self { c0, c1, scale, depth }
    }

    /// The additive identity at the given scale.
    pub fn zero(params: &SchemeParams, scale: f64, depth: u8) -> Self {
        Self {
            c0: RingElement::zero(params, Domain::Coefficient),
            c1: RingElement::zero(params, Domain::Coefficient),
            scale,
            depth,
        }
    }

    pub fn negate(&self) -> Ciphertext {
        Ciphertext {
            c0: self.c0.neg(),
            c1: self.c1.neg(),
            scale: self.scale,
            depth: self.depth,
        }
    }
}

/// Statistical bound on the keygen residual: 8σ covers the maximum of N
/// rounded-Gaussian draws with overwhelming margin.
fn keygen_noise_bound(params: &SchemeParams) -> u64 {
    (8.0 * params.sigma_enc()).ceil() as u64 + 1
}

pub fn keygen<R: Rng>(
    params: &SchemeParams,
    rng: &mut R,
    ctr: &mut OpCounters,
) -> Result<(SecretKey, PublicKey)> {
    let s = sample_ternary(params, rng, ctr);
    let a = sample_uniform(params, rng, ctr);
    let e = sample_gaussian(params, params.sigma_enc(), rng, ctr)?;

    let a_s = a
        .mul(&s, params, ctr)?
        .to_coefficient(params, ctr)?;
    let pk0 = e.sub(&a_s)?;
    let pk1 = a;

    let sk = SecretKey::from_poly(params, s)?;
    let pk = PublicKey::from_polys(params, pk0, pk1)?;

    // Decrypt-of-zero residual check: pk0 + pk1·s recomputed from the
    // finished keys must be the small error polynomial.
    let residual = pk
        .pk1
        .mul(sk.poly(), params, ctr)?
        .to_coefficient(params, ctr)?
        .add(&pk.pk0)?;
    if residual.inf_norm_centered() > keygen_noise_bound(params) {
        return Err(Error::InvalidParams(
            "keygen residual exceeds the noise bound".into(),
        ));
    }
    Ok((sk, pk))
}

/// Public-key encryption of an encoded plaintext at the base scale.
pub fn encrypt<R: Rng>(
    params: &SchemeParams,
    pk: &PublicKey,
    pt: &Plaintext,
    rng: &mut R,
    ctr: &mut OpCounters,
) -> Result<Ciphertext> {
    if pt.scale() != params.scale() {
        return Err(Error::ScaleMismatch {
            left: pt.scale(),
            right: params.scale(),
        });
    }
    let q = params.modulus();
    let u = sample_ternary(params, rng, ctr);
    let e0 = sample_gaussian(params, params.sigma_enc(), rng, ctr)?;
    let e1 = sample_gaussian(params, params.sigma_enc(), rng, ctr)?;

    let u_eval = u.to_evaluation(params, ctr)?;

    let mut c0 = pk.pk0_eval.pointwise(u_eval.coeffs());
    ctr.ring_muls += 1;
    ctr.pk_ring_muls += 1;
    params.ntt().inverse_inplace(&mut c0);
    ctr.ntts += 1;
    for ((c, &e), &m) in c0.iter_mut().zip(e0.coeffs()).zip(pt.poly().coeffs()) {
        *c = add_mod(add_mod(*c, e, q), m, q);
    }

    let mut c1 = pk.pk1_eval.pointwise(u_eval.coeffs());
    ctr.ring_muls += 1;
    ctr.pk_ring_muls += 1;
    params.ntt().inverse_inplace(&mut c1);
    ctr.ntts += 1;
    for (c, &e) in c1.iter_mut().zip(e1.coeffs()) {
        *c = add_mod(*c, e, q);
    }

    ctr.encryptions += 1;
    Ok(Ciphertext {
        c0: RingElement::from_raw(c0, Domain::Coefficient, q),
        c1: RingElement::from_raw(c1, Domain::Coefficient, q),
        scale: pt.scale(),
        depth: 0,
    })
}

/// c0 + c1·s, carrying the ciphertext's scale through to the plaintext.
pub fn decrypt(
    params: &SchemeParams,
    sk: &SecretKey,
    ct: &Ciphertext,
    ctr: &mut OpCounters,
) -> Result<Plaintext> {
    let c1_eval = ct.c1.clone().into_domain(Domain::Evaluation, params, ctr)?;
    let mut prod = sk.s_eval.pointwise(c1_eval.coeffs());
    ctr.ring_muls += 1;
    params.ntt().inverse_inplace(&mut prod);
    ctr.ntts += 1;
    let c1s = RingElement::from_raw(prod, Domain::Coefficient, params.modulus());
    let m = ct
        .c0
        .clone()
        .into_domain(Domain::Coefficient, params, ctr)?
        .add(&c1s)?;
    Ok(Plaintext::new(m, ct.scale, params.slot_count()))
}

/// Component-wise ciphertext addition; decrypts to the slot-wise sum.
pub fn add_ct_ct(a: &Ciphertext, b: &Ciphertext, ctr: &mut OpCounters) -> Result<Ciphertext> {
    if a.scale != b.scale {
        return Err(Error::ScaleMismatch {
            left: a.scale,
            right: b.scale,
        });
    }
    if a.depth != b.depth {
        return Err(Error::DepthMismatch {
            left: a.depth,
            right: b.depth,
        });
    }
    let ct = Ciphertext {
        c0: a.c0.add(&b.c0)?,
        c1: a.c1.add(&b.c1)?,
        scale: a.scale,
        depth: a.depth,
    };
    ctr.ct_additions += 1;
    Ok(ct)
}

/// The ⊕ operator: add a raw polynomial into c0 only, leaving c1 untouched.
/// Decryption picks up the polynomial exactly; the scale does not move.
pub fn add_ct_pt(
    params: &SchemeParams,
    ct: &Ciphertext,
    p: &RingElement,
    ctr: &mut OpCounters,
) -> Result<Ciphertext> {
    let p = p
        .clone()
        .into_domain(ct.c0.domain(), params, ctr)?;
    let ct = Ciphertext {
        c0: ct.c0.add(&p)?,
        c1: ct.c1.clone(),
        scale: ct.scale,
        depth: ct.depth,
    };
    ctr.pt_additions += 1;
    Ok(ct)
}

/// The ⊛ operator: multiply both components by an encoded plaintext. The
/// result decodes to the slot-wise product at scale Δ² and cannot be
/// multiplied again.
pub fn mul_ct_pt(
    params: &SchemeParams,
    ct: &Ciphertext,
    pt: &Plaintext,
    ctr: &mut OpCounters,
) -> Result<Ciphertext> {
    if ct.depth != 0 {
        return Err(Error::DepthExhausted);
    }
    if ct.scale != params.scale() {
        return Err(Error::ScaleMismatch {
            left: ct.scale,
            right: params.scale(),
        });
    }
    if pt.scale() != params.scale() {
        return Err(Error::ScaleMismatch {
            left: pt.scale(),
            right: params.scale(),
        });
    }
    let p_eval = pt
        .poly()
        .clone()
        .into_domain(Domain::Evaluation, params, ctr)?;
    let c0 = ct
        .c0
        .mul(&p_eval, params, ctr)?
        .to_coefficient(params, ctr)?;
    let c1 = ct
        .c1
        .mul(&p_eval, params, ctr)?
        .to_coefficient(params, ctr)?;
    Ok(Ciphertext {
        c0,
        c1,
        scale: ct.scale * pt.scale(),
        depth: 1,
    })
}
