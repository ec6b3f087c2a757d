//! Exact polynomial arithmetic in Z_q[X]/(X^N + 1).
//!
//! Elements live in one of two domains:
//!
//! * `Coefficient` — the literal polynomial coefficients.
//! * `Evaluation` — values of the polynomial at the 2N-th roots of unity
//!   modulo q, where multiplication is coefficient-wise.
//!
//! The negacyclic transform between them follows the usual merged-twist
//! layout: Cooley-Tukey butterflies on the way in (natural order in,
//! bit-reversed order out) and Gentleman-Sande on the way out, with the
//! powers of the primitive 2N-th root ψ folded into the twiddle tables in
//! bit-reversed order. Evaluation index k holds the value at ψ^(2·brev(k)+1).
//! Both directions are exact: no rounding happens anywhere in this module.

use crate::error::{Error, Result};
use crate::metrics::OpCounters;
use crate::modops::{
    add_mod, bit_reverse, inv_mod, mul_mod, mul_mod_shoup, neg_mod, pow_mod, shoup_precompute,
    sub_mod,
};
use crate::params::SchemeParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Coefficient,
    Evaluation,
}

/// Twiddle tables for one (N, q) pair.
pub(crate) struct NttTable {
    n: usize,
    q: u64,
    psi: u64,
    root_pows: Vec<u64>,
    root_pows_shoup: Vec<u64>,
    inv_root_pows: Vec<u64>,
    inv_root_pows_shoup: Vec<u64>,
    n_inv: u64,
    n_inv_shoup: u64,
}

impl NttTable {
    pub fn new(n: usize, q: u64) -> Result<Self> {
        let psi = find_primitive_2nth_root(n, q)?;
        let log_n = n.trailing_zeros();
        let psi_inv = inv_mod(psi, q);

        let mut root_pows = vec![0u64; n];
        let mut inv_root_pows = vec![0u64; n];
        for i in 0..n {
            let e = bit_reverse(i, log_n) as u64;
            root_pows[i] = pow_mod(psi, e, q);
            inv_root_pows[i] = pow_mod(psi_inv, e, q);
        }
        let root_pows_shoup = root_pows.iter().map(|&w| shoup_precompute(w, q)).collect();
        let inv_root_pows_shoup = inv_root_pows
            .iter()
            .map(|&w| shoup_precompute(w, q))
            .collect();
        let n_inv = inv_mod(n as u64, q);
        Ok(Self {
            n,
            q,
            psi,
            root_pows,
            root_pows_shoup,
            inv_root_pows,
            inv_root_pows_shoup,
            n_inv,
            n_inv_shoup: shoup_precompute(n_inv, q),
        })
    }

    /// The primitive 2N-th root the tables are built from; oracle tests
    /// evaluate against it directly.
    #[cfg_attr(not(test), allow(dead_code))]
    pub fn psi(&self) -> u64 {
        self.psi
    }

    /// Lazy-reduction butterfly intermediates live in [0, 2q); the product
    /// against a Shoup pair is exact below 2q for any u64 input.
    #[inline(always)]
    fn mul_shoup_lazy(a: u64, w: u64, w_shoup: u64, q: u64) -> u64 {
        let hi = ((a as u128 * w_shoup as u128) >> 64) as u64;
        a.wrapping_mul(w).wrapping_sub(hi.wrapping_mul(q))
    }

    pub fn forward_inplace(&self, a: &mut [u64]) {
        debug_assert_eq!(a.len(), self.n);
        let q = self.q;
        let two_q = 2 * q;
        let n = self.n;
        let mut t = n;
        let mut m = 1;
        while m < n {
            t >>= 1;
            for (i, block) in a.chunks_exact_mut(2 * t).enumerate() {
                let s = self.root_pows[m + i];
                let s_shoup = self.root_pows_shoup[m + i];
                let (lo, hi) = block.split_at_mut(t);
                for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                    let u0 = *x;
                    let u = if u0 >= two_q { u0 - two_q } else { u0 };
                    let v = Self::mul_shoup_lazy(*y, s, s_shoup, q);
                    *x = u + v;
                    *y = u + two_q - v;
                }
            }
            m <<= 1;
        }
        for x in a.iter_mut() {
            let mut v = *x;
            if v >= two_q {
                v -= two_q;
            }
            if v >= q {
                v -= q;
            }
            *x = v;
        }
    }

    pub fn inverse_inplace(&self, a: &mut [u64]) {
        debug_assert_eq!(a.len(), self.n);
        let q = self.q;
        let two_q = 2 * q;
        let n = self.n;
        let mut t = 1;
        let mut m = n;
        while m > 1 {
            let h = m >> 1;
            for (i, block) in a.chunks_exact_mut(2 * t).enumerate() {
                let s = self.inv_root_pows[h + i];
                let s_shoup = self.inv_root_pows_shoup[h + i];
                let (lo, hi) = block.split_at_mut(t);
                for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                    let u = *x;
                    let v = *y;
                    let s0 = u + v;
                    *x = if s0 >= two_q { s0 - two_q } else { s0 };
                    *y = Self::mul_shoup_lazy(u + two_q - v, s, s_shoup, q);
                }
            }
            t <<= 1;
            m = h;
        }
        for x in a.iter_mut() {
            let v = Self::mul_shoup_lazy(*x, self.n_inv, self.n_inv_shoup, q);
            *x = if v >= q { v - q } else { v };
        }
    }
}

/// Order 2n means c^n ≡ -1; powers of two make the order check exact.
fn find_primitive_2nth_root(n: usize, q: u64) -> Result<u64> {
    let order = 2 * n as u64;
    if (q - 1) % order != 0 {
        return Err(Error::InvalidParams(format!(
            "no 2N-th root of unity: q - 1 not divisible by {order}"
        )));
    }
    let exp = (q - 1) / order;
    for g in 2..1024u64 {
        let c = pow_mod(g, exp, q);
        if pow_mod(c, n as u64, q) == q - 1 {
            return Ok(c);
        }
    }
    Err(Error::InvalidParams(format!(
        "no generator found for q = {q}"
    )))
}

/// A degree-N polynomial over Z_q, tagged with its current domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingElement {
    coeffs: Vec<u64>,
    domain: Domain,
    q: u64,
}

impl RingElement {
    pub fn zero(params: &SchemeParams, domain: Domain) -> Self {
        Self {
            coeffs: vec![0; params.ring_degree()],
            domain,
            q: params.modulus(),
        }
    }

    /// The constant polynomial 1 (coefficient domain).
    pub fn one(params: &SchemeParams) -> Self {
        let mut coeffs = vec![0; params.ring_degree()];
        coeffs[0] = 1;
        Self {
            coeffs,
            domain: Domain::Coefficient,
            q: params.modulus(),
        }
    }

    /// c · X^k in the coefficient domain.
    pub fn monomial(params: &SchemeParams, k: usize, c: u64) -> Result<Self> {
        if k >= params.ring_degree() || c >= params.modulus() {
            return Err(Error::InvalidParams(format!(
                "monomial degree {k} or coefficient {c} out of range"
            )));
        }
        let mut coeffs = vec![0; params.ring_degree()];
        coeffs[k] = c;
        Ok(Self {
            coeffs,
            domain: Domain::Coefficient,
            q: params.modulus(),
        })
    }

    pub fn from_coeffs(params: &SchemeParams, coeffs: Vec<u64>, domain: Domain) -> Result<Self> {
        if coeffs.len() != params.ring_degree() {
            return Err(Error::InvalidParams(format!(
                "expected {} coefficients, got {}",
                params.ring_degree(),
                coeffs.len()
            )));
        }
        let q = params.modulus();
        if let Some(&bad) = coeffs.iter().find(|&&c| c >= q) {
            return Err(Error::InvalidParams(format!(
                "coefficient {bad} not reduced modulo {q}"
            )));
        }
        Ok(Self { coeffs, domain, q })
    }

    pub(crate) fn from_raw(coeffs: Vec<u64>, domain: Domain, q: u64) -> Self {
        debug_assert!(coeffs.iter().all(|&c| c < q));
        Self { coeffs, domain, q }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn ring_degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Largest centered coefficient magnitude.
    pub fn inf_norm_centered(&self) -> u64 {
        let half = self.q / 2;
        self.coeffs
            .iter()
            .map(|&c| if c > half { self.q - c } else { c })
            .max()
            .unwrap_or(0)
    }

    fn check_compat(&self, other: &RingElement) -> Result<()> {
        if self.coeffs.len() != other.coeffs.len() || self.q != other.q {
            return Err(Error::ParamMismatch {
                n_left: self.coeffs.len(),
                q_left: self.q,
                n_right: other.coeffs.len(),
                q_right: other.q,
            });
        }
        if self.domain != other.domain {
            return Err(Error::WrongDomain {
                expected: self.domain,
                found: other.domain,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement> {
        self.check_compat(other)?;
        let q = self.q;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| add_mod(a, b, q))
            .collect();
        Ok(RingElement {
            coeffs,
            domain: self.domain,
            q,
        })
    }

    pub fn sub(&self, other: &RingElement) -> Result<RingElement> {
        self.check_compat(other)?;
        let q = self.q;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| sub_mod(a, b, q))
            .collect();
        Ok(RingElement {
            coeffs,
            domain: self.domain,
            q,
        })
    }

    pub fn neg(&self) -> RingElement {
        let q = self.q;
        RingElement {
            coeffs: self.coeffs.iter().map(|&a| neg_mod(a, q)).collect(),
            domain: self.domain,
            q,
        }
    }

    pub fn scalar_mul(&self, k: u64) -> Result<RingElement> {
        if k >= self.q {
            return Err(Error::InvalidParams(format!(
                "scalar {k} not reduced modulo {}",
                self.q
            )));
        }
        let q = self.q;
        let k_shoup = shoup_precompute(k, q);
        RingElement {
            coeffs: self
                .coeffs
                .iter()
                .map(|&a| mul_mod_shoup(a, k, k_shoup, q))
                .collect(),
            domain: self.domain,
            q,
        }
        .into_ok()
    }

    /// Forward transform; errors if already in the evaluation domain.
    pub fn to_evaluation(&self, params: &SchemeParams, ctr: &mut OpCounters) -> Result<RingElement> {
        if self.domain != Domain::Coefficient {
            return Err(Error::WrongDomain {
                expected: Domain::Coefficient,
                found: self.domain,
            });
        }
        self.check_params(params)?;
        let mut coeffs = self.coeffs.clone();
        params.ntt().forward_inplace(&mut coeffs);
        ctr.ntts += 1;
        Ok(RingElement {
            coeffs,
            domain: Domain::Evaluation,
            q: self.q,
        })
    }

    /// Inverse transform; errors if already in the coefficient domain.
    pub fn to_coefficient(
        &self,
        params: &SchemeParams,
        ctr: &mut OpCounters,
    ) -> Result<RingElement> {
        if self.domain != Domain::Evaluation {
            return Err(Error::WrongDomain {
                expected: Domain::Evaluation,
                found: self.domain,
            });
        }
        self.check_params(params)?;
        let mut coeffs = self.coeffs.clone();
        params.ntt().inverse_inplace(&mut coeffs);
        ctr.ntts += 1;
        Ok(RingElement {
            coeffs,
            domain: Domain::Coefficient,
            q: self.q,
        })
    }

    /// Convert to the given domain if not there already.
    pub fn into_domain(
        self,
        domain: Domain,
        params: &SchemeParams,
        ctr: &mut OpCounters,
    ) -> Result<RingElement> {
        if self.domain == domain {
            return Ok(self);
        }
        match domain {
            Domain::Evaluation => self.to_evaluation(params, ctr),
            Domain::Coefficient => self.to_coefficient(params, ctr),
        }
    }

    /// Negacyclic product. Operands are brought into the evaluation domain as
    /// needed (each conversion shows up in the NTT counter) and the result is
    /// returned in the evaluation domain.
    pub fn mul(
        &self,
        other: &RingElement,
        params: &SchemeParams,
        ctr: &mut OpCounters,
    ) -> Result<RingElement> {
        if self.coeffs.len() != other.coeffs.len() || self.q != other.q {
            return Err(Error::ParamMismatch {
                n_left: self.coeffs.len(),
                q_left: self.q,
                n_right: other.coeffs.len(),
                q_right: other.q,
            });
        }
        self.check_params(params)?;
        let a = self
            .clone()
            .into_domain(Domain::Evaluation, params, ctr)?;
        let b = other
            .clone()
            .into_domain(Domain::Evaluation, params, ctr)?;
        let q = self.q;
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| mul_mod(x, y, q))
            .collect();
        ctr.ring_muls += 1;
        Ok(RingElement {
            coeffs,
            domain: Domain::Evaluation,
            q,
        })
    }

    fn check_params(&self, params: &SchemeParams) -> Result<()> {
        if self.coeffs.len() != params.ring_degree() || self.q != params.modulus() {
            return Err(Error::ParamMismatch {
                n_left: self.coeffs.len(),
                q_left: self.q,
                n_right: params.ring_degree(),
                q_right: params.modulus(),
            });
        }
        Ok(())
    }
}

trait IntoOk: Sized {
    fn into_ok(self) -> Result<Self> {
        Ok(self)
    }
}
impl IntoOk for RingElement {}

/// Evaluation-domain polynomial with Shoup companions, for repeated
/// multiplication against a fixed operand (public keys, cached base
/// ciphertexts, secret keys).
#[derive(Debug, Clone)]
pub(crate) struct ShoupPoly {
    vals: Vec<u64>,
    shoup: Vec<u64>,
    q: u64,
}

impl ShoupPoly {
    /// Precompute companions for an evaluation-domain element.
    pub fn new(elem: &RingElement) -> Self {
        debug_assert_eq!(elem.domain(), Domain::Evaluation);
        let q = elem.modulus();
        let vals = elem.coeffs().to_vec();
        let shoup = vals.iter().map(|&w| shoup_precompute(w, q)).collect();
        Self { vals, shoup, q }
    }

    pub fn from_coefficient(
        elem: &RingElement,
        params: &SchemeParams,
        ctr: &mut OpCounters,
    ) -> Result<Self> {
        let eval = elem.clone().into_domain(Domain::Evaluation, params, ctr)?;
        Ok(Self::new(&eval))
    }

    /// Pointwise product against an evaluation-domain coefficient slice.
    pub fn pointwise(&self, a: &[u64]) -> Vec<u64> {
        debug_assert_eq!(a.len(), self.vals.len());
        let q = self.q;
        a.iter()
            .zip(self.vals.iter().zip(&self.shoup))
            .map(|(&x, (&w, &w_sh))| mul_mod_shoup(x, w, w_sh, q))
            .collect()
    }

}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modops::{center, reduce_signed};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn toy(n: usize) -> SchemeParams {
        SchemeParams::with_ring_degree(n).unwrap()
    }

    fn random_element(params: &SchemeParams, rng: &mut ChaCha12Rng) -> RingElement {
        let q = params.modulus();
        let coeffs = (0..params.ring_degree())
            .map(|_| rng.gen_range(0..q))
            .collect();
        RingElement::from_coeffs(params, coeffs, Domain::Coefficient).unwrap()
    }

    /// O(N²) negacyclic convolution in i128, the independent multiplication
    /// oracle: X^N wraps to -1.
    fn schoolbook_negacyclic(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
        let n = a.len();
        let mut acc = vec![0i128; n];
        for i in 0..n {
            for j in 0..n {
                let prod = (a[i] as i128 * b[j] as i128) % q as i128;
                let k = (i + j) % n;
                if i + j < n {
                    acc[k] = (acc[k] + prod) % q as i128;
                } else {
                    acc[k] = (acc[k] - prod).rem_euclid(q as i128);
                }
            }
        }
        acc.into_iter().map(|v| v as u64).collect()
    }

    #[test]
    fn ntt_zero_maps_to_zero() {
        let params = toy(8);
        let z = RingElement::zero(&params, Domain::Coefficient);
        let mut ctr = OpCounters::new();
        let fwd = z.to_evaluation(&params, &mut ctr).unwrap();
        assert!(fwd.is_zero());
        let back = fwd.to_coefficient(&params, &mut ctr).unwrap();
        assert!(back.is_zero());
        assert_eq!(ctr.ntts, 2);
    }

    #[test]
    fn ntt_roundtrip_is_exact() {
        let params = toy(8);
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let mut ctr = OpCounters::new();
        for _ in 0..50 {
            let x = random_element(&params, &mut rng);
            let back = x
                .to_evaluation(&params, &mut ctr)
                .unwrap()
                .to_coefficient(&params, &mut ctr)
                .unwrap();
            assert_eq!(x, back);
        }
    }

    #[test]
    fn forward_matches_direct_evaluation() {
        // Index k of the evaluation domain holds a(ψ^(2·brev(k)+1)); check
        // that against a direct O(N²) evaluation.
        let params = toy(8);
        let n = params.ring_degree();
        let q = params.modulus();
        let psi = params.ntt().psi();
        let log_n = n.trailing_zeros();
        let mut rng = ChaCha12Rng::seed_from_u64(99);
        let x = random_element(&params, &mut rng);
        let mut ctr = OpCounters::new();
        let fwd = x.to_evaluation(&params, &mut ctr).unwrap();
        for k in 0..n {
            let e = 2 * bit_reverse(k, log_n) as u64 + 1;
            let point = pow_mod(psi, e, q);
            let mut acc = 0u64;
            let mut pw = 1u64;
            for &c in x.coeffs() {
                acc = add_mod(acc, mul_mod(c, pw, q), q);
                pw = mul_mod(pw, point, q);
            }
            assert_eq!(fwd.coeffs()[k], acc, "mismatch at evaluation index {k}");
        }
    }

    #[test]
    fn inverse_matches_direct_interpolation() {
        // The inverse transform is the unique linear map undoing the forward
        // evaluation; applying it to a forward image must reproduce the input,
        // and applying forward to an arbitrary vector then inverse is identity
        // as well (exercised at N=8 where the direct oracle is cheap).
        let params = toy(8);
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let mut ctr = OpCounters::new();
        for _ in 0..20 {
            let x = random_element(&params, &mut rng);
            let eval = RingElement::from_raw(
                x.coeffs().to_vec(),
                Domain::Evaluation,
                params.modulus(),
            );
            let rt = eval
                .to_coefficient(&params, &mut ctr)
                .unwrap()
                .to_evaluation(&params, &mut ctr)
                .unwrap();
            assert_eq!(rt.coeffs(), x.coeffs());
        }
    }

    #[test]
    fn mul_matches_schoolbook_for_200_random_pairs() {
        let params = toy(8);
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        let mut ctr = OpCounters::new();
        for _ in 0..200 {
            let a = random_element(&params, &mut rng);
            let b = random_element(&params, &mut rng);
            let expected = schoolbook_negacyclic(a.coeffs(), b.coeffs(), params.modulus());
            let got = a
                .mul(&b, &params, &mut ctr)
                .unwrap()
                .to_coefficient(&params, &mut ctr)
                .unwrap();
            assert_eq!(got.coeffs(), &expected[..]);
        }
    }

    #[test]
    fn mul_by_one_is_identity() {
        let params = toy(16);
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let mut ctr = OpCounters::new();
        let a = random_element(&params, &mut rng);
        let one = RingElement::one(&params);
        let prod = a
            .mul(&one, &params, &mut ctr)
            .unwrap()
            .to_coefficient(&params, &mut ctr)
            .unwrap();
        assert_eq!(prod, a);
    }

    #[test]
    fn half_degree_monomial_squares_to_minus_one() {
        let params = toy(16);
        let n = params.ring_degree();
        let q = params.modulus();
        let mut ctr = OpCounters::new();
        let x_half = RingElement::monomial(&params, n / 2, 1).unwrap();
        let prod = x_half
            .mul(&x_half, &params, &mut ctr)
            .unwrap()
            .to_coefficient(&params, &mut ctr)
            .unwrap();
        let mut expected = vec![0u64; n];
        expected[0] = q - 1;
        assert_eq!(prod.coeffs(), &expected[..]);
    }

    #[test]
    fn add_matches_wide_integer_oracle() {
        let params = toy(8);
        let q = params.modulus();
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..200 {
            let a = random_element(&params, &mut rng);
            let b = random_element(&params, &mut rng);
            let sum = a.add(&b).unwrap();
            for i in 0..params.ring_degree() {
                let wide = (a.coeffs()[i] as u128 + b.coeffs()[i] as u128) % q as u128;
                assert_eq!(sum.coeffs()[i] as u128, wide);
            }
        }
    }

    #[test]
    fn additive_identities() {
        let params = toy(8);
        let mut rng = ChaCha12Rng::seed_from_u64(13);
        let a = random_element(&params, &mut rng);
        let zero = RingElement::zero(&params, Domain::Coefficient);
        assert_eq!(a.add(&zero).unwrap(), a);
        assert!(a.add(&a.neg()).unwrap().is_zero());
        assert_eq!(a.sub(&a).unwrap(), zero);
    }

    #[test]
    fn domain_mismatch_rejected() {
        let params = toy(8);
        let a = RingElement::zero(&params, Domain::Coefficient);
        let b = RingElement::zero(&params, Domain::Evaluation);
        assert!(matches!(a.add(&b), Err(Error::WrongDomain { .. })));
    }

    #[test]
    fn ring_mismatch_rejected() {
        let p8 = toy(8);
        let p16 = toy(16);
        let a = RingElement::zero(&p8, Domain::Coefficient);
        let b = RingElement::zero(&p16, Domain::Coefficient);
        assert!(matches!(a.add(&b), Err(Error::ParamMismatch { .. })));
        let mut ctr = OpCounters::new();
        assert!(a.mul(&b, &p8, &mut ctr).is_err());
        assert!(b.to_evaluation(&p8, &mut ctr).is_err());
    }

    #[test]
    fn wrong_direction_transform_rejected() {
        let params = toy(8);
        let mut ctr = OpCounters::new();
        let a = RingElement::zero(&params, Domain::Evaluation);
        assert!(a.to_evaluation(&params, &mut ctr).is_err());
        let b = RingElement::zero(&params, Domain::Coefficient);
        assert!(b.to_coefficient(&params, &mut ctr).is_err());
    }

    #[test]
    fn scalar_mul_matches_repeated_add() {
        let params = toy(8);
        let mut rng = ChaCha12Rng::seed_from_u64(17);
        let a = random_element(&params, &mut rng);
        let tripled = a.scalar_mul(3).unwrap();
        let sum = a.add(&a).unwrap().add(&a).unwrap();
        assert_eq!(tripled, sum);
    }

    #[test]
    fn shoup_poly_matches_generic_mul() {
        let params = toy(16);
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        let mut ctr = OpCounters::new();
        let a = random_element(&params, &mut rng);
        let b = random_element(&params, &mut rng);
        let generic = a.mul(&b, &params, &mut ctr).unwrap();
        let b_shoup = ShoupPoly::from_coefficient(&b, &params, &mut ctr).unwrap();
        let a_eval = a.to_evaluation(&params, &mut ctr).unwrap();
        let fast = b_shoup.pointwise(a_eval.coeffs());
        assert_eq!(generic.coeffs(), &fast[..]);
    }

    #[test]
    fn centered_norm() {
        let params = toy(8);
        let q = params.modulus();
        let coeffs = vec![0, 1, q - 1, q - 5, 3, 0, 0, 0];
        let e = RingElement::from_coeffs(&params, coeffs, Domain::Coefficient).unwrap();
        assert_eq!(e.inf_norm_centered(), 5);
        assert_eq!(center(q - 5, q), -5);
        assert_eq!(reduce_signed(-5, q), q - 5);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn prop_mul_commutative_and_matches_oracle(seed in 0u64..u64::MAX) {
            let params = toy(8);
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let mut ctr = OpCounters::new();
            let a = random_element(&params, &mut rng);
            let b = random_element(&params, &mut rng);
            let ab = a.mul(&b, &params, &mut ctr).unwrap()
                .to_coefficient(&params, &mut ctr).unwrap();
            let ba = b.mul(&a, &params, &mut ctr).unwrap()
                .to_coefficient(&params, &mut ctr).unwrap();
            prop_assert_eq!(&ab, &ba);
            let oracle = schoolbook_negacyclic(a.coeffs(), b.coeffs(), params.modulus());
            prop_assert_eq!(ab.coeffs(), &oracle[..]);
        }

        #[test]
        fn prop_mul_distributes_over_add(seed in 0u64..u64::MAX) {
            let params = toy(8);
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let mut ctr = OpCounters::new();
            let a = random_element(&params, &mut rng);
            let b = random_element(&params, &mut rng);
            let c = random_element(&params, &mut rng);
            let lhs = a.mul(&b.add(&c).unwrap(), &params, &mut ctr).unwrap()
                .to_coefficient(&params, &mut ctr).unwrap();
            let rhs = a.mul(&b, &params, &mut ctr).unwrap()
                .add(&a.mul(&c, &params, &mut ctr).unwrap()).unwrap()
                .to_coefficient(&params, &mut ctr).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn prop_mul_associative(seed in 0u64..u64::MAX) {
            let params = toy(8);
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let mut ctr = OpCounters::new();
            let a = random_element(&params, &mut rng);
            let b = random_element(&params, &mut rng);
            let c = random_element(&params, &mut rng);
            let left = a.mul(&b, &params, &mut ctr).unwrap()
                .mul(&c.to_evaluation(&params, &mut ctr).unwrap(), &params, &mut ctr).unwrap();
            let right = a.to_evaluation(&params, &mut ctr).unwrap()
                .mul(&b.mul(&c, &params, &mut ctr).unwrap(), &params, &mut ctr).unwrap();
            prop_assert_eq!(
                left.to_coefficient(&params, &mut ctr).unwrap(),
                right.to_coefficient(&params, &mut ctr).unwrap()
            );
        }

        #[test]
        fn prop_ntt_roundtrip(seed in 0u64..u64::MAX, log_n in 3u32..6) {
            let params = toy(1 << log_n);
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let mut ctr = OpCounters::new();
            let x = random_element(&params, &mut rng);
            let back = x.to_evaluation(&params, &mut ctr).unwrap()
                .to_coefficient(&params, &mut ctr).unwrap();
            prop_assert_eq!(x, back);
        }
    }
}

