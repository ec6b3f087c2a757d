//! Slot encoding: real vectors <-> integer plaintext polynomials.
//!
//! A length-N/2 real vector is identified with the values of a real-
//! coefficient polynomial at the primitive 2N-th roots of unity ζ^(2j+1),
//! ζ = e^(iπ/N). Conjugate symmetry pins the other half of the evaluations,
//! so N real coefficients carry exactly N/2 real slots. Ring multiplication
//! modulo X^N + 1 preserves values at these points, which is what makes
//! slot-wise products of encodings meaningful.
//!
//! Writing e_j = 2j+1, the row-orthogonality Σ_k ζ^(e_j·k)·ζ^(-e_l·k) = N·δ_jl
//! gives the closed-form inverse of the evaluation map on the conjugate-
//! symmetric subspace:
//!
//!     coeff_k = (2Δ/N) · Σ_j m_j · cos(π·e_j·k/N)
//!
//! Two implementations compute this map and must agree within rounding: an
//! explicit dense application of the evaluation matrix (`encode_vandermonde`,
//! always applied at full width so its cost does not depend on how many slots
//! are in use), and an FFT-shaped path (`encode_fast`). Coefficients are
//! rounded half-away-from-zero and scaled by Δ; negative values are stored as
//! q - |v|.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::error::{Error, Result};
use crate::metrics::OpCounters;
use crate::modops::{center, reduce_signed};
use crate::params::SchemeParams;
use crate::ring::{Domain, RingElement};

/// FFT machinery for one ring degree, shared through `SchemeParams`.
pub struct FftPlans {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    /// ζ^k for k in 0..N, ζ = e^(iπ/N).
    half_twist: Vec<Complex64>,
}

impl FftPlans {
    pub(crate) fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft(n, FftDirection::Forward);
        let inverse = planner.plan_fft(n, FftDirection::Inverse);
        let half_twist = (0..n)
            .map(|k| Complex64::from_polar(1.0, std::f64::consts::PI * k as f64 / n as f64))
            .collect();
        Self {
            forward,
            inverse,
            half_twist,
        }
    }
}

impl std::fmt::Debug for FftPlans {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FftPlans")
            .field("n", &self.half_twist.len())
            .finish()
    }
}

/// A batch of real slot values, validated against the magnitude budget.
#[derive(Debug, Clone, PartialEq)]
pub struct SlotVector {
    values: Vec<f64>,
}

impl SlotVector {
    pub fn new(params: &SchemeParams, values: Vec<f64>) -> Result<Self> {
        if values.len() > params.slot_count() {
            return Err(Error::TooManySlots {
                got: values.len(),
                max: params.slot_count(),
            });
        }
        let budget = params.max_message_magnitude();
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite(i));
            }
            if v.abs() > budget {
                return Err(Error::MagnitudeOverflow {
                    value: v,
                    budget,
                });
            }
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// An encoded slot vector: integer polynomial plus the scale it carries.
#[derive(Debug, Clone, PartialEq)]
pub struct Plaintext {
    poly: RingElement,
    scale: f64,
    slots_used: usize,
}

impl Plaintext {
    pub(crate) fn new(poly: RingElement, scale: f64, slots_used: usize) -> Self {
        debug_assert!(scale > 0.0);
        Self {
            poly,
            scale,
            slots_used,
        }
    }

    /// Assemble a plaintext from a raw polynomial and scale.
    pub fn from_parts(poly: RingElement, scale: f64, slots_used: usize) -> Result<Self> {
        check_scale(scale)?;
        if slots_used > poly.ring_degree() / 2 {
            return Err(Error::TooManySlots {
                got: slots_used,
                max: poly.ring_degree() / 2,
            });
        }
        Ok(Self::new(poly, scale, slots_used))
    }

    pub fn poly(&self) -> &RingElement {
        &self.poly
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn slots_used(&self) -> usize {
        self.slots_used
    }
}

/// The evaluation structure used by the explicit encoding path: the primitive
/// root ω = ζ = e^(iπ/N), the node set ω^(2j+1) restricted to `dim` slots, and
/// the matrix entry(j, k) = (node_j)^k. A cosine table drives the dense
/// application; rows are materialized on demand for verification.
#[derive(Debug, Clone)]
pub struct VandermondeSystem {
    dim: usize,
    n: usize,
    omega: Complex64,
    /// cos(π·t/N) for t in 0..2N; entry (j,k) has real part cos_table[e_j·k mod 2N].
    cos_table: Vec<f64>,
}

/// Evaluation system for a power-of-two batch of `dim` slots.
pub fn build_vandermonde(params: &SchemeParams, dim: usize) -> Result<VandermondeSystem> {
    if dim == 0 || !dim.is_power_of_two() || dim > params.slot_count() {
        return Err(Error::InvalidParams(format!(
            "batch dimension {dim} must be a power of two in 1..={}",
            params.slot_count()
        )));
    }
    let n = params.ring_degree();
    let cos_table = (0..2 * n)
        .map(|t| (std::f64::consts::PI * t as f64 / n as f64).cos())
        .collect();
    Ok(VandermondeSystem {
        dim,
        n,
        omega: Complex64::from_polar(1.0, std::f64::consts::PI / n as f64),
        cos_table,
    })
}

impl VandermondeSystem {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ring_degree(&self) -> usize {
        self.n
    }

    /// The primitive 2N-th root the nodes are powers of.
    pub fn omega(&self) -> Complex64 {
        self.omega
    }

    /// Evaluation node for slot j.
    pub fn node(&self, j: usize) -> Complex64 {
        debug_assert!(j < self.n / 2);
        self.omega.powu((2 * j + 1) as u32)
    }

    /// Matrix entry: (node_j)^k.
    pub fn entry(&self, j: usize, k: usize) -> Complex64 {
        let t = (2 * j + 1) * k % (2 * self.n);
        Complex64::from_polar(1.0, std::f64::consts::PI * t as f64 / self.n as f64)
    }

    /// The dim × N evaluation matrix, materialized. Intended for small-degree
    /// verification; the encoder itself never builds it.
    pub fn matrix(&self) -> Vec<Vec<Complex64>> {
        (0..self.dim)
            .map(|j| (0..self.n).map(|k| self.entry(j, k)).collect())
            .collect()
    }

    /// The square N × N evaluation matrix over all 2N-th primitive roots
    /// (slots plus their conjugates), for inversion oracles at toy degrees.
    pub fn full_matrix(&self) -> Vec<Vec<Complex64>> {
        let half = self.n / 2;
        (0..self.n)
            .map(|row| {
                let e = if row < half {
                    2 * row + 1
                } else {
                    2 * self.n - (2 * (row - half) + 1)
                };
                (0..self.n)
                    .map(|k| {
                        let t = e * k % (2 * self.n);
                        Complex64::from_polar(
                            1.0,
                            std::f64::consts::PI * t as f64 / self.n as f64,
                        )
                    })
                    .collect()
            })
            .collect()
    }
}

/// Explicit linear-algebra encoding through the evaluation system.
///
/// The adjoint-over-N application below solves V·c = Δm exactly on the
/// conjugate-symmetric subspace (row orthogonality). It always runs at full
/// slot width — unused slots ride along as zeros — so precomputation cost is
/// independent of batch size.
pub fn encode_vandermonde(
    params: &SchemeParams,
    m: &SlotVector,
    sys: &VandermondeSystem,
    scale: f64,
    ctr: &mut OpCounters,
) -> Result<Plaintext> {
    if sys.ring_degree() != params.ring_degree() {
        return Err(Error::InvalidParams(
            "evaluation system built for a different ring degree".into(),
        ));
    }
    if m.len() > sys.dim() {
        return Err(Error::TooManySlots {
            got: m.len(),
            max: sys.dim(),
        });
    }
    check_scale(scale)?;
    let n = params.ring_degree();
    let half = n / 2;
    let mask = 2 * n - 1;
    let mut padded = vec![0.0f64; half];
    padded[..m.len()].copy_from_slice(m.values());

    let factor = 2.0 * scale / n as f64;
    let q = params.modulus();
    let mut coeffs = vec![0u64; n];
    for (k, c) in coeffs.iter_mut().enumerate() {
        let mut acc = 0.0f64;
        let mut t = k; // e_j·k mod 2N for j = 0, stepping by 2k
        let step = 2 * k;
        for &mj in padded.iter() {
            acc += mj * sys.cos_table[t];
            t = (t + step) & mask;
        }
        *c = reduce_signed((factor * acc).round() as i64, q);
    }
    ctr.encodes += 1;
    Ok(Plaintext::new(
        RingElement::from_raw(coeffs, Domain::Coefficient, q),
        scale,
        m.len(),
    ))
}

/// FFT-shaped encoding; agrees with `encode_vandermonde` within rounding.
pub fn encode_fast(
    params: &SchemeParams,
    m: &SlotVector,
    scale: f64,
    ctr: &mut OpCounters,
) -> Result<Plaintext> {
    check_scale(scale)?;
    let n = params.ring_degree();
    let fft = params.fft();
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for (b, &v) in buf.iter_mut().zip(m.values()) {
        *b = Complex64::new(v, 0.0);
    }
    fft.forward.process(&mut buf);
    let factor = 2.0 * scale / n as f64;
    let q = params.modulus();
    let coeffs = buf
        .iter()
        .enumerate()
        .map(|(k, fk)| {
            // Re(ζ^-k · F_k)
            let v = factor * (fk * fft.half_twist[k].conj()).re;
            reduce_signed(v.round() as i64, q)
        })
        .collect();
    ctr.encodes += 1;
    Ok(Plaintext::new(
        RingElement::from_raw(coeffs, Domain::Coefficient, q),
        scale,
        m.len(),
    ))
}

/// Evaluate the plaintext polynomial at the embedding nodes and divide out
/// the scale. Returns `slots_used` values.
pub fn decode(params: &SchemeParams, pt: &Plaintext) -> Result<SlotVector> {
    if !(pt.scale() > 0.0) {
        return Err(Error::InvalidParams(format!(
            "plaintext scale {} must be positive",
            pt.scale()
        )));
    }
    let poly = pt.poly();
    if poly.domain() != Domain::Coefficient {
        return Err(Error::WrongDomain {
            expected: Domain::Coefficient,
            found: poly.domain(),
        });
    }
    if poly.ring_degree() != params.ring_degree() || poly.modulus() != params.modulus() {
        return Err(Error::ParamMismatch {
            n_left: poly.ring_degree(),
            q_left: poly.modulus(),
            n_right: params.ring_degree(),
            q_right: params.modulus(),
        });
    }
    let q = params.modulus();
    let fft = params.fft();
    let mut buf: Vec<Complex64> = poly
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, &c)| fft.half_twist[k] * center(c, q) as f64)
        .collect();
    fft.inverse.process(&mut buf);
    let inv_scale = 1.0 / pt.scale();
    let values = buf[..pt.slots_used()]
        .iter()
        .map(|z| z.re * inv_scale)
        .collect();
    // Decoded values skip SlotVector's budget validation: noise may push a
    // slot past the encoding-side budget and that is information, not an error.
    Ok(SlotVector { values })
}

fn check_scale(scale: f64) -> Result<()> {
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::InvalidParams(format!(
            "encoding scale {scale} must be positive and finite"
        )));
    }
    Ok(())
}
