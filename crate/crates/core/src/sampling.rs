//! Randomness for keys, encryption, and ciphertext randomization.
//!
//! All sampling is driven by an explicit caller-owned RNG handle, so a fixed
//! seed reproduces the exact same ring elements. Gaussian coefficients are
//! continuous normal draws rounded half-away-from-zero and reduced modulo q
//! (negative values land on q - |v|).

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::metrics::OpCounters;

use crate::params::SchemeParams;
use crate::ring::{Domain, RingElement};

/// Every coefficient i.i.d. uniform in [0, q).
pub fn sample_uniform<R: Rng>(
    params: &SchemeParams,
    rng: &mut R,
    ctr: &mut OpCounters,
) -> RingElement {
    let q = params.modulus();
    let coeffs = (0..params.ring_degree())
        .map(|_| rng.gen_range(0..q))
        .collect();
    ctr.uniform_samples += 1;
    RingElement::from_raw(coeffs, Domain::Coefficient, q)
}

/// Coefficients uniform over {-1, 0, 1}, stored as residues {q-1, 0, 1}.
pub fn sample_ternary<R: Rng>(
    params: &SchemeParams,
    rng: &mut R,
    ctr: &mut OpCounters,
) -> RingElement {
    let q = params.modulus();
    let coeffs = (0..params.ring_degree())
        .map(|_| match rng.gen_range(0u8..3) {
            0 => 0,
            1 => 1,
            _ => q - 1,
        })
        .collect();
    ctr.ternary_samples += 1;
    RingElement::from_raw(coeffs, Domain::Coefficient, q)
}

/// Rounded-Gaussian ring element with width `sigma`.
pub fn sample_gaussian<R: Rng>(
    params: &SchemeParams,
    sigma: f64,
    rng: &mut R,
    ctr: &mut OpCounters,
) -> Result<RingElement> {
    check_sigma(sigma)?;
    let q = params.modulus();
    let n = params.ring_degree();
    // Draws are a few σ at most, so the reduction is a single branch; the
    // draw order matches `gaussian_draws` exactly.
    let coeffs = (0..n)
        .map(|_| {
            let z: f64 = rng.sample(StandardNormal);
            let v = (z * sigma).round() as i64;
            debug_assert!(v.unsigned_abs() < q);
            if v < 0 {
                q - v.unsigned_abs()
            } else {
                v as u64
            }
        })
        .collect();
    ctr.gaussian_samples += n as u64;
    Ok(RingElement::from_raw(coeffs, Domain::Coefficient, q))
}

/// Rounded draws before modular reduction. Exposed so the distribution can be
/// checked directly (`round` is half-away-from-zero).
pub fn gaussian_draws<R: Rng>(count: usize, sigma: f64, rng: &mut R) -> Result<Vec<i64>> {
    check_sigma(sigma)?;
    Ok((0..count)
        .map(|_| {
            let z: f64 = rng.sample(StandardNormal);
            (z * sigma).round() as i64
        })
        .collect())
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidParams(format!(
            "gaussian width {sigma} must be positive and finite"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn toy() -> SchemeParams {
        SchemeParams::with_ring_degree(64).unwrap()
    }

    #[test]
    fn zero_sigma_rejected() {
        let params = toy();
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        let mut ctr = OpCounters::new();
        assert!(sample_gaussian(&params, 0.0, &mut rng, &mut ctr).is_err());
        assert!(sample_gaussian(&params, -3.2, &mut rng, &mut ctr).is_err());
    }

    #[test]
    fn ternary_codomain() {
        let params = toy();
        let q = params.modulus();
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        let mut ctr = OpCounters::new();
        let s = sample_ternary(&params, &mut rng, &mut ctr);
        for &c in s.coeffs() {
            assert!(c == 0 || c == 1 || c == q - 1, "non-ternary residue {c}");
        }
        assert_eq!(ctr.ternary_samples, 1);
    }

    #[test]
    fn identical_seeds_identical_elements() {
        let params = toy();
        let mut ctr = OpCounters::new();
        let mut r1 = ChaCha12Rng::seed_from_u64(7);
        let mut r2 = ChaCha12Rng::seed_from_u64(7);
        assert_eq!(
            sample_uniform(&params, &mut r1, &mut ctr),
            sample_uniform(&params, &mut r2, &mut ctr)
        );
        assert_eq!(
            sample_gaussian(&params, 3.2, &mut r1, &mut ctr).unwrap(),
            sample_gaussian(&params, 3.2, &mut r2, &mut ctr).unwrap()
        );
        assert_eq!(
            sample_ternary(&params, &mut r1, &mut ctr),
            sample_ternary(&params, &mut r2, &mut ctr)
        );
    }

    #[test]
    fn gaussian_empirical_moments() {
        // Seeded statistical check on the pre-reduction draws: mean within
        // 5σ/√k of zero, standard deviation within 5% of σ.
        let sigma = 3.2;
        let k = 100_000usize;
        let mut rng = ChaCha12Rng::seed_from_u64(1234);
        let draws = gaussian_draws(k, sigma, &mut rng).unwrap();
        let mean = draws.iter().map(|&v| v as f64).sum::<f64>() / k as f64;
        let var = draws
            .iter()
            .map(|&v| {
                let d = v as f64 - mean;
                d * d
            })
            .sum::<f64>()
            / (k - 1) as f64;
        let std = var.sqrt();
        assert!(
            mean.abs() <= 5.0 * sigma / (k as f64).sqrt(),
            "mean {mean} too far from 0"
        );
        // Rounding adds variance 1/12; fold it into the expectation.
        let expected_std = (sigma * sigma + 1.0 / 12.0f64).sqrt();
        assert!(
            (std - expected_std).abs() <= 0.05 * sigma,
            "std {std} vs expected {expected_std}"
        );
    }

    #[test]
    fn gaussian_counts_coefficient_draws() {
        let params = toy();
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let mut ctr = OpCounters::new();
        sample_gaussian(&params, 3.2, &mut rng, &mut ctr).unwrap();
        assert_eq!(ctr.gaussian_samples, params.ring_degree() as u64);
    }

    #[test]
    fn rounding_is_half_away_from_zero() {
        assert_eq!(2.5f64.round(), 3.0);
        assert_eq!((-2.5f64).round(), -3.0);
        assert_eq!(0.49f64.round(), 0.0);
    }
}
