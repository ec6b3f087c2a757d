//! Scalar arithmetic modulo a word-sized prime.
//!
//! The modulus is below 2^63, so sums of two residues never overflow a u64
//! and products fit in a u128. Multiplications by a fixed operand use Shoup's
//! precomputed-quotient trick: with w' = floor(w * 2^64 / q) the product
//! a*w mod q costs one widening multiply, one wrapping multiply, and a
//! conditional subtraction.

#[inline(always)]
pub fn add_mod(a: u64, b: u64, q: u64) -> u64 {
    let s = a + b;
    if s >= q {
        s - q
    } else {
        s
    }
}

#[inline(always)]
pub fn sub_mod(a: u64, b: u64, q: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + q - b
    }
}

#[inline(always)]
pub fn neg_mod(a: u64, q: u64) -> u64 {
    if a == 0 {
        0
    } else {
        q - a
    }
}

#[inline(always)]
pub fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

/// Shoup companion for a fixed multiplicand `w < q`.
#[inline(always)]
pub fn shoup_precompute(w: u64, q: u64) -> u64 {
    (((w as u128) << 64) / q as u128) as u64
}

/// a * w mod q using the precomputed companion; requires w < q.
#[inline(always)]
pub fn mul_mod_shoup(a: u64, w: u64, w_shoup: u64, q: u64) -> u64 {
    let hi = ((a as u128 * w_shoup as u128) >> 64) as u64;
    let r = a
        .wrapping_mul(w)
        .wrapping_sub(hi.wrapping_mul(q));
    if r >= q {
        r - q
    } else {
        r
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, q: u64) -> u64 {
    let mut acc: u64 = 1;
    base %= q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, q);
        }
        base = mul_mod(base, base, q);
        exp >>= 1;
    }
    acc
}

/// Multiplicative inverse modulo a prime q.
pub fn inv_mod(a: u64, q: u64) -> u64 {
    pow_mod(a, q - 2, q)
}

/// Lift a residue to the centered representative in (-q/2, q/2].
#[inline(always)]
pub fn center(a: u64, q: u64) -> i64 {
    if a > q / 2 {
        -((q - a) as i64)
    } else {
        a as i64
    }
}

/// Reduce a signed integer into [0, q).
#[inline(always)]
pub fn reduce_signed(v: i64, q: u64) -> u64 {
    let r = v % q as i64;
    if r < 0 {
        (r + q as i64) as u64
    } else {
        r as u64
    }
}

/// Deterministic Miller-Rabin, valid for all u64 inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    // This witness set decides primality for every 64-bit integer.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Largest prime q < 2^bits with q ≡ 1 (mod modulus_step).
pub fn find_ntt_prime(bits: u32, modulus_step: u64) -> Option<u64> {
    assert!(bits <= 63 && bits >= 4);
    let top = (1u64 << bits) - 1;
    let mut q = top / modulus_step * modulus_step + 1;
    while q > modulus_step {
        if q <= top && is_prime_u64(q) {
            return Some(q);
        }
        q -= modulus_step;
    }
    None
}

#[inline(always)]
pub fn bit_reverse(x: usize, bits: u32) -> usize {
    x.reverse_bits() >> (usize::BITS - bits)
}
