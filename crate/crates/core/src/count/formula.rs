//! Closed-form moments of the rainbow perfect matching count of a randomly
//! colored complete k-partite hypergraph with `n` colors.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Natural log of an arbitrary-precision integer (`-inf` for zero).
pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("finite below 2^1000").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit head");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

fn ln_factorial(n: usize) -> f64 {
    // Kahan summation of ln 2 + ... + ln n
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for i in 2..=n {
        let y = (i as f64).ln() - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}

/// `ln E[X] = k ln n! - n ln n`.
pub fn ln_expected_rainbow_count(n: usize, k: usize) -> f64 {
    k as f64 * ln_factorial(n) - n as f64 * (n as f64).ln()
}

/// `E[X] = (n!)^(k-1) * n!/n^n = (n!)^k / n^n`, the mean number of rainbow
/// perfect matchings of the complete k-partite hypergraph colored uniformly
/// from `n` colors.
pub fn expected_rainbow_count(n: usize, k: usize) -> f64 {
    ln_expected_rainbow_count(n, k).exp()
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

fn binomial(n: usize, r: usize) -> BigUint {
    let r = r.min(n - r);
    (0..r).fold(BigUint::one(), |acc, i| {
        acc * BigUint::from(n - i) / BigUint::from(i + 1)
    })
}

/// `N_l`: perfect matchings of the complete k-partite hypergraph with parts of
/// size `l` that share no edge with a fixed perfect matching.
///
/// `N_l = sum_{i=0}^{l} (-1)^i C(l, i) ((l - i)!)^(k-1)`.
pub fn disjoint_completion_count(ell: usize, k: usize) -> BigUint {
    assert!(k >= 2, "k must be at least 2");
    let mut total = BigInt::zero();
    for i in 0..=ell {
        let term = BigInt::from(binomial(ell, i) * factorial(ell - i).pow((k - 1) as u32));
        if i % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    debug_assert!(!total.is_negative());
    total.to_biguint().expect("nonnegative")
}

/// `sum_{l=0}^{n} n! / (l! n^(n-l)) N_{n-l}`, exactly.
fn second_moment_ratio(n: usize, k: usize) -> BigRational {
    let n_fact = BigInt::from(factorial(n));
    let mut sum = BigRational::zero();
    for ell in 0..=n {
        let numer = &n_fact * BigInt::from(disjoint_completion_count(n - ell, k));
        let denom = BigInt::from(factorial(ell)) * BigInt::from(n).pow((n - ell) as u32);
        sum += BigRational::new(numer, denom);
    }
    sum
}

/// `ln E[X^2]` where `E[X^2] = E[X] * sum_{l=0}^{n} n!/(l! n^(n-l)) N_{n-l}`.
pub fn ln_second_moment_exact(n: usize, k: usize) -> f64 {
    let ratio = second_moment_ratio(n, k);
    let ln_ratio = ln_biguint(&ratio.numer().to_biguint().expect("positive"))
        - ln_biguint(&ratio.denom().to_biguint().expect("positive"));
    ln_expected_rainbow_count(n, k) + ln_ratio
}

pub fn second_moment_exact(n: usize, k: usize) -> f64 {
    ln_second_moment_exact(n, k).exp()
}
