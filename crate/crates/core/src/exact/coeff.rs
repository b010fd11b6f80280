use serde::{Deserialize, Serialize};
use std::fmt;

use super::ExactError;

/// The coefficient rings that appear as bases of graded rings: the integers,
/// the integers localized at a prime, and prime fields.
///
/// Localized computations are carried out over the integers and localized at
/// the end (see [`FGAbelianGroup::localize_at_p`](super::FGAbelianGroup::localize_at_p)).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "ring", content = "p")]
pub enum CoefficientRing {
    Integers,
    IntegersLocalizedAt(u64),
    PrimeField(u64),
}

impl CoefficientRing {
    pub fn integers() -> Self {
        CoefficientRing::Integers
    }

    pub fn localized_at(p: u64) -> Result<Self, ExactError> {
        check_prime(p)?;
        Ok(CoefficientRing::IntegersLocalizedAt(p))
    }

    pub fn prime_field(p: u64) -> Result<Self, ExactError> {
        check_prime(p)?;
        Ok(CoefficientRing::PrimeField(p))
    }

    /// The characteristic used for arithmetic: `Some(p)` for prime fields,
    /// `None` when entries are exact integers.
    pub fn field_characteristic(&self) -> Option<u64> {
        match self {
            CoefficientRing::PrimeField(p) => Some(*p),
            _ => None,
        }
    }

    /// The prime at which integral answers are localized, if any.
    pub fn localization_prime(&self) -> Option<u64> {
        match self {
            CoefficientRing::IntegersLocalizedAt(p) => Some(*p),
            _ => None,
        }
    }

    pub fn is_field(&self) -> bool {
        matches!(self, CoefficientRing::PrimeField(_))
    }

    /// Re-validates the prime carried by a deserialized value.
    pub fn validate(&self) -> Result<(), ExactError> {
        match self {
            CoefficientRing::Integers => Ok(()),
            CoefficientRing::IntegersLocalizedAt(p) | CoefficientRing::PrimeField(p) => {
                check_prime(*p)
            }
        }
    }
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientRing::Integers => write!(f, "Z"),
            CoefficientRing::IntegersLocalizedAt(p) => write!(f, "Z_({p})"),
            CoefficientRing::PrimeField(p) => write!(f, "F_{p}"),
        }
    }
}

fn check_prime(p: u64) -> Result<(), ExactError> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(ExactError::NotPrime(p))
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test for all `u64` (Miller-Rabin with the first
/// twelve prime bases, which is exact below 3.3 * 10^24).
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The p-adic valuation of a positive integer.
pub fn p_adic_valuation(mut n: u64, p: u64) -> u32 {
    assert!(n > 0 && p > 1);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Base-p digits of `n`, least significant first.
pub fn p_adic_digits(mut n: u64, p: u64) -> Vec<u64> {
    let mut digits = Vec::new();
    while n > 0 {
        digits.push(n % p);
        n /= p;
    }
    digits
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes_agree_with_trial_division() {
        for n in 0u64..2000 {
            let trial = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime(n), trial, "n = {n}");
        }
    }

    #[test]
    fn large_values() {
        assert!(is_prime(2_147_483_647));
        assert!(!is_prime(2_147_483_649));
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn rejects_composites() {
        assert!(CoefficientRing::prime_field(9).is_err());
        assert!(CoefficientRing::localized_at(1).is_err());
        assert_eq!(CoefficientRing::prime_field(7).unwrap().field_characteristic(), Some(7));
    }

    #[test]
    fn valuations_and_digits() {
        assert_eq!(p_adic_valuation(54, 3), 3);
        assert_eq!(p_adic_valuation(10, 3), 0);
        assert_eq!(p_adic_digits(11, 3), vec![2, 0, 1]);
    }
}
