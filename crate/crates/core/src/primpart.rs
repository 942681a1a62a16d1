//! Primitive prime divisors R_i(a), greatest primitive divisors k_i(a) and
//! the residue filter on candidate primes.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::intarith::{abs_nat, factor_nat, greatest_prime_factor, ipow, mult_order, pi_part, FactoredNat};
use crate::polyring::cyclotomic_value;

/// Base a (|a| ≥ 2) and index i ≥ 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PrimitiveSpec {
    #[serde(serialize_with = "crate::report::ser_display")]
    pub base: BigInt,
    pub index: u32,
}

impl PrimitiveSpec {
    pub fn new(base: impl Into<BigInt>, index: u32) -> Result<Self> {
        let base = base.into();
        if abs_nat(&base) < BigUint::from(2u32) {
            return domain(format!("primitive divisors need |a| ≥ 2, got {base}"));
        }
        if index == 0 {
            return domain("index must be positive");
        }
        Ok(PrimitiveSpec { base, index })
    }

    /// |a^i − 1|.
    pub fn power_minus_one(&self) -> BigUint {
        abs_nat(&(ipow(&self.base, self.index) - 1))
    }
}

/// R_i(a) = { r prime : e(r, a) = i }, by factoring a^i − 1.
pub fn primitive_prime_divisors(spec: &PrimitiveSpec) -> Vec<BigUint> {
    let n = spec.power_minus_one();
    let i = BigUint::from(spec.index);
    factor_nat(&n)
        .primes()
        .filter(|r| mult_order(r, &spec.base).is_ok_and(|e| e == i))
        .cloned()
        .collect()
}

/// ∏_{r ∈ R_i(a)} (a^i − 1)_r, computed from the factorization.
pub fn primitive_part_brute_force(spec: &PrimitiveSpec) -> BigUint {
    let n = spec.power_minus_one();
    let primes = primitive_prime_divisors(spec);
    pi_part(&n, &primes, false).expect("a^i − 1 is nonzero for |a| ≥ 2")
}

/// k_i(a) = |Φ_i(a)| / (r, Φ_l(a)), r the greatest prime of i and l = (i)_{r'}.
pub fn greatest_primitive_value(spec: &PrimitiveSpec) -> Result<BigUint> {
    if spec.index < 3 {
        return Err(Error::Range(format!("k_i(a) is defined here for i ≥ 3, got i = {}", spec.index)));
    }
    let i = spec.index as u64;
    let r = greatest_prime_factor(i);
    let mut l = i;
    while l % r == 0 {
        l /= r;
    }
    let phi_i = abs_nat(&cyclotomic_value(spec.index, &spec.base));
    let phi_l = abs_nat(&cyclotomic_value(l as u32, &spec.base));
    let g = phi_l.gcd(&BigUint::from(r));
    Ok(phi_i / g)
}

/// k_i(a) with its factorization.
pub fn greatest_primitive_divisor(spec: &PrimitiveSpec) -> Result<FactoredNat> {
    greatest_primitive_value(spec).map(|k| factor_nat(&k))
}

/// The part of n supported on primes p ≡ 1 (mod modulus).
pub fn residue_filter(n: &FactoredNat, modulus: u64) -> FactoredNat {
    let m = BigUint::from(modulus.max(1));
    n.filter(|p| (p % &m).is_one() || modulus == 1)
}

/// Modulus of the sharpened congruence for primitive primes: 2i for odd i
/// and negative base, i otherwise.
pub fn primitive_modulus(spec: &PrimitiveSpec) -> u64 {
    let i = spec.index as u64;
    if i % 2 == 1 && spec.base < BigInt::from(0) {
        2 * i
    } else {
        i
    }
}

/// Bang–Zsigmondy exceptions: (a, i) with R_i(a) empty.
pub const ZSIGMONDY_EXCEPTIONS: [(i64, u32); 6] = [(2, 1), (2, 6), (-2, 2), (-2, 3), (3, 1), (-3, 2)];

pub fn gpd_u64(base: i64, index: u32) -> Result<u64> {
    let spec = PrimitiveSpec::new(base, index)?;
    greatest_primitive_value(&spec)?.to_u64().ok_or_else(|| Error::Range("k_i(a) exceeds 64 bits".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intarith::factor_u64;

    fn spec(a: i64, i: u32) -> PrimitiveSpec {
        PrimitiveSpec::new(a, i).unwrap()
    }

    #[test]
    fn primitive_divisor_examples() {
        assert!(primitive_prime_divisors(&spec(2, 6)).is_empty());
        assert_eq!(primitive_prime_divisors(&spec(2, 10)), vec![BigUint::from(11u32)]);
        assert_eq!(primitive_prime_divisors(&spec(-3, 6)), vec![BigUint::from(13u32)]);
    }

    #[test]
    fn greatest_examples() {
        assert_eq!(gpd_u64(2, 6).unwrap(), 1);
        assert_eq!(gpd_u64(-3, 7).unwrap(), 547);
        assert_eq!(gpd_u64(2, 12).unwrap(), 13);
        assert!(matches!(gpd_u64(5, 2), Err(Error::Range(_))));
        assert!(PrimitiveSpec::new(1, 3).is_err());
    }

    #[test]
    fn residue_examples() {
        assert_eq!(residue_filter(&factor_u64(63), 6).value(), &BigUint::from(7u32));
        assert_eq!(residue_filter(&factor_u64(1891), 6).value(), &BigUint::from(1891u32));
        assert!(residue_filter(&factor_u64(1891), 22).is_one());
    }

    #[test]
    fn sharpened_modulus() {
        assert_eq!(primitive_modulus(&spec(-3, 7)), 14);
        assert_eq!(primitive_modulus(&spec(3, 7)), 7);
        assert_eq!(primitive_modulus(&spec(-3, 6)), 6);
    }
}
