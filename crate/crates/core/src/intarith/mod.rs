//! Exact integer arithmetic: factorization, π-parts, multiplicative orders,
//! prime-power detection and totient sums.

mod factor;
mod prime;

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{domain, Result};

pub use factor::cache_len as factor_cache_len;
pub use prime::{is_prime, is_prime_int, jacobi, prime_check, sieve, PrimalityMethod, DETERMINISTIC_MR_BOUND, TRIAL_LIMIT};

/// A positive integer together with its prime factorization.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FactoredNat {
    value: BigUint,
    factors: Vec<(BigUint, u32)>,
}

impl FactoredNat {
    pub fn one() -> Self {
        FactoredNat { value: BigUint::one(), factors: Vec::new() }
    }

    /// Builds from (prime, exponent) pairs. Primes are checked, merged and sorted.
    pub fn from_factors(pairs: impl IntoIterator<Item = (BigUint, u32)>) -> Result<Self> {
        let mut map = std::collections::BTreeMap::new();
        for (p, e) in pairs {
            if e == 0 {
                continue;
            }
            if !is_prime(&p) {
                return domain(format!("{p} is not prime"));
            }
            *map.entry(p).or_insert(0u32) += e;
        }
        let value = map.iter().fold(BigUint::one(), |acc, (p, e)| acc * pow(p, *e));
        Ok(FactoredNat { value, factors: map.into_iter().collect() })
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_prime(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }

    /// Keeps the prime powers selected by `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&BigUint) -> bool) -> FactoredNat {
        let factors: Vec<_> = self.factors.iter().filter(|(p, _)| keep(p)).cloned().collect();
        let value = factors.iter().fold(BigUint::one(), |acc, (p, e)| acc * pow(p, *e));
        FactoredNat { value, factors }
    }

    pub fn mul(&self, other: &FactoredNat) -> FactoredNat {
        let merged = self.factors.iter().chain(other.factors.iter()).cloned();
        FactoredNat::from_factors(merged).expect("factors of factored values are prime")
    }

    /// All positive divisors, ascending.
    pub fn divisors(&self) -> Vec<BigUint> {
        let mut out = vec![BigUint::one()];
        for (p, e) in &self.factors {
            let mut next = Vec::with_capacity(out.len() * (*e as usize + 1));
            for d in &out {
                let mut pk = d.clone();
                next.push(pk.clone());
                for _ in 0..*e {
                    pk *= p;
                    next.push(pk.clone());
                }
            }
            out = next;
        }
        out.sort();
        out
    }

    /// Renders as `p^e . q^f`; 1 renders as `1`.
    pub fn factor_string(&self) -> String {
        if self.factors.is_empty() {
            return "1".into();
        }
        self.factors.iter().map(|(p, e)| format!("{p}^{e}")).collect::<Vec<_>>().join(" . ")
    }
}

impl fmt::Display for FactoredNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Serialize for FactoredNat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let factors: Vec<(String, u32)> = self.factors.iter().map(|(p, e)| (p.to_string(), *e)).collect();
        let mut st = s.serialize_struct("FactoredNat", 2)?;
        st.serialize_field("value", &self.value.to_string())?;
        st.serialize_field("factors", &factors)?;
        st.end()
    }
}

pub(crate) fn pow(b: &BigUint, e: u32) -> BigUint {
    num_traits::pow(b.clone(), e as usize)
}

pub(crate) fn ipow(b: &BigInt, e: u32) -> BigInt {
    num_traits::pow(b.clone(), e as usize)
}

/// Factors a positive integer; zero and negative inputs are domain errors.
pub fn factorize(n: &BigInt) -> Result<FactoredNat> {
    if n.sign() != Sign::Plus {
        return domain(format!("factorize expects a positive integer, got {n}"));
    }
    Ok(factor_nat(n.magnitude()))
}

/// Factors a positive natural number. Panics on zero.
pub fn factor_nat(n: &BigUint) -> FactoredNat {
    assert!(!n.is_zero(), "factor_nat(0)");
    let factors = factor::factor_biguint(n);
    FactoredNat { value: n.clone(), factors: (*factors).clone() }
}

pub fn factor_u64(n: u64) -> FactoredNat {
    factor_nat(&BigUint::from(n))
}

/// Largest divisor of `n` supported on `primes`, or on their complement.
pub fn pi_part(n: &BigUint, primes: &[BigUint], complement: bool) -> Result<BigUint> {
    if n.is_zero() {
        return domain("pi_part expects n ≥ 1");
    }
    let mut part = BigUint::one();
    let mut rest = n.clone();
    for p in primes {
        if p < &BigUint::from(2u32) {
            continue;
        }
        while (&rest % p).is_zero() {
            rest /= p;
            part *= p;
        }
    }
    Ok(if complement { rest } else { part })
}

/// Returns (p, k) with p^k = n, k ≥ 1, when n is a prime power.
pub fn is_prime_power(n: &BigUint) -> Option<(BigUint, u32)> {
    if n <= &BigUint::one() {
        return None;
    }
    for &p in prime::SMALL_PRIMES.iter() {
        let p = BigUint::from(p);
        if &p * &p > *n {
            return Some((n.clone(), 1));
        }
        if (n % &p).is_zero() {
            let mut m = n.clone();
            let mut k = 0;
            while (&m % &p).is_zero() {
                m /= &p;
                k += 1;
            }
            return if m.is_one() { Some((p, k)) } else { None };
        }
    }
    // No prime factor below the trial limit: the exponent is small.
    let max_k = (n.bits() / 16) as u32 + 1;
    for k in (1..=max_k).rev() {
        let r = n.nth_root(k);
        if pow(&r, k) == *n && is_prime(&r) {
            return Some((r, k));
        }
    }
    None
}

pub fn is_prime_power_u64(n: u64) -> Option<(u64, u32)> {
    is_prime_power(&BigUint::from(n)).map(|(p, k)| (p.to_u64().unwrap(), k))
}

/// e(r, a): multiplicative order of a modulo the prime r, with the r = 2 convention.
pub fn mult_order(r: &BigUint, a: &BigInt) -> Result<BigUint> {
    if !is_prime(r) {
        return domain(format!("mult_order modulus {r} is not prime"));
    }
    let two = BigUint::from(2u32);
    if *r == two {
        if a.is_even() {
            return domain(format!("e(2, a) needs odd a, got {a}"));
        }
        let m4 = a.mod_floor(&BigInt::from(4));
        return Ok(if m4.is_one() { BigUint::one() } else { two });
    }
    let ri = BigInt::from(r.clone());
    let a_mod = a.mod_floor(&ri).to_biguint().unwrap();
    if a_mod.is_zero() {
        return domain(format!("{r} divides {a}"));
    }
    let mut e = r - 1u32;
    for (p, _) in factor_nat(&e).factors().to_vec() {
        while (&e % &p).is_zero() && a_mod.modpow(&(&e / &p), r).is_one() {
            e /= &p;
        }
    }
    Ok(e)
}

pub fn mult_order_u64(r: u64, a: i64) -> Result<u64> {
    mult_order(&BigUint::from(r), &BigInt::from(a)).map(|e| e.to_u64().unwrap())
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    assert!(n >= 1);
    let mut out = n;
    for (p, _) in factor_u64(n).factors() {
        let p = p.to_u64().unwrap();
        out = out / p * (p - 1);
    }
    out
}

/// F(m) = φ(1) + ... + φ(m).
pub fn phi_sum(m: u64) -> Result<u64> {
    if m == 0 {
        return domain("phi_sum expects m ≥ 1");
    }
    Ok((1..=m).map(totient).sum())
}

/// Greatest prime divisor of n ≥ 2.
pub fn greatest_prime_factor(n: u64) -> u64 {
    factor_u64(n).factors().last().map(|(p, _)| p.to_u64().unwrap()).unwrap_or(1)
}

pub fn gcd_big(a: &BigUint, b: &BigUint) -> BigUint {
    a.gcd(b)
}

pub fn lcm_all<'a>(values: impl IntoIterator<Item = &'a BigUint>) -> BigUint {
    values.into_iter().fold(BigUint::one(), |acc, v| acc.lcm(v))
}

/// |n| as a natural number.
pub fn abs_nat(n: &BigInt) -> BigUint {
    n.abs().to_biguint().unwrap()
}

/// All prime powers q with lo ≤ q ≤ hi.
pub fn prime_powers_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(2)..=hi).filter(|&q| is_prime_power_u64(q).is_some()).collect()
}

/// Characteristic (the underlying prime) of a prime power.
pub fn characteristic(q: &BigUint) -> Option<BigUint> {
    is_prime_power(q).map(|(p, _)| p)
}
