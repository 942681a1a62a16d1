use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{spectrum_generators, GroupId};
use crate::error::{domain, Result};
use crate::intarith::{is_prime, is_prime_power, pi_part, pow};
use crate::primpart::{greatest_primitive_value, PrimitiveSpec};

fn check_args(n: u32, q: &BigUint) -> Result<BigUint> {
    if n < 5 || !is_prime(&BigUint::from(n)) {
        return domain(format!("MAGr needs a prime n ≥ 5, got {n}"));
    }
    match is_prime_power(q) {
        Some((p, _)) if p != BigUint::from(2u32) => Ok(p),
        _ => domain(format!("MAGr needs an odd prime power q, got {q}")),
    }
}

/// a = (q^n + 1)/((q + 1)(n, q + 1)) − 1.
pub fn magr_value(n: u32, q: &BigUint) -> Result<BigUint> {
    check_args(n, q)?;
    let q1 = q + 1u32;
    let g = q1.gcd(&BigUint::from(n));
    Ok((pow(q, n) + 1u32) / (q1 * g) - 1u32)
}

/// Σ_{i=2..n} C(n,i)(q+1)^{i−2}(−1)^{n−i}; a = (q+1)/n times this sum when n | q+1.
pub fn magr_congruence_sum(n: u32, q: &BigUint) -> BigInt {
    let x = BigInt::from(q + 1u32);
    let mut binom = BigInt::one();
    let mut total = BigInt::zero();
    for i in 1..=n {
        binom = binom * BigInt::from(n - i + 1) / BigInt::from(i);
        if i >= 2 {
            let term = &binom * num_traits::pow(x.clone(), (i - 2) as usize);
            if (n - i) % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
    }
    total
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MagrCheck {
    pub n: u32,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub q: BigUint,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub a: BigUint,
    pub n_divides_q_plus_1: bool,
    /// (a)_n = (q+1)_n and (q+1)/n | a; present only when n | q+1.
    pub n_part_ok: Option<bool>,
    /// a is not an element order of U_n(q).
    pub membership_false: bool,
    /// (p, k_{n−1}(−q)) with p·k | a; present only when n ∤ q+1.
    pub divisor_witness: Option<(String, String)>,
    pub witness_ok: bool,
    pub a_is_prime_power: bool,
}

impl MagrCheck {
    pub fn passes(&self) -> bool {
        self.n_part_ok != Some(false) && self.membership_false && self.witness_ok && !self.a_is_prime_power
    }
}

pub fn magr_check(n: u32, q: &BigUint) -> Result<MagrCheck> {
    let p = check_args(n, q)?;
    let a = magr_value(n, q)?;
    let nn = BigUint::from(n);
    let q1 = q + 1u32;
    let n_div = (&q1 % &nn).is_zero();
    let n_part_ok = n_div.then(|| {
        let same_part = pi_part(&a, std::slice::from_ref(&nn), false).ok() == pi_part(&q1, std::slice::from_ref(&nn), false).ok();
        same_part && (&a % (&q1 / &nn)).is_zero()
    });
    let group = GroupId::with_field(super::Family::LinearUnitary, crate::Sign::Minus, n, super::FieldSize::new(q.clone())?)?;
    let membership_false = !spectrum_generators(&group)?.contains(&a);
    let (divisor_witness, witness_ok) = if n_div {
        (None, true)
    } else {
        let qi = BigInt::from(q.clone());
        let k = greatest_primitive_value(&PrimitiveSpec::new(-qi, n - 1)?)?;
        let ok = k > BigUint::one() && (&a % (&p * &k)).is_zero();
        (Some((p.to_string(), k.to_string())), ok)
    };
    let a_is_prime_power = is_prime_power(&a).is_some();
    Ok(MagrCheck {
        n,
        q: q.clone(),
        a,
        n_divides_q_plus_1: n_div,
        n_part_ok,
        membership_false,
        divisor_witness,
        witness_ok,
        a_is_prime_power,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn values() {
        assert_eq!(magr_value(5, &b(9)).unwrap(), b(1180));
        assert_eq!(magr_value(7, &b(3)).unwrap(), b(546));
        assert_eq!(magr_value(7, &b(13)).unwrap(), b(640290));
        assert!(magr_value(4, &b(9)).is_err());
        assert!(magr_value(7, &b(8)).is_err());
        assert!(magr_value(7, &b(15)).is_err());
    }

    #[test]
    fn checks() {
        let c = magr_check(5, &b(9)).unwrap();
        assert_eq!(c.n_part_ok, Some(true));
        assert!(c.membership_false && c.passes());
        let c = magr_check(7, &b(3)).unwrap();
        assert_eq!(c.divisor_witness, Some(("3".into(), "13".into())));
        assert!(c.membership_false && c.passes());
        let c = magr_check(7, &b(13)).unwrap();
        assert_eq!(c.n_part_ok, Some(true));
        assert!(c.passes());
    }

    #[test]
    fn congruence_sum_reconstructs_a() {
        for (n, q) in [(5u32, 9u64), (7, 13), (11, 43)] {
            let s = magr_congruence_sum(n, &b(q));
            let a = BigInt::from(magr_value(n, &b(q)).unwrap());
            assert_eq!(a, BigInt::from(q + 1) / BigInt::from(n) * s);
        }
    }
}
