use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{cyclotomic_product, IntPolynomial, Sign};
use crate::error::{Error, Result};
use crate::intarith::phi_sum;

/// Smallest integer B ≥ 1 with |a_n|·B^i ≥ 2^i·|a_{n−i}| for all i.
///
/// Every complex root z satisfies |z| ≤ B (Fujiwara), so a polynomial with
/// positive leading coefficient is positive on (B, ∞).
pub fn positivity_bound(p: &IntPolynomial) -> Option<BigUint> {
    let n = p.degree()?;
    let lc = p.leading()?.magnitude().clone();
    let mut b = BigUint::one();
    for i in 1..=n {
        let a = p.coeff(n - i).magnitude().clone();
        if a.is_zero() {
            continue;
        }
        let rhs = (BigUint::one() << i) * &a;
        let mut cand = (&rhs / &lc).nth_root(i as u32).max(BigUint::one());
        while num_traits::pow(cand.clone(), i) * &lc < rhs {
            cand += 1u32;
        }
        b = b.max(cand);
    }
    Some(b)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhiCertificate {
    pub m: u32,
    /// Exponent F(m) − 2 on the right-hand side.
    pub rhs_exponent: u64,
    /// Per sign: (sign, root bound B, every integer in 2..=B checked positive).
    pub per_sign: Vec<(char, String, bool)>,
    pub holds: bool,
}

/// Certifies ∏_{i≤m} Φ_i(±u) > u^{F(m)−2} for all integers u ≥ 2.
pub fn phi_inequality_certificate(m: u32) -> Result<PhiCertificate> {
    phi_certificate_with_slack(m, 2)
}

/// Same as above with u^{F(m)−slack} on the right.
pub(crate) fn phi_certificate_with_slack(m: u32, slack: u64) -> Result<PhiCertificate> {
    if m == 0 {
        return Err(Error::Range("m must be positive".into()));
    }
    let f = phi_sum(m as u64)?;
    let rhs_exponent = f.saturating_sub(slack);
    let mut per_sign = Vec::new();
    let mut holds = true;
    for sign in [Sign::Plus, Sign::Minus] {
        let prod = cyclotomic_product(m, sign);
        let diff = &prod - &IntPolynomial::monomial(BigInt::one(), rhs_exponent as usize);
        let lc_positive = diff.leading().is_some_and(|c| c.is_positive());
        let bound = positivity_bound(&diff).unwrap_or_else(BigUint::one);
        let top = bound.to_u64().unwrap_or(u64::MAX);
        let ok = lc_positive && (2..=top).all(|u| diff.eval_i64(u as i64).is_positive());
        holds &= ok;
        per_sign.push((sign.symbol(), bound.to_string(), ok));
    }
    Ok(PhiCertificate { m, rhs_exponent, per_sign, holds })
}

/// The inequality for 3 ≤ m ≤ 24.
pub fn verify_phi_inequality(m: u32) -> Result<bool> {
    if !(3..=24).contains(&m) {
        return Err(Error::Range(format!("verify_phi_inequality expects 3 ≤ m ≤ 24, got {m}")));
    }
    Ok(phi_inequality_certificate(m)?.holds)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_covers_roots() {
        // (u − 5)(u + 7)(u − 1)
        let p = IntPolynomial::from_i64(&[35, -37, -1, 1]);
        let b = positivity_bound(&p).unwrap();
        assert!(b >= BigUint::from(7u32));
        assert_eq!(positivity_bound(&IntPolynomial::from_i64(&[1])), Some(BigUint::one()));
    }

    #[test]
    fn examples() {
        assert!(verify_phi_inequality(3).unwrap());
        assert!(verify_phi_inequality(12).unwrap());
        assert!(verify_phi_inequality(24).unwrap());
        assert!(verify_phi_inequality(2).is_err());
        assert!(verify_phi_inequality(25).is_err());
    }

    #[test]
    fn fails_without_slack() {
        // With exponent F(m) the inequality is false at u = 2 for the minus sign.
        let c = phi_certificate_with_slack(5, 0).unwrap();
        assert!(!c.holds);
    }
}
