//! Roots of q(q^{n−1}−1)/(q+1) = k(k^{m−1}−1)/(k−τ) with k = k_{n−1}(−q).
//!
//! Write P(q) = |Φ_{n−1}(−q)| and r for the greatest prime of n−1, so that
//! P/r ≤ k ≤ P. With D = φ(n−1)(m−1) one side eventually dominates:
//! D > n−1 uses h(k) ≥ k^{m−1}/2 and LHS < q^{n−1}; D < n−1 uses
//! h(k) ≤ 2k^{m−1} and LHS ≥ q^{n−1}/2. Either way a polynomial T(q) that is
//! positive past its root bound separates the sides, and the finitely many
//! q below the bound are checked exactly.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::intarith::{greatest_prime_factor, is_prime, is_prime_power_u64, pow, totient};
use crate::polyring::{cyclotomic, positivity_bound, IntPolynomial};
use crate::primpart::{greatest_primitive_value, PrimitiveSpec};
use crate::Sign;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dominance {
    Rhs,
    Lhs,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeparationCertificate {
    pub direction: Dominance,
    /// φ(n−1)(m−1).
    pub degree: u64,
    /// T(q) > 0 for all q > bound.
    pub bound: u64,
    /// The separating polynomial.
    pub polynomial: String,
    /// Prime powers 4 ≤ q ≤ bound checked exactly.
    pub scanned: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KRoots {
    pub n: u32,
    pub m: u32,
    pub tau: Sign,
    pub roots: Vec<u64>,
    pub certificate: SeparationCertificate,
}

/// Left side q(q^{n−1}−1)/(q+1).
pub fn k_lhs(n: u32, q: &BigUint) -> BigUint {
    q * (pow(q, n - 1) - 1u32) / (q + 1u32)
}

/// Right side k(k^{m−1}−1)/(k−τ), or None when it is not an integer.
pub fn k_rhs(m: u32, tau: Sign, k: &BigUint) -> Option<BigUint> {
    let num = k * (pow(k, m - 1) - 1u32);
    let den = match tau {
        Sign::Plus => k - 1u32,
        Sign::Minus => k + 1u32,
    };
    let (quot, rem) = num_integer::Integer::div_rem(&num, &den);
    (rem == BigUint::from(0u32)).then_some(quot)
}

/// Separating polynomial and its direction.
pub fn separation_polynomial(n: u32, m: u32) -> Result<(Dominance, IntPolynomial, u64)> {
    let d = totient((n - 1) as u64) * (m - 1) as u64;
    let p = cyclotomic(n - 1, Sign::Minus);
    let pm = p.pow(m - 1);
    let qn = IntPolynomial::monomial(BigInt::one(), (n - 1) as usize);
    let r = BigInt::from(greatest_prime_factor((n - 1) as u64));
    if d > (n - 1) as u64 {
        let rhs = qn.scale(&(BigInt::from(2) * num_traits::pow(r, (m - 1) as usize)));
        Ok((Dominance::Rhs, &pm - &rhs, d))
    } else if d < (n - 1) as u64 {
        Ok((Dominance::Lhs, &qn - &pm.scale(&BigInt::from(4)), d))
    } else {
        Err(Error::Inconclusive(format!("φ(n−1)(m−1) = n−1 for (n, m) = ({n}, {m}); no dominant side")))
    }
}

/// Prime-power roots q ≥ 4 of the k-equation, complete by separation.
pub fn k_equation_roots(n: u32, m: u32, tau: Sign, cap: u64) -> Result<KRoots> {
    if n < 5 || !is_prime(&BigUint::from(n)) {
        return domain(format!("n must be a prime ≥ 5, got {n}"));
    }
    if m < 3 || !is_prime(&BigUint::from(m)) {
        return domain(format!("m must be an odd prime, got {m}"));
    }
    let (direction, t, degree) = separation_polynomial(n, m)?;
    if !t.leading().is_some_and(|c| c.is_positive()) {
        return Err(Error::Inconclusive("separating polynomial has non-positive leading coefficient".into()));
    }
    let bound = positivity_bound(&t).unwrap_or_else(BigUint::one);
    let top = bound.to_u64().filter(|&b| b <= cap).ok_or_else(|| Error::ScanCap {
        cap,
        needed: bound.to_string(),
    })?;
    let mut roots = Vec::new();
    let mut scanned = 0;
    for q in 4..=top.max(4) {
        if is_prime_power_u64(q).is_none() {
            continue;
        }
        scanned += 1;
        let qb = BigUint::from(q);
        let k = greatest_primitive_value(&PrimitiveSpec::new(-BigInt::from(q), n - 1)?)?;
        if k_rhs(m, tau, &k).is_some_and(|rhs| rhs == k_lhs(n, &qb)) {
            roots.push(q);
        }
    }
    Ok(KRoots {
        n,
        m,
        tau,
        roots,
        certificate: SeparationCertificate {
            direction,
            degree,
            bound: top,
            polynomial: t.fmt_var("q"),
            scanned,
        },
    })
}

/// Re-checks T(q) > 0 on (bound, bound + 64] and that bound dominates the root bound.
pub fn recheck_separation(n: u32, m: u32, cert: &SeparationCertificate) -> Result<bool> {
    let (dir, t, _) = separation_polynomial(n, m)?;
    let b = positivity_bound(&t).and_then(|b| b.to_u64());
    let sampled = (cert.bound + 1..=cert.bound + 64).all(|q| t.eval_i64(q as i64).is_positive());
    Ok(dir == cert.direction && b.is_some_and(|b| b <= cert.bound) && sampled)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_pairs_have_no_roots() {
        for (n, m, tau) in [(7, 5, Sign::Plus), (11, 11, Sign::Minus), (7, 3, Sign::Minus)] {
            let r = k_equation_roots(n, m, tau, 10_000_000).unwrap();
            assert!(r.roots.is_empty(), "{n} {m}");
            assert!(recheck_separation(n, m, &r.certificate).unwrap());
        }
        let r = k_equation_roots(7, 3, Sign::Minus, 10_000_000).unwrap();
        assert_eq!(r.certificate.direction, Dominance::Lhs);
        let r = k_equation_roots(7, 5, Sign::Plus, 10_000_000).unwrap();
        assert_eq!(r.certificate.direction, Dominance::Rhs);
    }

    #[test]
    fn cap_is_reported() {
        let e = k_equation_roots(7, 5, Sign::Plus, 1).unwrap_err();
        assert!(matches!(e, Error::ScanCap { .. }));
    }

    #[test]
    fn sides_agree_on_constructed_root() {
        // k(k^{m−1}−1)/(k−τ) at τ = +, m = 3 is k(k+1)
        assert_eq!(k_rhs(3, Sign::Plus, &BigUint::from(5u32)), Some(BigUint::from(30u32)));
        assert_eq!(k_lhs(3, &BigUint::from(5u32)), BigUint::from(20u32));
    }
}
