//! Dense integer polynomials, cyclotomic polynomials and the integral gcd.

mod bounds;
mod gcd;
mod hnf;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use dashmap::DashMap;
use num_bigint::{BigInt, BigUint, Sign as BigSign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;

pub use bounds::{phi_inequality_certificate, positivity_bound, verify_phi_inequality, PhiCertificate};
pub use gcd::{gcdex_content, integral_gcd, lattice_contains, IntegralGcd};
pub use hnf::{hermite_normal_form, Hnf};

/// Sign applied to the variable: `Plus` is u, `Minus` is −u.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_i64(s: i64) -> Option<Self> {
        match s {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// Univariate polynomial with exact integer coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    /// c·u^k.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_i64(&self, x: i64) -> BigInt {
        self.eval(&BigInt::from(x))
    }

    /// p(−u).
    pub fn negate_var(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
            .collect();
        Self::new(coeffs)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiplies by u^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![BigInt::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Self::new(v)
    }

    /// gcd of the coefficients (0 for the zero polynomial).
    pub fn content(&self) -> BigUint {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c)).magnitude().clone()
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = BigInt::from(self.content());
        if self.leading().unwrap().sign() == BigSign::Minus {
            c = -c;
        }
        Self::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * BigInt::from(k)).collect())
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Quotient and remainder by `d`, defined when every step divides exactly
    /// by the leading coefficient of `d` (always the case for monic `d`).
    pub fn div_rem(&self, d: &Self) -> Option<(Self, Self)> {
        let dd = d.degree()?;
        let lc = d.leading()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Some((Self::zero(), self.clone()));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = &rem[k];
            if c.is_zero() {
                continue;
            }
            let (q, r) = c.div_rem(lc);
            if !r.is_zero() {
                return None;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k - dd + j] -= &q * dc;
            }
            quot[k - dd] = q;
        }
        Some((Self::new(quot), Self::new(rem)))
    }

    /// Exact quotient self / d, if it exists in Z[u].
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d)?;
        r.is_zero().then_some(q)
    }

    pub fn fmt_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        out
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("u"))
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let v = (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        IntPolynomial::new(v)
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let v = (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect();
        IntPolynomial::new(v)
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut v = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        IntPolynomial::new(v)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

static CYCLOTOMIC: Lazy<DashMap<u32, IntPolynomial>> = Lazy::new(DashMap::new);

fn cyclotomic_plus(i: u32) -> IntPolynomial {
    if let Some(p) = CYCLOTOMIC.get(&i) {
        return p.clone();
    }
    // u^i − 1 divided by Φ_d for every proper divisor d.
    let mut p = &IntPolynomial::monomial(BigInt::one(), i as usize) - &IntPolynomial::one();
    for d in 1..i {
        if i % d == 0 {
            p = p.div_exact(&cyclotomic_plus(d)).expect("cyclotomic division is exact");
        }
    }
    CYCLOTOMIC.entry(i).or_insert(p).clone()
}

/// Φ_i(sign·u) expanded in u.
pub fn cyclotomic(i: u32, sign: Sign) -> IntPolynomial {
    assert!(i >= 1, "cyclotomic index must be positive");
    let p = cyclotomic_plus(i);
    match sign {
        Sign::Plus => p,
        Sign::Minus => p.negate_var(),
    }
}

/// ∏_{i=1..m} Φ_i(sign·u).
pub fn cyclotomic_product(m: u32, sign: Sign) -> IntPolynomial {
    (1..=m).fold(IntPolynomial::one(), |acc, i| &acc * &cyclotomic(i, sign))
}

/// Exact value p(x).
pub fn eval(p: &IntPolynomial, x: &BigInt) -> BigInt {
    p.eval(x)
}

/// Φ_i(x) at an integer point.
pub fn cyclotomic_value(i: u32, x: &BigInt) -> BigInt {
    cyclotomic_plus(i).eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intarith::{phi_sum, totient};

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn cyclotomic_examples() {
        assert_eq!(cyclotomic(6, Sign::Plus), p(&[1, -1, 1]));
        assert_eq!(cyclotomic(3, Sign::Minus), p(&[1, -1, 1]));
        assert_eq!(cyclotomic(1, Sign::Minus), p(&[-1, -1]));
        for i in 1..=40 {
            assert_eq!(cyclotomic(i, Sign::Plus).degree(), Some(totient(i as u64) as usize));
        }
    }

    #[test]
    fn product_examples() {
        assert_eq!(cyclotomic_product(3, Sign::Plus).eval_i64(2), BigInt::from(21));
        assert_eq!(cyclotomic_product(2, Sign::Minus).eval_i64(3), BigInt::from(8));
        let d = cyclotomic_product(24, Sign::Plus).degree().unwrap() as u64;
        assert_eq!(d, phi_sum(24).unwrap());
    }

    #[test]
    fn eval_examples() {
        assert_eq!(eval(&cyclotomic(6, Sign::Plus), &BigInt::from(-3)), BigInt::from(13));
        let v = eval(&cyclotomic(7, Sign::Minus), &BigInt::from(3));
        assert_eq!(v, BigInt::from(547));
        assert_eq!(eval(&IntPolynomial::zero(), &BigInt::from(5)), BigInt::zero());
    }

    #[test]
    fn normalization_and_degree() {
        let a = IntPolynomial::from_i64(&[1, 2, 0, 0]);
        assert_eq!(a.degree(), Some(1));
        let b = p(&[-1, 0, 3]);
        assert_eq!((&a * &b).degree(), Some(3));
        assert!((&a - &a).is_zero());
        assert_eq!(IntPolynomial::zero().degree(), None);
    }

    #[test]
    fn division() {
        let f = p(&[-1, 0, 0, 1]);
        let (q, r) = f.div_rem(&p(&[-1, 1])).unwrap();
        assert_eq!(q, p(&[1, 1, 1]));
        assert!(r.is_zero());
        assert!(p(&[1, 1]).div_rem(&p(&[1, 2])).is_none());
        assert_eq!(p(&[3, 6, 9]).primitive_part(), p(&[1, 2, 3]));
        assert_eq!(p(&[3, 6, -9]).primitive_part(), p(&[-1, -2, 3]));
        assert_eq!(p(&[4, 6]).content(), BigUint::from(2u32));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, -1, 1]).to_string(), "u^2 - u + 1");
        assert_eq!(p(&[-1, -1]).to_string(), "-u - 1");
        assert_eq!(p(&[0, 3]).to_string(), "3*u");
    }
}
