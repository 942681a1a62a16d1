use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::hnf::{hermite_normal_form, Hnf};
use super::IntPolynomial;
use crate::error::{domain, Result};
use crate::intarith::factor_nat;

/// c·G = A·f + B·g with G the primitive gcd of f and g and c minimal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralGcd {
    pub content: BigUint,
    pub common: IntPolynomial,
    pub witness_f: IntPolynomial,
    pub witness_g: IntPolynomial,
    /// Denominator bound from the rational extended Euclid; `content` divides it.
    pub gcdex_bound: BigUint,
}

/// Rows x^i·f (i ≤ deg g) and x^j·g (j ≤ deg f), highest degree first.
fn sylvester_rows(f: &IntPolynomial, g: &IntPolynomial) -> (Vec<Vec<BigInt>>, usize) {
    let df = f.degree().unwrap();
    let dg = g.degree().unwrap();
    let width = df + dg + 1;
    let mut rows = Vec::with_capacity(width + 1);
    for (p, count) in [(f, dg), (g, df)] {
        for i in 0..=count {
            let shifted = p.shift(i);
            rows.push((0..width).map(|c| shifted.coeff(width - 1 - c)).collect());
        }
    }
    (rows, width)
}

fn to_vector(p: &IntPolynomial, width: usize) -> Vec<BigInt> {
    (0..width).map(|c| p.coeff(width - 1 - c)).collect()
}

fn from_vector(v: &[BigInt]) -> IntPolynomial {
    IntPolynomial::new(v.iter().rev().cloned().collect())
}

fn lattice(f: &IntPolynomial, g: &IntPolynomial) -> (Hnf, usize) {
    let (rows, width) = sylvester_rows(f, g);
    (hermite_normal_form(&rows), width)
}

/// Whether h = A·f + B·g for integer A, B within the Sylvester degree bounds.
pub fn lattice_contains(f: &IntPolynomial, g: &IntPolynomial, h: &IntPolynomial) -> bool {
    let (hnf, width) = lattice(f, g);
    if h.degree().is_some_and(|d| d >= width) {
        return false;
    }
    hnf.contains(&to_vector(h, width))
}

pub fn integral_gcd(f: &IntPolynomial, g: &IntPolynomial) -> Result<IntegralGcd> {
    if f.is_zero() || g.is_zero() {
        return domain("integral_gcd expects nonzero polynomials");
    }
    let dg = g.degree().unwrap();
    let (hnf, _) = lattice(f, g);
    let last = hnf.rows.len() - 1;
    let r = from_vector(&hnf.rows[last]);
    let content = r.content();
    let common = r.primitive_part();
    let t = &hnf.transform[last];
    let witness_f = IntPolynomial::new(t[..=dg].to_vec());
    let witness_g = IntPolynomial::new(t[dg + 1..].to_vec());
    let (d, h) = gcdex_content(f, g);
    debug_assert_eq!(h, common);
    let lc = common.leading().unwrap().magnitude().clone();
    let gcdex_bound = &d / &lc;
    Ok(IntegralGcd { content, common, witness_f, witness_g, gcdex_bound })
}

impl IntegralGcd {
    /// Checks A·f + B·g = c·G.
    pub fn check_witness(&self, f: &IntPolynomial, g: &IntPolynomial) -> bool {
        let lhs = &(&self.witness_f * f) + &(&self.witness_g * g);
        lhs == self.common.scale(&BigInt::from(self.content.clone()))
    }

    /// For every prime p | c, (c/p)·G must lie outside the lattice.
    pub fn certify_minimal(&self, f: &IntPolynomial, g: &IntPolynomial) -> bool {
        let (hnf, width) = lattice(f, g);
        factor_nat(&self.content).primes().all(|p| {
            let smaller = BigInt::from(&self.content / p);
            !hnf.contains(&to_vector(&self.common.scale(&smaller), width))
        })
    }
}

type RatPoly = Vec<BigRational>;

fn rp_trim(mut p: RatPoly) -> RatPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn rp_from(p: &IntPolynomial) -> RatPoly {
    p.coeffs().iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

fn rp_sub(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let n = a.len().max(b.len());
    let z = BigRational::zero();
    rp_trim((0..n).map(|k| a.get(k).unwrap_or(&z) - b.get(k).unwrap_or(&z)).collect())
}

fn rp_mul(a: &RatPoly, b: &RatPoly) -> RatPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    rp_trim(v)
}

fn rp_divrem(a: &RatPoly, b: &RatPoly) -> (RatPoly, RatPoly) {
    let mut r = a.clone();
    let db = b.len() - 1;
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    let lc = b.last().unwrap();
    for k in (db..r.len()).rev() {
        if r[k].is_zero() {
            continue;
        }
        let c = &r[k] / lc;
        for (j, bc) in b.iter().enumerate() {
            let delta = &c * bc;
            r[k - db + j] -= delta;
        }
        q[k - db] = c;
    }
    (rp_trim(q), rp_trim(r))
}

/// Rational extended Euclid: returns (D, G) where a·f + b·g = h is the monic
/// gcd, D is the lcm of the denominators of a and b, and G the primitive
/// integer multiple of h.
pub fn gcdex_content(f: &IntPolynomial, g: &IntPolynomial) -> (BigUint, IntPolynomial) {
    let (mut r0, mut r1) = (rp_from(f), rp_from(g));
    let one = vec![BigRational::one()];
    let (mut s0, mut s1): (RatPoly, RatPoly) = (one.clone(), Vec::new());
    let (mut t0, mut t1): (RatPoly, RatPoly) = (Vec::new(), one);
    while !r1.is_empty() {
        let (q, r) = rp_divrem(&r0, &r1);
        let s2 = rp_sub(&s0, &rp_mul(&q, &s1));
        let t2 = rp_sub(&t0, &rp_mul(&q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    let lc = r0.last().unwrap().clone();
    let norm = |p: &RatPoly| -> RatPoly { p.iter().map(|c| c / &lc).collect() };
    let (h, a, b) = (norm(&r0), norm(&s0), norm(&t0));
    let d = a.iter().chain(b.iter()).fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let hden = h.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let hint = IntPolynomial::new(h.iter().map(|c| (c * BigRational::from_integer(hden.clone())).to_integer()).collect());
    (d.abs().to_biguint().unwrap(), hint.primitive_part())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{cyclotomic, Sign};

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn examples() {
        let r = integral_gcd(&p(&[-1, 1]), &p(&[1, 1])).unwrap();
        assert_eq!((r.content.clone(), r.common.clone()), (BigUint::from(2u32), IntPolynomial::one()));
        let r = integral_gcd(&p(&[1, 1]), &p(&[1, -1, 1])).unwrap();
        assert_eq!(r.content, BigUint::from(3u32));
        assert_eq!(r.common, IntPolynomial::one());
        let r = integral_gcd(&p(&[-1, 0, 1]), &p(&[-1, 0, 0, 1])).unwrap();
        assert_eq!(r.content, BigUint::one());
        assert_eq!(r.common, p(&[-1, 1]));
        assert!(integral_gcd(&IntPolynomial::zero(), &p(&[1])).is_err());
    }

    #[test]
    fn witnesses_and_minimality() {
        let cases = [
            (p(&[-1, 1]), p(&[1, 1])),
            (p(&[1, 1]), p(&[1, -1, 1])),
            (p(&[2, 0, 3]), p(&[5, 1])),
            (p(&[4, 0, 6]), p(&[2, 4])),
            (p(&[2]), p(&[1, 2])),
            (p(&[6]), p(&[4])),
        ];
        for (f, g) in &cases {
            let r = integral_gcd(f, g).unwrap();
            assert!(r.check_witness(f, g), "{f} / {g}");
            assert!(r.certify_minimal(f, g), "{f} / {g}");
            assert!((&r.gcdex_bound % &r.content).is_zero(), "{f} / {g}");
        }
        let r = integral_gcd(&p(&[2]), &p(&[1, 2])).unwrap();
        assert_eq!(r.content, BigUint::one());
        let r = integral_gcd(&p(&[6]), &p(&[4])).unwrap();
        assert_eq!(r.content, BigUint::from(2u32));
    }

    #[test]
    fn coprime_monic_matches_gcdex() {
        // t − m against Φ_e for m = 7: the table3 fixture setting.
        let t = p(&[1, 1, 1, 1, 1, 1, 1]);
        let b = &t - &p(&[7]);
        for e in 2..7 {
            let phi = cyclotomic(e, Sign::Plus);
            let r = integral_gcd(&b, &phi).unwrap();
            assert_eq!(r.content, r.gcdex_bound, "e = {e}");
        }
    }

    #[test]
    fn lattice_membership() {
        let f = p(&[-1, 1]);
        let g = p(&[1, 1]);
        assert!(lattice_contains(&f, &g, &p(&[2])));
        assert!(!lattice_contains(&f, &g, &p(&[1])));
    }
}
