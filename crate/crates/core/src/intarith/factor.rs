use std::collections::BTreeMap;
use std::sync::Arc;

use dashmap::DashMap;
use num_bigint::BigUint;
use num_integer::{Integer, Roots};
use num_traits::{One, ToPrimitive, Zero};
use once_cell::sync::Lazy;

use super::prime::{is_prime, is_prime_u64, SMALL_PRIMES};

type Factors = Vec<(BigUint, u32)>;

/// Values at or below this bound are cheap enough that caching would only cost memory.
const CACHE_FLOOR: u64 = 1 << 40;

static CACHE: Lazy<DashMap<BigUint, Arc<Factors>>> = Lazy::new(DashMap::new);

/// Number of entries in the shared factorization cache.
pub fn cache_len() -> usize {
    CACHE.len()
}

pub(crate) fn factor_biguint(n: &BigUint) -> Arc<Factors> {
    debug_assert!(!n.is_zero());
    let cacheable = n.bits() > 40 || n.to_u64().is_some_and(|v| v > CACHE_FLOOR);
    if cacheable {
        if let Some(hit) = CACHE.get(n) {
            return hit.clone();
        }
    }
    let mut acc = BTreeMap::new();
    factor_into(n.clone(), &mut acc);
    let v: Arc<Factors> = Arc::new(acc.into_iter().collect());
    if cacheable {
        CACHE.entry(n.clone()).or_insert(v).clone()
    } else {
        v
    }
}

fn bump(acc: &mut BTreeMap<BigUint, u32>, p: BigUint, e: u32) {
    *acc.entry(p).or_insert(0) += e;
}

fn factor_into(mut n: BigUint, acc: &mut BTreeMap<BigUint, u32>) {
    if let Some(small) = n.to_u64() {
        factor_u64_into(small, 1, acc);
        return;
    }
    for &p in SMALL_PRIMES.iter() {
        let p = p as u64;
        if (&n % p).is_zero() {
            let mut e = 0;
            while (&n % p).is_zero() {
                n /= p;
                e += 1;
            }
            bump(acc, BigUint::from(p), e);
            if let Some(small) = n.to_u64() {
                factor_u64_into(small, 1, acc);
                return;
            }
        }
    }
    split_big(n, 1, acc);
}

fn split_big(n: BigUint, mult: u32, acc: &mut BTreeMap<BigUint, u32>) {
    if n.is_one() {
        return;
    }
    if let Some(small) = n.to_u64() {
        factor_u64_into(small, mult, acc);
        return;
    }
    if is_prime(&n) {
        bump(acc, n, mult);
        return;
    }
    if let Some((root, k)) = perfect_power(&n) {
        split_big(root, mult * k, acc);
        return;
    }
    let d = match n.to_u128() {
        Some(small) => BigUint::from(split_u128(small)),
        None => rho_big(&n),
    };
    let other = &n / &d;
    split_big(d, mult, acc);
    split_big(other, mult, acc);
}

/// Largest k ≥ 2 with n = r^k, assuming n has no prime factor below the trial limit.
fn perfect_power(n: &BigUint) -> Option<(BigUint, u32)> {
    let max_k = (n.bits() / 16) as u32 + 1;
    for k in (2..=max_k).rev() {
        let r = n.nth_root(k);
        if num_traits::pow(r.clone(), k as usize) == *n {
            return Some((r, k));
        }
    }
    None
}

fn factor_u64_into(mut n: u64, mult: u32, acc: &mut BTreeMap<BigUint, u32>) {
    if n <= 1 {
        return;
    }
    for &p in SMALL_PRIMES.iter() {
        let p = p as u64;
        if p * p > n {
            break;
        }
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            bump(acc, BigUint::from(p), e * mult);
        }
    }
    split_u64(n, mult, acc);
}

fn split_u64(n: u64, mult: u32, acc: &mut BTreeMap<BigUint, u32>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        bump(acc, BigUint::from(n), mult);
        return;
    }
    let r = n.sqrt();
    if r * r == n {
        split_u64(r, mult * 2, acc);
        return;
    }
    let d = rho_u64(n);
    split_u64(d, mult, acc);
    split_u64(n / d, mult, acc);
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Brent's cycle variant of Pollard rho; seeds c = 1, 2, 3, ... in order.
fn rho_u64(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    for c in 1u64.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q, mut g) = (2u64, 1u64, 1u64, 1u64);
        let (mut x, mut ys) = (0u64, 0u64);
        const M: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..M.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += M;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

/// Full 256-bit product of two 128-bit values as (high, low).
fn wide_mul(a: u128, b: u128) -> (u128, u128) {
    const LO: u128 = u64::MAX as u128;
    let (a1, a0) = (a >> 64, a & LO);
    let (b1, b0) = (b >> 64, b & LO);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 & LO) + (p10 & LO);
    let lo = (p00 & LO) | (mid << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}

/// Montgomery arithmetic modulo an odd n < 2^128 with R = 2^128.
struct Montgomery {
    n: u128,
    /// −n^{-1} mod 2^128.
    ninv: u128,
}

impl Montgomery {
    fn new(n: u128) -> Self {
        let mut inv: u128 = 1;
        for _ in 0..7 {
            inv = inv.wrapping_mul(2u128.wrapping_sub(n.wrapping_mul(inv)));
        }
        Montgomery { n, ninv: inv.wrapping_neg() }
    }

    fn mul(&self, a: u128, b: u128) -> u128 {
        let (hi, lo) = wide_mul(a, b);
        let m = lo.wrapping_mul(self.ninv);
        let (mhi, mlo) = wide_mul(m, self.n);
        let carry = lo.overflowing_add(mlo).1 as u128;
        let (t, over) = hi.overflowing_add(mhi);
        let (t, over2) = t.overflowing_add(carry);
        if over || over2 || t >= self.n {
            t.wrapping_sub(self.n)
        } else {
            t
        }
    }

    fn add(&self, a: u128, b: u128) -> u128 {
        let (s, over) = a.overflowing_add(b);
        if over || s >= self.n {
            s.wrapping_sub(self.n)
        } else {
            s
        }
    }

    fn sub(&self, a: u128, b: u128) -> u128 {
        if a >= b {
            a - b
        } else {
            (self.n - b) + a
        }
    }

    fn to_mont(&self, x: u128) -> u128 {
        let r: BigUint = (BigUint::from(x) << 128u32) % BigUint::from(self.n);
        r.to_u128().expect("reduced below n")
    }

    fn out_of_mont(&self, x: u128) -> u128 {
        self.mul(x, 1)
    }
}

/// Brent rho for odd composite n below 2^128, iterating x ↦ x^2 + c in Montgomery form.
fn rho_u128(n: u128) -> u128 {
    rho_u128_budget(n, u64::MAX).expect("unbounded rho always splits a composite")
}

/// As `rho_u128`, giving up once a cycle length exceeds `budget`.
fn rho_u128_budget(n: u128, budget: u64) -> Option<u128> {
    if n % 2 == 0 {
        return Some(2);
    }
    let mont = Montgomery::new(n);
    for c in 1u128.. {
        let f = |x: u128| mont.add(mont.mul(x, x), c);
        let (mut y, mut r, mut q, mut g) = (2u128, 1u64, 1u128, 1u128);
        let (mut x, mut ys) = (0u128, 0u128);
        const M: u64 = 256;
        while g == 1 {
            if r > budget {
                return None;
            }
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..M.min(r - k) {
                    y = f(y);
                    q = mont.mul(q, x.abs_diff(y));
                }
                g = q.gcd(&n);
                k += M;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return Some(g);
        }
    }
    unreachable!()
}

const ECM_B1: u64 = 11_000;
const ECM_B2: u64 = 1_100_000;
const ECM_D: u64 = 2310;
const ECM_CURVES: u64 = 400;

/// A projective x-coordinate (X : Z) on a Montgomery curve.
#[derive(Clone, Copy)]
struct XPoint {
    x: u128,
    z: u128,
}

struct Curve<'a> {
    m: &'a Montgomery,
    /// (A + 2)/4 in Montgomery form.
    a24: u128,
}

impl Curve<'_> {
    fn dbl(&self, p: XPoint) -> XPoint {
        let m = self.m;
        let s = m.add(p.x, p.z);
        let d = m.sub(p.x, p.z);
        let t1 = m.mul(s, s);
        let t2 = m.mul(d, d);
        let t3 = m.sub(t1, t2);
        XPoint { x: m.mul(t1, t2), z: m.mul(t3, m.add(t2, m.mul(self.a24, t3))) }
    }

    /// p + q given p − q.
    fn add(&self, p: XPoint, q: XPoint, diff: XPoint) -> XPoint {
        let m = self.m;
        let u = m.mul(m.sub(p.x, p.z), m.add(q.x, q.z));
        let v = m.mul(m.add(p.x, p.z), m.sub(q.x, q.z));
        let s = m.add(u, v);
        let d = m.sub(u, v);
        XPoint { x: m.mul(diff.z, m.mul(s, s)), z: m.mul(diff.x, m.mul(d, d)) }
    }

    fn ladder(&self, p: XPoint, k: u64) -> XPoint {
        if k == 1 {
            return p;
        }
        let (mut r0, mut r1) = (p, self.dbl(p));
        for bit in (0..63 - k.leading_zeros()).rev() {
            if (k >> bit) & 1 == 1 {
                r0 = self.add(r1, r0, p);
                r1 = self.dbl(r1);
            } else {
                r1 = self.add(r1, r0, p);
                r0 = self.dbl(r0);
            }
        }
        r0
    }
}

fn nontrivial(g: u128, n: u128) -> Option<u128> {
    (g > 1 && g < n).then_some(g)
}

/// One ECM curve with Suyama's parametrisation at `sigma`: stage 1 to B1,
/// then baby-step giant-step stage 2 to B2.
fn ecm_curve(m: &Montgomery, sigma: u64, primes: &[u32]) -> Option<u128> {
    let n = m.n;
    let s = m.to_mont(sigma as u128);
    let u = m.sub(m.mul(s, s), m.to_mont(5));
    let v = m.add(m.add(s, s), m.add(s, s));
    let u3 = m.mul(m.mul(u, u), u);
    let vmu = m.sub(v, u);
    let num = m.mul(m.mul(m.mul(vmu, vmu), vmu), m.add(m.add(m.add(u, u), u), v));
    let den = m.mul(m.mul(m.to_mont(16), u3), v);
    let den_plain = m.out_of_mont(den);
    let g = den_plain.gcd(&n);
    if g != 1 {
        return nontrivial(g, n);
    }
    let inv = mod_inverse(den_plain, n)?;
    let curve = Curve { m, a24: m.mul(num, m.to_mont(inv)) };
    let mut p = XPoint { x: u3, z: m.mul(m.mul(v, v), v) };
    for &q in primes {
        let q = q as u64;
        let mut pk = q;
        while pk * q <= ECM_B1 {
            pk *= q;
        }
        p = curve.ladder(p, pk);
    }
    let g = m.out_of_mont(p.z).gcd(&n);
    if g != 1 {
        return nontrivial(g, n);
    }
    // baby steps j·P for odd j < D/2 coprime to D
    let p2 = curve.dbl(p);
    let mut odd = vec![p, curve.add(p2, p, p)];
    while (odd.len() as u64) * 2 < ECM_D / 2 {
        let k = odd.len();
        odd.push(curve.add(odd[k - 1], p2, odd[k - 2]));
    }
    let baby: Vec<XPoint> =
        odd.iter().enumerate().filter(|(i, _)| (2 * *i as u64 + 1).gcd(&ECM_D) == 1).map(|(_, pt)| *pt).collect();
    let dp = curve.ladder(p, ECM_D);
    let m0 = (ECM_B1 / ECM_D).max(1);
    let mut prev = curve.ladder(dp, m0);
    let mut cur = curve.ladder(dp, m0 + 1);
    let mut acc = m.to_mont(1);
    for step in m0 + 1..=ECM_B2 / ECM_D + 1 {
        for b in &baby {
            acc = m.mul(acc, m.sub(m.mul(cur.x, b.z), m.mul(b.x, cur.z)));
        }
        if step % 64 == 0 {
            let g = m.out_of_mont(acc).gcd(&n);
            if g != 1 {
                return nontrivial(g, n);
            }
        }
        let next = curve.add(cur, dp, prev);
        prev = cur;
        cur = next;
    }
    nontrivial(m.out_of_mont(acc).gcd(&n), n)
}

fn mod_inverse(a: u128, n: u128) -> Option<u128> {
    use num_bigint::BigInt;
    let e = BigInt::from(a).extended_gcd(&BigInt::from(n));
    if !e.gcd.is_one() {
        return None;
    }
    e.x.mod_floor(&BigInt::from(n)).to_u128()
}

/// A proper divisor of an odd composite n < 2^128 that is not a perfect power:
/// a short rho run, then ECM over σ = 6, 7, ..., then unbounded rho.
fn split_u128(n: u128) -> u128 {
    if let Some(d) = rho_u128_budget(n, 1 << 14) {
        return d;
    }
    let m = Montgomery::new(n);
    let primes = super::prime::sieve(ECM_B1 as u32);
    for sigma in 6..6 + ECM_CURVES {
        if let Some(d) = ecm_curve(&m, sigma, &primes) {
            return d;
        }
    }
    rho_u128(n)
}

fn rho_big(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    for c in 1u64.. {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r: u64 = 1;
        let mut q = one.clone();
        let mut g = one.clone();
        let mut x = y.clone();
        let mut ys = y.clone();
        const M: u64 = 128;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..M.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += M;
            }
            r *= 2;
        }
        if g == *n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if g != *n {
            return g;
        }
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn recompose(f: &Factors) -> BigUint {
        f.iter().fold(BigUint::one(), |acc, (p, e)| acc * num_traits::pow(p.clone(), *e as usize))
    }

    #[test]
    fn semiprimes_split() {
        let p = 1000000007u64;
        let q = 998244353u64;
        let f = factor_biguint(&BigUint::from(p * q));
        assert_eq!(f.len(), 2);
        let big: BigUint = BigUint::from(p) * BigUint::from(q) * BigUint::from(1000000009u64);
        let f = factor_biguint(&big);
        assert_eq!(recompose(&f), big);
        assert_eq!(f.len(), 3);
    }

    #[test]
    fn wide_semiprime_splits() {
        let p = BigUint::from(1073741827u64);
        let q: BigUint = "1180591620717411303389".parse().unwrap();
        let n = &p * &q;
        let d = BigUint::from(rho_u128(n.to_u128().unwrap()));
        assert!(d == p || d == q);
        let f = factor_biguint(&(&n * 3u32));
        assert_eq!(recompose(&f), &n * 3u32);
        assert_eq!(f.len(), 3);
    }

    #[test]
    fn ecm_splits_balanced_semiprime() {
        let n: u128 = 3525538906228992097 * 8770394066040615947;
        let m = Montgomery::new(n);
        let primes = crate::intarith::sieve(ECM_B1 as u32);
        let d = (6..6 + ECM_CURVES).find_map(|s| ecm_curve(&m, s, &primes)).unwrap();
        assert!(d == 3525538906228992097 || d == 8770394066040615947);
    }

    #[test]
    fn montgomery_product() {
        let n: u128 = (1 << 127) + 1 + 2 * 12345;
        let m = Montgomery::new(n);
        let a = n - 5;
        let b = n - 7;
        let r = BigUint::from(2u32).pow(128) % BigUint::from(n);
        // mul(a, b) = a b R^{-1} mod n
        let lhs = BigUint::from(m.mul(a, b)) * &r % BigUint::from(n);
        assert_eq!(lhs, BigUint::from(35u32));
    }

    #[test]
    fn prime_powers_of_large_primes() {
        let p = BigUint::from(1000003u64);
        let n = num_traits::pow(p.clone(), 5);
        let f = factor_biguint(&n);
        assert_eq!(*f, vec![(p, 5)]);
    }

    #[test]
    fn cache_returns_same_value() {
        let n = BigUint::from(47u32 * 8971)
            * BigUint::from(42272797713043u64)
            * BigUint::from(332207361361u64);
        let a = factor_biguint(&n);
        let b = factor_biguint(&n);
        assert_eq!(a, b);
        assert_eq!(recompose(&a), n);
    }
}
