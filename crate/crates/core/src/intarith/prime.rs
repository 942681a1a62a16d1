use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use once_cell::sync::Lazy;
use serde::Serialize;

/// Upper end of the trial-division range used by the factorizer.
pub const TRIAL_LIMIT: u32 = 100_000;

/// Below this bound the strong-probable-prime test with the first thirteen
/// prime bases is a proof of primality.
pub const DETERMINISTIC_MR_BOUND: &str = "3317044064679887385961981";

static MR_BOUND: Lazy<BigUint> = Lazy::new(|| DETERMINISTIC_MR_BOUND.parse().unwrap());

const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

pub(crate) static SMALL_PRIMES: Lazy<Vec<u32>> = Lazy::new(|| sieve(TRIAL_LIMIT));

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrimalityMethod {
    TrialDivision,
    DeterministicMillerRabin,
    BailliePsw,
}

impl std::fmt::Display for PrimalityMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PrimalityMethod::TrialDivision => "trial-division",
            PrimalityMethod::DeterministicMillerRabin => "deterministic-miller-rabin",
            PrimalityMethod::BailliePsw => "baillie-psw",
        })
    }
}

pub fn sieve(limit: u32) -> Vec<u32> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u32);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

fn sprp_u64(n: u64, a: u64) -> bool {
    let a = a % n;
    if a == 0 {
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    MR_BASES.iter().all(|&a| sprp_u64(n, a))
}

fn sprp_big(n: &BigUint, a: &BigUint) -> bool {
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    let mut x = a.modpow(&d, n);
    if x == one || x == nm1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == nm1 {
            return true;
        }
    }
    false
}

/// Jacobi symbol (a/n) for odd positive n.
pub fn jacobi(a: &BigInt, n: &BigUint) -> i32 {
    let n_int = BigInt::from(n.clone());
    let mut a = a.mod_floor(&n_int).to_biguint().unwrap();
    let mut n = n.clone();
    let mut t = 1;
    while !a.is_zero() {
        let z = a.trailing_zeros().unwrap_or(0);
        a >>= z;
        let r8 = (&n % 8u32).to_u32().unwrap();
        if z % 2 == 1 && (r8 == 3 || r8 == 5) {
            t = -t;
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32) == BigUint::from(3u32) && (&n % 4u32) == BigUint::from(3u32) {
            t = -t;
        }
        a %= &n;
    }
    if n.is_one() {
        t
    } else {
        0
    }
}

fn half_mod(x: BigInt, n: &BigInt) -> BigInt {
    let x = if x.is_odd() { x + n } else { x };
    (x >> 1usize).mod_floor(n)
}

/// Strong Lucas probable-prime test with Selfridge parameters.
fn strong_lucas(n: &BigUint) -> bool {
    let root = n.sqrt();
    if &root * &root == *n {
        return false;
    }
    let mut d: i64 = 5;
    loop {
        let j = jacobi(&BigInt::from(d), n);
        if j == -1 {
            break;
        }
        if j == 0 && BigUint::from(d.unsigned_abs()) != *n {
            return false;
        }
        d = if d > 0 { -(d + 2) } else { -d + 2 };
    }
    let ni = BigInt::from(n.clone());
    let dd = BigInt::from(d);
    let q = BigInt::from((1 - d) / 4);
    let np1: BigUint = n + 1u32;
    let s = np1.trailing_zeros().unwrap_or(0);
    let k = &np1 >> s;
    // Binary ladder for U_k, V_k with P = 1.
    let mut u = BigInt::zero();
    let mut v = BigInt::from(2);
    let mut qk = BigInt::one();
    let bits = k.bits();
    for i in (0..bits).rev() {
        u = (&u * &v).mod_floor(&ni);
        v = (&v * &v - BigInt::from(2) * &qk).mod_floor(&ni);
        qk = (&qk * &qk).mod_floor(&ni);
        if k.bit(i) {
            let nu = half_mod(&u + &v, &ni);
            let nv = half_mod(&dd * &u + &v, &ni);
            u = nu;
            v = nv;
            qk = (&qk * &q).mod_floor(&ni);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = (&v * &v - BigInt::from(2) * &qk).mod_floor(&ni);
        qk = (&qk * &qk).mod_floor(&ni);
        if v.is_zero() {
            return true;
        }
    }
    false
}

/// Primality of `n` together with the method that decided it.
pub fn prime_check(n: &BigUint) -> (bool, PrimalityMethod) {
    if let Some(small) = n.to_u64() {
        if small <= TRIAL_LIMIT as u64 {
            let hit = SMALL_PRIMES.binary_search(&(small as u32)).is_ok();
            return (hit, PrimalityMethod::TrialDivision);
        }
        return (is_prime_u64(small), PrimalityMethod::DeterministicMillerRabin);
    }
    for &p in SMALL_PRIMES.iter().take(200) {
        if (n % p).is_zero() {
            return (false, PrimalityMethod::TrialDivision);
        }
    }
    if *n < *MR_BOUND {
        let ok = MR_BASES.iter().all(|&a| sprp_big(n, &BigUint::from(a)));
        return (ok, PrimalityMethod::DeterministicMillerRabin);
    }
    let ok = sprp_big(n, &BigUint::from(2u32)) && strong_lucas(n);
    (ok, PrimalityMethod::BailliePsw)
}

pub fn is_prime(n: &BigUint) -> bool {
    prime_check(n).0
}

/// Primality of a signed integer; negative numbers and 0, 1 are not prime.
pub fn is_prime_int(n: &BigInt) -> bool {
    n.sign() == Sign::Plus && is_prime(n.magnitude())
}
