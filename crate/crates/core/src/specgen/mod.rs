//! Group identifiers, spectra of linear and unitary groups as generator
//! lists, exponents of classical groups and the MAGr checks.

mod magr;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use dashmap::DashMap;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use once_cell::sync::Lazy;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::intarith::{factor_nat, is_prime_power, phi_sum, pow, FactoredNat};
use crate::polyring::{cyclotomic_value, Sign};

pub use magr::{magr_check, magr_congruence_sum, magr_value, MagrCheck};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    LinearUnitary,
    Symplectic,
    OddDimOrthogonal,
    EvenDimOrthogonalPlus,
    EvenDimOrthogonalMinus,
}

impl Family {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "lu" | "linear-unitary" | "linear" | "unitary" | "l" | "u" => Family::LinearUnitary,
            "sp" | "symplectic" | "s" => Family::Symplectic,
            "o-odd" | "odd-orthogonal" | "o" => Family::OddDimOrthogonal,
            "o+" | "o-plus" | "orthogonal-plus" => Family::EvenDimOrthogonalPlus,
            "o-" | "o-minus" | "orthogonal-minus" => Family::EvenDimOrthogonalMinus,
            _ => return Err(Error::Unknown { kind: "family", name: s.into() }),
        })
    }
}

/// A field size q = p^f.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldSize {
    pub q: BigUint,
    pub p: BigUint,
    pub f: u32,
}

impl FieldSize {
    pub fn new(q: BigUint) -> Result<Self> {
        match is_prime_power(&q) {
            Some((p, f)) => Ok(FieldSize { q, p, f }),
            None => domain(format!("{q} is not a prime power")),
        }
    }

    pub fn from_u64(q: u64) -> Result<Self> {
        Self::new(BigUint::from(q))
    }
}

/// A simple classical group. `dim` follows the usual subscripts:
/// L^ε_dim(q), S_{2·dim}(q), O_{2·dim+1}(q), O^±_{2·dim}(q).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupId {
    pub family: Family,
    pub sign: Sign,
    pub dim: u32,
    pub field: FieldSize,
}

impl GroupId {
    pub fn new(family: Family, sign: Sign, dim: u32, q: u64) -> Result<Self> {
        Self::with_field(family, sign, dim, FieldSize::from_u64(q)?)
    }

    pub fn with_field(family: Family, sign: Sign, dim: u32, field: FieldSize) -> Result<Self> {
        let min = match family {
            Family::LinearUnitary => 2,
            Family::Symplectic | Family::OddDimOrthogonal => 2,
            Family::EvenDimOrthogonalPlus | Family::EvenDimOrthogonalMinus => 4,
        };
        if dim < min {
            return domain(format!("dimension parameter {dim} below minimum {min} for {family:?}"));
        }
        let sign = match family {
            Family::Symplectic | Family::OddDimOrthogonal => Sign::Plus,
            _ => sign,
        };
        Ok(GroupId { family, sign, dim, field })
    }

    pub fn linear(dim: u32, q: u64) -> Result<Self> {
        Self::new(Family::LinearUnitary, Sign::Plus, dim, q)
    }

    pub fn unitary(dim: u32, q: u64) -> Result<Self> {
        Self::new(Family::LinearUnitary, Sign::Minus, dim, q)
    }

    pub fn q(&self) -> &BigUint {
        &self.field.q
    }

    /// q − ε as a positive integer.
    pub fn q_minus_eps(&self) -> BigUint {
        match self.sign {
            Sign::Plus => &self.field.q - 1u32,
            Sign::Minus => &self.field.q + 1u32,
        }
    }

    /// d = (dim, q − ε) for linear/unitary groups.
    pub fn d(&self) -> BigUint {
        self.q_minus_eps().gcd(&BigUint::from(self.dim))
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = &self.field.q;
        match (self.family, self.sign) {
            (Family::LinearUnitary, Sign::Plus) => write!(f, "L_{}({q})", self.dim),
            (Family::LinearUnitary, Sign::Minus) => write!(f, "U_{}({q})", self.dim),
            (Family::Symplectic, _) => write!(f, "S_{}({q})", 2 * self.dim),
            (Family::OddDimOrthogonal, _) => write!(f, "O_{}({q})", 2 * self.dim + 1),
            (Family::EvenDimOrthogonalPlus, _) => write!(f, "O^+_{}({q})", 2 * self.dim),
            (Family::EvenDimOrthogonalMinus, _) => write!(f, "O^-_{}({q})", 2 * self.dim),
        }
    }
}

impl Serialize for GroupId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Generators whose divisors are exactly the element orders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumGenerators {
    pub group: GroupId,
    generators: Vec<BigUint>,
}

impl SpectrumGenerators {
    pub fn generators(&self) -> &[BigUint] {
        &self.generators
    }

    pub fn contains(&self, a: &BigUint) -> bool {
        !a.is_zero() && self.generators.iter().any(|g| (g % a).is_zero())
    }

    /// Divisibility-maximal generators, ascending. The divisor closure is unchanged.
    pub fn maximal(&self) -> Vec<BigUint> {
        let g = &self.generators;
        g.iter()
            .enumerate()
            .filter(|(i, x)| !g.iter().enumerate().any(|(j, y)| j != *i && y != *x && (y % *x).is_zero()))
            .map(|(_, x)| x.clone())
            .collect()
    }

    pub fn lcm(&self) -> BigUint {
        self.generators.iter().fold(BigUint::one(), |acc, g| acc.lcm(g))
    }

    /// Factored generators; only sensible for moderate sizes.
    pub fn factored(&self) -> Vec<FactoredNat> {
        self.generators.iter().map(factor_nat).collect()
    }

    /// The full spectrum, for small groups.
    pub fn spectrum(&self) -> BTreeSet<BigUint> {
        self.generators.iter().flat_map(|g| factor_nat(g).divisors()).collect()
    }
}

/// Distinct-part sets (descending) of the partitions of `n` with at least
/// `min_parts` parts.
fn distinct_part_sets(n: u32, min_parts: usize) -> BTreeSet<Vec<u32>> {
    fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, min_parts: usize, out: &mut BTreeSet<Vec<u32>>) {
        if rest == 0 {
            if cur.len() >= min_parts {
                let mut d = cur.clone();
                d.dedup();
                out.insert(d);
            }
            return;
        }
        for part in (1..=max.min(rest)).rev() {
            cur.push(part);
            rec(rest - part, part, cur, min_parts, out);
            cur.pop();
        }
    }
    let mut out = BTreeSet::new();
    rec(n, n, &mut Vec::new(), min_parts, &mut out);
    out
}

/// Generators of ω(L^ε_m(q)) following the six items of the standard description.
pub fn spectrum_generators(g: &GroupId) -> Result<SpectrumGenerators> {
    if g.family != Family::LinearUnitary {
        return domain(format!("spectra are implemented for linear/unitary groups only, got {g}"));
    }
    let m = g.dim;
    let q = g.q();
    let p = &g.field.p;
    let eps = g.sign;
    let qe = g.q_minus_eps();
    let d = g.d();
    // pw[j] = q^j − ε^j
    let pw: Vec<BigUint> = (0..=m)
        .map(|j| {
            let qj = pow(q, j);
            if eps == Sign::Minus && j % 2 == 1 {
                qj + 1u32
            } else {
                qj - 1u32
            }
        })
        .collect();
    let lcm_of = |parts: &[u32]| parts.iter().fold(BigUint::one(), |acc, &j| acc.lcm(&pw[j as usize]));
    let mut gens: BTreeSet<BigUint> = BTreeSet::new();
    // (a)
    gens.insert(&pw[m as usize] / (&d * &qe));
    // (b)
    for m1 in 1..=m / 2 {
        let m2 = m - m1;
        let l = pw[m1 as usize].clone().lcm(&pw[m2 as usize]);
        let den = BigUint::from(m / m1.gcd(&m2)).gcd(&qe);
        gens.insert(l / den);
    }
    // (c)
    for set in distinct_part_sets(m, 3) {
        gens.insert(lcm_of(&set));
    }
    // (d), (e), (f)
    let mut k = 1u32;
    loop {
        let pk1 = pow(p, k - 1);
        let Some(rest) = pk1.to_u32().and_then(|v| m.checked_sub(v + 1)) else { break };
        let pk = pow(p, k);
        if rest == 0 {
            gens.insert(pk.clone());
        } else {
            gens.insert(&pk * (&pw[rest as usize] / &d));
            for set in distinct_part_sets(rest, 2) {
                gens.insert(&pk * lcm_of(&set));
            }
        }
        k += 1;
    }
    gens.remove(&BigUint::zero());
    Ok(SpectrumGenerators { group: g.clone(), generators: gens.into_iter().collect() })
}

static SPECTRUM_CACHE: Lazy<DashMap<GroupId, Arc<SpectrumGenerators>>> = Lazy::new(DashMap::new);

/// Memoized `spectrum_generators`, for repeated small instances.
pub fn spectrum_generators_cached(g: &GroupId) -> Result<Arc<SpectrumGenerators>> {
    if let Some(hit) = SPECTRUM_CACHE.get(g) {
        return Ok(hit.clone());
    }
    let s = Arc::new(spectrum_generators(g)?);
    Ok(SPECTRUM_CACHE.entry(g.clone()).or_insert(s).clone())
}

pub fn spectrum_contains(s: &SpectrumGenerators, a: &BigUint) -> bool {
    s.contains(a)
}

/// Smallest power of v strictly greater than `bound`.
fn power_above(v: &BigUint, bound: u64) -> BigUint {
    let b = BigUint::from(bound);
    let mut x = BigUint::one();
    while x <= b {
        x *= v;
    }
    x
}

fn product_phi(n: u32, x: &BigInt) -> BigInt {
    (1..=n).map(|i| cyclotomic_value(i, x)).product()
}

/// Which exponent formula applies, with its parameter n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExponentBranch {
    /// Linear/unitary, n ≥ 3.
    A { n: u32 },
    /// ∏Φ_i(u²) form; `minus_even` marks O^-_{2n} with n even.
    B { n: u32, minus_even: bool },
    /// Even orthogonal of odd rank n ≥ 5.
    C { n: u32 },
}

pub fn exponent_branch(g: &GroupId) -> Result<ExponentBranch> {
    let d = g.dim;
    Ok(match g.family {
        Family::LinearUnitary if d >= 3 => ExponentBranch::A { n: d },
        Family::Symplectic | Family::OddDimOrthogonal if d >= 2 => ExponentBranch::B { n: d, minus_even: false },
        Family::EvenDimOrthogonalPlus if d % 2 == 0 && d >= 4 => ExponentBranch::B { n: d - 1, minus_even: false },
        Family::EvenDimOrthogonalMinus if d % 2 == 0 && d >= 4 => ExponentBranch::B { n: d, minus_even: true },
        Family::EvenDimOrthogonalPlus | Family::EvenDimOrthogonalMinus if d % 2 == 1 && d >= 5 => {
            ExponentBranch::C { n: d }
        }
        _ => return domain(format!("no exponent formula applies to {g}")),
    })
}

/// exp(S) from the closed formulas.
pub fn exponent(g: &GroupId) -> Result<BigUint> {
    let u = BigInt::from(g.q().clone());
    let v = &g.field.p;
    let two_gcd = |x: &BigInt| -> BigInt { BigInt::from(if (x - 1u32).is_even() { 2 } else { 1 }) };
    let (num, den) = match exponent_branch(g)? {
        ExponentBranch::A { n } => {
            let eps = BigInt::from(g.sign.value());
            let prod = product_phi(n, &(&eps * &u));
            let vl = power_above(v, n as u64 - 1);
            let fac = factor_nat(&BigUint::from(n));
            let c = match fac.factors() {
                [(r, _)] if (g.q_minus_eps() % r).is_zero() => r.clone(),
                _ => BigUint::one(),
            };
            (BigInt::from(vl) * prod, BigInt::from(c))
        }
        ExponentBranch::B { n, minus_even } => {
            let bound = if minus_even { 2 * n as u64 - 3 } else { 2 * n as u64 - 1 };
            let vl = power_above(v, bound);
            let t = two_gcd(&u);
            let c = if n.is_power_of_two() { &t * &t } else { t };
            (BigInt::from(vl) * product_phi(n, &(&u * &u)), c)
        }
        ExponentBranch::C { n } => {
            let eps = BigInt::from(g.sign.value());
            let vl = power_above(v, 2 * n as u64 - 3);
            let prod = cyclotomic_value(n, &(&eps * &u)) * product_phi(n - 1, &(&u * &u));
            (BigInt::from(vl) * prod, two_gcd(&u))
        }
    };
    let (quot, rem) = num.div_rem(&den);
    if !rem.is_zero() || quot.sign() != num_bigint::Sign::Plus {
        return Err(Error::Inconclusive(format!("exponent formula not integral for {g}")));
    }
    Ok(quot.to_biguint().unwrap())
}

/// Rational exponent E = num/den with exp(S) > u^E by the closed formulas.
pub fn exponent_lower_bound(g: &GroupId) -> Result<(u64, u64)> {
    Ok(match exponent_branch(g)? {
        ExponentBranch::A { n } => (3 * phi_sum(n as u64)?, 4),
        ExponentBranch::B { n, .. } => (3 * phi_sum(n as u64)?, 2),
        ExponentBranch::C { n } => (3 * phi_sum(n as u64)? + 3 * phi_sum(n as u64 - 1)?, 4),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gens(g: &GroupId) -> Vec<u64> {
        spectrum_generators(g).unwrap().generators().iter().map(|x| x.to_u64().unwrap()).collect()
    }

    fn maximal(g: &GroupId) -> Vec<u64> {
        spectrum_generators(g).unwrap().maximal().iter().map(|x| x.to_u64().unwrap()).collect()
    }

    #[test]
    fn small_spectra() {
        assert_eq!(gens(&GroupId::linear(2, 5).unwrap()), vec![2, 3, 5]);
        assert_eq!(maximal(&GroupId::unitary(3, 3).unwrap()), vec![7, 8, 12]);
        assert_eq!(maximal(&GroupId::linear(3, 2).unwrap()), vec![3, 4, 7]);
    }

    #[test]
    fn membership() {
        let u33 = spectrum_generators(&GroupId::unitary(3, 3).unwrap()).unwrap();
        assert!(spectrum_contains(&u33, &BigUint::from(6u32)));
        assert!(!spectrum_contains(&u33, &BigUint::from(14u32)));
        let u73 = spectrum_generators(&GroupId::unitary(7, 3).unwrap()).unwrap();
        assert!(!spectrum_contains(&u73, &BigUint::from(546u32)));
    }

    #[test]
    fn exponents() {
        assert_eq!(exponent(&GroupId::linear(3, 2).unwrap()).unwrap(), BigUint::from(84u32));
        assert_eq!(exponent(&GroupId::unitary(3, 3).unwrap()).unwrap(), BigUint::from(168u32));
        let s43 = GroupId::new(Family::Symplectic, Sign::Plus, 2, 3).unwrap();
        assert_eq!(exponent(&s43).unwrap(), BigUint::from(180u32));
        assert!(exponent(&GroupId::linear(2, 5).unwrap()).is_err());
        assert!(GroupId::new(Family::EvenDimOrthogonalMinus, Sign::Minus, 3, 3).is_err());
    }

    #[test]
    fn display_names() {
        assert_eq!(GroupId::unitary(7, 3).unwrap().to_string(), "U_7(3)");
        let o = GroupId::new(Family::EvenDimOrthogonalMinus, Sign::Minus, 7, 3).unwrap();
        assert_eq!(o.to_string(), "O^-_14(3)");
        assert!(GroupId::linear(3, 6).is_err());
    }

    #[test]
    fn part_sets() {
        let sets = distinct_part_sets(4, 3);
        assert_eq!(sets.into_iter().collect::<Vec<_>>(), vec![vec![1], vec![2, 1]]);
    }
}
