//! Prime-power solutions of f(u) = N for the n-value formulas.
//!
//! Every supported formula has the shape f(u) = Q(u)/g with Q an integer
//! polynomial and g drawn from a finite set, so f(u) = N forces Q(u) = N·g.
//! Q is increasing beyond the root bound of Q′, which makes the search complete.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::gkgraph::{n_value, NParams, Table1Row};
use crate::intarith::{characteristic, greatest_prime_factor};
use crate::polyring::{cyclotomic, positivity_bound, IntPolynomial};
use crate::primpart::{greatest_primitive_value, PrimitiveSpec};
use crate::Sign;

/// A function of one prime-power variable u.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Formula {
    /// Component `component` (0-based) of a table1 fixture row at fixed dimension and sign.
    Table1 { row: Table1Row, dim: u32, tau: Sign, component: usize },
    /// k_index(sign·u).
    Gpd { index: u32, sign: Sign },
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Table1 { row, dim, tau, component } => {
                write!(f, "{}[dim={dim},tau={}]#{}", row.id(), tau.symbol(), component + 2)
            }
            Formula::Gpd { index, sign } => {
                let s = if *sign == Sign::Minus { "-" } else { "" };
                write!(f, "k_{index}({s}u)")
            }
        }
    }
}

/// How the formula depends on u.
#[derive(Debug, Clone)]
enum Shape {
    Free { q: IntPolynomial, denominators: Vec<u64> },
    Fixed(Vec<u64>),
}

/// Σ_{j<r} (τu)^j = (u^r − τ)/(u − τ) for odd r.
fn geometric(r: u32, tau: Sign) -> IntPolynomial {
    let p = IntPolynomial::new(vec![BigInt::one(); r as usize]);
    match tau {
        Sign::Plus => p,
        Sign::Minus => p.negate_var(),
    }
}

fn power_plus_one(m: u32) -> IntPolynomial {
    &IntPolynomial::monomial(BigInt::one(), m as usize) + &IntPolynomial::one()
}

impl Formula {
    pub fn table1(row: Table1Row, dim: u32, tau: Sign, component: usize) -> Self {
        Formula::Table1 { row, dim, tau, component }
    }

    /// n_2 of L^ε_n(q) as a function of q: prime n, or n = r + 1 with r an odd prime.
    pub fn n2_linear(n: u32, eps: Sign) -> Self {
        let row = if n % 2 == 1 { Table1Row::LinearPrime } else { Table1Row::LinearPrimePlusOne };
        let dim = if n % 2 == 1 { n } else { n - 1 };
        Formula::table1(row, dim, eps, 0)
    }

    /// Parses `k_7(-u)`, `k:7:-`, `l-r:7:-`, `l3-4:3:+:3` or the display form `l-r[dim=7,tau=-]#2`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Unknown { kind: "formula", name: s.to_string() };
        let sign = |t: &str| match t {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" | "−" => Ok(Sign::Minus),
            _ => Err(bad()),
        };
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("k_") {
            let (idx, arg) = rest.split_once('(').ok_or_else(bad)?;
            let index = idx.parse().map_err(|_| bad())?;
            let sign = match arg.trim_end_matches(')') {
                "u" => Sign::Plus,
                "-u" => Sign::Minus,
                _ => return Err(bad()),
            };
            return Ok(Formula::Gpd { index, sign });
        }
        if let Some((row, rest)) = s.split_once('[') {
            let (inner, comp) = rest.split_once("]#").ok_or_else(bad)?;
            let mut dim = None;
            let mut tau = None;
            for kv in inner.split(',') {
                match kv.split_once('=') {
                    Some(("dim", v)) => dim = v.parse().ok(),
                    Some(("tau", v)) => tau = Some(sign(v)?),
                    _ => return Err(bad()),
                }
            }
            let c: usize = comp.parse().map_err(|_| bad())?;
            let row = Table1Row::parse(row)?;
            return Ok(Formula::table1(row, dim.ok_or_else(bad)?, tau.ok_or_else(bad)?, c.checked_sub(2).ok_or_else(bad)?));
        }
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["k", i, sg] => Ok(Formula::Gpd { index: i.parse().map_err(|_| bad())?, sign: sign(sg)? }),
            [row, d, sg, rest @ ..] if rest.len() <= 1 => {
                let c: usize = match rest.first() {
                    Some(c) => c.parse::<usize>().map_err(|_| bad())?.checked_sub(2).ok_or_else(bad)?,
                    None => 0,
                };
                Ok(Formula::table1(Table1Row::parse(row)?, d.parse().map_err(|_| bad())?, sign(sg)?, c))
            }
            _ => Err(bad()),
        }
    }

    /// Exact value at u; an error when u violates the formula's conditions.
    pub fn eval(&self, u: &BigUint) -> Result<BigUint> {
        match self {
            Formula::Table1 { row, dim, tau, component } => {
                let vals = n_value(*row, &NParams { dim: *dim, u: u.clone(), tau: *tau })?;
                vals.get(*component)
                    .cloned()
                    .ok_or_else(|| Error::Domain(format!("{} has no component {}", row.id(), component + 2)))
            }
            Formula::Gpd { index, sign } => {
                let base = BigInt::from(u.clone()) * BigInt::from(sign.value());
                greatest_primitive_value(&PrimitiveSpec::new(base, *index)?)
            }
        }
    }

    fn shape(&self) -> Result<Shape> {
        Ok(match *self {
            Formula::Table1 { row, dim, tau, .. } => match row {
                Table1Row::LinearPrime => Shape::Free { q: geometric(dim, tau), denominators: vec![1, dim as u64] },
                Table1Row::LinearPrimePlusOne => Shape::Free { q: geometric(dim, tau), denominators: vec![1] },
                Table1Row::SymplecticPow2 | Table1Row::OrthogonalMinusPow2 => {
                    Shape::Free { q: power_plus_one(dim), denominators: vec![1, 2] }
                }
                Table1Row::OddOrthogonalPow2 => Shape::Free { q: power_plus_one(dim), denominators: vec![2] },
                Table1Row::L3Of4 => Shape::Fixed(vec![4]),
                Table1Row::U6Of2 | Table1Row::OrthogonalMinusOf2 => Shape::Fixed(vec![2]),
                Table1Row::SymplecticPrime | Table1Row::OrthogonalPlusPrimePlusOne => Shape::Fixed(vec![2, 3]),
                Table1Row::OddOrthogonalOf3
                | Table1Row::OrthogonalMinusOf3Prime
                | Table1Row::OrthogonalMinusOf3Composite
                | Table1Row::OrthogonalMinusOf3Fermat => Shape::Fixed(vec![3]),
                Table1Row::OrthogonalPlusPrime => Shape::Fixed(vec![2, 3, 5]),
                Table1Row::L2Odd | Table1Row::L2Even => {
                    return domain(format!("{} is not handled by the solver", row.id()));
                }
            },
            Formula::Gpd { index, sign } => {
                if index < 3 {
                    return domain("k_i needs i ≥ 3");
                }
                let r = greatest_prime_factor(index as u64);
                Shape::Free { q: cyclotomic(index, sign), denominators: vec![1, r] }
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Parity {
    Odd,
    Even,
}

/// Admissibility conditions on the variable.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Constraints {
    pub parity: Option<Parity>,
    #[serde(serialize_with = "ser_opt")]
    pub min: Option<BigUint>,
    /// d with d | u + 1.
    pub divides_plus_one: Option<u64>,
    /// d with d ∤ u + 1.
    pub not_divides_plus_one: Option<u64>,
}

fn ser_opt<S: serde::Serializer>(v: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.collect_str(x),
        None => s.serialize_none(),
    }
}

impl Constraints {
    pub fn odd() -> Self {
        Constraints { parity: Some(Parity::Odd), ..Default::default() }
    }

    pub fn at_least(mut self, v: u64) -> Self {
        self.min = Some(BigUint::from(v));
        self
    }

    pub fn with_divides_plus_one(mut self, d: u64) -> Self {
        self.divides_plus_one = Some(d);
        self
    }

    pub fn with_not_divides_plus_one(mut self, d: u64) -> Self {
        self.not_divides_plus_one = Some(d);
        self
    }

    /// The first violated condition, if any.
    pub fn violation(&self, u: &BigUint) -> Option<String> {
        let even = (u % 2u32).is_zero();
        match self.parity {
            Some(Parity::Odd) if even => return Some("u must be odd".into()),
            Some(Parity::Even) if !even => return Some("u must be even".into()),
            _ => {}
        }
        if let Some(m) = &self.min {
            if u < m {
                return Some(format!("u must be ≥ {m}"));
            }
        }
        let u1 = u + 1u32;
        if let Some(d) = self.divides_plus_one {
            if !(&u1 % d).is_zero() {
                return Some(format!("{d} must divide u + 1"));
            }
        }
        if let Some(d) = self.not_divides_plus_one {
            if (&u1 % d).is_zero() {
                return Some(format!("{d} must not divide u + 1"));
            }
        }
        None
    }
}

/// Per denominator g: Q is increasing past `bound` and Q(u) > N·g from `exceeds_from` on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonotoneCertificate {
    pub denominator: u64,
    pub bound: String,
    pub exceeds_from: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveResult {
    pub formula: Formula,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub target: BigUint,
    #[serde(serialize_with = "crate::report::ser_display_vec")]
    pub solutions: Vec<BigUint>,
    /// Integer roots rejected, with the reason.
    pub rejected: Vec<(String, String)>,
    pub certificates: Vec<MonotoneCertificate>,
}

impl SolveResult {
    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }
}

/// Integer roots u ≥ 2 of Q(u) = t, given that Q is increasing on (bound, ∞).
fn integer_roots(q: &IntPolynomial, t: &BigInt, bound: &BigUint) -> (Vec<BigUint>, BigUint) {
    let mut roots = Vec::new();
    let top = bound.to_u64().unwrap_or(u64::MAX).max(2);
    for u in 2..=top {
        if &q.eval_i64(u as i64) == t {
            roots.push(BigUint::from(u));
        }
    }
    let at = |u: &BigUint| q.eval(&BigInt::from(u.clone()));
    let lo = BigUint::from(top + 1);
    let mut hi = lo.clone();
    while &at(&hi) < t {
        hi <<= 1;
    }
    // smallest u in [lo, hi] with Q(u) ≥ t
    let (mut a, mut b) = (lo, hi);
    while a < b {
        let mid = (&a + &b) >> 1;
        if &at(&mid) < t {
            a = mid + 1u32;
        } else {
            b = mid;
        }
    }
    let mut exceeds = a.clone();
    if &at(&a) == t {
        roots.push(a.clone());
        exceeds += 1u32;
    }
    (roots, exceeds)
}

/// All prime powers u satisfying the constraints with formula(u) = target.
pub fn solve_formula_eq(formula: &Formula, target: &BigUint, constraints: &Constraints) -> Result<SolveResult> {
    let mut candidates: Vec<BigUint> = Vec::new();
    let mut certificates = Vec::new();
    match formula.shape()? {
        Shape::Fixed(us) => candidates.extend(us.into_iter().map(BigUint::from)),
        Shape::Free { q, denominators } => {
            let dq = q.derivative();
            if !q.leading().is_some_and(|c| c.is_positive()) || dq.is_zero() {
                return Err(Error::NonMonotone(format!("{formula}: leading term does not grow")));
            }
            let bound = positivity_bound(&dq).unwrap_or_else(BigUint::one);
            for g in denominators {
                let t = BigInt::from(target.clone()) * BigInt::from(g);
                let (roots, exceeds) = integer_roots(&q, &t, &bound);
                candidates.extend(roots);
                certificates.push(MonotoneCertificate {
                    denominator: g,
                    bound: bound.to_string(),
                    exceeds_from: exceeds.to_string(),
                });
            }
        }
    }
    candidates.sort();
    candidates.dedup();
    let mut solutions = Vec::new();
    let mut rejected = Vec::new();
    for u in candidates {
        let reason = if characteristic(&u).is_none() {
            Some("not a prime power".to_string())
        } else if let Some(v) = constraints.violation(&u) {
            Some(v)
        } else {
            match formula.eval(&u) {
                Ok(v) if &v == target => None,
                Ok(v) => Some(format!("value {v} differs")),
                Err(e) => Some(e.to_string()),
            }
        };
        match reason {
            None => solutions.push(u),
            Some(r) => rejected.push((u.to_string(), r)),
        }
    }
    Ok(SolveResult { formula: formula.clone(), target: target.clone(), solutions, rejected, certificates })
}

/// Re-checks a certificate: Q(u) > N·g at `exceeds_from` and Q′ > 0 beyond `bound`.
pub fn recheck_certificate(formula: &Formula, target: &BigUint, cert: &MonotoneCertificate) -> Result<bool> {
    let Shape::Free { q, .. } = formula.shape()? else {
        return Ok(true);
    };
    let parse = |s: &str| s.parse::<BigUint>().map_err(|_| Error::Domain(format!("bad certificate value {s}")));
    let bound = parse(&cert.bound)?;
    let from = parse(&cert.exceeds_from)?;
    let t = BigInt::from(target.clone()) * BigInt::from(cert.denominator);
    let dq = q.derivative();
    let derivative_ok = positivity_bound(&dq).is_some_and(|b| b <= bound);
    let exceeds = q.eval(&BigInt::from(from.clone())) > t && from > bound;
    Ok(derivative_ok && exceeds)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn parse_round_trip() {
        for f in [
            Formula::Gpd { index: 6, sign: Sign::Minus },
            Formula::table1(Table1Row::LinearPrime, 7, Sign::Minus, 0),
            Formula::table1(Table1Row::L3Of4, 3, Sign::Plus, 2),
        ] {
            assert_eq!(Formula::parse(&f.to_string()).unwrap(), f);
        }
        assert_eq!(Formula::parse("l-r:7:-").unwrap(), Formula::n2_linear(7, Sign::Minus));
        assert_eq!(Formula::parse("k:6:-").unwrap(), Formula::Gpd { index: 6, sign: Sign::Minus });
        assert!(Formula::parse("l-r:7").is_err());
    }

    #[test]
    fn unitary_seven() {
        let f = Formula::n2_linear(7, Sign::Minus);
        let r = solve_formula_eq(&f, &b(547), &Constraints::odd()).unwrap();
        assert_eq!(r.solutions, vec![b(3)]);
        let r = solve_formula_eq(&f, &b(43), &Constraints::odd()).unwrap();
        assert!(r.is_empty());
        assert!(r.rejected.iter().any(|(u, why)| u == "2" && why.contains("odd")));
        let r = solve_formula_eq(&f, &b(43), &Constraints::default()).unwrap();
        assert_eq!(r.solutions, vec![b(2)]);
    }

    #[test]
    fn unitary_thirteen() {
        let f = Formula::n2_linear(13, Sign::Minus);
        let r = solve_formula_eq(&f, &b(398581), &Constraints::default()).unwrap();
        assert_eq!(r.solutions, vec![b(3)]);
        for c in &r.certificates {
            assert!(recheck_certificate(&f, &b(398581), c).unwrap());
        }
    }

    #[test]
    fn fixed_and_gpd() {
        let f = Formula::table1(Table1Row::OrthogonalMinusOf3Prime, 7, Sign::Plus, 0);
        assert_eq!(solve_formula_eq(&f, &b(547), &Constraints::default()).unwrap().solutions, vec![b(3)]);
        let f = Formula::Gpd { index: 6, sign: Sign::Minus };
        // k_6(−13) = Φ_6(−13) = 183 = 3·61, and (3, Φ_2(−13)) = 3
        let r = solve_formula_eq(&f, &b(61), &Constraints::default()).unwrap();
        assert_eq!(r.solutions, vec![b(13)]);
    }

    #[test]
    fn unsupported_rows() {
        let f = Formula::table1(Table1Row::L2Odd, 2, Sign::Plus, 1);
        assert!(solve_formula_eq(&f, &b(3), &Constraints::default()).is_err());
    }
}
