//! Σ-sets: candidate values of k from the integral gcds of b and Φ_e, and the
//! sets of n-values of the groups S admitted by the dimension bounds.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use super::dims::{candidate_dimensions, Column};
use crate::error::{domain, Error, Result};
use crate::fixtures::Table2;
use crate::gkgraph::{n_value, NParams, Table1Row};
use crate::intarith::{factor_nat, is_prime, is_prime_power, lcm_all, FactoredNat};
use crate::polyring::{cyclotomic, integral_gcd, IntPolynomial};
use crate::primpart::residue_filter;
use crate::specgen::{Family, FieldSize, GroupId};
use crate::Sign;

/// The three shapes of b = (n,q+1)·t − (m,u−τ) with (n,q+1) ≠ (m,u−τ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum BForm {
    #[serde(rename = "t-m")]
    TMinusM,
    #[serde(rename = "nt-m")]
    NtMinusM,
    #[serde(rename = "nt-1")]
    NtMinusOne,
}

impl BForm {
    pub const ALL: [BForm; 3] = [BForm::TMinusM, BForm::NtMinusM, BForm::NtMinusOne];

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "t-m" => Ok(BForm::TMinusM),
            "nt-m" => Ok(BForm::NtMinusM),
            "nt-1" => Ok(BForm::NtMinusOne),
            _ => Err(Error::Unknown { kind: "b-form", name: s.into() }),
        }
    }

    pub fn id(self) -> &'static str {
        match self {
            BForm::TMinusM => "t-m",
            BForm::NtMinusM => "nt-m",
            BForm::NtMinusOne => "nt-1",
        }
    }

    /// ((n, q+1), (m, u−τ)) for this form.
    pub fn gcds(self, n: u32, m: u32) -> (u32, u32) {
        match self {
            BForm::TMinusM => (1, m),
            BForm::NtMinusM => (n, m),
            BForm::NtMinusOne => (n, 1),
        }
    }

    /// Forms admissible for the pair (n, m).
    pub fn for_pair(n: u32, m: u32) -> Vec<BForm> {
        BForm::ALL.into_iter().filter(|f| *f != BForm::NtMinusM || n != m).collect()
    }
}

impl fmt::Display for BForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// t(w) = 1 + w + … + w^{m−1}.
pub fn t_polynomial(m: u32) -> IntPolynomial {
    IntPolynomial::new(vec![BigInt::one(); m as usize])
}

/// b(w) = (n,q+1)·t(w) − (m,u−τ).
pub fn b_polynomial(n: u32, m: u32, form: BForm) -> IntPolynomial {
    let (a, c) = form.gcds(n, m);
    &t_polynomial(m).scale(&BigInt::from(a)) - &IntPolynomial::constant(BigInt::from(c))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ETrace {
    pub e: u32,
    pub c: FactoredNat,
    pub a: FactoredNat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SigmaValue {
    pub value: FactoredNat,
    /// A tuple m_1 ≥ m_2 ≥ … producing the value; larger parts are tried first.
    pub tuple: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SigmaSet {
    pub n: u32,
    pub m: u32,
    pub form: BForm,
    pub values: Vec<SigmaValue>,
    pub trace: Vec<ETrace>,
}

impl SigmaSet {
    pub fn numbers(&self) -> Vec<BigUint> {
        self.values.iter().map(|v| v.value.value().clone()).collect()
    }
}

fn check_request(n: u32, m: u32, form: BForm) -> Result<()> {
    if !is_prime(&BigUint::from(m)) || m < 3 {
        return domain(format!("m must be an odd prime, got {m}"));
    }
    if n < 3 {
        return domain(format!("n must be at least 3, got {n}"));
    }
    if form == BForm::NtMinusM && n == m {
        return domain("b-form nt-m needs n ≠ m");
    }
    Ok(())
}

/// a_e for 1 < e < m from b and the e-th cyclotomic polynomial in the same variable.
fn a_values(n: u32, m: u32, b: &IntPolynomial, phi: impl Fn(u32) -> IntPolynomial) -> Result<Vec<ETrace>> {
    (2..m)
        .map(|e| {
            let g = integral_gcd(b, &phi(e))?;
            let c = factor_nat(&g.content);
            let a = residue_filter(&c, (n - 1) as u64);
            Ok(ETrace { e, c, a })
        })
        .collect()
}

fn closure(m: u32, trace: &[ETrace]) -> Vec<SigmaValue> {
    let a: BTreeMap<u32, &FactoredNat> = trace.iter().map(|t| (t.e, &t.a)).collect();
    let b: Vec<BigUint> = (0..=m)
        .map(|l| {
            if l < 2 {
                return BigUint::one();
            }
            (2..m.min(l + 1)).filter(|e| l % e == 0).map(|e| a[&e].value().clone()).product()
        })
        .collect();
    let mut found: BTreeMap<BigUint, Vec<u32>> = BTreeMap::new();
    let mut stack = Vec::new();
    fn rec(
        max_part: u32,
        rem: u32,
        cur: &BigUint,
        b: &[BigUint],
        stack: &mut Vec<u32>,
        found: &mut BTreeMap<BigUint, Vec<u32>>,
    ) {
        if !cur.is_one() {
            found.entry(cur.clone()).or_insert_with(|| stack.clone());
        }
        for p in (2..=max_part.min(rem)).rev() {
            stack.push(p);
            let next = lcm_all([cur, &b[p as usize]]);
            rec(p, rem - p, &next, b, stack, found);
            stack.pop();
        }
    }
    rec(m, m, &BigUint::one(), &b, &mut stack, &mut found);
    found
        .into_iter()
        .map(|(v, tuple)| SigmaValue { value: factor_nat(&v), tuple })
        .collect()
}

/// Σ for (n, m, b-form), computed in the variable w = τu.
pub fn sigma_set(n: u32, m: u32, form: BForm) -> Result<SigmaSet> {
    check_request(n, m, form)?;
    let b = b_polynomial(n, m, form);
    let trace = a_values(n, m, &b, |e| cyclotomic(e, Sign::Plus))?;
    let values = closure(m, &trace);
    Ok(SigmaSet { n, m, form, values, trace })
}

/// The same set computed in u for a fixed τ, with b(τu) and Φ_e(τu).
pub fn sigma_set_in_u(n: u32, m: u32, form: BForm, tau: Sign) -> Result<SigmaSet> {
    check_request(n, m, form)?;
    let b = b_polynomial(n, m, form);
    let b = if tau == Sign::Minus { b.negate_var() } else { b };
    let trace = a_values(n, m, &b, |e| cyclotomic(e, tau))?;
    let values = closure(m, &trace);
    Ok(SigmaSet { n, m, form, values, trace })
}

/// Which groups S contribute to an n-value Σ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NValueClass {
    /// S_{2m}, O_{2m+1}, O^±_{2m}, O^+_{2m+2} with m odd.
    SymplecticOrthogonal,
    /// L^τ_{r+1}(u) with r prime.
    LinearPlusOne,
}

impl NValueClass {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "so" | "symplectic-orthogonal" => Ok(NValueClass::SymplecticOrthogonal),
            "lu" | "linear-plus-one" => Ok(NValueClass::LinearPlusOne),
            _ => Err(Error::Unknown { kind: "n-value class", name: s.into() }),
        }
    }

    pub fn id(self) -> &'static str {
        match self {
            NValueClass::SymplecticOrthogonal => "so",
            NValueClass::LinearPlusOne => "lu",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NValueEntry {
    pub value: FactoredNat,
    pub group: String,
    pub row: Table1Row,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub u: BigUint,
    /// Passes the residue filter for primitive divisors of (−q)^n − 1.
    pub admissible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NValueSigma {
    pub n: u32,
    pub class: NValueClass,
    pub entries: Vec<NValueEntry>,
}

impl NValueSigma {
    /// Distinct values, ascending.
    pub fn values(&self) -> Vec<BigUint> {
        let s: BTreeSet<BigUint> = self.entries.iter().map(|e| e.value.value().clone()).collect();
        s.into_iter().collect()
    }

    pub fn admissible_values(&self) -> Vec<BigUint> {
        let s: BTreeSet<BigUint> =
            self.entries.iter().filter(|e| e.admissible).map(|e| e.value.value().clone()).collect();
        s.into_iter().collect()
    }

    pub fn entries_for(&self, v: &BigUint) -> impl Iterator<Item = &NValueEntry> {
        let v = v.clone();
        self.entries.iter().filter(move |e| e.value.value() == &v)
    }
}

fn label(family: Family, sign: Sign, dim: u32, u: u64) -> String {
    FieldSize::from_u64(u)
        .and_then(|f| GroupId::with_field(family, sign, dim, f))
        .map(|g| g.to_string())
        .unwrap_or_else(|_| format!("{family:?}({sign:?},{dim},{u})"))
}

/// Σ of n_i(S) over the groups of a class admitted for target n.
pub fn nvalue_sigma(n: u32, class: NValueClass, table2: &Table2) -> Result<NValueSigma> {
    let modulus = 2 * n as u64;
    let mut raw: Vec<(BigUint, String, Table1Row, u64)> = Vec::new();
    let mut push = |row: Table1Row, dim: u32, u: u64, tau: Sign, group: String| {
        if let Ok(vals) = n_value(row, &NParams::new(dim, u, tau)) {
            for v in vals {
                raw.push((v, group.clone(), row, u));
            }
        }
    };
    match class {
        NValueClass::SymplecticOrthogonal => {
            for column in Column::ORTHOGONAL_LIKE {
                for m in candidate_dimensions(n, column, table2)?.admitted {
                    let (rows, family, sign, dim): (&[Table1Row], Family, Sign, u32) = match column {
                        Column::Symplectic => (&[Table1Row::SymplecticPrime], Family::Symplectic, Sign::Plus, m),
                        Column::OddOrthogonal => (&[Table1Row::OddOrthogonalOf3], Family::OddDimOrthogonal, Sign::Plus, m),
                        Column::OrthogonalMinus => (
                            &[
                                Table1Row::OrthogonalMinusOf2,
                                Table1Row::OrthogonalMinusOf3Prime,
                                Table1Row::OrthogonalMinusOf3Composite,
                                Table1Row::OrthogonalMinusOf3Fermat,
                            ],
                            Family::EvenDimOrthogonalMinus,
                            Sign::Minus,
                            m,
                        ),
                        Column::OrthogonalPlus => (&[Table1Row::OrthogonalPlusPrime], Family::EvenDimOrthogonalPlus, Sign::Plus, m),
                        Column::OrthogonalPlusShifted => (
                            &[Table1Row::OrthogonalPlusPrimePlusOne],
                            Family::EvenDimOrthogonalPlus,
                            Sign::Plus,
                            m + 1,
                        ),
                        Column::LinearUnitary => unreachable!(),
                    };
                    for &row in rows {
                        for u in [2u64, 3, 5] {
                            push(row, m, u, Sign::Plus, label(family, sign, dim, u));
                        }
                    }
                }
            }
        }
        NValueClass::LinearPlusOne => {
            for d in candidate_dimensions(n, Column::LinearUnitary, table2)?.admitted {
                let r = d - 1;
                if r < 3 || !is_prime(&BigUint::from(r)) {
                    continue;
                }
                for tau in [Sign::Plus, Sign::Minus] {
                    for k in (1..=d as u64).filter(|k| d as u64 % k == 0) {
                        let u = if tau == Sign::Plus { k + 1 } else { k - 1 };
                        if u < 2 || is_prime_power(&BigUint::from(u)).is_none() {
                            continue;
                        }
                        let group = label(Family::LinearUnitary, tau, d, u);
                        if r == 5 && u == 2 && tau == Sign::Minus {
                            push(Table1Row::U6Of2, r, u, tau, group);
                        } else {
                            push(Table1Row::LinearPrimePlusOne, r, u, tau, group);
                        }
                    }
                }
            }
        }
    }
    let filter = class == NValueClass::LinearPlusOne;
    let mut entries: Vec<NValueEntry> = raw
        .into_iter()
        .map(|(v, group, row, u)| {
            let value = factor_nat(&v);
            let admissible = !filter || residue_filter(&value, modulus) == value;
            NValueEntry { value, group, row, u: BigUint::from(u), admissible }
        })
        .collect();
    entries.sort_by(|a, b| (a.value.value(), &a.group).cmp(&(b.value.value(), &b.group)));
    entries.dedup_by(|a, b| a.value == b.value && a.group == b.group);
    if entries.iter().any(|e| e.value.value().is_zero()) {
        return domain("zero n-value");
    }
    Ok(NValueSigma { n, class, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::Fixtures;

    fn nums(s: &SigmaSet) -> Vec<u64> {
        s.numbers().iter().map(|x| u64::try_from(x.clone()).unwrap()).collect()
    }

    #[test]
    fn small_rows() {
        assert_eq!(nums(&sigma_set(7, 5, BForm::TMinusM).unwrap()), vec![7]);
        assert_eq!(nums(&sigma_set(7, 5, BForm::NtMinusM).unwrap()), vec![13]);
        assert_eq!(nums(&sigma_set(7, 7, BForm::NtMinusOne).unwrap()), vec![31 * 61]);
        assert!(nums(&sigma_set(7, 3, BForm::TMinusM).unwrap()).is_empty());
        assert!(sigma_set(7, 7, BForm::NtMinusM).is_err());
        assert!(sigma_set(7, 9, BForm::TMinusM).is_err());
    }

    #[test]
    fn sign_independent() {
        for (n, m, f) in [(7, 5, BForm::NtMinusOne), (11, 11, BForm::TMinusM), (7, 7, BForm::NtMinusOne)] {
            let w = sigma_set(n, m, f).unwrap();
            for tau in [Sign::Plus, Sign::Minus] {
                assert_eq!(sigma_set_in_u(n, m, f, tau).unwrap().numbers(), w.numbers());
            }
        }
    }

    #[test]
    fn b_identity() {
        for (n, m, f) in [(7, 5, BForm::TMinusM), (13, 11, BForm::NtMinusM), (23, 23, BForm::NtMinusOne)] {
            let b = b_polynomial(n, m, f);
            let t = t_polynomial(m);
            let (a, c) = f.gcds(n, m);
            for w in 2..=50i64 {
                assert_eq!(b.eval_i64(w), BigInt::from(a) * t.eval_i64(w) - BigInt::from(c));
            }
        }
    }

    #[test]
    fn symplectic_orthogonal_sigma_seven() {
        let fx = Fixtures::embedded().unwrap();
        let s = nvalue_sigma(7, NValueClass::SymplecticOrthogonal, &fx.table2).unwrap();
        let got: Vec<u64> = s.values().iter().map(|x| u64::try_from(x.clone()).unwrap()).collect();
        assert_eq!(got, vec![7, 13, 17, 31, 41, 61, 121, 127, 547, 781, 1093, 19531]);
        assert!(s.entries_for(&BigUint::from(547u32)).any(|e| e.group == "O^-_14(3)"));
    }

    #[test]
    fn linear_sigma_contains_known_values() {
        let fx = Fixtures::embedded().unwrap();
        let s = nvalue_sigma(11, NValueClass::LinearPlusOne, &fx.table2).unwrap();
        let vals = s.values();
        for v in [683u64, 2047, 8191, 21633936185161] {
            assert!(vals.contains(&BigUint::from(v)), "{v}");
        }
    }
}
