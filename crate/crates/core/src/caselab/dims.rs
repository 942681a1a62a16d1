//! Upper bounds on the dimension of S from b/m < (F(n)+2)/(n−2), with
//! lower bounds taken from fixture data.

use std::fmt;

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fixtures::Table2;
use crate::intarith::{is_prime, phi_sum};
use crate::polyring::phi_inequality_certificate;
use crate::specgen::{exponent_lower_bound, Family, GroupId};
use crate::Sign;

/// Columns of the dimension-bound table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Column {
    #[serde(rename = "lu")]
    LinearUnitary,
    #[serde(rename = "sp")]
    Symplectic,
    #[serde(rename = "o-odd")]
    OddOrthogonal,
    #[serde(rename = "o-")]
    OrthogonalMinus,
    #[serde(rename = "o+")]
    OrthogonalPlus,
    #[serde(rename = "o+shift")]
    OrthogonalPlusShifted,
}

impl Column {
    pub const ALL: [Column; 6] = [
        Column::LinearUnitary,
        Column::Symplectic,
        Column::OddOrthogonal,
        Column::OrthogonalMinus,
        Column::OrthogonalPlus,
        Column::OrthogonalPlusShifted,
    ];

    pub const ORTHOGONAL_LIKE: [Column; 5] = [
        Column::Symplectic,
        Column::OddOrthogonal,
        Column::OrthogonalMinus,
        Column::OrthogonalPlus,
        Column::OrthogonalPlusShifted,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Column::LinearUnitary => "lu",
            Column::Symplectic => "sp",
            Column::OddOrthogonal => "o-odd",
            Column::OrthogonalMinus => "o-",
            Column::OrthogonalPlus => "o+",
            Column::OrthogonalPlusShifted => "o+shift",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.to_ascii_lowercase();
        Column::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .or(match s.as_str() {
                "linear" | "unitary" | "linear-unitary" => Some(Column::LinearUnitary),
                "symplectic" => Some(Column::Symplectic),
                "odd-orthogonal" => Some(Column::OddOrthogonal),
                "orthogonal-minus" => Some(Column::OrthogonalMinus),
                "orthogonal-plus" => Some(Column::OrthogonalPlus),
                "orthogonal-plus-shifted" => Some(Column::OrthogonalPlusShifted),
                _ => None,
            })
            .ok_or_else(|| Error::Unknown { kind: "family", name: s.clone() })
    }

    /// The group whose exponent governs the bound for parameter m.
    fn group(self, m: u32) -> Option<GroupId> {
        let (family, sign, dim) = match self {
            Column::LinearUnitary => (Family::LinearUnitary, Sign::Plus, m),
            Column::Symplectic => (Family::Symplectic, Sign::Plus, m),
            Column::OddOrthogonal => (Family::OddDimOrthogonal, Sign::Plus, m),
            Column::OrthogonalMinus => (Family::EvenDimOrthogonalMinus, Sign::Minus, m),
            Column::OrthogonalPlus => (Family::EvenDimOrthogonalPlus, Sign::Plus, m),
            Column::OrthogonalPlusShifted => (Family::EvenDimOrthogonalPlus, Sign::Plus, m + 1),
        };
        GroupId::new(family, sign, dim, 3).ok()
    }

    /// table1 fixture conditions on m once m = 2^l ≥ 4 is ruled out for S_{2m}, O_{2m+1}, O^-_{2m}.
    pub fn structural(self, m: u32) -> bool {
        let odd_prime = |x: u32| x > 2 && is_prime(&BigUint::from(x));
        match self {
            Column::LinearUnitary => odd_prime(m) || odd_prime(m.saturating_sub(1)),
            Column::Symplectic | Column::OddOrthogonal | Column::OrthogonalPlusShifted => odd_prime(m),
            Column::OrthogonalMinus => m >= 5 && m % 2 == 1 && (odd_prime(m) || (m - 1).is_power_of_two()),
            Column::OrthogonalPlus => m >= 5 && odd_prime(m),
        }
    }
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

const SCAN_LIMIT: u32 = 200;
const REFINE_LIMIT: u32 = 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionSet {
    pub n: u32,
    pub column: Column,
    /// (F(n)+2)/(n−2) as (numerator, denominator).
    pub ratio: (u64, u64),
    pub stage1_max: u32,
    /// Present for the linear/unitary column, where F(m) − 2 sharpens the bound.
    pub stage2_max: Option<u32>,
    pub lower: u32,
    /// lower ≤ m with both stages passing.
    pub range: Vec<u32>,
    /// `range` restricted to the structural conditions.
    pub admitted: Vec<u32>,
    pub fixture: Vec<u32>,
    /// Admitted by computation, absent from the fixture.
    pub extra: Vec<u32>,
    /// Listed in the fixture, not admitted by computation.
    pub missing: Vec<u32>,
}

impl DimensionSet {
    pub fn audit(&self) -> Vec<String> {
        let mut out = vec![format!(
            "stage 1 gives m ≤ {}{}",
            self.stage1_max,
            self.stage2_max.map(|s| format!(", stage 2 gives m ≤ {s}")).unwrap_or_default()
        )];
        if !self.extra.is_empty() {
            out.push(format!("admitted but not tabulated: {:?}", self.extra));
        }
        if !self.missing.is_empty() {
            out.push(format!("tabulated but not admitted: {:?}", self.missing));
        }
        out
    }
}

/// Dimension parameters of S allowed for L = U_n(q) in one column.
pub fn candidate_dimensions(n: u32, column: Column, table2: &Table2) -> Result<DimensionSet> {
    if n < 5 {
        return Err(Error::Domain(format!("target dimension must be at least 5, got {n}")));
    }
    let fnum = phi_sum(n as u64)? + 2;
    let fden = (n - 2) as u64;
    let below = |num: u64, den: u64, m: u32| -> bool {
        // num/(den·m) < fnum/fden
        (num as u128) * (fden as u128) < (den as u128) * (m as u128) * (fnum as u128)
    };
    let mut stage1 = Vec::new();
    for m in 2..=SCAN_LIMIT {
        let Some(g) = column.group(m) else { continue };
        // L_2 has no exponent bound of this shape and is not a candidate
        let Ok((num, den)) = exponent_lower_bound(&g) else { continue };
        if below(num, den, m) {
            stage1.push(m);
        }
    }
    let stage1_max = stage1.last().copied().unwrap_or(0);
    let refine = column == Column::LinearUnitary;
    let stage2 = |m: u32| -> Result<bool> {
        if !refine {
            return Ok(true);
        }
        // beyond the tabulated range the product inequality is certified per m
        if m > REFINE_LIMIT && !phi_inequality_certificate(m)?.holds {
            return Ok(true);
        }
        Ok(below(phi_sum(m as u64)?.saturating_sub(2), 1, m))
    };
    let entry = table2.entry(n, column);
    let fixture: Vec<u32> = entry.map(|e| e.values()).unwrap_or_default();
    // an entry with no values: the external lower bound exceeds every upper bound
    let lower = match (entry, fixture.first()) {
        (_, Some(&m)) => m,
        (Some(_), None) => u32::MAX,
        (None, None) => 3,
    };
    let mut range = Vec::new();
    let mut passing = Vec::new();
    for &m in &stage1 {
        if stage2(m)? {
            passing.push(m);
            if m >= lower {
                range.push(m);
            }
        }
    }
    let stage2_max = refine.then(|| passing.last().copied().unwrap_or(0));
    let admitted: Vec<u32> = range.iter().copied().filter(|&m| column.structural(m)).collect();
    let fixture_structural: Vec<u32> = fixture.iter().copied().filter(|&m| column.structural(m)).collect();
    let extra = if column == Column::LinearUnitary {
        range.iter().copied().filter(|m| !fixture.contains(m)).collect()
    } else {
        admitted.iter().copied().filter(|m| !fixture.contains(m)).collect()
    };
    let missing = fixture_structural.iter().copied().filter(|m| !range.contains(m)).collect();
    Ok(DimensionSet {
        n,
        column,
        ratio: (fnum, fden),
        stage1_max,
        stage2_max,
        lower,
        range,
        admitted,
        fixture,
        extra,
        missing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::Fixtures;

    #[test]
    fn known_examples() {
        let fx = Fixtures::embedded().unwrap();
        let d = candidate_dimensions(7, Column::LinearUnitary, &fx.table2).unwrap();
        assert_eq!(d.range, (3..=12).collect::<Vec<_>>());
        assert!(d.extra.is_empty() && d.missing.is_empty());
        let d = candidate_dimensions(23, Column::Symplectic, &fx.table2).unwrap();
        assert_eq!(d.stage1_max, 16);
        assert_eq!(d.admitted, vec![13]);
        let d = candidate_dimensions(11, Column::LinearUnitary, &fx.table2).unwrap();
        assert_eq!(d.stage1_max, 20);
        assert!(d.range.starts_with(&[11, 12, 13, 14]));
        assert!(d.extra.iter().all(|&m| !Column::LinearUnitary.structural(m)));
    }

    #[test]
    fn parse_columns() {
        assert_eq!(Column::parse("Symplectic").unwrap(), Column::Symplectic);
        assert_eq!(Column::parse("o+shift").unwrap(), Column::OrthogonalPlusShifted);
        assert!(Column::parse("e8").is_err());
    }
}
