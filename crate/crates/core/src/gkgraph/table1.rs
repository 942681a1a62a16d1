use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::intarith::{is_prime, is_prime_power, pow};
use crate::polyring::Sign;

/// Rows of the table of simple classical groups with disconnected prime graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Table1Row {
    L2Odd,
    L2Even,
    LinearPrime,
    LinearPrimePlusOne,
    L3Of4,
    U6Of2,
    SymplecticPow2,
    SymplecticPrime,
    OddOrthogonalPow2,
    OddOrthogonalOf3,
    OrthogonalPlusPrime,
    OrthogonalPlusPrimePlusOne,
    OrthogonalMinusPow2,
    OrthogonalMinusOf2,
    OrthogonalMinusOf3Prime,
    OrthogonalMinusOf3Composite,
    OrthogonalMinusOf3Fermat,
}

/// Dimension parameter (r or m as in the row), field size u and sign τ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NParams {
    pub dim: u32,
    pub u: BigUint,
    pub tau: Sign,
}

impl NParams {
    pub fn new(dim: u32, u: u64, tau: Sign) -> Self {
        NParams { dim, u: BigUint::from(u), tau }
    }
}

impl Table1Row {
    pub const ALL: [Table1Row; 17] = [
        Table1Row::L2Odd,
        Table1Row::L2Even,
        Table1Row::LinearPrime,
        Table1Row::LinearPrimePlusOne,
        Table1Row::L3Of4,
        Table1Row::U6Of2,
        Table1Row::SymplecticPow2,
        Table1Row::SymplecticPrime,
        Table1Row::OddOrthogonalPow2,
        Table1Row::OddOrthogonalOf3,
        Table1Row::OrthogonalPlusPrime,
        Table1Row::OrthogonalPlusPrimePlusOne,
        Table1Row::OrthogonalMinusPow2,
        Table1Row::OrthogonalMinusOf2,
        Table1Row::OrthogonalMinusOf3Prime,
        Table1Row::OrthogonalMinusOf3Composite,
        Table1Row::OrthogonalMinusOf3Fermat,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Table1Row::L2Odd => "l2-odd",
            Table1Row::L2Even => "l2-even",
            Table1Row::LinearPrime => "l-r",
            Table1Row::LinearPrimePlusOne => "l-r+1",
            Table1Row::L3Of4 => "l3-4",
            Table1Row::U6Of2 => "u6-2",
            Table1Row::SymplecticPow2 => "s-2m-pow2",
            Table1Row::SymplecticPrime => "s-2r",
            Table1Row::OddOrthogonalPow2 => "o-2m+1-pow2",
            Table1Row::OddOrthogonalOf3 => "o-2r+1-3",
            Table1Row::OrthogonalPlusPrime => "o+-2r",
            Table1Row::OrthogonalPlusPrimePlusOne => "o+-2r+2",
            Table1Row::OrthogonalMinusPow2 => "o--2m-pow2",
            Table1Row::OrthogonalMinusOf2 => "o--2m-2",
            Table1Row::OrthogonalMinusOf3Prime => "o--2r-3",
            Table1Row::OrthogonalMinusOf3Composite => "o--2m-3",
            Table1Row::OrthogonalMinusOf3Fermat => "o--2r-3-fermat",
        }
    }

    pub fn parse(id: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|r| r.id() == id)
            .ok_or_else(|| Error::Unknown { kind: "table1 row", name: id.into() })
    }

    /// Number of n-values, s(S) − 1.
    pub fn value_count(self) -> usize {
        match self {
            Table1Row::L2Odd | Table1Row::L2Even | Table1Row::U6Of2 | Table1Row::OrthogonalMinusOf3Fermat => 2,
            Table1Row::L3Of4 => 3,
            _ => 1,
        }
    }
}

fn fail<T>(row: Table1Row, cond: &str) -> Result<T> {
    Err(Error::Domain(format!("{}: condition violated: {cond}", row.id())))
}

fn is_odd_prime(r: u32) -> bool {
    r > 2 && is_prime(&BigUint::from(r))
}

fn pow2_exponent(m: u32) -> Option<u32> {
    m.is_power_of_two().then(|| m.trailing_zeros())
}

fn two_gcd(x: &BigUint) -> BigUint {
    BigUint::from(if x.is_even() { 2u32 } else { 1 })
}

/// Evaluates the n-value formulas n_2, ..., n_s of a row.
pub fn n_value(row: Table1Row, params: &NParams) -> Result<Vec<BigUint>> {
    let u = &params.u;
    let d = params.dim;
    let Some((p, _)) = is_prime_power(u) else {
        return fail(row, "u is a prime power");
    };
    let u64v = u.to_u64();
    let one = BigUint::one();
    let u_minus_tau = match params.tau {
        Sign::Plus => u - 1u32,
        Sign::Minus => u + 1u32,
    };
    let u_pow_minus_tau = |r: u32| match params.tau {
        Sign::Plus => pow(u, r) - 1u32,
        Sign::Minus => pow(u, r) + 1u32,
    };
    let fixed_u = |allowed: &[u64], cond: &str| -> Result<()> {
        if u64v.is_some_and(|x| allowed.contains(&x)) {
            Ok(())
        } else {
            fail(row, cond)
        }
    };
    Ok(match row {
        Table1Row::L2Odd => {
            if u.is_even() || u <= &BigUint::from(3u32) {
                return fail(row, "3 < u odd");
            }
            let e_plus = (u % 4u32) == one;
            let half = if e_plus { (u + 1u32) / 2u32 } else { (u - 1u32) / 2u32 };
            vec![p, half]
        }
        Table1Row::L2Even => {
            if u.is_odd() || u <= &BigUint::from(2u32) {
                return fail(row, "u > 2 even");
            }
            vec![u - 1u32, u + 1u32]
        }
        Table1Row::LinearPrime => {
            if !is_odd_prime(d) {
                return fail(row, "r odd prime");
            }
            if d == 3 && u64v == Some(4) && params.tau == Sign::Plus {
                return fail(row, "(r,u,τ) ≠ (3,4,+)");
            }
            let g = u_minus_tau.gcd(&BigUint::from(d));
            vec![u_pow_minus_tau(d) / (&u_minus_tau * g)]
        }
        Table1Row::LinearPrimePlusOne => {
            if !is_odd_prime(d) {
                return fail(row, "r odd prime");
            }
            if !(BigUint::from(d + 1) % &u_minus_tau).is_zero_val() {
                return fail(row, "u − τ divides r + 1");
            }
            if d == 5 && u64v == Some(2) && params.tau == Sign::Minus {
                return fail(row, "(r,u,τ) ≠ (5,2,−)");
            }
            vec![u_pow_minus_tau(d) / &u_minus_tau]
        }
        Table1Row::L3Of4 => {
            fixed_u(&[4], "u = 4")?;
            [3u32, 5, 7].map(BigUint::from).to_vec()
        }
        Table1Row::U6Of2 => {
            fixed_u(&[2], "u = 2")?;
            [7u32, 11].map(BigUint::from).to_vec()
        }
        Table1Row::SymplecticPow2 => {
            if pow2_exponent(d).is_none_or(|l| l < 1) {
                return fail(row, "m = 2^l ≥ 2");
            }
            vec![(pow(u, d) + 1u32) / two_gcd(&(u - 1u32))]
        }
        Table1Row::SymplecticPrime | Table1Row::OrthogonalPlusPrimePlusOne => {
            if !is_odd_prime(d) {
                return fail(row, "r odd prime");
            }
            fixed_u(&[2, 3], "u ∈ {2,3}")?;
            vec![(pow(u, d) - 1u32) / two_gcd(&(u - 1u32))]
        }
        Table1Row::OddOrthogonalPow2 => {
            if pow2_exponent(d).is_none_or(|l| l < 2) {
                return fail(row, "m = 2^l ≥ 4");
            }
            if u.is_even() {
                return fail(row, "u odd");
            }
            vec![(pow(u, d) + 1u32) / two_gcd(&(u + 1u32))]
        }
        Table1Row::OddOrthogonalOf3 => {
            fixed_u(&[3], "u = 3")?;
            if !is_odd_prime(d) {
                return fail(row, "r ≥ 3 prime");
            }
            vec![(pow(u, d) - 1u32) / 2u32]
        }
        Table1Row::OrthogonalPlusPrime => {
            if !is_odd_prime(d) || d < 5 {
                return fail(row, "r ≥ 5 prime");
            }
            fixed_u(&[2, 3, 5], "u ∈ {2,3,5}")?;
            vec![(pow(u, d) - 1u32) / (u - 1u32)]
        }
        Table1Row::OrthogonalMinusPow2 => {
            if pow2_exponent(d).is_none_or(|l| l < 2) {
                return fail(row, "m = 2^l ≥ 4");
            }
            vec![(pow(u, d) + 1u32) / two_gcd(&(u - 1u32))]
        }
        Table1Row::OrthogonalMinusOf2 => {
            fixed_u(&[2], "u = 2")?;
            if d < 5 || pow2_exponent(d - 1).is_none() {
                return fail(row, "m = 2^l + 1 ≥ 5");
            }
            vec![pow(u, d - 1) + 1u32]
        }
        Table1Row::OrthogonalMinusOf3Prime => {
            fixed_u(&[3], "u = 3")?;
            if !is_odd_prime(d) || d < 5 || pow2_exponent(d - 1).is_some() {
                return fail(row, "5 ≤ r ≠ 2^l + 1");
            }
            vec![(pow(u, d) + 1u32) / 4u32]
        }
        Table1Row::OrthogonalMinusOf3Composite => {
            fixed_u(&[3], "u = 3")?;
            if d < 9 || pow2_exponent(d - 1).is_none() || is_prime(&BigUint::from(d)) {
                return fail(row, "9 ≤ m = 2^l + 1 not prime");
            }
            vec![(pow(u, d - 1) + 1u32) / 2u32]
        }
        Table1Row::OrthogonalMinusOf3Fermat => {
            fixed_u(&[3], "u = 3")?;
            if !is_odd_prime(d) || d < 5 || pow2_exponent(d - 1).is_none() {
                return fail(row, "r = 2^l + 1 ≥ 5 prime");
            }
            vec![(pow(u, d - 1) + 1u32) / 2u32, (pow(u, d) + 1u32) / 4u32]
        }
    })
}

trait IsZeroVal {
    fn is_zero_val(&self) -> bool;
}

impl IsZeroVal for BigUint {
    fn is_zero_val(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
}

/// The printed product reading (u^r − τ)(u − τ) of the L^τ_{r+1} cell, kept for audit.
pub fn linear_prime_plus_one_printed(params: &NParams) -> BigUint {
    let u = &params.u;
    let (a, b) = match params.tau {
        Sign::Plus => (pow(u, params.dim) - 1u32, u - 1u32),
        Sign::Minus => (pow(u, params.dim) + 1u32, u + 1u32),
    };
    a * b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nv(row: Table1Row, d: u32, u: u64, tau: Sign) -> Vec<u64> {
        n_value(row, &NParams::new(d, u, tau)).unwrap().iter().map(|x| x.to_u64().unwrap()).collect()
    }

    #[test]
    fn examples() {
        assert_eq!(nv(Table1Row::LinearPrime, 3, 3, Sign::Minus), vec![7]);
        assert_eq!(nv(Table1Row::SymplecticPrime, 3, 2, Sign::Plus), vec![7]);
        assert_eq!(nv(Table1Row::OrthogonalMinusOf3Prime, 7, 3, Sign::Plus), vec![547]);
        assert_eq!(nv(Table1Row::LinearPrimePlusOne, 7, 3, Sign::Plus), vec![1093]);
        assert_eq!(nv(Table1Row::OrthogonalMinusOf3Fermat, 5, 3, Sign::Plus), vec![41, 61]);
        assert_eq!(nv(Table1Row::OrthogonalMinusOf2, 9, 2, Sign::Plus), vec![257]);
        assert_eq!(nv(Table1Row::OrthogonalMinusOf3Composite, 9, 3, Sign::Plus), vec![3281]);
        assert_eq!(nv(Table1Row::L2Odd, 2, 5, Sign::Plus), vec![5, 3]);
    }

    #[test]
    fn violations_name_condition() {
        let e = n_value(Table1Row::LinearPrime, &NParams::new(3, 4, Sign::Plus)).unwrap_err();
        assert!(e.to_string().contains("(3,4,+)"));
        assert!(n_value(Table1Row::LinearPrimePlusOne, &NParams::new(7, 4, Sign::Plus)).is_err());
        assert!(n_value(Table1Row::SymplecticPrime, &NParams::new(7, 5, Sign::Plus)).is_err());
        assert!(n_value(Table1Row::OrthogonalMinusOf3Prime, &NParams::new(5, 3, Sign::Plus)).is_err());
        assert!(n_value(Table1Row::LinearPrime, &NParams::new(3, 6, Sign::Plus)).is_err());
    }

    #[test]
    fn printed_reading_differs() {
        let p = NParams::new(7, 3, Sign::Plus);
        assert_eq!(linear_prime_plus_one_printed(&p), BigUint::from(2186u32 * 2));
    }

    #[test]
    fn ids_round_trip() {
        for r in Table1Row::ALL {
            assert_eq!(Table1Row::parse(r.id()).unwrap(), r);
        }
    }
}
