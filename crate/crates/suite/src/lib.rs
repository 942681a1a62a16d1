//! Independent oracles: element orders of small groups by enumeration and
//! primitive parts by repeated gcd stripping.

use std::collections::BTreeSet;

/// A finite field of order p or 9 given by addition and multiplication tables.
pub struct Field {
    pub q: usize,
    add: Vec<Vec<u8>>,
    mul: Vec<Vec<u8>>,
}

impl Field {
    pub fn prime(p: usize) -> Self {
        let add = (0..p).map(|x| (0..p).map(|y| ((x + y) % p) as u8).collect()).collect();
        let mul = (0..p).map(|x| (0..p).map(|y| ((x * y) % p) as u8).collect()).collect();
        Field { q: p, add, mul }
    }

    /// F_4 as F_2[w], w^2 = w + 1; element a + 2b is a + bw.
    pub fn f4() -> Self {
        let split = |x: usize| (x % 2, x / 2);
        let join = |a: usize, b: usize| (a % 2 + 2 * (b % 2)) as u8;
        let add = (0..4).map(|x| (0..4).map(|y| (x ^ y) as u8).collect()).collect();
        let mul = (0..4)
            .map(|x| {
                (0..4)
                    .map(|y| {
                        let ((a, b), (c, d)) = (split(x), split(y));
                        // (a + bw)(c + dw) = ac + bd + (ad + bc + bd)w
                        join(a * c + b * d, a * d + b * c + b * d)
                    })
                    .collect()
            })
            .collect();
        Field { q: 4, add, mul }
    }

    /// F_9 as F_3[i], i^2 = −1; element a + 3b is a + bi.
    pub fn f9() -> Self {
        let split = |x: usize| (x % 3, x / 3);
        let join = |a: usize, b: usize| (a % 3 + 3 * (b % 3)) as u8;
        let add = (0..9)
            .map(|x| (0..9).map(|y| join(split(x).0 + split(y).0, split(x).1 + split(y).1)).collect())
            .collect();
        let mul = (0..9)
            .map(|x| {
                (0..9)
                    .map(|y| {
                        let ((a, b), (c, d)) = (split(x), split(y));
                        join(a * c + 2 * b * d, a * d + b * c)
                    })
                    .collect()
            })
            .collect();
        Field { q: 9, add, mul }
    }

    pub fn add(&self, x: u8, y: u8) -> u8 {
        self.add[x as usize][y as usize]
    }

    pub fn mul(&self, x: u8, y: u8) -> u8 {
        self.mul[x as usize][y as usize]
    }

    pub fn neg(&self, x: u8) -> u8 {
        (0..self.q as u8).find(|&y| self.add(x, y) == 0).unwrap()
    }

    /// Frobenius x ↦ x^3 on F_9, which is a + bi ↦ a − bi.
    pub fn conj9(&self, x: u8) -> u8 {
        let (a, b) = (x % 3, x / 3);
        a + 3 * ((3 - b) % 3)
    }
}

type Mat = Vec<u8>;

fn mat_mul(f: &Field, n: usize, a: &Mat, b: &Mat) -> Mat {
    let mut c = vec![0u8; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0;
            for k in 0..n {
                s = f.add(s, f.mul(a[i * n + k], b[k * n + j]));
            }
            c[i * n + j] = s;
        }
    }
    c
}

fn det(f: &Field, n: usize, m: &Mat) -> u8 {
    match n {
        2 => f.add(f.mul(m[0], m[3]), f.neg(f.mul(m[1], m[2]))),
        3 => {
            let t = |a: usize, b: usize, c: usize| f.mul(m[a], f.mul(m[b], m[c]));
            let plus = f.add(f.add(t(0, 4, 8), t(1, 5, 6)), t(2, 3, 7));
            let minus = f.add(f.add(t(2, 4, 6), t(0, 5, 7)), t(1, 3, 8));
            f.add(plus, f.neg(minus))
        }
        _ => unreachable!(),
    }
}

fn is_scalar(n: usize, m: &Mat) -> bool {
    (0..n * n).all(|k| if k % (n + 1) == 0 { m[k] == m[0] } else { m[k] == 0 })
}

/// Order of the image of m modulo scalars.
fn projective_order(f: &Field, n: usize, m: &Mat) -> u64 {
    let mut p = m.clone();
    let mut k = 1;
    while !is_scalar(n, &p) {
        p = mat_mul(f, n, &p, m);
        k += 1;
    }
    k
}

fn all_matrices(q: usize, n: usize) -> impl Iterator<Item = Mat> {
    let total = q.pow((n * n) as u32);
    (0..total).map(move |mut x| {
        let mut m = vec![0u8; n * n];
        for e in m.iter_mut() {
            *e = (x % q) as u8;
            x /= q;
        }
        m
    })
}

/// Element orders of PSL(n, q) by enumerating SL(n, q), n ∈ {2, 3}.
pub fn psl_orders(f: &Field, n: usize) -> BTreeSet<u64> {
    all_matrices(f.q, n).filter(|m| det(f, n, m) == 1).map(|m| projective_order(f, n, &m)).collect()
}

/// Element orders of SU(3, 3), which equals PSU(3, 3), with its size.
pub fn su33_orders() -> (BTreeSet<u64>, usize) {
    let f = Field::f9();
    let vecs: Vec<[u8; 3]> = (0..729).map(|x| [(x % 9) as u8, (x / 9 % 9) as u8, (x / 81) as u8]).collect();
    let herm = |x: &[u8; 3], y: &[u8; 3]| {
        (0..3).fold(0u8, |s, k| f.add(s, f.mul(x[k], f.conj9(y[k]))))
    };
    let unit: Vec<&[u8; 3]> = vecs.iter().filter(|v| herm(v, v) == 1).collect();
    let mut orders = BTreeSet::new();
    let mut count = 0;
    for v1 in &unit {
        for v2 in unit.iter().filter(|v| herm(v1, v) == 0) {
            for v3 in unit.iter().filter(|v| herm(v1, v) == 0 && herm(v2, v) == 0) {
                let m: Mat = v1.iter().chain(v2.iter()).chain(v3.iter()).copied().collect();
                if det(&f, 3, &m) != 1 {
                    continue;
                }
                count += 1;
                let mut p = m.clone();
                let mut k = 1;
                while !(is_scalar(3, &p) && p[0] == 1) {
                    p = mat_mul(&f, 3, &p, &m);
                    k += 1;
                }
                orders.insert(k);
            }
        }
    }
    (orders, count)
}

/// Element orders of A_5 from cycle types of even permutations.
pub fn a5_orders() -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    let mut perm = [0usize, 1, 2, 3, 4];
    permute(&mut perm, 0, &mut out);
    out
}

fn permute(p: &mut [usize; 5], k: usize, out: &mut BTreeSet<u64>) {
    if k == 5 {
        let inversions = (0..5).flat_map(|i| (i + 1..5).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
        if inversions % 2 == 0 {
            let mut seen = [false; 5];
            let mut order = 1u64;
            for s in 0..5 {
                let mut len = 0;
                let mut x = s;
                while !seen[x] {
                    seen[x] = true;
                    x = p[x];
                    len += 1;
                }
                if len > 0 {
                    order = lcm(order, len);
                }
            }
            out.insert(order);
        }
        return;
    }
    for i in k..5 {
        p.swap(k, i);
        permute(p, k + 1, out);
        p.swap(k, i);
    }
}

pub fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a as u128, b as u128) as u64 * b
}

fn power_minus_one(a: i128, i: u32) -> u128 {
    (a.pow(i) - 1).unsigned_abs()
}

/// |a^i − 1| with every prime dividing some a^j − 1, j < i, removed.
pub fn stripped_part(a: i128, i: u32) -> u128 {
    let mut p = power_minus_one(a, i);
    for j in 1..i {
        let d = power_minus_one(a, j);
        loop {
            let g = gcd(p, d);
            if g == 1 {
                break;
            }
            p /= g;
        }
    }
    p
}

/// Order of an odd a modulo 2: 1 when 4 | a − 1, 2 when 4 | a + 1.
fn two_order(a: i128) -> u32 {
    if (a - 1).rem_euclid(4) == 0 {
        1
    } else {
        2
    }
}

/// Whether a^i − 1 has a primitive prime divisor.
pub fn has_primitive_prime(a: i128, i: u32) -> bool {
    let odd = {
        let mut p = stripped_part(a, i);
        while p % 2 == 0 {
            p /= 2;
        }
        p
    };
    odd > 1 || (a % 2 != 0 && two_order(a) == i)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use num_bigint::{BigInt, BigUint};
    use num_traits::ToPrimitive;

    use super::*;
    use specrec::caselab::{sigma_set, BForm};
    use specrec::primpart::{
        greatest_primitive_divisor, greatest_primitive_value, primitive_part_brute_force, primitive_prime_divisors, PrimitiveSpec,
        ZSIGMONDY_EXCEPTIONS,
    };
    use specrec::specgen::{exponent, spectrum_generators, GroupId};

    fn spectrum(g: &GroupId) -> BTreeSet<u64> {
        spectrum_generators(g).unwrap().spectrum().iter().map(|x| x.to_u64().unwrap()).collect()
    }

    fn set(v: &[u64]) -> BTreeSet<u64> {
        v.iter().copied().collect()
    }

    fn lcm_of(s: &BTreeSet<u64>) -> u64 {
        s.iter().fold(1, |a, &b| lcm(a, b))
    }

    #[test]
    fn a5_matches_l2_4_and_l2_5() {
        let orders = a5_orders();
        assert_eq!(orders, set(&[1, 2, 3, 5]));
        assert_eq!(spectrum(&GroupId::linear(2, 5).unwrap()), orders);
        assert_eq!(spectrum(&GroupId::linear(2, 4).unwrap()), orders);
        assert_eq!(spectrum_generators(&GroupId::linear(2, 5).unwrap()).unwrap().lcm(), BigUint::from(lcm_of(&orders)));
    }

    #[test]
    fn psl2_by_enumeration() {
        for p in [5usize, 7, 11, 13] {
            let orders = psl_orders(&Field::prime(p), 2);
            let g = GroupId::linear(2, p as u64).unwrap();
            assert_eq!(spectrum(&g), orders, "L_2({p})");
            assert_eq!(spectrum_generators(&g).unwrap().lcm(), BigUint::from(lcm_of(&orders)), "L_2({p})");
        }
    }

    #[test]
    fn l3_2_by_enumeration() {
        let orders = psl_orders(&Field::prime(2), 3);
        assert_eq!(orders, set(&[1, 2, 3, 4, 7]));
        let g = GroupId::linear(3, 2).unwrap();
        assert_eq!(spectrum(&g), orders);
        assert_eq!(exponent(&g).unwrap(), BigUint::from(84u32));
        assert_eq!(lcm_of(&orders), 84);
    }

    #[test]
    fn l3_3_and_l3_4_by_enumeration() {
        for (f, q) in [(Field::prime(3), 3u64), (Field::f4(), 4)] {
            let orders = psl_orders(&f, 3);
            let g = GroupId::linear(3, q).unwrap();
            assert_eq!(spectrum(&g), orders, "L_3({q})");
            assert_eq!(exponent(&g).unwrap(), BigUint::from(lcm_of(&orders)), "L_3({q})");
        }
    }

    #[test]
    fn u3_3_by_enumeration() {
        let (orders, size) = su33_orders();
        assert_eq!(size, 6048);
        assert_eq!(orders, set(&[1, 2, 3, 4, 6, 7, 8, 12]));
        let g = GroupId::unitary(3, 3).unwrap();
        assert_eq!(spectrum(&g), orders);
        assert_eq!(exponent(&g).unwrap(), BigUint::from(168u32));
    }

    #[test]
    fn greatest_primitive_divisor_against_gcd_stripping() {
        for a in (-30i64..=30).filter(|a| a.abs() >= 2) {
            for i in 3..=14u32 {
                let spec = PrimitiveSpec::new(a, i).unwrap();
                let oracle = BigUint::from(stripped_part(a as i128, i));
                assert_eq!(greatest_primitive_value(&spec).unwrap(), oracle, "k_{i}({a})");
                assert_eq!(greatest_primitive_divisor(&spec).unwrap().value(), &oracle, "k_{i}({a})");
                assert_eq!(primitive_part_brute_force(&spec), oracle, "k_{i}({a})");
            }
        }
    }

    #[test]
    fn zsigmondy_exceptions_are_exact() {
        let mut found = Vec::new();
        for a in (-10i64..=10).filter(|a| a.abs() >= 2) {
            for i in 1..=12u32 {
                let oracle = has_primitive_prime(a as i128, i);
                let lib = !primitive_prime_divisors(&PrimitiveSpec::new(a, i).unwrap()).is_empty();
                assert_eq!(lib, oracle, "R_{i}({a})");
                if !oracle {
                    found.push((a, i));
                }
            }
        }
        let mut expected = ZSIGMONDY_EXCEPTIONS.to_vec();
        expected.sort();
        found.sort();
        assert_eq!(found, expected);
    }

    #[test]
    fn kgpd_minus_three_seven() {
        let spec = PrimitiveSpec::new(BigInt::from(-3), 7).unwrap();
        assert_eq!(greatest_primitive_value(&spec).unwrap(), BigUint::from(547u32));
    }

    #[test]
    fn sigma_seven_five_t_m() {
        let s = sigma_set(7, 5, BForm::TMinusM).unwrap();
        assert_eq!(s.numbers(), vec![BigUint::from(7u32)]);
    }
}
