use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;

use specrec::caselab::{
    b_polynomial, n2_unitary, recheck_certificate, sigma_set, sigma_set_in_u, solve_formula_eq, BForm, Constraints, Formula,
    TARGETS,
};
use specrec::fixtures::Fixtures;
use specrec::gkgraph::{build_prime_graph, component_orders, components, independence_number};
use specrec::intarith::{factor_nat, factor_u64, factorize, is_prime, is_prime_power_u64, mult_order, phi_sum, pi_part};
use specrec::polyring::{cyclotomic, eval, integral_gcd, IntPolynomial};
use specrec::primpart::{greatest_primitive_value, primitive_prime_divisors, PrimitiveSpec};
use specrec::specgen::{
    exponent, exponent_lower_bound, magr_congruence_sum, spectrum_contains, spectrum_generators, Family, GroupId,
};
use specrec::Sign;

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

fn recompose(f: &specrec::intarith::FactoredNat) -> BigUint {
    f.factors().iter().map(|(p, e)| num_traits::Pow::pow(p, *e)).product()
}

fn odd_prime_powers(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|q| q % 2 == 1 && is_prime_power_u64(*q).is_some()).collect()
}

#[test]
fn factor_round_trip_up_to_a_million() {
    for n in 1..=1_000_000u64 {
        let f = factor_u64(n);
        assert_eq!(recompose(&f), big(n), "{n}");
        assert!(f.primes().all(is_prime), "{n}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn factor_round_trip_128_bit(n in 1u128..) {
        let v = BigUint::from(n);
        let f = factorize(&BigInt::from(v.clone())).unwrap();
        prop_assert_eq!(recompose(&f), v);
        prop_assert!(f.primes().all(is_prime));
    }
}

proptest! {
    #[test]
    fn lifting_the_exponent(r_idx in 0usize..14, k in -2000i64..=2000, m in 1u32..=200) {
        let primes = [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];
        let r = primes[r_idx];
        let a = 1 + k * r as i64;
        prop_assume!(a.abs() <= 10_000 && a != 1);
        let rb = [big(r)];
        let a_m: BigInt = BigInt::from(a).pow(m) - 1;
        let lhs = pi_part(&a_m.magnitude().clone(), &rb, false).unwrap();
        let rhs = pi_part(&big(m as u64), &rb, false).unwrap()
            * pi_part(&BigInt::from(a - 1).magnitude().clone(), &rb, false).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn mult_order_divides_r_minus_one(r_idx in 1usize..200, a in -100_000i64..100_000) {
        let r = specrec::intarith::sieve(2000)[r_idx] as u64;
        prop_assume!(a % r as i64 != 0);
        let e = mult_order(&big(r), &BigInt::from(a)).unwrap();
        prop_assert!(((r - 1) % e.to_u64().unwrap()) == 0);
        let back = BigInt::from(a).modpow(&BigInt::from(e), &BigInt::from(r)).mod_floor(&BigInt::from(r));
        prop_assert!(back.is_one());
    }

    #[test]
    fn pi_part_and_complement(n in 1u64.., mask in 0u32..64) {
        let primes: Vec<BigUint> = [2u64, 3, 5, 7, 11, 13].iter().enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &p)| big(p)).collect();
        let part = pi_part(&big(n), &primes, false).unwrap();
        let rest = pi_part(&big(n), &primes, true).unwrap();
        prop_assert_eq!(&part * &rest, big(n));
        prop_assert!(factor_nat(&part).primes().all(|p| primes.contains(p)));
        prop_assert!(factor_nat(&rest).primes().all(|p| !primes.contains(p)));
    }
}

#[test]
fn phi_sum_strictly_increasing() {
    let v: Vec<u64> = (1..=200).map(|m| phi_sum(m).unwrap()).collect();
    assert!(v.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn cyclotomic_product_over_divisors() {
    for n in 1..=30u32 {
        let prod = (1..=n).filter(|d| n % d == 0).fold(IntPolynomial::one(), |acc, d| &acc * &cyclotomic(d, Sign::Plus));
        let target = &IntPolynomial::monomial(BigInt::one(), n as usize) - &IntPolynomial::one();
        assert_eq!(prod, target, "n = {n}");
    }
}

#[test]
fn divisor_identity() {
    for l in 2..=26u32 {
        for tau in [Sign::Plus, Sign::Minus] {
            let t = BigInt::from(tau.value());
            for u in 2..=50i64 {
                let u = BigInt::from(u);
                let lhs = ((u.pow(l) - t.pow(l)) / (&u - &t)).magnitude().clone();
                let rhs: BigUint = (2..=l)
                    .filter(|e| l % e == 0)
                    .map(|e| eval(&cyclotomic(e, tau), &u).magnitude().clone())
                    .product();
                assert_eq!(lhs, rhs, "l = {l}, tau = {}, u = {u}", tau.symbol());
            }
        }
    }
}

#[test]
fn cyclotomic_sign_flip() {
    for i in (1..=25u32).step_by(2) {
        let a = cyclotomic(i, Sign::Minus);
        let b = cyclotomic(2 * i, Sign::Plus);
        assert!(a == b || a == -&b, "i = {i}");
    }
}

fn poly_strategy() -> impl Strategy<Value = IntPolynomial> {
    (prop::collection::vec(-9i64..=9, 1..=6), 1i64..=4).prop_map(|(mut c, lead)| {
        c.push(lead);
        IntPolynomial::from_i64(&c)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn integral_gcd_sound_and_minimal(f in poly_strategy(), g in poly_strategy(), points in prop::collection::vec(-40i64..=40, 20)) {
        let r = integral_gcd(&f, &g).unwrap();
        prop_assert!(r.check_witness(&f, &g));
        prop_assert!(r.certify_minimal(&f, &g));
        let c = BigInt::from(r.content.clone());
        for u in points {
            let (fu, gu) = (f.eval_i64(u), g.eval_i64(u));
            let d = fu.gcd(&gu);
            let bound = (&c * r.common.eval_i64(u)).abs();
            if bound.is_zero() {
                continue;
            }
            prop_assert!((&bound % &d).is_zero(), "u = {}: gcd {} does not divide {}", u, d, bound);
        }
    }
}

#[test]
fn primitive_primes_congruent_to_one() {
    for a in (-30i64..=30).filter(|a| a.abs() >= 2) {
        for i in 1..=18u32 {
            for r in primitive_prime_divisors(&PrimitiveSpec::new(a, i).unwrap()) {
                if r != big(2) {
                    assert!((&r % i).is_one() || i == 1, "r = {r}, a = {a}, i = {i}");
                }
            }
        }
    }
}

#[test]
fn gpd_quotient_shape() {
    for a in (-30i64..=30).filter(|a| a.abs() >= 2) {
        for i in 3..=18u32 {
            let k = greatest_primitive_value(&PrimitiveSpec::new(a, i).unwrap()).unwrap();
            let phi = eval(&cyclotomic(i, Sign::Plus), &BigInt::from(a)).magnitude().clone();
            assert!((&phi % &k).is_zero());
            let quot = (&phi / &k).to_u64().unwrap();
            let r = specrec::intarith::greatest_prime_factor(i as u64);
            assert!(quot == 1 || quot == r, "a = {a}, i = {i}, quotient {quot}");
        }
    }
}

fn lu_grid() -> Vec<GroupId> {
    let mut out = Vec::new();
    for m in 3..=12u32 {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            for s in [Sign::Plus, Sign::Minus] {
                out.push(GroupId::new(Family::LinearUnitary, s, m, q).unwrap());
            }
        }
    }
    out
}

#[test]
fn exponent_matches_generator_lcm() {
    for g in lu_grid() {
        assert_eq!(exponent(&g).unwrap(), spectrum_generators(&g).unwrap().lcm(), "{g}");
    }
}

#[test]
fn exponent_lower_bounds_on_grid() {
    for g in lu_grid() {
        let (num, den) = exponent_lower_bound(&g).unwrap();
        let e = exponent(&g).unwrap();
        assert!(num_traits::Pow::pow(&e, den as u32) > num_traits::Pow::pow(g.q(), num as u32), "{g}: exponent {e} vs q^({num}/{den})");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectrum_divisor_closed(gi in 0usize..140, k in 0usize..500, d in 1u64..50) {
        let grid = lu_grid();
        let g = &grid[gi % grid.len()];
        let s = spectrum_generators(g).unwrap();
        let spec: Vec<BigUint> = s.spectrum().into_iter().collect();
        let a = &spec[k % spec.len()];
        prop_assert!(spectrum_contains(&s, a));
        if (a % d).is_zero() {
            prop_assert!(spectrum_contains(&s, &(a / d)));
        }
    }
}

#[test]
fn magr_congruence() {
    for n in [5u32, 7, 11, 13, 17, 19, 23] {
        let n2 = BigInt::from(n * n);
        for q in odd_prime_powers(3, 1000).into_iter().filter(|q| (q + 1) % n as u64 == 0) {
            let s = magr_congruence_sum(n, &big(q));
            let expected = BigInt::from(-((n * (n - 1) / 2) as i64)).mod_floor(&n2);
            assert_eq!(s.mod_floor(&n2), expected, "n = {n}, q = {q}");
        }
    }
}

#[test]
fn identity_three_one() {
    for q in (3..=1000u64).step_by(2) {
        for n in (3..=23u32).step_by(2) {
            let qb = BigInt::from(q);
            let lhs = (qb.pow(n) + 1) / (&qb + 1) - 1;
            let rhs = &qb * (qb.pow(n - 1) - 1) / (&qb + 1);
            assert_eq!(lhs, rhs, "q = {q}, n = {n}");
        }
    }
}

#[test]
fn prime_graph_structure() {
    for g in lu_grid().into_iter().filter(|g| g.dim <= 8) {
        let pg = build_prime_graph(&spectrum_generators(&g).unwrap());
        let n = pg.vertices().len();
        for a in 0..n {
            assert!(!pg.adjacent(a, a), "{g}");
            for b in 0..n {
                assert_eq!(pg.adjacent(a, b), pg.adjacent(b, a), "{g}");
            }
        }
        let mut all: Vec<BigUint> = components(&pg).into_iter().flatten().collect();
        all.sort();
        let mut v = pg.vertices().to_vec();
        v.sort();
        assert_eq!(all, v, "{g}");
    }
}

#[test]
fn unitary_second_component_is_gpd() {
    for n in [5u32, 7, 11, 13] {
        for q in odd_prime_powers(3, 50) {
            let g = GroupId::unitary(n, q).unwrap();
            let s = spectrum_generators(&g).unwrap();
            let pg = build_prime_graph(&s);
            let k = greatest_primitive_value(&PrimitiveSpec::new(-BigInt::from(q), n).unwrap()).unwrap();
            assert_eq!(n2_unitary(n, &big(q)), k, "U_{n}({q})");
            let orders = component_orders(&s, &pg);
            assert!(orders.iter().any(|c| c.maximal == vec![k.clone()]), "U_{n}({q}): {k} not a component order");
        }
    }
}

#[test]
fn targets_have_large_cocliques() {
    let fx = Fixtures::embedded().unwrap();
    let mut groups: Vec<GroupId> = fx
        .table4
        .iter()
        .filter(|r| r.n <= 13)
        .map(|r| GroupId::new(Family::LinearUnitary, r.eps, r.n, r.q).unwrap())
        .collect();
    for n in TARGETS.into_iter().filter(|&n| n <= 13) {
        groups.push(GroupId::unitary(n, 5).unwrap());
    }
    for g in groups {
        let pg = build_prime_graph(&spectrum_generators(&g).unwrap());
        assert!(independence_number(&pg, None).unwrap() >= 4, "{g}");
    }
}

#[test]
fn sigma_sign_independent() {
    let fx = Fixtures::embedded().unwrap();
    for row in &fx.table3 {
        let base = sigma_set(row.n, row.m, row.form).unwrap().numbers();
        for tau in [Sign::Plus, Sign::Minus] {
            assert_eq!(sigma_set_in_u(row.n, row.m, row.form, tau).unwrap().numbers(), base, "{} {} {:?}", row.n, row.m, row.form);
        }
    }
}

#[test]
fn b_polynomial_identity() {
    for n in TARGETS {
        for m in [3u32, 5, 7, 11, 13] {
            for form in [BForm::TMinusM, BForm::NtMinusM, BForm::NtMinusOne] {
                if form == BForm::NtMinusM && n == m {
                    continue;
                }
                let (a, c) = form.gcds(n, m);
                let b = b_polynomial(n, m, form);
                for w in 2..=50i64 {
                    let wb = BigInt::from(w);
                    let t = (wb.pow(m) - 1) / (&wb - 1);
                    assert_eq!(b.eval_i64(w), BigInt::from(a) * t - BigInt::from(c), "n {n} m {m} w {w}");
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn solver_results_recheck(fi in 0usize..4, u in 2u64..5000, delta in -3i64..=3) {
        let formulas = ["k:5:-", "k:7:+", "l-r:7:-", "l-r:5:+"];
        let f = Formula::parse(formulas[fi]).unwrap();
        let Ok(v) = f.eval(&big(u)) else { return Ok(()) };
        let target = BigInt::from(v) + delta;
        prop_assume!(target > BigInt::one());
        let target = target.magnitude().clone();
        let res = solve_formula_eq(&f, &target, &Constraints::default()).unwrap();
        for s in &res.solutions {
            prop_assert_eq!(f.eval(s).unwrap(), target.clone());
            prop_assert!(is_prime_power_u64(s.to_u64().unwrap()).is_some());
        }
        if delta == 0 && is_prime_power_u64(u).is_some() {
            prop_assert!(res.solutions.contains(&big(u)));
        }
        for c in &res.certificates {
            prop_assert!(recheck_certificate(&f, &target, c).unwrap());
        }
    }
}
