//! Case 1: L = U_n(q) with n ∈ {7, 11, 13, 17, 19, 23} and q > 3.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::dims::{candidate_dimensions, Column};
use super::kequation::k_equation_roots;
use super::sigma::{b_polynomial, nvalue_sigma, sigma_set, BForm, NValueClass};
use super::solve::{solve_formula_eq, Constraints, Formula};
use super::{CaseConfig, Mode};
use crate::error::{domain, Result};
use crate::exec::Executor;
use crate::fixtures::Fixtures;
use crate::gkgraph::Table1Row;
use crate::intarith::{characteristic, factor_nat, is_prime, pow, prime_powers_in};
use crate::report::{CaseId, CaseReport, Status, Value};
use crate::specgen::magr_check;
use crate::Sign;

pub const TARGETS: [u32; 6] = [7, 11, 13, 17, 19, 23];

fn check_target(n: u32) -> Result<()> {
    if !TARGETS.contains(&n) {
        return domain(format!("Case 1 targets are {TARGETS:?}, got {n}"));
    }
    Ok(())
}

/// n_2(U_n(q)) = (q^n+1)/((n,q+1)(q+1)).
pub fn n2_unitary(n: u32, q: &BigUint) -> BigUint {
    let q1 = q + 1u32;
    let g = q1.gcd(&BigUint::from(n));
    (pow(q, n) + 1u32) / (q1 * g)
}

/// Subcase (i): a = n_2(L) − 1 on the grid of odd prime powers 5 ≤ q ≤ qmax.
pub fn magr_subcase(n: u32, cfg: &CaseConfig) -> CaseReport {
    let id = CaseId::new("case1-magr").with("n", n);
    let grid: Vec<u64> = prime_powers_in(5, cfg.qmax).into_iter().filter(|q| q % 2 == 1).collect();
    let results = cfg.executor.map(&grid, |&q| (q, magr_check(n, &BigUint::from(q))));
    let mut failures = Vec::new();
    for (q, r) in &results {
        match r {
            Ok(c) if c.passes() => {}
            Ok(c) => failures.push(format!(
                "q={q}: n-part {:?}, a∉ω {} , witness {}, a prime power {}",
                c.n_part_ok, c.membership_false, c.witness_ok, c.a_is_prime_power
            )),
            Err(e) => failures.push(format!("q={q}: {e}")),
        }
    }
    let status = if failures.is_empty() { Status::Pass } else { Status::Fail };
    CaseReport::new(id, status)
        .witness(format!("{} odd prime powers 5 ≤ q ≤ {}", grid.len(), cfg.qmax))
        .witnesses(failures)
}

/// Subcase (ii): n_2(L) against the n-values Σ of one class of S.
pub fn nvalue_subcase(n: u32, class: NValueClass, fx: &Fixtures, cfg: &CaseConfig) -> Result<CaseReport> {
    let id = CaseId::new("case1-nvalue").with("n", n).with("class", class.id());
    let sigma = nvalue_sigma(n, class, &fx.table2)?;
    let values = sigma.values();
    let Some(max) = values.last().cloned() else {
        return Ok(CaseReport::new(id, Status::Pass).witness("Σ is empty"));
    };
    // (q^n+1)/(n(q+1)) ≤ n_2(L) is increasing in q
    let lower = |q: u64| (pow(&BigUint::from(q), n) + 1u32) / (BigUint::from(q + 1) * n);
    let mut q0 = 4u64;
    while lower(q0) <= max {
        q0 += 1;
        if q0 > cfg.cap {
            return Err(crate::Error::ScanCap { cap: cfg.cap, needed: format!("threshold for n={n}") });
        }
    }
    let constraint =
        if class == NValueClass::LinearPlusOne { Constraints::default().with_divides_plus_one(n as u64) } else { Constraints::default() };
    let mut status = Status::Pass;
    let mut witnesses = vec![format!(
        "|Σ| = {} ({} pass the residue filter), max Σ = {}; n_2(L) > max Σ for all q ≥ {q0}",
        values.len(),
        sigma.admissible_values().len(),
        max
    )];
    let mut last_below = None;
    for q in prime_powers_in(4, q0) {
        let qb = BigUint::from(q);
        let v = n2_unitary(n, &qb);
        if v <= max {
            last_below = Some(q);
        }
        if constraint.violation(&qb).is_some() || values.binary_search(&v).is_err() {
            continue;
        }
        let pq = characteristic(&qb).unwrap();
        for e in sigma.entries_for(&v) {
            if !e.admissible {
                witnesses.push(format!("q={q}: n_2(L) = {v} = n_i({}), fails the residue filter", e.group));
            } else if characteristic(&e.u) == Some(pq.clone()) {
                witnesses.push(format!("q={q}: n_2(L) = {v} = n_i({}), same characteristic, excluded", e.group));
            } else {
                status = Status::Fail;
                witnesses.push(format!("q={q}: n_2(L) = {v} = n_i({}), cross-characteristic", e.group));
            }
        }
    }
    if let Some(q) = last_below {
        witnesses.push(format!("n_2(L) > max Σ for every prime power q > {q}"));
    }
    Ok(CaseReport::new(id, status).computed(Value::Set(values.iter().map(factor_nat).collect())).witnesses(witnesses))
}

fn q_constraints(n: u32, form: BForm) -> Constraints {
    let c = Constraints::default().at_least(4);
    match form {
        BForm::TMinusM => c.with_not_divides_plus_one(n as u64),
        _ => c.with_divides_plus_one(n as u64),
    }
}

fn divisors_of_sigma(values: &[BigUint]) -> Vec<BigUint> {
    let mut out = BTreeSet::new();
    for v in values {
        for d in factor_nat(v).divisors() {
            if !d.is_one() {
                out.insert(d);
            }
        }
    }
    out.into_iter().collect()
}

/// Subcase (iii), literal mode: no divisor of a Σ value equals n_2(L).
fn sigma_literal(n: u32, m: u32, form: BForm, values: &[BigUint]) -> Result<(Status, Vec<String>)> {
    let f = Formula::n2_linear(n, Sign::Minus);
    let cons = q_constraints(n, form);
    let divisors = divisors_of_sigma(values);
    let mut w = vec![format!("{} divisors checked against n_2(L)", divisors.len())];
    let mut status = Status::Pass;
    for d in &divisors {
        let r = solve_formula_eq(&f, d, &cons)?;
        for q in &r.solutions {
            status = Status::Fail;
            w.push(format!("n_2(U_{n}({q})) = {d} divides a Σ value (m={m}, b={form})"));
        }
    }
    Ok((status, w))
}

/// Subcase (iii), staged mode: k_{n−1}(−q) = d, then the master equation n_2(L) = k_m(τu).
fn sigma_staged(n: u32, m: u32, form: BForm, values: &[BigUint]) -> Result<(Status, Vec<String>)> {
    let k = Formula::Gpd { index: n - 1, sign: Sign::Minus };
    let cons = q_constraints(n, form);
    let divisors = divisors_of_sigma(values);
    let mut w = vec![format!("{} divisors checked against k_{}(-q)", divisors.len(), n - 1)];
    let mut status = Status::Pass;
    let (_, want_gcd) = form.gcds(n, m);
    let b = b_polynomial(n, m, form);
    for d in &divisors {
        let mut targets = vec![d.clone()];
        if n == 7 && m == 7 {
            targets.push(d * 7u32);
        }
        for t in targets {
            for q in solve_formula_eq(&k, &t, &cons)?.solutions {
                let n2 = n2_unitary(n, &q);
                let mut survivors = Vec::new();
                for tau in [Sign::Plus, Sign::Minus] {
                    let f = Formula::table1(Table1Row::LinearPrime, m, tau, 0);
                    for u in solve_formula_eq(&f, &n2, &Constraints::default())?.solutions {
                        let u_minus_tau = if tau == Sign::Plus { &u - 1u32 } else { &u + 1u32 };
                        let g = u_minus_tau.gcd(&BigUint::from(m));
                        let w_val = num_bigint::BigInt::from(u.clone()) * num_bigint::BigInt::from(tau.value());
                        let b_val = b.eval(&w_val).magnitude().clone();
                        if g == BigUint::from(want_gcd) && (b_val % &t).is_zero() {
                            survivors.push(format!("u={u}, tau={}", tau.symbol()));
                        }
                    }
                }
                if survivors.is_empty() {
                    w.push(format!("stage 1: k_{}(-{q}) = {t} divides Σ; master equation has no solution", n - 1));
                } else {
                    status = Status::Fail;
                    w.push(format!("q={q}: k = {t} survives the master equation with {}", survivors.join(", ")));
                }
            }
        }
    }
    Ok((status, w))
}

/// Subcase (iii) for one (m, b-form) pair in one mode.
pub fn sigma_subcase(n: u32, m: u32, form: BForm, mode: Mode) -> Result<CaseReport> {
    let id = CaseId::new("case1-sigma").with("n", n).with("m", m).with("b", form.id()).with("mode", mode.id());
    let s = sigma_set(n, m, form)?;
    let values = s.numbers();
    let (status, w) = match mode {
        Mode::Literal => sigma_literal(n, m, form, &values)?,
        Mode::Staged => sigma_staged(n, m, form, &values)?,
    };
    Ok(CaseReport::new(id, status)
        .computed(Value::Set(s.values.iter().map(|v| v.value.clone()).collect()))
        .witnesses(w))
}

/// Subcase (iv): the k-equation has no prime-power roots.
pub fn kequation_subcase(n: u32, m: u32, tau: Sign, cfg: &CaseConfig) -> CaseReport {
    let id = CaseId::new("case1-kequation").with("n", n).with("m", m).with("tau", tau.symbol().to_string());
    match k_equation_roots(n, m, tau, cfg.cap) {
        Ok(r) => {
            let c = &r.certificate;
            let status = if r.roots.is_empty() { Status::Pass } else { Status::Fail };
            CaseReport::new(id, status)
                .computed(Value::List(r.roots.iter().map(|q| q.to_string()).collect()))
                .witness(format!(
                    "{:?}-dominant, degree {} vs {}, T(q) > 0 for q > {}, {} prime powers scanned",
                    c.direction,
                    c.degree,
                    n - 1,
                    c.bound,
                    c.scanned
                ))
        }
        Err(e) => CaseReport::from_error(id, &e),
    }
}

/// Prime m from the linear/unitary column.
pub fn prime_dimensions(n: u32, fx: &Fixtures) -> Result<Vec<u32>> {
    Ok(candidate_dimensions(n, Column::LinearUnitary, &fx.table2)?
        .admitted
        .into_iter()
        .filter(|&m| m > 2 && is_prime(&BigUint::from(m)))
        .collect())
}

#[derive(Debug, Clone)]
enum Unit {
    Magr,
    NValue(NValueClass),
    Sigma(u32, BForm, Mode),
    KEq(u32, Sign),
}

/// All Case 1 subcases for target n.
pub fn verify_case1(n: u32, fx: &Fixtures, cfg: &CaseConfig) -> Result<Vec<CaseReport>> {
    check_target(n)?;
    let ms = prime_dimensions(n, fx)?;
    let mut units = vec![Unit::Magr, Unit::NValue(NValueClass::SymplecticOrthogonal), Unit::NValue(NValueClass::LinearPlusOne)];
    for &m in &ms {
        for form in BForm::for_pair(n, m) {
            for mode in cfg.mode.modes() {
                units.push(Unit::Sigma(m, form, mode));
            }
        }
        for tau in [Sign::Plus, Sign::Minus] {
            units.push(Unit::KEq(m, tau));
        }
    }
    // the grid inside the MAGr unit is itself parallel
    let inner = CaseConfig { executor: Executor::Sequential, ..cfg.clone() };
    let mut reports = cfg.executor.map(&units, |u| {
        let id_err = |family: &str| CaseId::new(family).with("n", n);
        match u {
            Unit::Magr => magr_subcase(n, cfg),
            Unit::NValue(c) => nvalue_subcase(n, *c, fx, &inner)
                .unwrap_or_else(|e| CaseReport::from_error(id_err("case1-nvalue").with("class", c.id()), &e)),
            Unit::Sigma(m, form, mode) => sigma_subcase(n, *m, *form, *mode).unwrap_or_else(|e| {
                CaseReport::from_error(
                    id_err("case1-sigma").with("m", *m).with("b", form.id()).with("mode", mode.id()),
                    &e,
                )
            }),
            Unit::KEq(m, tau) => kequation_subcase(n, *m, *tau, &inner),
        }
    });
    crate::report::sort_reports(&mut reports);
    Ok(reports)
}

/// Largest prime power q whose n_2(U_n(q)) does not exceed `bound`.
pub fn last_q_below(n: u32, bound: &BigUint) -> Option<u64> {
    let mut last = None;
    let mut q = 2u64;
    loop {
        let v = (pow(&BigUint::from(q), n) + 1u32) / (BigUint::from(q + 1) * n);
        if &v > bound {
            break;
        }
        if crate::intarith::is_prime_power_u64(q).is_some() && &n2_unitary(n, &BigUint::from(q)) <= bound {
            last = Some(q);
        }
        q += 1;
    }
    last.filter(|q| q.to_u64().is_some())
}
