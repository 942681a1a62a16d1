//! Exhaustive case verification: dimension bounds, Σ-sets, equation solving
//! with completeness certificates, and the two main cases.

mod case1;
mod case2;
mod dims;
mod kequation;
mod sigma;
mod solve;
mod tables;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use case1::{
    kequation_subcase, last_q_below, magr_subcase, n2_unitary, nvalue_subcase, prime_dimensions, sigma_subcase,
    verify_case1, TARGETS,
};
pub use case2::{case2_max, find_hits, linear_cut, row_cuts, row_lower_bound, verify_case2, verify_case2_all, Hit, RowCut, CASE2_ROWS};
pub use dims::{candidate_dimensions, Column, DimensionSet};
pub use kequation::{k_equation_roots, k_lhs, k_rhs, recheck_separation, separation_polynomial, Dominance, KRoots, SeparationCertificate};
pub use sigma::{
    b_polynomial, nvalue_sigma, sigma_set, sigma_set_in_u, t_polynomial, BForm, ETrace, NValueClass, NValueEntry, NValueSigma,
    SigmaSet, SigmaValue,
};
pub use solve::{recheck_certificate, solve_formula_eq, Constraints, Formula, MonotoneCertificate, Parity, SolveResult};
pub use tables::{literal_hits, verify_ks, verify_table1_graphs, verify_table2, verify_table3, verify_table4};

use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::fixtures::Fixtures;
use crate::polyring::{integral_gcd, IntPolynomial};
use crate::report::{sort_reports, CaseId, CaseReport, Status};

/// How Σ divisors are matched against L in Case 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Each divisor against n_2(L) directly.
    Literal,
    /// Divisor against k_{n−1}(−q), then the master equation.
    Staged,
}

impl Mode {
    pub fn id(self) -> &'static str {
        match self {
            Mode::Literal => "literal",
            Mode::Staged => "staged",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeSelection {
    Literal,
    Staged,
    Both,
}

impl ModeSelection {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "literal" => Ok(ModeSelection::Literal),
            "staged" => Ok(ModeSelection::Staged),
            "both" => Ok(ModeSelection::Both),
            _ => Err(Error::Unknown { kind: "mode", name: s.into() }),
        }
    }

    pub fn id(self) -> &'static str {
        match self {
            ModeSelection::Literal => "literal",
            ModeSelection::Staged => "staged",
            ModeSelection::Both => "both",
        }
    }

    pub fn modes(self) -> Vec<Mode> {
        match self {
            ModeSelection::Literal => vec![Mode::Literal],
            ModeSelection::Staged => vec![Mode::Staged],
            ModeSelection::Both => vec![Mode::Literal, Mode::Staged],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseConfig {
    /// Upper end of the MAGr grid.
    pub qmax: u64,
    /// Largest scan an exhaustive search may perform.
    pub cap: u64,
    pub mode: ModeSelection,
    /// Seed of the randomized integral-gcd audit.
    pub seed: u64,
    #[serde(skip)]
    pub executor: Executor,
}

impl Default for CaseConfig {
    fn default() -> Self {
        CaseConfig { qmax: 2000, cap: 10_000_000, mode: ModeSelection::Both, seed: 0, executor: Executor::Parallel }
    }
}

fn random_poly(rng: &mut ChaCha8Rng) -> IntPolynomial {
    let deg = rng.gen_range(1..=6);
    let mut c: Vec<BigInt> = (0..deg).map(|_| BigInt::from(rng.gen_range(-9i64..=9))).collect();
    c.push(BigInt::from(if rng.gen_bool(0.5) { 1 } else { rng.gen_range(2i64..=4) }));
    IntPolynomial::new(c)
}

/// Seeded audit of integral gcds: witness, minimality, and the gcdex bound.
pub fn gcd_audit(seed: u64, pairs: usize) -> CaseReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    let mut checked = 0;
    for _ in 0..pairs {
        let f = random_poly(&mut rng);
        let g = random_poly(&mut rng);
        let Ok(r) = integral_gcd(&f, &g) else { continue };
        checked += 1;
        let ok = r.check_witness(&f, &g)
            && r.certify_minimal(&f, &g)
            && (r.gcdex_bound.clone() % &r.content) == num_bigint::BigUint::from(0u32);
        if !ok {
            bad.push(format!("f = {f}, g = {g}, content {}", r.content));
        }
    }
    let status = if bad.is_empty() { Status::Pass } else { Status::Fail };
    CaseReport::new(CaseId::new("gcd-audit").with("seed", seed), status)
        .witness(format!("{checked} random pairs"))
        .witnesses(bad)
}

/// Every check: tables, both cases and the gcd audit.
pub fn verify_all(fx: &Fixtures, cfg: &CaseConfig) -> Result<Vec<CaseReport>> {
    let mut out = verify_ks(fx);
    out.extend(verify_table1_graphs(7, 16, cfg.executor));
    out.extend(verify_table2(fx));
    out.extend(verify_table3(fx, cfg.executor));
    out.extend(verify_table4(fx));
    for n in fx.table2.targets() {
        out.extend(verify_case1(n, fx, cfg)?);
    }
    out.extend(verify_case2_all(fx, cfg.executor)?);
    out.push(gcd_audit(cfg.seed, 64));
    sort_reports(&mut out);
    Ok(out)
}
