use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use specrec::caselab::{
    self, candidate_dimensions, nvalue_sigma, sigma_set, sigma_set_in_u, solve_formula_eq, verify_case1, verify_case2,
    BForm, CaseConfig, Column, Constraints, Formula, ModeSelection, NValueClass,
};
use specrec::exec::{with_jobs, Executor};
use specrec::fixtures::Fixtures;
use specrec::gkgraph::{build_prime_graph, component_orders, components, independence_number};
use specrec::intarith::{factor_nat, FactoredNat};
use specrec::primpart::{greatest_primitive_value, PrimitiveSpec};
use specrec::report::{overall, CaseReport, Status};
use specrec::specgen::{exponent, exponent_branch, spectrum_generators, Family, GroupId};
use specrec::{Error, Sign};

const RECORD_SCHEMA: u32 = 1;
const MIN_QMAX: u64 = 2000;
const MIN_CAP: u64 = 10_000_000;
const SPECTRUM_PRINT_LIMIT: usize = 400;

#[derive(Parser)]
#[command(name = "specrec", version, about = "Spectra, prime graphs and case verification for finite simple groups")]
struct Cli {
    #[command(flatten)]
    run: RunArgs,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    /// Directory holding table1.toml … table_ks.toml; the built-in tables otherwise.
    #[arg(long, global = true, env = "SPECREC_FIXTURES")]
    fixtures: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "human", env = "SPECREC_FORMAT")]
    format: Format,
    /// Worker threads; 0 uses every core, 1 runs sequentially.
    #[arg(long, global = true, default_value_t = 0, env = "SPECREC_JOBS")]
    jobs: usize,
    /// Upper end of the q-grid.
    #[arg(long, global = true, default_value_t = MIN_QMAX, env = "SPECREC_QMAX")]
    qmax: u64,
    /// Largest exhaustive scan before a case is declared inconclusive.
    #[arg(long, global = true, default_value_t = MIN_CAP, env = "SPECREC_CAP")]
    cap: u64,
    /// Divisor-check mode for the Σ subcases.
    #[arg(long, global = true, value_enum, default_value = "both", env = "SPECREC_MODE")]
    mode: ModeArg,
    /// Seed of the randomized integral-gcd audit.
    #[arg(long, global = true, default_value_t = 0, env = "SPECREC_SEED")]
    seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Records,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Literal,
    Staged,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Element orders of a group.
    Spectrum(GroupArgs),
    /// Exponent of a group.
    Exponent(GroupArgs),
    /// Prime graph components, n-values and independence number.
    Graph {
        #[command(flatten)]
        group: GroupArgs,
        /// Vertex for the anchored independence number.
        #[arg(long)]
        anchor: Option<BigUint>,
    },
    /// Greatest primitive divisor k_index(base).
    Kgpd {
        #[arg(allow_hyphen_values = true)]
        base: BigInt,
        index: u32,
    },
    /// Σ-set for (n, m, b-form).
    Sigma {
        n: u32,
        m: u32,
        bform: String,
        /// Evaluate in u with this sign instead of w.
        #[arg(long, allow_hyphen_values = true)]
        tau: Option<String>,
    },
    /// n-values of the groups admitted for target n.
    Nvalues {
        n: u32,
        /// so, lu or all.
        #[arg(long, default_value = "all")]
        class: String,
    },
    /// Dimension bounds for target n in one column.
    Bounds { n: u32, family: String },
    /// Prime-power solutions of formula(u) = target.
    Solve {
        /// k:<i>:<sign> for k_i(sign·u), or <row>:<dim>:<sign>[:<component>] for a table1 fixture row.
        formula: String,
        target: BigUint,
        /// Only odd u.
        #[arg(long)]
        odd: bool,
        /// Only u at least this value.
        #[arg(long)]
        min: Option<u64>,
        /// Only u with d | u + 1.
        #[arg(long)]
        divides_plus_one: Option<u64>,
        /// Only u with d ∤ u + 1.
        #[arg(long)]
        not_divides_plus_one: Option<u64>,
    },
    /// Run verification cases.
    Verify {
        /// table1, table2, table3, table4, case1, case2 or all.
        what: String,
        /// Target n for case1, row key such as 7-3 for case2.
        arg: Option<String>,
    },
}

#[derive(Args, Debug, Clone)]
struct GroupArgs {
    /// lu, sp, o-odd, o+ or o-.
    family: String,
    /// + or - (linear or unitary for lu).
    #[arg(allow_hyphen_values = true)]
    sign: String,
    dim: u32,
    q: u64,
}

impl GroupArgs {
    fn group(&self) -> Result<GroupId, Error> {
        GroupId::new(Family::parse(&self.family)?, parse_sign(&self.sign)?, self.dim, self.q)
    }
}

fn parse_sign(s: &str) -> Result<Sign, Error> {
    match s {
        "+" | "plus" | "+1" | "1" => Ok(Sign::Plus),
        "-" | "minus" | "-1" => Ok(Sign::Minus),
        _ => Err(Error::Unknown { kind: "sign", name: s.into() }),
    }
}

/// Everything that determines the output, minus thread count and rendering.
#[derive(Serialize)]
struct HashedConfig<'a> {
    qmax: u64,
    cap: u64,
    mode: &'a str,
    seed: u64,
    fixtures: String,
}

struct Ctx {
    run: RunArgs,
    fixtures: Fixtures,
    config_hash: String,
}

impl Ctx {
    fn case_config(&self) -> CaseConfig {
        CaseConfig {
            qmax: self.run.qmax,
            cap: self.run.cap,
            mode: self.mode(),
            seed: self.run.seed,
            executor: if self.run.jobs == 1 { Executor::Sequential } else { Executor::Parallel },
        }
    }

    fn mode(&self) -> ModeSelection {
        match self.run.mode {
            ModeArg::Literal => ModeSelection::Literal,
            ModeArg::Staged => ModeSelection::Staged,
            ModeArg::Both => ModeSelection::Both,
        }
    }

    fn header(&self, command: &str) -> String {
        let cfg = self.case_config();
        json!({
            "record": "header",
            "tool": "specrec",
            "version": env!("CARGO_PKG_VERSION"),
            "schema": RECORD_SCHEMA,
            "command": command,
            "config_hash": self.config_hash,
            "config": cfg,
        })
        .to_string()
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn fmt_factored(f: &FactoredNat) -> String {
    if f.is_one() || f.is_prime() {
        f.value().to_string()
    } else {
        format!("{} = {}", f.value(), f.factor_string())
    }
}

fn set_string<T: ToString>(v: impl IntoIterator<Item = T>) -> String {
    format!("{{{}}}", v.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

/// Output of a non-verify command: human lines and one structured payload.
struct Output {
    lines: Vec<String>,
    payload: serde_json::Value,
}

fn emit(ctx: &Ctx, command: &str, out: Output) {
    match ctx.run.format {
        Format::Human => {
            for l in out.lines {
                println!("{l}");
            }
        }
        Format::Records => {
            println!("{}", ctx.header(command));
            println!("{}", json!({ "record": "result", "data": out.payload }));
        }
    }
}

fn cmd_spectrum(g: &GroupArgs) -> Result<Output, Error> {
    let id = g.group()?;
    let s = spectrum_generators(&id)?;
    let maximal = s.maximal();
    let mut lines = vec![format!("{id}"), format!("maximal orders: {}", set_string(&maximal))];
    let full = (maximal.iter().map(|m| factor_nat(m).divisors().len()).sum::<usize>() <= SPECTRUM_PRINT_LIMIT)
        .then(|| s.spectrum().into_iter().collect::<Vec<_>>());
    if let Some(f) = &full {
        lines.push(format!("spectrum: {}", set_string(f)));
    }
    Ok(Output {
        lines,
        payload: json!({
            "group": id.to_string(),
            "maximal": maximal.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "spectrum": full.map(|f| f.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
        }),
    })
}

fn cmd_exponent(g: &GroupArgs) -> Result<Output, Error> {
    let id = g.group()?;
    let e = exponent(&id)?;
    let branch = exponent_branch(&id)?;
    let f = factor_nat(&e);
    Ok(Output {
        lines: vec![format!("{id}"), format!("exponent: {}", fmt_factored(&f)), format!("formula: {branch:?}")],
        payload: json!({ "group": id.to_string(), "exponent": f, "branch": format!("{branch:?}") }),
    })
}

fn cmd_graph(g: &GroupArgs, anchor: Option<&BigUint>) -> Result<Output, Error> {
    let id = g.group()?;
    let s = spectrum_generators(&id)?;
    let graph = build_prime_graph(&s);
    let comps = components(&graph);
    let orders = component_orders(&s, &graph);
    let t = independence_number(&graph, None)?;
    let anchored = anchor.map(|a| independence_number(&graph, Some(a))).transpose()?;
    let mut lines = vec![format!("{id}"), format!("components: {}", comps.iter().map(set_string).collect::<Vec<_>>().join(" "))];
    for (i, c) in orders.iter().enumerate() {
        lines.push(format!("n_{} = {}", i + 2, c.maximal.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")));
    }
    lines.push(format!("independence number: {t}"));
    if let (Some(a), Some(v)) = (anchor, anchored) {
        lines.push(format!("independence number at {a}: {v}"));
    }
    Ok(Output {
        lines,
        payload: json!({
            "group": id.to_string(),
            "components": comps.iter().map(|c| c.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "n_values": orders,
            "independence_number": t,
            "anchored": anchored,
        }),
    })
}

fn cmd_kgpd(base: &BigInt, index: u32) -> Result<Output, Error> {
    let v = greatest_primitive_value(&PrimitiveSpec::new(base.clone(), index)?)?;
    let f = factor_nat(&v);
    Ok(Output { lines: vec![fmt_factored(&f)], payload: json!({ "base": base.to_string(), "index": index, "value": f }) })
}

fn cmd_sigma(n: u32, m: u32, bform: &str, tau: Option<&str>) -> Result<Output, Error> {
    let form = BForm::parse(bform)?;
    let s = match tau {
        Some(t) => sigma_set_in_u(n, m, form, parse_sign(t)?)?,
        None => sigma_set(n, m, form)?,
    };
    let mut lines = vec![set_string(s.numbers())];
    for v in &s.values {
        lines.push(format!("  {} from {:?}", fmt_factored(&v.value), v.tuple));
    }
    for t in &s.trace {
        lines.push(format!("  e={}: c={}, a={}", t.e, t.c, t.a));
    }
    Ok(Output { lines, payload: serde_json::to_value(&s).unwrap_or_default() })
}

fn cmd_nvalues(ctx: &Ctx, n: u32, class: &str) -> Result<Output, Error> {
    let classes = match class {
        "all" => vec![NValueClass::SymplecticOrthogonal, NValueClass::LinearPlusOne],
        c => vec![NValueClass::parse(c)?],
    };
    let mut lines = Vec::new();
    let mut payload = Vec::new();
    for c in classes {
        let s = nvalue_sigma(n, c, &ctx.fixtures.table2)?;
        lines.push(format!("{}: {}", c.id(), set_string(s.values())));
        for e in &s.entries {
            let mark = if e.admissible { "" } else { "  (fails residue filter)" };
            lines.push(format!("  {} {}{mark}", e.group, fmt_factored(&e.value)));
        }
        payload.push(s);
    }
    Ok(Output { lines, payload: serde_json::to_value(&payload).unwrap_or_default() })
}

fn cmd_bounds(ctx: &Ctx, n: u32, family: &str) -> Result<Output, Error> {
    let d = candidate_dimensions(n, Column::parse(family)?, &ctx.fixtures.table2)?;
    let mut lines = vec![
        format!("{} n={n}: (F(n)+2)/(n-2) = {}/{}", d.column, d.ratio.0, d.ratio.1),
        format!("range: {}", set_string(&d.range)),
        format!("admitted: {}", set_string(&d.admitted)),
    ];
    lines.extend(d.audit());
    Ok(Output { lines, payload: serde_json::to_value(&d).unwrap_or_default() })
}

fn cmd_solve(formula: &str, target: &BigUint, cons: Constraints) -> Result<Output, Error> {
    let f = Formula::parse(formula)?;
    let r = solve_formula_eq(&f, target, &cons)?;
    let mut lines = vec![format!("{f} = {target}: {}", set_string(&r.solutions))];
    for (u, why) in &r.rejected {
        lines.push(format!("  rejected u={u}: {why}"));
    }
    for c in &r.certificates {
        lines.push(format!("  g={}: increasing past {}, exceeds from {}", c.denominator, c.bound, c.exceeds_from));
    }
    Ok(Output { lines, payload: serde_json::to_value(&r).unwrap_or_default() })
}

fn run_verify(ctx: &Ctx, what: &str, arg: Option<&str>) -> Result<Vec<CaseReport>, Error> {
    let cfg = ctx.case_config();
    let fx = &ctx.fixtures;
    let need = |name: &str| {
        arg.ok_or_else(|| Error::Domain(format!("verify {what} needs {name}")))
    };
    let mut reps = match what {
        "table1" => {
            let mut r = caselab::verify_ks(fx);
            r.extend(caselab::verify_table1_graphs(13, 50, cfg.executor));
            r
        }
        "table2" => caselab::verify_table2(fx),
        "table3" => caselab::verify_table3(fx, cfg.executor),
        "table4" => caselab::verify_table4(fx),
        "case1" => {
            let n: u32 = need("a target n")?.parse().map_err(|_| Error::Domain("n must be an integer".into()))?;
            verify_case1(n, fx, &cfg)?
        }
        "case2" => {
            let key = need("a row key such as 7-3")?;
            let max = caselab::case2_max(fx)?;
            vec![verify_case2(key, fx, &caselab::row_cuts(&max), cfg.executor)?]
        }
        "all" => caselab::verify_all(fx, &cfg)?,
        _ => return Err(Error::Unknown { kind: "verify target", name: what.into() }),
    };
    specrec::report::sort_reports(&mut reps);
    Ok(reps)
}

fn report_exit(reps: &[CaseReport]) -> u8 {
    match overall(reps) {
        Status::Fail => 1,
        _ if reps.iter().any(|r| r.inconclusive) => 3,
        _ => 0,
    }
}

fn print_reports(ctx: &Ctx, command: &str, reps: &[CaseReport]) {
    let count = |s: Status| reps.iter().filter(|r| r.status == s).count();
    match ctx.run.format {
        Format::Human => {
            for r in reps {
                println!("{}", r.human_line());
            }
            println!(
                "{} cases: {} PASS, {} WARN, {} FAIL",
                reps.len(),
                count(Status::Pass),
                count(Status::Warn),
                count(Status::Fail)
            );
        }
        Format::Records => {
            println!("{}", ctx.header(command));
            for r in reps {
                let mut v = serde_json::to_value(r).unwrap_or_default();
                if let Some(o) = v.as_object_mut() {
                    o.insert("record".into(), json!("case"));
                }
                println!("{v}");
            }
            println!(
                "{}",
                json!({
                    "record": "summary",
                    "status": overall(reps),
                    "cases": reps.len(),
                    "pass": count(Status::Pass),
                    "warn": count(Status::Warn),
                    "fail": count(Status::Fail),
                    "inconclusive": reps.iter().filter(|r| r.inconclusive).count(),
                })
            );
        }
    }
}

fn error_exit(e: &Error) -> u8 {
    match e {
        Error::ScanCap { .. } | Error::Inconclusive(_) => 3,
        _ => 2,
    }
}

fn command_name(cmd: &Command) -> String {
    match cmd {
        Command::Spectrum(g) => format!("spectrum {} {} {} {}", g.family, g.sign, g.dim, g.q),
        Command::Exponent(g) => format!("exponent {} {} {} {}", g.family, g.sign, g.dim, g.q),
        Command::Graph { group: g, .. } => format!("graph {} {} {} {}", g.family, g.sign, g.dim, g.q),
        Command::Kgpd { base, index } => format!("kgpd {base} {index}"),
        Command::Sigma { n, m, bform, .. } => format!("sigma {n} {m} {bform}"),
        Command::Nvalues { n, .. } => format!("nvalues {n}"),
        Command::Bounds { n, family } => format!("bounds {n} {family}"),
        Command::Solve { formula, target, .. } => format!("solve {formula} {target}"),
        Command::Verify { what, arg } => format!("verify {what}{}", arg.as_ref().map(|a| format!(" {a}")).unwrap_or_default()),
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    let fixtures = match &cli.run.fixtures {
        Some(dir) => Fixtures::load_dir(dir)?,
        None => Fixtures::embedded()?,
    };
    if cli.run.qmax < MIN_QMAX {
        eprintln!("warning: --qmax {} is below the required {MIN_QMAX}", cli.run.qmax);
    }
    if cli.run.cap < MIN_CAP {
        eprintln!("warning: --cap {} is below the required {MIN_CAP}", cli.run.cap);
    }
    let fixture_json = serde_json::to_string(&fixtures).unwrap_or_default();
    let mode = match cli.run.mode {
        ModeArg::Literal => "literal",
        ModeArg::Staged => "staged",
        ModeArg::Both => "both",
    };
    let hashed = HashedConfig {
        qmax: cli.run.qmax,
        cap: cli.run.cap,
        mode,
        seed: cli.run.seed,
        fixtures: sha256_hex(fixture_json.as_bytes()),
    };
    let config_hash = sha256_hex(serde_json::to_string(&hashed).unwrap_or_default().as_bytes());
    let ctx = Ctx { run: cli.run.clone(), fixtures, config_hash };
    let name = command_name(&cli.cmd);
    let out = match &cli.cmd {
        Command::Spectrum(g) => cmd_spectrum(g)?,
        Command::Exponent(g) => cmd_exponent(g)?,
        Command::Graph { group, anchor } => cmd_graph(group, anchor.as_ref())?,
        Command::Kgpd { base, index } => cmd_kgpd(base, *index)?,
        Command::Sigma { n, m, bform, tau } => cmd_sigma(*n, *m, bform, tau.as_deref())?,
        Command::Nvalues { n, class } => cmd_nvalues(&ctx, *n, class)?,
        Command::Bounds { n, family } => cmd_bounds(&ctx, *n, family)?,
        Command::Solve { formula, target, odd, min, divides_plus_one, not_divides_plus_one } => {
            let mut c = if *odd { Constraints::odd() } else { Constraints::default() };
            if let Some(m) = min {
                c = c.at_least(*m);
            }
            if let Some(d) = divides_plus_one {
                c = c.with_divides_plus_one(*d);
            }
            if let Some(d) = not_divides_plus_one {
                c = c.with_not_divides_plus_one(*d);
            }
            cmd_solve(formula, target, c)?
        }
        Command::Verify { what, arg } => {
            let reps = with_jobs(ctx.run.jobs, || run_verify(&ctx, what, arg.as_deref()))?;
            print_reports(&ctx, &name, &reps);
            return Ok(report_exit(&reps));
        }
    };
    emit(&ctx, &name, out);
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_exit(&e))
        }
    }
}
