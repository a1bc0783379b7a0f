//! Argument parsing and command dispatch. `run` returns the report and exit
//! code instead of printing, so tests can drive it in process.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use sigma_core::constructions::{
    branch_family, example_5_1, example_5_2, example_6_1, example_6_3, example_6_4, type3_block_fixture,
};
use sigma_core::markov::{markov_graph, to_dot, MarkovGraph};
use sigma_core::orderings::{
    baldwin_le, baldwin_tail, is_tail, lambda_set, sh_le, sh_tail, BValue, OrderError, PeriodSetExpr,
    Rho, ShValue, Term,
};
use sigma_core::periods::{
    orbit_type_3star, periods_for_rotation_report, periods_report, theorem_shape, PeriodError, PeriodReport,
};
use sigma_core::rotation::{cycle_vertices, cycles_reachable_from_reals};
use sigma_core::space::parse_q;
use sigma_core::{parse_map, rotation_interval, Lifting, TruncatedPeriodSet};

use crate::claims::{self, all_pass, ClaimError, Options, ORACLE_WINDOW};
use crate::suite;

#[derive(Parser, Debug)]
#[command(name = "sigma", version, about = "Periods, rotation intervals and Markov graphs of sigma-space liftings")]
struct Cli {
    /// Largest period examined.
    #[arg(long = "max", global = true, default_value_t = 20)]
    n_max: usize,
    /// Search nodes allowed per witness orbit before reporting Incomplete.
    #[arg(long, global = true, default_value_t = sigma_core::periods::DEFAULT_BUDGET)]
    budget: u64,
    /// Write the Markov graph in DOT format to this file.
    #[arg(long, global = true)]
    dot: Option<PathBuf>,
    /// Cross-check periods against the pullback oracle (slow).
    #[arg(long, global = true)]
    oracle: bool,
    /// Seed for random liftings and for the second coordinate set of `verify-example`.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Basic intervals and labelled edges of the Markov graph.
    Graph { file: PathBuf },
    /// Rotation interval with extremal cycles.
    Rot { file: PathBuf },
    /// Periods mod 1 up to --max.
    Periods { file: PathBuf },
    /// Periods of orbits with rotation number P/Q.
    PeriodsAt {
        #[arg(allow_hyphen_values = true)]
        rotation: String,
        file: PathBuf,
    },
    /// Witness orbits with their flags, star types and forced period sets.
    Classify { file: PathBuf },
    /// Checks the stated values of a worked example (5_1, 5_2, 6_1, 6_3, 6_4).
    VerifyExample { example: String },
    /// Sharkovsky and Baldwin orderings and period set expressions.
    Orders {
        #[command(subcommand)]
        op: OrdersCmd,
    },
    /// Runs acceptance criteria (all of 1..=13 when none are given).
    Acceptance { criteria: Vec<u8> },
    /// Prints a built-in map in the map file format.
    Emit {
        /// ex5_1_n3, ex5_1_n4, ex5_1_n5, ex5_2, ex6_1_n3, ex6_1_n4, ex6_3_k3,
        /// ex6_3_k4, ex6_4, type3_block, or branch_D_S (e.g. branch_1_5).
        name: String,
    },
}

#[derive(Subcommand, Debug)]
enum OrdersCmd {
    /// Whether A ≤ B in the Sharkovsky order.
    Sh { a: ShValue, b: ShValue },
    /// Initial segment of the Sharkovsky order from S, within --max.
    ShTail { s: ShValue },
    /// Whether K ≤_T M in the Baldwin order.
    Baldwin { t: usize, k: String, m: String },
    /// Initial segment of ≤_T from M, within --max.
    Tail { t: usize, m: String },
    /// Whether the comma separated set is a tail of ≤_T within --max.
    IsTail { t: usize, set: String },
    /// The set M(C, D) within --max.
    M {
        #[arg(allow_hyphen_values = true)]
        c: String,
        #[arg(allow_hyphen_values = true)]
        d: String,
    },
    /// Λ(RHO, Shs(S)) within --max.
    Lambda {
        #[arg(allow_hyphen_values = true)]
        rho: String,
        s: ShValue,
    },
    /// Evaluates a period set expression within --max.
    Expr {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INCOMPLETE: i32 = 3;

/// Report text plus exit code.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn invalid(msg: impl std::fmt::Display) -> Self {
        Outcome { stdout: String::new(), stderr: format!("error: {msg}\n"), code: EXIT_INVALID }
    }
}

/// Failure of a command: validation problems exit 2, exhausted searches 3.
enum Failure {
    Invalid(String),
    Incomplete(String),
}

impl From<PeriodError> for Failure {
    fn from(e: PeriodError) -> Self {
        match e {
            PeriodError::Incomplete { ref partial, .. } => {
                Failure::Incomplete(format!("{e}; periods found so far: {partial}"))
            }
            other => Failure::Invalid(other.to_string()),
        }
    }
}

impl From<OrderError> for Failure {
    fn from(e: OrderError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { stdout: String::new(), stderr: text, code: EXIT_INVALID }
            } else {
                Outcome { stdout: text, stderr: String::new(), code: EXIT_OK }
            };
        }
    };
    let mut out = String::new();
    match dispatch(&cli, &mut out) {
        Ok(code) => Outcome { stdout: out, stderr: String::new(), code },
        Err(Failure::Invalid(msg)) => Outcome { stdout: out, ..Outcome::invalid(msg) },
        Err(Failure::Incomplete(msg)) => Outcome { stdout: out, stderr: format!("incomplete: {msg}\n"), code: EXIT_INCOMPLETE },
    }
}

fn load(path: &Path) -> Result<Lifting, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
    parse_map(&text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn write_dot(cli: &Cli, g: &MarkovGraph) -> Result<(), Failure> {
    if let Some(path) = &cli.dot {
        std::fs::write(path, to_dot(g)).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn cycle_names(g: &MarkovGraph, cycle: &[usize]) -> String {
    let mut names: Vec<&str> = cycle_vertices(g, cycle).into_iter().map(|v| g.name(v)).collect();
    if let Some(first) = names.first().copied() {
        names.push(first);
    }
    names.join(" -> ")
}

fn set_line(name: &str, s: &TruncatedPeriodSet) -> String {
    format!("{name}[1..{}] = {s}", s.n_max)
}

/// Appends the oracle comparison; returns whether it agreed.
fn oracle_line(out: &mut String, engine: &TruncatedPeriodSet, oracle: BTreeSet<usize>) -> bool {
    let n = engine.n_max.min(ORACLE_WINDOW);
    let oracle = TruncatedPeriodSet::new(n, oracle);
    let agree = oracle == engine.restrict(n);
    let verdict = if agree { "agrees" } else { "MISMATCH" };
    let _ = writeln!(out, "{} {verdict}", set_line("oracle", &oracle));
    agree
}

fn dispatch(cli: &Cli, out: &mut String) -> Result<i32, Failure> {
    let n_max = cli.n_max;
    match &cli.cmd {
        Cmd::Graph { file } => {
            let f = load(file)?;
            let g = markov_graph(&f);
            write_dot(cli, &g)?;
            let _ = writeln!(out, "degree {}", f.degree());
            for iv in &g.intervals {
                let _ = writeln!(out, "vertex {} = [{}, {}]", iv.name, iv.lo_point(), iv.hi_point());
            }
            for e in &g.edges {
                let _ = writeln!(out, "edge {} -> {} disp {} sign {}", g.name(e.from), g.name(e.to), e.disp, e.signs);
            }
        }
        Cmd::Rot { file } => {
            let f = load(file)?;
            let g = markov_graph(&f);
            write_dot(cli, &g)?;
            let r = rotation_interval(&g).map_err(|e| Failure::Invalid(e.to_string()))?;
            let _ = writeln!(out, "{r}");
            if !cycles_reachable_from_reals(&g) {
                let _ = writeln!(out, "note: some cycles are unreachable from real intervals; this is the Markov rotation interval and may exceed Rot_R(F)");
            }
            let _ = writeln!(out, "min cycle: {}", cycle_names(&g, &r.lo_cycle));
            let _ = writeln!(out, "max cycle: {}", cycle_names(&g, &r.hi_cycle));
        }
        Cmd::Periods { file } => {
            let f = load(file)?;
            write_dot(cli, &markov_graph(&f))?;
            let rep = periods_report(&f, n_max, cli.budget)?;
            let _ = writeln!(out, "{}", set_line("periods", &rep.set));
            if cli.oracle {
                let n = n_max.min(ORACLE_WINDOW);
                if !oracle_line(out, &rep.set, sigma_oracle::periods_mod1(&f, n)) {
                    return Ok(EXIT_CHECK_FAILED);
                }
            }
        }
        Cmd::PeriodsAt { rotation, file } => {
            let (p, q) = parse_rotation(rotation)?;
            let f = load(file)?;
            write_dot(cli, &markov_graph(&f))?;
            let rep = periods_for_rotation_report(&f, p, q, n_max, cli.budget)?;
            let _ = writeln!(out, "{}", set_line(&format!("periods({p}/{q})"), &rep.set));
            if cli.oracle {
                let n = n_max.min(ORACLE_WINDOW);
                if !oracle_line(out, &rep.set, sigma_oracle::periods_with_rotation(&f, p, q, n)) {
                    return Ok(EXIT_CHECK_FAILED);
                }
            }
        }
        Cmd::Classify { file } => {
            let f = load(file)?;
            write_dot(cli, &markov_graph(&f))?;
            let rep = periods_report(&f, n_max, cli.budget)?;
            classify(&f, &rep, n_max, out);
        }
        Cmd::VerifyExample { example } => {
            let opts = Options { n_max, budget: cli.budget, seed: cli.seed, oracle: cli.oracle };
            let claims = match claims::verify_example(example, &opts) {
                Ok(c) => c,
                Err(ClaimError::Period(e)) => return Err(e.into()),
                Err(e) => return Err(Failure::Invalid(e.to_string())),
            };
            for c in &claims {
                let _ = writeln!(out, "{c}");
            }
            return Ok(if all_pass(&claims) { EXIT_OK } else { EXIT_CHECK_FAILED });
        }
        Cmd::Orders { op } => orders(op, n_max, out)?,
        Cmd::Acceptance { criteria } => {
            let ids: Vec<u8> = if criteria.is_empty() { (1..=13).collect() } else { criteria.clone() };
            let mut ok = true;
            for id in ids {
                let r = suite::run(id, cli.seed);
                ok &= r.pass;
                let _ = writeln!(out, "{}", r.line());
                for d in &r.details {
                    let _ = writeln!(out, "    {}", d.replace('\n', "\n    "));
                }
            }
            return Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED });
        }
        Cmd::Emit { name } => {
            let f = builtin(name)?;
            out.push_str(&f.to_map_text());
        }
    }
    Ok(EXIT_OK)
}

fn parse_rotation(s: &str) -> Result<(i64, i64), Failure> {
    let bad = || Failure::Invalid(format!("cannot parse rotation number `{s}`; expected P/Q"));
    let x = parse_q(s).ok_or_else(bad)?;
    let p = x.numer().try_into().map_err(|_| bad())?;
    let q = x.denom().try_into().map_err(|_| bad())?;
    Ok((p, q))
}

fn classify(f: &Lifting, rep: &PeriodReport, n_max: usize, out: &mut String) {
    let _ = writeln!(out, "{}", set_line("periods", &rep.set));
    let _ = writeln!(out, "shape {}", theorem_shape(&rep.set));
    for o in rep.witnesses.values() {
        let _ = write!(out, "witness {o}");
        if o.shift == 0 {
            if let Ok(types) = orbit_type_3star(f, o) {
                let v: Vec<String> = types.iter().map(|t| t.to_string()).collect();
                let _ = write!(out, " star-type {{{}}}", v.join(","));
            }
        }
        out.push('\n');
    }
    // Periods forced by orbits living in the branches.
    let mut forced: BTreeSet<usize> = BTreeSet::new();
    for o in rep.witnesses.values().filter(|o| o.lives_in_branches) {
        let tail = TruncatedPeriodSet::new(n_max, sh_tail(ShValue::Nat(o.period), n_max));
        let _ = writeln!(out, "forced by branch orbit of period {}: {tail}", o.period);
        forced.extend(tail.members);
    }
    if rep.witnesses.values().any(|o| o.large && o.lives_in_branches) {
        let _ = writeln!(out, "forced by large branch orbit: {}", TruncatedPeriodSet::full(n_max));
    }
    if !forced.is_empty() {
        let covered = forced.is_subset(&rep.set.members);
        let _ = writeln!(out, "forced periods present: {}", if covered { "yes" } else { "no" });
    }
}

fn parse_bvalue(s: &str) -> Result<BValue, Failure> {
    match s.trim() {
        "inf" => Ok(BValue::TInf),
        t => t.parse().map(BValue::Nat).map_err(|_| Failure::Invalid(format!("cannot parse `{s}`"))),
    }
}

fn parse_rho(s: &str) -> Result<Rho, Failure> {
    let bad = || Failure::Invalid(format!("cannot parse rotation number `{s}`"));
    match s.trim().strip_prefix("irr~") {
        Some(rest) => parse_q(rest).map(Rho::Irrational).ok_or_else(bad),
        None => parse_q(s.trim()).map(Rho::Rational).ok_or_else(bad),
    }
}

fn set_text(s: BTreeSet<usize>, n_max: usize) -> String {
    TruncatedPeriodSet::new(n_max, s).to_string()
}

fn orders(op: &OrdersCmd, n_max: usize, out: &mut String) -> Result<(), Failure> {
    let line = match op {
        OrdersCmd::Sh { a, b } => format!("{a} <=_Sh {b}: {}", sh_le(*a, *b)),
        OrdersCmd::ShTail { s } => format!("sh_tail({s})[1..{n_max}] = {}", set_text(sh_tail(*s, n_max), n_max)),
        OrdersCmd::Baldwin { t, k, m } => {
            let (kv, mv) = (parse_bvalue(k)?, parse_bvalue(m)?);
            format!("{kv} <=_{t} {mv}: {}", baldwin_le(*t, kv, mv)?)
        }
        OrdersCmd::Tail { t, m } => {
            let mv = parse_bvalue(m)?;
            format!("tail_{t}({mv})[1..{n_max}] = {}", set_text(baldwin_tail(*t, mv, n_max)?, n_max))
        }
        OrdersCmd::IsTail { t, set } => {
            let members = set
                .split(',')
                .map(|x| x.trim().parse::<usize>().map_err(|_| Failure::Invalid(format!("cannot parse `{x}`"))))
                .collect::<Result<BTreeSet<usize>, _>>()?;
            format!("is tail of <=_{t}: {}", is_tail(*t, &members, n_max)?)
        }
        OrdersCmd::M { c, d } => {
            let (c, d) = (parse_rho(c)?, parse_rho(d)?);
            let set = PeriodSetExpr { terms: vec![Term::MSet(c.clone(), d.clone())] }.eval(n_max)?;
            format!("M({c},{d})[1..{n_max}] = {}", set_text(set, n_max))
        }
        OrdersCmd::Lambda { rho, s } => {
            let rho = parse_rho(rho)?;
            format!("L({rho}; sh({s}))[1..{n_max}] = {}", set_text(lambda_set(&rho, &sh_tail(*s, n_max), n_max), n_max))
        }
        OrdersCmd::Expr { expr } => {
            let e: PeriodSetExpr = expr.parse()?;
            format!("{e} [1..{n_max}] = {}", set_text(e.eval(n_max)?, n_max))
        }
    };
    let _ = writeln!(out, "{line}");
    Ok(())
}

/// Built-in maps by name, default coordinates.
fn builtin(name: &str) -> Result<Lifting, Failure> {
    let invalid = |e: sigma_core::constructions::BuildError| Failure::Invalid(e.to_string());
    let f = match name {
        "ex5_1_n3" => example_5_1(3, None),
        "ex5_1_n4" => example_5_1(4, None),
        "ex5_1_n5" => example_5_1(5, None),
        "ex5_2" => example_5_2(None),
        "ex6_1_n3" => example_6_1(3, None),
        "ex6_1_n4" => example_6_1(4, None),
        "ex6_3_k3" => example_6_3(3, None, None),
        "ex6_3_k4" => example_6_3(4, None, None),
        "ex6_4" => Ok(example_6_4()),
        "type3_block" => Ok(type3_block_fixture().0),
        other => {
            let parsed = other.strip_prefix("branch_").and_then(|rest| {
                let (d, s) = rest.split_once('_')?;
                Some((d.parse::<i64>().ok()?, s.parse::<ShValue>().ok()?))
            });
            match parsed {
                Some((d, s)) => branch_family(d, s),
                None => return Err(Failure::Invalid(format!("unknown map `{other}`"))),
            }
        }
    };
    f.map_err(invalid)
}
