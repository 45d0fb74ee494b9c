//! The `bsp` command line.

pub mod cache;

use std::ffi::OsString;
use std::io::Write;

use bsp_core::coproduct::{coproduct_coefficients, CoproductTable};
use bsp_core::families::{build, FamilyRequest, Theory};
use bsp_core::oracle::{self, Suite};
use bsp_core::positivity::{certify_table, PositivityCertificate};
use bsp_core::{GradedPoly, Partition, Permutation};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cache::Cache;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Domain(#[from] bsp_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "bsp", version, about = "Back-stable Schubert and Grothendieck polynomials")]
struct Cli {
    /// Bypass the on-disk cache.
    #[arg(long, global = true)]
    no_cache: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Back-stable Schubert polynomial.
    Schubert(PolyArgs),
    /// Back-stable Grothendieck polynomial.
    Groth(PolyArgs),
    /// Coproduct coefficients.
    Coprod(CoprodArgs),
    /// Positivity certificates for every coproduct coefficient.
    Certify(CoprodArgs),
    /// Property suites.
    Oracle(OracleArgs),
    /// Inspect or clear the cache.
    Cache {
        #[arg(value_enum, default_value_t = CacheAction::Stats)]
        action: CacheAction,
    },
}

#[derive(Args, Debug)]
struct PolyArgs {
    /// Permutation in one-line notation, e.g. "[1,0]"; repeatable.
    #[arg(short = 'w', required = true)]
    w: Vec<String>,
    #[arg(long, default_value_t = 6)]
    trunc: u32,
    #[arg(long)]
    window: Option<i64>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct CoprodArgs {
    #[arg(short = 'w', required = true)]
    w: Vec<String>,
    #[arg(long, value_enum, ignore_case = true, default_value_t = TheoryArg::H)]
    theory: TheoryArg,
    #[arg(long, default_value_t = 6)]
    trunc: u32,
    #[arg(long)]
    window: Option<i64>,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    certify: bool,
}

#[derive(Args, Debug)]
struct OracleArgs {
    /// Suite to run; all suites when omitted.
    #[arg(long, value_enum)]
    suite: Option<SuiteArg>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TheoryArg {
    H,
    K,
}

impl From<TheoryArg> for Theory {
    fn from(t: TheoryArg) -> Theory {
        match t {
            TheoryArg::H => Theory::H,
            TheoryArg::K => Theory::K,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    Operators,
    Windows,
    Examples,
    Routes,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Operators => Suite::Operators,
            SuiteArg::Windows => Suite::Windows,
            SuiteArg::Examples => Suite::Examples,
            SuiteArg::Routes => Suite::Routes,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CacheAction {
    Path,
    Stats,
    Clear,
}

/// Runs `bsp` with `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let cache = (!cli.no_cache).then(Cache::from_env);
    match execute(cli.command, cache.as_ref(), out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn parse_perms(ws: &[String]) -> CliResult<Vec<Permutation>> {
    ws.iter().map(|w| w.parse::<Permutation>().map_err(CliError::from)).collect()
}

fn cached<T>(cache: Option<&Cache>, key: &str, f: impl FnOnce() -> bsp_core::Result<T>) -> bsp_core::Result<T>
where
    T: serde::Serialize + serde::de::DeserializeOwned,
{
    match cache {
        Some(c) => c.get_or_compute(key, f),
        None => f(),
    }
}

fn show_perm(v: &Permutation) -> String {
    if v.is_identity() {
        "e".into()
    } else {
        v.to_string()
    }
}

fn execute(command: Command, cache: Option<&Cache>, out: &mut dyn Write) -> CliResult<i32> {
    match command {
        Command::Schubert(args) => polynomials(Theory::H, args, cache, out),
        Command::Groth(args) => polynomials(Theory::K, args, cache, out),
        Command::Coprod(args) => coprod(args, false, cache, out),
        Command::Certify(args) => coprod(args, true, cache, out),
        Command::Oracle(args) => run_oracle(args, out),
        Command::Cache { action } => {
            let c = Cache::from_env();
            match action {
                CacheAction::Path => writeln!(out, "{}", c.dir().display())?,
                CacheAction::Stats => {
                    let (n, intact, bytes) = c.stats();
                    writeln!(out, "{}: {n} entries ({intact} intact), {bytes} bytes", c.dir().display())?;
                }
                CacheAction::Clear => writeln!(out, "removed {} entries", c.clear()?)?,
            }
            Ok(0)
        }
    }
}

fn polynomials(theory: Theory, args: PolyArgs, cache: Option<&Cache>, out: &mut dyn Write) -> CliResult<i32> {
    let ws = parse_perms(&args.w)?;
    let n = if theory == Theory::H { 0 } else { args.trunc };
    let results: Vec<GradedPoly> = ws
        .par_iter()
        .map(|w| {
            let mut req = FamilyRequest::new(w.clone(), theory, n);
            if let Some(m) = args.window {
                req = req.window(m);
            }
            let kind = if theory == Theory::H { "schubert" } else { "groth" };
            let key = cache::key(kind, theory, w, req.resolved_window(), n);
            cached(cache, &key, || build(&req))
        })
        .collect::<bsp_core::Result<_>>()?;
    if args.json {
        let rows: Vec<Value> = ws
            .iter()
            .zip(&results)
            .map(|(w, f)| json!({ "w": w, "theory": theory, "trunc": theory.trunc(n), "poly": f }))
            .collect();
        let v = if rows.len() == 1 { rows[0].clone() } else { Value::Array(rows) };
        writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
    } else if ws.len() == 1 {
        writeln!(out, "{}", results[0])?;
    } else {
        for (w, f) in ws.iter().zip(&results) {
            writeln!(out, "{w}: {f}")?;
        }
    }
    Ok(0)
}

type Certified = Vec<((Partition, Permutation), PositivityCertificate)>;

fn coprod(args: CoprodArgs, certify_only: bool, cache: Option<&Cache>, out: &mut dyn Write) -> CliResult<i32> {
    let ws = parse_perms(&args.w)?;
    let theory: Theory = args.theory.into();
    let n = if theory == Theory::H { 0 } else { args.trunc };
    let certify = args.certify || certify_only;
    let results: Vec<(CoproductTable, Option<Certified>)> = ws
        .par_iter()
        .map(|w| {
            let m = args.window.unwrap_or_else(|| w.min_window());
            let key = cache::key("coprod", theory, w, m, n);
            let table: CoproductTable = cached(cache, &key, || coproduct_coefficients(w, theory, m, n))?;
            let certs = if certify { Some(certify_table(&table)?) } else { None };
            Ok((table, certs))
        })
        .collect::<bsp_core::Result<_>>()?;

    let all_certified =
        results.iter().flat_map(|(_, c)| c.iter().flatten()).all(|(_, cert)| cert.is_certified());
    if args.json {
        let mut rows = Vec::new();
        for (table, certs) in &results {
            let mut v = if certify_only {
                json!({ "w": table.w, "theory": table.theory, "m": table.m, "trunc": table.trunc })
            } else {
                serde_json::to_value(table)?
            };
            if let Some(certs) = certs {
                let list: Vec<Value> = certs
                    .iter()
                    .map(|((mu, v), c)| json!({ "mu": mu, "v": v, "certificate": c }))
                    .collect();
                v["certificates"] = Value::Array(list);
            }
            rows.push(v);
        }
        let v = if rows.len() == 1 { rows.remove(0) } else { Value::Array(rows) };
        writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
    } else {
        for (table, certs) in &results {
            let trunc = table.trunc.map(|n| format!(", N = {n}")).unwrap_or_default();
            writeln!(out, "w = {}, theory = {}, m = {}{trunc}", table.w, table.theory, table.m)?;
            for ((mu, v), coeff) in &table.entries {
                let cert = certs.as_ref().and_then(|cs| cs.iter().find(|(k, _)| k.0 == *mu && k.1 == *v));
                let label = format!("{mu} {}", show_perm(v));
                match (certify_only, cert) {
                    (true, Some((_, c))) => writeln!(out, "{label}: {}", describe(c))?,
                    (false, Some((_, c))) => writeln!(out, "{label}: {coeff}  [{}]", status_word(c))?,
                    _ => writeln!(out, "{label}: {coeff}")?,
                }
            }
        }
        if certify {
            writeln!(out, "{}", if all_certified { "all rows certified" } else { "some rows rejected" })?;
        }
    }
    Ok(if all_certified { 0 } else { 1 })
}

fn status_word(c: &PositivityCertificate) -> String {
    match &c.reason {
        None => "certified".into(),
        Some(r) => format!("rejected: {r}"),
    }
}

fn describe(c: &PositivityCertificate) -> String {
    let terms: Vec<String> = c
        .terms()
        .into_iter()
        .map(|(mono, coeff)| {
            let vars: Vec<String> =
                mono.iter().map(|(g, e)| if *e == 1 { g.clone() } else { format!("{g}^{e}") }).collect();
            match (vars.is_empty(), coeff.is_one()) {
                (true, _) => coeff.to_string(),
                (false, true) => vars.join("*"),
                (false, false) => format!("{coeff}*{}", vars.join("*")),
            }
        })
        .collect();
    let expansion = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
    let mut s = format!("{}  {expansion}", status_word(c));
    if !c.terminated {
        s.push_str("  (through the truncation order)");
    }
    s
}

fn run_oracle(args: OracleArgs, out: &mut dyn Write) -> CliResult<i32> {
    let suites: Vec<Suite> = match args.suite {
        Some(s) => vec![s.into()],
        None => Suite::ALL.to_vec(),
    };
    let mut ok = true;
    let mut json_reports = Vec::new();
    for suite in suites {
        let report = oracle::run(suite)?;
        ok &= report.passed();
        if args.json {
            let checks: Vec<Value> = report
                .checks
                .iter()
                .map(|c| json!({ "name": c.name, "cases": c.cases, "passed": c.passed(), "failures": c.failures }))
                .collect();
            json_reports.push(json!({ "suite": suite.to_string(), "passed": report.passed(), "checks": checks }));
        } else {
            for c in &report.checks {
                let tag = if c.passed() { "PASS" } else { "FAIL" };
                writeln!(out, "{tag} {suite}: {} ({} cases)", c.name, c.cases)?;
                for f in c.failures.iter().take(5) {
                    writeln!(out, "    {f}")?;
                }
            }
        }
    }
    if args.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&json_reports)?)?;
    }
    Ok(if ok { 0 } else { 1 })
}
