//! The `eulerstack` command line.
//!
//! Exit status is 0 on success, 1 when a computation fails for mathematical
//! reasons (an undefined weight, a non-constructible input, a failed law) and
//! 2 for usage and input errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::cartesian::fiber_product;
use crate::error::{Error, Result};
use crate::groupcat::WeightFunction;
use crate::json::{
    function_to_desc, gset_from_desc, morphism_to_desc, morphism_to_inline_desc, read_function, read_json,
    read_morphism, read_stack, stack_to_desc, StackRef,
};
use crate::laws::{run_suite, Suite};
use crate::orbifold::check_dhvw;
use crate::orbifold::stringy_euler;
use crate::pushpull::{
    compose, pullback, pushforward_lcf, pushforward_naive, pushforward_stack, pushforward_weighted,
    validate_morphism, LcfMode, StackMorphism,
};
use crate::rational::format_rational;
use crate::strata::{chi_naive_weighted, chi_weighted, ConstructibleFn, ConstructibleSet};

#[derive(Debug, Parser)]
#[command(name = "eulerstack", version, about = "Constructible functions on stratified stacks")]
struct Cli {
    /// Emit a JSON envelope `{command, inputs, result | error}`.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Euler characteristic of a stack, or of a function on it.
    Chi {
        stack: PathBuf,
        #[arg(short = 'f', long = "function")]
        function: Option<PathBuf>,
        #[arg(long, default_value = "naive")]
        weight: WeightFunction,
    },
    /// Push a function forward along a morphism.
    Push {
        morphism: PathBuf,
        function: PathBuf,
        /// `naive`, `stk`, or `w:<weight>`.
        #[arg(long, default_value = "naive")]
        mode: PushMode,
        /// Treat the function as locally constructible (naive or stk only).
        #[arg(long)]
        lcf: bool,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Pull a function on the target back to the source.
    Pull {
        morphism: PathBuf,
        function: PathBuf,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Compose `M1: F → G` with `M2: G → H`.
    Compose {
        first: PathBuf,
        second: PathBuf,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Fibre product of `PHI: F → H` and `PSI: G → H`.
    Fibprod {
        phi: PathBuf,
        psi: PathBuf,
        /// Write `e.json`, `eta.json` and `theta.json` here.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Orbifold Euler characteristic of a finite G-set.
    Stringy {
        gset: PathBuf,
        /// Compare with the orbifold Euler characteristic of `[M/G]`.
        #[arg(long)]
        check: bool,
    },
    /// Run seeded property suites.
    Check(CheckArgs),
}

#[derive(Debug, Args)]
struct CheckArgs {
    /// Suites to run (repeatable); all suites when omitted.
    #[arg(long = "suite")]
    suites: Vec<Suite>,
    #[arg(long, env = "EULERSTACK_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    cases: u64,
}

#[derive(Debug, Clone)]
enum PushMode {
    Naive,
    Stack,
    Weighted(WeightFunction),
}

impl std::str::FromStr for PushMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(PushMode::Naive),
            "stk" => Ok(PushMode::Stack),
            _ => match s.strip_prefix("w:") {
                Some(w) => Ok(PushMode::Weighted(w.parse()?)),
                None => Err(Error::Parse(format!("unknown mode {s:?}"))),
            },
        }
    }
}

/// What a command produced: plain text for the terminal and a JSON value
/// for the envelope. `ok` is false when a check ran but failed.
struct Outcome {
    text: String,
    result: Value,
    ok: bool,
}

impl Outcome {
    fn new(text: String, result: Value) -> Self {
        Outcome { text, result, ok: true }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => 2,
        _ => 1,
    }
}

/// Runs the command line with the process's standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
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
    let (name, inputs) = describe(&cli.command);
    let outcome = dispatch(&cli.command);
    let code = match &outcome {
        Ok(o) if o.ok => 0,
        Ok(_) => 1,
        Err(e) => exit_code(e),
    };
    let written = if cli.json {
        let envelope = match &outcome {
            Ok(o) => json!({ "command": name, "inputs": inputs, "result": o.result }),
            Err(e) => json!({ "command": name, "inputs": inputs, "error": e.to_string() }),
        };
        writeln!(out, "{}", serde_json::to_string_pretty(&envelope).expect("envelope serializes"))
    } else {
        match &outcome {
            Ok(o) => write!(out, "{}", o.text),
            Err(e) => writeln!(err, "error: {e}"),
        }
    };
    if written.is_err() {
        return 1;
    }
    code
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

fn describe(c: &Command) -> (&'static str, Value) {
    match c {
        Command::Chi { stack, function, weight } => (
            "chi",
            json!({ "stack": path_str(stack), "function": function.as_deref().map(path_str), "weight": weight.to_string() }),
        ),
        Command::Push { morphism, function, mode, lcf, .. } => (
            "push",
            json!({ "morphism": path_str(morphism), "function": path_str(function), "mode": mode_name(mode), "lcf": lcf }),
        ),
        Command::Pull { morphism, function, .. } => {
            ("pull", json!({ "morphism": path_str(morphism), "function": path_str(function) }))
        }
        Command::Compose { first, second, .. } => {
            ("compose", json!({ "first": path_str(first), "second": path_str(second) }))
        }
        Command::Fibprod { phi, psi, out_dir } => (
            "fibprod",
            json!({ "phi": path_str(phi), "psi": path_str(psi), "out_dir": out_dir.as_deref().map(path_str) }),
        ),
        Command::Stringy { gset, check } => ("stringy", json!({ "gset": path_str(gset), "check": check })),
        Command::Check(a) => (
            "check",
            json!({ "suites": a.suites.iter().map(|s| s.name()).collect::<Vec<_>>(), "seed": a.seed, "cases": a.cases }),
        ),
    }
}

fn mode_name(m: &PushMode) -> String {
    match m {
        PushMode::Naive => "naive".into(),
        PushMode::Stack => "stk".into(),
        PushMode::Weighted(w) => format!("w:{w}"),
    }
}

fn dispatch(c: &Command) -> Result<Outcome> {
    match c {
        Command::Chi { stack, function, weight } => chi(stack, function.as_deref(), weight),
        Command::Push { morphism, function, mode, lcf, out } => push(morphism, function, mode, *lcf, out.as_deref()),
        Command::Pull { morphism, function, out } => pull(morphism, function, out.as_deref()),
        Command::Compose { first, second, out } => compose_files(first, second, out.as_deref()),
        Command::Fibprod { phi, psi, out_dir } => fibprod(phi, psi, out_dir.as_deref()),
        Command::Stringy { gset, check } => stringy(gset, *check),
        Command::Check(a) => check(a),
    }
}

fn chi(stack: &Path, function: Option<&Path>, weight: &WeightFunction) -> Result<Outcome> {
    let x = Arc::new(read_stack(stack)?);
    let f = match function {
        Some(p) => read_function(p, Some(x.clone()))?,
        None => ConstructibleSet::all(x).indicator(),
    };
    let value = match weight {
        WeightFunction::Naive => chi_naive_weighted(&f)?,
        w => chi_weighted(&f, w)?,
    };
    let text = format_rational(&value);
    Ok(Outcome::new(format!("{text}\n"), json!({ "value": text })))
}

fn loaded_morphism(path: &Path) -> Result<StackMorphism> {
    let (m, _) = read_morphism(path)?;
    validate_morphism(&m).map_err(|v| Error::InvalidMorphism(v.to_string()))?;
    Ok(m)
}

/// Serializes a function with its stack inline, writing it to `out` if given.
fn emit_function(f: &ConstructibleFn, out: Option<&Path>) -> Result<Outcome> {
    let desc = function_to_desc(f, Some(StackRef::Inline(stack_to_desc(f.stack()))));
    let value = serde_json::to_value(&desc).expect("descriptors serialize");
    emit(value, out)
}

fn emit(value: Value, out: Option<&Path>) -> Result<Outcome> {
    let text = serde_json::to_string_pretty(&value).expect("descriptors serialize") + "\n";
    match out {
        Some(p) => {
            write_file(p, &text)?;
            Ok(Outcome::new(format!("wrote {}\n", p.display()), value))
        }
        None => Ok(Outcome::new(text, value)),
    }
}

fn write_file(p: &Path, text: &str) -> Result<()> {
    fs::write(p, text).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))
}

fn push(morphism: &Path, function: &Path, mode: &PushMode, lcf: bool, out: Option<&Path>) -> Result<Outcome> {
    let m = loaded_morphism(morphism)?;
    let f = read_function(function, Some(m.source().clone()))?;
    let g = match (mode, lcf) {
        (PushMode::Naive, false) => pushforward_naive(&m, &f)?,
        (PushMode::Stack, false) => pushforward_stack(&m, &f)?,
        (PushMode::Weighted(w), false) => pushforward_weighted(&m, &f, w)?,
        (PushMode::Naive, true) => pushforward_lcf(&m, &f, LcfMode::Naive)?,
        (PushMode::Stack, true) => pushforward_lcf(&m, &f, LcfMode::Stack)?,
        (PushMode::Weighted(_), true) => {
            return Err(Error::Parse("--lcf takes --mode naive or --mode stk".into()))
        }
    };
    emit_function(&g, out)
}

fn pull(morphism: &Path, function: &Path, out: Option<&Path>) -> Result<Outcome> {
    let m = loaded_morphism(morphism)?;
    let f = read_function(function, Some(m.target().clone()))?;
    emit_function(&pullback(&m, &f)?, out)
}

fn compose_files(first: &Path, second: &Path, out: Option<&Path>) -> Result<Outcome> {
    let a = loaded_morphism(first)?;
    let b = loaded_morphism(second)?;
    let c = compose(&a, &b)?;
    emit(serde_json::to_value(morphism_to_inline_desc(&c)).expect("descriptors serialize"), out)
}

fn fibprod(phi: &Path, psi: &Path, out_dir: Option<&Path>) -> Result<Outcome> {
    let phi = loaded_morphism(phi)?;
    let mut psi = loaded_morphism(psi)?;
    if *phi.target() != *psi.target() {
        return Err(Error::StackMismatch);
    }
    // both files describe H; share one copy so the square has a single target
    psi = StackMorphism::new(psi.source().clone(), phi.target().clone(), psi.records().to_vec(), psi.remainder().cloned())?;
    let sq = fiber_product(&phi, &psi)?;
    let e = stack_to_desc(&sq.e);
    let e_ref = StackRef::Path("e.json".into());
    let eta = morphism_to_desc(&sq.eta, e_ref.clone(), StackRef::Inline(stack_to_desc(sq.eta.target())));
    let theta = morphism_to_desc(&sq.theta, e_ref, StackRef::Inline(stack_to_desc(sq.theta.target())));
    let result = json!({ "e": e, "eta": eta, "theta": theta });
    match out_dir {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|err| Error::Parse(format!("{}: {err}", dir.display())))?;
            for key in ["e", "eta", "theta"] {
                let text = serde_json::to_string_pretty(&result[key]).expect("descriptors serialize") + "\n";
                write_file(&dir.join(format!("{key}.json")), &text)?;
            }
            let text = format!("E has {} strata; wrote e.json, eta.json, theta.json to {}\n", sq.e.len(), dir.display());
            Ok(Outcome::new(text, result))
        }
        None => {
            let text = serde_json::to_string_pretty(&result).expect("descriptors serialize") + "\n";
            Ok(Outcome::new(text, result))
        }
    }
}

fn stringy(path: &Path, check: bool) -> Result<Outcome> {
    let a = gset_from_desc(&read_json(path)?)?;
    if !check {
        let chi = format_rational(&stringy_euler(&a));
        return Ok(Outcome::new(format!("chi(M,G) = {chi}\n"), json!({ "stringy": chi })));
    }
    let r = check_dhvw(&a);
    let (s, o) = (format_rational(&r.stringy), format_rational(&r.orbifold));
    let text = if r.holds() {
        format!("chi(M,G) = {s} = chi_orb\n")
    } else {
        format!("chi(M,G) = {s} != {o} = chi_orb\n")
    };
    Ok(Outcome { text, result: json!({ "stringy": s, "orbifold": o, "holds": r.holds() }), ok: r.holds() })
}

fn check(a: &CheckArgs) -> Result<Outcome> {
    let suites = if a.suites.is_empty() { Suite::ALL.to_vec() } else { a.suites.clone() };
    let reports: Vec<_> = suites.iter().map(|&s| run_suite(s, a.seed, a.cases)).collect();
    let ok = reports.iter().all(|r| r.ok());
    let text: String = reports.iter().map(|r| r.to_string()).collect();
    let result = serde_json::to_value(&reports).expect("reports serialize");
    Ok(Outcome { text, result, ok })
}
