//! The `ecc` command-line driver.
//!
//! Exit codes: 0 success or relation holds, 1 relation fails, 2 type error,
//! 3 fuel exhausted, 4 parse or input error, 5 derivation rejected.

pub mod demo;
pub mod interchange;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::cumul::{cum_le, cum_le_at_level, cum_lt, min_level, CumulQuery};
use crate::infer::{check_type, infer_type, TypeError, TypeErrorKind};
use crate::kernel::{f_transform, trace_to_derivation, verify, VerifyError};
use crate::reduce::{normalize, whnf, Fuel, FuelExhausted, DEFAULT_FUEL};
use crate::strat::{classify, StratError};
use crate::syntax::{parse_context, parse_term, print_term};
use crate::term::{Context, Term};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_TYPE_ERROR: i32 = 2;
pub const EXIT_FUEL: i32 = 3;
pub const EXIT_PARSE: i32 = 4;
pub const EXIT_REJECTED: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "ecc", version, about = "Type inference and derivation checking for ECC")]
struct Cli {
    /// Reduction step budget for each operation.
    #[arg(long, global = true, env = "ECC_FUEL", default_value_t = DEFAULT_FUEL)]
    fuel: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the principal type of a term.
    Infer {
        #[arg(long)]
        ctx: Option<PathBuf>,
        term: PathBuf,
    },
    /// Decide whether a term has the given type.
    Check {
        #[arg(long)]
        ctx: Option<PathBuf>,
        term: PathBuf,
        #[arg(value_name = "TYPE")]
        ty: PathBuf,
    },
    /// Print the normal form.
    Nf { term: PathBuf },
    /// Print the weak-head normal form.
    Whnf { term: PathBuf },
    /// Decide `A ≼ B`, `A ≼ᵢ B`, or their strict parts.
    Sub {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        level: Option<usize>,
        #[arg(long)]
        strict: bool,
    },
    /// Least `i` with `A ≼ᵢ B`.
    Minlevel { a: PathBuf, b: PathBuf },
    /// Print the measure of a normalizable term.
    Phi { term: PathBuf },
    /// Print the stratum of a normalizable term.
    Classify { term: PathBuf },
    /// Write the verified ECC derivation of a term's principal typing.
    Elab {
        #[arg(long)]
        ctx: Option<PathBuf>,
        term: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-check a derivation file.
    Verify { file: PathBuf },
    /// Reproduce the counterexamples.
    Demo {
        #[command(subcommand)]
        which: Demo,
    },
}

#[derive(Debug, Subcommand)]
enum Demo {
    /// The three verdicts separating `≼` from `≼₁`.
    Prop2,
    /// A descending `≻`-chain that never terminates.
    Prop3 {
        #[arg(long, default_value_t = 16)]
        steps: usize,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn verdict(holds: bool) -> Self {
        Outcome {
            code: if holds { EXIT_OK } else { EXIT_FALSE },
            stdout: format!("{holds}\n"),
            stderr: String::new(),
        }
    }

    fn fail(code: i32, message: impl std::fmt::Display) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

impl From<FuelExhausted> for Outcome {
    fn from(e: FuelExhausted) -> Self {
        Outcome::fail(EXIT_FUEL, e)
    }
}

impl From<TypeError> for Outcome {
    fn from(e: TypeError) -> Self {
        let code = if e.kind == TypeErrorKind::FuelExhausted {
            EXIT_FUEL
        } else {
            EXIT_TYPE_ERROR
        };
        Outcome::fail(code, e)
    }
}

impl From<StratError> for Outcome {
    fn from(e: StratError) -> Self {
        match e {
            StratError::FuelExhausted(f) => f.into(),
            StratError::MeasureOverflow => Outcome::fail(EXIT_TYPE_ERROR, e),
        }
    }
}

impl From<VerifyError> for Outcome {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::FuelExhausted(f) => f.into(),
            VerifyError::Rejected { .. } => Outcome::fail(EXIT_REJECTED, e),
        }
    }
}

type Run = Result<Outcome, Outcome>;

fn read(path: &Path) -> Result<String, Outcome> {
    fs::read_to_string(path).map_err(|e| Outcome::fail(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn read_term(path: &Path) -> Result<Term, Outcome> {
    parse_term(&read(path)?).map_err(|e| Outcome::fail(EXIT_PARSE, format!("{}:{e}", path.display())))
}

fn read_context(path: Option<&Path>) -> Result<Context, Outcome> {
    match path {
        None => Ok(Context::new()),
        Some(p) => parse_context(&read(p)?).map_err(|e| Outcome::fail(EXIT_PARSE, format!("{}:{e}", p.display()))),
    }
}

/// Run the command line `argv` (including the program name).
pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_PARSE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome::ok(text)
            };
        }
    };
    let mut fuel = Fuel::new(cli.fuel);
    dispatch(cli.command, &mut fuel).unwrap_or_else(|o| o)
}

fn dispatch(command: Command, fuel: &mut Fuel) -> Run {
    match command {
        Command::Infer { ctx, term } => {
            let g = read_context(ctx.as_deref())?;
            let m = read_term(&term)?;
            let out = infer_type(&g, &m, fuel)?;
            Ok(Outcome::ok(format!("{}\n", print_term(&out.principal))))
        }
        Command::Check { ctx, term, ty } => {
            let g = read_context(ctx.as_deref())?;
            let m = read_term(&term)?;
            let a = read_term(&ty)?;
            Ok(Outcome::verdict(check_type(&g, &m, &a, fuel)?))
        }
        Command::Nf { term } => {
            let t = read_term(&term)?;
            Ok(Outcome::ok(format!("{}\n", print_term(&normalize(&t, fuel)?))))
        }
        Command::Whnf { term } => {
            let t = read_term(&term)?;
            Ok(Outcome::ok(format!("{}\n", print_term(&whnf(&t, fuel)?))))
        }
        Command::Sub { a, b, level, strict } => {
            let query = CumulQuery {
                left: read_term(&a)?,
                right: read_term(&b)?,
                level,
                strict,
            };
            Ok(Outcome::verdict(query.run(fuel)?))
        }
        Command::Minlevel { a, b } => {
            let (a, b) = (read_term(&a)?, read_term(&b)?);
            Ok(match min_level(&a, &b, fuel)? {
                Some(i) => Outcome::ok(format!("{i}\n")),
                None => Outcome {
                    code: EXIT_FALSE,
                    stdout: "none\n".into(),
                    stderr: String::new(),
                },
            })
        }
        Command::Phi { term } => {
            let t = read_term(&term)?;
            Ok(Outcome::ok(format!("{}\n", classify(&t, fuel)?.measure)))
        }
        Command::Classify { term } => {
            let t = read_term(&term)?;
            Ok(Outcome::ok(format!("{}\n", classify(&t, fuel)?)))
        }
        Command::Elab { ctx, term, out } => {
            let g = read_context(ctx.as_deref())?;
            let m = read_term(&term)?;
            let outcome = infer_type(&g, &m, fuel)?;
            let trace = trace_to_derivation(&outcome.trace, fuel)?;
            let d = f_transform(&trace, fuel)?;
            verify(&d, fuel)?;
            fs::write(&out, interchange::encode(&d))
                .map_err(|e| Outcome::fail(EXIT_PARSE, format!("{}: {e}", out.display())))?;
            Ok(Outcome::ok(format!("{}\n", print_term(&outcome.principal))))
        }
        Command::Verify { file } => {
            let d = interchange::decode(&read(&file)?).map_err(|e| Outcome::fail(EXIT_REJECTED, e))?;
            verify(&d, fuel)?;
            Ok(Outcome::ok(format!("accepted: {}\n", d.conclusion)))
        }
        Command::Demo { which: Demo::Prop2 } => prop2(fuel),
        Command::Demo {
            which: Demo::Prop3 { steps },
        } => prop3(steps, fuel),
    }
}

fn prop2(fuel: &mut Fuel) -> Run {
    let (c, a, b) = (demo::prop2_c(), demo::prop2_a(), demo::prop2_b());
    let c_le_a = cum_le(&c, &a, fuel)?;
    let a_le1_b = cum_le_at_level(&a, &b, 1, fuel)?;
    let a_lt_b = cum_lt(&a, &b, fuel)?;
    let c_le1_a = cum_le_at_level(&c, &a, 1, fuel)?;
    let level = min_level(&c, &a, fuel)?;
    let mut s = String::new();
    writeln!(s, "C = {c}").ok();
    writeln!(s, "A = {a}").ok();
    writeln!(s, "B = {b}").ok();
    writeln!(s, "C <= A: {c_le_a}").ok();
    writeln!(s, "A <=_1 B: {a_le1_b} (strict: {a_lt_b})").ok();
    writeln!(s, "C <=_1 A: {c_le1_a}").ok();
    match level {
        Some(i) => writeln!(s, "minlevel(C, A) = {i}").ok(),
        None => writeln!(s, "minlevel(C, A) = none").ok(),
    };
    let expected = c_le_a && a_le1_b && a_lt_b && !c_le1_a && level == Some(2);
    Ok(Outcome {
        code: if expected { EXIT_OK } else { EXIT_FALSE },
        stdout: s,
        stderr: String::new(),
    })
}

fn prop3(steps: usize, fuel: &mut Fuel) -> Run {
    let chain = demo::prop3_chain(steps);
    let mut s = String::new();
    let mut all = true;
    for (i, t) in chain.iter().enumerate() {
        if i == 0 {
            writeln!(s, "{i}: {t}").ok();
        } else {
            let strict = cum_lt(t, &chain[i - 1], fuel)?;
            all &= strict;
            writeln!(s, "{i}: {t}  [strictly below {}: {strict}]", i - 1).ok();
        }
    }
    Ok(Outcome {
        code: if all { EXIT_OK } else { EXIT_FALSE },
        stdout: s,
        stderr: String::new(),
    })
}
