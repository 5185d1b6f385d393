//! Command-line front end.
//!
//! Every command prints a report followed by one `RESULT:` line. The exit status is 0 when the
//! result is a success (`true`, `valid`, `accepted`, `pass`), 1 when it is not, and 2 on input errors.

use crate::fixtures::{run_fixtures, Corpus};
use crate::fuzz::{fuzz_soundness, FuzzClass, FuzzConfig, FuzzVerdict};
use crate::kripke::{eval, validate_model, Model, RawModel};
use crate::proofs::{check_derivation, check_proof_of, Derivation, LogicSystem};
use crate::quasimodel::{validate_quasimodel, Quasimodel};
use crate::realline::{eval_real, parse_point, parse_valuation};
use crate::syntax::{parse, Formula};
use crate::unwind::{conservativity_check_from, Mode};
use clap::{Parser, Subcommand};
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(name = "itl", version, about = "Intuitionistic linear temporal logic workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a formula and print its normal rendering.
    Parse {
        #[arg(long)]
        formula: String,
    },
    /// Evaluate a formula on a finite dynamic poset.
    EvalKripke {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        formula: String,
        /// World to test; without it the formula is checked for validity.
        #[arg(long)]
        at: Option<String>,
    },
    /// Evaluate a formula on the real line with the doubling map.
    EvalReal {
        /// Valuation such as `p=(-inf,1); q=(0,inf)`.
        #[arg(long)]
        val: String,
        #[arg(long)]
        formula: String,
        /// Point to test; without it the formula is checked for validity.
        #[arg(long)]
        at: Option<String>,
    },
    /// Check a derivation file.
    CheckProof {
        file: PathBuf,
        #[arg(long, default_value = "itl0")]
        system: String,
        /// Required conclusion.
        #[arg(long)]
        formula: Option<String>,
    },
    /// Validate a quasimodel file.
    QmValidate {
        #[arg(long)]
        qm: PathBuf,
    },
    /// Unwind a quasimodel and check that it satisfies or falsifies a formula.
    Unwind {
        #[arg(long)]
        qm: PathBuf,
        #[arg(long)]
        formula: String,
        #[arg(long)]
        at: String,
        #[arg(long, default_value = "satisfy")]
        mode: String,
        /// First length bound; defaults to the one computed from the formula.
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Run the fixture corpus and print the distinctness matrix.
    Fixtures {
        /// Corpus directory; the built-in copy is used otherwise.
        #[arg(long)]
        dir: Option<PathBuf>,
    },
    /// Check sampled axiom instances on random models.
    FuzzSoundness {
        #[arg(long, default_value = "itl-cd")]
        system: String,
        /// `cont`, `open`, `pers`, `cont-not-open` or `real`.
        #[arg(long, default_value = "cont")]
        class: String,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        max_worlds: usize,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 1)]
        instances: usize,
    },
}

/// Outcome of a command: report text, verdict word and whether it counts as success.
struct Outcome {
    report: String,
    result: String,
    ok: bool,
}

impl Outcome {
    fn new(report: String, result: impl Into<String>, ok: bool) -> Self {
        Outcome { report, result: result.into(), ok }
    }

    fn truth(report: String, holds: bool) -> Self {
        Outcome::new(report, holds.to_string(), holds)
    }
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read `{}`: {e}", path.display()))
}

fn formula(text: &str) -> Result<Formula, String> {
    parse(text).map_err(|e| e.to_string())
}

fn execute(cmd: Command) -> Result<Outcome, String> {
    match cmd {
        Command::Parse { formula: text } => {
            let f = formula(&text)?;
            let report = format!(
                "formula: {f}\nlength: {}\ntemporal depth: {}\nimplication depth: {}\nfragment: {:?}\n",
                f.length(),
                f.temporal_depth(),
                f.implication_depth(),
                f.fragment()
            );
            Ok(Outcome::new(report, f.to_string(), true))
        }
        Command::EvalKripke { model, formula: text, at } => {
            let raw = RawModel::parse(&read(&model)?).map_err(|e| e.to_string())?;
            let check = validate_model(&raw).map_err(|e| e.to_string())?;
            if !check.valid {
                return Err(format!("model is not a dynamic poset:\n{check}"));
            }
            let m = Model::from_raw(&raw).map_err(|e| e.to_string())?;
            let f = formula(&text)?;
            let set = eval(&m, &f);
            let names: Vec<&str> = set.iter().map(|w| m.name(w)).collect();
            let report = format!("formula: {f}\ntrue at: {{{}}}\n", names.join(", "));
            match at {
                Some(w) => {
                    let i = m.index(&w).ok_or_else(|| format!("unknown world `{w}`"))?;
                    Ok(Outcome::truth(report, set.contains(i)))
                }
                None => Ok(validity(report, set.is_full())),
            }
        }
        Command::EvalReal { val, formula: text, at } => {
            let v = parse_valuation(&val).map_err(|e| e.to_string())?;
            let f = formula(&text)?;
            let set = eval_real(&v, &f).map_err(|e| e.to_string())?;
            let report = format!("formula: {f}\ntruth set: {set}\n");
            match at {
                Some(x) => {
                    let x = parse_point(&x).map_err(|e| e.to_string())?;
                    Ok(Outcome::truth(report, set.member(&x)))
                }
                None => Ok(validity(report, set.is_reals())),
            }
        }
        Command::CheckProof { file, system, formula: goal } => {
            let sys: LogicSystem = system.parse()?;
            let d: Derivation =
                read(&file)?.parse().map_err(|e: crate::proofs::DerivationFormatError| e.to_string())?;
            let r = match goal {
                Some(g) => check_proof_of(&d, sys, &formula(&g)?),
                None => check_derivation(&d, sys),
            };
            Ok(match r {
                Ok(()) => {
                    let last = &d.lines.last().unwrap().formula;
                    Outcome::new(
                        format!("{} lines checked in {sys}\nproves: {last}\n", d.lines.len()),
                        "accepted",
                        true,
                    )
                }
                Err(e) => Outcome::new(format!("{e}\n"), "rejected", false),
            })
        }
        Command::QmValidate { qm } => {
            let q = Quasimodel::from_text(&read(&qm)?).map_err(|e| e.to_string())?;
            let r = validate_quasimodel(&q);
            let ok = r.valid();
            Ok(Outcome::new(r.to_string(), if ok { "valid" } else { "invalid" }, ok))
        }
        Command::Unwind { qm, formula: text, at, mode, bound } => {
            let q = Quasimodel::from_text(&read(&qm)?).map_err(|e| e.to_string())?;
            let mode: Mode = mode.parse()?;
            let f = formula(&text)?;
            let r = conservativity_check_from(&q, &f, &at, mode, bound).map_err(|e| e.to_string())?;
            let mut report = format!("# weak limit at bound {}\n{}\n", r.base_bound, r.limit.model.to_text());
            let start = r.limit.index_of(&r.start).map(|i| r.limit.model.name(i).to_string()).unwrap_or_default();
            report.push_str(&format!("start point: {start}\n{r}"));
            let ok = r.passed();
            Ok(Outcome::new(report, if ok { "pass" } else { "fail" }, ok))
        }
        Command::Fixtures { dir } => {
            let corpus = match dir {
                Some(d) => Corpus::from_dir(&d),
                None => Corpus::embedded(),
            }
            .map_err(|e| e.to_string())?;
            let r = run_fixtures(&corpus);
            let mut report = r.to_string();
            if !r.passed() {
                report.push_str(&format!("failing fixtures: {}\n", r.failures().join(", ")));
            }
            let ok = r.passed();
            Ok(Outcome::new(report, if ok { "pass" } else { "fail" }, ok))
        }
        Command::FuzzSoundness { system, class, trials, seed, max_worlds, depth, instances } => {
            let cfg = FuzzConfig {
                system: system.parse()?,
                class: class.parse::<FuzzClass>()?,
                trials,
                max_worlds: max_worlds.max(1),
                depth,
                instances_per_schema: instances.max(1),
                seed,
            };
            let r = fuzz_soundness(&cfg);
            let word = match r.verdict() {
                FuzzVerdict::Pass => "pass",
                FuzzVerdict::Fail => "fail",
                FuzzVerdict::ExpectedCounterexamples => "pass (expected counterexamples found)",
                FuzzVerdict::Suspicious => "pass (suspicious: no expected counterexample)",
            };
            Ok(Outcome::new(format!("{r}\n"), word, r.passed()))
        }
    }
}

fn validity(report: String, valid: bool) -> Outcome {
    Outcome::new(report, if valid { "valid" } else { "invalid" }, valid)
}

/// Runs the command line, writing the report to `out` and diagnostics to `err`.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    match execute(cli.command) {
        Ok(o) => {
            let _ = write!(out, "{}", o.report);
            let _ = writeln!(out, "RESULT: {}", o.result);
            i32::from(!o.ok)
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            let _ = writeln!(out, "RESULT: error");
            2
        }
    }
}

/// Runs the command line on standard output.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
