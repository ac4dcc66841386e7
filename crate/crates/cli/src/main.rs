//! `acf` — decision procedures for algebraically closed fields.
//!
//! Exit codes: 0 = true/success, 1 = false, 2 = input error,
//! 3 = resource/internal error.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use acf_core::apps::{
    lefschetz_report_with, noether_ostrowski_check_with, nullstellensatz_decide_with,
    strong_minimality_analyze, AppsError, PolySystem,
};
use acf_core::qe::{parse_poly, Characteristic, PrimeMode, QeEngine, QeError};
use acf_core::semantics::{
    elem_equiv_at_depth, find_isomorphism, is_substructure, Assignment, FiniteStructure,
};
use acf_core::syntax::{parse_formula, Formula, Signature};

const EXIT_TRUE: u8 = 0;
const EXIT_FALSE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "acf",
    version,
    about = "Quantifier elimination and decision procedures for algebraically closed fields"
)]
struct Cli {
    /// Output format: human-readable text or one JSON document
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula; print its tree and free variables
    Parse {
        /// Formula text (ring language unless --sig is given)
        formula: String,
        /// Signature file (JSON); defaults to the ring signature
        #[arg(long)]
        sig: Option<PathBuf>,
    },
    /// Evaluate a formula in a finite structure
    Eval {
        /// Structure file (JSON)
        structure: PathBuf,
        /// Formula text
        formula: String,
        /// Signature file (JSON); inferred from the structure if omitted
        #[arg(long)]
        sig: Option<PathBuf>,
        /// Assign a free variable: --assign x=elem (repeatable)
        #[arg(long = "assign", value_name = "VAR=ELEM")]
        assign: Vec<String>,
    },
    /// Eliminate quantifiers; print an equivalent constructible form
    Qe {
        formula: String,
        /// Step budget for the elimination engine
        #[arg(long)]
        budget: Option<u64>,
        /// Eliminate disjuncts of existential blocks in parallel
        #[arg(long)]
        parallel: bool,
    },
    /// Decide a sentence over the algebraically closed field of a characteristic
    Decide {
        sentence: String,
        /// Characteristic: 0 or a prime
        #[arg(long = "char", default_value_t = 0)]
        characteristic: u64,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        parallel: bool,
    },
    /// Truth of a sentence in every characteristic at once
    Spectrum {
        sentence: String,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        parallel: bool,
    },
    /// Common-zero solvability of a polynomial system (.poly file)
    Nss {
        /// Polynomial system file: one polynomial per line, # comments
        system: PathBuf,
        #[arg(long = "char", default_value_t = 0)]
        characteristic: u64,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        parallel: bool,
    },
    /// Irreducibility of a polynomial in char 0 and at sampled primes
    Irreducible {
        /// Polynomial text, e.g. "x^2 + y^2 - 1"
        poly: String,
        /// Primes to sample (comma separated)
        #[arg(long, value_delimiter = ',', default_value = "2,3,5,7,11,13")]
        primes: Vec<u64>,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        parallel: bool,
    },
    /// Finite-or-cofinite analysis of a one-variable formula
    Minimal {
        formula: String,
        #[arg(long = "char", default_value_t = 0)]
        characteristic: u64,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        parallel: bool,
    },
    /// Characteristic spectrum with an independent finite-field cross-check
    Lefschetz {
        sentence: String,
        /// Check every prime up to this bound
        #[arg(long, default_value_t = 13)]
        primes_up_to: u64,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        parallel: bool,
    },
    /// Search for an isomorphism between two finite structures
    Iso {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        sig: Option<PathBuf>,
    },
    /// Ehrenfeucht–Fraïssé equivalence up to a quantifier depth
    Equiv {
        a: PathBuf,
        b: PathBuf,
        /// Quantifier depth
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[arg(long)]
        sig: Option<PathBuf>,
    },
    /// Is the first structure a substructure of the second?
    Sub {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        sig: Option<PathBuf>,
    },
}

/// A finished command: one JSON document, its text rendering, and the exit
/// code implied by the result.
struct Output {
    json: Value,
    text: String,
    exit: u8,
}

struct Failure {
    message: String,
    resource: bool,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { message: message.into(), resource: false }
    }

    fn exit(&self) -> u8 {
        if self.resource {
            EXIT_RESOURCE
        } else {
            EXIT_INPUT
        }
    }
}

impl From<QeError> for Failure {
    fn from(e: QeError) -> Self {
        let resource =
            matches!(e, QeError::BudgetExhausted(_) | QeError::FactorOutOfRange(_));
        Failure { message: e.to_string(), resource }
    }
}

impl From<AppsError> for Failure {
    fn from(e: AppsError) -> Self {
        match e {
            AppsError::Qe(inner) => inner.into(),
            AppsError::OracleMismatch { .. } => {
                Failure { message: e.to_string(), resource: true }
            }
            other => Failure::input(other.to_string()),
        }
    }
}

impl From<acf_core::syntax::SyntaxError> for Failure {
    fn from(e: acf_core::syntax::SyntaxError) -> Self {
        Failure::input(e.to_string())
    }
}

impl From<acf_core::semantics::SemanticsError> for Failure {
    fn from(e: acf_core::semantics::SemanticsError) -> Self {
        Failure::input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(out) => {
            match cli.format {
                Format::Text => println!("{}", out.text),
                Format::Json => println!("{}", out.json),
            }
            ExitCode::from(out.exit)
        }
        Err(failure) => {
            match cli.format {
                Format::Text => eprintln!("error: {}", failure.message),
                Format::Json => println!("{}", json!({ "error": failure.message })),
            }
            ExitCode::from(failure.exit())
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn load_signature(sig: &Option<PathBuf>) -> Result<Signature, Failure> {
    match sig {
        None => Ok(Signature::ring()),
        Some(path) => Ok(Signature::from_json_str(&read_file(path)?)?),
    }
}

fn load_structure(
    path: &Path,
    sig: &Option<PathBuf>,
) -> Result<FiniteStructure, Failure> {
    let text = read_file(path)?;
    let explicit = match sig {
        None => None,
        Some(p) => Some(Signature::from_json_str(&read_file(p)?)?),
    };
    Ok(FiniteStructure::from_json_str(&text, explicit.as_ref())?)
}

fn parse_in(formula: &str, sig: &Signature) -> Result<Formula, Failure> {
    Ok(parse_formula(formula, sig)?)
}

fn engine(budget: Option<u64>, parallel: bool) -> QeEngine {
    let mut e = QeEngine::new().with_parallelism(parallel);
    if let Some(b) = budget {
        e = e.with_budget(b);
    }
    e
}

fn characteristic(raw: u64) -> Result<Characteristic, Failure> {
    Ok(Characteristic::new(raw)?)
}

fn bool_exit(b: bool) -> u8 {
    if b {
        EXIT_TRUE
    } else {
        EXIT_FALSE
    }
}

fn run(cmd: &Command) -> Result<Output, Failure> {
    match cmd {
        Command::Parse { formula, sig } => {
            let sig = load_signature(sig)?;
            let f = parse_in(formula, &sig)?;
            let free: Vec<String> = f.free_vars().into_iter().collect();
            let text = format!(
                "formula: {f}\nast: {f:?}\nfree: {{{}}}\nsentence: {}",
                free.join(", "),
                f.is_sentence()
            );
            Ok(Output {
                json: json!({
                    "formula": f.to_string(),
                    "ast": format!("{f:?}"),
                    "free_vars": free,
                    "sentence": f.is_sentence(),
                }),
                text,
                exit: EXIT_TRUE,
            })
        }
        Command::Eval { structure, formula, sig, assign } => {
            let m = load_structure(structure, sig)?;
            let f = parse_in(formula, m.signature())?;
            let mut env: Assignment = BTreeMap::new();
            for pair in assign {
                let Some((var, elem)) = pair.split_once('=') else {
                    return Err(Failure::input(format!(
                        "bad assignment `{pair}`: expected VAR=ELEM"
                    )));
                };
                env.insert(var.trim().to_string(), elem.trim().to_string());
            }
            let value = m.eval(&f, &env)?;
            Ok(Output {
                json: json!({ "value": value }),
                text: value.to_string(),
                exit: bool_exit(value),
            })
        }
        Command::Qe { formula, budget, parallel } => {
            let f = parse_in(formula, &Signature::ring())?;
            let cf = engine(*budget, *parallel).eliminate(&f)?;
            Ok(Output {
                json: json!({
                    "form": cf.to_string(),
                    "trivially_true": cf.is_true(),
                    "trivially_false": cf.is_false(),
                }),
                text: cf.to_string(),
                exit: EXIT_TRUE,
            })
        }
        Command::Decide { sentence, characteristic: ch, budget, parallel } => {
            let f = parse_in(sentence, &Signature::ring())?;
            let ch = characteristic(*ch)?;
            let value = engine(*budget, *parallel).decide(&f, ch)?;
            Ok(Output {
                json: json!({ "characteristic": ch.to_string(), "value": value }),
                text: value.to_string(),
                exit: bool_exit(value),
            })
        }
        Command::Spectrum { sentence, budget, parallel } => {
            let f = parse_in(sentence, &Signature::ring())?;
            let spectrum = engine(*budget, *parallel).char_spectrum(&f)?;
            Ok(Output {
                json: json!({
                    "char0": spectrum.true_in_char0(),
                    "mode": match spectrum.mode() {
                        PrimeMode::OnlyListed => "only_listed",
                        PrimeMode::AllExceptListed => "all_except_listed",
                    },
                    "primes": spectrum.listed().iter().collect::<Vec<_>>(),
                    "display": spectrum.to_string(),
                }),
                text: spectrum.to_string(),
                exit: EXIT_TRUE,
            })
        }
        Command::Nss { system, characteristic: ch, budget, parallel } => {
            let sys = PolySystem::parse(&read_file(system)?)?;
            let ch = characteristic(*ch)?;
            let value = nullstellensatz_decide_with(&engine(*budget, *parallel), &sys, ch)?;
            Ok(Output {
                json: json!({
                    "characteristic": ch.to_string(),
                    "generators": sys.generators().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                    "solvable": value,
                }),
                text: value.to_string(),
                exit: bool_exit(value),
            })
        }
        Command::Irreducible { poly, primes, budget, parallel } => {
            let f = parse_poly(poly)?;
            let report =
                noether_ostrowski_check_with(&engine(*budget, *parallel), &f, primes)?;
            let mut text = format!(
                "char 0: {}",
                if report.char0_irreducible() { "irreducible" } else { "reducible" }
            );
            for (p, v) in report.prime_verdicts() {
                text.push_str(&format!(
                    "\nchar {p}: {}",
                    if *v { "irreducible" } else { "reducible" }
                ));
            }
            let mism = report.mismatching_primes();
            if !mism.is_empty() {
                text.push_str(&format!(
                    "\ndiffers from char 0 at: {}",
                    mism.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
                ));
            }
            Ok(Output {
                json: json!({
                    "polynomial": f.to_string(),
                    "char0_irreducible": report.char0_irreducible(),
                    "primes": report.prime_verdicts().iter()
                        .map(|(p, v)| json!({ "p": p, "irreducible": v }))
                        .collect::<Vec<_>>(),
                    "mismatching_primes": mism,
                }),
                text,
                exit: bool_exit(report.char0_irreducible()),
            })
        }
        Command::Minimal { formula, characteristic: ch, budget, parallel } => {
            let f = parse_in(formula, &Signature::ring())?;
            let ch = characteristic(*ch)?;
            let cf = engine(*budget, *parallel).eliminate(&f)?;
            let report = strong_minimality_analyze(&cf, ch)?;
            let (verdict, bound) = match report {
                acf_core::apps::MinimalityReport::Finite(n) => ("finite", n),
                acf_core::apps::MinimalityReport::Cofinite(n) => ("cofinite", n),
            };
            Ok(Output {
                json: json!({
                    "characteristic": ch.to_string(),
                    "form": cf.to_string(),
                    "verdict": verdict,
                    "bound": bound,
                }),
                text: format!("{report}"),
                exit: EXIT_TRUE,
            })
        }
        Command::Lefschetz { sentence, primes_up_to, budget, parallel } => {
            let f = parse_in(sentence, &Signature::ring())?;
            let report = lefschetz_report_with(&engine(*budget, *parallel), &f, *primes_up_to)?;
            Ok(Output {
                json: json!({
                    "spectrum": {
                        "char0": report.spectrum().true_in_char0(),
                        "mode": match report.spectrum().mode() {
                            PrimeMode::OnlyListed => "only_listed",
                            PrimeMode::AllExceptListed => "all_except_listed",
                        },
                        "primes": report.spectrum().listed().iter().collect::<Vec<_>>(),
                    },
                    "checks": report.checks().iter().map(|c| json!({
                        "p": c.prime,
                        "elimination": c.by_elimination,
                        "oracle": c.by_oracle,
                    })).collect::<Vec<_>>(),
                }),
                text: report.to_string().trim_end().to_string(),
                exit: EXIT_TRUE,
            })
        }
        Command::Iso { a, b, sig } => {
            let sa = load_structure(a, sig)?;
            let sb = load_structure(b, sig)?;
            let iso = find_isomorphism(&sa, &sb);
            let found = iso.is_some();
            let text = match &iso {
                Some(map) => {
                    let lines: Vec<String> =
                        map.iter().map(|(k, v)| format!("  {k} -> {v}")).collect();
                    format!("isomorphic\n{}", lines.join("\n"))
                }
                None => "not isomorphic".to_string(),
            };
            Ok(Output {
                json: json!({ "isomorphic": found, "map": iso }),
                text,
                exit: bool_exit(found),
            })
        }
        Command::Equiv { a, b, depth, sig } => {
            let sa = load_structure(a, sig)?;
            let sb = load_structure(b, sig)?;
            let equivalent = elem_equiv_at_depth(&sa, &sb, *depth);
            Ok(Output {
                json: json!({ "depth": depth, "equivalent": equivalent }),
                text: format!(
                    "{} at quantifier depth {depth}",
                    if equivalent { "equivalent" } else { "distinguishable" }
                ),
                exit: bool_exit(equivalent),
            })
        }
        Command::Sub { a, b, sig } => {
            let sa = load_structure(a, sig)?;
            let sb = load_structure(b, sig)?;
            let value = is_substructure(&sa, &sb);
            Ok(Output {
                json: json!({ "substructure": value }),
                text: value.to_string(),
                exit: bool_exit(value),
            })
        }
    }
}
