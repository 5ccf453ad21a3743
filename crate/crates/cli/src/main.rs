//! `aisemiring`: command-line access to the catalog, identity checking,
//! endomorphism semirings, Zimin-word decisions, v-words, classification,
//! variety witnesses, subgroup search and the reproduction report.
//!
//! Exit codes: 0 pass/holds, 1 fail/refuted, 2 inconclusive or budget,
//! 3 input error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use aisemiring::catalog::{self, CatalogObject};
use aisemiring::classify::classify;
use aisemiring::error::Error;
use aisemiring::io;
use aisemiring::repro::{reproduce, ReproBudgets, Scope};
use aisemiring::semilattice::{endomorphism_semiring, Semilattice};
use aisemiring::structure::{find_nonabelian_nilpotent_subgroup, variety_membership_witness, Membership, MembershipBudget};
use aisemiring::terms::{check_identity, parse, parse_identity, CheckBudget, CheckMode, Parsed, Verdict, Word};
use aisemiring::vwords::{check_v_square, transfer_check, v_word, Transfer, VWordBudget, VWordSpec};
use aisemiring::zimin::{decide, zimin, Property, Status, ZiminBudget};
use aisemiring::FiniteAiSemiring;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "aisemiring", version, about = "Finite ai-semirings and endomorphism semirings of semilattices")]
struct Cli {
    /// Also write the JSON result to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for exhaustive searches (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List catalog names or show one object as a file.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Check an identity such as "x x <= x" in a semiring.
    Check {
        #[command(flatten)]
        semiring: SemiringArg,
        #[arg(long)]
        identity: String,
        /// Random substitutions instead of an exhaustive check.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100_000_000)]
        budget_substitutions: u128,
    },
    /// Build End(A) for a semilattice and print it as a semiring file.
    End {
        #[command(flatten)]
        semilattice: SemilatticeArg,
    },
    /// Decide whether a word is minimal, maximal or isolated.
    Zimin {
        #[command(flatten)]
        semiring: SemiringArg,
        /// The Zimin word Z_m.
        #[arg(long, conflicts_with = "word")]
        m: Option<usize>,
        /// Any word, e.g. "x y x".
        #[arg(long)]
        word: Option<String>,
        #[arg(long, default_value = "isolated")]
        property: String,
        #[arg(long, default_value_t = 200_000)]
        budget_states: usize,
        #[arg(long, default_value_t = 600)]
        budget_seconds: u64,
    },
    /// Build v_{n,m}^{(h)} or test v = v^2.
    Vword {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        h: usize,
        #[arg(long)]
        semiring: Option<String>,
        #[arg(long)]
        check_square: bool,
        /// Compare R_t with End(P_t).
        #[arg(long)]
        transfer: Option<usize>,
        #[arg(long, default_value_t = 100_000_000)]
        budget_lookups: u128,
    },
    /// Finite-basis labels for End(A).
    Classify {
        #[command(flatten)]
        semilattice: SemilatticeArg,
    },
    /// Search the target as an image of a subsemiring of a power of the source.
    Witness {
        #[arg(long)]
        target: String,
        #[arg(long)]
        source: String,
        #[arg(long, default_value_t = 2)]
        max_power: u32,
        #[arg(long, default_value_t = 3)]
        max_generators: usize,
    },
    /// Search a nonabelian nilpotent subgroup of (S, ·).
    Subgroup {
        #[command(flatten)]
        semiring: SemiringArg,
    },
    /// Run the reproduction checklist.
    Reproduce {
        #[arg(long, default_value = "all")]
        scope: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print the text rendering instead of JSON.
        #[arg(long)]
        text: bool,
        #[arg(long, default_value_t = 2)]
        zimin_max_m: usize,
        #[arg(long, default_value_t = 200_000)]
        budget_states: usize,
        #[arg(long, default_value_t = 600)]
        budget_seconds: u64,
        #[arg(long, default_value_t = 100_000_000)]
        budget_lookups: u128,
        #[arg(long, default_value_t = 2)]
        hsp_max_power: u32,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    Show { name: String },
}

#[derive(Args)]
struct SemiringArg {
    /// Catalog name or path to a semiring file.
    #[arg(long)]
    semiring: String,
}

#[derive(Args)]
struct SemilatticeArg {
    /// Catalog name or path to a semilattice file.
    #[arg(long)]
    semilattice: String,
}

/// A result document and its exit code.
struct Outcome {
    code: u8,
    doc: Value,
}

impl Outcome {
    fn new(code: u8, doc: Value) -> Self {
        Outcome { code, doc }
    }
}

fn input(e: Error) -> (u8, Error) {
    let code = match e {
        Error::Budget { .. } => 2,
        _ => 3,
    };
    (code, e)
}

type CmdResult = Result<Outcome, (u8, Error)>;

fn load_semiring(spec: &str) -> Result<FiniteAiSemiring, Error> {
    if Path::new(spec).is_file() {
        io::read_semiring(spec)
    } else {
        catalog::get_semiring(spec)
    }
}

fn load_semilattice(spec: &str) -> Result<Semilattice, Error> {
    if Path::new(spec).is_file() {
        io::read_semilattice(spec)
    } else {
        catalog::get_semilattice(spec)
    }
}

fn parse_word(text: &str) -> Result<Word, Error> {
    match parse(text)? {
        Parsed::Polynomial(p) => p.as_word().ok_or_else(|| Error::Input(format!("`{text}` is not a word"))),
        Parsed::Identity(_) => Err(Error::Input(format!("`{text}` is not a word"))),
    }
}

fn run(cmd: Command) -> CmdResult {
    match cmd {
        Command::Catalog { action } => match action {
            CatalogAction::List => Ok(Outcome::new(0, json!(catalog::names()))),
            CatalogAction::Show { name } => {
                let text = match catalog::get(&name).map_err(input)? {
                    CatalogObject::Semiring(s) => io::semiring_to_string(&s),
                    CatalogObject::Semilattice(a) => io::semilattice_to_string(&a),
                };
                Ok(Outcome::new(0, serde_json::from_str(&text).expect("valid json")))
            }
        },
        Command::Check {
            semiring,
            identity,
            samples,
            seed,
            budget_substitutions,
        } => {
            let s = load_semiring(&semiring.semiring).map_err(input)?;
            let id = parse_identity(&identity).map_err(input)?;
            let mode = samples.map_or(CheckMode::Exhaustive, |count| CheckMode::Sampled { count, seed });
            let v = check_identity(&s, &id, mode, CheckBudget { max_substitutions: budget_substitutions }).map_err(input)?;
            let base = json!({ "semiring": s.name(), "identity": id.to_string(), "mode": mode });
            let (code, verdict) = match v {
                Verdict::Holds => (0, json!({ "verdict": "holds" })),
                Verdict::Fails(phi) => (1, json!({ "verdict": "fails", "witness": phi.to_json(&s) })),
                Verdict::NoCounterexample { count, seed } => (2, json!({ "verdict": "no_counterexample", "samples": count, "seed": seed })),
            };
            let mut doc = base;
            doc.as_object_mut().unwrap().extend(verdict.as_object().unwrap().clone());
            Ok(Outcome::new(code, doc))
        }
        Command::End { semilattice } => {
            let a = load_semilattice(&semilattice.semilattice).map_err(input)?;
            let end = endomorphism_semiring(&a).map_err(input)?;
            Ok(Outcome::new(0, serde_json::from_str(&io::semiring_to_string(&end.semiring)).expect("valid json")))
        }
        Command::Zimin {
            semiring,
            m,
            word,
            property,
            budget_states,
            budget_seconds,
        } => {
            let s = load_semiring(&semiring.semiring).map_err(input)?;
            let w = match (m, word) {
                (Some(m), None) if m >= 1 => zimin(m),
                (None, Some(text)) => parse_word(&text).map_err(input)?,
                _ => return Err((3, Error::Input("give --m (at least 1) or --word".into()))),
            };
            let p: Property = property.parse().map_err(input)?;
            let budget = ZiminBudget {
                max_states: budget_states,
                time_limit: Duration::from_secs(budget_seconds),
            };
            let v = decide(&s, &w, p, budget).map_err(input)?;
            let code = match v.status {
                Status::Confirmed => 0,
                Status::Refuted { .. } => 1,
                Status::Inconclusive { .. } => 2,
            };
            Ok(Outcome::new(code, json!(v)))
        }
        Command::Vword {
            n,
            m,
            h,
            semiring,
            check_square,
            transfer,
            budget_lookups,
        } => {
            let spec = VWordSpec::new(n, m, h).map_err(input)?;
            let budget = VWordBudget {
                max_lookups: budget_lookups,
                ..VWordBudget::default()
            };
            if let Some(t) = transfer {
                let r = transfer_check(t, spec, budget).map_err(input)?;
                let code = match r.transfer {
                    Transfer::Confirmed | Transfer::Vacuous => 0,
                    Transfer::Violated => 1,
                    Transfer::Inconclusive => 2,
                };
                return Ok(Outcome::new(code, json!(r)));
            }
            match semiring {
                Some(name) if check_square || transfer.is_none() => {
                    let s = load_semiring(&name).map_err(input)?;
                    let r = check_v_square(&s, spec, budget).map_err(input)?;
                    Ok(Outcome::new(if r.verdict.holds() { 0 } else { 1 }, json!(r)))
                }
                _ => {
                    let w = v_word(spec, budget).map_err(input)?;
                    Ok(Outcome::new(0, json!({ "spec": spec, "length": w.len(), "word": w.to_string() })))
                }
            }
        }
        Command::Classify { semilattice } => {
            let a = load_semilattice(&semilattice.semilattice).map_err(input)?;
            Ok(Outcome::new(0, json!(classify(&a))))
        }
        Command::Witness {
            target,
            source,
            max_power,
            max_generators,
        } => {
            let (t, s) = (load_semiring(&target).map_err(input)?, load_semiring(&source).map_err(input)?);
            let budget = MembershipBudget {
                max_generators,
                ..MembershipBudget::default()
            };
            let m = variety_membership_witness(&t, &s, max_power, budget).map_err(input)?;
            let code = match &m {
                Membership::Found(_) => 0,
                Membership::NotFound { separator: Some(_), .. } => 1,
                Membership::NotFound { .. } => 2,
            };
            Ok(Outcome::new(code, json!(m)))
        }
        Command::Subgroup { semiring } => {
            let s = load_semiring(&semiring.semiring).map_err(input)?;
            match find_nonabelian_nilpotent_subgroup(&s).map_err(input)? {
                Some(g) => Ok(Outcome::new(0, json!(g))),
                None => Ok(Outcome::new(1, json!({ "semiring": s.name(), "subgroup": null }))),
            }
        }
        Command::Reproduce {
            scope,
            seed,
            text,
            zimin_max_m,
            budget_states,
            budget_seconds,
            budget_lookups,
            hsp_max_power,
        } => {
            let scope: Scope = scope.parse().map_err(input)?;
            let budgets = ReproBudgets {
                zimin_max_m,
                zimin_max_states: budget_states,
                zimin_time_limit_s: budget_seconds,
                vword_max_lookups: budget_lookups,
                hsp_max_power,
                ..ReproBudgets::default()
            };
            let report = reproduce(scope, budgets, seed);
            let code = report.exit_code() as u8;
            if text {
                emit(&report.to_text());
            }
            let mut doc = json!(report);
            if text {
                doc["__quiet"] = json!(true);
            }
            Ok(Outcome::new(code, doc))
        }
    }
}

/// Writes to stdout; a closed pipe truncates the output instead of panicking.
fn emit(text: &str) {
    use std::io::Write;
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        #[cfg(feature = "parallel")]
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
        #[cfg(not(feature = "parallel"))]
        let _ = jobs;
    }
    match run(cli.command) {
        Ok(Outcome { code, mut doc }) => {
            let quiet = doc.as_object_mut().and_then(|o| o.remove("__quiet")).is_some();
            let text = serde_json::to_string_pretty(&doc).expect("serializable");
            if !quiet {
                emit(&format!("{text}\n"));
            }
            if let Some(path) = cli.out {
                if let Err(e) = std::fs::write(&path, format!("{text}\n")) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(3);
                }
            }
            ExitCode::from(code)
        }
        Err((code, e)) => {
            eprintln!("error: {e}");
            ExitCode::from(code)
        }
    }
}
