//! `lei`: command-line front end for signatures, rule files, proof search,
//! interpolant extraction and the brute-force interpolant oracle.
//!
//! Exit status: 0 on success, `Proved` or pass; 1 on `NotProved` or fail;
//! 2 on usage or input errors; 3 when the depth limit was hit.

mod demo;
mod docs;
mod load;

use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use lei_core::calculus::RuleSet;
use lei_core::interpolate::{InterpolationResult, Interpolator};
use lei_core::oracle::find_interpolants;
use lei_core::prover::{Derivation, Prover, SearchConfig, SearchResult, StructuralMode};
use lei_core::syntax::{parse_formula, parse_sequent, Occurrence, Sequent};
use lei_core::Error;

use docs::{to_json, ProveDoc, RuleClassDoc, SignatureDoc};

/// Environment variable holding the default depth limit.
const DEPTH_ENV: &str = "LEI_DEPTH_DEFAULT";
const DEPTH_FALLBACK: usize = 64;

#[derive(Parser)]
#[command(name = "lei", version, about = "Display calculi for lattice-expansion logics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Logic {
    /// Signature: a preset name or an `.lsig` file.
    #[arg(long)]
    sig: String,
    /// Structural rules: a preset name or an `.lrul` file. Defaults to the
    /// preset's own rules when `--sig` names a preset.
    #[arg(long)]
    rules: Option<String>,
    /// Depth limit of proof search (default: $LEI_DEPTH_DEFAULT or 64).
    #[arg(long = "depth")]
    depth: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Structural {
    All,
    None,
}

#[derive(Subcommand)]
enum Command {
    /// Signature files.
    Sig {
        #[command(subcommand)]
        action: SigAction,
    },
    /// Structural rule files.
    Rules {
        #[command(subcommand)]
        action: RulesAction,
    },
    /// Searches for a cut-free derivation.
    Prove {
        #[command(flatten)]
        logic: Logic,
        sequent: String,
        /// Writes the derivation document to this file.
        #[arg(long = "emit")]
        emit_path: Option<String>,
        /// Whether structural rules may be used.
        #[arg(long, value_enum, default_value = "all")]
        structural: Structural,
    },
    /// Extracts and verifies an interpolant (Lyndon at the antecedent by
    /// default).
    Interpolate {
        #[command(flatten)]
        logic: Logic,
        sequent: String,
        /// Occurrence path such as `ante.1.2`.
        #[arg(long, default_value = "ante")]
        occ: String,
        /// Reports the simplified interpolant, verified afresh.
        #[arg(long)]
        simplify: bool,
    },
    /// Checks a candidate interpolant.
    Verify {
        #[command(flatten)]
        logic: Logic,
        sequent: String,
        #[arg(long)]
        gamma: String,
        #[arg(long, default_value = "ante")]
        occ: String,
    },
    /// Lists every interpolant up to a formula depth, one per line.
    Oracle {
        /// Signature: a preset name or an `.lsig` file.
        #[arg(long)]
        sig: String,
        #[arg(long)]
        rules: Option<String>,
        sequent: String,
        /// Maximal depth of candidate formulas.
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value = "ante")]
        occ: String,
    },
    /// Runs the worked examples of a preset and prints pass/fail lines.
    Demo { preset: String },
}

#[derive(Subcommand)]
enum SigAction {
    /// Validates a signature and lists its residual closure.
    Check { file: String },
}

#[derive(Subcommand)]
enum RulesAction {
    /// Reports analyticity and interpolation-safety of every rule.
    Classify {
        file: String,
        /// Signature the rules are read against (default: the matching
        /// preset or a sibling `.lsig` file).
        #[arg(long)]
        sig: Option<String>,
    },
}

/// Why a command did not succeed.
pub enum Failure {
    /// A negative answer: not derivable, verification failed.
    Negative(String),
    /// Malformed input or arguments.
    Input(String),
    DepthExceeded(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CutInDerivation
            | Error::NoHandler(_)
            | Error::SideCondition { .. }
            | Error::InvalidDerivation(_) => Failure::Negative(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<ExitCode, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(Failure::Negative(msg)) => {
            eprintln!("lei: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("lei: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::DepthExceeded(msg)) => {
            eprintln!("lei: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Sig {
            action: SigAction::Check { file },
        } => sig_check(&file),
        Command::Rules {
            action: RulesAction::Classify { file, sig },
        } => rules_classify(&file, sig.as_deref()),
        Command::Prove {
            logic,
            sequent,
            emit_path,
            structural,
        } => prove(&logic, &sequent, emit_path.as_deref(), structural),
        Command::Interpolate {
            logic,
            sequent,
            occ,
            simplify,
        } => interpolate(&logic, &sequent, &occ, simplify),
        Command::Verify {
            logic,
            sequent,
            gamma,
            occ,
        } => verify(&logic, &sequent, &gamma, &occ),
        Command::Oracle {
            sig,
            rules,
            sequent,
            depth,
            occ,
        } => oracle(&sig, rules.as_deref(), &sequent, depth, &occ),
        Command::Demo { preset } => demo::run(&preset),
    }
}

/// Prints a line to stdout. A closed pipe (as in `lei ... | head`) ends
/// the output quietly instead of aborting.
pub fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
}

/// The depth limit from `--depth`, else the environment, else 64.
fn depth_limit(flag: Option<usize>) -> Result<usize, Failure> {
    if let Some(d) = flag {
        return Ok(d);
    }
    match std::env::var(DEPTH_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Input(format!("{DEPTH_ENV} must be a non-negative integer, got `{v}`"))),
        Err(_) => Ok(DEPTH_FALLBACK),
    }
}

fn search_config(flag: Option<usize>) -> Result<SearchConfig, Failure> {
    Ok(SearchConfig::with_depth(depth_limit(flag)?))
}

fn sequent(text: &str, rules: &RuleSet) -> Result<Sequent, Failure> {
    let s = parse_sequent(text, rules.sig())?;
    s.check(rules.sig())?;
    Ok(s)
}

fn occurrence(text: &str, seq: &Sequent) -> Result<Occurrence, Failure> {
    let occ = Occurrence::parse(text)?;
    seq.resolve(&occ)?;
    Ok(occ)
}

/// Proves `goal` or turns the search outcome into a failure.
fn derivation(prover: &mut Prover, goal: &Sequent) -> Result<Derivation, Failure> {
    match prover.prove(goal) {
        SearchResult::Proved(d) => Ok(d),
        SearchResult::NotProved => Err(Failure::Negative(format!("`{goal}` is not derivable"))),
        SearchResult::DepthExceeded => Err(Failure::DepthExceeded(format!(
            "no derivation of `{goal}` within depth {}",
            prover.config().depth_limit
        ))),
    }
}

fn sig_check(file: &str) -> Outcome {
    let sig = load::signature(file)?;
    let doc = SignatureDoc::new(&sig);
    emit(&to_json(&doc));
    Ok(ExitCode::from(if doc.valid { 0 } else { 1 }))
}

fn rules_classify(file: &str, sig: Option<&str>) -> Outcome {
    let sig = match sig {
        Some(s) => load::signature(s)?,
        None => load::companion_signature(file)?,
    };
    let rules = load::user_rules(file, &sig)?;
    let docs: Vec<RuleClassDoc> = rules.iter().map(RuleClassDoc::new).collect();
    emit(&to_json(&docs));
    Ok(ExitCode::SUCCESS)
}

fn prove(logic: &Logic, text: &str, emit_path: Option<&str>, structural: Structural) -> Outcome {
    let rules = load::ruleset(&logic.sig, logic.rules.as_deref())?;
    let goal = sequent(text, &rules)?;
    let mut cfg = search_config(logic.depth)?;
    if let Structural::None = structural {
        cfg.structural = StructuralMode::None;
    }
    let depth_limit = cfg.depth_limit;
    let result = Prover::new(&rules, cfg).prove(&goal);
    let doc = ProveDoc {
        sequent: &goal,
        result: result.label(),
        depth_limit,
        derivation: match &result {
            SearchResult::Proved(d) => Some(d),
            _ => None,
        },
    };
    emit(&to_json(&doc));
    if let (Some(path), SearchResult::Proved(d)) = (emit_path, &result) {
        fs::write(path, d.to_json() + "\n")
            .map_err(|e| Failure::Input(format!("cannot write `{path}`: {e}")))?;
    }
    Ok(ExitCode::from(match result {
        SearchResult::Proved(_) => 0,
        SearchResult::NotProved => 1,
        SearchResult::DepthExceeded => 3,
    }))
}

fn interpolate(logic: &Logic, text: &str, occ: &str, simplify: bool) -> Outcome {
    let rules = load::ruleset(&logic.sig, logic.rules.as_deref())?;
    let goal = sequent(text, &rules)?;
    let occ = occurrence(occ, &goal)?;
    let mut it = Interpolator::new(&rules, search_config(logic.depth)?);
    let d = derivation(it.prover(), &goal)?;
    let mut result = it.maehara(&d, &occ)?;
    if simplify {
        result = simplified(&mut it, result)?;
    }
    for w in &result.warnings {
        eprintln!("lei: warning: {w}");
    }
    emit(&result.to_json());
    Ok(ExitCode::SUCCESS)
}

/// Replaces the interpolant by its simplification and re-verifies it.
fn simplified(it: &mut Interpolator, r: InterpolationResult) -> Result<InterpolationResult, Failure> {
    let gamma = it.simplify(&r.gamma);
    let report = it.verify(&r.sequent, &r.occurrence, &gamma)?;
    match (report.pass, report.side_derivation, report.ctx_derivation) {
        (true, Some(side), Some(ctx)) => Ok(InterpolationResult {
            gamma,
            side_derivation: side,
            ctx_derivation: ctx,
            polarity: report.polarity,
            ..r
        }),
        _ => Err(Failure::Negative(format!(
            "simplified interpolant `{gamma}` failed verification: {}",
            report.failure.unwrap_or_default()
        ))),
    }
}

fn verify(logic: &Logic, text: &str, gamma: &str, occ: &str) -> Outcome {
    let rules = load::ruleset(&logic.sig, logic.rules.as_deref())?;
    let goal = sequent(text, &rules)?;
    let occ = occurrence(occ, &goal)?;
    let gamma = parse_formula(gamma, rules.sig())?;
    let mut it = Interpolator::new(&rules, search_config(logic.depth)?);
    let report = it.verify(&goal, &occ, &gamma)?;
    emit(&report.to_json());
    Ok(ExitCode::from(if report.pass { 0 } else { 1 }))
}

fn oracle(sig: &str, rules: Option<&str>, text: &str, depth: usize, occ: &str) -> Outcome {
    let rules = load::ruleset(sig, rules)?;
    let goal = sequent(text, &rules)?;
    let occ = occurrence(occ, &goal)?;
    let found = find_interpolants(&goal, &occ, depth, &rules, &search_config(None)?)?;
    for f in found {
        emit(&f.to_string());
    }
    Ok(ExitCode::SUCCESS)
}
