//! `lei demo <preset>`: the worked examples of each preset logic, printed as
//! one pass/fail line per check.

use std::collections::BTreeSet;
use std::process::ExitCode;

use lei_core::calculus::{classify_safety, RuleSet, Safety};
use lei_core::interpolate::Interpolator;
use lei_core::oracle::find_interpolants;
use lei_core::presets;
use lei_core::prover::{SearchConfig, SearchResult};
use lei_core::signature::{residual_order_type, Connective, OrderType, Sort};
use lei_core::syntax::{parse_sequent, Formula, Occurrence, Sequent};

use crate::{emit, Failure, Outcome};

enum Check {
    /// Proof search ends with the given label.
    Prove(&'static str, &'static str),
    /// A rule of the preset has the given classification.
    Classify(&'static str, Safety),
    /// Lyndon extraction at the antecedent passes verification; optional
    /// expectations on the raw and simplified interpolant and its signed
    /// variables.
    Interpolate {
        sequent: &'static str,
        gamma: Option<&'static str>,
        simplified: Option<&'static str>,
        pos_within: Option<&'static [&'static str]>,
        neg_within: Option<&'static [&'static str]>,
    },
    /// The oracle at the antecedent contains and excludes the given
    /// formulas; `exact` requires the set to be exactly `contains`.
    Oracle {
        sequent: &'static str,
        depth: usize,
        contains: &'static [&'static str],
        excludes: &'static [&'static str],
        exact: bool,
    },
    /// Residual order types of `f` with ε=(1,∂) and `g` with ε=(∂,1).
    ResidualArithmetic,
}

fn interpolate(sequent: &'static str) -> Check {
    Check::Interpolate {
        sequent,
        gamma: None,
        simplified: None,
        pos_within: None,
        neg_within: None,
    }
}

fn checks(preset: &str) -> Vec<Check> {
    use Check::*;
    match preset {
        "lattice" => vec![
            Prove("p /\\ q |- q /\\ p", "Proved"),
            Prove("p |- q", "NotProved"),
            Prove("p /\\ (q \\/ r) |- (p /\\ q) \\/ (p /\\ r)", "NotProved"),
            Interpolate {
                sequent: "p /\\ q |- p \\/ r",
                gamma: None,
                simplified: Some("p"),
                pos_within: Some(&["p"]),
                neg_within: Some(&[]),
            },
            Oracle {
                sequent: "p /\\ q |- p \\/ r",
                depth: 1,
                contains: &["p"],
                excludes: &["q", "r"],
                exact: false,
            },
            Oracle {
                sequent: "p |- p",
                depth: 0,
                contains: &["p"],
                excludes: &[],
                exact: true,
            },
        ],
        "k-tense" => vec![
            Classify("dia-box", Safety::InterpolationSafe),
            Classify("four", Safety::InterpolationSafe),
            Prove("dia(box(p)) |- box(dia(p))", "Proved"),
            Prove("box(p) |- box(box(p))", "Proved"),
            Prove("box(p) |- p", "NotProved"),
            interpolate("dia(box(p)) |- box(dia(p))"),
            interpolate("box(p) /\\ box(q) |- box(box(p)) \\/ r"),
        ],
        "fundamental" | "tense-fundamental" => vec![
            Classify("negation", Safety::NotSpecial),
            Classify("dia-neg", Safety::InterpolationSafe),
            Prove("p |- neg(neg(p))", "Proved"),
            Prove("neg(neg(p)) |- p", "NotProved"),
            Interpolate {
                sequent: "(p /\\ neg(p)) |- q",
                gamma: Some("bot"),
                simplified: Some("bot"),
                pos_within: Some(&[]),
                neg_within: Some(&[]),
            },
            Interpolate {
                sequent: "dia(neg(p)) |- neg(box(p))",
                gamma: None,
                simplified: None,
                pos_within: Some(&[]),
                neg_within: Some(&["p"]),
            },
            Oracle {
                sequent: "(p /\\ neg(p)) |- q",
                depth: 0,
                contains: &["bot"],
                excludes: &[],
                exact: true,
            },
        ],
        "lambek" => vec![
            ResidualArithmetic,
            Prove("fus(rdiv(p, q), q) |- p", "Proved"),
            Prove("fus(q, ldiv(q, p)) |- p", "Proved"),
            Prove("fus(p, q) |- fus(q, p)", "NotProved"),
            interpolate("fus(rdiv(p, q), q) |- p"),
        ],
        _ => Vec::new(),
    }
}

/// Outcome of one check: the line's subject, the observation, and whether
/// it met the expectation.
struct Line {
    kind: &'static str,
    subject: String,
    detail: String,
    pass: bool,
}

pub fn run(preset: &str) -> Outcome {
    if !presets::is_preset(preset) {
        return Err(Failure::Input(format!(
            "unknown preset `{preset}` (known: {})",
            presets::NAMES.join(", ")
        )));
    }
    let rules = presets::ruleset(preset)?;
    let mut it = Interpolator::new(&rules, SearchConfig::default());
    let mut passed = 0;
    let checks = checks(preset);
    for c in &checks {
        let line = run_check(c, &rules, &mut it)?;
        emit(&format!(
            "{}  {:<11} {}  =>  {}",
            if line.pass { "pass" } else { "FAIL" },
            line.kind,
            line.subject,
            line.detail
        ));
        passed += usize::from(line.pass);
    }
    emit(&format!("{preset}: {passed}/{} checks passed", checks.len()));
    Ok(ExitCode::from(if passed == checks.len() { 0 } else { 1 }))
}

fn seq(text: &str, rules: &RuleSet) -> Result<Sequent, Failure> {
    Ok(parse_sequent(text, rules.sig())?)
}

fn set_text(s: &BTreeSet<String>) -> String {
    format!("{{{}}}", s.iter().cloned().collect::<Vec<_>>().join(", "))
}

fn within(s: &BTreeSet<String>, allowed: Option<&[&str]>) -> bool {
    allowed.is_none_or(|a| s.iter().all(|v| a.contains(&v.as_str())))
}

fn run_check(c: &Check, rules: &RuleSet, it: &mut Interpolator) -> Result<Line, Failure> {
    Ok(match c {
        Check::Prove(text, expected) => {
            let goal = seq(text, rules)?;
            let got = it.prover().prove(&goal);
            Line {
                kind: "prove",
                subject: goal.to_string(),
                detail: got.label().to_string(),
                pass: got.label() == *expected,
            }
        }
        Check::Classify(name, expected) => {
            let got = rules
                .get(name)
                .map(classify_safety)
                .ok_or_else(|| Failure::Input(format!("preset has no rule `{name}`")))?;
            Line {
                kind: "classify",
                subject: name.to_string(),
                detail: got.to_string(),
                pass: got == *expected,
            }
        }
        Check::Interpolate {
            sequent,
            gamma,
            simplified,
            pos_within,
            neg_within,
        } => {
            let goal = seq(sequent, rules)?;
            let subject = goal.to_string();
            let d = match it.prover().prove(&goal) {
                SearchResult::Proved(d) => d,
                other => {
                    return Ok(Line {
                        kind: "interpolate",
                        subject,
                        detail: other.label().to_string(),
                        pass: false,
                    })
                }
            };
            let r = match it.lyndon(&d) {
                Ok(r) => r,
                Err(e) => {
                    return Ok(Line {
                        kind: "interpolate",
                        subject,
                        detail: e.to_string(),
                        pass: false,
                    })
                }
            };
            let simple = it.simplify(&r.gamma);
            let simple_ok = it.verify(&goal, &Occurrence::ante(), &simple)?.pass;
            let operational = r.gamma.check(rules.sig(), false).is_ok();
            let vars = &r.polarity.gamma;
            let pass = gamma.is_none_or(|g| r.gamma.to_string() == g)
                && simplified.is_none_or(|g| simple.to_string() == g)
                && within(&vars.pos, *pos_within)
                && within(&vars.neg, *neg_within)
                && simple_ok
                && operational
                && r.warnings.is_empty();
            Line {
                kind: "interpolate",
                subject,
                detail: format!(
                    "gamma = {}, simplified = {}, Var+ = {}, Var- = {}, verified",
                    r.gamma,
                    simple,
                    set_text(&vars.pos),
                    set_text(&vars.neg)
                ),
                pass,
            }
        }
        Check::Oracle {
            sequent,
            depth,
            contains,
            excludes,
            exact,
        } => {
            let goal = seq(sequent, rules)?;
            let found: Vec<Formula> =
                find_interpolants(&goal, &Occurrence::ante(), *depth, rules, it.prover().config())?;
            let texts: Vec<String> = found.iter().map(|f| f.to_string()).collect();
            let has = |t: &&str| texts.iter().any(|x| x == t);
            let pass = contains.iter().all(&has)
                && !excludes.iter().any(has)
                && (!exact || texts.len() == contains.len());
            let shown = if texts.len() <= 8 {
                format!("{{{}}}", texts.join(", "))
            } else {
                format!("{} candidates", texts.len())
            };
            let mut detail = format!("depth {depth}: {shown}");
            if !contains.is_empty() && !*exact {
                detail += &format!("; contains {}", contains.join(", "));
            }
            if !excludes.is_empty() {
                detail += &format!("; excludes {}", excludes.join(", "));
            }
            Line {
                kind: "oracle",
                subject: goal.to_string(),
                detail,
                pass,
            }
        }
        Check::ResidualArithmetic => {
            let f = Connective::new("f", Sort::F, OrderType::parse("+-")?);
            let g = Connective::new("g", Sort::G, OrderType::parse("-+")?);
            let mut got = Vec::new();
            for c in [&f, &g] {
                for coord in 1..=2 {
                    got.push(residual_order_type(c, coord)?.1.to_string());
                }
            }
            let expected = ["(1,1)", "(1,∂)", "(∂,1)", "(1,1)"];
            Line {
                kind: "residuals",
                subject: "f (1,∂), g (∂,1)".into(),
                detail: got.join(" "),
                pass: got == expected,
            }
        }
    })
}
