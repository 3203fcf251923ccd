//! Constructive extraction of Maehara/Lyndon interpolants from cut-free
//! derivations, interpolant verification, and an equivalence-preserving
//! simplification pass.

mod extract;
mod simplify;
mod verify;

use std::collections::HashMap;

use serde::{Serialize, Serializer};

use crate::calculus::{classify_safety, RuleKind, RuleSchema, RuleSet, Safety};
use crate::error::{Error, Result};
use crate::prover::{check, Derivation, Prover, SearchConfig};
use crate::signature::{Polarity, Signature};
use crate::syntax::{Formula, Occurrence, Sequent};

pub use simplify::simplify_syntactic;
pub use verify::{PolarityReport, VerifyReport};

/// How the interpolant of an occurrence in a rule's conclusion is obtained
/// from interpolants in its premises.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HandlerKind {
    /// Display postulates, lattice rules, `f_L`/`g_R`, weakenings: the
    /// occurrence is traced into the premises and the results are combined.
    MetavariableCombination,
    /// Axioms and `f_R`/`g_L` at their principal occurrences.
    PrincipalCase,
    /// Interpolation-safe structural rules.
    SafeStructural,
    /// Rules of the shape `X ⊢ Ψ[X] / X ⊢ Y` (and its mirror image) over
    /// signatures whose connectives are all unary.
    FundamentalNegation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuleInterpolationHandler {
    pub rule: String,
    pub kind: HandlerKind,
}

/// For an explosion-shaped rule `X ⊢ Ψ[X] / X ⊢ Y` returns `(kept, fresh)`:
/// the conclusion variable the premise is about and the one it never
/// mentions.
pub(crate) fn explosion_shape(rule: &RuleSchema) -> Option<(String, String)> {
    use crate::calculus::MetaStructure;
    let (MetaStructure::Var(a, _), MetaStructure::Var(b, _)) = (&rule.conclusion.ante, &rule.conclusion.succ) else {
        return None;
    };
    if rule.premises.len() != 1 || a == b {
        return None;
    }
    let vars = rule.premises[0].structure_vars();
    let has = |v: &String| vars.contains(v);
    match (has(a), has(b)) {
        (true, false) if vars.iter().all(|v| v == a) => Some((a.clone(), b.clone())),
        (false, true) if vars.iter().all(|v| v == b) => Some((b.clone(), a.clone())),
        _ => None,
    }
}

/// Picks the interpolation handler for a rule.
pub fn handler(rule: &RuleSchema, sig: &Signature) -> Result<RuleInterpolationHandler> {
    let kind = match &rule.kind {
        RuleKind::Cut => return Err(Error::CutInDerivation),
        RuleKind::Id
        | RuleKind::TopAxiom
        | RuleKind::BotAxiom
        | RuleKind::HatTopAxiom
        | RuleKind::CheckBotAxiom
        | RuleKind::FR(_)
        | RuleKind::GL(_) => HandlerKind::PrincipalCase,
        RuleKind::User => {
            if classify_safety(rule) == Safety::InterpolationSafe {
                HandlerKind::SafeStructural
            } else if explosion_shape(rule).is_some() {
                if !sig.all_unary() {
                    return Err(Error::SideCondition {
                        rule: rule.name.clone(),
                        msg: "the negation-rule construction needs every connective other than \
                              conjunction and disjunction to be unary"
                            .into(),
                    });
                }
                HandlerKind::FundamentalNegation
            } else {
                return Err(Error::NoHandler(rule.name.clone()));
            }
        }
        _ => HandlerKind::MetavariableCombination,
    };
    Ok(RuleInterpolationHandler {
        rule: rule.name.clone(),
        kind,
    })
}

/// Handlers for every rule except Cut, or the first rule without one.
pub fn handlers(rules: &RuleSet) -> Result<Vec<RuleInterpolationHandler>> {
    rules
        .rules()
        .iter()
        .filter(|r| !r.is_cut())
        .map(|r| handler(r, rules.sig()))
        .collect()
}

fn polarity_text<S: Serializer>(p: &Polarity, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(p)
}

/// A verified interpolant for an occurrence `X` of a sequent `Π ⊢ Σ`:
/// `X ⊢^ε γ` and `(Π ⊢ Σ)[γ/X]` are both derivable and the variables of `γ`
/// respect the polarity conditions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InterpolationResult {
    #[serde(skip)]
    pub sequent: Sequent,
    #[serde(skip)]
    pub occurrence: Occurrence,
    pub gamma: Formula,
    #[serde(serialize_with = "polarity_text")]
    pub epsilon: Polarity,
    /// Derivation of `X ⊢^ε γ`.
    #[serde(rename = "left_proof")]
    pub side_derivation: Derivation,
    /// Derivation of `(Π ⊢ Σ)[γ/X]`.
    #[serde(rename = "ctx_proof")]
    pub ctx_derivation: Derivation,
    pub polarity: PolarityReport,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl InterpolationResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("results serialize")
    }
}

/// Extraction and verification over one rule set. The embedded prover keeps
/// its memo tables across calls.
pub struct Interpolator<'a> {
    rules: &'a RuleSet,
    prover: Prover<'a>,
    handlers: HashMap<String, HandlerKind>,
    warnings: Vec<String>,
}

impl<'a> Interpolator<'a> {
    pub fn new(rules: &'a RuleSet, cfg: SearchConfig) -> Self {
        Interpolator {
            rules,
            prover: Prover::new(rules, cfg),
            handlers: HashMap::new(),
            warnings: Vec::new(),
        }
    }

    pub fn rules(&self) -> &'a RuleSet {
        self.rules
    }

    pub fn prover(&mut self) -> &mut Prover<'a> {
        &mut self.prover
    }

    /// The raw interpolant for `occ` in the root of `d`, computed by
    /// recursion on `d` without verification.
    pub fn interpolant(&mut self, d: &Derivation, occ: &Occurrence) -> Result<Formula> {
        if d.uses_rule("Cut") {
            return Err(Error::CutInDerivation);
        }
        let report = check(d, self.rules);
        if !report.valid {
            return Err(Error::InvalidDerivation(format!(
                "at {:?}: {}",
                report.path, report.message
            )));
        }
        d.sequent.resolve(occ)?;
        self.warnings.clear();
        self.extract(d, occ)
    }

    /// Extracts an interpolant for `occ` and certifies it: both witness
    /// sequents are proved and the polarity conditions are checked.
    pub fn maehara(&mut self, d: &Derivation, occ: &Occurrence) -> Result<InterpolationResult> {
        let gamma = self.interpolant(d, occ)?;
        let warnings = std::mem::take(&mut self.warnings);
        let report = self.verify(&d.sequent, occ, &gamma)?;
        let (Some(side), Some(ctx)) = (report.side_derivation, report.ctx_derivation) else {
            return Err(Error::InvalidDerivation(format!(
                "extracted interpolant `{gamma}` for {occ} in `{}` failed verification: {}",
                d.sequent,
                report.failure.unwrap_or_default()
            )));
        };
        if !report.pass {
            return Err(Error::InvalidDerivation(format!(
                "extracted interpolant `{gamma}` for {occ} in `{}` failed verification: {}",
                d.sequent,
                report.failure.unwrap_or_default()
            )));
        }
        Ok(InterpolationResult {
            sequent: d.sequent.clone(),
            occurrence: occ.clone(),
            gamma,
            epsilon: report.epsilon,
            side_derivation: side,
            ctx_derivation: ctx,
            polarity: report.polarity,
            warnings,
        })
    }

    /// The Lyndon interpolant of a formula sequent `φ ⊢ ψ`: the Maehara
    /// interpolant of the whole antecedent.
    pub fn lyndon(&mut self, d: &Derivation) -> Result<InterpolationResult> {
        if d.sequent.as_formulas().is_none() {
            return Err(Error::InvalidOccurrence(format!(
                "`{}` is not a formula sequent",
                d.sequent
            )));
        }
        self.maehara(d, &Occurrence::ante())
    }

    fn handler_kind(&mut self, rule: &RuleSchema) -> Result<HandlerKind> {
        if let Some(k) = self.handlers.get(&rule.name) {
            return Ok(*k);
        }
        let h = handler(rule, self.rules.sig())?;
        self.handlers.insert(rule.name.clone(), h.kind);
        Ok(h.kind)
    }
}

pub fn maehara(
    d: &Derivation,
    occ: &Occurrence,
    rules: &RuleSet,
    cfg: &SearchConfig,
) -> Result<InterpolationResult> {
    Interpolator::new(rules, cfg.clone()).maehara(d, occ)
}

pub fn lyndon(d: &Derivation, rules: &RuleSet, cfg: &SearchConfig) -> Result<InterpolationResult> {
    Interpolator::new(rules, cfg.clone()).lyndon(d)
}

/// Re-proves `X ⊢^ε γ` and `(Π ⊢ Σ)[γ/X]` and re-checks the polarity
/// inclusions.
pub fn verify(
    seq: &Sequent,
    occ: &Occurrence,
    gamma: &Formula,
    rules: &RuleSet,
    cfg: &SearchConfig,
) -> Result<VerifyReport> {
    Interpolator::new(rules, cfg.clone()).verify(seq, occ, gamma)
}

#[cfg(test)]
mod tests;
