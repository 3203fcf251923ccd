//! Independent certification of a candidate interpolant.

use serde::Serialize;

use crate::error::Result;
use crate::prover::{Derivation, SearchResult};
use crate::signature::{Polarity, Sort};
use crate::syntax::{context_vars, signed_vars_formula, signed_vars_structure, Formula, Occurrence, Sequent, SignedVars, Structure};

use super::Interpolator;

/// Signed variables of the interpolant, the occurrence and its context,
/// with the two inclusion verdicts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolarityReport {
    pub gamma: SignedVars,
    pub occurrence: SignedVars,
    pub context: SignedVars,
    pub positive_ok: bool,
    pub negative_ok: bool,
}

impl PolarityReport {
    pub fn new(gamma: SignedVars, occurrence: SignedVars, context: SignedVars) -> Self {
        let allowed = occurrence.intersect(&context);
        let positive_ok = gamma.pos.is_subset(&allowed.pos);
        let negative_ok = gamma.neg.is_subset(&allowed.neg);
        PolarityReport {
            gamma,
            occurrence,
            context,
            positive_ok,
            negative_ok,
        }
    }

    pub fn ok(&self) -> bool {
        self.positive_ok && self.negative_ok
    }

    /// Variables of `γ` that violate an inclusion, as `(sign, names)`.
    fn violations(&self) -> Vec<String> {
        let allowed = self.occurrence.intersect(&self.context);
        let mut out = Vec::new();
        let bad: Vec<&String> = self.gamma.pos.difference(&allowed.pos).collect();
        if !bad.is_empty() {
            out.push(format!("Var+ of gamma not allowed: {}", join(&bad)));
        }
        let bad: Vec<&String> = self.gamma.neg.difference(&allowed.neg).collect();
        if !bad.is_empty() {
            out.push(format!("Var- of gamma not allowed: {}", join(&bad)));
        }
        out
    }
}

fn join(v: &[&String]) -> String {
    v.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", ")
}

/// Outcome of checking a candidate interpolant. `failure` names the first
/// failing component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub pass: bool,
    pub gamma: Formula,
    #[serde(serialize_with = "super::polarity_text")]
    pub epsilon: Polarity,
    pub in_language: bool,
    pub side_sequent: Sequent,
    pub side_result: String,
    pub ctx_sequent: Sequent,
    pub ctx_result: String,
    pub polarity: PolarityReport,
    pub failure: Option<String>,
    #[serde(skip)]
    pub side_derivation: Option<Derivation>,
    #[serde(skip)]
    pub ctx_derivation: Option<Derivation>,
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// `X ⊢ γ` for an antecedent-sort occurrence, `γ ⊢ X` otherwise.
pub(crate) fn side_sequent(x: &Structure, sort: Sort, gamma: &Formula) -> Sequent {
    let g = Structure::leaf(gamma.clone());
    match sort {
        Sort::F => Sequent::new(x.clone(), g),
        Sort::G => Sequent::new(g, x.clone()),
    }
}

impl<'a> Interpolator<'a> {
    /// Checks that `gamma` interpolates `occ` in `seq`: it is a formula of
    /// the language, `X ⊢^ε γ` and `seq[γ/X]` are provable, and its signed
    /// variables are shared between `X` and its context.
    pub fn verify(&mut self, seq: &Sequent, occ: &Occurrence, gamma: &Formula) -> Result<VerifyReport> {
        let sig = self.rules.sig();
        let x = seq.resolve(occ)?.clone();
        let sort = seq.sort_at(sig, occ)?;
        let in_language = gamma.check(sig, false).is_ok();
        let side = side_sequent(&x, sort, gamma);
        let ctx = seq.replace(occ, Structure::leaf(gamma.clone()));
        let (side_result, side_derivation) = self.attempt(&side, in_language);
        let (ctx_result, ctx_derivation) = self.attempt(&ctx, in_language);
        let polarity = PolarityReport::new(
            signed_vars_formula(gamma, sig),
            signed_vars_structure(&x, sig),
            context_vars(seq, occ, sig)?,
        );
        let failure = if !in_language {
            Some(format!("`{gamma}` is not a formula of the language"))
        } else if side_derivation.is_none() {
            Some(format!("`{side}` not derivable ({side_result})"))
        } else if ctx_derivation.is_none() {
            Some(format!("`{ctx}` not derivable ({ctx_result})"))
        } else if !polarity.ok() {
            Some(format!("polarity inclusion: {}", polarity.violations().join("; ")))
        } else {
            None
        };
        Ok(VerifyReport {
            pass: failure.is_none(),
            gamma: gamma.clone(),
            epsilon: sort.epsilon(),
            in_language,
            side_sequent: side,
            side_result,
            ctx_sequent: ctx,
            ctx_result,
            polarity,
            failure,
            side_derivation,
            ctx_derivation,
        })
    }

    /// The verdict of [`Interpolator::verify`] without building the report
    /// or keeping derivations.
    pub fn is_interpolant(&mut self, seq: &Sequent, occ: &Occurrence, gamma: &Formula) -> Result<bool> {
        let sig = self.rules.sig();
        let x = seq.resolve(occ)?;
        let sort = seq.sort_at(sig, occ)?;
        if gamma.check(sig, false).is_err() {
            return Ok(false);
        }
        let polarity = PolarityReport::new(
            signed_vars_formula(gamma, sig),
            signed_vars_structure(x, sig),
            context_vars(seq, occ, sig)?,
        );
        if !polarity.ok() {
            return Ok(false);
        }
        let side = side_sequent(x, sort, gamma);
        if !self.prover.derivable(&side) {
            return Ok(false);
        }
        let ctx = seq.replace(occ, Structure::leaf(gamma.clone()));
        Ok(self.prover.derivable(&ctx))
    }

    fn attempt(&mut self, goal: &Sequent, in_language: bool) -> (String, Option<Derivation>) {
        if !in_language {
            return ("skipped".into(), None);
        }
        let r = self.prover.prove(goal);
        let label = r.label().to_string();
        match r {
            SearchResult::Proved(d) => (label, Some(d)),
            _ => (label, None),
        }
    }
}
