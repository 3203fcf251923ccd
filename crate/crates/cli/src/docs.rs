//! JSON documents printed by the subcommands. Field order is the
//! serialization order, which golden files rely on.

use serde::Serialize;

use lei_core::calculus::{classify_safety, validate_analytic, RuleSchema, Safety};
use lei_core::prover::Derivation;
use lei_core::signature::{Connective, Signature};
use lei_core::syntax::Sequent;

#[derive(Serialize)]
pub struct ConnectiveDoc {
    pub name: String,
    pub family: String,
    pub order_type: String,
    pub operational: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual_of: Option<String>,
}

impl ConnectiveDoc {
    fn new(c: &Connective) -> Self {
        ConnectiveDoc {
            name: c.name.clone(),
            family: c.family.to_string(),
            order_type: c.order_type.to_string(),
            operational: c.operational,
            residual_of: c
                .residual_of
                .as_ref()
                .map(|l| format!("{}.{}", l.parent, l.coord)),
        }
    }
}

#[derive(Serialize)]
pub struct SignatureDoc {
    pub valid: bool,
    pub logic: Option<String>,
    pub atoms: Vec<String>,
    pub connectives: Vec<ConnectiveDoc>,
    /// Residuals added by closing the signature under residuation.
    pub added_residuals: Vec<ConnectiveDoc>,
    pub violations: Vec<String>,
}

impl SignatureDoc {
    pub fn new(sig: &Signature) -> Self {
        let violations: Vec<String> = sig.validate().iter().map(|v| v.to_string()).collect();
        let added_residuals = match sig.residual_closure() {
            Ok(closed) => closed
                .connectives()
                .filter(|c| !sig.contains(&c.name))
                .map(ConnectiveDoc::new)
                .collect(),
            Err(_) => Vec::new(),
        };
        SignatureDoc {
            valid: violations.is_empty(),
            logic: sig.logic.clone(),
            atoms: sig.atoms.clone(),
            connectives: sig.connectives().map(ConnectiveDoc::new).collect(),
            added_residuals,
            violations,
        }
    }
}

#[derive(Serialize)]
pub struct RuleClassDoc {
    pub rule: String,
    pub analytic: bool,
    pub special: bool,
    pub interpolation_safe: bool,
    pub classification: Safety,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl RuleClassDoc {
    pub fn new(rule: &RuleSchema) -> Self {
        let safety = classify_safety(rule);
        let notes = match validate_analytic(rule) {
            Ok(v) => v,
            Err(e) => vec![e.to_string()],
        };
        RuleClassDoc {
            rule: rule.name.clone(),
            analytic: safety.is_analytic(),
            special: safety.is_special(),
            interpolation_safe: safety == Safety::InterpolationSafe,
            classification: safety,
            notes,
        }
    }
}

#[derive(Serialize)]
pub struct ProveDoc<'a> {
    pub sequent: &'a Sequent,
    pub result: &'static str,
    pub depth_limit: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derivation: Option<&'a Derivation>,
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("documents serialize")
}
