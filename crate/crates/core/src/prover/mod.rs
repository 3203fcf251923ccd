//! Derivations, the derivation checker, and cut-free backward proof search.

mod search;

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::calculus::{Instantiation, RuleSet};
use crate::error::{Error, Result};
use crate::syntax::Sequent;

pub use search::{prove, Prover, SearchConfig, SearchResult, SearchStats, StructuralMode};

/// A rule-labelled proof tree. Occurrence correspondences between a node and
/// its children are recomputed from the rule schema and the instantiation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Derivation {
    pub sequent: Sequent,
    pub rule: String,
    pub instantiation: Instantiation,
    pub children: Vec<Derivation>,
}

impl Derivation {
    /// Builds a node for `rule` concluding `conclusion` from `children`,
    /// computing the instantiation from the conclusion and premises.
    pub fn infer(
        rules: &RuleSet,
        rule: &str,
        conclusion: Sequent,
        children: Vec<Derivation>,
    ) -> Result<Derivation> {
        let schema = rules
            .get(rule)
            .ok_or_else(|| Error::InvalidDerivation(format!("unknown rule `{rule}`")))?;
        if schema.premises.len() != children.len() {
            return Err(Error::InvalidDerivation(format!(
                "`{rule}` takes {} premises, got {}",
                schema.premises.len(),
                children.len()
            )));
        }
        let mut inst = Instantiation::new();
        let mut ok = schema.conclusion.matches(&conclusion, &mut inst);
        for (p, c) in schema.premises.iter().zip(&children) {
            ok = ok && p.matches(&c.sequent, &mut inst);
        }
        if !ok {
            let prem: Vec<String> = children.iter().map(|c| c.sequent.to_string()).collect();
            return Err(Error::InvalidDerivation(format!(
                "`{rule}` does not derive `{conclusion}` from [{}]",
                prem.join(" ; ")
            )));
        }
        Ok(Derivation {
            sequent: conclusion,
            rule: rule.to_string(),
            instantiation: inst,
            children,
        })
    }

    /// Applies a rule whose conclusion is determined by its premises.
    pub fn forward(rules: &RuleSet, rule: &str, children: Vec<Derivation>) -> Result<Derivation> {
        let schema = rules
            .get(rule)
            .ok_or_else(|| Error::InvalidDerivation(format!("unknown rule `{rule}`")))?;
        let roots: Vec<Sequent> = children.iter().map(|c| c.sequent.clone()).collect();
        let (inst, sequent) = schema.apply_forward(&roots).ok_or_else(|| {
            let prem: Vec<String> = roots.iter().map(|s| s.to_string()).collect();
            Error::InvalidDerivation(format!("`{rule}` does not apply to [{}]", prem.join(" ; ")))
        })?;
        Ok(Derivation {
            sequent,
            rule: rule.to_string(),
            instantiation: inst,
            children,
        })
    }

    /// Extends `self` by a chain of single-premise rules applied forwards.
    pub fn chain(self, rules: &RuleSet, names: &[String]) -> Result<Derivation> {
        let mut d = self;
        for n in names {
            d = Derivation::forward(rules, n, vec![d])?;
        }
        Ok(d)
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Derivation::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.children.iter().map(Derivation::height).max().unwrap_or(0)
    }

    pub fn rules_used(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_rules(&mut out);
        out
    }

    fn collect_rules(&self, out: &mut BTreeSet<String>) {
        out.insert(self.rule.clone());
        for c in &self.children {
            c.collect_rules(out);
        }
    }

    pub fn uses_rule(&self, rule: &str) -> bool {
        self.rule == rule || self.children.iter().any(|c| c.uses_rule(rule))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("derivations serialize")
    }

    fn fmt_tree(&self, f: &mut fmt::Formatter<'_>, indent: usize) -> fmt::Result {
        writeln!(f, "{:indent$}{}   [{}]", "", self.sequent, self.rule, indent = indent)?;
        for c in &self.children {
            c.fmt_tree(f, indent + 2)?;
        }
        Ok(())
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_tree(f, 0)
    }
}

/// Outcome of [`check`]: either valid, or the first violation found in
/// pre-order, located by its child-index path from the root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub valid: bool,
    pub path: Vec<usize>,
    pub message: String,
}

impl CheckReport {
    fn ok() -> Self {
        CheckReport {
            valid: true,
            path: vec![],
            message: "valid".into(),
        }
    }
}

/// Verifies that every node is a correct instance of its rule under the
/// recorded instantiation (Cut included) and that every sequent is
/// well-sorted.
pub fn check(d: &Derivation, rules: &RuleSet) -> CheckReport {
    let mut path = Vec::new();
    match check_node(d, rules, &mut path) {
        Ok(()) => CheckReport::ok(),
        Err(message) => CheckReport {
            valid: false,
            path,
            message,
        },
    }
}

fn check_node(d: &Derivation, rules: &RuleSet, path: &mut Vec<usize>) -> std::result::Result<(), String> {
    let schema = rules
        .get(&d.rule)
        .ok_or_else(|| format!("unknown rule `{}`", d.rule))?;
    d.sequent
        .check(rules.sig())
        .map_err(|e| format!("`{}` is ill-formed: {e}", d.sequent))?;
    if schema.premises.len() != d.children.len() {
        return Err(format!(
            "`{}` takes {} premises, node has {}",
            d.rule,
            schema.premises.len(),
            d.children.len()
        ));
    }
    let mut vars: BTreeSet<String> = schema.conclusion.all_vars().into_iter().collect();
    for p in &schema.premises {
        vars.extend(p.all_vars());
    }
    let bound: BTreeSet<String> = d.instantiation.keys().cloned().collect();
    if vars != bound {
        return Err(format!(
            "instantiation binds {{{}}}, rule `{}` has metavariables {{{}}}",
            bound.into_iter().collect::<Vec<_>>().join(", "),
            d.rule,
            vars.into_iter().collect::<Vec<_>>().join(", ")
        ));
    }
    match schema.conclusion.instantiate(&d.instantiation) {
        Some(s) if s == d.sequent => {}
        Some(s) => {
            return Err(format!(
                "instantiated conclusion `{s}` differs from `{}`",
                d.sequent
            ))
        }
        None => return Err("instantiation does not fit the conclusion".into()),
    }
    for (i, (p, c)) in schema.premises.iter().zip(&d.children).enumerate() {
        match p.instantiate(&d.instantiation) {
            Some(s) if s == c.sequent => {}
            Some(s) => {
                return Err(format!(
                    "premise {} should be `{s}`, child proves `{}`",
                    i + 1,
                    c.sequent
                ))
            }
            None => return Err(format!("instantiation does not fit premise {}", i + 1)),
        }
    }
    for (i, c) in d.children.iter().enumerate() {
        path.push(i);
        check_node(c, rules, path)?;
        path.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::Binding;
    use crate::presets;
    use crate::syntax::{parse_sequent, Formula, Structure};

    #[test]
    fn corrupted_instantiation_is_reported() {
        let rules = presets::ruleset("lattice").unwrap();
        let goal = parse_sequent("p /\\ q |- p", rules.sig()).unwrap();
        let SearchResult::Proved(mut d) = prove(&goal, &rules, &SearchConfig::default()) else {
            panic!("not proved");
        };
        assert!(check(&d, &rules).valid);
        d.children[0]
            .instantiation
            .insert("p".into(), Binding::Formula(Formula::atom("q")));
        let report = check(&d, &rules);
        assert!(!report.valid);
        assert_eq!(report.path, [0]);
    }

    #[test]
    fn checker_admits_cut() {
        let rules = presets::ruleset("lattice").unwrap();
        let pp = parse_sequent("p |- p", rules.sig()).unwrap();
        let id = Derivation::infer(&rules, "Id", pp.clone(), vec![]).unwrap();
        let cut = Derivation::infer(&rules, "Cut", pp, vec![id.clone(), id]).unwrap();
        assert_eq!(
            cut.instantiation.get("A"),
            Some(&Binding::Formula(Formula::atom("p")))
        );
        assert!(check(&cut, &rules).valid);
    }

    #[test]
    fn wrong_children_are_rejected() {
        let rules = presets::ruleset("lattice").unwrap();
        let pp = parse_sequent("p |- p", rules.sig()).unwrap();
        let id = Derivation::infer(&rules, "Id", pp, vec![]).unwrap();
        let goal = parse_sequent("p |- q", rules.sig()).unwrap();
        assert!(Derivation::infer(&rules, "and_L1", goal, vec![id.clone()]).is_err());
        let mut bad = id;
        bad.sequent = Sequent::new(
            Structure::Leaf(Formula::atom("p")),
            Structure::Leaf(Formula::atom("q")),
        );
        assert!(!check(&bad, &rules).valid);
    }

    #[test]
    fn json_shape() {
        let rules = presets::ruleset("lattice").unwrap();
        let pp = parse_sequent("p |- p", rules.sig()).unwrap();
        let id = Derivation::infer(&rules, "Id", pp, vec![]).unwrap();
        assert_eq!(
            serde_json::to_string(&id).unwrap(),
            r#"{"sequent":"p |- p","rule":"Id","instantiation":{"p":"p"},"children":[]}"#
        );
    }
}
