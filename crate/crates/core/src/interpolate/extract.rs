//! The recursion computing interpolants, one case per kind of rule.

use crate::calculus::{special_forms, Binding, Instantiation, Located, MetaStructure, RuleKind, RuleSchema};
use crate::display;
use crate::error::{Error, Result};
use crate::prover::Derivation;
use crate::signature::Sort;
use crate::syntax::{Formula, Occurrence, Sequent, Structure};

use super::{explosion_shape, HandlerKind, Interpolator};

/// `⋀` (sort `F`) or `⋁` (sort `G`) of the given formulas; the empty
/// combination is `⊤` or `⊥` respectively.
pub(crate) fn combine_all(sort: Sort, parts: Vec<Formula>) -> Formula {
    parts
        .into_iter()
        .reduce(|a, b| Formula::combine(sort, a, b))
        .unwrap_or_else(|| Formula::unit(sort))
}

impl<'a> Interpolator<'a> {
    pub(super) fn extract(&mut self, d: &Derivation, occ: &Occurrence) -> Result<Formula> {
        let rules = self.rules;
        let schema = rules
            .get(&d.rule)
            .ok_or_else(|| Error::InvalidDerivation(format!("unknown rule `{}`", d.rule)))?;
        let kind = self.handler_kind(schema)?;
        if kind == HandlerKind::FundamentalNegation {
            return self.negation_case(d, schema, occ);
        }
        match schema.conclusion.locate(occ) {
            Located::InVar { .. } => self.combination_case(d, schema, occ),
            Located::Pattern if occ.is_root() => {
                // Both side roots of `X ⊢ Y` have the same interpolants; prefer
                // the side that is a metavariable image.
                let other = Occurrence::root(occ.side.other());
                match schema.conclusion.locate(&other) {
                    Located::InVar { rest, .. } if rest.is_empty() => self.combination_case(d, schema, &other),
                    _ => self.principal_case(d, schema),
                }
            }
            Located::Pattern if kind == HandlerKind::SafeStructural => self.safe_case(d, schema, occ),
            Located::Pattern => Err(Error::NoHandler(format!("{} at {occ}", schema.name))),
            Located::Invalid => Err(Error::InvalidOccurrence(format!("{occ} in `{}`", d.sequent))),
        }
    }

    fn sort_at(&self, seq: &Sequent, occ: &Occurrence) -> Result<Sort> {
        seq.sort_at(self.rules.sig(), occ)
    }

    /// The occurrence lies inside a metavariable image: combine the
    /// interpolants of all its copies in the premises.
    fn combination_case(&mut self, d: &Derivation, schema: &RuleSchema, occ: &Occurrence) -> Result<Formula> {
        let sort = self.sort_at(&d.sequent, occ)?;
        let mut parts = Vec::new();
        for (i, o) in schema.correspondence(occ) {
            parts.push(self.extract(&d.children[i], &o)?);
        }
        Ok(combine_all(sort, parts))
    }

    /// Root occurrences of rules whose two sides are both explicit patterns:
    /// axioms and the structure-introducing connective rules.
    fn principal_case(&mut self, d: &Derivation, schema: &RuleSchema) -> Result<Formula> {
        match &schema.kind {
            RuleKind::Id => d
                .sequent
                .ante
                .as_leaf()
                .cloned()
                .ok_or_else(|| Error::InvalidDerivation("Id on a non-formula".into())),
            RuleKind::TopAxiom | RuleKind::HatTopAxiom => Ok(Formula::Top),
            RuleKind::BotAxiom | RuleKind::CheckBotAxiom => Ok(Formula::Bot),
            RuleKind::FR(c) | RuleKind::GL(c) => {
                let c = c.clone();
                let arity = schema.premises.len();
                let mut args = Vec::with_capacity(arity);
                for j in 0..arity {
                    let var = format!("X{}", j + 1);
                    let o = schema.premises[j]
                        .var_occurrences(&var)
                        .into_iter()
                        .next()
                        .expect("each premise of a connective rule mentions its structure variable");
                    args.push(self.extract(&d.children[j], &o)?);
                }
                Ok(Formula::app(c, args))
            }
            _ => Err(Error::NoHandler(schema.name.clone())),
        }
    }

    /// An occurrence on an explicit node of the non-isolated side of an
    /// interpolation-safe rule: the node's pattern with each metavariable
    /// replaced by the combined interpolants of its premise copies and every
    /// structural connective by its logical counterpart.
    fn safe_case(&mut self, d: &Derivation, schema: &RuleSchema, occ: &Occurrence) -> Result<Formula> {
        let safe_on = special_forms(schema)
            .into_iter()
            .find(|f| f.2)
            .map(|f| f.0)
            .ok_or_else(|| Error::NoHandler(schema.name.clone()))?;
        if occ.side == safe_on {
            return Err(Error::NoHandler(format!("{} at {occ}", schema.name)));
        }
        let pattern = schema
            .conclusion
            .side(occ.side)
            .get(&occ.path)
            .ok_or_else(|| Error::InvalidOccurrence(occ.to_string()))?
            .clone();
        let mut vars = Vec::new();
        pattern.structure_vars(&mut vars);
        let mut inst = Instantiation::new();
        for v in vars {
            let MetaStructure::Var(_, sort) = schema
                .conclusion
                .var_occurrences(&v)
                .first()
                .and_then(|o| schema.conclusion.side(o.side).get(&o.path))
                .cloned()
                .expect("variable occurs in the conclusion")
            else {
                unreachable!("variable occurrences point at variables")
            };
            let mut parts = Vec::new();
            for (i, p) in schema.premises.iter().enumerate() {
                for o in p.var_occurrences(&v) {
                    parts.push(self.extract(&d.children[i], &o)?);
                }
            }
            inst.insert(v, Binding::Structure(Structure::leaf(combine_all(sort, parts))));
        }
        let s = pattern
            .instantiate(&inst)
            .expect("all pattern variables are bound");
        self.formulaize(&s, &schema.name)
    }

    /// Replaces structural connectives by logical ones, recording a warning
    /// when some connective has no formula counterpart in the language.
    fn formulaize(&mut self, s: &Structure, rule: &str) -> Result<Formula> {
        let sig = self.rules.sig();
        let f = s.to_formula(sig, true)?;
        if f.check(sig, false).is_err() {
            self.warnings.push(format!(
                "interpolant `{f}` built at rule `{rule}` uses structural-only connectives"
            ));
        }
        Ok(f)
    }

    /// Rules `X ⊢ Ψ[X] / X ⊢ Y`: occurrences in `Y` get `⊤^ε`; for an
    /// occurrence inside `X`, the rule is re-applied with `Y := ⊥̌`, the
    /// occurrence is displayed in `X ⊢ ⊥̌`, and the interpolant is the formula
    /// counterpart of its context. (Mirror image for the other orientation.)
    fn negation_case(&mut self, d: &Derivation, schema: &RuleSchema, occ: &Occurrence) -> Result<Formula> {
        let (kept, fresh) = explosion_shape(schema).expect("handler checked the rule's shape");
        let Located::InVar { var, .. } = schema.conclusion.locate(occ) else {
            return Err(Error::InvalidOccurrence(format!("{occ} in `{}`", d.sequent)));
        };
        if var != kept {
            return self.combination_case(d, schema, occ);
        }
        let fresh_side = schema.conclusion.var_occurrences(&fresh)[0].side;
        let unit = match fresh_side.sort() {
            Sort::F => Structure::HatTop,
            Sort::G => Structure::CheckBot,
        };
        let mut inst = d.instantiation.clone();
        inst.insert(fresh, Binding::Structure(unit));
        let exploded = schema
            .conclusion
            .instantiate(&inst)
            .expect("conclusion variables are bound");
        let shown = display::isolate(&exploded, occ, self.rules)?;
        let sig = self.rules.sig();
        let candidate = shown.context().to_formula(sig, true)?;
        if candidate.check(sig, false).is_ok() {
            return Ok(candidate);
        }
        // The displayed context uses structural-only connectives. The
        // context has no variables, so some constant interpolates; take the
        // first constant candidate that verifies.
        for c in constant_candidates(sig) {
            if self.is_interpolant(&d.sequent, occ, &c)? {
                self.warnings.push(format!(
                    "context formula `{candidate}` at rule `{}` is outside the language; used `{c}`",
                    schema.name
                ));
                return Ok(c);
            }
        }
        Err(Error::SideCondition {
            rule: schema.name.clone(),
            msg: format!("the displayed context `{candidate}` has no formula counterpart"),
        })
    }
}

/// Variable-free formulas of depth at most one over operational connectives.
fn constant_candidates(sig: &crate::signature::Signature) -> Vec<Formula> {
    let mut out = vec![Formula::Bot, Formula::Top];
    for c in sig.connectives().filter(|c| c.operational) {
        for arg in [Formula::Bot, Formula::Top] {
            out.push(Formula::app(&c.name, vec![arg; c.arity]));
        }
    }
    out
}
