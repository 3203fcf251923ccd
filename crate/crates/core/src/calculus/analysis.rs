//! Analyticity and interpolation-safety of structural rules.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::syntax::Side;

use super::{MetaStructure, RuleSchema};

/// Checks that a formula-free rule is analytic: every metavariable occurs
/// exactly once in the conclusion, and every premise metavariable occurs in
/// the conclusion. Returns the list of violations (empty when analytic).
pub fn validate_analytic(rule: &RuleSchema) -> Result<Vec<String>> {
    let all = rule.premises.iter().chain(std::iter::once(&rule.conclusion));
    for s in all {
        if s.ante.contains_formula() || s.succ.contains_formula() {
            return Err(Error::SideCondition {
                rule: rule.name.clone(),
                msg: "structural rules may not contain formulas".into(),
            });
        }
    }
    let mut out = Vec::new();
    let concl = rule.conclusion.structure_vars();
    let mut seen = Vec::new();
    for v in &concl {
        let n = concl.iter().filter(|w| *w == v).count();
        if n > 1 && !seen.contains(v) {
            out.push(format!("{v} occurs {n} times in the conclusion"));
            seen.push(v.clone());
        }
    }
    for (i, p) in rule.premises.iter().enumerate() {
        for v in p.structure_vars() {
            if !concl.contains(&v) && !seen.contains(&v) {
                out.push(format!("{v} occurs in premise {} but not in the conclusion", i + 1));
                seen.push(v);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Safety {
    NotAnalytic,
    NotSpecial,
    Special,
    InterpolationSafe,
}

impl Safety {
    pub fn is_analytic(self) -> bool {
        self >= Safety::NotSpecial
    }

    pub fn is_special(self) -> bool {
        self >= Safety::Special
    }
}

impl fmt::Display for Safety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Safety::NotAnalytic => "not-analytic",
            Safety::NotSpecial => "not-special",
            Safety::Special => "special",
            Safety::InterpolationSafe => "interpolation-safe",
        })
    }
}

fn var_name(m: &MetaStructure) -> Option<&str> {
    match m {
        MetaStructure::Var(v, _) => Some(v),
        _ => None,
    }
}

/// The ways in which `rule` is special: the side carrying the isolated
/// metavariable and its name, together with whether that reading is also
/// interpolation-safe.
pub(crate) fn special_forms(rule: &RuleSchema) -> Vec<(Side, String, bool)> {
    let mut out = Vec::new();
    for side in [Side::Ante, Side::Succ] {
        let Some(iso) = var_name(rule.conclusion.side(side)) else {
            continue;
        };
        let same_everywhere = rule
            .premises
            .iter()
            .all(|p| var_name(p.side(side)) == Some(iso));
        if !same_everywhere {
            continue;
        }
        let others = rule
            .premises
            .iter()
            .chain(std::iter::once(&rule.conclusion))
            .map(|s| s.side(side.other()));
        let absent = others.clone().all(|m| {
            let mut vs = Vec::new();
            m.structure_vars(&mut vs);
            !vs.iter().any(|v| v == iso)
        });
        if !absent {
            continue;
        }
        let safe = rule.premises.iter().all(|p| {
            let mut vs = Vec::new();
            p.side(side.other()).structure_vars(&mut vs);
            vs.len() <= 1
        });
        out.push((side, iso.to_string(), safe));
    }
    out
}

/// Classifies a structural rule. A rule is special when one side is the same
/// bare metavariable in every premise and in the conclusion, and that
/// metavariable does not occur on the other sides; it is interpolation-safe
/// when, in addition, each premise's other side contains at most one
/// occurrence of at most one metavariable.
pub fn classify_safety(rule: &RuleSchema) -> Safety {
    match validate_analytic(rule) {
        Ok(v) if v.is_empty() => {}
        _ => return Safety::NotAnalytic,
    }
    let forms = special_forms(rule);
    if forms.iter().any(|f| f.2) {
        Safety::InterpolationSafe
    } else if !forms.is_empty() {
        Safety::Special
    } else {
        Safety::NotSpecial
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::parse_rules;
    use crate::presets;

    fn rule(text: &str) -> RuleSchema {
        let sig = presets::signature("tense-fundamental").unwrap();
        parse_rules(&format!("rule r\n{text}"), &sig).unwrap().remove(0)
    }

    #[test]
    fn paper_examples() {
        let dia_box = rule("X |- #box(#blacksquare(Y))\n----\nX |- #blacksquare(#box(Y))");
        assert!(validate_analytic(&dia_box).unwrap().is_empty());
        assert_eq!(classify_safety(&dia_box), Safety::InterpolationSafe);
        let dia_neg = rule("X |- #neg(@blackdia(Y))\n----\nX |- #blacksquare(#neg(Y))");
        assert_eq!(classify_safety(&dia_neg), Safety::InterpolationSafe);
        let negation = rule("X |- #neg(X)\n----\nX |- Y");
        assert!(validate_analytic(&negation).unwrap().is_empty());
        assert_eq!(classify_safety(&negation), Safety::NotSpecial);
    }

    #[test]
    fn weakening_as_user_rule_is_safe() {
        let w = rule("@top |- Y\n----\nX |- Y");
        assert_eq!(classify_safety(&w), Safety::InterpolationSafe);
    }

    #[test]
    fn analyticity_violations() {
        let sig = crate::signature::Signature::parse("conn F f 2 ++").unwrap();
        let twice = parse_rules("rule r\n----\n@f(X, X) |- Y", &sig).unwrap().remove(0);
        let v = validate_analytic(&twice).unwrap();
        assert_eq!(v, ["X occurs 2 times in the conclusion"]);
        assert_eq!(classify_safety(&twice), Safety::NotAnalytic);
        let fresh = rule("X |- #box(Z)\n----\nX |- Y");
        assert_eq!(
            validate_analytic(&fresh).unwrap(),
            ["Z occurs in premise 1 but not in the conclusion"]
        );
        let formula = rule("X |- p\n----\nX |- Y");
        assert!(validate_analytic(&formula).is_err());
    }

    #[test]
    fn special_but_not_safe() {
        let sig = crate::signature::Signature::parse("conn G g 2 ++").unwrap();
        let r = parse_rules("rule r\nX |- #g(Y, Z)\n----\nX |- #g(Z, Y)", &sig).unwrap().remove(0);
        assert_eq!(classify_safety(&r), Safety::Special);
    }

    #[test]
    fn classification_chain() {
        for text in [
            "X |- #box(#blacksquare(Y))\n----\nX |- #blacksquare(#box(Y))",
            "X |- #neg(X)\n----\nX |- Y",
            "@top |- Y\n----\nX |- Y",
            "X |- #box(Y)\n----\nX |- #box(#box(Y))",
        ] {
            let r = rule(text);
            let s = classify_safety(&r);
            if s == Safety::InterpolationSafe {
                assert!(s.is_special());
            }
            if s.is_special() {
                assert!(validate_analytic(&r).unwrap().is_empty());
            }
        }
    }
}
