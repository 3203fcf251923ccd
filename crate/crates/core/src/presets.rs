//! Bundled logics: a signature and a rule file for each.

use crate::calculus::{parse_rules, RuleSchema, RuleSet};
use crate::error::{Error, Result};
use crate::signature::Signature;

pub const NAMES: &[&str] = &["lattice", "k-tense", "fundamental", "tense-fundamental", "lambek"];

const FILES: &[(&str, &str, &str)] = &[
    ("lattice", include_str!("../presets/lattice.lsig"), include_str!("../presets/lattice.lrul")),
    ("k-tense", include_str!("../presets/k-tense.lsig"), include_str!("../presets/k-tense.lrul")),
    (
        "fundamental",
        include_str!("../presets/fundamental.lsig"),
        include_str!("../presets/fundamental.lrul"),
    ),
    (
        "tense-fundamental",
        include_str!("../presets/tense-fundamental.lsig"),
        include_str!("../presets/tense-fundamental.lrul"),
    ),
    ("lambek", include_str!("../presets/lambek.lsig"), include_str!("../presets/lambek.lrul")),
];

fn entry(name: &str) -> Result<&'static (&'static str, &'static str, &'static str)> {
    FILES
        .iter()
        .find(|e| e.0 == name)
        .ok_or_else(|| Error::Signature(format!("unknown preset `{name}` (known: {})", NAMES.join(", "))))
}

pub fn is_preset(name: &str) -> bool {
    NAMES.contains(&name)
}

pub fn signature_text(name: &str) -> Result<&'static str> {
    Ok(entry(name)?.1)
}

pub fn rules_text(name: &str) -> Result<&'static str> {
    Ok(entry(name)?.2)
}

pub fn signature(name: &str) -> Result<Signature> {
    Signature::parse(signature_text(name)?)
}

/// The preset's signature and its structural rules.
pub fn load(name: &str) -> Result<(Signature, Vec<RuleSchema>)> {
    let sig = signature(name)?;
    let rules = parse_rules(rules_text(name)?, &sig)?;
    Ok((sig, rules))
}

/// The full rule set of a preset: built-in rules plus its structural rules.
pub fn ruleset(name: &str) -> Result<RuleSet> {
    let (sig, rules) = load(name)?;
    RuleSet::new(&sig, rules)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{classify_safety, validate_analytic, Safety};

    #[test]
    fn presets_are_valid() {
        for name in NAMES {
            let sig = signature(name).unwrap();
            assert!(sig.validate().is_empty(), "{name}: {:?}", sig.validate());
            assert_eq!(sig.logic.as_deref(), Some(*name));
            let (_, rules) = load(name).unwrap();
            for r in &rules {
                assert!(validate_analytic(r).unwrap().is_empty(), "{name}/{}", r.name);
            }
            ruleset(name).unwrap();
        }
    }

    #[test]
    fn documented_classifications() {
        let expect = [
            ("k-tense", "dia-box", Safety::InterpolationSafe),
            ("k-tense", "four", Safety::InterpolationSafe),
            ("fundamental", "negation", Safety::NotSpecial),
            ("fundamental", "dia-neg", Safety::InterpolationSafe),
            ("tense-fundamental", "negation", Safety::NotSpecial),
            ("tense-fundamental", "dia-neg", Safety::InterpolationSafe),
        ];
        for (preset, rule, safety) in expect {
            let (_, rules) = load(preset).unwrap();
            let r = rules.iter().find(|r| r.name == rule).unwrap();
            assert_eq!(classify_safety(r), safety, "{preset}/{rule}");
        }
    }

    #[test]
    fn unknown_preset() {
        assert!(signature("nope").is_err());
    }
}
