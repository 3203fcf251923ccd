use super::*;
use crate::presets;
use crate::prover::{prove, SearchResult};
use crate::syntax::{parse_formula, parse_sequent, signed_vars_formula, SignedVars};

fn derive(rules: &RuleSet, text: &str) -> Derivation {
    let goal = parse_sequent(text, rules.sig()).unwrap();
    match prove(&goal, rules, &SearchConfig::default()) {
        SearchResult::Proved(d) => d,
        other => panic!("{text}: {}", other.label()),
    }
}

fn lyndon_of(preset: &str, text: &str) -> InterpolationResult {
    let rules = presets::ruleset(preset).unwrap();
    let d = derive(&rules, text);
    lyndon(&d, &rules, &SearchConfig::default()).unwrap()
}

#[test]
fn identity_interpolant() {
    let r = lyndon_of("lattice", "p |- p");
    assert_eq!(r.gamma.to_string(), "p");
}

#[test]
fn axiom_interpolants() {
    assert_eq!(lyndon_of("lattice", "bot |- p").gamma, Formula::Bot);
    assert_eq!(lyndon_of("lattice", "p |- top").gamma, Formula::Top);
}

#[test]
fn shared_variable_interpolant() {
    let rules = presets::ruleset("lattice").unwrap();
    let d = derive(&rules, "p /\\ q |- p \\/ r");
    let mut it = Interpolator::new(&rules, SearchConfig::default());
    let r = it.lyndon(&d).unwrap();
    let simplified = it.simplify(&r.gamma);
    assert_eq!(simplified.to_string(), "p");
    assert!(it.verify(&d.sequent, &Occurrence::ante(), &simplified).unwrap().pass);
}

#[test]
fn fundamental_contradiction_gives_bot() {
    let r = lyndon_of("fundamental", "(p /\\ neg(p)) |- q");
    assert_eq!(r.gamma, Formula::Bot);
    assert!(r.warnings.is_empty());
}

#[test]
fn fundamental_modal_interpolant() {
    for preset in ["fundamental", "tense-fundamental"] {
        let rules = presets::ruleset(preset).unwrap();
        let r = lyndon_of(preset, "dia(neg(p)) |- neg(box(p))");
        let sv = signed_vars_formula(&r.gamma, rules.sig());
        assert!(sv.pos.is_empty(), "{preset}: {}", r.gamma);
        assert!(sv.neg.iter().all(|v| v == "p"));
        assert!(r.gamma.check(rules.sig(), false).is_ok());
    }
}

#[test]
fn modal_rules_use_safe_handler() {
    let r = lyndon_of("k-tense", "dia(box(p)) |- box(dia(p))");
    let sig = presets::signature("k-tense").unwrap();
    assert!(r.gamma.check(&sig, false).is_ok());
    assert!(r.polarity.ok());
    let r = lyndon_of("k-tense", "box(p) |- box(box(p))");
    assert!(r.gamma.check(&sig, false).is_ok());
}

#[test]
fn maehara_at_inner_occurrences() {
    let rules = presets::ruleset("tense-fundamental").unwrap();
    let d = derive(&rules, "dia(neg(p)) |- neg(box(p))");
    let mut it = Interpolator::new(&rules, SearchConfig::default());
    for occ in d.sequent.occurrences() {
        let r = it.maehara(&d, &occ).unwrap();
        assert!(r.polarity.ok(), "{occ}");
    }
    // A structured sequent.
    let d = derive(&rules, "@dia(neg(p)) |- #neg(box(p))");
    for occ in d.sequent.occurrences() {
        it.maehara(&d, &occ).unwrap();
    }
}

#[test]
fn combination_of_two_premises() {
    // and_R: the antecedent's interpolant is the meet of the premises'.
    let rules = presets::ruleset("lattice").unwrap();
    let d = derive(&rules, "p /\\ q |- q /\\ p");
    assert_eq!(d.rule, "and_R");
    let mut it = Interpolator::new(&rules, SearchConfig::default());
    let g = it.interpolant(&d, &Occurrence::ante()).unwrap();
    let g1 = it.interpolant(&d.children[0], &Occurrence::ante()).unwrap();
    let g2 = it.interpolant(&d.children[1], &Occurrence::ante()).unwrap();
    assert_eq!(g, Formula::and(g1, g2));
    // or_L: the succedent's interpolant is the join.
    let d = derive(&rules, "p \\/ q |- q \\/ p");
    assert_eq!(d.rule, "or_L");
    let g = it.interpolant(&d, &Occurrence::succ()).unwrap();
    let g1 = it.interpolant(&d.children[0], &Occurrence::succ()).unwrap();
    let g2 = it.interpolant(&d.children[1], &Occurrence::succ()).unwrap();
    assert_eq!(g, Formula::or(g1, g2));
}

#[test]
fn cut_is_rejected() {
    let rules = presets::ruleset("lattice").unwrap();
    let pp = parse_sequent("p |- p", rules.sig()).unwrap();
    let id = Derivation::infer(&rules, "Id", pp.clone(), vec![]).unwrap();
    let cut = Derivation::infer(&rules, "Cut", pp, vec![id.clone(), id]).unwrap();
    assert_eq!(
        lyndon(&cut, &rules, &SearchConfig::default()).unwrap_err(),
        Error::CutInDerivation
    );
}

#[test]
fn verify_examples() {
    let rules = presets::ruleset("lattice").unwrap();
    let cfg = SearchConfig::default();
    let s = |t: &str| parse_sequent(t, rules.sig()).unwrap();
    let f = |t: &str| parse_formula(t, rules.sig()).unwrap();
    let ante = Occurrence::ante();
    assert!(verify(&s("p /\\ q |- p \\/ r"), &ante, &f("p"), &rules, &cfg).unwrap().pass);
    let r = verify(&s("p |- p"), &ante, &f("q"), &rules, &cfg).unwrap();
    assert!(!r.pass);
    assert!(!r.polarity.positive_ok);
    let r = verify(&s("p |- q"), &ante, &f("top"), &rules, &cfg).unwrap();
    assert!(!r.pass);
    assert!(r.failure.unwrap().contains("top |- q"));
}

#[test]
fn handlers_for_presets() {
    for name in presets::NAMES {
        let rules = presets::ruleset(name).unwrap();
        let hs = handlers(&rules).unwrap();
        assert_eq!(hs.len(), rules.rules().len() - 1);
    }
    let rules = presets::ruleset("fundamental").unwrap();
    let kind = |n: &str| handler(rules.get(n).unwrap(), rules.sig()).unwrap().kind;
    assert_eq!(kind("negation"), HandlerKind::FundamentalNegation);
    assert_eq!(kind("dia-neg"), HandlerKind::SafeStructural);
    assert_eq!(kind("Id"), HandlerKind::PrincipalCase);
    assert_eq!(kind("disp(dia,1)"), HandlerKind::MetavariableCombination);
}

#[test]
fn negation_needs_unary_signature() {
    let sig = crate::signature::Signature::parse("conn F fus 2 ++\nconn G neg 1 -\nselfgalois neg 1").unwrap();
    let rule = crate::calculus::parse_rules("rule negation\nX |- #neg(X)\n----\nX |- Y", &sig)
        .unwrap()
        .remove(0);
    assert!(matches!(handler(&rule, &sig), Err(Error::SideCondition { .. })));
}

#[test]
fn polarity_report_json() {
    let r = lyndon_of("lattice", "p |- p");
    let text = r.to_json();
    let at = |k: &str| text.find(&format!("\"{k}\":")).unwrap();
    let order = ["gamma", "epsilon", "left_proof", "ctx_proof", "polarity"].map(at);
    assert!(order.windows(2).all(|w| w[0] < w[1]), "{text}");
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(json["gamma"], "p");
    assert_eq!(json["epsilon"], "1");
    assert_eq!(r.polarity.gamma, SignedVars::from_lists(&["p"], &[]));
}

#[test]
fn deterministic() {
    let rules = presets::ruleset("tense-fundamental").unwrap();
    let d = derive(&rules, "dia(neg(p) /\\ q) |- neg(box(p)) \\/ dia(q)");
    let a = lyndon(&d, &rules, &SearchConfig::default()).unwrap();
    let b = lyndon(&d, &rules, &SearchConfig::default()).unwrap();
    assert_eq!(a.gamma, b.gamma);
}
