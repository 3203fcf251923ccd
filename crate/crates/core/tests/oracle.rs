//! Cross-validation of extraction against the brute-force oracle.

use lei_core::interpolate::Interpolator;
use lei_core::oracle::{find_interpolants, is_found_interpolant};
use lei_core::presets;
use lei_core::prover::{SearchConfig, SearchResult};
use lei_core::syntax::{parse_sequent, Occurrence};

const CASES: &[(&str, &str)] = &[
    ("lattice", "p /\\ q |- p \\/ r"),
    ("lattice", "p /\\ (q /\\ r) |- q \\/ s"),
    ("lattice", "(p \\/ q) /\\ r |- (p \\/ q) \\/ s"),
    ("k-tense", "dia(box(p)) |- box(dia(p))"),
    ("k-tense", "box(p) /\\ box(q) |- box(p) \\/ r"),
    ("fundamental", "(p /\\ neg(p)) |- q"),
    ("fundamental", "dia(neg(p)) |- neg(box(p))"),
    ("fundamental", "p |- neg(neg(p))"),
];

#[test]
fn extracted_interpolants_are_found_by_the_oracle() {
    for (name, text) in CASES {
        let rules = presets::ruleset(name).unwrap();
        let seq = parse_sequent(text, rules.sig()).unwrap();
        let mut it = Interpolator::new(&rules, SearchConfig::default());
        let SearchResult::Proved(d) = it.prover().prove(&seq) else {
            panic!("{name}: {seq} not proved");
        };
        let gamma = it.interpolant(&d, &Occurrence::ante()).unwrap();
        let simple = it.simplify(&gamma);
        assert!(
            is_found_interpolant(&mut it, &seq, &Occurrence::ante(), &simple, 3).unwrap(),
            "{name}: {seq}: {simple}"
        );
        if simple.depth() <= 2 {
            let depth = simple.depth();
            let found = find_interpolants(&seq, &Occurrence::ante(), depth, &rules, &SearchConfig::default()).unwrap();
            assert!(found.contains(&simple), "{name}: {seq}: {simple} not among {found:?}");
        }
    }
}

#[test]
fn oracle_is_empty_exactly_when_nothing_interpolates() {
    let rules = presets::ruleset("lattice").unwrap();
    let cfg = SearchConfig::default();
    let ante = Occurrence::ante();
    let provable = parse_sequent("p /\\ q |- q", rules.sig()).unwrap();
    assert!(!find_interpolants(&provable, &ante, 1, &rules, &cfg).unwrap().is_empty());
    let unprovable = parse_sequent("p |- q", rules.sig()).unwrap();
    assert!(find_interpolants(&unprovable, &ante, 2, &rules, &cfg).unwrap().is_empty());
}
