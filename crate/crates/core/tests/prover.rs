//! Proof search: soundness against the checker, termination without
//! structural rules, and admissibility of Cut.

use lei_core::generate::Generator;
use lei_core::presets;
use lei_core::prover::{check, Derivation, Prover, SearchConfig, SearchResult, StructuralMode};
use lei_core::syntax::{parse_sequent, Sequent};

const CUT_SUITE: &str = include_str!("fixtures/cut_suite.txt");

#[test]
fn proofs_found_are_checked_derivations() {
    for name in presets::NAMES {
        let rules = presets::ruleset(name).unwrap();
        let mut g = Generator::new(&rules, 3);
        let mut prover = Prover::new(&rules, SearchConfig::with_depth(12));
        let mut proved = 0;
        for _ in 0..150 {
            let goal = g.formula_sequent(2);
            if let SearchResult::Proved(d) = prover.prove(&goal) {
                assert_eq!(d.sequent, goal);
                let report = check(&d, &rules);
                assert!(report.valid, "{name}: {goal}: {report:?}");
                assert!(!d.uses_rule("Cut"));
                proved += 1;
            }
        }
        assert!(proved > 0, "{name}: nothing proved");
    }
}

#[test]
fn structural_goals_are_proved_soundly() {
    for name in ["k-tense", "fundamental", "lambek"] {
        let rules = presets::ruleset(name).unwrap();
        let mut g = Generator::new(&rules, 5);
        let mut prover = Prover::new(&rules, SearchConfig::with_depth(8));
        for _ in 0..60 {
            let goal = g.sequent(2);
            if let SearchResult::Proved(d) = prover.prove(&goal) {
                assert_eq!(d.sequent, goal);
                assert!(check(&d, &rules).valid, "{name}: {goal}");
            }
        }
    }
}

#[test]
fn search_without_structural_rules_terminates() {
    for name in ["lattice", "k-tense"] {
        let rules = presets::ruleset(name).unwrap();
        let cfg = SearchConfig {
            structural: StructuralMode::None,
            ..SearchConfig::default()
        };
        let mut prover = Prover::new(&rules, cfg);
        let mut g = Generator::new(&rules, 17);
        for _ in 0..200 {
            let goal = g.formula_sequent(3);
            assert_ne!(prover.prove(&goal), SearchResult::DepthExceeded, "{name}: {goal}");
        }
    }
}

#[test]
fn reuse_does_not_change_answers() {
    let rules = presets::ruleset("fundamental").unwrap();
    let mut g = Generator::new(&rules, 23);
    let goals: Vec<_> = (0..80).map(|_| g.formula_sequent(2)).collect();
    let mut shared = Prover::new(&rules, SearchConfig::with_depth(10));
    for goal in &goals {
        let fresh = Prover::new(&rules, SearchConfig::with_depth(10)).prove(goal);
        let reused = shared.prove(goal);
        // Failures remembered from other calls can change whether a failed
        // search reports a depth cut, but not whether a proof is found.
        assert_eq!(reused.is_proved(), fresh.is_proved(), "{goal}");
    }
}

/// The suite as `(preset, X ⊢ A, A ⊢ Y)` lines.
fn cut_suite() -> Vec<(String, String, String)> {
    CUT_SUITE
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let parts: Vec<&str> = l.split("::").map(str::trim).collect();
            (parts[0].to_string(), parts[1].to_string(), parts[2].to_string())
        })
        .collect()
}

#[test]
fn cut_is_admissible_on_the_suite() {
    let suite = cut_suite();
    assert_eq!(suite.len(), 10);
    for (preset, left, right) in suite {
        let rules = presets::ruleset(&preset).unwrap();
        let x_a = parse_sequent(&left, rules.sig()).unwrap();
        let a_y = parse_sequent(&right, rules.sig()).unwrap();
        assert_eq!(x_a.succ, a_y.ante, "{preset}: premises must share the cut formula");
        let mut prover = Prover::new(&rules, SearchConfig::default());
        let d1 = prover.prove(&x_a).derivation().unwrap_or_else(|| panic!("{x_a}"));
        let d2 = prover.prove(&a_y).derivation().unwrap_or_else(|| panic!("{a_y}"));
        let goal = Sequent::new(x_a.ante.clone(), a_y.succ.clone());
        let with_cut = Derivation::infer(&rules, "Cut", goal.clone(), vec![d1, d2]).unwrap();
        assert!(check(&with_cut, &rules).valid);
        let cut_free = prover
            .prove(&goal)
            .derivation()
            .unwrap_or_else(|| panic!("{preset}: {goal}"));
        assert!(!cut_free.uses_rule("Cut"));
        assert!(check(&cut_free, &rules).valid);
    }
}
