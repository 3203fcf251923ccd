//! Backward proof search with iterative deepening, loop checking on
//! display-equivalence classes, and memoisation.

use std::collections::BTreeSet;

use rustc_hash::FxHashMap;

use crate::calculus::{Category, RuleSet};
use crate::display::{self, Closure};
use crate::syntax::Sequent;

use super::Derivation;

/// Which user structural rules the search may use.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StructuralMode {
    All,
    None,
    Only(BTreeSet<String>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Maximum number of non-display rule applications along a branch.
    pub depth_limit: usize,
    pub structural: StructuralMode,
    /// Memoise results per display-equivalence class.
    pub memoize: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            depth_limit: 64,
            structural: StructuralMode::All,
            memoize: true,
        }
    }
}

impl SearchConfig {
    pub fn with_depth(depth_limit: usize) -> Self {
        SearchConfig {
            depth_limit: depth_limit.max(1),
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchResult {
    Proved(Derivation),
    /// The search space was exhausted.
    NotProved,
    /// Some branch was cut at the depth limit.
    DepthExceeded,
}

impl SearchResult {
    pub fn is_proved(&self) -> bool {
        matches!(self, SearchResult::Proved(_))
    }

    pub fn derivation(self) -> Option<Derivation> {
        match self {
            SearchResult::Proved(d) => Some(d),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SearchResult::Proved(_) => "Proved",
            SearchResult::NotProved => "NotProved",
            SearchResult::DepthExceeded => "DepthExceeded",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Goals visited, over all rounds.
    pub goals: usize,
    /// Deepening rounds of the last call.
    pub rounds: usize,
}

enum Outcome {
    Proved(Derivation),
    Failed {
        /// Some branch hit the depth bound.
        cut: bool,
        /// Lowest branch index whose class was revisited; results depending
        /// on it are only valid while that ancestor is open.
        loop_min: usize,
    },
}

const NO_LOOP: usize = usize::MAX;

/// A reusable prover. Its memo tables persist across calls; they only record
/// facts that hold independently of the call (proofs found, exhaustive
/// failures, and failures below a given depth), so reuse never changes
/// whether a goal is proved. It can change how a failure is reported: a
/// remembered depth-bounded failure yields `DepthExceeded` where a fresh
/// search might have closed the branch by loop checking, and a remembered
/// exhaustive failure can spare a fresh search its depth cut.
pub struct Prover<'a> {
    rules: &'a RuleSet,
    cfg: SearchConfig,
    /// Rule indices in search order, grouped by category.
    order: Vec<Vec<usize>>,
    success: FxHashMap<Sequent, (Sequent, Derivation)>,
    failure: FxHashMap<Sequent, Option<usize>>,
    stats: SearchStats,
}

impl<'a> Prover<'a> {
    pub fn new(rules: &'a RuleSet, cfg: SearchConfig) -> Self {
        let allowed = |name: &str| match &cfg.structural {
            StructuralMode::All => true,
            StructuralMode::None => false,
            StructuralMode::Only(set) => set.contains(name),
        };
        let order = [
            Category::Axiom,
            Category::Logical,
            Category::Weakening,
            Category::Structural,
        ]
        .iter()
        .map(|cat| {
            rules
                .rules()
                .iter()
                .enumerate()
                .filter(|(_, r)| r.kind.category() == *cat)
                .filter(|(_, r)| *cat != Category::Structural || allowed(&r.name))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
        Prover {
            rules,
            cfg,
            order,
            success: FxHashMap::default(),
            failure: FxHashMap::default(),
            stats: SearchStats::default(),
        }
    }

    pub fn rules(&self) -> &'a RuleSet {
        self.rules
    }

    pub fn config(&self) -> &SearchConfig {
        &self.cfg
    }

    pub fn stats(&self) -> &SearchStats {
        &self.stats
    }

    /// Iterative deepening: the bound starts at 4 and doubles up to the
    /// depth limit. A round without depth cuts is conclusive.
    pub fn prove(&mut self, goal: &Sequent) -> SearchResult {
        let limit = self.cfg.depth_limit.max(1);
        let mut bound = limit.min(4);
        self.stats.rounds = 0;
        loop {
            self.stats.rounds += 1;
            let mut branch = Vec::new();
            match self.solve(goal, bound, &mut branch) {
                Outcome::Proved(d) => return SearchResult::Proved(d),
                Outcome::Failed { cut: false, .. } => return SearchResult::NotProved,
                Outcome::Failed { cut: true, .. } => {
                    if bound >= limit {
                        return SearchResult::DepthExceeded;
                    }
                    bound = (bound * 2).min(limit);
                }
            }
        }
    }

    /// Whether `goal` is provable within the depth limit, answering from
    /// the memo tables when possible.
    pub fn derivable(&mut self, goal: &Sequent) -> bool {
        if self.cfg.memoize {
            let canon = if goal.is_flat() {
                std::borrow::Cow::Borrowed(goal)
            } else {
                std::borrow::Cow::Owned(display::canonical(goal, self.rules))
            };
            if self.success.contains_key(canon.as_ref()) {
                return true;
            }
            if let Some(None) = self.failure.get(canon.as_ref()) {
                return false;
            }
        }
        self.prove(goal).is_proved()
    }

    fn solve(&mut self, goal: &Sequent, remaining: usize, branch: &mut Vec<Sequent>) -> Outcome {
        self.stats.goals += 1;
        let clo: Closure = display::closure(goal, self.rules);
        let canon = clo.members[display::canonical_index(&clo)].clone();
        let memo = self.cfg.memoize;

        if memo {
            if let Some((member, d)) = self.success.get(&canon) {
                let j = clo
                    .members
                    .iter()
                    .position(|m| m == member)
                    .expect("memoised member lies in the class");
                let d = d.clone();
                return Outcome::Proved(self.undisplay(d, &clo, j));
            }
            match self.failure.get(&canon) {
                Some(None) => return Outcome::Failed { cut: false, loop_min: NO_LOOP },
                Some(Some(r)) if remaining <= *r => {
                    return Outcome::Failed { cut: true, loop_min: NO_LOOP }
                }
                _ => {}
            }
        }
        if let Some(i) = branch.iter().position(|b| *b == canon) {
            return Outcome::Failed { cut: false, loop_min: i };
        }

        let my_index = branch.len();
        branch.push(canon.clone());
        let mut cut = false;
        let mut loop_min = NO_LOOP;
        let rules = self.rules;
        for cat in 0..self.order.len() {
            for (j, member) in clo.members.iter().enumerate() {
                for k in 0..self.order[cat].len() {
                    let schema = &rules.rules()[self.order[cat][k]];
                    for m in schema.match_backward(member) {
                        if !m.premises.is_empty() && remaining == 0 {
                            cut = true;
                            continue;
                        }
                        let mut kids = Vec::with_capacity(m.premises.len());
                        let mut failed = false;
                        for p in &m.premises {
                            match self.solve(p, remaining - 1, branch) {
                                Outcome::Proved(d) => kids.push(d),
                                Outcome::Failed { cut: c, loop_min: l } => {
                                    cut |= c;
                                    loop_min = loop_min.min(l);
                                    failed = true;
                                    break;
                                }
                            }
                        }
                        if failed {
                            continue;
                        }
                        let node = Derivation {
                            sequent: member.clone(),
                            rule: schema.name.clone(),
                            instantiation: m.inst,
                            children: kids,
                        };
                        branch.pop();
                        if memo {
                            self.success.insert(canon, (member.clone(), node.clone()));
                        }
                        return Outcome::Proved(self.undisplay(node, &clo, j));
                    }
                }
            }
        }
        branch.pop();
        if loop_min >= my_index {
            loop_min = NO_LOOP;
            if memo {
                let entry = self.failure.entry(canon).or_insert(Some(0));
                *entry = match (*entry, cut) {
                    (_, false) | (None, _) => None,
                    (Some(r), true) => Some(r.max(remaining)),
                };
            }
        }
        Outcome::Failed { cut, loop_min }
    }

    /// Turns a derivation of closure member `j` into one of the class's
    /// start sequent by appending the inverse display steps.
    fn undisplay(&self, d: Derivation, clo: &Closure, j: usize) -> Derivation {
        let names: Vec<String> = clo
            .path_to(j)
            .iter()
            .rev()
            .map(|r| {
                self.rules
                    .get(r)
                    .and_then(|s| s.inverse_name())
                    .expect("closure steps are postulates")
            })
            .collect();
        d.chain(self.rules, &names)
            .expect("inverse postulates replay a closure path")
    }
}

/// Proves `goal` with a fresh prover.
pub fn prove(goal: &Sequent, rules: &RuleSet, cfg: &SearchConfig) -> SearchResult {
    Prover::new(rules, cfg.clone()).prove(goal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use crate::prover::check;
    use crate::syntax::parse_sequent;

    fn run(preset: &str, text: &str) -> SearchResult {
        let rules = presets::ruleset(preset).unwrap();
        let goal = parse_sequent(text, rules.sig()).unwrap();
        let r = prove(&goal, &rules, &SearchConfig::default());
        if let SearchResult::Proved(d) = &r {
            assert_eq!(d.sequent, goal);
            let report = check(d, &rules);
            assert!(report.valid, "{report:?}\n{d}");
        }
        r
    }

    #[test]
    fn identity() {
        let r = run("lattice", "p |- p");
        assert_eq!(r.derivation().unwrap().rule, "Id");
    }

    #[test]
    fn underivable_atoms() {
        assert_eq!(run("lattice", "p |- q"), SearchResult::NotProved);
    }

    #[test]
    fn lattice_laws() {
        for s in [
            "p /\\ q |- q /\\ p",
            "p \\/ q |- q \\/ p",
            "p /\\ (p \\/ q) |- p",
            "p |- p /\\ (p \\/ q)",
            "(p /\\ q) \\/ (p /\\ r) |- p /\\ (q \\/ r)",
            "bot |- p",
            "p |- top",
            "top |- top",
            "p |- top /\\ p",
        ] {
            assert!(run("lattice", s).is_proved(), "{s}");
        }
        // No distributivity.
        assert_eq!(
            run("lattice", "p /\\ (q \\/ r) |- (p /\\ q) \\/ (p /\\ r)"),
            SearchResult::NotProved
        );
    }

    #[test]
    fn contradiction_in_fundamental_logic() {
        let d = run("fundamental", "(p /\\ neg(p)) |- q").derivation().unwrap();
        assert!(d.uses_rule("negation"));
        assert!(run("fundamental", "p |- neg(neg(p))").is_proved());
        assert!(!run("fundamental", "neg(neg(p)) |- p").is_proved());
    }

    #[test]
    fn modal_axioms() {
        assert!(run("k-tense", "dia(box(p)) |- box(dia(p))").is_proved());
        assert!(run("k-tense", "box(p) |- box(box(p))").is_proved());
        assert!(run("k-tense", "dia(blacksquare(p)) |- p").is_proved());
        assert!(run("k-tense", "p |- box(blackdia(p))").is_proved());
        assert!(!run("k-tense", "box(p) |- p").is_proved());
        assert!(run("tense-fundamental", "dia(neg(p)) |- neg(box(p))").is_proved());
        assert!(run("fundamental", "dia(neg(p)) |- neg(box(p))").is_proved());
    }

    #[test]
    fn lambek_residuation() {
        assert!(run("lambek", "fus(rdiv(p, q), q) |- p").is_proved());
        assert!(run("lambek", "fus(q, ldiv(q, p)) |- p").is_proved());
        assert!(!run("lambek", "fus(p, q) |- fus(q, p)").is_proved());
    }

    #[test]
    fn depth_monotone() {
        let rules = presets::ruleset("k-tense").unwrap();
        let goal = parse_sequent("dia(dia(box(p))) |- box(dia(dia(p)))", rules.sig()).unwrap();
        let mut proved_at = None;
        for depth in 1..=12 {
            let r = prove(&goal, &rules, &SearchConfig::with_depth(depth));
            if proved_at.is_some() {
                assert!(r.is_proved(), "lost proof at depth {depth}");
            }
            if r.is_proved() && proved_at.is_none() {
                proved_at = Some(depth);
            }
            if !r.is_proved() {
                assert_ne!(r, SearchResult::NotProved);
            }
        }
        assert!(proved_at.is_some());
    }

    #[test]
    fn structural_rules_can_be_disabled() {
        let rules = presets::ruleset("k-tense").unwrap();
        let goal = parse_sequent("box(p) |- box(box(p))", rules.sig()).unwrap();
        let cfg = SearchConfig {
            structural: StructuralMode::None,
            ..SearchConfig::default()
        };
        assert_eq!(prove(&goal, &rules, &cfg), SearchResult::NotProved);
        let cfg = SearchConfig {
            structural: StructuralMode::Only(["four".to_string()].into()),
            ..SearchConfig::default()
        };
        assert!(prove(&goal, &rules, &cfg).is_proved());
    }

    #[test]
    fn memoisation_does_not_change_results() {
        let rules = presets::ruleset("tense-fundamental").unwrap();
        for text in ["dia(neg(p)) |- neg(box(p))", "p /\\ neg(p) |- q", "neg(p) |- p", "dia(p /\\ q) |- dia(p)"] {
            let goal = parse_sequent(text, rules.sig()).unwrap();
            let a = prove(&goal, &rules, &SearchConfig::with_depth(12));
            let b = prove(
                &goal,
                &rules,
                &SearchConfig {
                    memoize: false,
                    ..SearchConfig::with_depth(12)
                },
            );
            assert_eq!(a.label(), b.label(), "{text}");
        }
    }
}
