//! Display postulates as a rewriting system: one-step neighbours, display
//! equivalence classes, canonical representatives, and isolation of a
//! substructure as a whole side of a display-equivalent sequent.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::calculus::{Located, RuleSet};
use crate::error::{Error, Result};
use crate::signature::Polarity;
use crate::syntax::{Occurrence, Sequent, Side, Structure};

/// One application of a display postulate, read forwards: the rule's premise
/// is the source sequent and its conclusion the target.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DisplayStep {
    pub rule: String,
}

/// Every sequent reachable by one postulate application, in rule order,
/// without duplicates.
pub fn neighbors(seq: &Sequent, rules: &RuleSet) -> Vec<(Sequent, DisplayStep)> {
    let mut out: Vec<(Sequent, DisplayStep)> = Vec::new();
    if seq.is_flat() {
        return out;
    }
    for r in rules.display_rules() {
        if let Some((_, t)) = r.apply_forward(std::slice::from_ref(seq)) {
            if t != *seq && !out.iter().any(|(u, _)| *u == t) {
                out.push((
                    t,
                    DisplayStep {
                        rule: r.name.clone(),
                    },
                ));
            }
        }
    }
    out
}

/// A display-equivalence class explored breadth-first from `members[0]`.
#[derive(Clone, Debug)]
pub struct Closure {
    pub members: Vec<Sequent>,
    parent: Vec<Option<(usize, String)>>,
}

impl Closure {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, s: &Sequent) -> bool {
        self.members.contains(s)
    }

    /// Forward rule names leading from the start sequent to member `i`.
    pub fn path_to(&self, mut i: usize) -> Vec<String> {
        let mut out = Vec::new();
        while let Some((p, rule)) = &self.parent[i] {
            out.push(rule.clone());
            i = *p;
        }
        out.reverse();
        out
    }
}

pub fn closure(seq: &Sequent, rules: &RuleSet) -> Closure {
    let mut members = vec![seq.clone()];
    let mut parent = vec![None];
    if seq.is_flat() {
        return Closure { members, parent };
    }
    let mut seen: HashMap<Sequent, usize> = HashMap::new();
    seen.insert(seq.clone(), 0);
    let mut i = 0;
    while i < members.len() {
        let cur = members[i].clone();
        for (t, step) in neighbors(&cur, rules) {
            if !seen.contains_key(&t) {
                seen.insert(t.clone(), members.len());
                members.push(t);
                parent.push(Some((i, step.rule)));
            }
        }
        i += 1;
    }
    Closure { members, parent }
}

/// Index of the least printed member.
pub fn canonical_index(c: &Closure) -> usize {
    if c.members.len() == 1 {
        return 0;
    }
    let mut best = 0;
    let mut best_text = c.members[0].to_string();
    for (i, m) in c.members.iter().enumerate().skip(1) {
        let t = m.to_string();
        if t < best_text {
            best = i;
            best_text = t;
        }
    }
    best
}

/// The least printed member of the display-equivalence class of `seq`.
pub fn canonical(seq: &Sequent, rules: &RuleSet) -> Sequent {
    let c = closure(seq, rules);
    c.members[canonical_index(&c)].clone()
}

/// A sequent in which a chosen substructure is a whole side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisplayedForm {
    pub original: Sequent,
    pub sequent: Sequent,
    /// The side holding the isolated substructure.
    pub side: Side,
    /// Forward steps from `original` to `sequent`.
    pub steps: Vec<DisplayStep>,
}

impl DisplayedForm {
    /// `1` when the substructure is displayed as the antecedent, `∂` when it
    /// is the succedent.
    pub fn epsilon(&self) -> Polarity {
        match self.side {
            Side::Ante => Polarity::Co,
            Side::Succ => Polarity::Contra,
        }
    }

    pub fn target(&self) -> Occurrence {
        Occurrence::root(self.side)
    }

    /// The displayed substructure.
    pub fn isolated(&self) -> &Structure {
        self.sequent.side(self.side)
    }

    /// The other side: the context of the isolated substructure.
    pub fn context(&self) -> &Structure {
        self.sequent.side(self.side.other())
    }

    pub fn forward_rules(&self) -> Vec<String> {
        self.steps.iter().map(|s| s.rule.clone()).collect()
    }

    /// Rules that lead from the displayed shape back to the original shape.
    pub fn backward_rules(&self, rules: &RuleSet) -> Vec<String> {
        self.steps
            .iter()
            .rev()
            .map(|s| {
                rules
                    .get(&s.rule)
                    .and_then(|r| r.inverse_name())
                    .expect("display step names a postulate")
            })
            .collect()
    }

    /// Replays the backward rules from a displayed-shape sequent, which may
    /// differ from `self.sequent` inside the images of the postulates'
    /// metavariables (in particular at the isolated side).
    pub fn replay(&self, displayed: &Sequent, rules: &RuleSet) -> Result<Sequent> {
        let mut cur = displayed.clone();
        for name in self.backward_rules(rules) {
            cur = apply_step(&cur, &name, rules)?;
        }
        Ok(cur)
    }

    /// `(Π ⊢ Σ)[replacement/X]`, obtained by substituting at the displayed
    /// root and undoing the display steps.
    pub fn plug(&self, replacement: Structure, rules: &RuleSet) -> Result<Sequent> {
        if let Some(s) = replacement.intrinsic_sort() {
            if s != self.side.sort() {
                return Err(Error::Sort(format!(
                    "cannot plug {s}-structure `{replacement}` into a {}-position",
                    self.side.sort()
                )));
            }
        }
        let displayed = self.sequent.replace(&self.target(), replacement);
        self.replay(&displayed, rules)
    }
}

/// Applies a display rule forwards to `seq`.
pub fn apply_step(seq: &Sequent, rule: &str, rules: &RuleSet) -> Result<Sequent> {
    let r = rules
        .get(rule)
        .ok_or_else(|| Error::InvalidDerivation(format!("unknown rule `{rule}`")))?;
    r.apply_forward(std::slice::from_ref(seq))
        .map(|(_, t)| t)
        .ok_or_else(|| Error::InvalidDerivation(format!("`{rule}` does not apply to `{seq}`")))
}

/// Follows an occurrence through one forward application of a postulate.
/// Occurrences on the postulate's own connective nodes are not carried over.
pub fn track(rule: &str, rules: &RuleSet, occ: &Occurrence) -> Option<Occurrence> {
    let r = rules.get(rule)?;
    match r.premises[0].locate(occ) {
        Located::InVar { var, rest } => {
            let mut o = r.conclusion.var_occurrences(&var).into_iter().next()?;
            o.path.extend(rest);
            Some(o)
        }
        _ => None,
    }
}

/// Displays the substructure at `occ` as a whole side of a
/// display-equivalent sequent, breadth-first over postulate applications.
pub fn isolate(seq: &Sequent, occ: &Occurrence, rules: &RuleSet) -> Result<DisplayedForm> {
    seq.resolve(occ)?;
    let start = (seq.clone(), occ.clone());
    let mut seen: HashSet<(Sequent, Occurrence)> = HashSet::new();
    seen.insert(start.clone());
    let mut queue: VecDeque<((Sequent, Occurrence), Vec<DisplayStep>)> = VecDeque::new();
    queue.push_back((start, vec![]));
    while let Some(((s, o), steps)) = queue.pop_front() {
        if o.is_root() {
            return Ok(DisplayedForm {
                original: seq.clone(),
                sequent: s,
                side: o.side,
                steps,
            });
        }
        // Every application counts here, including those that map the
        // sequent to itself: a symmetric postulate such as `X ⊢ ňY / Y ⊢ ňX`
        // on `A ⊢ ňA` still moves the occurrence.
        if s.is_flat() {
            continue;
        }
        for r in rules.display_rules() {
            let Some((_, t)) = r.apply_forward(std::slice::from_ref(&s)) else {
                continue;
            };
            if let Some(o2) = track(&r.name, rules, &o) {
                let key = (t, o2);
                if seen.insert(key.clone()) {
                    let mut st = steps.clone();
                    st.push(DisplayStep { rule: r.name.clone() });
                    queue.push_back((key, st));
                }
            }
        }
    }
    Err(Error::InvalidOccurrence(format!(
        "{occ} cannot be displayed in `{seq}`"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use crate::syntax::{parse_sequent, parse_structure, Formula};

    fn rs() -> RuleSet {
        presets::ruleset("fundamental").unwrap()
    }

    fn s(text: &str) -> Sequent {
        parse_sequent(text, rs().sig()).unwrap()
    }

    fn texts(v: &[Sequent]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn neighbor_examples() {
        let rules = rs();
        let n: Vec<Sequent> = neighbors(&s("@dia(p) |- q"), &rules).into_iter().map(|x| x.0).collect();
        assert!(n.contains(&s("p |- #blacksquare(q)")));
        let n: Vec<Sequent> = neighbors(&s("p |- #neg(q)"), &rules).into_iter().map(|x| x.0).collect();
        assert!(n.contains(&s("q |- #neg(p)")));
        assert!(neighbors(&s("p |- q"), &rules).is_empty());
    }

    #[test]
    fn isolates_through_a_symmetric_step() {
        let rules = rs();
        let seq = s("@top |- #neg(@top)");
        let occ = Occurrence::parse("succ.1").unwrap();
        let shown = isolate(&seq, &occ, &rules).unwrap();
        assert_eq!(shown.side, Side::Ante);
        let q = parse_structure("q", rules.sig(), crate::signature::Sort::F).unwrap();
        assert_eq!(shown.plug(q.clone(), &rules).unwrap(), seq.replace(&occ, q));
    }

    #[test]
    fn closure_examples() {
        let rules = rs();
        assert_eq!(texts(&closure(&s("p |- q"), &rules).members), ["p |- q"]);
        assert_eq!(
            texts(&closure(&s("@dia(p) |- q"), &rules).members),
            ["@dia(p) |- q", "p |- #blacksquare(q)"]
        );
    }

    #[test]
    fn canonical_examples() {
        let rules = rs();
        let a = s("@dia(p) |- q");
        let b = s("p |- #blacksquare(q)");
        assert_eq!(canonical(&a, &rules), canonical(&b, &rules));
        let c = canonical(&a, &rules);
        assert_eq!(canonical(&c, &rules), c);
        assert_ne!(canonical(&s("p |- q"), &rules), canonical(&s("q |- p"), &rules));
    }

    #[test]
    fn closure_paths_replay() {
        let rules = rs();
        let start = s("@dia(p) |- #neg(@dia(q))");
        let c = closure(&start, &rules);
        for i in 0..c.len() {
            let mut cur = start.clone();
            for r in c.path_to(i) {
                cur = apply_step(&cur, &r, &rules).unwrap();
            }
            assert_eq!(cur, c.members[i]);
        }
    }

    #[test]
    fn isolate_examples() {
        let rules = rs();
        let d = isolate(&s("@dia(p) |- q"), &Occurrence::parse("ante.1").unwrap(), &rules).unwrap();
        assert_eq!(d.sequent, s("p |- #blacksquare(q)"));
        assert_eq!(d.epsilon(), Polarity::Co);
        let d = isolate(&s("p |- #neg(q)"), &Occurrence::parse("succ.1").unwrap(), &rules).unwrap();
        assert_eq!(d.sequent, s("q |- #neg(p)"));
        assert_eq!(d.epsilon(), Polarity::Co);
        let d = isolate(&s("p |- q"), &Occurrence::succ(), &rules).unwrap();
        assert_eq!(d.sequent, s("p |- q"));
        assert_eq!(d.epsilon(), Polarity::Contra);
        assert!(d.steps.is_empty());
    }

    #[test]
    fn isolate_through_residual_hosts() {
        let rules = rs();
        let seq = s("p |- #blacksquare(#box(#neg(@dia(q))))");
        for occ in seq.occurrences() {
            let d = isolate(&seq, &occ, &rules).unwrap();
            assert_eq!(d.isolated(), seq.get(&occ).unwrap());
            assert_eq!(d.side.sort(), seq.sort_at(rules.sig(), &occ).unwrap());
        }
    }

    #[test]
    fn plug_examples() {
        let rules = rs();
        let seq = s("@dia(p) |- q");
        let occ = Occurrence::parse("ante.1").unwrap();
        let d = isolate(&seq, &occ, &rules).unwrap();
        let r = Structure::Leaf(Formula::atom("r"));
        assert_eq!(d.plug(r.clone(), &rules).unwrap(), s("@dia(r) |- q"));
        assert_eq!(d.plug(seq.get(&occ).unwrap().clone(), &rules).unwrap(), seq);
        let wrong = parse_structure("#box(r)", rules.sig(), crate::signature::Sort::G).unwrap();
        assert!(d.plug(wrong, &rules).is_err());
    }
}
