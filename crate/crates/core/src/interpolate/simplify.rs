//! Equivalence-preserving simplification of interpolants. The syntactic pass
//! applies lattice identities; the semantic pass additionally drops operands
//! and collapses subformulas when the prover establishes the needed
//! entailments.

use crate::syntax::{Formula, Sequent};

use super::Interpolator;

/// Unit, zero, idempotence and absorption laws, applied bottom-up.
pub fn simplify_syntactic(f: &Formula) -> Formula {
    match f {
        Formula::And(a, b) => meet(simplify_syntactic(a), simplify_syntactic(b)),
        Formula::Or(a, b) => join(simplify_syntactic(a), simplify_syntactic(b)),
        Formula::App(c, args) => Formula::app(c.clone(), args.iter().map(simplify_syntactic).collect()),
        _ => f.clone(),
    }
}

fn meet(a: Formula, b: Formula) -> Formula {
    match (&a, &b) {
        (Formula::Top, _) => b,
        (_, Formula::Top) => a,
        (Formula::Bot, _) | (_, Formula::Bot) => Formula::Bot,
        _ if a == b => a,
        // a ∧ (a ∨ c) = a
        (_, Formula::Or(x, y)) if **x == a || **y == a => a,
        (Formula::Or(x, y), _) if **x == b || **y == b => b,
        _ => Formula::and(a, b),
    }
}

fn join(a: Formula, b: Formula) -> Formula {
    match (&a, &b) {
        (Formula::Bot, _) => b,
        (_, Formula::Bot) => a,
        (Formula::Top, _) | (_, Formula::Top) => Formula::Top,
        _ if a == b => a,
        // a ∨ (a ∧ c) = a
        (_, Formula::And(x, y)) if **x == a || **y == a => a,
        (Formula::And(x, y), _) if **x == b || **y == b => b,
        _ => Formula::or(a, b),
    }
}

impl<'a> Interpolator<'a> {
    /// Syntactic simplification followed by a bottom-up semantic pass: a
    /// subformula provably equal to `⊤` or `⊥` is replaced by it, and an
    /// operand of `∧`/`∨` entailing (or entailed by) the other is dropped.
    pub fn simplify(&mut self, f: &Formula) -> Formula {
        let f = simplify_syntactic(f);
        self.semantic(&f)
    }

    fn entails(&mut self, a: &Formula, b: &Formula) -> bool {
        self.prover.derivable(&Sequent::formulas(a.clone(), b.clone()))
    }

    fn semantic(&mut self, f: &Formula) -> Formula {
        let out = match f {
            Formula::And(a, b) => {
                let (a, b) = (self.semantic(a), self.semantic(b));
                if self.entails(&a, &b) {
                    a
                } else if self.entails(&b, &a) {
                    b
                } else {
                    meet(a, b)
                }
            }
            Formula::Or(a, b) => {
                let (a, b) = (self.semantic(a), self.semantic(b));
                if self.entails(&a, &b) {
                    b
                } else if self.entails(&b, &a) {
                    a
                } else {
                    join(a, b)
                }
            }
            Formula::App(c, args) => Formula::app(c.clone(), args.iter().map(|a| self.semantic(a)).collect()),
            _ => return f.clone(),
        };
        if matches!(out, Formula::Top | Formula::Bot | Formula::Atom(_)) {
            return out;
        }
        if self.entails(&out, &Formula::Bot) {
            Formula::Bot
        } else if self.entails(&Formula::Top, &out) {
            Formula::Top
        } else {
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use crate::prover::SearchConfig;
    use crate::syntax::parse_formula;

    #[test]
    fn syntactic_laws() {
        let sig = presets::signature("lattice").unwrap();
        let f = |t: &str| parse_formula(t, &sig).unwrap();
        assert_eq!(simplify_syntactic(&f("top /\\ p")), f("p"));
        assert_eq!(simplify_syntactic(&f("(p \\/ bot) /\\ p")), f("p"));
        assert_eq!(simplify_syntactic(&f("p /\\ (p \\/ q)")), f("p"));
        assert_eq!(simplify_syntactic(&f("q \\/ top")), f("top"));
        assert_eq!(simplify_syntactic(&f("p /\\ q")), f("p /\\ q"));
    }

    #[test]
    fn semantic_pass_preserves_equivalence() {
        let rules = presets::ruleset("lattice").unwrap();
        let mut it = Interpolator::new(&rules, SearchConfig::default());
        let sig = rules.sig().clone();
        let f = |t: &str| parse_formula(t, &sig).unwrap();
        for (input, expected) in [
            ("(p /\\ q) \\/ p", "p"),
            ("(p /\\ q) /\\ (q /\\ p)", "p /\\ q"),
            ("(p \\/ q) /\\ ((q /\\ p) \\/ p)", "p"),
            ("p /\\ q", "p /\\ q"),
        ] {
            let s = it.simplify(&f(input));
            assert_eq!(s, f(expected), "{input}");
            assert!(it.entails(&s, &f(input)) && it.entails(&f(input), &s));
        }
    }
}
