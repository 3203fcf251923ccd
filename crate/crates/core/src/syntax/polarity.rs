//! Signed variables: which atoms occur positively or negatively.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::Result;
use crate::signature::{Polarity, Signature, Sort};

use super::{Formula, Occurrence, Sequent, Side, Structure};

/// Atoms occurring positively (`pos`) and negatively (`neg`).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SignedVars {
    pub pos: BTreeSet<String>,
    pub neg: BTreeSet<String>,
}

impl SignedVars {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_lists(pos: &[&str], neg: &[&str]) -> Self {
        SignedVars {
            pos: pos.iter().map(|s| s.to_string()).collect(),
            neg: neg.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn add(&mut self, atom: &str, p: Polarity) {
        match p {
            Polarity::Co => self.pos.insert(atom.to_string()),
            Polarity::Contra => self.neg.insert(atom.to_string()),
        };
    }

    pub fn flip(self) -> SignedVars {
        SignedVars {
            pos: self.neg,
            neg: self.pos,
        }
    }

    pub fn union(mut self, other: SignedVars) -> SignedVars {
        self.pos.extend(other.pos);
        self.neg.extend(other.neg);
        self
    }

    pub fn intersect(&self, other: &SignedVars) -> SignedVars {
        SignedVars {
            pos: self.pos.intersection(&other.pos).cloned().collect(),
            neg: self.neg.intersection(&other.neg).cloned().collect(),
        }
    }

    pub fn is_subset(&self, other: &SignedVars) -> bool {
        self.pos.is_subset(&other.pos) && self.neg.is_subset(&other.neg)
    }

    pub fn is_empty(&self) -> bool {
        self.pos.is_empty() && self.neg.is_empty()
    }
}

fn coord_polarity(sig: &Signature, conn: &str, i: usize) -> Polarity {
    sig.get(conn)
        .filter(|c| i < c.order_type.len())
        .map(|c| c.order_type.at(i))
        .unwrap_or(Polarity::Co)
}

fn walk_formula(f: &Formula, sig: &Signature, p: Polarity, out: &mut SignedVars) {
    match f {
        Formula::Atom(a) => out.add(a, p),
        Formula::Top | Formula::Bot => {}
        Formula::And(a, b) | Formula::Or(a, b) => {
            walk_formula(a, sig, p, out);
            walk_formula(b, sig, p, out);
        }
        Formula::App(c, args) => {
            for (i, a) in args.iter().enumerate() {
                walk_formula(a, sig, p.compose(coord_polarity(sig, c, i)), out);
            }
        }
    }
}

fn walk_structure(
    s: &Structure,
    sig: &Signature,
    p: Polarity,
    skip: Option<&[usize]>,
    out: &mut SignedVars,
) {
    if skip.is_some_and(|path| path.is_empty()) {
        return;
    }
    match s {
        Structure::Leaf(f) => walk_formula(f, sig, p, out),
        Structure::HatTop | Structure::CheckBot => {}
        Structure::App { conn, args, .. } => {
            for (i, a) in args.iter().enumerate() {
                let sub = match skip {
                    Some(path) if path[0] == i => Some(&path[1..]),
                    _ => None,
                };
                walk_structure(a, sig, p.compose(coord_polarity(sig, conn, i)), sub, out);
            }
        }
    }
}

/// An atom occurrence is positive iff its root path crosses an even number
/// of antitone coordinates. `∧` and `∨` are monotone.
pub fn signed_vars_formula(f: &Formula, sig: &Signature) -> SignedVars {
    let mut out = SignedVars::new();
    walk_formula(f, sig, Polarity::Co, &mut out);
    out
}

pub fn signed_vars_structure(s: &Structure, sig: &Signature) -> SignedVars {
    let mut out = SignedVars::new();
    walk_structure(s, sig, Polarity::Co, None, &mut out);
    out
}

/// Signed variables of the context of `occ`, that is of the sequent with the
/// occurrence deleted, read from the position where the occurrence is
/// displayed.
///
/// When the occurrence has sort `F` it is displayed as `X ⊢ Σ'`, and the
/// context is `Σ'`: succedent atoms keep their sign and antecedent atoms
/// flip. When it has sort `G` it is displayed as `Π' ⊢ X` and the roles are
/// exchanged. For root occurrences this is just the signed variables of the
/// other side.
pub fn context_vars(seq: &Sequent, occ: &Occurrence, sig: &Signature) -> Result<SignedVars> {
    seq.resolve(occ)?;
    let sort = seq.sort_at(sig, occ)?;
    let mut sides = [SignedVars::new(), SignedVars::new()];
    for (k, side) in [Side::Ante, Side::Succ].into_iter().enumerate() {
        let skip = (side == occ.side).then_some(occ.path.as_slice());
        walk_structure(seq.side(side), sig, Polarity::Co, skip, &mut sides[k]);
    }
    let [ante, succ] = sides;
    Ok(match sort {
        Sort::F => succ.union(ante.flip()),
        Sort::G => ante.union(succ.flip()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use crate::syntax::{parse_formula, parse_sequent};

    fn sig() -> Signature {
        presets::signature("fundamental").unwrap()
    }

    fn sv(text: &str) -> SignedVars {
        signed_vars_formula(&parse_formula(text, &sig()).unwrap(), &sig())
    }

    #[test]
    fn formula_examples() {
        assert_eq!(sv("p"), SignedVars::from_lists(&["p"], &[]));
        assert_eq!(sv("neg(p)"), SignedVars::from_lists(&[], &["p"]));
        assert_eq!(sv("dia(neg(p))"), SignedVars::from_lists(&[], &["p"]));
        assert_eq!(sv("neg(neg(p))"), SignedVars::from_lists(&["p"], &[]));
        assert_eq!(sv("p /\\ neg(p)"), SignedVars::from_lists(&["p"], &["p"]));
        assert_eq!(sv("top \\/ bot"), SignedVars::new());
    }

    #[test]
    fn meet_is_pointwise_union() {
        for (a, b) in [("p", "neg(q)"), ("dia(p)", "neg(box(q))"), ("neg(p)", "p")] {
            let both = sv(&format!("({a}) /\\ ({b})"));
            assert_eq!(both, sv(a).union(sv(b)));
        }
    }

    #[test]
    fn antitone_unary_swaps() {
        for a in ["p", "neg(p) /\\ q", "box(dia(neg(r)))"] {
            assert_eq!(sv(&format!("neg({a})")), sv(a).flip());
        }
    }

    fn ctx(seq: &str, occ: &str) -> SignedVars {
        let sig = sig();
        let s = parse_sequent(seq, &sig).unwrap();
        context_vars(&s, &Occurrence::parse(occ).unwrap(), &sig).unwrap()
    }

    #[test]
    fn context_examples() {
        assert_eq!(ctx("p |- p", "ante"), SignedVars::from_lists(&["p"], &[]));
        assert_eq!(
            ctx("(p /\\ q) |- (p \\/ r)", "succ"),
            SignedVars::from_lists(&["p", "q"], &[])
        );
        assert_eq!(ctx("neg(p) |- q", "succ"), SignedVars::from_lists(&[], &["p"]));
    }

    #[test]
    fn context_of_antecedent_is_succedent() {
        let sig = sig();
        for text in ["p /\\ neg(q) |- dia(r)", "@dia(p) |- #neg(q)", "q |- #box(#neg(@dia(p)))"] {
            let s = parse_sequent(text, &sig).unwrap();
            assert_eq!(
                context_vars(&s, &Occurrence::ante(), &sig).unwrap(),
                signed_vars_structure(&s.succ, &sig)
            );
        }
    }

    #[test]
    fn context_is_read_from_the_displayed_position() {
        // `p |- #neg(neg(p))` displays the inner `neg(p)` as
        // `neg(p) |- #neg(p)`, whose context has `p` negative.
        let c = ctx("p |- #neg(neg(p))", "succ.1");
        assert_eq!(c, SignedVars::from_lists(&[], &["p"]));
    }
}
