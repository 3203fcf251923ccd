//! Brute-force interpolant search, used to cross-check extraction.
//!
//! Candidates are enumerated syntactically over the signed variables shared
//! by an occurrence and its context; each candidate is checked with the
//! prover. The oracle is independent of extraction at the level of how
//! interpolants are built, but it relies on the same prover for
//! derivability.

use std::collections::BTreeSet;

use crate::calculus::RuleSet;
use crate::error::Result;
use crate::interpolate::Interpolator;
use crate::prover::SearchConfig;
use crate::signature::{Polarity, Signature};
use crate::syntax::{context_vars, signed_vars_formula, signed_vars_structure, Formula, Occurrence, Sequent};

/// Formulas of bounded depth over a set of signed atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateSpace {
    /// Atoms allowed to occur positively.
    pub pos: BTreeSet<String>,
    /// Atoms allowed to occur negatively.
    pub neg: BTreeSet<String>,
    /// Allowed connectives: `and`, `or` and operational connective names.
    pub connectives: Vec<String>,
    pub depth: usize,
}

/// Name used for conjunction in [`CandidateSpace::connectives`].
pub const AND: &str = "and";
/// Name used for disjunction in [`CandidateSpace::connectives`].
pub const OR: &str = "or";

impl CandidateSpace {
    /// The space for interpolants of `occ` in `seq`: signed variables shared
    /// by the occurrence and its context, conjunction, disjunction and every
    /// operational connective of the signature.
    pub fn for_occurrence(seq: &Sequent, occ: &Occurrence, sig: &Signature, depth: usize) -> Result<Self> {
        let x = signed_vars_structure(seq.resolve(occ)?, sig);
        let shared = x.intersect(&context_vars(seq, occ, sig)?);
        let mut connectives = vec![AND.to_string(), OR.to_string()];
        connectives.extend(sig.connectives().filter(|c| c.operational).map(|c| c.name.clone()));
        Ok(CandidateSpace {
            pos: shared.pos,
            neg: shared.neg,
            connectives,
            depth,
        })
    }

    /// Whether `f` belongs to the space.
    pub fn admits(&self, f: &Formula, sig: &Signature) -> bool {
        if f.depth() > self.depth {
            return false;
        }
        let mut used = Vec::new();
        f.connectives(&mut used);
        if !used.iter().all(|c| self.connectives.contains(c)) {
            return false;
        }
        let sv = signed_vars_formula(f, sig);
        sv.pos.is_subset(&self.pos) && sv.neg.is_subset(&self.neg)
    }
}

/// Signed atom usage of a formula, as bit masks over the candidate atoms.
#[derive(Clone, Copy, Default)]
struct Usage {
    pos: u64,
    neg: u64,
}

impl Usage {
    fn flip(self) -> Usage {
        Usage {
            pos: self.neg,
            neg: self.pos,
        }
    }

    fn union(self, o: Usage) -> Usage {
        Usage {
            pos: self.pos | o.pos,
            neg: self.neg | o.neg,
        }
    }

    fn fits(self, allowed: Usage) -> bool {
        self.pos & !allowed.pos == 0 && self.neg & !allowed.neg == 0
    }
}

/// All formulas of the space, without duplicates, ordered by depth and then
/// by construction: atoms (sorted), `⊤`, `⊥`, then connective applications
/// in the order of `space.connectives` with arguments in lexicographic order
/// of their indices.
///
/// Antitone coordinates flip the sign an argument must respect, so a formula
/// is kept only if every atom occurs with an allowed sign.
pub fn enumerate(space: &CandidateSpace, sig: &Signature) -> Vec<Formula> {
    let atoms: Vec<String> = space.pos.union(&space.neg).cloned().collect();
    assert!(atoms.len() <= 64, "candidate spaces are limited to 64 atoms");
    let allowed = Usage {
        pos: mask(&atoms, &space.pos),
        neg: mask(&atoms, &space.neg),
    };
    // Formulas are generated over all atoms with their signed usage; a
    // formula is admissible if its usage fits. Subformulas of admissible
    // formulas need not be admissible (an antitone coordinate flips signs),
    // so generation keeps every formula whose usage fits either orientation.
    let mut all: Vec<(Formula, Usage, usize)> = Vec::new();
    for (i, a) in atoms.iter().enumerate() {
        let bit = 1u64 << i;
        all.push((Formula::atom(a.clone()), Usage { pos: bit, neg: 0 }, 0));
    }
    all.push((Formula::Top, Usage::default(), 0));
    all.push((Formula::Bot, Usage::default(), 0));
    let either = |u: Usage| u.fits(allowed) || u.fits(allowed.flip());
    all.retain(|(_, u, _)| either(*u));
    let mut level_start = 0;
    for depth in 1..=space.depth {
        let prev_end = all.len();
        let mut next = Vec::new();
        for name in &space.connectives {
            let (arity, order): (usize, Vec<Polarity>) = match name.as_str() {
                AND | OR => (2, vec![Polarity::Co, Polarity::Co]),
                _ => match sig.get(name) {
                    Some(c) => (c.arity, c.order_type.0.clone()),
                    None => continue,
                },
            };
            // Argument tuples over formulas of depth < `depth` with at least
            // one argument of depth exactly `depth - 1`.
            if arity == 0 {
                continue;
            }
            let mut idx = vec![0usize; arity];
            let mut done = false;
            while !done {
                if idx.iter().any(|&i| i >= level_start) {
                    let mut usage = Usage::default();
                    for (k, &i) in idx.iter().enumerate() {
                        let u = all[i].1;
                        usage = usage.union(match order[k] {
                            Polarity::Co => u,
                            Polarity::Contra => u.flip(),
                        });
                    }
                    if either(usage) {
                        let args: Vec<Formula> = idx.iter().map(|&i| all[i].0.clone()).collect();
                        let f = match name.as_str() {
                            AND => Formula::and(args[0].clone(), args[1].clone()),
                            OR => Formula::or(args[0].clone(), args[1].clone()),
                            _ => Formula::app(name.clone(), args),
                        };
                        next.push((f, usage, depth));
                    }
                }
                // Odometer over `0..prev_end`, last index fastest.
                done = true;
                for k in (0..arity).rev() {
                    idx[k] += 1;
                    if idx[k] < prev_end {
                        done = false;
                        break;
                    }
                    idx[k] = 0;
                }
            }
        }
        level_start = prev_end;
        all.extend(next);
    }
    all.into_iter()
        .filter(|(_, u, _)| u.fits(allowed))
        .map(|(f, _, _)| f)
        .collect()
}

fn mask(atoms: &[String], set: &BTreeSet<String>) -> u64 {
    atoms
        .iter()
        .enumerate()
        .filter(|(_, a)| set.contains(*a))
        .fold(0, |m, (i, _)| m | (1 << i))
}

/// Every candidate of depth at most `depth` that verifies as an interpolant
/// of `occ` in `seq`, sorted by printed form.
pub fn find_interpolants(
    seq: &Sequent,
    occ: &Occurrence,
    depth: usize,
    rules: &RuleSet,
    cfg: &SearchConfig,
) -> Result<Vec<Formula>> {
    let mut it = Interpolator::new(rules, cfg.clone());
    let space = CandidateSpace::for_occurrence(seq, occ, rules.sig(), depth)?;
    let mut out = Vec::new();
    for f in enumerate(&space, rules.sig()) {
        if it.is_interpolant(seq, occ, &f)? {
            out.push(f);
        }
    }
    out.sort_by_key(|f| f.to_string());
    Ok(out)
}

/// Membership in `find_interpolants(seq, occ, depth)` without enumerating:
/// `f` must lie in the candidate space and verify.
pub fn is_found_interpolant(
    it: &mut Interpolator<'_>,
    seq: &Sequent,
    occ: &Occurrence,
    f: &Formula,
    depth: usize,
) -> Result<bool> {
    let space = CandidateSpace::for_occurrence(seq, occ, it.rules().sig(), depth)?;
    Ok(space.admits(f, it.rules().sig()) && it.is_interpolant(seq, occ, f)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use crate::syntax::parse_sequent;

    fn texts(v: &[Formula]) -> Vec<String> {
        v.iter().map(|f| f.to_string()).collect()
    }

    fn space(pos: &[&str], neg: &[&str], conns: &[&str], depth: usize) -> CandidateSpace {
        CandidateSpace {
            pos: pos.iter().map(|s| s.to_string()).collect(),
            neg: neg.iter().map(|s| s.to_string()).collect(),
            connectives: conns.iter().map(|s| s.to_string()).collect(),
            depth,
        }
    }

    #[test]
    fn depth_zero() {
        let sig = presets::signature("lattice").unwrap();
        assert_eq!(texts(&enumerate(&space(&["p"], &[], &[], 0), &sig)), ["p", "top", "bot"]);
    }

    #[test]
    fn depth_one_lattice() {
        let sig = presets::signature("lattice").unwrap();
        let v = enumerate(&space(&["p"], &[], &[AND, OR], 1), &sig);
        assert_eq!(v.len(), 3 + 2 * 9);
        assert_eq!(texts(&v[..5]), ["p", "top", "bot", "p /\\ p", "p /\\ top"]);
        let set: BTreeSet<String> = texts(&v).into_iter().collect();
        assert_eq!(set.len(), v.len());
        assert_eq!(enumerate(&space(&["p"], &[], &[AND, OR], 1), &sig), v);
    }

    #[test]
    fn negative_atoms_under_negation() {
        let sig = presets::signature("fundamental").unwrap();
        let v = texts(&enumerate(&space(&[], &["p"], &["neg"], 1), &sig));
        assert!(v.contains(&"neg(p)".to_string()));
        assert!(!v.contains(&"p".to_string()));
        assert_eq!(v, ["top", "bot", "neg(p)", "neg(top)", "neg(bot)"]);
    }

    #[test]
    fn enumeration_respects_space() {
        let sig = presets::signature("tense-fundamental").unwrap();
        let s = space(&["p"], &["q"], &[AND, OR, "neg", "dia", "box"], 2);
        let v = enumerate(&s, &sig);
        assert!(v.iter().all(|f| s.admits(f, &sig)));
        // neg(neg(p)) is admitted although neg(p) alone is not.
        assert!(texts(&v).contains(&"neg(neg(p))".to_string()));
        assert!(!texts(&v).contains(&"neg(p)".to_string()));
    }

    #[test]
    fn oracle_examples() {
        let cfg = SearchConfig::default();
        let rules = presets::ruleset("lattice").unwrap();
        let s = |t: &str| parse_sequent(t, rules.sig()).unwrap();
        let found = texts(&find_interpolants(&s("p /\\ q |- p \\/ r"), &Occurrence::ante(), 1, &rules, &cfg).unwrap());
        assert!(found.contains(&"p".to_string()));
        assert!(!found.contains(&"q".to_string()) && !found.contains(&"r".to_string()));
        let found = texts(&find_interpolants(&s("p |- p"), &Occurrence::ante(), 0, &rules, &cfg).unwrap());
        assert_eq!(found, ["p"]);

        let rules = presets::ruleset("fundamental").unwrap();
        let seq = parse_sequent("(p /\\ neg(p)) |- q", rules.sig()).unwrap();
        let found = texts(&find_interpolants(&seq, &Occurrence::ante(), 0, &rules, &cfg).unwrap());
        assert_eq!(found, ["bot"]);
    }
}
