//! Seeded random generation of formulas, structures, occurrences and
//! derivable sequents (by forward application of the rules).

use std::collections::{BTreeMap, HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calculus::{
    Binding, Category, Instantiation, MetaFormula, MetaSequent, MetaStructure, Origin, RuleSchema, RuleSet,
};
use crate::prover::{Derivation, Prover, SearchConfig};
use crate::signature::Sort;
use crate::syntax::{Formula, Occurrence, Sequent, Side, Structure};

/// Random terms over a rule set's signature.
pub struct Generator<'a> {
    rules: &'a RuleSet,
    rng: ChaCha8Rng,
    atoms: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum VarKind {
    Structure(Sort),
    Formula,
    Atom,
}

impl<'a> Generator<'a> {
    pub fn new(rules: &'a RuleSet, seed: u64) -> Self {
        let mut atoms = rules.sig().atoms.clone();
        if atoms.is_empty() {
            atoms = vec!["p".into(), "q".into(), "r".into()];
        }
        Generator {
            rules,
            rng: ChaCha8Rng::seed_from_u64(seed),
            atoms,
        }
    }

    pub fn with_atoms(mut self, atoms: &[&str]) -> Self {
        self.atoms = atoms.iter().map(|a| a.to_string()).collect();
        self
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn atom(&mut self) -> String {
        self.atoms.choose(&mut self.rng).expect("at least one atom").clone()
    }

    /// A random formula of depth at most `depth` over operational connectives.
    pub fn formula(&mut self, depth: usize) -> Formula {
        let ops: Vec<(String, usize)> = self
            .rules
            .sig()
            .connectives()
            .filter(|c| c.operational)
            .map(|c| (c.name.clone(), c.arity))
            .collect();
        if depth == 0 || self.rng.gen_bool(0.3) {
            return match self.rng.gen_range(0..10) {
                0 => Formula::Top,
                1 => Formula::Bot,
                _ => Formula::atom(self.atom()),
            };
        }
        let choice = self.rng.gen_range(0..2 + ops.len());
        match choice {
            0 => Formula::and(self.formula(depth - 1), self.formula(depth - 1)),
            1 => Formula::or(self.formula(depth - 1), self.formula(depth - 1)),
            k => {
                let (name, arity) = ops[k - 2].clone();
                let args = (0..arity).map(|_| self.formula(depth - 1)).collect();
                Formula::app(name, args)
            }
        }
    }

    /// A random well-sorted structure of the given sort, of depth at most
    /// `depth`, over all connectives of the closed signature.
    pub fn structure(&mut self, sort: Sort, depth: usize) -> Structure {
        let conns: Vec<(String, usize, Vec<Sort>)> = self
            .rules
            .sig()
            .family(sort)
            .map(|c| (c.name.clone(), c.arity, (0..c.arity).map(|i| c.arg_sort(i)).collect()))
            .collect();
        if depth == 0 || conns.is_empty() || self.rng.gen_bool(0.35) {
            if self.rng.gen_range(0..8) == 0 {
                return match sort {
                    Sort::F => Structure::HatTop,
                    Sort::G => Structure::CheckBot,
                };
            }
            let d = self.rng.gen_range(0..=1);
            return Structure::leaf(self.formula(d));
        }
        let (name, _, sorts) = conns.choose(&mut self.rng).expect("nonempty").clone();
        let args = sorts.into_iter().map(|s| self.structure(s, depth - 1)).collect();
        Structure::app(name, sort, args)
    }

    pub fn sequent(&mut self, depth: usize) -> Sequent {
        Sequent::new(self.structure(Sort::F, depth), self.structure(Sort::G, depth))
    }

    pub fn formula_sequent(&mut self, depth: usize) -> Sequent {
        Sequent::formulas(self.formula(depth), self.formula(depth))
    }

    /// A uniformly chosen occurrence of `seq`.
    pub fn occurrence(&mut self, seq: &Sequent) -> Occurrence {
        seq.occurrences()
            .choose(&mut self.rng)
            .expect("sequents have occurrences")
            .clone()
    }

    /// Random derivations of distinct formula sequents of weight at most
    /// `max_weight`, obtained by applying rules forwards (Cut excluded) to a
    /// growing pool of derived sequents, starting from the axioms. Premises
    /// for user structural rules are also proposed at random and admitted to
    /// the pool when the prover derives them.
    pub fn corpus(&mut self, count: usize, max_weight: usize) -> Vec<Derivation> {
        let rules = self.rules;
        let steps: Vec<usize> = rules
            .rules()
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.is_cut() && !r.premises.is_empty())
            .map(|(i, _)| i)
            .collect();
        let axioms: Vec<usize> = rules
            .rules()
            .iter()
            .enumerate()
            .filter(|(_, r)| r.kind.category() == Category::Axiom)
            .map(|(i, _)| i)
            .collect();
        let user: Vec<usize> = rules
            .rules()
            .iter()
            .enumerate()
            .filter(|(_, r)| r.origin == Origin::User && !r.premises.is_empty())
            .map(|(i, _)| i)
            .collect();
        let mut prover = Prover::new(rules, SearchConfig::with_depth(6));
        let mut pool = Pool::default();
        let mut out = Vec::new();
        let budget = 400 * count + 20_000;
        for step in 0..budget {
            if out.len() >= count {
                break;
            }
            let use_axiom = pool.items.len() < 8 || step % 7 == 0;
            let idx = if use_axiom {
                *axioms.choose(&mut self.rng).expect("axioms exist")
            } else if !user.is_empty() && step % 5 == 0 {
                *user.choose(&mut self.rng).expect("nonempty")
            } else {
                *steps.choose(&mut self.rng).expect("rules exist")
            };
            let schema = &rules.rules()[idx];
            if schema.origin == Origin::User && step % 2 == 0 {
                // Premises of structural rules rarely arise by chance: propose
                // instances and keep the ones the prover derives.
                if let Some(d) = self.synthesize(schema, &pool, &mut prover) {
                    pool.add(d);
                }
            }
            let mut premises: Vec<usize> = Vec::with_capacity(schema.premises.len());
            let mut inst = Instantiation::new();
            let mut ok = true;
            for (k, p) in schema.premises.iter().enumerate() {
                let candidates: Vec<usize> = if k == 0 {
                    (0..pool.items.len()).collect()
                } else {
                    // Later premises usually share a side with the first.
                    let first = &pool.items[premises[0]].sequent;
                    let mut v = pool.by_side.get(&first.ante).cloned().unwrap_or_default();
                    v.extend(pool.by_side.get(&first.succ).cloned().unwrap_or_default());
                    v
                };
                let mut found = None;
                for _ in 0..12 {
                    let Some(&c) = candidates.choose(&mut self.rng) else {
                        break;
                    };
                    let mut trial = inst.clone();
                    if p.matches(&pool.items[c].sequent, &mut trial) {
                        inst = trial;
                        found = Some(c);
                        break;
                    }
                }
                match found {
                    Some(c) => premises.push(c),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            self.fill_fresh(&schema.conclusion, &mut inst);
            let Some(conclusion) = schema.conclusion.instantiate(&inst) else {
                continue;
            };
            if conclusion.check(rules.sig()).is_err() {
                continue;
            }
            let d = Derivation {
                sequent: conclusion,
                rule: schema.name.clone(),
                instantiation: inst,
                children: premises.iter().map(|&i| pool.items[i].clone()).collect(),
            };
            if d.sequent.size() <= max_weight && pool.add(d.clone()) && d.sequent.as_formulas().is_some() {
                out.push(d);
            }
        }
        out
    }

    /// Proposes an instance of the first premise of `schema` and returns its
    /// derivation if the prover finds one.
    fn synthesize(&mut self, schema: &RuleSchema, pool: &Pool, prover: &mut Prover<'_>) -> Option<Derivation> {
        let premise = schema.premises.first()?;
        let mut kinds = BTreeMap::new();
        structure_var_kinds(&premise.ante, &mut kinds);
        structure_var_kinds(&premise.succ, &mut kinds);
        let unary: Vec<String> = self
            .rules
            .sig()
            .connectives()
            .filter(|c| c.operational && c.arity == 1)
            .map(|c| c.name.clone())
            .collect();
        let mut inst = Instantiation::new();
        for (v, kind) in kinds {
            let b = match kind {
                VarKind::Structure(sort) => {
                    let pick = self.rng.gen_range(0..10);
                    let from_pool = pool.items.choose(&mut self.rng).map(|d| match sort {
                        Sort::F => d.sequent.ante.clone(),
                        Sort::G => d.sequent.succ.clone(),
                    });
                    match (pick, from_pool) {
                        (0..=3, Some(s)) => Binding::Structure(s),
                        (4..=6, _) if !unary.is_empty() => {
                            // `A ∧ c(A)` or `A ∨ c(A)`: candidates for rules
                            // relating a structure to its own image.
                            let a = self.formula(1);
                            let c = unary.choose(&mut self.rng).expect("nonempty").clone();
                            let ca = Formula::app(c, vec![a.clone()]);
                            Binding::Formula(match sort {
                                Sort::F => Formula::and(a, ca),
                                Sort::G => Formula::or(a, ca),
                            })
                        }
                        _ => {
                            let d = self.rng.gen_range(0..=1);
                            Binding::Structure(self.structure(sort, d))
                        }
                    }
                }
                VarKind::Formula => Binding::Formula(self.formula(1)),
                VarKind::Atom => Binding::Formula(Formula::atom(self.atom())),
            };
            inst.insert(v, b);
        }
        let goal = premise.instantiate(&inst)?;
        if goal.check(self.rules.sig()).is_err() || goal.size() > 16 {
            return None;
        }
        prover.prove(&goal).derivation()
    }

    /// Binds conclusion variables the premises left open.
    fn fill_fresh(&mut self, concl: &MetaSequent, inst: &mut Instantiation) {
        let mut kinds = BTreeMap::new();
        structure_var_kinds(&concl.ante, &mut kinds);
        structure_var_kinds(&concl.succ, &mut kinds);
        for (v, kind) in kinds {
            if inst.contains_key(&v) {
                continue;
            }
            let b = match kind {
                VarKind::Atom => Binding::Formula(Formula::atom(self.atom())),
                VarKind::Formula => {
                    let d = self.rng.gen_range(0..=1);
                    Binding::Formula(self.formula(d))
                }
                VarKind::Structure(s) => {
                    let d = self.rng.gen_range(0..=1);
                    Binding::Structure(self.structure(s, d))
                }
            };
            inst.insert(v, b);
        }
    }
}

/// Derived sequents, indexed by their sides.
#[derive(Default)]
struct Pool {
    items: Vec<Derivation>,
    seen: HashSet<Sequent>,
    by_side: HashMap<Structure, Vec<usize>>,
}

impl Pool {
    fn add(&mut self, d: Derivation) -> bool {
        if !self.seen.insert(d.sequent.clone()) {
            return false;
        }
        let i = self.items.len();
        self.by_side.entry(d.sequent.ante.clone()).or_default().push(i);
        self.by_side.entry(d.sequent.succ.clone()).or_default().push(i);
        self.items.push(d);
        true
    }
}

fn structure_var_kinds(m: &MetaStructure, out: &mut BTreeMap<String, VarKind>) {
    match m {
        MetaStructure::Var(v, s) => {
            out.insert(v.clone(), VarKind::Structure(*s));
        }
        MetaStructure::HatTop | MetaStructure::CheckBot => {}
        MetaStructure::App { args, .. } => args.iter().for_each(|a| structure_var_kinds(a, out)),
        MetaStructure::Formula(f) => formula_var_kinds(f, out),
    }
}

fn formula_var_kinds(f: &MetaFormula, out: &mut BTreeMap<String, VarKind>) {
    match f {
        MetaFormula::Var(v) => {
            out.insert(v.clone(), VarKind::Formula);
        }
        MetaFormula::AtomVar(v) => {
            out.insert(v.clone(), VarKind::Atom);
        }
        MetaFormula::Atom(_) | MetaFormula::Top | MetaFormula::Bot => {}
        MetaFormula::And(a, b) | MetaFormula::Or(a, b) => {
            formula_var_kinds(a, out);
            formula_var_kinds(b, out);
        }
        MetaFormula::App(_, args) => args.iter().for_each(|a| formula_var_kinds(a, out)),
    }
}

/// A random side of a sequent.
pub fn side(rng: &mut impl Rng) -> Side {
    if rng.gen_bool(0.5) {
        Side::Ante
    } else {
        Side::Succ
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use crate::prover::check;

    #[test]
    fn structures_are_well_sorted() {
        let rules = presets::ruleset("tense-fundamental").unwrap();
        let mut g = Generator::new(&rules, 7);
        for _ in 0..200 {
            let s = g.sequent(3);
            s.check(rules.sig()).unwrap();
            let occ = g.occurrence(&s);
            assert!(s.get(&occ).is_some());
        }
    }

    #[test]
    fn seeded_generation_is_reproducible() {
        let rules = presets::ruleset("k-tense").unwrap();
        let a: Vec<String> = Generator::new(&rules, 3).corpus(20, 20).iter().map(|d| d.sequent.to_string()).collect();
        let b: Vec<String> = Generator::new(&rules, 3).corpus(20, 20).iter().map(|d| d.sequent.to_string()).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn corpus_derivations_check() {
        for name in ["lattice", "k-tense", "fundamental"] {
            let rules = presets::ruleset(name).unwrap();
            let corpus = Generator::new(&rules, 11).corpus(40, 20);
            assert_eq!(corpus.len(), 40, "{name}");
            for d in &corpus {
                assert!(check(d, &rules).valid, "{name}: {}", d.sequent);
                assert!(d.sequent.size() <= 20);
                assert!(d.sequent.as_formulas().is_some());
                assert!(!d.uses_rule("Cut"));
            }
        }
    }
}
