//! Rule schemas: the built-in display calculus for a signature, user
//! structural rules, backward matching and rule classification.

mod analysis;
mod meta;
mod rulefile;

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::signature::{Polarity, Signature, Sort};
use crate::syntax::{Occurrence, Sequent};

pub use analysis::{classify_safety, validate_analytic, Safety};
pub(crate) use analysis::special_forms;
pub use meta::{Binding, Instantiation, Located, MetaFormula, MetaSequent, MetaStructure};
pub use rulefile::parse_rules;

/// What a rule does, used to pick proof-search and interpolation handlers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RuleKind {
    /// `p ⊢ p`
    Id,
    /// `p ⊢ ⊤`
    TopAxiom,
    /// `⊥ ⊢ p`
    BotAxiom,
    /// `⊤̂ ⊢ ⊤`
    HatTopAxiom,
    /// `⊥ ⊢ ⊥̌`
    CheckBotAxiom,
    Cut,
    /// Display postulate for a primitive connective and coordinate (one-based).
    /// The forward direction rewrites the connective into its residual.
    Display {
        conn: String,
        coord: usize,
        inverse: bool,
    },
    TopL,
    BotR,
    AndL(u8),
    AndR,
    OrL,
    OrR(u8),
    FL(String),
    FR(String),
    GL(String),
    GR(String),
    TopW,
    BotW,
    User,
}

/// Proof-search ordering class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Category {
    Axiom,
    Logical,
    Weakening,
    Structural,
    Display,
    Cut,
}

impl RuleKind {
    pub fn category(&self) -> Category {
        match self {
            RuleKind::Id
            | RuleKind::TopAxiom
            | RuleKind::BotAxiom
            | RuleKind::HatTopAxiom
            | RuleKind::CheckBotAxiom => Category::Axiom,
            RuleKind::Cut => Category::Cut,
            RuleKind::Display { .. } => Category::Display,
            RuleKind::TopW | RuleKind::BotW => Category::Weakening,
            RuleKind::User => Category::Structural,
            _ => Category::Logical,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    Builtin,
    User,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleSchema {
    pub name: String,
    pub kind: RuleKind,
    pub premises: Vec<MetaSequent>,
    pub conclusion: MetaSequent,
    pub origin: Origin,
    /// The conclusion occurrence introduced by the rule, for logical rules.
    pub principal: Option<Occurrence>,
}

impl RuleSchema {
    pub fn user(name: impl Into<String>, premises: Vec<MetaSequent>, conclusion: MetaSequent) -> Self {
        RuleSchema {
            name: name.into(),
            kind: RuleKind::User,
            premises,
            conclusion,
            origin: Origin::User,
            principal: None,
        }
    }

    fn builtin(
        name: impl Into<String>,
        kind: RuleKind,
        premises: Vec<MetaSequent>,
        conclusion: MetaSequent,
        principal: Option<Occurrence>,
    ) -> Self {
        RuleSchema {
            name: name.into(),
            kind,
            premises,
            conclusion,
            origin: Origin::Builtin,
            principal,
        }
    }

    pub fn is_cut(&self) -> bool {
        self.kind == RuleKind::Cut
    }

    pub fn is_display(&self) -> bool {
        matches!(self.kind, RuleKind::Display { .. })
    }

    /// Name of the inverse display postulate, if this is one.
    pub fn inverse_name(&self) -> Option<String> {
        match &self.kind {
            RuleKind::Display { conn, coord, inverse } => Some(display_name(conn, *coord, !inverse)),
            _ => None,
        }
    }

    /// Matches the conclusion against `goal`. Matching is syntactic, so there
    /// is at most one match; premises mentioning variables absent from the
    /// conclusion (Cut) cannot be instantiated and produce no match.
    pub fn match_backward(&self, goal: &Sequent) -> Vec<Match> {
        let mut inst = Instantiation::new();
        if !self.conclusion.matches(goal, &mut inst) {
            return vec![];
        }
        match self
            .premises
            .iter()
            .map(|p| p.instantiate(&inst))
            .collect::<Option<Vec<_>>>()
        {
            Some(premises) => vec![Match { inst, premises }],
            None => vec![],
        }
    }

    /// Forward application: matches the premises against `premises` and
    /// returns the instantiated conclusion.
    pub fn apply_forward(&self, premises: &[Sequent]) -> Option<(Instantiation, Sequent)> {
        if premises.len() != self.premises.len() {
            return None;
        }
        let mut inst = Instantiation::new();
        for (p, s) in self.premises.iter().zip(premises) {
            if !p.matches(s, &mut inst) {
                return None;
            }
        }
        let concl = self.conclusion.instantiate(&inst)?;
        Some((inst, concl))
    }

    /// Premise occurrences corresponding to a conclusion occurrence that lies
    /// inside the image of a structure variable: one entry per copy of that
    /// variable in the premises, as `(premise index, occurrence)`.
    pub fn correspondence(&self, occ: &Occurrence) -> Vec<(usize, Occurrence)> {
        let Located::InVar { var, rest } = self.conclusion.locate(occ) else {
            return vec![];
        };
        let mut out = Vec::new();
        for (i, p) in self.premises.iter().enumerate() {
            for o in p.var_occurrences(&var) {
                let mut path = o.path;
                path.extend_from_slice(&rest);
                out.push((i, Occurrence::new(o.side, path)));
            }
        }
        out
    }
}

impl fmt::Display for RuleSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prem: Vec<String> = self.premises.iter().map(|p| p.to_string()).collect();
        write!(f, "{}: {} / {}", self.name, prem.join(" ; "), self.conclusion)
    }
}

/// A successful backward match.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Match {
    pub inst: Instantiation,
    pub premises: Vec<Sequent>,
}

pub fn display_name(conn: &str, coord: usize, inverse: bool) -> String {
    if inverse {
        format!("disp({conn},{coord})^-1")
    } else {
        format!("disp({conn},{coord})")
    }
}

/// A residual-closed signature together with its rules.
#[derive(Clone, Debug)]
pub struct RuleSet {
    sig: Signature,
    rules: Vec<RuleSchema>,
    index: HashMap<String, usize>,
}

impl RuleSet {
    /// The built-in rules of the calculus for `sig` (closed under residuals
    /// first).
    pub fn builtin(sig: &Signature) -> Result<RuleSet> {
        RuleSet::new(sig, vec![])
    }

    /// Built-in rules followed by user structural rules.
    pub fn new(sig: &Signature, user: Vec<RuleSchema>) -> Result<RuleSet> {
        let report = sig.validate();
        if let Some(v) = report.first() {
            return Err(Error::Signature(v.to_string()));
        }
        let sig = sig.residual_closure()?;
        let mut rules = builtin_rules(&sig);
        rules.extend(user);
        let mut index = HashMap::new();
        for (i, r) in rules.iter().enumerate() {
            if index.insert(r.name.clone(), i).is_some() {
                return Err(Error::Signature(format!("duplicate rule name `{}`", r.name)));
            }
        }
        Ok(RuleSet { sig, rules, index })
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn rules(&self) -> &[RuleSchema] {
        &self.rules
    }

    pub fn get(&self, name: &str) -> Option<&RuleSchema> {
        self.index.get(name).map(|&i| &self.rules[i])
    }

    pub fn user_rules(&self) -> impl Iterator<Item = &RuleSchema> {
        self.rules.iter().filter(|r| r.origin == Origin::User)
    }

    pub fn display_rules(&self) -> impl Iterator<Item = &RuleSchema> {
        self.rules.iter().filter(|r| r.is_display())
    }

    pub fn by_kind(&self, kind: &RuleKind) -> Option<&RuleSchema> {
        self.rules.iter().find(|r| &r.kind == kind)
    }

    /// The same rule set with the user rules restricted by `keep`.
    pub fn filter_user(&self, keep: impl Fn(&RuleSchema) -> bool) -> RuleSet {
        let rules: Vec<RuleSchema> = self
            .rules
            .iter()
            .filter(|r| r.origin == Origin::Builtin || keep(r))
            .cloned()
            .collect();
        let index = rules.iter().enumerate().map(|(i, r)| (r.name.clone(), i)).collect();
        RuleSet {
            sig: self.sig.clone(),
            rules,
            index,
        }
    }
}

fn sv(name: &str, sort: Sort) -> MetaStructure {
    MetaStructure::var(name, sort)
}

fn fv(name: &str) -> MetaStructure {
    MetaStructure::Formula(MetaFormula::var(name))
}

fn mf(f: MetaFormula) -> MetaStructure {
    MetaStructure::Formula(f)
}

fn seq(a: MetaStructure, s: MetaStructure) -> MetaSequent {
    MetaSequent::new(a, s)
}

/// `X ⊢^ε A`: `X ⊢ A` when ε = 1, `A ⊢ X` when ε = ∂.
fn oriented(x: MetaStructure, a: MetaStructure, eps: Polarity) -> MetaSequent {
    match eps {
        Polarity::Co => seq(x, a),
        Polarity::Contra => seq(a, x),
    }
}

/// Generates the built-in rules in a fixed order: axioms, Cut, display
/// postulates, lattice rules, connective introduction rules, weakenings.
pub fn builtin_rules(sig: &Signature) -> Vec<RuleSchema> {
    use Sort::{F, G};
    let mut out = Vec::new();
    let p = || mf(MetaFormula::AtomVar("p".into()));
    let ante = Some(Occurrence::ante());
    let succ = Some(Occurrence::succ());

    out.push(RuleSchema::builtin("Id", RuleKind::Id, vec![], seq(p(), p()), None));
    out.push(RuleSchema::builtin("top_ax", RuleKind::TopAxiom, vec![], seq(p(), mf(MetaFormula::Top)), succ.clone()));
    out.push(RuleSchema::builtin("bot_ax", RuleKind::BotAxiom, vec![], seq(mf(MetaFormula::Bot), p()), ante.clone()));
    out.push(RuleSchema::builtin(
        "hattop_ax",
        RuleKind::HatTopAxiom,
        vec![],
        seq(MetaStructure::HatTop, mf(MetaFormula::Top)),
        succ.clone(),
    ));
    out.push(RuleSchema::builtin(
        "checkbot_ax",
        RuleKind::CheckBotAxiom,
        vec![],
        seq(mf(MetaFormula::Bot), MetaStructure::CheckBot),
        ante.clone(),
    ));
    out.push(RuleSchema::builtin(
        "Cut",
        RuleKind::Cut,
        vec![seq(sv("X", F), fv("A")), seq(fv("A"), sv("Y", G))],
        seq(sv("X", F), sv("Y", G)),
        None,
    ));

    for c in sig.primitives() {
        for k in 1..=c.arity {
            let r = sig
                .residual(&c.name, k)
                .expect("signature is residual-closed");
            let args: Vec<MetaStructure> = (1..=c.arity)
                .map(|j| sv(&format!("X{j}"), c.arg_sort(j - 1)))
                .collect();
            let with_k = |m: MetaStructure| {
                let mut a = args.clone();
                a[k - 1] = m;
                a
            };
            let xk = args[k - 1].clone();
            let (from, to) = match (c.family, c.order_type.at(k - 1)) {
                (F, Polarity::Co) => (
                    seq(MetaStructure::app(&c.name, F, args.clone()), sv("Y", G)),
                    seq(xk, MetaStructure::app(&r.name, G, with_k(sv("Y", G)))),
                ),
                (G, Polarity::Co) => (
                    seq(sv("Y", F), MetaStructure::app(&c.name, G, args.clone())),
                    seq(MetaStructure::app(&r.name, F, with_k(sv("Y", F))), xk),
                ),
                (F, Polarity::Contra) => (
                    seq(MetaStructure::app(&c.name, F, args.clone()), sv("Y", G)),
                    seq(MetaStructure::app(&r.name, F, with_k(sv("Y", G))), xk),
                ),
                (G, Polarity::Contra) => (
                    seq(sv("Y", F), MetaStructure::app(&c.name, G, args.clone())),
                    seq(xk, MetaStructure::app(&r.name, G, with_k(sv("Y", F)))),
                ),
            };
            out.push(RuleSchema::builtin(
                display_name(&c.name, k, false),
                RuleKind::Display {
                    conn: c.name.clone(),
                    coord: k,
                    inverse: false,
                },
                vec![from.clone()],
                to.clone(),
                None,
            ));
            out.push(RuleSchema::builtin(
                display_name(&c.name, k, true),
                RuleKind::Display {
                    conn: c.name.clone(),
                    coord: k,
                    inverse: true,
                },
                vec![to],
                from,
                None,
            ));
        }
    }

    let a = || fv("A");
    let b = || fv("B");
    let and = || mf(MetaFormula::and(MetaFormula::var("A"), MetaFormula::var("B")));
    let or = || mf(MetaFormula::or(MetaFormula::var("A"), MetaFormula::var("B")));
    let x = || sv("X", F);
    let y = || sv("Y", G);
    out.push(RuleSchema::builtin(
        "top_L",
        RuleKind::TopL,
        vec![seq(MetaStructure::HatTop, y())],
        seq(mf(MetaFormula::Top), y()),
        ante.clone(),
    ));
    out.push(RuleSchema::builtin(
        "bot_R",
        RuleKind::BotR,
        vec![seq(x(), MetaStructure::CheckBot)],
        seq(x(), mf(MetaFormula::Bot)),
        succ.clone(),
    ));
    out.push(RuleSchema::builtin("and_L1", RuleKind::AndL(1), vec![seq(a(), y())], seq(and(), y()), ante.clone()));
    out.push(RuleSchema::builtin("and_L2", RuleKind::AndL(2), vec![seq(b(), y())], seq(and(), y()), ante.clone()));
    out.push(RuleSchema::builtin(
        "and_R",
        RuleKind::AndR,
        vec![seq(x(), a()), seq(x(), b())],
        seq(x(), and()),
        succ.clone(),
    ));
    out.push(RuleSchema::builtin(
        "or_L",
        RuleKind::OrL,
        vec![seq(a(), y()), seq(b(), y())],
        seq(or(), y()),
        ante.clone(),
    ));
    out.push(RuleSchema::builtin("or_R1", RuleKind::OrR(1), vec![seq(x(), a())], seq(x(), or()), succ.clone()));
    out.push(RuleSchema::builtin("or_R2", RuleKind::OrR(2), vec![seq(x(), b())], seq(x(), or()), succ.clone()));

    for family in [F, G] {
        for c in sig.family(family).filter(|c| c.operational) {
            let formula_args: Vec<MetaFormula> = (1..=c.arity).map(|j| MetaFormula::var(format!("A{j}"))).collect();
            let leaf_args: Vec<MetaStructure> = formula_args.iter().cloned().map(mf).collect();
            let logical = mf(MetaFormula::App(c.name.clone(), formula_args.clone()));
            let struct_args: Vec<MetaStructure> = (1..=c.arity)
                .map(|j| sv(&format!("X{j}"), c.arg_sort(j - 1)))
                .collect();
            match family {
                F => {
                    out.push(RuleSchema::builtin(
                        format!("{}_L", c.name),
                        RuleKind::FL(c.name.clone()),
                        vec![seq(MetaStructure::app(&c.name, F, leaf_args), y())],
                        seq(logical.clone(), y()),
                        ante.clone(),
                    ));
                    let premises = (0..c.arity)
                        .map(|j| oriented(struct_args[j].clone(), mf(formula_args[j].clone()), c.order_type.at(j)))
                        .collect();
                    out.push(RuleSchema::builtin(
                        format!("{}_R", c.name),
                        RuleKind::FR(c.name.clone()),
                        premises,
                        seq(MetaStructure::app(&c.name, F, struct_args), logical),
                        succ.clone(),
                    ));
                }
                G => {
                    let premises = (0..c.arity)
                        .map(|j| {
                            oriented(struct_args[j].clone(), mf(formula_args[j].clone()), c.order_type.at(j).dual())
                        })
                        .collect();
                    out.push(RuleSchema::builtin(
                        format!("{}_L", c.name),
                        RuleKind::GL(c.name.clone()),
                        premises,
                        seq(logical.clone(), MetaStructure::app(&c.name, G, struct_args)),
                        ante.clone(),
                    ));
                    out.push(RuleSchema::builtin(
                        format!("{}_R", c.name),
                        RuleKind::GR(c.name.clone()),
                        vec![seq(x(), MetaStructure::app(&c.name, G, leaf_args))],
                        seq(x(), logical),
                        succ.clone(),
                    ));
                }
            }
        }
    }

    out.push(RuleSchema::builtin(
        "top_W",
        RuleKind::TopW,
        vec![seq(MetaStructure::HatTop, y())],
        seq(x(), y()),
        None,
    ));
    out.push(RuleSchema::builtin(
        "bot_W",
        RuleKind::BotW,
        vec![seq(x(), MetaStructure::CheckBot)],
        seq(x(), y()),
        None,
    ));
    out
}
