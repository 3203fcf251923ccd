//! Metastructures, instantiations and first-order matching.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::signature::Sort;
use crate::syntax::{flavor_prefix, Formula, Occurrence, Sequent, Side, Structure};

/// A formula pattern. `Var` ranges over formulas, `AtomVar` over atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MetaFormula {
    Var(String),
    AtomVar(String),
    Atom(String),
    Top,
    Bot,
    And(Box<MetaFormula>, Box<MetaFormula>),
    Or(Box<MetaFormula>, Box<MetaFormula>),
    App(String, Vec<MetaFormula>),
}

impl MetaFormula {
    pub fn var(name: impl Into<String>) -> MetaFormula {
        MetaFormula::Var(name.into())
    }

    pub fn and(a: MetaFormula, b: MetaFormula) -> MetaFormula {
        MetaFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: MetaFormula, b: MetaFormula) -> MetaFormula {
        MetaFormula::Or(Box::new(a), Box::new(b))
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            MetaFormula::Var(v) | MetaFormula::AtomVar(v) => out.push(v.clone()),
            MetaFormula::Atom(_) | MetaFormula::Top | MetaFormula::Bot => {}
            MetaFormula::And(a, b) | MetaFormula::Or(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            MetaFormula::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    fn fmt_arg(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetaFormula::And(..) | MetaFormula::Or(..) => write!(f, "({self})"),
            _ => write!(f, "{self}"),
        }
    }
}

impl fmt::Display for MetaFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetaFormula::Var(v) | MetaFormula::AtomVar(v) | MetaFormula::Atom(v) => write!(f, "{v}"),
            MetaFormula::Top => write!(f, "top"),
            MetaFormula::Bot => write!(f, "bot"),
            MetaFormula::And(a, b) => {
                a.fmt_arg(f)?;
                write!(f, " /\\ ")?;
                b.fmt_arg(f)
            }
            MetaFormula::Or(a, b) => {
                a.fmt_arg(f)?;
                write!(f, " \\/ ")?;
                b.fmt_arg(f)
            }
            MetaFormula::App(c, args) => {
                write!(f, "{c}")?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ", ")?;
                        }
                        write!(f, "{a}")?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

/// A structure pattern with the same sort discipline as [`Structure`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MetaStructure {
    Var(String, Sort),
    HatTop,
    CheckBot,
    App {
        conn: String,
        sort: Sort,
        args: Vec<MetaStructure>,
    },
    Formula(MetaFormula),
}

impl MetaStructure {
    pub fn var(name: impl Into<String>, sort: Sort) -> MetaStructure {
        MetaStructure::Var(name.into(), sort)
    }

    pub fn app(conn: impl Into<String>, sort: Sort, args: Vec<MetaStructure>) -> MetaStructure {
        MetaStructure::App {
            conn: conn.into(),
            sort,
            args,
        }
    }

    pub fn formula(f: MetaFormula) -> MetaStructure {
        MetaStructure::Formula(f)
    }

    pub fn children(&self) -> &[MetaStructure] {
        match self {
            MetaStructure::App { args, .. } => args,
            _ => &[],
        }
    }

    /// Structure metavariables in pre-order, with repetitions.
    pub fn structure_vars(&self, out: &mut Vec<String>) {
        match self {
            MetaStructure::Var(v, _) => out.push(v.clone()),
            MetaStructure::App { args, .. } => args.iter().for_each(|a| a.structure_vars(out)),
            _ => {}
        }
    }

    /// All metavariables (structure and formula) in pre-order, with repetitions.
    pub fn all_vars(&self, out: &mut Vec<String>) {
        match self {
            MetaStructure::Var(v, _) => out.push(v.clone()),
            MetaStructure::App { args, .. } => args.iter().for_each(|a| a.all_vars(out)),
            MetaStructure::Formula(f) => f.collect_vars(out),
            _ => {}
        }
    }

    pub fn contains_formula(&self) -> bool {
        match self {
            MetaStructure::Formula(_) => true,
            MetaStructure::App { args, .. } => args.iter().any(|a| a.contains_formula()),
            _ => false,
        }
    }

    /// Paths (relative to this node) of every occurrence of structure
    /// variable `name`.
    pub fn var_paths(&self, name: &str) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        self.walk_var_paths(name, &mut cur, &mut out);
        out
    }

    fn walk_var_paths(&self, name: &str, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        match self {
            MetaStructure::Var(v, _) if v == name => out.push(cur.clone()),
            MetaStructure::App { args, .. } => {
                for (i, a) in args.iter().enumerate() {
                    cur.push(i);
                    a.walk_var_paths(name, cur, out);
                    cur.pop();
                }
            }
            _ => {}
        }
    }

    pub fn get(&self, path: &[usize]) -> Option<&MetaStructure> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.children().get(i)?.get(rest),
        }
    }

    /// Syntactic matching against a concrete structure, extending `inst`.
    /// Repeated variables must bind equal structures.
    pub fn matches(&self, s: &Structure, inst: &mut Instantiation) -> bool {
        match (self, s) {
            (MetaStructure::Var(v, _), _) => bind(inst, v, Binding::Structure(s.clone())),
            (MetaStructure::HatTop, Structure::HatTop) => true,
            (MetaStructure::CheckBot, Structure::CheckBot) => true,
            (
                MetaStructure::App { conn, sort, args },
                Structure::App {
                    conn: c2,
                    sort: s2,
                    args: a2,
                },
            ) => {
                conn == c2
                    && sort == s2
                    && args.len() == a2.len()
                    && args.iter().zip(a2).all(|(p, t)| p.matches(t, inst))
            }
            (MetaStructure::Formula(p), Structure::Leaf(f)) => match_formula(p, f, inst),
            _ => false,
        }
    }

    /// Applies an instantiation. Unbound variables yield `None`.
    pub fn instantiate(&self, inst: &Instantiation) -> Option<Structure> {
        Some(match self {
            MetaStructure::Var(v, _) => match inst.get(v)? {
                Binding::Structure(s) => s.clone(),
                Binding::Formula(f) => Structure::Leaf(f.clone()),
            },
            MetaStructure::HatTop => Structure::HatTop,
            MetaStructure::CheckBot => Structure::CheckBot,
            MetaStructure::App { conn, sort, args } => Structure::App {
                conn: conn.clone(),
                sort: *sort,
                args: args
                    .iter()
                    .map(|a| a.instantiate(inst))
                    .collect::<Option<Vec<_>>>()?,
            },
            MetaStructure::Formula(f) => Structure::Leaf(instantiate_formula(f, inst)?),
        })
    }
}

impl fmt::Display for MetaStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetaStructure::Var(v, _) => write!(f, "{v}"),
            MetaStructure::HatTop => write!(f, "@top"),
            MetaStructure::CheckBot => write!(f, "#bot"),
            MetaStructure::App { conn, sort, args } => {
                write!(f, "{}{conn}", flavor_prefix(*sort))?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ", ")?;
                        }
                        write!(f, "{a}")?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
            MetaStructure::Formula(phi) => write!(f, "{phi}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MetaSequent {
    pub ante: MetaStructure,
    pub succ: MetaStructure,
}

impl MetaSequent {
    pub fn new(ante: MetaStructure, succ: MetaStructure) -> MetaSequent {
        MetaSequent { ante, succ }
    }

    pub fn side(&self, side: Side) -> &MetaStructure {
        match side {
            Side::Ante => &self.ante,
            Side::Succ => &self.succ,
        }
    }

    pub fn structure_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.ante.structure_vars(&mut out);
        self.succ.structure_vars(&mut out);
        out
    }

    pub fn all_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.ante.all_vars(&mut out);
        self.succ.all_vars(&mut out);
        out
    }

    /// Every occurrence of structure variable `name`, as sequent occurrences.
    pub fn var_occurrences(&self, name: &str) -> Vec<Occurrence> {
        let mut out = Vec::new();
        for side in [Side::Ante, Side::Succ] {
            for path in self.side(side).var_paths(name) {
                out.push(Occurrence::new(side, path));
            }
        }
        out
    }

    pub fn matches(&self, s: &Sequent, inst: &mut Instantiation) -> bool {
        self.ante.matches(&s.ante, inst) && self.succ.matches(&s.succ, inst)
    }

    pub fn instantiate(&self, inst: &Instantiation) -> Option<Sequent> {
        Some(Sequent::new(
            self.ante.instantiate(inst)?,
            self.succ.instantiate(inst)?,
        ))
    }

    /// Classifies a concrete occurrence of an instance of this pattern.
    pub fn locate(&self, occ: &Occurrence) -> Located {
        let mut node = self.side(occ.side);
        for (depth, &i) in occ.path.iter().enumerate() {
            match node {
                MetaStructure::Var(v, _) => {
                    return Located::InVar {
                        var: v.clone(),
                        rest: occ.path[depth..].to_vec(),
                    }
                }
                MetaStructure::App { args, .. } if i < args.len() => node = &args[i],
                _ => return Located::Invalid,
            }
        }
        match node {
            MetaStructure::Var(v, _) => Located::InVar {
                var: v.clone(),
                rest: vec![],
            },
            _ => Located::Pattern,
        }
    }
}

impl fmt::Display for MetaSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |- {}", self.ante, self.succ)
    }
}

/// Where a concrete occurrence sits relative to a pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Located {
    /// Inside the image of a structure variable, at `rest` below it.
    InVar { var: String, rest: Vec<usize> },
    /// On a node written explicitly in the pattern.
    Pattern,
    Invalid,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Binding {
    Structure(Structure),
    Formula(Formula),
}

impl Binding {
    pub fn as_structure(&self) -> Structure {
        match self {
            Binding::Structure(s) => s.clone(),
            Binding::Formula(f) => Structure::Leaf(f.clone()),
        }
    }
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Binding::Structure(s) => write!(f, "{s}"),
            Binding::Formula(phi) => write!(f, "{phi}"),
        }
    }
}

impl Serialize for Binding {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Metavariable name to binding, ordered for stable output.
pub type Instantiation = BTreeMap<String, Binding>;

fn bind(inst: &mut Instantiation, name: &str, b: Binding) -> bool {
    match inst.get(name) {
        Some(old) => *old == b,
        None => {
            inst.insert(name.to_string(), b);
            true
        }
    }
}

fn match_formula(p: &MetaFormula, f: &Formula, inst: &mut Instantiation) -> bool {
    match (p, f) {
        (MetaFormula::Var(v), _) => bind(inst, v, Binding::Formula(f.clone())),
        (MetaFormula::AtomVar(v), Formula::Atom(_)) => bind(inst, v, Binding::Formula(f.clone())),
        (MetaFormula::Atom(a), Formula::Atom(b)) => a.as_str() == &**b,
        (MetaFormula::Top, Formula::Top) | (MetaFormula::Bot, Formula::Bot) => true,
        (MetaFormula::And(a, b), Formula::And(c, d)) | (MetaFormula::Or(a, b), Formula::Or(c, d)) => {
            match_formula(a, c, inst) && match_formula(b, d, inst)
        }
        (MetaFormula::App(c, args), Formula::App(c2, a2)) => {
            c.as_str() == &**c2 && args.len() == a2.len() && args.iter().zip(a2.iter()).all(|(p, t)| match_formula(p, t, inst))
        }
        _ => false,
    }
}

fn instantiate_formula(p: &MetaFormula, inst: &Instantiation) -> Option<Formula> {
    Some(match p {
        MetaFormula::Var(v) | MetaFormula::AtomVar(v) => match inst.get(v)? {
            Binding::Formula(f) => f.clone(),
            Binding::Structure(Structure::Leaf(f)) => f.clone(),
            Binding::Structure(_) => return None,
        },
        MetaFormula::Atom(a) => Formula::atom(a),
        MetaFormula::Top => Formula::Top,
        MetaFormula::Bot => Formula::Bot,
        MetaFormula::And(a, b) => Formula::and(instantiate_formula(a, inst)?, instantiate_formula(b, inst)?),
        MetaFormula::Or(a, b) => Formula::or(instantiate_formula(a, inst)?, instantiate_formula(b, inst)?),
        MetaFormula::App(c, args) => Formula::App(
            c.as_str().into(),
            args.iter()
                .map(|a| instantiate_formula(a, inst))
                .collect::<Option<Vec<_>>>()?
                .into(),
        ),
    })
}
