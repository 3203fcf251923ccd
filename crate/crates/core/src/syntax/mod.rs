//! Formulas, two-sorted structures, sequents and occurrence paths.

mod parse;
mod polarity;

use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::signature::{Signature, Sort};

pub use parse::{parse_formula, parse_sequent, parse_structure, Term, TermKind};
pub(crate) use parse::Parser;
pub use polarity::{context_vars, signed_vars_formula, signed_vars_structure, SignedVars};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(Arc<str>),
    Top,
    Bot,
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    App(Arc<str>, Arc<[Formula]>),
}

impl Formula {
    pub fn atom(name: impl AsRef<str>) -> Formula {
        Formula::Atom(name.as_ref().into())
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Arc::new(a), Arc::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Arc::new(a), Arc::new(b))
    }

    pub fn app(name: impl AsRef<str>, args: Vec<Formula>) -> Formula {
        Formula::App(name.as_ref().into(), args.into())
    }

    /// `⊤` for sort `F`, `⊥` for sort `G`: the unit of the combination used
    /// for interpolants of that sort.
    pub fn unit(sort: Sort) -> Formula {
        match sort {
            Sort::F => Formula::Top,
            Sort::G => Formula::Bot,
        }
    }

    /// Meet for sort `F`, join for sort `G`.
    pub fn combine(sort: Sort, a: Formula, b: Formula) -> Formula {
        match sort {
            Sort::F => Formula::and(a, b),
            Sort::G => Formula::or(a, b),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bot => 1,
            Formula::And(a, b) | Formula::Or(a, b) => 1 + a.size() + b.size(),
            Formula::App(_, args) => 1 + args.iter().map(Formula::size).sum::<usize>(),
        }
    }

    /// Height of the syntax tree; atoms and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bot => 0,
            Formula::And(a, b) | Formula::Or(a, b) => 1 + a.depth().max(b.depth()),
            Formula::App(_, args) => 1 + args.iter().map(Formula::depth).max().unwrap_or(0),
        }
    }

    /// Connective names used, excluding the lattice operations.
    pub fn connectives(&self, out: &mut Vec<String>) {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bot => {}
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.connectives(out);
                b.connectives(out);
            }
            Formula::App(name, args) => {
                if !out.iter().any(|n| **n == **name) {
                    out.push(name.to_string());
                }
                for a in args.iter() {
                    a.connectives(out);
                }
            }
        }
    }

    /// Checks arities and, unless `allow_structural`, that every connective
    /// is operational.
    pub fn check(&self, sig: &Signature, allow_structural: bool) -> Result<()> {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bot => Ok(()),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.check(sig, allow_structural)?;
                b.check(sig, allow_structural)
            }
            Formula::App(name, args) => {
                let c = sig.lookup(name)?;
                if !c.operational && !allow_structural {
                    return Err(Error::NotOperational(name.to_string()));
                }
                if args.len() != c.arity {
                    return Err(Error::Arity(format!(
                        "`{name}` expects {} arguments, found {}",
                        c.arity,
                        args.len()
                    )));
                }
                args.iter().try_for_each(|a| a.check(sig, allow_structural))
            }
        }
    }

    fn fmt_arg(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::And(..) | Formula::Or(..) => write!(f, "({self})"),
            _ => write!(f, "{self}"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(p) => write!(f, "{p}"),
            Formula::Top => write!(f, "top"),
            Formula::Bot => write!(f, "bot"),
            Formula::And(a, b) => {
                a.fmt_arg(f)?;
                write!(f, " /\\ ")?;
                b.fmt_arg(f)
            }
            Formula::Or(a, b) => {
                a.fmt_arg(f)?;
                write!(f, " \\/ ")?;
                b.fmt_arg(f)
            }
            Formula::App(name, args) => {
                write!(f, "{name}")?;
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

/// A structure term. Formula leaves take the sort of their position; the
/// other variants carry their sort: `HatTop` and hat-applications (`@`) are
/// `F`, `CheckBot` and check-applications (`#`) are `G`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Structure {
    Leaf(Formula),
    HatTop,
    CheckBot,
    App {
        conn: String,
        sort: Sort,
        args: Vec<Structure>,
    },
}

impl Structure {
    pub fn leaf(f: Formula) -> Structure {
        Structure::Leaf(f)
    }

    pub fn app(conn: impl Into<String>, sort: Sort, args: Vec<Structure>) -> Structure {
        Structure::App {
            conn: conn.into(),
            sort,
            args,
        }
    }

    /// Intrinsic sort, `None` for formula leaves.
    pub fn intrinsic_sort(&self) -> Option<Sort> {
        match self {
            Structure::Leaf(_) => None,
            Structure::HatTop => Some(Sort::F),
            Structure::CheckBot => Some(Sort::G),
            Structure::App { sort, .. } => Some(*sort),
        }
    }

    pub fn as_leaf(&self) -> Option<&Formula> {
        match self {
            Structure::Leaf(f) => Some(f),
            _ => None,
        }
    }

    pub fn is_formula(&self) -> bool {
        matches!(self, Structure::Leaf(_))
    }

    pub fn children(&self) -> &[Structure] {
        match self {
            Structure::App { args, .. } => args,
            _ => &[],
        }
    }

    /// Total number of nodes, counting formula nodes inside leaves.
    pub fn size(&self) -> usize {
        match self {
            Structure::Leaf(f) => f.size(),
            Structure::HatTop | Structure::CheckBot => 1,
            Structure::App { args, .. } => 1 + args.iter().map(Structure::size).sum::<usize>(),
        }
    }

    /// Whether the structure contains no structural connective applications.
    pub fn is_flat(&self) -> bool {
        !matches!(self, Structure::App { .. })
    }

    /// Checks the sort discipline against `sig`, given the expected sort.
    pub fn check(&self, sig: &Signature, expected: Sort) -> Result<()> {
        match self {
            Structure::Leaf(f) => f.check(sig, false),
            Structure::HatTop | Structure::CheckBot => {
                let s = self.intrinsic_sort().unwrap();
                if s != expected {
                    return Err(Error::Sort(format!("`{self}` is {s}-sorted, expected {expected}")));
                }
                Ok(())
            }
            Structure::App { conn, sort, args } => {
                let c = sig.lookup(conn)?;
                if c.family != *sort {
                    return Err(Error::Sort(format!(
                        "`{conn}` is a {}-connective and cannot be used with `{}`",
                        c.family,
                        flavor_prefix(*sort)
                    )));
                }
                if *sort != expected {
                    return Err(Error::Sort(format!("`{self}` is {sort}-sorted, expected {expected}")));
                }
                if args.len() != c.arity {
                    return Err(Error::Arity(format!(
                        "`{conn}` expects {} arguments, found {}",
                        c.arity,
                        args.len()
                    )));
                }
                for (i, a) in args.iter().enumerate() {
                    a.check(sig, c.arg_sort(i))?;
                }
                Ok(())
            }
        }
    }

    /// Replaces every structural connective by its logical counterpart.
    /// With `allow_structural` unset, structural-only connectives are rejected.
    pub fn to_formula(&self, sig: &Signature, allow_structural: bool) -> Result<Formula> {
        match self {
            Structure::Leaf(f) => Ok(f.clone()),
            Structure::HatTop => Ok(Formula::Top),
            Structure::CheckBot => Ok(Formula::Bot),
            Structure::App { conn, args, .. } => {
                let c = sig.lookup(conn)?;
                if !c.operational && !allow_structural {
                    return Err(Error::NotOperational(conn.clone()));
                }
                let args = args
                    .iter()
                    .map(|a| a.to_formula(sig, allow_structural))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Formula::app(conn, args))
            }
        }
    }

    pub fn get(&self, path: &[usize]) -> Option<&Structure> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.children().get(i)?.get(rest),
        }
    }

    /// Replaces the subterm at `path`. Panics on invalid paths; callers
    /// validate occurrences first.
    pub fn replace(&self, path: &[usize], new: Structure) -> Structure {
        match path.split_first() {
            None => new,
            Some((&i, rest)) => match self {
                Structure::App { conn, sort, args } => {
                    let mut args = args.clone();
                    args[i] = args[i].replace(rest, new);
                    Structure::App {
                        conn: conn.clone(),
                        sort: *sort,
                        args,
                    }
                }
                _ => panic!("path through a non-application structure"),
            },
        }
    }

    /// All node paths in pre-order, the root first.
    pub fn paths(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        self.collect_paths(&mut cur, &mut out);
        out
    }

    fn collect_paths(&self, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        for (i, c) in self.children().iter().enumerate() {
            cur.push(i);
            c.collect_paths(cur, out);
            cur.pop();
        }
    }
}

pub(crate) fn flavor_prefix(sort: Sort) -> char {
    match sort {
        Sort::F => '@',
        Sort::G => '#',
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Structure::Leaf(phi) => write!(f, "{phi}"),
            Structure::HatTop => write!(f, "@top"),
            Structure::CheckBot => write!(f, "#bot"),
            Structure::App { conn, sort, args } => {
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
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequent {
    pub ante: Structure,
    pub succ: Structure,
}

impl Sequent {
    pub fn new(ante: Structure, succ: Structure) -> Sequent {
        Sequent { ante, succ }
    }

    pub fn formulas(a: Formula, b: Formula) -> Sequent {
        Sequent::new(Structure::Leaf(a), Structure::Leaf(b))
    }

    pub fn side(&self, side: Side) -> &Structure {
        match side {
            Side::Ante => &self.ante,
            Side::Succ => &self.succ,
        }
    }

    pub fn check(&self, sig: &Signature) -> Result<()> {
        self.ante.check(sig, Sort::F)?;
        self.succ.check(sig, Sort::G)
    }

    pub fn size(&self) -> usize {
        self.ante.size() + self.succ.size()
    }

    /// Whether neither side contains a structural connective application.
    pub fn is_flat(&self) -> bool {
        self.ante.is_flat() && self.succ.is_flat()
    }

    /// Both sides as formulas, if they are formula leaves.
    pub fn as_formulas(&self) -> Option<(&Formula, &Formula)> {
        Some((self.ante.as_leaf()?, self.succ.as_leaf()?))
    }

    pub fn get(&self, occ: &Occurrence) -> Option<&Structure> {
        self.side(occ.side).get(&occ.path)
    }

    pub fn resolve(&self, occ: &Occurrence) -> Result<&Structure> {
        self.get(occ)
            .ok_or_else(|| Error::InvalidOccurrence(format!("{occ} in `{self}`")))
    }

    /// Path substitution `(Π ⊢ Σ)[new/occ]`.
    pub fn replace(&self, occ: &Occurrence, new: Structure) -> Sequent {
        match occ.side {
            Side::Ante => Sequent::new(self.ante.replace(&occ.path, new), self.succ.clone()),
            Side::Succ => Sequent::new(self.ante.clone(), self.succ.replace(&occ.path, new)),
        }
    }

    /// Sort of the node at `occ` (the sort it must have in its position).
    pub fn sort_at(&self, sig: &Signature, occ: &Occurrence) -> Result<Sort> {
        let mut sort = occ.side.sort();
        let mut node = self.side(occ.side);
        for &i in &occ.path {
            match node {
                Structure::App { conn, args, .. } if i < args.len() => {
                    sort = sig.lookup(conn)?.arg_sort(i);
                    node = &args[i];
                }
                _ => return Err(Error::InvalidOccurrence(format!("{occ} in `{self}`"))),
            }
        }
        Ok(sort)
    }

    /// Every occurrence in the sequent, antecedent first, pre-order.
    pub fn occurrences(&self) -> Vec<Occurrence> {
        let mut out = Vec::new();
        for side in [Side::Ante, Side::Succ] {
            for path in self.side(side).paths() {
                out.push(Occurrence { side, path });
            }
        }
        out
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |- {}", self.ante, self.succ)
    }
}

macro_rules! serialize_as_text {
    ($($t:ty),*) => {$(
        impl Serialize for $t {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }
    )*};
}
serialize_as_text!(Formula, Structure, Sequent, Occurrence);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Ante,
    Succ,
}

impl Side {
    pub fn sort(self) -> Sort {
        match self {
            Side::Ante => Sort::F,
            Side::Succ => Sort::G,
        }
    }

    pub fn other(self) -> Side {
        match self {
            Side::Ante => Side::Succ,
            Side::Succ => Side::Ante,
        }
    }
}

/// A position in a sequent: a side and a zero-based path of argument
/// indices. Paths stop at formula leaves. The textual form is one-based,
/// e.g. `ante.1.2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Occurrence {
    pub side: Side,
    pub path: Vec<usize>,
}

impl Occurrence {
    pub fn root(side: Side) -> Occurrence {
        Occurrence { side, path: vec![] }
    }

    pub fn ante() -> Occurrence {
        Occurrence::root(Side::Ante)
    }

    pub fn succ() -> Occurrence {
        Occurrence::root(Side::Succ)
    }

    pub fn new(side: Side, path: Vec<usize>) -> Occurrence {
        Occurrence { side, path }
    }

    pub fn is_root(&self) -> bool {
        self.path.is_empty()
    }

    pub fn child(&self, i: usize) -> Occurrence {
        let mut path = self.path.clone();
        path.push(i);
        Occurrence {
            side: self.side,
            path,
        }
    }

    /// Whether `self` lies at or below `other`.
    pub fn within(&self, other: &Occurrence) -> bool {
        self.side == other.side && self.path.starts_with(&other.path)
    }

    pub fn parse(text: &str) -> Result<Occurrence> {
        let mut parts = text.trim().split('.');
        let side = match parts.next() {
            Some("ante") => Side::Ante,
            Some("succ") => Side::Succ,
            _ => {
                return Err(Error::parse(
                    0,
                    format!("occurrence `{text}` must start with `ante` or `succ`"),
                ))
            }
        };
        let path = parts
            .map(|p| match p.parse::<usize>() {
                Ok(n) if n >= 1 => Ok(n - 1),
                _ => Err(Error::parse(0, format!("bad coordinate `{p}` in occurrence `{text}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Occurrence { side, path })
    }
}

impl fmt::Display for Occurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::Ante => write!(f, "ante")?,
            Side::Succ => write!(f, "succ")?,
        }
        for i in &self.path {
            write!(f, ".{}", i + 1)?;
        }
        Ok(())
    }
}
