//! LE-signatures: connective families, order-types and residuals.
//!
//! A signature lists the connectives of the object language. Each connective
//! belongs to the join-like family `F` or the meet-like family `G`, has an
//! arity and an order-type recording, per coordinate, whether it is monotone
//! (`+`) or antitone (`-`). The residual closure adds, for every primitive
//! connective and every coordinate, the residual connective used by the
//! display postulates.

use std::fmt;

use indexmap::IndexMap;

use crate::error::{Error, Result};

/// Monotonicity of one coordinate: covariant (`1`) or contravariant (`∂`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Co,
    Contra,
}

impl Polarity {
    pub fn dual(self) -> Polarity {
        match self {
            Polarity::Co => Polarity::Contra,
            Polarity::Contra => Polarity::Co,
        }
    }

    /// `self` raised to `exp`: identity when `exp` is covariant, duality otherwise.
    pub fn raise(self, exp: Polarity) -> Polarity {
        match exp {
            Polarity::Co => self,
            Polarity::Contra => self.dual(),
        }
    }

    /// Composition along a path: two contravariant steps cancel.
    pub fn compose(self, other: Polarity) -> Polarity {
        self.raise(other)
    }

    pub fn symbol(self) -> char {
        match self {
            Polarity::Co => '+',
            Polarity::Contra => '-',
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Polarity::Co => write!(f, "1"),
            Polarity::Contra => write!(f, "∂"),
        }
    }
}

/// Per-coordinate polarities of a connective. Empty for constants.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct OrderType(pub Vec<Polarity>);

impl OrderType {
    pub fn new(coords: Vec<Polarity>) -> Self {
        OrderType(coords)
    }

    /// Parses a `+`/`-` string, one character per coordinate.
    pub fn parse(text: &str) -> Result<Self> {
        text.chars()
            .enumerate()
            .map(|(i, c)| match c {
                '+' => Ok(Polarity::Co),
                '-' => Ok(Polarity::Contra),
                other => Err(Error::parse(i, format!("bad order-type symbol `{other}`"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(OrderType)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Coordinate `i`, zero-based.
    pub fn at(&self, i: usize) -> Polarity {
        self.0[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = Polarity> + '_ {
        self.0.iter().copied()
    }

    /// The opposite order-type, flipping every coordinate.
    pub fn dual(&self) -> OrderType {
        OrderType(self.0.iter().map(|p| p.dual()).collect())
    }

    pub fn signs(&self) -> String {
        self.0.iter().map(|p| p.symbol()).collect()
    }
}

impl fmt::Display for OrderType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Connective family, which is also the sort of the structures it builds:
/// `F`-structures live in antecedents, `G`-structures in succedents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    F,
    G,
}

impl Sort {
    pub fn flip(self) -> Sort {
        match self {
            Sort::F => Sort::G,
            Sort::G => Sort::F,
        }
    }

    /// Sort of an argument in a coordinate of the given polarity.
    pub fn under(self, p: Polarity) -> Sort {
        match p {
            Polarity::Co => self,
            Polarity::Contra => self.flip(),
        }
    }

    /// `1` for `F` (displayed on the left), `∂` for `G`.
    pub fn epsilon(self) -> Polarity {
        match self {
            Sort::F => Polarity::Co,
            Sort::G => Polarity::Contra,
        }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::F => write!(f, "F"),
            Sort::G => write!(f, "G"),
        }
    }
}

/// Records that a connective is the residual of `parent` in coordinate `coord`
/// (one-based). `galois` is set when that coordinate is antitone.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ResidualLink {
    pub parent: String,
    pub coord: usize,
    pub galois: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connective {
    pub name: String,
    pub family: Sort,
    pub arity: usize,
    pub order_type: OrderType,
    /// Whether the connective may appear in formulas; structural-only
    /// connectives live in structures exclusively.
    pub operational: bool,
    pub residual_of: Option<ResidualLink>,
    /// Coordinate (one-based) in which this connective is its own residual.
    pub self_residual: Option<usize>,
}

impl Connective {
    pub fn new(name: impl Into<String>, family: Sort, order_type: OrderType) -> Self {
        Connective {
            name: name.into(),
            family,
            arity: order_type.len(),
            order_type,
            operational: true,
            residual_of: None,
            self_residual: None,
        }
    }

    pub fn structural_only(mut self) -> Self {
        self.operational = false;
        self
    }

    pub fn is_primitive(&self) -> bool {
        self.residual_of.is_none()
    }

    /// Sort of argument `i` (zero-based).
    pub fn arg_sort(&self, i: usize) -> Sort {
        self.family.under(self.order_type.at(i))
    }
}

/// Family and order-type of the residual of `c` in coordinate `coord`
/// (one-based).
///
/// The coordinate itself keeps its polarity; every other coordinate `j` is
/// raised to the dual of `c`'s polarity at `coord`. The family flips exactly
/// when that coordinate is monotone.
pub fn residual_order_type(c: &Connective, coord: usize) -> Result<(Sort, OrderType)> {
    if coord == 0 || coord > c.order_type.len() {
        return Err(Error::Coordinate {
            conn: c.name.clone(),
            coord,
            arity: c.order_type.len(),
        });
    }
    let pivot = c.order_type.at(coord - 1);
    let family = match pivot {
        Polarity::Co => c.family.flip(),
        Polarity::Contra => c.family,
    };
    let coords = c
        .order_type
        .iter()
        .enumerate()
        .map(|(j, p)| if j == coord - 1 { p } else { p.raise(pivot.dual()) })
        .collect();
    Ok((family, OrderType(coords)))
}

/// Kinds of signature-invariant violations reported by [`Signature::validate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    OrderTypeLength,
    UnresolvedResidual,
    ResidualCoordinate,
    ResidualMismatch,
    ConflictingResidual,
    ReservedName,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub connective: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.connective, self.message)
    }
}

pub(crate) const RESERVED: &[&str] = &["top", "bot"];

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub logic: Option<String>,
    pub atoms: Vec<String>,
    connectives: IndexMap<String, Connective>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_logic(mut self, name: impl Into<String>) -> Self {
        self.logic = Some(name.into());
        self
    }

    /// Adds a connective. Names must be unique across both families.
    pub fn add(&mut self, c: Connective) -> Result<()> {
        if self.connectives.contains_key(&c.name) {
            return Err(Error::Signature(format!("duplicate connective `{}`", c.name)));
        }
        self.connectives.insert(c.name.clone(), c);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Connective> {
        self.connectives.get(name)
    }

    pub fn lookup(&self, name: &str) -> Result<&Connective> {
        self.get(name)
            .ok_or_else(|| Error::UnknownConnective(name.to_string()))
    }

    pub(crate) fn get_mut(&mut self, name: &str) -> Option<&mut Connective> {
        self.connectives.get_mut(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.connectives.contains_key(name)
    }

    /// Connectives in declaration order.
    pub fn connectives(&self) -> impl Iterator<Item = &Connective> {
        self.connectives.values()
    }

    pub fn primitives(&self) -> impl Iterator<Item = &Connective> {
        self.connectives().filter(|c| c.is_primitive())
    }

    pub fn family(&self, sort: Sort) -> impl Iterator<Item = &Connective> {
        self.connectives().filter(move |c| c.family == sort)
    }

    /// Every connective other than the lattice operations is unary.
    pub fn all_unary(&self) -> bool {
        self.connectives().all(|c| c.arity == 1)
    }

    /// All connectives that claim to be the residual of `parent` in `coord`.
    fn residual_claims(&self, parent: &str, coord: usize) -> Vec<&Connective> {
        let mut out: Vec<&Connective> = self
            .connectives()
            .filter(|c| {
                c.residual_of
                    .as_ref()
                    .is_some_and(|l| l.parent == parent && l.coord == coord)
            })
            .collect();
        if let Some(p) = self.get(parent) {
            if p.self_residual == Some(coord) {
                out.insert(0, p);
            }
        }
        out
    }

    /// The residual of `parent` in coordinate `coord` (one-based), if declared.
    pub fn residual(&self, parent: &str, coord: usize) -> Option<&Connective> {
        self.residual_claims(parent, coord).into_iter().next()
    }

    /// Expands the signature with one residual per primitive connective and
    /// coordinate. Residuals already declared (explicitly or as self-residuals)
    /// are reused; missing ones get the name `name.sharp.i` (for `F`) or
    /// `name.flat.i` (for `G`) and are structural-only. Residuals are not
    /// themselves residuated.
    pub fn residual_closure(&self) -> Result<Signature> {
        let mut out = self.clone();
        let primitives: Vec<Connective> = self.primitives().cloned().collect();
        for c in &primitives {
            for coord in 1..=c.order_type.len() {
                let claims = self.residual_claims(&c.name, coord);
                match claims.len() {
                    0 => {
                        let (family, order_type) = residual_order_type(c, coord)?;
                        let tag = match c.family {
                            Sort::F => "sharp",
                            Sort::G => "flat",
                        };
                        let name = format!("{}.{}.{}", c.name, tag, coord);
                        let mut r = Connective::new(name, family, order_type).structural_only();
                        r.residual_of = Some(ResidualLink {
                            parent: c.name.clone(),
                            coord,
                            galois: c.order_type.at(coord - 1) == Polarity::Contra,
                        });
                        out.add(r)?;
                    }
                    1 => {}
                    _ => {
                        let names: Vec<&str> = claims.iter().map(|c| c.name.as_str()).collect();
                        return Err(Error::Signature(format!(
                            "conflicting residual declarations for `{}` coordinate {}: {}",
                            c.name,
                            coord,
                            names.join(", ")
                        )));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Whether every primitive has a residual in each coordinate.
    pub fn is_closed(&self) -> bool {
        self.primitives().all(|c| {
            (1..=c.order_type.len()).all(|i| self.residual(&c.name, i).is_some())
        })
    }

    /// Checks every signature invariant; an empty list means valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut push = |kind, conn: &str, message: String| {
            out.push(Violation {
                kind,
                connective: conn.to_string(),
                message,
            })
        };
        for c in self.connectives() {
            if RESERVED.contains(&c.name.as_str()) {
                push(
                    ViolationKind::ReservedName,
                    &c.name,
                    format!("reserved name `{}`", c.name),
                );
            }
            if c.order_type.len() != c.arity {
                push(
                    ViolationKind::OrderTypeLength,
                    &c.name,
                    format!(
                        "order-type length {} does not match arity {}",
                        c.order_type.len(),
                        c.arity
                    ),
                );
                continue;
            }
            if let Some(s) = c.self_residual {
                if s == 0 || s > c.arity {
                    push(
                        ViolationKind::ResidualCoordinate,
                        &c.name,
                        format!("self-residual coordinate {s} out of range"),
                    );
                } else if let Ok((fam, ot)) = residual_order_type(c, s) {
                    if fam != c.family || ot != c.order_type {
                        push(
                            ViolationKind::ResidualMismatch,
                            &c.name,
                            format!(
                                "cannot be its own residual in coordinate {s}: residual would be {fam} {ot}"
                            ),
                        );
                    }
                }
            }
            let Some(link) = &c.residual_of else { continue };
            let Some(parent) = self.get(&link.parent) else {
                push(
                    ViolationKind::UnresolvedResidual,
                    &c.name,
                    format!("unresolved residual: unknown parent `{}`", link.parent),
                );
                continue;
            };
            if link.coord == 0 || link.coord > parent.arity || parent.order_type.len() != parent.arity
            {
                push(
                    ViolationKind::ResidualCoordinate,
                    &c.name,
                    format!(
                        "residual coordinate {} out of range for `{}`",
                        link.coord, parent.name
                    ),
                );
                continue;
            }
            if !parent.is_primitive() {
                push(
                    ViolationKind::UnresolvedResidual,
                    &c.name,
                    format!("unresolved residual: parent `{}` is itself a residual", parent.name),
                );
            }
            if let Ok((fam, ot)) = residual_order_type(parent, link.coord) {
                if fam != c.family || ot != c.order_type {
                    push(
                        ViolationKind::ResidualMismatch,
                        &c.name,
                        format!(
                            "residual of `{}` in coordinate {} must be {fam} {ot}, found {} {}",
                            parent.name, link.coord, c.family, c.order_type
                        ),
                    );
                }
            }
        }
        for c in self.primitives() {
            for coord in 1..=c.order_type.len() {
                let claims = self.residual_claims(&c.name, coord);
                if claims.len() > 1 {
                    let names: Vec<&str> = claims.iter().map(|c| c.name.as_str()).collect();
                    push(
                        ViolationKind::ConflictingResidual,
                        &c.name,
                        format!(
                            "conflicting residuals in coordinate {coord}: {}",
                            names.join(", ")
                        ),
                    );
                }
            }
        }
        out
    }

    /// Parses the line-oriented `.lsig` format.
    ///
    /// ```text
    /// logic fundamental
    /// atoms p q r
    /// conn F dia 1 +
    /// conn G neg 1 -
    /// residual sharp dia 1 blacksquare
    /// selfgalois neg 1
    /// operational blacksquare
    /// ```
    pub fn parse(text: &str) -> Result<Signature> {
        let mut sig = Signature::new();
        let mut residuals = Vec::new();
        let mut self_galois = Vec::new();
        let mut operational = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::RuleFile {
                line: lineno + 1,
                msg,
            };
            let words: Vec<&str> = line.split_whitespace().collect();
            match words[0] {
                "logic" => sig.logic = Some(words[1..].join(" ")),
                "atoms" => sig.atoms.extend(words[1..].iter().map(|w| w.to_string())),
                "conn" => {
                    if words.len() < 4 || words.len() > 5 {
                        return Err(err("expected `conn <F|G> <name> <arity> <order-type>`".into()));
                    }
                    let family = parse_family(words[1]).ok_or_else(|| err("family must be F or G".into()))?;
                    let name = words[2];
                    check_name(name).map_err(err)?;
                    let arity: usize = words[3]
                        .parse()
                        .map_err(|_| err(format!("bad arity `{}`", words[3])))?;
                    let ot = OrderType::parse(words.get(4).copied().unwrap_or(""))
                        .map_err(|e| err(e.to_string()))?;
                    let mut c = Connective::new(name, family, ot);
                    c.arity = arity;
                    sig.add(c).map_err(|e| err(e.to_string()))?;
                }
                "residual" => {
                    if words.len() != 5 {
                        return Err(err(
                            "expected `residual <sharp|flat> <parent> <coord> <name>`".into(),
                        ));
                    }
                    let coord: usize = words[3]
                        .parse()
                        .map_err(|_| err(format!("bad coordinate `{}`", words[3])))?;
                    check_name(words[4]).map_err(err)?;
                    residuals.push((lineno + 1, words[1].to_string(), words[2].to_string(), coord, words[4].to_string()));
                }
                "selfgalois" => {
                    if words.len() != 3 {
                        return Err(err("expected `selfgalois <name> <coord>`".into()));
                    }
                    let coord: usize = words[2]
                        .parse()
                        .map_err(|_| err(format!("bad coordinate `{}`", words[2])))?;
                    self_galois.push((lineno + 1, words[1].to_string(), coord));
                }
                "operational" => operational.extend(words[1..].iter().map(|w| (lineno + 1, w.to_string()))),
                other => return Err(err(format!("unknown directive `{other}`"))),
            }
        }
        for (line, tag, parent, coord, name) in residuals {
            let err = |msg: String| Error::RuleFile { line, msg };
            let expected = sig.get(&parent).map(|p| match p.family {
                Sort::F => "sharp",
                Sort::G => "flat",
            });
            if tag != "sharp" && tag != "flat" {
                return Err(err(format!("expected `sharp` or `flat`, found `{tag}`")));
            }
            if let Some(exp) = expected {
                if exp != tag {
                    return Err(err(format!("`{parent}` takes `{exp}` residuals")));
                }
            }
            let galois = sig
                .get(&parent)
                .filter(|p| coord >= 1 && coord <= p.order_type.len())
                .map(|p| p.order_type.at(coord - 1) == Polarity::Contra)
                .unwrap_or(false);
            let link = ResidualLink {
                parent: parent.clone(),
                coord,
                galois,
            };
            if let Some(existing) = sig.get_mut(&name) {
                existing.residual_of = Some(link);
                continue;
            }
            let (family, order_type) = match sig.get(&parent) {
                Some(p) => residual_order_type(p, coord).map_err(|e| err(e.to_string()))?,
                // Left for validate() to report as unresolved.
                None => (Sort::G, OrderType::default()),
            };
            let mut c = Connective::new(name, family, order_type).structural_only();
            c.residual_of = Some(link);
            sig.add(c).map_err(|e| err(e.to_string()))?;
        }
        for (line, name, coord) in self_galois {
            let c = sig.get_mut(&name).ok_or_else(|| Error::RuleFile {
                line,
                msg: format!("unknown connective `{name}`"),
            })?;
            c.self_residual = Some(coord);
        }
        for (line, name) in operational {
            let c = sig.get_mut(&name).ok_or_else(|| Error::RuleFile {
                line,
                msg: format!("unknown connective `{name}`"),
            })?;
            c.operational = true;
        }
        Ok(sig)
    }

    /// Renders the signature back into `.lsig` text.
    pub fn to_lsig(&self) -> String {
        let mut out = String::new();
        if let Some(l) = &self.logic {
            out.push_str(&format!("logic {l}\n"));
        }
        if !self.atoms.is_empty() {
            out.push_str(&format!("atoms {}\n", self.atoms.join(" ")));
        }
        for c in self.connectives().filter(|c| c.is_primitive()) {
            out.push_str(&format!(
                "conn {} {} {} {}\n",
                c.family,
                c.name,
                c.arity,
                c.order_type.signs()
            ));
        }
        for c in self.connectives() {
            if let Some(l) = &c.residual_of {
                let tag = match self.get(&l.parent).map(|p| p.family) {
                    Some(Sort::G) => "flat",
                    _ => "sharp",
                };
                out.push_str(&format!("residual {tag} {} {} {}\n", l.parent, l.coord, c.name));
            }
        }
        for c in self.connectives() {
            if let Some(s) = c.self_residual {
                out.push_str(&format!("selfgalois {} {s}\n", c.name));
            }
        }
        let ops: Vec<&str> = self
            .connectives()
            .filter(|c| !c.is_primitive() && c.operational)
            .map(|c| c.name.as_str())
            .collect();
        if !ops.is_empty() {
            out.push_str(&format!("operational {}\n", ops.join(" ")));
        }
        out
    }
}

fn parse_family(s: &str) -> Option<Sort> {
    match s {
        "F" => Some(Sort::F),
        "G" => Some(Sort::G),
        _ => None,
    }
}

fn check_name(name: &str) -> std::result::Result<(), String> {
    let mut chars = name.chars();
    let ok_first = chars.next().is_some_and(|c| c.is_ascii_lowercase());
    let ok_rest = chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.');
    if !ok_first || !ok_rest {
        return Err(format!("invalid connective name `{name}`"));
    }
    if RESERVED.contains(&name) {
        return Err(format!("reserved name `{name}`"));
    }
    Ok(())
}
