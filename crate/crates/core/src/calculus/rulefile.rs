//! Reader for `.lrul` rule files.
//!
//! ```text
//! // comment
//! rule dia-box
//! X |- #box(#blacksquare(Y))
//! ----
//! X |- #blacksquare(#box(Y))
//! ```
//!
//! Premises come one per line before the `----` separator, the conclusion
//! after it. Uppercase identifiers are metavariables; their sort is inferred
//! from position and may be stated as `X:F` / `Y:G`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::signature::{Signature, Sort};
use crate::syntax::{Parser, Term, TermKind};

use super::{MetaFormula, MetaSequent, MetaStructure, RuleSchema};

pub fn parse_rules(text: &str, sig: &Signature) -> Result<Vec<RuleSchema>> {
    let sig = sig.residual_closure()?;
    let mut out: Vec<RuleSchema> = Vec::new();
    let mut current: Option<Pending> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with("//") {
            continue;
        }
        let err = |msg: String| Error::RuleFile { line: line_no, msg };
        if let Some(name) = line.strip_prefix("rule ") {
            if let Some(p) = current.take() {
                out.push(p.finish(&sig)?);
            }
            let name = name.trim();
            if name.is_empty() || name.contains(char::is_whitespace) {
                return Err(err(format!("bad rule name `{name}`")));
            }
            if out.iter().any(|r| r.name == name) {
                return Err(err(format!("duplicate rule `{name}`")));
            }
            current = Some(Pending {
                name: name.to_string(),
                line: line_no,
                premises: vec![],
                conclusion: None,
                seen_separator: false,
            });
            continue;
        }
        let p = current
            .as_mut()
            .ok_or_else(|| err("expected `rule <name>`".into()))?;
        if line.chars().all(|c| c == '-') && line.len() >= 2 {
            if p.seen_separator {
                return Err(err("second separator".into()));
            }
            p.seen_separator = true;
            continue;
        }
        let seq = Parser::new(line)
            .and_then(|mut parser| parser.sequent())
            .map_err(|e| err(e.to_string()))?;
        if p.seen_separator {
            if p.conclusion.is_some() {
                return Err(err("a rule has exactly one conclusion".into()));
            }
            p.conclusion = Some((line_no, seq));
        } else {
            p.premises.push((line_no, seq));
        }
    }
    if let Some(p) = current.take() {
        out.push(p.finish(&sig)?);
    }
    Ok(out)
}

struct Pending {
    name: String,
    line: usize,
    premises: Vec<(usize, (Term, Term))>,
    conclusion: Option<(usize, (Term, Term))>,
    seen_separator: bool,
}

impl Pending {
    fn finish(self, sig: &Signature) -> Result<RuleSchema> {
        let Some(conclusion) = self.conclusion else {
            return Err(Error::RuleFile {
                line: self.line,
                msg: format!("rule `{}` has no conclusion", self.name),
            });
        };
        let mut sorts = BTreeMap::new();
        let mut convert = |(line, (a, s)): (usize, (Term, Term))| -> Result<MetaSequent> {
            let wrap = |e: Error| Error::RuleFile {
                line,
                msg: e.to_string(),
            };
            Ok(MetaSequent::new(
                to_meta_structure(&a, sig, Sort::F, &mut sorts).map_err(wrap)?,
                to_meta_structure(&s, sig, Sort::G, &mut sorts).map_err(wrap)?,
            ))
        };
        let premises = self
            .premises
            .into_iter()
            .map(&mut convert)
            .collect::<Result<Vec<_>>>()?;
        let conclusion = convert(conclusion)?;
        Ok(RuleSchema::user(self.name, premises, conclusion))
    }
}

fn record_sort(
    sorts: &mut BTreeMap<String, Option<Sort>>,
    name: &str,
    sort: Option<Sort>,
    pos: usize,
) -> Result<()> {
    match sorts.get(name) {
        Some(old) if *old != sort => Err(Error::parse(
            pos,
            format!("metavariable `{name}` used at inconsistent sorts"),
        )),
        _ => {
            sorts.insert(name.to_string(), sort);
            Ok(())
        }
    }
}

fn to_meta_structure(
    t: &Term,
    sig: &Signature,
    expected: Sort,
    sorts: &mut BTreeMap<String, Option<Sort>>,
) -> Result<MetaStructure> {
    let sort_err = |found: Sort| {
        Error::parse(
            t.pos,
            format!("sort error: {found}-structure where a {expected}-structure is required"),
        )
    };
    match &t.kind {
        TermKind::Var(name, annotated) => {
            if let Some(s) = annotated {
                if *s != expected {
                    return Err(sort_err(*s));
                }
            }
            record_sort(sorts, name, Some(expected), t.pos)?;
            Ok(MetaStructure::Var(name.clone(), expected))
        }
        TermKind::HatTop if expected == Sort::F => Ok(MetaStructure::HatTop),
        TermKind::CheckBot if expected == Sort::G => Ok(MetaStructure::CheckBot),
        TermKind::HatTop => Err(sort_err(Sort::F)),
        TermKind::CheckBot => Err(sort_err(Sort::G)),
        TermKind::SApp(name, sort, args) => {
            let c = sig
                .get(name)
                .ok_or_else(|| Error::parse(t.pos, format!("unknown connective `{name}`")))?;
            if c.family != *sort {
                return Err(Error::parse(
                    t.pos,
                    format!("sort error: `{name}` is a {}-connective", c.family),
                ));
            }
            if *sort != expected {
                return Err(sort_err(*sort));
            }
            if args.len() != c.arity {
                return Err(Error::parse(
                    t.pos,
                    format!("`{name}` expects {} arguments, found {}", c.arity, args.len()),
                ));
            }
            let args = args
                .iter()
                .enumerate()
                .map(|(i, a)| to_meta_structure(a, sig, c.arg_sort(i), sorts))
                .collect::<Result<Vec<_>>>()?;
            Ok(MetaStructure::app(name, *sort, args))
        }
        _ => Ok(MetaStructure::Formula(to_meta_formula(t, sig, sorts)?)),
    }
}

fn to_meta_formula(
    t: &Term,
    sig: &Signature,
    sorts: &mut BTreeMap<String, Option<Sort>>,
) -> Result<MetaFormula> {
    Ok(match &t.kind {
        TermKind::Var(name, annotated) => {
            if annotated.is_some() {
                return Err(Error::parse(t.pos, "formula metavariables carry no sort"));
            }
            record_sort(sorts, name, None, t.pos)?;
            MetaFormula::Var(name.clone())
        }
        TermKind::Top => MetaFormula::Top,
        TermKind::Bot => MetaFormula::Bot,
        TermKind::Name(n) => match sig.get(n) {
            Some(c) if c.arity == 0 => MetaFormula::App(n.clone(), vec![]),
            Some(_) => return Err(Error::parse(t.pos, format!("`{n}` needs arguments"))),
            None => MetaFormula::Atom(n.clone()),
        },
        TermKind::And(a, b) => MetaFormula::and(to_meta_formula(a, sig, sorts)?, to_meta_formula(b, sig, sorts)?),
        TermKind::Or(a, b) => MetaFormula::or(to_meta_formula(a, sig, sorts)?, to_meta_formula(b, sig, sorts)?),
        TermKind::Call(n, args) => {
            let c = sig
                .get(n)
                .ok_or_else(|| Error::parse(t.pos, format!("unknown connective `{n}`")))?;
            if args.len() != c.arity {
                return Err(Error::parse(t.pos, format!("`{n}` expects {} arguments", c.arity)));
            }
            MetaFormula::App(
                n.clone(),
                args.iter()
                    .map(|a| to_meta_formula(a, sig, sorts))
                    .collect::<Result<Vec<_>>>()?,
            )
        }
        TermKind::HatTop | TermKind::CheckBot | TermKind::SApp(..) => {
            return Err(Error::parse(t.pos, "structural connective inside a formula"))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn reads_fundamental_rules() {
        let sig = presets::signature("fundamental").unwrap();
        let rules = parse_rules(presets::rules_text("fundamental").unwrap(), &sig).unwrap();
        let names: Vec<&str> = rules.iter().map(|r| r.name.as_str()).collect();
        assert_eq!(names, ["negation", "dia-neg"]);
        assert_eq!(rules[0].premises[0].to_string(), "X |- #neg(X)");
        assert_eq!(rules[0].conclusion.to_string(), "X |- Y");
        assert_eq!(rules[0].conclusion.succ, MetaStructure::var("Y", Sort::G));
    }

    #[test]
    fn sort_annotations_are_checked() {
        let sig = presets::signature("fundamental").unwrap();
        assert!(parse_rules("rule r\n----\nX:F |- Y:G", &sig).is_ok());
        let e = parse_rules("rule r\n----\nX:G |- Y", &sig).unwrap_err();
        assert!(matches!(e, Error::RuleFile { line: 3, .. }), "{e:?}");
        // `neg` is antitone, so X is F-sorted inside it and G-sorted on the right.
        assert!(parse_rules("rule r\nX |- #neg(X)\n----\nX |- X", &sig).is_err());
    }

    #[test]
    fn malformed_files() {
        let sig = presets::signature("fundamental").unwrap();
        assert!(parse_rules("X |- Y", &sig).is_err());
        assert!(parse_rules("rule r\nX |- Y", &sig).is_err());
        assert!(parse_rules("rule r\n----\nX |- Y\nX |- Y", &sig).is_err());
        assert!(parse_rules("rule r\n----\nX |- Y\nrule r\n----\nX |- Y", &sig).is_err());
        assert!(parse_rules("rule r\n----\n@box(X) |- Y", &sig).is_err());
    }
}
