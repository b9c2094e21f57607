//! Quantifier-prefix sentences and the rewrite
//! `∃x ∀y ∃z θ(x,y,z)  ↦  ∃x ∀y ∃x'<x ∀y'<y ∃z θ(x',y',z)`.

use std::collections::BTreeSet;
use std::fmt;

use super::ast::{Formula, Quantifier, Term};
use super::parser::parse_with_free;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixQuant {
    pub quantifier: Quantifier,
    pub var: String,
    pub bound: Option<Term>,
}

impl PrefixQuant {
    fn unbounded(q: Quantifier, var: &str) -> Self {
        PrefixQuant {
            quantifier: q,
            var: var.to_string(),
            bound: None,
        }
    }

    /// Set variables are written in upper case.
    pub fn is_second_order(&self) -> bool {
        self.var.starts_with(|c: char| c.is_ascii_uppercase())
    }
}

/// A block of quantifiers, the last of which is unbounded, over a bounded core.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixSentence {
    pub prefix: Vec<PrefixQuant>,
    pub core: Formula,
}

impl fmt::Display for PrefixSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in &self.prefix {
            match &q.bound {
                Some(b) => write!(f, "{} {} < {} . ", q.quantifier.keyword(), q.var, b)?,
                None => write!(f, "{} {} . ", q.quantifier.keyword(), q.var)?,
            }
        }
        write!(f, "{}", self.core)
    }
}

struct Segment {
    start: usize,
    quant: PrefixQuant,
}

fn skip_ws(text: &str, mut i: usize) -> usize {
    while i < text.len() && text.as_bytes()[i].is_ascii_whitespace() {
        i += 1;
    }
    i
}

fn ident_at(text: &str, i: usize) -> Option<(&str, usize)> {
    let b = text.as_bytes();
    let mut j = i;
    while j < b.len() && (b[j].is_ascii_alphanumeric() || b[j] == b'_' || b[j] == b'\'') {
        j += 1;
    }
    (j > i).then(|| (&text[i..j], j))
}

impl PrefixSentence {
    /// Parse `Q v . Q v < t . … core`. Quantifiers up to the last unbounded
    /// one form the prefix; later bounded ones belong to the core.
    pub fn parse(text: &str) -> Result<Self> {
        let mut segs: Vec<Segment> = Vec::new();
        let mut i = skip_ws(text, 0);
        let mut declared: BTreeSet<String> = BTreeSet::new();
        while let Some((kw, after_kw)) = ident_at(text, i) {
            let q = match kw {
                "forall" => Quantifier::Forall,
                "exists" => Quantifier::Exists,
                _ => break,
            };
            let vpos = skip_ws(text, after_kw);
            let (var, after_var) = ident_at(text, vpos).ok_or_else(|| Error::Syntax {
                pos: vpos,
                msg: "expected a variable".into(),
            })?;
            let next = skip_ws(text, after_var);
            match text.as_bytes().get(next) {
                Some(b'.') => {
                    segs.push(Segment {
                        start: i,
                        quant: PrefixQuant::unbounded(q, var),
                    });
                    declared.insert(var.to_string());
                    i = skip_ws(text, next + 1);
                }
                Some(b'<') => {
                    let dot =
                        text[next..]
                            .find('.')
                            .map(|d| next + d)
                            .ok_or_else(|| Error::Syntax {
                                pos: next,
                                msg: "bound without `.`".into(),
                            })?;
                    let probe = format!("{} true", &text[i..=dot]);
                    let bound = match parse_with_free(&probe, &first_order(&declared)) {
                        Ok(Formula::Quant(_, _, b, _)) => b,
                        Ok(_) => unreachable!("probe starts with a quantifier"),
                        Err(Error::Syntax { pos, msg }) => {
                            return Err(Error::Syntax { pos: pos + i, msg })
                        }
                        Err(e) => return Err(e),
                    };
                    segs.push(Segment {
                        start: i,
                        quant: PrefixQuant {
                            quantifier: q,
                            var: var.to_string(),
                            bound: Some(bound),
                        },
                    });
                    declared.insert(var.to_string());
                    i = skip_ws(text, dot + 1);
                }
                _ => {
                    return Err(Error::Syntax {
                        pos: next,
                        msg: "expected `.` or `<` after quantified variable".into(),
                    })
                }
            }
        }
        let last_unbounded = segs
            .iter()
            .rposition(|s| s.quant.bound.is_none())
            .ok_or_else(|| Error::Shape("no unbounded quantifier in prefix".into()))?;
        let core_start = segs.get(last_unbounded + 1).map_or(i, |s| s.start);
        let prefix: Vec<PrefixQuant> = segs
            .into_iter()
            .take(last_unbounded + 1)
            .map(|s| s.quant)
            .collect();
        let scope: BTreeSet<String> = prefix.iter().map(|q| q.var.clone()).collect();
        let core =
            parse_with_free(&text[core_start..], &first_order(&scope)).map_err(|e| match e {
                Error::Syntax { pos, msg } => Error::Syntax {
                    pos: pos + core_start,
                    msg,
                },
                other => other,
            })?;
        Ok(PrefixSentence { prefix, core })
    }
}

fn first_order(vars: &BTreeSet<String>) -> BTreeSet<String> {
    vars.iter().filter(|v| is_plain_var(v)).cloned().collect()
}

fn is_plain_var(v: &str) -> bool {
    v.starts_with(|c: char| c.is_ascii_lowercase() || c == '_') && v != "a"
}

fn fresh(base: &str, taken: &BTreeSet<String>) -> String {
    let mut name = format!("{base}'");
    while taken.contains(&name) {
        name.push('\'');
    }
    name
}

/// Rewrite `[∀A] [∀a] ∃x ∀y ∃z θ` into `[∀A] [∀a] ∃x ∀y ∃x'<x ∀y'<y ∃z θ(x',y',z)`.
/// Inputs of any other prefix shape, including outputs of this function, are
/// rejected.
pub fn weakly_pi04_transform(s: &PrefixSentence) -> Result<PrefixSentence> {
    let mut lead = 0;
    if s.prefix
        .first()
        .is_some_and(|q| q.quantifier == Quantifier::Forall && q.is_second_order())
    {
        lead += 1;
    }
    if s.prefix
        .get(lead)
        .is_some_and(|q| q.quantifier == Quantifier::Forall && q.var == "a")
    {
        lead += 1;
    }
    let rest = &s.prefix[lead..];
    let pattern = [Quantifier::Exists, Quantifier::Forall, Quantifier::Exists];
    let fits = rest.len() == 3
        && rest
            .iter()
            .zip(pattern)
            .all(|(q, p)| q.quantifier == p && q.bound.is_none() && is_plain_var(&q.var));
    if !fits {
        return Err(Error::Shape(format!(
            "expected prefix [forall A] [forall a] exists x forall y exists z, got {}",
            s.prefix
                .iter()
                .map(|q| format!(
                    "{} {}{}",
                    q.quantifier.keyword(),
                    q.var,
                    if q.bound.is_some() { " < _" } else { "" }
                ))
                .collect::<Vec<_>>()
                .join(" ")
        )));
    }
    let (x, y, z) = (&rest[0].var, &rest[1].var, &rest[2].var);
    let mut taken: BTreeSet<String> = s.core.all_vars();
    taken.extend(s.prefix.iter().map(|q| q.var.clone()));
    let x2 = fresh(x, &taken);
    taken.insert(x2.clone());
    let y2 = fresh(y, &taken);
    let core = s.core.rename_free(x, &x2).rename_free(y, &y2);
    let mut prefix: Vec<PrefixQuant> = s.prefix[..lead].to_vec();
    prefix.push(rest[0].clone());
    prefix.push(rest[1].clone());
    prefix.push(PrefixQuant {
        quantifier: Quantifier::Exists,
        var: x2,
        bound: Some(Term::var(x)),
    });
    prefix.push(PrefixQuant {
        quantifier: Quantifier::Forall,
        var: y2,
        bound: Some(Term::var(y)),
    });
    prefix.push(PrefixQuant::unbounded(Quantifier::Exists, z));
    Ok(PrefixSentence { prefix, core })
}
