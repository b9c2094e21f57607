use std::collections::BTreeSet;
use std::fmt;

use crate::nat::Nat;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Num(Nat),
    /// The distinguished first-order constant `a`.
    ConstA,
    Var(String),
    Add(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
    Pow(Box<Term>, u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
}

impl Quantifier {
    pub fn keyword(self) -> &'static str {
        match self {
            Quantifier::Forall => "forall",
            Quantifier::Exists => "exists",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Lt(Term, Term),
    Le(Term, Term),
    Eq(Term, Term),
    /// Membership in the second-order parameter `A`.
    In(Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Quant(Quantifier, String, Term, Box<Formula>),
}

impl Term {
    pub fn num(v: u64) -> Term {
        Term::Num(Nat::from(v))
    }

    pub fn var(s: &str) -> Term {
        Term::Var(s.to_string())
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Num(_) | Term::ConstA | Term::Var(_) => 1,
            Term::Add(l, r) | Term::Mul(l, r) => 1 + l.size() + r.size(),
            Term::Pow(b, _) => 1 + b.size(),
        }
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Add(l, r) | Term::Mul(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            Term::Pow(b, _) => b.collect_vars(out),
            Term::Num(_) | Term::ConstA => {}
        }
    }

    pub fn rename(&self, from: &str, to: &str) -> Term {
        match self {
            Term::Var(v) if v == from => Term::Var(to.to_string()),
            Term::Add(l, r) => {
                Term::Add(Box::new(l.rename(from, to)), Box::new(r.rename(from, to)))
            }
            Term::Mul(l, r) => {
                Term::Mul(Box::new(l.rename(from, to)), Box::new(r.rename(from, to)))
            }
            Term::Pow(b, e) => Term::Pow(Box::new(b.rename(from, to)), *e),
            t => t.clone(),
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Term::Add(..) => 1,
            Term::Mul(..) => 2,
            Term::Pow(..) => 3,
            _ => 4,
        }
    }
}

impl Formula {
    pub fn negate(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Formula {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn forall(v: &str, bound: Term, body: Formula) -> Formula {
        Formula::Quant(Quantifier::Forall, v.to_string(), bound, Box::new(body))
    }

    pub fn exists(v: &str, bound: Term, body: Formula) -> Formula {
        Formula::Quant(Quantifier::Exists, v.to_string(), bound, Box::new(body))
    }

    /// Node count, counting terms too.
    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False => 1,
            Formula::Lt(l, r) | Formula::Le(l, r) | Formula::Eq(l, r) => 1 + l.size() + r.size(),
            Formula::In(t) => 1 + t.size(),
            Formula::Not(f) => 1 + f.size(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                1 + l.size() + r.size()
            }
            Formula::Quant(_, _, b, f) => 1 + b.size() + f.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let add_term = |t: &Term, bound: &Vec<String>, out: &mut BTreeSet<String>| {
            let mut vs = BTreeSet::new();
            t.collect_vars(&mut vs);
            out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Lt(l, r) | Formula::Le(l, r) | Formula::Eq(l, r) => {
                add_term(l, bound, out);
                add_term(r, bound, out);
            }
            Formula::In(t) => add_term(t, bound, out),
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            Formula::Quant(_, v, b, f) => {
                // The bound is outside the scope of the variable it bounds.
                add_term(b, bound, out);
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk_vars(&mut out);
        out
    }

    fn walk_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Lt(l, r) | Formula::Le(l, r) | Formula::Eq(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            Formula::In(t) => t.collect_vars(out),
            Formula::Not(f) => f.walk_vars(out),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                l.walk_vars(out);
                r.walk_vars(out);
            }
            Formula::Quant(_, v, b, f) => {
                out.insert(v.clone());
                b.collect_vars(out);
                f.walk_vars(out);
            }
        }
    }

    /// Rename free occurrences of `from` to `to`. The caller guarantees `to`
    /// is not bound anywhere inside, so no capture can happen.
    pub fn rename_free(&self, from: &str, to: &str) -> Formula {
        let t = |x: &Term| x.rename(from, to);
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Lt(l, r) => Formula::Lt(t(l), t(r)),
            Formula::Le(l, r) => Formula::Le(t(l), t(r)),
            Formula::Eq(l, r) => Formula::Eq(t(l), t(r)),
            Formula::In(x) => Formula::In(t(x)),
            Formula::Not(f) => Formula::negate(f.rename_free(from, to)),
            Formula::And(l, r) => Formula::and(l.rename_free(from, to), r.rename_free(from, to)),
            Formula::Or(l, r) => Formula::or(l.rename_free(from, to), r.rename_free(from, to)),
            Formula::Implies(l, r) => {
                Formula::implies(l.rename_free(from, to), r.rename_free(from, to))
            }
            Formula::Quant(q, v, b, f) => {
                let body = if v == from {
                    (**f).clone()
                } else {
                    f.rename_free(from, to)
                };
                Formula::Quant(*q, v.clone(), t(b), Box::new(body))
            }
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Formula::Quant(..) => 0,
            Formula::Implies(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            Formula::Not(..) => 4,
            _ => 5,
        }
    }
}

fn wrap_term(f: &mut fmt::Formatter<'_>, t: &Term, min: u8) -> fmt::Result {
    if t.prec() < min {
        write!(f, "({t})")
    } else {
        write!(f, "{t}")
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Num(n) => write!(f, "{n}"),
            Term::ConstA => write!(f, "a"),
            Term::Var(v) => write!(f, "{v}"),
            Term::Add(l, r) => {
                wrap_term(f, l, 1)?;
                write!(f, " + ")?;
                wrap_term(f, r, 2)
            }
            Term::Mul(l, r) => {
                wrap_term(f, l, 2)?;
                write!(f, " * ")?;
                wrap_term(f, r, 3)
            }
            Term::Pow(b, e) => {
                wrap_term(f, b, 4)?;
                write!(f, "^{e}")
            }
        }
    }
}

fn wrap(f: &mut fmt::Formatter<'_>, x: &Formula, min: u8) -> fmt::Result {
    if x.prec() < min {
        write!(f, "({x})")
    } else {
        write!(f, "{x}")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Lt(l, r) => write!(f, "{l} < {r}"),
            Formula::Le(l, r) => write!(f, "{l} <= {r}"),
            Formula::Eq(l, r) => write!(f, "{l} = {r}"),
            Formula::In(t) => write!(f, "{t} in A"),
            Formula::Not(x) => {
                write!(f, "not ")?;
                wrap(f, x, 4)
            }
            // and/or are printed left-associated, implication right-associated.
            Formula::And(l, r) => {
                wrap(f, l, 3)?;
                write!(f, " and ")?;
                wrap(f, r, 4)
            }
            Formula::Or(l, r) => {
                wrap(f, l, 2)?;
                write!(f, " or ")?;
                wrap(f, r, 3)
            }
            Formula::Implies(l, r) => {
                wrap(f, l, 2)?;
                write!(f, " -> ")?;
                wrap(f, r, 1)
            }
            Formula::Quant(q, v, b, body) => write!(f, "{} {v} < {b} . {body}", q.keyword()),
        }
    }
}
