//! Recursive-descent parser for bounded formulas.
//!
//! Precedence, loosest first: quantifier body (extends to the right), `->`
//! (right associative), `or`, `and`, `not`, atoms.

use std::collections::BTreeSet;

use super::ast::{Formula, Quantifier, Term};
use crate::error::{Error, Result};
use crate::nat::Nat;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Nat),
    Ident(String),
    Lt,
    Le,
    Eq,
    Plus,
    Star,
    Caret,
    LParen,
    RParen,
    Dot,
    Arrow,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    pos: usize,
}

const KEYWORDS: [&str; 8] = [
    "forall", "exists", "and", "or", "not", "in", "true", "false",
];

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if !c.is_ascii() {
            return Err(Error::Syntax {
                pos: i,
                msg: "non-ASCII character".into(),
            });
        }
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push(Spanned {
                    tok: Tok::Num(text[start..i].parse().expect("digits")),
                    pos: start,
                });
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'')
                {
                    i += 1;
                }
                out.push(Spanned {
                    tok: Tok::Ident(text[start..i].to_string()),
                    pos: start,
                });
                continue;
            }
            b'<' if bytes.get(i + 1) == Some(&b'=') => {
                i += 1;
                Tok::Le
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            b'<' => Tok::Lt,
            b'=' => Tok::Eq,
            b'+' => Tok::Plus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'.' => Tok::Dot,
            _ => {
                return Err(Error::Syntax {
                    pos: i,
                    msg: format!("unexpected character {:?}", c as char),
                })
            }
        };
        i += 1;
        out.push(Spanned { tok, pos: start });
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    at: usize,
    end: usize,
    scope: Vec<String>,
    free: &'a BTreeSet<String>,
}

/// Parse with the default free variables `x`, `y`, `z`.
pub fn parse(text: &str) -> Result<Formula> {
    let free: BTreeSet<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
    parse_with_free(text, &free)
}

/// Parse, accepting exactly the given names as free variables.
pub fn parse_with_free(text: &str, free: &BTreeSet<String>) -> Result<Formula> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
        scope: Vec::new(),
        free,
    };
    let f = p.formula()?;
    if p.at < p.toks.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(f)
}

fn is_variable_name(s: &str) -> bool {
    s.starts_with(|c: char| c.is_ascii_lowercase() || c == '_')
        && s != "a"
        && !KEYWORDS.contains(&s)
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|s| &s.tok)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |s| s.pos)
    }

    fn err(&self, msg: &str) -> Error {
        let found = match self.peek() {
            Some(t) => format!("{t:?}"),
            None => "end of input".into(),
        };
        Error::Syntax {
            pos: self.pos(),
            msg: format!("{msg} (found {found})"),
        }
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == kw) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        if let Some(Tok::Ident(s)) = self.peek() {
            let q = match s.as_str() {
                "forall" => Some(Quantifier::Forall),
                "exists" => Some(Quantifier::Exists),
                _ => None,
            };
            if let Some(q) = q {
                return self.quantified(q);
            }
        }
        self.implication()
    }

    fn quantified(&mut self, q: Quantifier) -> Result<Formula> {
        self.at += 1;
        let var = match self.peek() {
            Some(Tok::Ident(s)) if is_variable_name(s) => s.clone(),
            _ => return Err(self.err("expected a variable after quantifier")),
        };
        self.at += 1;
        if !self.eat(&Tok::Lt) {
            return Err(self.err(&format!("quantifier over `{var}` needs a bound `< term`")));
        }
        let bound = self.term()?;
        if !self.eat(&Tok::Dot) {
            return Err(self.err("expected `.` after quantifier bound"));
        }
        self.scope.push(var.clone());
        let body = self.formula();
        self.scope.pop();
        Ok(Formula::Quant(q, var, bound, Box::new(body?)))
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.conjunction()?;
        while self.eat_kw("or") {
            let rhs = self.conjunction_or_quant()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.negation()?;
        while self.eat_kw("and") {
            let rhs = self.negation_or_quant()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    // A quantifier on the right of a binary connective swallows the rest.
    fn conjunction_or_quant(&mut self) -> Result<Formula> {
        if self.at_quantifier() {
            return self.formula();
        }
        self.conjunction()
    }

    fn negation_or_quant(&mut self) -> Result<Formula> {
        if self.at_quantifier() {
            return self.formula();
        }
        self.negation()
    }

    fn at_quantifier(&self) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == "forall" || s == "exists")
    }

    fn negation(&mut self) -> Result<Formula> {
        if self.eat_kw("not") {
            if self.at_quantifier() {
                return Ok(Formula::negate(self.formula()?));
            }
            return Ok(Formula::negate(self.negation()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula> {
        if self.eat_kw("true") {
            return Ok(Formula::True);
        }
        if self.eat_kw("false") {
            return Ok(Formula::False);
        }
        if self.peek() == Some(&Tok::LParen) {
            // Either a parenthesized formula or a comparison starting with a
            // parenthesized term; try the comparison first.
            let save = self.at;
            match self.comparison() {
                Ok(f) => return Ok(f),
                Err(term_err) => {
                    let term_pos = self.pos();
                    self.at = save + 1;
                    match self.formula() {
                        Ok(f) if self.eat(&Tok::RParen) => return Ok(f),
                        Ok(_) => return Err(self.err("expected `)`")),
                        Err(e) => {
                            // Report whichever attempt got further.
                            let fpos = match &e {
                                Error::Syntax { pos, .. } => *pos,
                                _ => 0,
                            };
                            return Err(if fpos >= term_pos { e } else { term_err });
                        }
                    }
                }
            }
        }
        self.comparison()
    }

    fn comparison(&mut self) -> Result<Formula> {
        let lhs = self.term()?;
        if self.eat_kw("in") {
            if self.eat(&Tok::Ident("A".into())) {
                return Ok(Formula::In(lhs));
            }
            return Err(self.err("expected `A` after `in`"));
        }
        let op = match self.peek() {
            Some(Tok::Lt) => Tok::Lt,
            Some(Tok::Le) => Tok::Le,
            Some(Tok::Eq) => Tok::Eq,
            _ => return Err(self.err("expected `<`, `<=`, `=` or `in`")),
        };
        self.at += 1;
        let rhs = self.term()?;
        Ok(match op {
            Tok::Lt => Formula::Lt(lhs, rhs),
            Tok::Le => Formula::Le(lhs, rhs),
            _ => Formula::Eq(lhs, rhs),
        })
    }

    fn term(&mut self) -> Result<Term> {
        let mut lhs = self.product()?;
        while self.eat(&Tok::Plus) {
            let rhs = self.product()?;
            lhs = Term::Add(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Term> {
        let mut lhs = self.power()?;
        while self.eat(&Tok::Star) {
            let rhs = self.power()?;
            lhs = Term::Mul(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn power(&mut self) -> Result<Term> {
        let base = self.primary()?;
        if self.eat(&Tok::Caret) {
            return match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    let e = u32::try_from(&n).map_err(|_| self.err("exponent too large"))?;
                    self.at += 1;
                    Ok(Term::Pow(Box::new(base), e))
                }
                _ => Err(self.err("exponent must be a numeral")),
            };
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Term> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.at += 1;
                Ok(Term::Num(n))
            }
            Some(Tok::Ident(s)) if s == "a" => {
                self.at += 1;
                Ok(Term::ConstA)
            }
            Some(Tok::Ident(s)) if is_variable_name(&s) => {
                if !self.scope.contains(&s) && !self.free.contains(&s) {
                    return Err(self.err(&format!("unknown identifier `{s}`")));
                }
                self.at += 1;
                Ok(Term::Var(s))
            }
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
                Err(self.err(&format!("unknown identifier `{s}`")))
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let t = self.term()?;
                if !self.eat(&Tok::RParen) {
                    return Err(self.err("expected `)`"));
                }
                Ok(t)
            }
            _ => Err(self.err("expected a term")),
        }
    }
}
