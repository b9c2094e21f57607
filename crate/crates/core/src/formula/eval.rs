//! Evaluation of bounded formulas.
//!
//! Formulas are first compiled so variables become stack slots. Evaluation
//! runs on `u64` with checked arithmetic and reruns on bignums only when some
//! intermediate value overflows.

use std::cell::Cell;
use std::collections::BTreeMap;

use num_traits::ToPrimitive;

use super::ast::{Formula, Quantifier, Term};
use crate::error::{Error, Result};
use crate::nat::Nat;

/// A finite initial segment of a set of naturals, coded as a bit string.
/// Positions at or beyond the length read as absent.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SecondOrderParam {
    bits: Vec<bool>,
}

impl SecondOrderParam {
    pub fn new(bits: Vec<bool>) -> Self {
        SecondOrderParam { bits }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// From a string of `0`/`1` characters, position 0 first.
    pub fn parse(text: &str) -> Result<Self> {
        text.trim()
            .chars()
            .enumerate()
            .map(|(i, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Syntax {
                    pos: i,
                    msg: format!("bit string has {c:?}"),
                }),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    /// Characteristic string of a set of positions below `len`.
    pub fn from_positions(len: usize, positions: impl IntoIterator<Item = usize>) -> Self {
        let mut bits = vec![false; len];
        for p in positions {
            if p < len {
                bits[p] = true;
            }
        }
        Self::new(bits)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, pos: u64) -> bool {
        usize::try_from(pos)
            .ok()
            .and_then(|p| self.bits.get(p))
            .copied()
            .unwrap_or(false)
    }

    pub fn to_bit_string(&self) -> String {
        self.bits
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }
}

#[derive(Clone, Debug)]
enum CTerm {
    Num(Nat, Option<u64>),
    ConstA,
    Slot(usize),
    Add(Box<CTerm>, Box<CTerm>),
    Mul(Box<CTerm>, Box<CTerm>),
    Pow(Box<CTerm>, u32),
}

#[derive(Clone, Debug)]
enum CForm {
    Const(bool),
    Lt(CTerm, CTerm),
    Le(CTerm, CTerm),
    Eq(CTerm, CTerm),
    In(CTerm),
    Not(Box<CForm>),
    And(Box<CForm>, Box<CForm>),
    Or(Box<CForm>, Box<CForm>),
    Implies(Box<CForm>, Box<CForm>),
    Quant(Quantifier, CTerm, Box<CForm>),
}

/// A formula compiled against a fixed list of free variables.
#[derive(Clone, Debug)]
pub struct Compiled {
    root: CForm,
    free: Vec<String>,
}

struct Overflow;

impl Compiled {
    pub fn new(f: &Formula, free: &[&str]) -> Result<Self> {
        let mut scope: Vec<String> = free.iter().map(|s| s.to_string()).collect();
        let root = compile_form(f, &mut scope)?;
        Ok(Compiled {
            root,
            free: free.iter().map(|s| s.to_string()).collect(),
        })
    }

    pub fn free_vars(&self) -> &[String] {
        &self.free
    }

    /// Evaluate with free variables given positionally.
    pub fn eval(&self, vals: &[Nat], a: &Nat, set: &SecondOrderParam) -> Result<bool> {
        self.eval_tracked(vals, a, set).map(|(b, _)| b)
    }

    /// Also reports whether some membership query ran past the coded length.
    pub fn eval_tracked(
        &self,
        vals: &[Nat],
        a: &Nat,
        set: &SecondOrderParam,
    ) -> Result<(bool, bool)> {
        assert_eq!(vals.len(), self.free.len(), "one value per free variable");
        let past = Cell::new(false);
        let small: Option<Vec<u64>> = vals.iter().map(|v| v.to_u64()).collect();
        if let (Some(mut env), Some(a64)) = (small, a.to_u64()) {
            let ctx = Ctx {
                a: a64,
                set,
                past: &past,
            };
            if let Ok(b) = ctx.form(&self.root, &mut env) {
                return Ok((b, past.get()));
            }
        }
        past.set(false);
        let ctx = BigCtx {
            a,
            set,
            past: &past,
        };
        let mut env = vals.to_vec();
        let b = ctx.form(&self.root, &mut env)?;
        Ok((b, past.get()))
    }

    /// Fast path for three small free variables, used by apartness checks.
    pub fn eval3(&self, x: u64, y: u64, z: u64, a: &Nat, set: &SecondOrderParam) -> Result<bool> {
        if let Some(a64) = a.to_u64() {
            let past = Cell::new(false);
            let ctx = Ctx {
                a: a64,
                set,
                past: &past,
            };
            let mut env = vec![x, y, z];
            env.truncate(self.free.len());
            if let Ok(b) = ctx.form(&self.root, &mut env) {
                return Ok(b);
            }
        }
        let vals: Vec<Nat> = [x, y, z][..self.free.len()]
            .iter()
            .map(|&v| Nat::from(v))
            .collect();
        self.eval(&vals, a, set)
    }
}

fn compile_term(t: &Term, scope: &[String]) -> Result<CTerm> {
    Ok(match t {
        Term::Num(n) => CTerm::Num(n.clone(), n.to_u64()),
        Term::ConstA => CTerm::ConstA,
        Term::Var(v) => match scope.iter().rposition(|s| s == v) {
            Some(i) => CTerm::Slot(i),
            None => return Err(Error::Unbound(v.clone())),
        },
        Term::Add(l, r) => CTerm::Add(
            Box::new(compile_term(l, scope)?),
            Box::new(compile_term(r, scope)?),
        ),
        Term::Mul(l, r) => CTerm::Mul(
            Box::new(compile_term(l, scope)?),
            Box::new(compile_term(r, scope)?),
        ),
        Term::Pow(b, e) => CTerm::Pow(Box::new(compile_term(b, scope)?), *e),
    })
}

fn compile_form(f: &Formula, scope: &mut Vec<String>) -> Result<CForm> {
    let bx = |f: &Formula, scope: &mut Vec<String>| compile_form(f, scope).map(Box::new);
    Ok(match f {
        Formula::True => CForm::Const(true),
        Formula::False => CForm::Const(false),
        Formula::Lt(l, r) => CForm::Lt(compile_term(l, scope)?, compile_term(r, scope)?),
        Formula::Le(l, r) => CForm::Le(compile_term(l, scope)?, compile_term(r, scope)?),
        Formula::Eq(l, r) => CForm::Eq(compile_term(l, scope)?, compile_term(r, scope)?),
        Formula::In(t) => CForm::In(compile_term(t, scope)?),
        Formula::Not(x) => CForm::Not(bx(x, scope)?),
        Formula::And(l, r) => CForm::And(bx(l, scope)?, bx(r, scope)?),
        Formula::Or(l, r) => CForm::Or(bx(l, scope)?, bx(r, scope)?),
        Formula::Implies(l, r) => CForm::Implies(bx(l, scope)?, bx(r, scope)?),
        Formula::Quant(q, v, b, body) => {
            let bound = compile_term(b, scope)?;
            scope.push(v.clone());
            let body = compile_form(body, scope);
            scope.pop();
            CForm::Quant(*q, bound, Box::new(body?))
        }
    })
}

struct Ctx<'a> {
    a: u64,
    set: &'a SecondOrderParam,
    past: &'a Cell<bool>,
}

impl Ctx<'_> {
    fn term(&self, t: &CTerm, env: &[u64]) -> std::result::Result<u64, Overflow> {
        match t {
            CTerm::Num(_, small) => small.ok_or(Overflow),
            CTerm::ConstA => Ok(self.a),
            CTerm::Slot(i) => Ok(env[*i]),
            CTerm::Add(l, r) => self
                .term(l, env)?
                .checked_add(self.term(r, env)?)
                .ok_or(Overflow),
            CTerm::Mul(l, r) => self
                .term(l, env)?
                .checked_mul(self.term(r, env)?)
                .ok_or(Overflow),
            CTerm::Pow(b, e) => self.term(b, env)?.checked_pow(*e).ok_or(Overflow),
        }
    }

    fn form(&self, f: &CForm, env: &mut Vec<u64>) -> std::result::Result<bool, Overflow> {
        Ok(match f {
            CForm::Const(b) => *b,
            CForm::Lt(l, r) => self.term(l, env)? < self.term(r, env)?,
            CForm::Le(l, r) => self.term(l, env)? <= self.term(r, env)?,
            CForm::Eq(l, r) => self.term(l, env)? == self.term(r, env)?,
            CForm::In(t) => {
                let p = self.term(t, env)?;
                if p >= self.set.len() as u64 {
                    self.past.set(true);
                }
                self.set.get(p)
            }
            CForm::Not(x) => !self.form(x, env)?,
            CForm::And(l, r) => self.form(l, env)? && self.form(r, env)?,
            CForm::Or(l, r) => self.form(l, env)? || self.form(r, env)?,
            CForm::Implies(l, r) => !self.form(l, env)? || self.form(r, env)?,
            CForm::Quant(q, b, body) => {
                let bound = self.term(b, env)?;
                let want = *q == Quantifier::Exists;
                env.push(0);
                let mut result = !want;
                for v in 0..bound {
                    *env.last_mut().unwrap() = v;
                    match self.form(body, env) {
                        Ok(r) if r == want => {
                            result = want;
                            break;
                        }
                        Ok(_) => {}
                        Err(o) => {
                            env.pop();
                            return Err(o);
                        }
                    }
                }
                env.pop();
                result
            }
        })
    }
}

struct BigCtx<'a> {
    a: &'a Nat,
    set: &'a SecondOrderParam,
    past: &'a Cell<bool>,
}

impl BigCtx<'_> {
    fn term(&self, t: &CTerm, env: &[Nat]) -> Nat {
        match t {
            CTerm::Num(n, _) => n.clone(),
            CTerm::ConstA => self.a.clone(),
            CTerm::Slot(i) => env[*i].clone(),
            CTerm::Add(l, r) => self.term(l, env) + self.term(r, env),
            CTerm::Mul(l, r) => self.term(l, env) * self.term(r, env),
            CTerm::Pow(b, e) => num_traits::pow(self.term(b, env), *e as usize),
        }
    }

    fn form(&self, f: &CForm, env: &mut Vec<Nat>) -> Result<bool> {
        Ok(match f {
            CForm::Const(b) => *b,
            CForm::Lt(l, r) => self.term(l, env) < self.term(r, env),
            CForm::Le(l, r) => self.term(l, env) <= self.term(r, env),
            CForm::Eq(l, r) => self.term(l, env) == self.term(r, env),
            CForm::In(t) => match self.term(t, env).to_u64() {
                Some(p) if (p as u128) < self.set.len() as u128 => self.set.get(p),
                _ => {
                    self.past.set(true);
                    false
                }
            },
            CForm::Not(x) => !self.form(x, env)?,
            CForm::And(l, r) => self.form(l, env)? && self.form(r, env)?,
            CForm::Or(l, r) => self.form(l, env)? || self.form(r, env)?,
            CForm::Implies(l, r) => !self.form(l, env)? || self.form(r, env)?,
            CForm::Quant(q, b, body) => {
                let bound = self.term(b, env);
                let n = bound
                    .to_u64()
                    .ok_or_else(|| Error::TooLarge(format!("quantifier bound {bound}")))?;
                let want = *q == Quantifier::Exists;
                let mut result = !want;
                env.push(Nat::from(0u8));
                for v in 0..n {
                    *env.last_mut().unwrap() = Nat::from(v);
                    match self.form(body, env) {
                        Ok(r) if r == want => {
                            result = want;
                            break;
                        }
                        Ok(_) => {}
                        Err(e) => {
                            env.pop();
                            return Err(e);
                        }
                    }
                }
                env.pop();
                result
            }
        })
    }
}

/// Evaluate `phi` under a named environment. Every free variable must be
/// covered; extra entries are ignored.
pub fn eval(
    phi: &Formula,
    env: &BTreeMap<String, Nat>,
    a: &Nat,
    set: &SecondOrderParam,
) -> Result<bool> {
    let free: Vec<String> = phi.free_vars().into_iter().collect();
    let names: Vec<&str> = free.iter().map(|s| s.as_str()).collect();
    let vals = free
        .iter()
        .map(|v| env.get(v).cloned().ok_or_else(|| Error::Unbound(v.clone())))
        .collect::<Result<Vec<_>>>()?;
    Compiled::new(phi, &names)?.eval(&vals, a, set)
}
