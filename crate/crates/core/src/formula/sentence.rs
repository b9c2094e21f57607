//! Sentences `∀x ∃y ∀z θ(x, y, z)` and the matrix interface used by apartness.

use std::fmt;
use std::sync::Arc;

use super::ast::Formula;
use super::eval::{Compiled, SecondOrderParam};
use super::parser::parse;
use crate::error::{Error, Result};
use crate::finset::floor_for;
use crate::nat::{nat, Nat};

/// Anything that can answer `θ(x, y, z)` on small values.
pub trait Theta: Send + Sync {
    fn holds(&self, x: u64, y: u64, z: u64) -> Result<bool>;

    /// True only for the trivial matrix, which lets callers skip enumeration.
    fn is_top(&self) -> bool {
        false
    }

    fn describe(&self) -> String;
}

#[derive(Clone)]
pub struct Pi03Sentence {
    theta: Formula,
    a: Nat,
    set: SecondOrderParam,
    compiled: Arc<Compiled>,
}

impl fmt::Debug for Pi03Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Pi03Sentence")
            .field("theta", &self.theta.to_string())
            .field("a", &self.a)
            .field("A", &self.set.to_bit_string())
            .finish()
    }
}

impl PartialEq for Pi03Sentence {
    fn eq(&self, other: &Self) -> bool {
        self.theta == other.theta && self.a == other.a && self.set == other.set
    }
}

impl Pi03Sentence {
    /// `theta` may mention only `x`, `y`, `z` freely.
    pub fn new(theta: Formula, a: Nat, set: SecondOrderParam) -> Result<Self> {
        if let Some(v) = theta
            .free_vars()
            .into_iter()
            .find(|v| !["x", "y", "z"].contains(&v.as_str()))
        {
            return Err(Error::Shape(format!(
                "matrix has free variable `{v}` besides x, y, z"
            )));
        }
        let compiled = Arc::new(Compiled::new(&theta, &["x", "y", "z"])?);
        Ok(Pi03Sentence {
            theta,
            a,
            set,
            compiled,
        })
    }

    /// The sentence whose matrix is `true`.
    pub fn top() -> Self {
        Self::new(Formula::True, nat(0), SecondOrderParam::empty()).expect("true is closed")
    }

    pub fn parse(text: &str, a: Nat, set: SecondOrderParam) -> Result<Self> {
        Self::new(parse(text)?, a, set)
    }

    pub fn theta(&self) -> &Formula {
        &self.theta
    }

    pub fn param_a(&self) -> &Nat {
        &self.a
    }

    pub fn param_set(&self) -> &SecondOrderParam {
        &self.set
    }

    /// Least admissible set minimum while this sentence is in play.
    pub fn floor(&self) -> Nat {
        floor_for(&self.a)
    }
}

impl Theta for Pi03Sentence {
    fn holds(&self, x: u64, y: u64, z: u64) -> Result<bool> {
        self.compiled.eval3(x, y, z, &self.a, &self.set)
    }

    fn is_top(&self) -> bool {
        self.theta == Formula::True
    }

    fn describe(&self) -> String {
        if self.is_top() {
            "TOP".into()
        } else {
            format!("forall x exists y forall z . {}", self.theta)
        }
    }
}

impl fmt::Display for Pi03Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn top_is_recognised() {
        assert!(Pi03Sentence::top().is_top());
        let s = Pi03Sentence::parse("x < y", nat(0), SecondOrderParam::empty()).unwrap();
        assert!(!s.is_top());
        assert!(s.holds(1, 2, 0).unwrap());
        assert!(!s.holds(2, 2, 0).unwrap());
    }

    #[test]
    fn extra_free_variable_rejected() {
        let f = crate::formula::parser::parse_with_free("x < w", &["x".into(), "w".into()].into())
            .unwrap();
        assert!(Pi03Sentence::new(f, nat(0), SecondOrderParam::empty()).is_err());
    }

    #[test]
    fn floor_follows_constant() {
        let s = Pi03Sentence::parse("x < a", nat(7), SecondOrderParam::empty()).unwrap();
        assert_eq!(s.floor(), nat(7));
        assert_eq!(Pi03Sentence::top().floor(), nat(3));
    }
}
