//! Minimal `ω^n`-large intervals, sized by recurrence before anything is built.

use std::fmt;

use num_traits::{One, ToPrimitive};

use super::search::is_large;
use super::LargenessSpec;
use crate::error::{Error, Result};
use crate::finset::{FinSet, DEFAULT_FLOOR};
use crate::nat::{nat, Nat};

/// Numbers with more bits than this are only bounded from below.
pub const MAX_EXACT_BITS: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Magnitude {
    Exact(Nat),
    /// At least `2^e`.
    AtLeastPow2(Nat),
}

impl Magnitude {
    pub fn exact(&self) -> Option<&Nat> {
        match self {
            Magnitude::Exact(v) => Some(v),
            Magnitude::AtLeastPow2(_) => None,
        }
    }

    pub fn fits(&self, budget: &Nat) -> bool {
        matches!(self, Magnitude::Exact(v) if v <= budget)
    }
}

impl fmt::Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Magnitude::Exact(v) => write!(f, "{v}"),
            Magnitude::AtLeastPow2(e) => write!(f, ">= 2^{e}"),
        }
    }
}

/// Largest element of the minimal `ω^n`-large interval starting at `b`.
pub fn max_of_minimal(b: &Nat, n: usize) -> Magnitude {
    match n {
        0 => Magnitude::Exact(b.clone()),
        1 => Magnitude::Exact(b * 2u32),
        2 => match b.to_u64().filter(|&v| v <= MAX_EXACT_BITS) {
            // (b + 2)·2^b − 2
            Some(s) => Magnitude::Exact(((b + 2u32) << s) - 2u32),
            None => Magnitude::AtLeastPow2(b.clone()),
        },
        _ => {
            let Some(steps) = b.to_u64().filter(|&v| v <= MAX_EXACT_BITS) else {
                return Magnitude::AtLeastPow2(b.clone());
            };
            let mut cur = b.clone();
            for _ in 0..steps {
                match max_of_minimal(&(cur + 1u32), n - 1) {
                    Magnitude::Exact(v) => cur = v,
                    inexact => return inexact,
                }
            }
            Magnitude::Exact(cur)
        }
    }
}

/// Cardinality of the minimal `ω^n`-large interval starting at `x`.
pub fn minimal_interval_size(x: &Nat, n: usize) -> Magnitude {
    match max_of_minimal(x, n) {
        Magnitude::Exact(m) => Magnitude::Exact(m - x + 1u32),
        Magnitude::AtLeastPow2(e) => {
            // max − x + 1 ≥ 2^(e−1) as long as x ≤ 2^(e−1).
            if e > nat(1) && Nat::from(x.bits() + 1) <= e {
                Magnitude::AtLeastPow2(e - 1u32)
            } else {
                Magnitude::AtLeastPow2(Nat::one())
            }
        }
    }
}

/// `[x, y]` minimal for `ω^n`-largeness, provided it has at most `budget` elements.
pub fn minimal_large_interval(x: &Nat, n: usize, budget: &Nat) -> Result<FinSet> {
    if *x < nat(DEFAULT_FLOOR) {
        return Err(Error::Precondition(format!(
            "base {x} is below the floor {DEFAULT_FLOOR}"
        )));
    }
    let size = minimal_interval_size(x, n);
    if !size.fits(budget) {
        return Err(Error::Overflow {
            cardinality: size.to_string(),
            budget: budget.to_string(),
        });
    }
    let len = size
        .exact()
        .and_then(|c| c.to_usize())
        .expect("within budget");
    let mut elements = Vec::with_capacity(len);
    let mut v = x.clone();
    for _ in 0..len {
        elements.push(v.clone());
        v += 1u32;
    }
    FinSet::new(elements, nat(DEFAULT_FLOOR))
}

/// `X` is `ω^n`-large and no single deletion keeps it so.
pub fn is_minimal(x: &FinSet, n: usize) -> Result<bool> {
    let spec = LargenessSpec::plain(n, 1);
    if !is_large(x, &spec)? {
        return Ok(false);
    }
    for i in 0..x.len() {
        let rest: Vec<usize> = (0..x.len()).filter(|&j| j != i).collect();
        if is_large(&x.pick(&rest), &spec)? {
            return Ok(false);
        }
    }
    Ok(true)
}
