//! Ramsey-like statements: an arity, a number of colors, and a predicate on
//! reindexed colorings that must hold for every finite subset of the witness.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;

use super::ast::Formula;
use super::eval::{Compiled, SecondOrderParam};
use super::parser::parse_with_free;
use crate::coloring::{is_homogeneous_idx, is_transitive_idx, Color, ColoringTable};
use crate::error::{Error, Result};
use crate::nat::{nat, Nat};
use crate::registry::Registry;

/// Subsets of a witness are enumerated for non-hereditary predicates only up
/// to this size.
pub const MAX_SUBSET_SCAN: usize = 14;

pub trait Psi0: Send + Sync {
    fn name(&self) -> String;

    fn supports_arity(&self, _arity: usize) -> bool {
        true
    }

    /// The predicate on a reindexed coloring over `{0, ..., m-1}`.
    fn holds(&self, fg: &ColoringTable) -> Result<bool>;

    /// Whether truth on a set implies truth on all its subsets, so checking
    /// the whole witness once suffices.
    fn hereditary(&self) -> bool {
        false
    }
}

#[derive(Debug)]
pub struct Homogeneous;
#[derive(Debug)]
pub struct Transitive;
/// Order coded by `f(x, y) = 1` iff `x` precedes `y`; ascending means every
/// tuple gets color 1.
#[derive(Debug)]
pub struct MonotoneAscending;
/// Every tuple gets color 0.
#[derive(Debug)]
pub struct MonotoneDescending;
#[derive(Debug)]
pub struct Always;

fn all_idx(f: &ColoringTable) -> Vec<usize> {
    (0..f.domain().len()).collect()
}

impl Psi0 for Homogeneous {
    fn name(&self) -> String {
        "homogeneous".into()
    }
    fn holds(&self, fg: &ColoringTable) -> Result<bool> {
        Ok(is_homogeneous_idx(fg, &all_idx(fg)))
    }
    fn hereditary(&self) -> bool {
        true
    }
}

impl Psi0 for Transitive {
    fn name(&self) -> String {
        "transitive".into()
    }
    fn supports_arity(&self, arity: usize) -> bool {
        arity == 2
    }
    fn holds(&self, fg: &ColoringTable) -> Result<bool> {
        if fg.arity() != 2 {
            return Err(Error::Shape("transitivity needs arity 2".into()));
        }
        Ok(is_transitive_idx(fg, &all_idx(fg)))
    }
    fn hereditary(&self) -> bool {
        true
    }
}

impl Psi0 for MonotoneAscending {
    fn name(&self) -> String {
        "monotone-asc".into()
    }
    fn holds(&self, fg: &ColoringTable) -> Result<bool> {
        Ok(fg.table().iter().all(|&c| c == 1))
    }
    fn hereditary(&self) -> bool {
        true
    }
}

impl Psi0 for MonotoneDescending {
    fn name(&self) -> String {
        "monotone-desc".into()
    }
    fn holds(&self, fg: &ColoringTable) -> Result<bool> {
        Ok(fg.table().iter().all(|&c| c == 0))
    }
    fn hereditary(&self) -> bool {
        true
    }
}

impl Psi0 for Always {
    fn name(&self) -> String {
        "true".into()
    }
    fn holds(&self, _fg: &ColoringTable) -> Result<bool> {
        Ok(true)
    }
    fn hereditary(&self) -> bool {
        true
    }
}

/// A predicate written in the formula language over a coded table.
///
/// Free variables: `n` is the domain size and `k` the number of colors. The
/// parameter `A` holds position `(t_0·n^(r-1) + … + t_(r-1))·k + c` exactly
/// when the increasing tuple `t` has color `c`; other positions are empty.
pub struct FormulaPsi {
    formula: Formula,
    compiled: Compiled,
}

impl FormulaPsi {
    pub fn parse(text: &str) -> Result<Self> {
        let free: BTreeSet<String> = ["n".to_string(), "k".to_string()].into();
        let formula = parse_with_free(text, &free)?;
        let compiled = Compiled::new(&formula, &["n", "k"])?;
        Ok(FormulaPsi { formula, compiled })
    }

    pub fn code_table(fg: &ColoringTable) -> Result<SecondOrderParam> {
        let n = fg.domain().len();
        let k = fg.colors() as usize;
        let len = n
            .checked_pow(fg.arity() as u32)
            .and_then(|p| p.checked_mul(k))
            .filter(|&l| l <= 1 << 24)
            .ok_or_else(|| Error::TooLarge("coded table".into()))?;
        let mut bits = vec![false; len];
        for (t, &c) in (0..n).combinations(fg.arity()).zip(fg.table()) {
            let pos = t.iter().fold(0usize, |acc, &i| acc * n + i);
            bits[pos * k + c as usize] = true;
        }
        if fg.arity() == 0 {
            bits[fg.table()[0] as usize] = true;
        }
        Ok(SecondOrderParam::new(bits))
    }
}

impl Psi0 for FormulaPsi {
    fn name(&self) -> String {
        format!("formula:{}", self.formula)
    }
    fn holds(&self, fg: &ColoringTable) -> Result<bool> {
        let set = Self::code_table(fg)?;
        let vals = [nat(fg.domain().len() as u64), nat(fg.colors() as u64)];
        self.compiled.eval(&vals, &Nat::from(0u8), &set)
    }
}

pub fn psi_registry() -> Registry<dyn Psi0> {
    let mut r: Registry<dyn Psi0> = Registry::new("predicate");
    r.register("homogeneous", Arc::new(Homogeneous));
    r.register("transitive", Arc::new(Transitive));
    r.register("monotone-asc", Arc::new(MonotoneAscending));
    r.register("monotone-desc", Arc::new(MonotoneDescending));
    r.register("true", Arc::new(Always));
    r
}

/// Look up a built-in by name, or parse `formula:<text>`.
pub fn psi_by_name(name: &str) -> Result<Arc<dyn Psi0>> {
    if let Some(text) = name.strip_prefix("formula:") {
        return Ok(Arc::new(FormulaPsi::parse(text)?));
    }
    psi_registry().get(name)
}

#[derive(Clone)]
pub struct RtLikeStatement {
    pub arity: usize,
    pub colors: Color,
    pub psi: Arc<dyn Psi0>,
}

impl fmt::Debug for RtLikeStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "RtLike(arity {}, colors {}, {})",
            self.arity,
            self.colors,
            self.psi.name()
        )
    }
}

impl RtLikeStatement {
    pub fn new(arity: usize, colors: Color, psi: Arc<dyn Psi0>) -> Result<Self> {
        if !psi.supports_arity(arity) {
            return Err(Error::Shape(format!(
                "{} does not apply to arity {arity}",
                psi.name()
            )));
        }
        if colors == 0 {
            return Err(Error::Shape("need at least one color".into()));
        }
        Ok(RtLikeStatement { arity, colors, psi })
    }

    /// Ramsey's theorem for `arity`-tuples and `colors` colors.
    pub fn ramsey(arity: usize, colors: Color) -> Self {
        Self::new(arity, colors, Arc::new(Homogeneous)).expect("homogeneity fits every arity")
    }

    /// Transitive subsets of 2-colorings of pairs.
    pub fn erdos_moser() -> Self {
        Self::new(2, 2, Arc::new(Transitive)).expect("arity 2")
    }

    /// Whether the predicate holds of `f_G` for every finite `G` inside the
    /// witness, given by domain indices of `f`.
    pub fn satisfied_on(&self, f: &ColoringTable, idx: &[usize]) -> Result<bool> {
        if self.psi.hereditary() {
            return self.psi.holds(&f.restrict_idx(idx));
        }
        if idx.len() > MAX_SUBSET_SCAN {
            return Err(Error::TooLarge(format!(
                "witness of size {} for a non-hereditary predicate",
                idx.len()
            )));
        }
        for mask in 0u32..1 << idx.len() {
            let g: Vec<usize> = (0..idx.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| idx[i])
                .collect();
            if !self.psi.holds(&f.restrict_idx(&g))? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
