//! Finite groupings: increasing large blocks whose cross products are
//! monochromatic, pairwise apart, and whose transversals are large.

use std::fmt;

use itertools::Itertools;
use serde_json::json;

use crate::coloring::{Color, ColoringTable};
use crate::error::{Error, Result};
use crate::finset::FinSet;
use crate::formula::Theta;
use crate::largeness::{is_large, t_apart, LargenessSpec};
use crate::nat::Nat;

pub mod find;
pub mod subset;

pub use find::find_grouping;
pub use subset::{
    ks_homogeneous, ks_transitive, rooted_homogeneous, subset_search, SubsetProperty,
};

/// Above this many transversals, condition (ii) for a relative largeness
/// notion gives up with a budget error.
pub const MAX_TRANSVERSALS: u128 = 1 << 16;

/// A superset-closed family of finite sets.
#[derive(Clone, Debug)]
pub enum LSpec {
    Largeness(LargenessSpec),
    CardAtLeast(usize),
}

impl LSpec {
    pub fn holds(&self, h: &FinSet) -> Result<bool> {
        match self {
            LSpec::Largeness(spec) => is_large(h, spec),
            LSpec::CardAtLeast(m) => Ok(h.len() >= *m),
        }
    }
}

impl fmt::Display for LSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LSpec::Largeness(spec) => write!(f, "{spec:?}"),
            LSpec::CardAtLeast(m) => write!(f, "card>={m}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupingWitness {
    pub blocks: Vec<FinSet>,
    pub coloring: ColoringTable,
}

impl GroupingWitness {
    pub fn to_json_value(&self) -> serde_json::Value {
        json!({
            "blocks": self.blocks.iter().map(FinSet::to_json_value).collect::<Vec<_>>(),
            "coloring": self.coloring.to_json_value(),
        })
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
        let coloring = ColoringTable::from_json_str(
            &v.get("coloring")
                .ok_or_else(|| Error::Parse("missing `coloring`".into()))?
                .to_string(),
        )?;
        let floor = coloring.domain().floor().clone();
        let blocks = v
            .get("blocks")
            .and_then(|b| b.as_array())
            .ok_or_else(|| Error::Parse("missing `blocks` list".into()))?
            .iter()
            .map(|b| FinSet::parse_text(&b.to_string(), floor.clone()))
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupingWitness { blocks, coloring })
    }

    /// Rejects empty, overlapping or out-of-order blocks and blocks that leave
    /// the coloring's domain.
    pub fn check_shape(&self) -> Result<()> {
        for (i, b) in self.blocks.iter().enumerate() {
            if b.is_empty() {
                return Err(Error::Shape(format!("block {i} is empty")));
            }
            if let Some(v) = b.iter().find(|v| !self.coloring.domain().contains(v)) {
                return Err(Error::Domain(format!(
                    "{v} in block {i} is outside the coloring's domain"
                )));
            }
        }
        for (i, w) in self.blocks.windows(2).enumerate() {
            if w[0].max() >= w[1].min() {
                return Err(Error::Shape(format!(
                    "blocks {i} and {} are not increasing",
                    i + 1
                )));
            }
        }
        Ok(())
    }
}

/// The first failed condition of a grouping.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Block `i` is not L0-large.
    BlockNotLarge(usize),
    /// A one-point-per-block selection outside L1.
    Transversal(Vec<Nat>),
    /// Two tuples drawn from these blocks get different colors.
    NotMonochromatic(Vec<usize>),
    NotApart(usize, usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BlockNotLarge(i) => write!(f, "block {i} is not L0-large"),
            Violation::Transversal(t) => {
                write!(f, "transversal {{{}}} is not L1-large", t.iter().join(", "))
            }
            Violation::NotMonochromatic(h) => write!(f, "blocks {h:?} are not monochromatic"),
            Violation::NotApart(i, j) => write!(f, "blocks {i} and {j} are not apart"),
        }
    }
}

/// Whether every transversal of `blocks` lies in `l1`, as a failing
/// transversal if not.
pub fn transversal_violation(blocks: &[FinSet], l1: &LSpec) -> Result<Option<Vec<Nat>>> {
    let firsts = || blocks.iter().map(|b| b.get(0).clone()).collect::<Vec<_>>();
    match l1 {
        LSpec::CardAtLeast(m) => Ok((blocks.len() < *m).then(firsts)),
        LSpec::Largeness(spec) if spec.theta.is_top() => {
            // Lowering elements keeps plain largeness, so the selection of
            // block maxima is the hardest one.
            let maxima: Vec<Nat> = blocks.iter().map(|b| b.max().unwrap().clone()).collect();
            let set = FinSet::new(maxima.clone(), Nat::from(0u32))?;
            Ok((!is_large(&set, spec)?).then_some(maxima))
        }
        LSpec::Largeness(spec) => {
            let count = blocks
                .iter()
                .fold(1u128, |acc, b| acc.saturating_mul(b.len() as u128));
            if count > MAX_TRANSVERSALS {
                return Err(Error::Budget(format!(
                    "{count} transversals exceed {MAX_TRANSVERSALS}"
                )));
            }
            for pick in blocks
                .iter()
                .map(|b| b.iter().cloned())
                .multi_cartesian_product()
            {
                let set = FinSet::new(pick.clone(), Nat::from(0u32))?;
                if !is_large(&set, spec)? {
                    return Ok(Some(pick));
                }
            }
            if blocks.is_empty() && !is_large(&FinSet::empty(), spec)? {
                return Ok(Some(Vec::new()));
            }
            Ok(None)
        }
    }
}

fn monochromatic(f: &ColoringTable, blocks: &[&FinSet]) -> Result<bool> {
    let idx: Vec<Vec<usize>> = blocks
        .iter()
        .map(|b| {
            b.iter()
                .map(|v| f.domain().index_of(v).expect("shape checked"))
                .collect()
        })
        .collect();
    let mut seen: Option<Color> = None;
    for t in idx
        .iter()
        .map(|b| b.iter().copied())
        .multi_cartesian_product()
    {
        let c = f.color_idx(&t);
        if seen.is_some_and(|s| s != c) {
            return Ok(false);
        }
        seen = Some(c);
    }
    Ok(true)
}

/// The first violated grouping condition, or `None` for a grouping.
pub fn grouping_violation(
    w: &GroupingWitness,
    l0: &LSpec,
    l1: &LSpec,
    theta: &dyn Theta,
) -> Result<Option<Violation>> {
    w.check_shape()?;
    for (i, b) in w.blocks.iter().enumerate() {
        if !l0.holds(b)? {
            return Ok(Some(Violation::BlockNotLarge(i)));
        }
    }
    if let Some(t) = transversal_violation(&w.blocks, l1)? {
        return Ok(Some(Violation::Transversal(t)));
    }
    for h in (0..w.blocks.len()).combinations(w.coloring.arity()) {
        let parts: Vec<&FinSet> = h.iter().map(|&i| &w.blocks[i]).collect();
        if !monochromatic(&w.coloring, &parts)? {
            return Ok(Some(Violation::NotMonochromatic(h)));
        }
    }
    for i in 0..w.blocks.len() {
        for j in i + 1..w.blocks.len() {
            if !t_apart(&w.blocks[i], &w.blocks[j], theta)? {
                return Ok(Some(Violation::NotApart(i, j)));
            }
        }
    }
    Ok(None)
}

pub fn is_grouping(w: &GroupingWitness, l0: &LSpec, l1: &LSpec, theta: &dyn Theta) -> Result<bool> {
    Ok(grouping_violation(w, l0, l1, theta)?.is_none())
}
