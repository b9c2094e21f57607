//! Certificates of largeness and their independent checker.
//!
//! A block is a contiguous index range of the set being certified. Largeness
//! is closed under supersets, and apartness of two blocks only looks at their
//! extremes, so contiguous blocks lose nothing.

use serde::{Deserialize, Serialize};

use super::apart::apart_values;
use super::LargenessSpec;
use crate::error::{Error, Result};
use crate::finset::FinSet;
use crate::formula::Theta;
use crate::nat::{serde_dec, to_usize_sat, Nat};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Certificate {
    /// Exponent 0: the block is nonempty, witnessed by one element.
    Leaf { index: usize },
    /// Exponent `n+1`: `min` children of exponent `n` above the minimum.
    Node {
        #[serde(with = "serde_dec")]
        min: Nat,
        children: Vec<Block>,
    },
    /// Top level `ω^n·k`: `k` blocks of exponent `n`.
    Blocks { blocks: Vec<Block> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub start: usize,
    pub end: usize,
    pub cert: Certificate,
}

impl Certificate {
    /// The top-level blocks, if this is a top-level certificate.
    pub fn blocks(&self) -> &[Block] {
        match self {
            Certificate::Blocks { blocks } => blocks,
            _ => &[],
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))
    }
}

impl Block {
    pub fn set(&self, x: &FinSet) -> FinSet {
        x.range(self.start, self.end)
    }

    /// Shift every index by `delta` (used when a block is re-rooted).
    pub fn shifted(&self, delta: isize) -> Block {
        let s = |i: usize| (i as isize + delta) as usize;
        let cert = match &self.cert {
            Certificate::Leaf { index } => Certificate::Leaf { index: s(*index) },
            Certificate::Node { min, children } => Certificate::Node {
                min: min.clone(),
                children: children.iter().map(|c| c.shifted(delta)).collect(),
            },
            Certificate::Blocks { blocks } => Certificate::Blocks {
                blocks: blocks.iter().map(|c| c.shifted(delta)).collect(),
            },
        };
        Block {
            start: s(self.start),
            end: s(self.end),
            cert,
        }
    }
}

struct Checker<'a> {
    xs: &'a [Nat],
    theta: &'a dyn Theta,
    paranoid: bool,
}

impl Checker<'_> {
    fn ordered(&self, blocks: &[Block], lo: usize, hi: usize) -> bool {
        blocks
            .iter()
            .all(|b| lo <= b.start && b.start <= b.end && b.end <= hi)
            && blocks.windows(2).all(|w| w[0].end < w[1].start)
    }

    fn apart(&self, a: &Block, b: &Block) -> Result<bool> {
        apart_values(
            &self.xs[a.end],
            &self.xs[b.start],
            &self.xs[b.end],
            self.theta,
        )
    }

    fn family_apart(&self, blocks: &[Block]) -> Result<bool> {
        if self.paranoid {
            for i in 0..blocks.len() {
                for j in i + 1..blocks.len() {
                    if !self.apart(&blocks[i], &blocks[j])? {
                        return Ok(false);
                    }
                }
            }
            return Ok(true);
        }
        for w in blocks.windows(2) {
            if !self.apart(&w[0], &w[1])? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn block(&self, b: &Block, exponent: usize) -> Result<bool> {
        if b.start > b.end || b.end >= self.xs.len() {
            return Ok(false);
        }
        match (&b.cert, exponent) {
            (Certificate::Leaf { index }, 0) => Ok(b.start <= *index && *index <= b.end),
            (Certificate::Node { min, children }, e) if e > 0 => {
                if *min != self.xs[b.start] || to_usize_sat(min) != children.len() {
                    return Ok(false);
                }
                if b.start == usize::MAX || !self.ordered(children, b.start + 1, b.end) {
                    return Ok(false);
                }
                for c in children {
                    if !self.block(c, e - 1)? {
                        return Ok(false);
                    }
                }
                self.family_apart(children)
            }
            _ => Ok(false),
        }
    }
}

/// Replay a certificate against `x` and `spec`. With `paranoid`, apartness is
/// checked for every pair of sibling blocks instead of consecutive ones.
pub fn verify_certificate(
    x: &FinSet,
    cert: &Certificate,
    spec: &LargenessSpec,
    paranoid: bool,
) -> Result<bool> {
    let Certificate::Blocks { blocks } = cert else {
        return Ok(false);
    };
    if blocks.len() != spec.multiplier || x.is_empty() {
        return Ok(spec.multiplier == 0 && blocks.is_empty());
    }
    let ck = Checker {
        xs: x.elements(),
        theta: spec.theta.as_ref(),
        paranoid,
    };
    if !ck.ordered(blocks, 0, x.len() - 1) {
        return Ok(false);
    }
    for b in blocks {
        if !ck.block(b, spec.exponent)? {
            return Ok(false);
        }
    }
    ck.family_apart(blocks)
}

/// Certificate in terms of values rather than indices, so that it can be
/// moved between sets that share the relevant elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValueTree {
    Leaf(Nat),
    Node { min: Nat, children: Vec<ValueBlock> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueBlock {
    pub lo: Nat,
    pub hi: Nat,
    pub tree: ValueTree,
}

impl ValueBlock {
    pub fn from_block(x: &FinSet, b: &Block) -> ValueBlock {
        let tree = match &b.cert {
            Certificate::Leaf { index } => ValueTree::Leaf(x.get(*index).clone()),
            Certificate::Node { min, children } => ValueTree::Node {
                min: min.clone(),
                children: children
                    .iter()
                    .map(|c| ValueBlock::from_block(x, c))
                    .collect(),
            },
            Certificate::Blocks { .. } => panic!("nested top-level certificate"),
        };
        ValueBlock {
            lo: x.get(b.start).clone(),
            hi: x.get(b.end).clone(),
            tree,
        }
    }

    /// Indices into `x`, which must contain every value mentioned.
    pub fn to_block(&self, x: &FinSet) -> Result<Block> {
        let idx = |v: &Nat| {
            x.index_of(v)
                .ok_or_else(|| Error::Domain(format!("{v} missing from the certified set")))
        };
        let cert = match &self.tree {
            ValueTree::Leaf(v) => Certificate::Leaf { index: idx(v)? },
            ValueTree::Node { min, children } => Certificate::Node {
                min: min.clone(),
                children: children
                    .iter()
                    .map(|c| c.to_block(x))
                    .collect::<Result<_>>()?,
            },
        };
        Ok(Block {
            start: idx(&self.lo)?,
            end: idx(&self.hi)?,
            cert,
        })
    }

    /// Weaken an exponent-`from` witness to exponent `to <= from`.
    pub fn downgrade(&self, from: usize, to: usize) -> ValueBlock {
        assert!(to <= from);
        if to == from {
            return self.clone();
        }
        // The weaker witness needs less room, so the range shrinks to fit it.
        match (&self.tree, to) {
            (_, 0) => ValueBlock {
                lo: self.lo.clone(),
                hi: self.lo.clone(),
                tree: ValueTree::Leaf(self.lo.clone()),
            },
            (ValueTree::Node { min, children }, _) => {
                let children: Vec<ValueBlock> = children
                    .iter()
                    .map(|c| c.downgrade(from - 1, to - 1))
                    .collect();
                let hi = children.last().map_or(self.lo.clone(), |c| c.hi.clone());
                ValueBlock {
                    lo: self.lo.clone(),
                    hi,
                    tree: ValueTree::Node {
                        min: min.clone(),
                        children,
                    },
                }
            }
            (ValueTree::Leaf(_), _) => unreachable!("a leaf has exponent 0"),
        }
    }

    pub fn children(&self) -> &[ValueBlock] {
        match &self.tree {
            ValueTree::Node { children, .. } => children,
            ValueTree::Leaf(_) => &[],
        }
    }

    /// Elements of `x` lying in `[lo, hi]`.
    pub fn members(&self, x: &FinSet) -> FinSet {
        x.filter(|v| *v >= self.lo && *v <= self.hi)
    }
}

/// Wrap value blocks as a top-level certificate over `x`.
pub fn certificate_from_values(x: &FinSet, blocks: &[ValueBlock]) -> Result<Certificate> {
    Ok(Certificate::Blocks {
        blocks: blocks
            .iter()
            .map(|b| b.to_block(x))
            .collect::<Result<_>>()?,
    })
}
