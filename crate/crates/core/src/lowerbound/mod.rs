//! Minimal large sets whose own block structure defines the sentence `T_X`,
//! and the parity coloring that leaves no homogeneous `ω^n`-large(T_X) subset.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::finset::FinSet;
use crate::formula::{parse, Pi03Sentence, SecondOrderParam, Theta};
use crate::nat::{nat, Nat};

pub mod tree;
pub mod verify;

pub use tree::{zero_blockfree, BlockAddress, CanonicalBlocks, CanonicalTree, ZeroBlockfree};
pub use verify::{
    confirm_exhaustive, confirm_small, verify_lower_bound, LowerBoundMode, LowerBoundReport,
    LowerBoundStatus,
};

/// `x` and `y` lie in one canonical `c`-block.
pub fn same_block(t: &dyn CanonicalBlocks, x: &Nat, y: &Nat, c: usize) -> Result<bool> {
    match t.block_of(x, c)? {
        None => Ok(false),
        Some(a) => Ok(t.block_of(y, c)?.as_ref() == Some(&a)),
    }
}

/// Whenever `x, z` are elements with `z >= y`, the element `y > x` opens a
/// block at some level that reaches `z` but not `x`.
pub fn splits(t: &dyn CanonicalBlocks, x: &Nat, y: &Nat, z: &Nat) -> Result<bool> {
    if !(t.contains(x)? && t.contains(z)? && z >= y) {
        return Ok(true);
    }
    if !(y > x && t.contains(y)?) {
        return Ok(false);
    }
    for c in 0..=t.rank() {
        if same_block(t, y, z, c)? && !same_block(t, x, y, c)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Parity of the lowest level of canonical block containing `v`.
pub fn level_parity(t: &dyn CanonicalBlocks, v: &Nat) -> Result<u32> {
    match t.least_level(v)? {
        Some(l) => Ok((l % 2) as u32),
        None => Err(Error::Domain(format!("{v} is not in {}", t.describe()))),
    }
}

/// Apartness of `a < b` read off `splits(max a, min b, max b)` alone.
pub fn apart_shortcut(t: &dyn CanonicalBlocks, a: &FinSet, b: &FinSet) -> Result<bool> {
    let (Some(max_a), Some(min_b), Some(max_b)) = (a.max(), b.min(), b.max()) else {
        return Err(Error::Precondition("apartness needs nonempty sets".into()));
    };
    if max_a >= min_b {
        return Err(Error::Precondition(format!("max {max_a} >= min {min_b}")));
    }
    for v in a.iter().chain(b.iter()) {
        if !t.contains(v)? {
            return Err(Error::Precondition(format!(
                "{v} is not in {}",
                t.describe()
            )));
        }
    }
    splits(t, max_a, min_b, max_b)
}

/// The sentence matrix `splits(x+1, y+1, z+1)`, evaluated structurally.
///
/// Apartness quantifies strictly below `max A`, `min B` and `max B`, while
/// the splitting condition has to see those elements themselves. The shift
/// makes strict apartness of `A < B` the same as
/// `∀x ≤ max A ∃y ≤ min B ∀z ≤ max B splits(x, y, z)`.
pub struct SplitTheta {
    blocks: Arc<dyn CanonicalBlocks>,
}

impl SplitTheta {
    pub fn new(blocks: Arc<dyn CanonicalBlocks>) -> Self {
        SplitTheta { blocks }
    }
}

impl Theta for SplitTheta {
    fn holds(&self, x: u64, y: u64, z: u64) -> Result<bool> {
        splits(self.blocks.as_ref(), &nat(x + 1), &nat(y + 1), &nat(z + 1))
    }

    fn describe(&self) -> String {
        format!("splits over {}", self.blocks.describe())
    }
}

/// Largest table `split_sentence` will build, in bits.
pub const TABLE_CEILING: u64 = 1 << 24;

/// [`SplitTheta`] written as an ordinary sentence. With `M = max X` it
/// holds vacuously outside `[0, M)^3` and is read from a table coded in `A`
/// inside.
pub fn split_sentence(t: &dyn CanonicalBlocks, ceiling: u64) -> Result<Pi03Sentence> {
    let set = t.materialize(&nat(ceiling))?;
    let m = set.max().map_or(Ok(0), |v| {
        u64::try_from(v.clone()).map_err(|_| Error::TooLarge(format!("table side {v}")))
    })?;
    let cells = m
        .checked_pow(3)
        .filter(|&c| c <= ceiling)
        .ok_or_else(|| Error::TooLarge(format!("a table of side {m} exceeds {ceiling} cells")))?;
    let mut bits = vec![false; cells as usize];
    let nats: Vec<Nat> = (1..=m).map(nat).collect();
    for z in 0..m {
        for y in 0..m {
            for x in 0..m {
                if splits(t, &nats[x as usize], &nats[y as usize], &nats[z as usize])? {
                    bits[(x + m * y + m * m * z) as usize] = true;
                }
            }
        }
    }
    let matrix = parse(&format!(
        "(x < {m} and y < {m} and z < {m}) -> x + {m} * y + {m} * {m} * z in A"
    ))?;
    Pi03Sentence::new(matrix, nat(0), SecondOrderParam::new(bits))
}
