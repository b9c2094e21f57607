//! Minimal `ω^n`-large intervals kept as symbolic trees of canonical blocks.
//!
//! A minimal interval `[b, max]` splits uniquely into its minimum and `b`
//! minimal `ω^(n-1)`-large children, each starting right after the previous
//! one ends. Nothing is listed until asked, and ends come from the size
//! recurrence, so even rank 10 trees answer membership queries.

use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::finset::{FinSet, DEFAULT_FLOOR};
use crate::largeness::{max_of_minimal, minimal_interval_size, Magnitude};
use crate::nat::{nat, Nat};

/// Path of child indices from the root, and the level of the block reached.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockAddress {
    pub path: Vec<usize>,
    pub level: usize,
}

/// A minimal large set together with its canonical blocks.
pub trait CanonicalBlocks: Send + Sync {
    fn rank(&self) -> usize;

    fn contains(&self, v: &Nat) -> Result<bool>;

    /// The canonical `c`-block holding `v`, if any.
    fn block_of(&self, v: &Nat, c: usize) -> Result<Option<BlockAddress>>;

    /// Least `c` such that `v` lies in a canonical `c`-block.
    fn least_level(&self, v: &Nat) -> Result<Option<usize>>;

    /// The elements, provided there are at most `budget` of them.
    fn materialize(&self, budget: &Nat) -> Result<FinSet>;

    fn describe(&self) -> String;
}

pub struct CanonicalTree {
    base: Nat,
    rank: usize,
    max: OnceLock<Magnitude>,
    children: Mutex<Vec<Arc<CanonicalTree>>>,
}

impl fmt::Debug for CanonicalTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "tree({}, {})", self.base, self.rank)
    }
}

/// `v <= m`, where `m` may only be bounded from below.
fn below_end(v: &Nat, m: &Magnitude) -> Result<bool> {
    match m {
        Magnitude::Exact(m) => Ok(v <= m),
        Magnitude::AtLeastPow2(e) if Nat::from(v.bits()) <= *e => Ok(true),
        Magnitude::AtLeastPow2(e) => Err(Error::TooLarge(format!(
            "{v} against a block end only known to be at least 2^{e}"
        ))),
    }
}

impl CanonicalTree {
    /// The minimal `ω^rank`-large interval starting at `base`.
    pub fn new(base: Nat, rank: usize) -> Result<Arc<Self>> {
        if base < nat(DEFAULT_FLOOR) {
            return Err(Error::Precondition(format!(
                "base {base} is below the floor {DEFAULT_FLOOR}"
            )));
        }
        Ok(Self::raw(base, rank))
    }

    fn raw(base: Nat, rank: usize) -> Arc<Self> {
        Arc::new(CanonicalTree {
            base,
            rank,
            max: OnceLock::new(),
            children: Mutex::new(Vec::new()),
        })
    }

    pub fn base(&self) -> &Nat {
        &self.base
    }

    pub fn max(&self) -> &Magnitude {
        self.max
            .get_or_init(|| max_of_minimal(&self.base, self.rank))
    }

    pub fn cardinality(&self) -> Magnitude {
        minimal_interval_size(&self.base, self.rank)
    }

    /// Number of children: the base for positive rank, none at rank 0.
    pub fn child_count(&self) -> Nat {
        if self.rank == 0 {
            nat(0)
        } else {
            self.base.clone()
        }
    }

    pub fn child(&self, i: usize) -> Result<Arc<CanonicalTree>> {
        if Nat::from(i) >= self.child_count() {
            return Err(Error::Domain(format!("{self:?} has no child {i}")));
        }
        if self.rank == 1 {
            return Ok(Self::raw(&self.base + 1u32 + i, 0));
        }
        let mut kids = self.children.lock().expect("child cache poisoned");
        while kids.len() <= i {
            let next = match kids.last() {
                None => &self.base + 1u32,
                Some(prev) => match prev.max() {
                    Magnitude::Exact(m) => m + 1u32,
                    inexact => {
                        return Err(Error::TooLarge(format!(
                            "child {} of {self:?} starts after {inexact}",
                            kids.len()
                        )))
                    }
                },
            };
            kids.push(Self::raw(next, self.rank - 1));
        }
        Ok(kids[i].clone())
    }

    /// All children, when there are few enough to list.
    pub fn children(&self) -> Result<Vec<Arc<CanonicalTree>>> {
        let count = self
            .child_count()
            .to_usize()
            .filter(|&c| c <= 1 << 20)
            .ok_or_else(|| Error::TooLarge(format!("{self:?} has {} children", self.base)))?;
        (0..count).map(|i| self.child(i)).collect()
    }

    /// The canonical block reached by following `path`.
    pub fn subtree(self: &Arc<Self>, path: &[usize]) -> Result<Arc<CanonicalTree>> {
        let mut node = self.clone();
        for &i in path {
            node = node.child(i)?;
        }
        Ok(node)
    }

    fn child_containing(&self, v: &Nat) -> Result<(usize, Arc<CanonicalTree>)> {
        let offset = (v - &self.base - 1u32)
            .to_usize()
            .ok_or_else(|| Error::TooLarge(format!("locating {v} in {self:?}")))?;
        if self.rank == 1 {
            return Ok((offset, self.child(offset)?));
        }
        // Every child has at least one element, so the index is at most the offset.
        for i in 0..=offset {
            let c = self.child(i)?;
            if below_end(v, c.max())? {
                return Ok((i, c));
            }
        }
        unreachable!("{v} is in {self:?} but in none of its children")
    }

    fn walk(&self, v: &Nat, c: usize, path: &mut Vec<usize>) -> Result<bool> {
        if self.rank == c {
            return Ok(true);
        }
        if *v == self.base {
            return Ok(false);
        }
        let (i, child) = self.child_containing(v)?;
        path.push(i);
        child.walk(v, c, path)
    }

    fn level_of(&self, v: &Nat) -> Result<usize> {
        if *v == self.base {
            return Ok(self.rank);
        }
        self.child_containing(v)?.1.level_of(v)
    }
}

impl CanonicalBlocks for CanonicalTree {
    fn rank(&self) -> usize {
        self.rank
    }

    fn contains(&self, v: &Nat) -> Result<bool> {
        Ok(*v >= self.base && below_end(v, self.max())?)
    }

    fn block_of(&self, v: &Nat, c: usize) -> Result<Option<BlockAddress>> {
        if c > self.rank || !self.contains(v)? {
            return Ok(None);
        }
        let mut path = Vec::new();
        Ok(self
            .walk(v, c, &mut path)?
            .then_some(BlockAddress { path, level: c }))
    }

    fn least_level(&self, v: &Nat) -> Result<Option<usize>> {
        if !self.contains(v)? {
            return Ok(None);
        }
        self.level_of(v).map(Some)
    }

    fn materialize(&self, budget: &Nat) -> Result<FinSet> {
        let size = self.cardinality();
        if !size.fits(budget) {
            return Err(Error::Overflow {
                cardinality: size.to_string(),
                budget: budget.to_string(),
            });
        }
        let len = size
            .exact()
            .and_then(|c| c.to_u64())
            .expect("within budget");
        let mut v = self.base.clone();
        let mut out = Vec::with_capacity(len as usize);
        for _ in 0..len {
            out.push(v.clone());
            v += 1u32;
        }
        FinSet::new(out, nat(DEFAULT_FLOOR))
    }

    fn describe(&self) -> String {
        format!("tree({}, {})", self.base, self.rank)
    }
}

/// The elements lying in no canonical 0-block. This is minimal one rank
/// lower, its `c`-blocks being the `(c+1)`-blocks of the original.
pub struct ZeroBlockfree {
    inner: Arc<dyn CanonicalBlocks>,
}

pub fn zero_blockfree(t: Arc<dyn CanonicalBlocks>) -> Result<ZeroBlockfree> {
    if t.rank() == 0 {
        return Err(Error::Precondition(
            "rank 0 has nothing left after removing 0-blocks".into(),
        ));
    }
    Ok(ZeroBlockfree { inner: t })
}

impl CanonicalBlocks for ZeroBlockfree {
    fn rank(&self) -> usize {
        self.inner.rank() - 1
    }

    fn contains(&self, v: &Nat) -> Result<bool> {
        Ok(self.inner.least_level(v)?.is_some_and(|l| l >= 1))
    }

    fn block_of(&self, v: &Nat, c: usize) -> Result<Option<BlockAddress>> {
        if c > self.rank() || !self.contains(v)? {
            return Ok(None);
        }
        Ok(self.inner.block_of(v, c + 1)?.map(|a| BlockAddress {
            path: a.path,
            level: c,
        }))
    }

    fn least_level(&self, v: &Nat) -> Result<Option<usize>> {
        Ok(self
            .inner
            .least_level(v)?
            .filter(|&l| l >= 1)
            .map(|l| l - 1))
    }

    fn materialize(&self, budget: &Nat) -> Result<FinSet> {
        let all = self.inner.materialize(budget)?;
        let mut keep = Vec::new();
        for v in all.iter() {
            if self.contains(v)? {
                keep.push(v.clone());
            }
        }
        FinSet::new(keep, all.floor().clone())
    }

    fn describe(&self) -> String {
        format!("blockfree({})", self.inner.describe())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_two_above_three() {
        let t = CanonicalTree::new(nat(3), 2).unwrap();
        assert_eq!(t.cardinality(), Magnitude::Exact(nat(36)));
        assert_eq!(*t.max(), Magnitude::Exact(nat(38)));
        let bases: Vec<Nat> = t
            .children()
            .unwrap()
            .iter()
            .map(|c| c.base().clone())
            .collect();
        assert_eq!(bases, vec![nat(4), nat(9), nat(19)]);
    }

    #[test]
    fn addresses() {
        let t = CanonicalTree::new(nat(3), 2).unwrap();
        assert_eq!(t.block_of(&nat(3), 1).unwrap(), None);
        assert_eq!(
            t.block_of(&nat(7), 1).unwrap(),
            Some(BlockAddress {
                path: vec![0],
                level: 1
            })
        );
        assert_eq!(t.block_of(&nat(4), 0).unwrap(), None);
        assert_eq!(t.block_of(&nat(39), 2).unwrap(), None);
        assert_eq!(
            t.block_of(&nat(20), 0).unwrap(),
            Some(BlockAddress {
                path: vec![2, 0],
                level: 0
            })
        );
    }

    #[test]
    fn rank_three_is_navigable_without_listing() {
        let t = CanonicalTree::new(nat(3), 3).unwrap();
        assert!(t.materialize(&nat(1 << 20)).is_err());
        assert_eq!(
            t.block_of(&nat(50), 1).unwrap(),
            Some(BlockAddress {
                path: vec![0, 3],
                level: 1
            })
        );
        let second = t.child(1).unwrap();
        assert_eq!(*second.base(), nat(95));
        assert!(t.contains(&(nat(1) << 96u32)).unwrap());
    }

    #[test]
    fn blockfree_views() {
        let t: Arc<dyn CanonicalBlocks> = CanonicalTree::new(nat(3), 2).unwrap();
        let once: Arc<dyn CanonicalBlocks> = Arc::new(zero_blockfree(t).unwrap());
        let big = nat(1000);
        assert_eq!(
            once.materialize(&big).unwrap(),
            FinSet::from_u64s(&[3, 4, 9, 19]).unwrap()
        );
        let twice = zero_blockfree(once).unwrap();
        assert_eq!(
            twice.materialize(&big).unwrap(),
            FinSet::from_u64s(&[3]).unwrap()
        );
        assert!(zero_blockfree(Arc::new(twice)).is_err());
    }
}
