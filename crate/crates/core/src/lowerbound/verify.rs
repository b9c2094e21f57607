//! Checking that no subset homogeneous for the parity coloring is
//! `ω^n`-large relative to the set's own splitting sentence.

use std::fmt;
use std::sync::Arc;

use super::tree::{zero_blockfree, CanonicalBlocks, CanonicalTree};
use super::{level_parity, SplitTheta};
use crate::error::{Error, Result};
use crate::finset::FinSet;
use crate::largeness::{is_large, LargenessSpec};
use crate::nat::nat;

/// Largest color class whose subsets are all listed.
pub const MAX_CLASS_LEN: usize = 20;
/// Largest set the pruned search materializes.
pub const MAX_PRUNED_LEN: u64 = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LowerBoundMode {
    /// Every homogeneous subset is tested.
    Exhaustive,
    /// One test per color and minimum on small sets. On large ones, up to
    /// `budget` sub-instances inside single blocks, where any homogeneous
    /// large subset would have to leave a smaller counterexample.
    Pruned { budget: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LowerBoundStatus {
    /// Every candidate was examined and none is large.
    Confirmed,
    /// The sub-instances reached were confirmed; the rest were out of reach.
    Consistent,
    /// A homogeneous large subset, in the set or in a sub-instance.
    Refuted(FinSet),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerBoundReport {
    pub n: usize,
    pub status: LowerBoundStatus,
    pub largeness_checks: u64,
    pub sub_instances: u64,
    pub note: String,
}

impl fmt::Display for LowerBoundStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LowerBoundStatus::Confirmed => f.write_str("confirmed"),
            LowerBoundStatus::Consistent => f.write_str("consistent"),
            LowerBoundStatus::Refuted(w) => write!(f, "refuted by {w}"),
        }
    }
}

fn color_classes(t: &dyn CanonicalBlocks, set: &FinSet) -> Result<[Vec<usize>; 2]> {
    let mut classes = [Vec::new(), Vec::new()];
    for (i, v) in set.iter().enumerate() {
        classes[level_parity(t, v)? as usize].push(i);
    }
    Ok(classes)
}

fn spec_for(t: &Arc<dyn CanonicalBlocks>, n: usize) -> LargenessSpec {
    LargenessSpec::new(n, 1, Arc::new(SplitTheta::new(t.clone())))
}

/// Test every homogeneous subset of a set small enough to enumerate.
pub fn confirm_exhaustive(t: Arc<dyn CanonicalBlocks>, n: usize) -> Result<LowerBoundReport> {
    let set = t.materialize(&nat(2 * MAX_CLASS_LEN as u64))?;
    let spec = spec_for(&t, n);
    let mut checks = 0;
    for class in color_classes(t.as_ref(), &set)? {
        if class.len() > MAX_CLASS_LEN {
            return Err(Error::TooLarge(format!(
                "a color class of {} elements",
                class.len()
            )));
        }
        for mask in 1u32..1 << class.len() {
            let pick: Vec<usize> = (0..class.len())
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| class[b])
                .collect();
            let sub = set.pick(&pick);
            checks += 1;
            if is_large(&sub, &spec)? {
                return Ok(report(
                    n,
                    LowerBoundStatus::Refuted(sub),
                    checks,
                    0,
                    "exhaustive",
                ));
            }
        }
    }
    Ok(report(
        n,
        LowerBoundStatus::Confirmed,
        checks,
        0,
        "every homogeneous subset tested",
    ))
}

/// Complete check on a materializable set: a large homogeneous subset with
/// minimum `m` makes the whole class above `m` large too.
pub fn confirm_small(t: Arc<dyn CanonicalBlocks>, n: usize) -> Result<LowerBoundReport> {
    let set = t.materialize(&nat(MAX_PRUNED_LEN))?;
    let spec = spec_for(&t, n);
    let mut checks = 0;
    for class in color_classes(t.as_ref(), &set)? {
        for from in 0..class.len() {
            let sub = set.pick(&class[from..]);
            checks += 1;
            if is_large(&sub, &spec)? {
                return Ok(report(
                    n,
                    LowerBoundStatus::Refuted(sub),
                    checks,
                    0,
                    "class suffix",
                ));
            }
        }
    }
    Ok(report(
        n,
        LowerBoundStatus::Confirmed,
        checks,
        0,
        "one test per color and minimum",
    ))
}

fn report(
    n: usize,
    status: LowerBoundStatus,
    checks: u64,
    subs: u64,
    note: &str,
) -> LowerBoundReport {
    LowerBoundReport {
        n,
        status,
        largeness_checks: checks,
        sub_instances: subs,
        note: note.to_string(),
    }
}

fn fits(t: &dyn CanonicalBlocks) -> bool {
    t.materialize(&nat(MAX_PRUNED_LEN)).is_ok()
}

/// No subset of `t` homogeneous for the parity coloring is
/// `ω^n`-large(T_X), where `t` has rank `2n-1`.
pub fn verify_lower_bound(
    t: &Arc<CanonicalTree>,
    n: usize,
    mode: LowerBoundMode,
) -> Result<LowerBoundReport> {
    if n == 0 || t.as_ref().rank() != 2 * n - 1 {
        return Err(Error::Precondition(format!(
            "rank {} is not 2n-1 for n = {n}",
            t.as_ref().rank()
        )));
    }
    let blocks: Arc<dyn CanonicalBlocks> = t.clone();
    match mode {
        LowerBoundMode::Exhaustive => confirm_exhaustive(blocks, n),
        LowerBoundMode::Pruned { .. } if fits(blocks.as_ref()) => confirm_small(blocks, n),
        LowerBoundMode::Pruned { .. } if n == 1 => Ok(report(
            n,
            LowerBoundStatus::Consistent,
            0,
            0,
            "too large to examine and nothing smaller to reduce to",
        )),
        LowerBoundMode::Pruned { budget } => sub_instances(t, n, budget),
    }
}

/// A color-0 counterexample would leave one inside a grandchild, a color-1
/// counterexample one inside the blockfree part of a child. Both have rank
/// `2n-3`, so each is checked for `n-1`.
fn sub_instances(t: &Arc<CanonicalTree>, n: usize, budget: u64) -> Result<LowerBoundReport> {
    let (mut used, mut checks, mut skipped) = (0u64, 0u64, 0u64);
    let mut out_of_reach = false;
    let children = match t.children() {
        Ok(c) => c,
        Err(_) => (0..).map_while(|i| t.child(i).ok()).take(1 << 10).collect(),
    };
    'outer: for child in &children {
        let mut candidates: Vec<Arc<dyn CanonicalBlocks>> =
            vec![Arc::new(zero_blockfree(child.clone())?)];
        for i in 0.. {
            match child.child(i) {
                Ok(g) if fits(g.as_ref()) => candidates.push(g),
                Ok(_) | Err(_) => {
                    out_of_reach |= nat(i as u64) < child.child_count();
                    break;
                }
            }
        }
        for sub in candidates {
            if used >= budget {
                out_of_reach = true;
                break 'outer;
            }
            if !fits(sub.as_ref()) {
                skipped += 1;
                continue;
            }
            used += 1;
            let r = confirm_small(sub.clone(), n - 1)?;
            checks += r.largeness_checks;
            if let LowerBoundStatus::Refuted(w) = r.status {
                let note = format!("counterexample inside {}", sub.describe());
                return Ok(report(n, LowerBoundStatus::Refuted(w), checks, used, &note));
            }
        }
    }
    let note = format!(
        "{used} sub-instances confirmed, {skipped} too large{}",
        if out_of_reach || skipped > 0 {
            ", others out of reach"
        } else {
            ""
        }
    );
    Ok(report(n, LowerBoundStatus::Consistent, checks, used, &note))
}
