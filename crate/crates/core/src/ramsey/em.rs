//! Large transitive subsets of pair colorings, built level by level from
//! groupings.
//!
//! At level `m > 0` the set is split into a grouping whose blocks are large
//! enough for level `m-1` and whose transversals are large in the plain
//! sense. Each block yields a transitive sub-block, the coloring between
//! blocks is a tournament on their minima, and a transitive ω-large set of
//! minima selects the blocks to keep.

use std::fmt;
use std::sync::Arc;

use crate::coloring::{is_transitive_idx, ColoringTable};
use crate::error::{Error, Result};
use crate::finset::FinSet;
use crate::formula::Theta;
use crate::grouping::{find_grouping, ks_transitive, LSpec};
use crate::largeness::{
    certificate_from_values, verify_certificate, Certificate, LargenessSpec, ValueBlock, ValueTree,
};
use crate::nat::{nat, pow, to_usize_sat, Nat};
use crate::outcome::{Budget, Outcome};
use crate::ramsey::bounds::EM_BASE;

/// Block exponents per level and the plain exponent required of transversals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmConfig {
    /// `levels[j]`: exponent of the grouping blocks used at level `j + 1`.
    pub levels: Vec<usize>,
    pub transversal_exponent: usize,
}

impl EmConfig {
    pub fn scaled(levels: Vec<usize>, transversal_exponent: usize) -> Self {
        EmConfig {
            levels,
            transversal_exponent,
        }
    }

    /// The published constants: `(16^6+1)^j` per level and exponent 6.
    /// They overflow `usize` past the first levels and are reported for
    /// reference only.
    pub fn published(n: usize) -> Vec<Nat> {
        (0..n).map(|j| pow(&nat(EM_BASE), j as u32)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmWitness {
    pub set: FinSet,
    pub certificate: Certificate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FailureKind {
    Budget,
    /// The search finished and nothing exists at these constants.
    NotFound,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmFailure {
    pub stage: String,
    pub kind: FailureKind,
}

impl fmt::Display for EmFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FailureKind::Budget => write!(f, "budget exhausted at {}", self.stage),
            FailureKind::NotFound => write!(f, "nothing found at {}", self.stage),
        }
    }
}

struct Em<'a> {
    f: &'a ColoringTable,
    theta: Arc<dyn Theta>,
    config: &'a EmConfig,
    budget: &'a mut Budget,
}

fn stage<T>(out: Outcome<T>, name: String) -> std::result::Result<T, EmFailure> {
    match out {
        Outcome::Found(t) => Ok(t),
        Outcome::Absent => Err(EmFailure {
            stage: name,
            kind: FailureKind::NotFound,
        }),
        Outcome::Exhausted(_) => Err(EmFailure {
            stage: name,
            kind: FailureKind::Budget,
        }),
    }
}

type Step<T> = Result<std::result::Result<T, EmFailure>>;

impl Em<'_> {
    /// A transitive `ω^level`-large(T) subset of `x` with a value-level witness.
    fn extract(&mut self, x: &FinSet, level: usize) -> Step<(FinSet, ValueBlock)> {
        let Some(min) = x.min().cloned() else {
            return Err(Error::Precondition(
                "extraction needs a nonempty set".into(),
            ));
        };
        if level == 0 {
            let leaf = ValueBlock {
                lo: min.clone(),
                hi: min.clone(),
                tree: ValueTree::Leaf(min.clone()),
            };
            return Ok(Ok((FinSet::new(vec![min], x.floor().clone())?, leaf)));
        }
        let exponent = *self.config.levels.get(level - 1).ok_or_else(|| {
            Error::Precondition(format!("no block exponent configured for level {level}"))
        })?;
        let l0 = LSpec::Largeness(LargenessSpec::new(exponent, 1, self.theta.clone()));
        let l1 = LSpec::Largeness(LargenessSpec::plain(self.config.transversal_exponent, 1));
        let grouping = find_grouping(x, self.f, &l0, &l1, self.theta.as_ref(), self.budget)?;
        let grouping = match stage(grouping, format!("grouping at level {level}")) {
            Ok(g) => g,
            Err(e) => return Ok(Err(e)),
        };
        let mut parts = Vec::with_capacity(grouping.blocks.len());
        for block in &grouping.blocks {
            match self.extract(block, level - 1)? {
                Ok(p) => parts.push(p),
                Err(e) => return Ok(Err(e)),
            }
        }
        let minima = FinSet::new(
            parts.iter().map(|(y, _)| y.get(0).clone()).collect(),
            x.floor().clone(),
        )?;
        let chosen = ks_transitive(&minima, self.f, &LargenessSpec::plain(1, 1), self.budget)?;
        let chosen = match stage(chosen, format!("transitive block minima at level {level}")) {
            Ok(c) => c,
            Err(e) => return Ok(Err(e)),
        };
        let kept: Vec<&(FinSet, ValueBlock)> = parts
            .iter()
            .filter(|(y, _)| chosen.contains(y.get(0)))
            .collect();
        let root = kept[0].0.get(0).clone();
        let children: Vec<ValueBlock> = kept[1..=to_usize_sat(&root)]
            .iter()
            .map(|(_, vb)| vb.clone())
            .collect();
        let union = FinSet::union_of(
            &kept.iter().map(|(y, _)| y.clone()).collect::<Vec<_>>(),
            x.floor().clone(),
        )?;
        let hi = children.last().map_or(root.clone(), |c| c.hi.clone());
        let tree = ValueBlock {
            lo: root.clone(),
            hi,
            tree: ValueTree::Node {
                min: root,
                children,
            },
        };
        Ok(Ok((union, tree)))
    }
}

/// A transitive `ω^n`-large(T) subset of `x` for the pair coloring `f`.
/// Every success is re-validated: transitivity by a scan of all triples and
/// largeness by replaying the certificate.
pub fn em_extract(
    x: &FinSet,
    f: &ColoringTable,
    n: usize,
    theta: Arc<dyn Theta>,
    config: &EmConfig,
    budget: &mut Budget,
) -> Result<std::result::Result<EmWitness, EmFailure>> {
    if f.arity() != 2 {
        return Err(Error::Precondition(format!(
            "expected a pair coloring, got arity {}",
            f.arity()
        )));
    }
    if !x.is_subset_of(f.domain()) {
        return Err(Error::Domain("the set leaves the coloring's domain".into()));
    }
    let mut em = Em {
        f,
        theta: theta.clone(),
        config,
        budget,
    };
    let (set, tree) = match em.extract(x, n)? {
        Ok(t) => t,
        Err(e) => return Ok(Err(e)),
    };
    let certificate = certificate_from_values(&set, &[tree])?;
    let idx: Vec<usize> = set
        .iter()
        .map(|v| f.domain().index_of(v).unwrap())
        .collect();
    let spec = LargenessSpec::new(n, 1, theta);
    if !is_transitive_idx(f, &idx) || !verify_certificate(&set, &certificate, &spec, true)? {
        return Err(Error::Domain(format!(
            "extracted set {set} failed re-validation"
        )));
    }
    Ok(Ok(EmWitness { set, certificate }))
}
