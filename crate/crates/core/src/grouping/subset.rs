//! Branch-and-bound search for large homogeneous or transitive subsets.
//!
//! A partial set `S` is extended by elements above its maximum, drawn from a
//! pool of elements compatible with everything in `S`. Largeness is closed
//! under supersets with the same minimum, so a branch whose `S ∪ pool` is not
//! large is cut. Homogeneous branches fix their color at the second element
//! and try the color with the bigger pool first (the majority chain).

use crate::coloring::{is_homogeneous_idx, is_transitive_idx, Color, ColoringTable};
use crate::error::{Error, Result};
use crate::finset::FinSet;
use crate::largeness::{check_large, is_large, verify_certificate, LargenessSpec, Mode};
use crate::outcome::{Budget, Outcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubsetProperty {
    /// Every pair gets the same color.
    Homogeneous,
    /// `f(x,y) = f(y,z) = i` implies `f(x,z) = i`.
    Transitive,
}

impl SubsetProperty {
    pub fn holds(self, f: &ColoringTable, idx: &[usize]) -> bool {
        match self {
            SubsetProperty::Homogeneous => is_homogeneous_idx(f, idx),
            SubsetProperty::Transitive => is_transitive_idx(f, idx),
        }
    }
}

type Predicate<'a> = &'a dyn Fn(&FinSet) -> Result<bool>;

struct Search<'a> {
    x: &'a FinSet,
    dom: Vec<usize>,
    f: &'a ColoringTable,
    property: SubsetProperty,
    /// Homogeneous searches with a prescribed color.
    color: Option<Color>,
    large: Predicate<'a>,
    /// Whether `large` is closed under supersets with the same minimum.
    prune: bool,
    budget: &'a mut Budget,
}

impl Search<'_> {
    fn color(&self, a: usize, b: usize) -> Color {
        self.f.color_idx(&[self.dom[a], self.dom[b]])
    }

    fn large(&self, idx: &[usize]) -> Result<bool> {
        (self.large)(&self.x.pick(idx))
    }

    /// Whether `z` may follow `chosen`, which has at least two elements and
    /// was last extended by its final one.
    fn compatible(&self, chosen: &[usize], z: usize) -> bool {
        let y = *chosen.last().unwrap();
        let yz = self.color(y, z);
        match self.property {
            SubsetProperty::Homogeneous => {
                let c = self
                    .color
                    .unwrap_or_else(|| self.color(chosen[0], chosen[1]));
                yz == c && self.color(chosen[0], z) == c
            }
            SubsetProperty::Transitive => chosen[..chosen.len() - 1]
                .iter()
                .all(|&a| self.color(a, y) != yz || self.color(a, z) == yz),
        }
    }

    fn extend(&mut self, chosen: &mut Vec<usize>, pool: Vec<usize>) -> Result<bool> {
        self.budget.tick()?;
        if self.large(chosen)? {
            return Ok(true);
        }
        if self.prune {
            let mut union = chosen.clone();
            union.extend(&pool);
            if !self.large(&union)? {
                return Ok(false);
            }
        }
        let mut order = pool.clone();
        if self.property == SubsetProperty::Homogeneous && self.color.is_none() && chosen.len() == 1
        {
            // The next element fixes the color; prefer the larger class.
            let root = chosen[0];
            let count = |c: Color| pool.iter().filter(|&&z| self.color(root, z) == c).count();
            order.sort_by_key(|&z| (std::cmp::Reverse(count(self.color(root, z))), z));
        }
        for y in order {
            chosen.push(y);
            let next: Vec<usize> = pool
                .iter()
                .copied()
                .filter(|&z| z > y && self.compatible(chosen, z))
                .collect();
            if self.extend(chosen, next)? {
                return Ok(true);
            }
            chosen.pop();
        }
        Ok(false)
    }

    fn rooted_at(&mut self, root: usize) -> Result<Option<Vec<usize>>> {
        let pool = (root + 1..self.x.len())
            .filter(|&z| self.color.is_none_or(|c| self.color(root, z) == c))
            .collect();
        let mut chosen = vec![root];
        Ok(self.extend(&mut chosen, pool)?.then_some(chosen))
    }
}

fn domain_indices(x: &FinSet, f: &ColoringTable) -> Result<Vec<usize>> {
    if f.arity() != 2 {
        return Err(Error::Precondition(format!(
            "expected a pair coloring, got arity {}",
            f.arity()
        )));
    }
    x.iter()
        .map(|v| {
            f.domain()
                .index_of(v)
                .ok_or_else(|| Error::Domain(format!("{v} is outside the coloring's domain")))
        })
        .collect()
}

fn finish(found: Result<Option<Vec<usize>>>, x: &FinSet) -> Result<Outcome<FinSet>> {
    match found {
        Ok(Some(idx)) => Ok(Outcome::Found(x.pick(&idx))),
        Ok(None) => Ok(Outcome::Absent),
        Err(Error::Budget(why)) => Ok(Outcome::Exhausted(why)),
        Err(e) => Err(e),
    }
}

/// A subset of `x` with `property` under `f` that is `target`-large.
/// `Absent` means every candidate was ruled out.
pub fn subset_search(
    x: &FinSet,
    f: &ColoringTable,
    target: &LargenessSpec,
    property: SubsetProperty,
    budget: &mut Budget,
) -> Result<Outcome<FinSet>> {
    let dom = domain_indices(x, f)?;
    let large = |s: &FinSet| is_large(s, target);
    let mut search = Search {
        x,
        dom,
        f,
        property,
        color: None,
        large: &large,
        prune: true,
        budget,
    };
    let found = (|| {
        for root in 0..x.len() {
            if let Some(idx) = search.rooted_at(root)? {
                return Ok(Some(idx));
            }
        }
        Ok(None)
    })();
    let out = finish(found, x)?;
    if let Outcome::Found(y) = &out {
        let idx: Vec<usize> = y.iter().map(|v| f.domain().index_of(v).unwrap()).collect();
        let cert = check_large(y, target, Mode::Exhaustive)?;
        let valid = property.holds(f, &idx)
            && cert.is_some_and(|c| verify_certificate(y, &c, target, true).unwrap_or(false));
        if !valid {
            return Err(Error::Domain(format!(
                "subset search produced an invalid set {y}"
            )));
        }
    }
    Ok(out)
}

/// A subset of `x` containing `min x`, homogeneous of `color` under `f`, and
/// satisfying `large`. Pass `prune` only if `large` is closed under supersets
/// with the same minimum.
pub fn rooted_homogeneous(
    x: &FinSet,
    f: &ColoringTable,
    color: Color,
    large: &dyn Fn(&FinSet) -> Result<bool>,
    prune: bool,
    budget: &mut Budget,
) -> Result<Outcome<FinSet>> {
    let dom = domain_indices(x, f)?;
    if x.is_empty() {
        return Ok(Outcome::Absent);
    }
    let property = SubsetProperty::Homogeneous;
    let mut search = Search {
        x,
        dom,
        f,
        property,
        color: Some(color),
        large,
        prune,
        budget,
    };
    let found = search.rooted_at(0);
    finish(found, x)
}

pub fn ks_homogeneous(
    x: &FinSet,
    f: &ColoringTable,
    target: &LargenessSpec,
    budget: &mut Budget,
) -> Result<Outcome<FinSet>> {
    subset_search(x, f, target, SubsetProperty::Homogeneous, budget)
}

pub fn ks_transitive(
    x: &FinSet,
    f: &ColoringTable,
    target: &LargenessSpec,
    budget: &mut Budget,
) -> Result<Outcome<FinSet>> {
    subset_search(x, f, target, SubsetProperty::Transitive, budget)
}
