//! Backtracking search for groupings.
//!
//! Blocks are built one element at a time, in increasing order, and a block
//! is closed the moment it becomes L0-large. Closing early loses nothing: the
//! least large prefix of any block of a grouping can replace the block,
//! since every condition survives shrinking a block. So when the search
//! runs to completion without a hit, no grouping exists.

use crate::coloring::{Color, ColoringTable};
use crate::error::{Error, Result};
use crate::finset::FinSet;
use crate::formula::Theta;
use crate::largeness::apart_values;
use crate::outcome::{Budget, Outcome};

use super::{transversal_violation, GroupingWitness, LSpec};

struct Finder<'a> {
    z: &'a FinSet,
    /// Domain index of each element of `z`.
    dom: Vec<usize>,
    f: &'a ColoringTable,
    l0: &'a LSpec,
    l1: &'a LSpec,
    theta: &'a dyn Theta,
    budget: &'a mut Budget,
    closed: Vec<Vec<usize>>,
    /// `uniform[j][y]`: the color every element of closed block `j` gives `y`.
    uniform: Vec<Vec<Option<Color>>>,
}

enum Step {
    Done,
    Continue,
}

impl Finder<'_> {
    fn color(&self, a: usize, b: usize) -> Color {
        self.f.color_idx(&[self.dom[a], self.dom[b]])
    }

    fn set(&self, idx: &[usize]) -> FinSet {
        self.z.pick(idx)
    }

    fn witness(&self) -> GroupingWitness {
        GroupingWitness {
            blocks: self.closed.iter().map(|b| self.set(b)).collect(),
            coloring: self.f.clone(),
        }
    }

    fn profile(&self, y: usize) -> Option<Vec<Color>> {
        self.uniform.iter().map(|u| u[y]).collect()
    }

    fn apart_with_all(&self, current: &[usize]) -> Result<bool> {
        let (lo, hi) = (self.z.get(current[0]), self.z.get(*current.last().unwrap()));
        for b in &self.closed {
            if !apart_values(self.z.get(*b.last().unwrap()), lo, hi, self.theta)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn close(&mut self, block: Vec<usize>) {
        let n = self.z.len();
        let row = (0..n)
            .map(|y| {
                if y <= *block.last().unwrap() {
                    return None;
                }
                let c = self.color(block[0], y);
                block.iter().all(|&x| self.color(x, y) == c).then_some(c)
            })
            .collect();
        self.uniform.push(row);
        self.closed.push(block);
    }

    fn reopen(&mut self) {
        self.closed.pop();
        self.uniform.pop();
    }

    fn satisfied(&self) -> Result<bool> {
        let blocks: Vec<FinSet> = self.closed.iter().map(|b| self.set(b)).collect();
        Ok(transversal_violation(&blocks, self.l1)?.is_none())
    }

    /// Start the next block somewhere after the closed ones.
    fn next_block(&mut self) -> Result<Step> {
        let from = self.closed.last().map_or(0, |b| b.last().unwrap() + 1);
        if let LSpec::CardAtLeast(m) = self.l1 {
            if self.closed.len() + (self.z.len() - from) < *m {
                return Ok(Step::Continue);
            }
        }
        for y in from..self.z.len() {
            let Some(profile) = self.profile(y) else {
                continue;
            };
            if let Step::Done = self.grow(vec![y], &profile)? {
                return Ok(Step::Done);
            }
        }
        Ok(Step::Continue)
    }

    fn grow(&mut self, current: Vec<usize>, profile: &[Color]) -> Result<Step> {
        self.budget.tick()?;
        if !self.apart_with_all(&current)? {
            return Ok(Step::Continue);
        }
        if self.l0.holds(&self.set(&current))? {
            self.close(current);
            if self.satisfied()? {
                return Ok(Step::Done);
            }
            let r = self.next_block()?;
            if let Step::Continue = r {
                self.reopen();
            }
            return Ok(r);
        }
        for y in current.last().unwrap() + 1..self.z.len() {
            if self.profile(y).as_deref() != Some(profile) {
                continue;
            }
            let mut next = current.clone();
            next.push(y);
            if let Step::Done = self.grow(next, profile)? {
                return Ok(Step::Done);
            }
        }
        Ok(Step::Continue)
    }
}

/// Search for a grouping of `z` for the pair coloring `f`. `Absent` means the
/// search space was exhausted; running out of `budget` gives `Exhausted`.
pub fn find_grouping(
    z: &FinSet,
    f: &ColoringTable,
    l0: &LSpec,
    l1: &LSpec,
    theta: &dyn Theta,
    budget: &mut Budget,
) -> Result<Outcome<GroupingWitness>> {
    if f.arity() != 2 {
        return Err(Error::Precondition(format!(
            "groupings are searched for pair colorings, got arity {}",
            f.arity()
        )));
    }
    let dom = z
        .iter()
        .map(|v| {
            f.domain()
                .index_of(v)
                .ok_or_else(|| Error::Domain(format!("{v} is outside the coloring's domain")))
        })
        .collect::<Result<Vec<_>>>()?;
    if let LSpec::CardAtLeast(m) = l1 {
        if *m > z.len() {
            return Ok(Outcome::Absent);
        }
    }
    let mut finder = Finder {
        z,
        dom,
        f,
        l0,
        l1,
        theta,
        budget,
        closed: Vec::new(),
        uniform: Vec::new(),
    };
    if finder.satisfied()? {
        return Ok(Outcome::Found(finder.witness()));
    }
    match finder.next_block() {
        Ok(Step::Done) => Ok(Outcome::Found(finder.witness())),
        Ok(Step::Continue) => Ok(Outcome::Absent),
        Err(Error::Budget(why)) => Ok(Outcome::Exhausted(why)),
        Err(e) => Err(e),
    }
}
