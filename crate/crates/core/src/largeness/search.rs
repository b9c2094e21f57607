//! Searching for largeness certificates.
//!
//! Fix a block exponent `L`. A block starting at index `s` never needs to end
//! later than the least `e` for which `X[s..=e]` is `ω^L`-large(T): a shorter
//! block only weakens the apartness constraints on both of its sides. So each
//! start has one candidate end, and placing `r` apart blocks is a chain
//! problem over starts, solved either exactly by dynamic programming or
//! first-fit.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::ToPrimitive;

use super::apart::{apart_values, ApartTable};
use super::certificate::{Block, Certificate};
use super::LargenessSpec;
use crate::error::Result;
use crate::finset::FinSet;
use crate::formula::Theta;
use crate::nat::{to_usize_sat, Nat};
use crate::registry::Registry;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Greedy,
    Exhaustive,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Greedy => "greedy",
            Mode::Exhaustive => "exhaustive",
        }
    }
}

pub struct Searcher<'a> {
    xs: &'a [Nat],
    theta: &'a dyn Theta,
    mode: Mode,
    apart: HashMap<(usize, usize, usize), bool>,
    table: Option<ApartTable<'a>>,
    /// `ends[L][s]`: least end of an exponent-`L` block starting at `s`.
    ends: Vec<Vec<Option<Option<usize>>>>,
    /// `chains[L][r][b]`: least last end of a chain of `r` more apart blocks
    /// after the exponent-`L` block starting at `b` (exhaustive mode only).
    chains: Vec<Vec<Vec<Option<usize>>>>,
}

impl<'a> Searcher<'a> {
    pub fn new(x: &'a FinSet, theta: &'a dyn Theta, mode: Mode) -> Self {
        let table = x
            .max()
            .and_then(|m| m.to_u64())
            .and_then(|m| ApartTable::new(theta, m));
        Searcher {
            table,
            xs: x.elements(),
            theta,
            mode,
            apart: HashMap::new(),
            ends: Vec::new(),
            chains: Vec::new(),
        }
    }

    fn n(&self) -> usize {
        self.xs.len()
    }

    fn apart(&mut self, prev_end: usize, start: usize, end: usize) -> Result<bool> {
        if self.theta.is_top() {
            return Ok(true);
        }
        if let Some(&v) = self.apart.get(&(prev_end, start, end)) {
            return Ok(v);
        }
        let v = match &mut self.table {
            Some(t) => t.apart(
                self.xs[prev_end].to_u64().unwrap(),
                self.xs[start].to_u64().unwrap(),
                self.xs[end].to_u64().unwrap(),
            )?,
            None => apart_values(
                &self.xs[prev_end],
                &self.xs[start],
                &self.xs[end],
                self.theta,
            )?,
        };
        self.apart.insert((prev_end, start, end), v);
        Ok(v)
    }

    /// Least `e` with `X[s..=e]` being `ω^level`-large(T).
    pub fn block_end(&mut self, level: usize, s: usize) -> Result<Option<usize>> {
        while self.ends.len() <= level {
            self.ends.push(vec![None; self.n()]);
        }
        if let Some(v) = self.ends[level][s] {
            return Ok(v);
        }
        let v = if level == 0 {
            Some(s)
        } else {
            let m = to_usize_sat(&self.xs[s]);
            if m == 0 {
                Some(s)
            } else if m > self.n() - s - 1 {
                None
            } else {
                match self.mode {
                    Mode::Exhaustive => {
                        let mut best: Option<usize> = None;
                        for t in s + 1..self.n() {
                            if let Some(e) = self.chain_end(level - 1, m - 1, t)? {
                                best = Some(best.map_or(e, |b: usize| b.min(e)));
                            }
                        }
                        best
                    }
                    Mode::Greedy => self
                        .first_fit(level - 1, m, s + 1, None)?
                        .map(|v| v.last().unwrap().1),
                }
            }
        };
        self.ends[level][s] = Some(v);
        Ok(v)
    }

    /// Exhaustive: least last end of `r` further apart blocks after block `b`.
    fn chain_end(&mut self, level: usize, r: usize, b: usize) -> Result<Option<usize>> {
        let Some(eb) = self.block_end(level, b)? else {
            return Ok(None);
        };
        if r == 0 {
            return Ok(Some(eb));
        }
        while self.chains.len() <= level {
            self.chains.push(Vec::new());
        }
        if self.chains[level].len() <= r {
            self.fill_chains(level, r)?;
        }
        Ok(self.chains[level][r][b])
    }

    fn fill_chains(&mut self, level: usize, r: usize) -> Result<()> {
        let n = self.n();
        if self.chains[level].is_empty() {
            let mut base = Vec::with_capacity(n);
            for b in 0..n {
                base.push(self.block_end(level, b)?);
            }
            self.chains[level].push(base);
        }
        while self.chains[level].len() <= r {
            let prev = self.chains[level].last().unwrap().clone();
            let mut row = vec![None; n];
            for (b, slot) in row.iter_mut().enumerate() {
                let Some(eb) = self.block_end(level, b)? else {
                    continue;
                };
                let mut best: Option<usize> = None;
                for (t, &last) in prev.iter().enumerate().skip(eb + 1) {
                    let Some(last) = last else { continue };
                    if best.is_some_and(|bv| bv <= last) {
                        continue;
                    }
                    let et = self
                        .block_end(level, t)?
                        .expect("prev[t] set implies a block at t");
                    if self.apart(eb, t, et)? {
                        best = Some(last);
                    }
                }
                *slot = best;
            }
            self.chains[level].push(row);
        }
        Ok(())
    }

    /// First-fit chain of `count` apart blocks starting at or after `from`
    /// and ending by `limit`, as `(start, end)` pairs.
    fn first_fit(
        &mut self,
        level: usize,
        count: usize,
        from: usize,
        limit: Option<usize>,
    ) -> Result<Option<Vec<(usize, usize)>>> {
        let mut found: Vec<(usize, usize)> = Vec::with_capacity(count);
        let mut t = from;
        while found.len() < count {
            if t >= self.n() || limit.is_some_and(|l| t > l) {
                return Ok(None);
            }
            if let Some(e) = self.block_end(level, t)? {
                let ok = !limit.is_some_and(|l| e > l)
                    && match found.last() {
                        None => true,
                        Some(&(_, p)) => self.apart(p, t, e)?,
                    };
                if ok {
                    found.push((t, e));
                    t = e + 1;
                    continue;
                }
            }
            t += 1;
        }
        Ok(Some(found))
    }

    /// Starts of `count` apart exponent-`level` blocks inside `[from, limit]`,
    /// lexicographically least in exhaustive mode.
    fn place(
        &mut self,
        level: usize,
        count: usize,
        from: usize,
        limit: usize,
    ) -> Result<Option<Vec<usize>>> {
        if count == 0 {
            return Ok(Some(Vec::new()));
        }
        if self.mode == Mode::Greedy {
            return Ok(self
                .first_fit(level, count, from, Some(limit))?
                .map(|v| v.into_iter().map(|(s, _)| s).collect()));
        }
        let mut starts = Vec::with_capacity(count);
        let mut prev_end: Option<usize> = None;
        let mut t = from;
        while starts.len() < count {
            if t > limit {
                return Ok(None);
            }
            let left = count - starts.len() - 1;
            let fits = match self.chain_end(level, left, t)? {
                Some(last) => last <= limit,
                None => false,
            };
            if fits {
                let e = self.block_end(level, t)?.expect("chain implies block");
                let ok = match prev_end {
                    None => true,
                    Some(p) => self.apart(p, t, e)?,
                };
                if ok {
                    starts.push(t);
                    prev_end = Some(e);
                    t = e + 1;
                    continue;
                }
            }
            t += 1;
        }
        Ok(Some(starts))
    }

    /// The certificate of the exponent-`level` block starting at `s`.
    pub fn block(&mut self, level: usize, s: usize) -> Result<Option<Block>> {
        let Some(end) = self.block_end(level, s)? else {
            return Ok(None);
        };
        if level == 0 {
            return Ok(Some(Block {
                start: s,
                end,
                cert: Certificate::Leaf { index: s },
            }));
        }
        let m = to_usize_sat(&self.xs[s]);
        let starts = self
            .place(level - 1, m, s + 1, end)?
            .expect("block end was computed from a feasible placement");
        let mut children = Vec::with_capacity(m);
        for t in starts {
            children.push(self.block(level - 1, t)?.expect("placed block exists"));
        }
        Ok(Some(Block {
            start: s,
            end,
            cert: Certificate::Node {
                min: self.xs[s].clone(),
                children,
            },
        }))
    }

    /// A top-level certificate for `ω^exponent·multiplier`-largeness(T).
    pub fn certify(&mut self, exponent: usize, multiplier: usize) -> Result<Option<Certificate>> {
        if multiplier == 0 {
            return Ok(Some(Certificate::Blocks { blocks: Vec::new() }));
        }
        if self.n() == 0 {
            return Ok(None);
        }
        let Some(starts) = self.place(exponent, multiplier, 0, self.n() - 1)? else {
            return Ok(None);
        };
        let mut blocks = Vec::with_capacity(multiplier);
        for s in starts {
            blocks.push(self.block(exponent, s)?.expect("placed block exists"));
        }
        Ok(Some(Certificate::Blocks { blocks }))
    }
}

/// A way of looking for largeness certificates.
pub trait LargenessSearch: Send + Sync {
    fn name(&self) -> &'static str;

    /// Whether a `None` answer proves the set is not large.
    fn complete(&self) -> bool;

    fn certify(&self, x: &FinSet, spec: &LargenessSpec) -> Result<Option<Certificate>>;
}

pub struct Exhaustive;
pub struct Greedy;

impl LargenessSearch for Exhaustive {
    fn name(&self) -> &'static str {
        "exhaustive"
    }
    fn complete(&self) -> bool {
        true
    }
    fn certify(&self, x: &FinSet, spec: &LargenessSpec) -> Result<Option<Certificate>> {
        Searcher::new(x, spec.theta.as_ref(), Mode::Exhaustive)
            .certify(spec.exponent, spec.multiplier)
    }
}

impl LargenessSearch for Greedy {
    fn name(&self) -> &'static str {
        "greedy"
    }
    fn complete(&self) -> bool {
        false
    }
    fn certify(&self, x: &FinSet, spec: &LargenessSpec) -> Result<Option<Certificate>> {
        Searcher::new(x, spec.theta.as_ref(), Mode::Greedy).certify(spec.exponent, spec.multiplier)
    }
}

pub fn search_registry() -> Registry<dyn LargenessSearch> {
    let mut r: Registry<dyn LargenessSearch> = Registry::new("search strategy");
    r.register("exhaustive", Arc::new(Exhaustive));
    r.register("greedy", Arc::new(Greedy));
    r
}

/// Certificate for `ω^n·k`-largeness(T) of `x`, if the chosen mode finds one.
pub fn check_large(x: &FinSet, spec: &LargenessSpec, mode: Mode) -> Result<Option<Certificate>> {
    Searcher::new(x, spec.theta.as_ref(), mode).certify(spec.exponent, spec.multiplier)
}

/// Exhaustive yes/no.
pub fn is_large(x: &FinSet, spec: &LargenessSpec) -> Result<bool> {
    Ok(check_large(x, spec, Mode::Exhaustive)?.is_some())
}
