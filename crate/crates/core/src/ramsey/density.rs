//! Largeness and density relative to a Ramsey-like statement.
//!
//! Both notions quantify over every coloring of a finite set. Exact mode
//! enumerates colorings up to [`EXACT_CEILING`]; sampled mode draws seeded
//! random colorings and can only refute.

use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coloring::{binom, Color, ColoringTable};
use crate::error::{Error, Result};
use crate::finset::FinSet;
use crate::formula::{RtLikeStatement, Theta};
use crate::largeness::{apart_values, is_large, LargenessSpec};
use crate::outcome::Verdict;

pub const EXACT_CEILING: u128 = 1 << 20;

/// Sets are handled as bitmasks, so this bounds `|Z|`.
pub const MAX_SET_LEN: usize = 20;

/// Deepest density level exact mode accepts.
pub const MAX_EXACT_LEVEL: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DensityMode {
    Exact,
    Sampled { seed: u64, trials: usize },
}

#[derive(Clone)]
pub struct DensityParams {
    pub statement: RtLikeStatement,
    pub theta: Arc<dyn Theta>,
    pub level: usize,
    pub mode: DensityMode,
}

/// A three-valued answer with a short explanation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Answer {
    pub verdict: Verdict,
    pub reason: String,
    /// A coloring with no qualifying subset, when one was found.
    pub counterexample: Option<ColoringTable>,
}

impl Answer {
    fn new(verdict: Verdict, reason: impl Into<String>) -> Self {
        Answer {
            verdict,
            reason: reason.into(),
            counterexample: None,
        }
    }
}

/// `colors^(C(len, arity))`, saturating.
pub fn coloring_count(len: usize, arity: usize, colors: Color) -> u128 {
    let cells = binom(len, arity);
    let mut acc: u128 = 1;
    for _ in 0..cells {
        acc = acc.saturating_mul(colors as u128);
        if acc == u128::MAX {
            break;
        }
    }
    acc
}

/// The `index`-th coloring in base-`colors` order of the table cells.
pub fn nth_coloring(
    domain: &FinSet,
    arity: usize,
    colors: Color,
    mut index: u128,
) -> Result<ColoringTable> {
    let cells = binom(domain.len(), arity) as usize;
    let mut table = Vec::with_capacity(cells);
    for _ in 0..cells {
        table.push((index % colors as u128) as Color);
        index /= colors as u128;
    }
    ColoringTable::new(domain.clone(), arity, colors, table)
}

fn mask_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

fn check_len(z: &FinSet) -> Result<()> {
    if z.len() > MAX_SET_LEN {
        return Err(Error::TooLarge(format!(
            "sets of size {} (limit {MAX_SET_LEN})",
            z.len()
        )));
    }
    Ok(())
}

fn ceiling_error(what: &str, count: u128) -> Error {
    Error::Ceiling(format!(
        "{count} {what} exceed {EXACT_CEILING}; use sampled mode"
    ))
}

/// Whether every coloring `f : [Z]^n → k` admits an `ω^r·s`-large(T) subset
/// satisfying the statement. `threads > 1` splits the exact enumeration.
pub fn is_large_gamma(
    z: &FinSet,
    r: usize,
    s: usize,
    theta: Arc<dyn Theta>,
    gamma: &RtLikeStatement,
    mode: DensityMode,
    threads: usize,
) -> Result<Answer> {
    check_len(z)?;
    let spec = LargenessSpec::new(r, s, theta);
    let mut good = Vec::new();
    for mask in 1u32..1 << z.len() {
        let idx = mask_indices(mask);
        if is_large(&z.pick(&idx), &spec)? {
            good.push(idx);
        }
    }
    let works = |f: &ColoringTable| -> Result<bool> {
        for y in &good {
            if gamma.satisfied_on(f, y)? {
                return Ok(true);
            }
        }
        Ok(false)
    };
    let count = coloring_count(z.len(), gamma.arity, gamma.colors);
    match mode {
        DensityMode::Exact => {
            if count > EXACT_CEILING {
                return Err(ceiling_error("colorings", count));
            }
            let threads = threads.clamp(1, count as usize);
            let chunk = count.div_ceil(threads as u128);
            let first_failure = std::thread::scope(|scope| {
                let handles: Vec<_> = (0..threads as u128)
                    .map(|t| {
                        let works = &works;
                        scope.spawn(move || -> Result<Option<u128>> {
                            for i in t * chunk..((t + 1) * chunk).min(count) {
                                if !works(&nth_coloring(z, gamma.arity, gamma.colors, i)?)? {
                                    return Ok(Some(i));
                                }
                            }
                            Ok(None)
                        })
                    })
                    .collect();
                // Join in order so the reported counterexample does not depend
                // on scheduling.
                let mut first = None;
                for h in handles {
                    let r = h.join().expect("worker panicked")?;
                    if first.is_none() {
                        first = r;
                    }
                }
                Ok::<_, Error>(first)
            })?;
            Ok(match first_failure {
                Some(i) => Answer {
                    verdict: Verdict::False,
                    reason: format!("coloring #{i} has no qualifying subset"),
                    counterexample: Some(nth_coloring(z, gamma.arity, gamma.colors, i)?),
                },
                None => Answer::new(Verdict::True, format!("all {count} colorings checked")),
            })
        }
        DensityMode::Sampled { seed, trials } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for t in 0..trials {
                let f = ColoringTable::random(z.clone(), gamma.arity, gamma.colors, &mut rng)?;
                if !works(&f)? {
                    return Ok(Answer {
                        verdict: Verdict::False,
                        reason: format!("sampled coloring {t} has no qualifying subset"),
                        counterexample: Some(f),
                    });
                }
            }
            Ok(Answer::new(
                Verdict::Inconclusive(format!("{trials} sampled colorings of {count} all passed")),
                "sampling cannot confirm",
            ))
        }
    }
}

fn or(a: Verdict, b: impl FnOnce() -> Result<Verdict>) -> Result<Verdict> {
    Ok(match a {
        Verdict::True => Verdict::True,
        Verdict::False => b()?,
        Verdict::Inconclusive(why) => match b()? {
            Verdict::True => Verdict::True,
            _ => Verdict::Inconclusive(why),
        },
    })
}

struct Density<'a> {
    z: &'a FinSet,
    params: &'a DensityParams,
    memo: HashMap<(u32, usize), Verdict>,
    rng: ChaCha8Rng,
}

impl Density<'_> {
    /// Runs `check` on every member of a universally quantified family of
    /// `count` objects (or on samples of it) and conjoins the answers.
    fn for_all(
        &mut self,
        what: &str,
        count: u128,
        mut check: impl FnMut(&mut Self, u128) -> Result<Verdict>,
    ) -> Result<Verdict> {
        let (indices, sampled): (Vec<u128>, bool) = match self.params.mode {
            DensityMode::Exact => {
                if count > EXACT_CEILING {
                    return Err(ceiling_error(what, count));
                }
                ((0..count).collect(), false)
            }
            DensityMode::Sampled { trials, .. } if count > trials as u128 => (
                (0..trials).map(|_| self.rng.gen_range(0..count)).collect(),
                true,
            ),
            DensityMode::Sampled { .. } => ((0..count).collect(), false),
        };
        let mut result = Verdict::True;
        for i in indices {
            match check(self, i)? {
                Verdict::False => return Ok(Verdict::False),
                Verdict::Inconclusive(why) => result = Verdict::Inconclusive(why),
                Verdict::True => {}
            }
        }
        if sampled && result == Verdict::True {
            result = Verdict::Inconclusive(format!("{what} were sampled"));
        }
        Ok(result)
    }

    /// Some nonempty submask of `mask` that is `level`-dense and passes `keep`.
    fn exists(
        &mut self,
        mask: u32,
        level: usize,
        mut keep: impl FnMut(&Self, u32) -> Result<bool>,
    ) -> Result<Verdict> {
        let mut result = Verdict::False;
        let mut sub = mask;
        while sub != 0 {
            if keep(self, sub)? {
                result = or(result, || self.dense(sub, level))?;
                if result == Verdict::True {
                    return Ok(result);
                }
            }
            sub = (sub - 1) & mask;
        }
        Ok(result)
    }

    fn dense(&mut self, mask: u32, level: usize) -> Result<Verdict> {
        if let Some(v) = self.memo.get(&(mask, level)) {
            return Ok(v.clone());
        }
        let v = self.compute(mask, level)?;
        self.memo.insert((mask, level), v.clone());
        Ok(v)
    }

    fn compute(&mut self, mask: u32, level: usize) -> Result<Verdict> {
        let idx = mask_indices(mask);
        let set = self.z.pick(&idx);
        let omega = LargenessSpec::new(1, 1, self.params.theta.clone());
        if level == 0 || set.is_empty() {
            return Ok(Verdict::from_bool(
                !set.is_empty() && is_large(&set, &omega)?,
            ));
        }
        let m = level - 1;
        let gamma = self.params.statement.clone();
        // (a) every coloring of tuples has a dense subset satisfying the statement.
        let count = coloring_count(idx.len(), gamma.arity, gamma.colors);
        let a = self.for_all("statement colorings", count, |me, i| {
            let f = nth_coloring(&set, gamma.arity, gamma.colors, i)?;
            me.exists(mask, m, |_, sub| {
                let local: Vec<usize> =
                    (0..idx.len()).filter(|&j| sub >> idx[j] & 1 == 1).collect();
                gamma.satisfied_on(&f, &local)
            })
        })?;
        if a == Verdict::False {
            return Ok(a);
        }
        // (b) every split into at most min Z consecutive parts has a dense part.
        let min = crate::nat::to_usize_sat(set.get(0));
        let cuts = idx.len() - 1;
        let split_count = 1u128 << cuts;
        let b = self.for_all("partitions", split_count, |me, cut_mask| {
            let parts = cut_mask.count_ones() as usize + 1;
            if parts > min {
                return Ok(Verdict::True);
            }
            let mut verdict = Verdict::False;
            let mut part = 0u32;
            for (j, &i) in idx.iter().enumerate() {
                part |= 1 << i;
                if j == idx.len() - 1 || cut_mask >> j & 1 == 1 {
                    verdict = or(verdict, || me.dense(part, m))?;
                    part = 0;
                }
            }
            Ok(verdict)
        })?;
        if b == Verdict::False {
            return Ok(b);
        }
        // (c) every coloring of points with min Z colors has a dense homogeneous subset.
        let colors = Color::try_from(min).unwrap_or(Color::MAX).max(1);
        let count = coloring_count(idx.len(), 1, colors);
        let c = self.for_all("point colorings", count, |me, i| {
            let f = nth_coloring(&set, 1, colors, i)?;
            let color_of = |bit: usize| f.color_idx(&[idx.iter().position(|&x| x == bit).unwrap()]);
            me.exists(mask, m, |_, sub| {
                let bits = mask_indices(sub);
                Ok(bits.iter().all(|&b| color_of(b) == color_of(bits[0])))
            })
        })?;
        if c == Verdict::False {
            return Ok(c);
        }
        // (d) a dense subset far enough out for every x below min Z.
        let theta = self.params.theta.clone();
        let z = self.z;
        let d = self.exists(mask, m, |_, sub| {
            let bits = mask_indices(sub);
            apart_values(
                set.get(0),
                z.get(bits[0]),
                z.get(*bits.last().unwrap()),
                theta.as_ref(),
            )
        })?;
        let mut all = Verdict::True;
        for v in [a, b, c, d] {
            match v {
                Verdict::False => return Ok(Verdict::False),
                Verdict::Inconclusive(_) => all = v,
                Verdict::True => {}
            }
        }
        Ok(all)
    }
}

/// Whether `z` is `params.level`-dense.
pub fn is_n_dense(z: &FinSet, params: &DensityParams) -> Result<Answer> {
    check_len(z)?;
    if params.mode == DensityMode::Exact && params.level > MAX_EXACT_LEVEL {
        return Err(Error::Precondition(format!(
            "exact density is limited to level {MAX_EXACT_LEVEL}, got {}",
            params.level
        )));
    }
    let seed = match params.mode {
        DensityMode::Sampled { seed, .. } => seed,
        DensityMode::Exact => 0,
    };
    let mut d = Density {
        z,
        params,
        memo: HashMap::new(),
        rng: ChaCha8Rng::seed_from_u64(seed),
    };
    let full = if z.is_empty() {
        0
    } else {
        u32::MAX >> (32 - z.len())
    };
    let verdict = d.dense(full, params.level)?;
    let reason = match &verdict {
        Verdict::True => format!("all quantifiers checked over {} subsets", d.memo.len()),
        Verdict::False => "a quantifier instance failed".to_string(),
        Verdict::Inconclusive(why) => why.clone(),
    };
    Ok(Answer::new(verdict, reason))
}
