//! Constructive extractors: homogeneous subsets for colorings of points,
//! block families with large sets of minima, and fusion of apart blocks.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::ToPrimitive;

use super::certificate::{certificate_from_values, Certificate, ValueBlock, ValueTree};
use super::search::{check_large, Mode};
use super::{apart_values, LargenessSpec};
use crate::coloring::{Color, ColoringTable};
use crate::error::{Error, Result};
use crate::finset::FinSet;
use crate::formula::Theta;
use crate::nat::{to_usize_sat, Nat};
use crate::sparsity::{first_violation, SparsityPolicy};

fn top_block(x: &FinSet, spec: &LargenessSpec, what: &str) -> Result<ValueBlock> {
    let cert = check_large(x, spec, Mode::Exhaustive)?
        .ok_or_else(|| Error::Precondition(format!("{what} is not {spec:?}")))?;
    Ok(ValueBlock::from_block(x, &cert.blocks()[0]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PigeonholeRoute {
    /// The inductive construction went through.
    Induction,
    /// The counting step failed somewhere, and a color class was certified directly.
    ClassSearch,
}

impl fmt::Display for PigeonholeRoute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PigeonholeRoute::Induction => "induction",
            PigeonholeRoute::ClassSearch => "class-search",
        })
    }
}

#[derive(Clone, Debug)]
pub struct PigeonholeOutcome {
    pub set: FinSet,
    pub color: Color,
    /// Certificate of `ω^b`-largeness of `set`.
    pub certificate: Certificate,
    pub route: PigeonholeRoute,
    /// Why the induction was abandoned, when it was.
    pub counting_failure: Option<String>,
}

struct Pigeonhole<'a> {
    x: &'a FinSet,
    colors: HashMap<Nat, Color>,
}

impl Pigeonhole<'_> {
    fn color(&self, v: &Nat) -> Color {
        self.colors[v]
    }

    fn palette(&self, s: &FinSet) -> Vec<bool> {
        let mut seen = vec![false; self.colors.values().max().map_or(0, |&c| c as usize + 1)];
        for v in s.iter() {
            seen[self.color(v) as usize] = true;
        }
        seen
    }

    /// Homogeneous subset with an exponent-`b` witness, from an exponent-`2b` block.
    fn run(&self, block: &ValueBlock, b: usize) -> Result<(Vec<Nat>, ValueBlock)> {
        if b == 0 {
            let v = block.lo.clone();
            return Ok((
                vec![v.clone()],
                ValueBlock {
                    lo: v.clone(),
                    hi: v.clone(),
                    tree: ValueTree::Leaf(v),
                },
            ));
        }
        let parts = block.children();
        let sets: Vec<FinSet> = parts.iter().map(|p| p.members(self.x)).collect();
        if let Some(first) = sets.first() {
            let c = self.color(first.get(0));
            if first.iter().all(|v| self.color(v) == c) {
                return Ok((first.elements().to_vec(), parts[0].downgrade(2 * b - 1, b)));
            }
        }
        let palettes: Vec<Vec<bool>> = sets.iter().map(|s| self.palette(s)).collect();
        let width = palettes.iter().map(Vec::len).max().unwrap_or(0);
        let mut covered = vec![vec![false; width]];
        for p in &palettes {
            let mut next = covered.last().unwrap().clone();
            for (i, &on) in p.iter().enumerate() {
                next[i] |= on;
            }
            covered.push(next);
        }
        // Candidate t's, largest first: colors of X_t already seen before t.
        let candidates: Vec<usize> = (1..parts.len())
            .rev()
            .filter(|&t| {
                palettes[t]
                    .iter()
                    .enumerate()
                    .all(|(i, &on)| !on || covered[t][i])
            })
            .collect();
        if candidates.is_empty() {
            return Err(Error::Counting("every block adds a new color".into()));
        }
        for &t in &candidates {
            let mut subs = Vec::new();
            for y in parts[t].children() {
                subs.push(self.run(y, b - 1)?);
            }
            let mut by_color: HashMap<Color, Vec<usize>> = HashMap::new();
            for (j, (members, _)) in subs.iter().enumerate() {
                by_color.entry(self.color(&members[0])).or_default().push(j);
            }
            let mut choices: Vec<(Color, Vec<usize>)> = by_color.into_iter().collect();
            choices.sort();
            for (c, js) in choices {
                // The root is the least earlier element of color c; it needs that many children.
                let root = sets[..t]
                    .iter()
                    .flat_map(|s| s.iter())
                    .find(|v| self.color(v) == c);
                let Some(root) = root else { continue };
                let need = to_usize_sat(root);
                if js.len() < need {
                    continue;
                }
                let mut members = vec![root.clone()];
                let mut children = Vec::with_capacity(need);
                for &j in &js[..need] {
                    members.extend(subs[j].0.iter().cloned());
                    children.push(subs[j].1.clone());
                }
                let hi = children.last().map_or(root.clone(), |c| c.hi.clone());
                let tree = ValueTree::Node {
                    min: root.clone(),
                    children,
                };
                return Ok((
                    members,
                    ValueBlock {
                        lo: root.clone(),
                        hi,
                        tree,
                    },
                ));
            }
        }
        Err(Error::Counting(format!(
            "no color among the sub-blocks of block {} reaches its least earlier witness",
            candidates[0]
        )))
    }
}

/// A homogeneous `ω^b`-large(T) subset of `x` for `f: X → min X`, built by
/// the inductive construction. When its counting step fails (possible for
/// sets that are not sparse enough), the color classes are certified
/// directly unless `strict` is set.
pub fn pigeonhole_extract(
    x: &FinSet,
    f: &ColoringTable,
    b: usize,
    theta: Arc<dyn Theta>,
    policy: SparsityPolicy,
    strict: bool,
) -> Result<PigeonholeOutcome> {
    if f.arity() != 1 {
        return Err(Error::Precondition(
            "pigeonhole needs a coloring of points".into(),
        ));
    }
    let Some(min) = x.min() else {
        return Err(Error::Precondition("empty set".into()));
    };
    if Nat::from(f.colors()) > *min {
        return Err(Error::Precondition(format!(
            "{} colors exceed min X = {min}",
            f.colors()
        )));
    }
    if let Some(i) = first_violation(x, policy) {
        return Err(Error::Precondition(format!(
            "not {policy}-sparse at {}, {}",
            x.get(i),
            x.get(i + 1)
        )));
    }
    let mut colors = HashMap::with_capacity(x.len());
    for v in x.iter() {
        colors.insert(v.clone(), f.color(std::slice::from_ref(v))?);
    }
    let spec = LargenessSpec::new(2 * b, 1, theta.clone());
    let root = top_block(x, &spec, "the set")?;
    let ph = Pigeonhole { x, colors };
    let failure = match ph.run(&root, b) {
        Ok((members, vb)) => {
            let set = FinSet::new(members, x.floor().clone())?;
            let certificate = certificate_from_values(&set, &[vb])?;
            let color = ph.color(set.get(0));
            return Ok(PigeonholeOutcome {
                set,
                color,
                certificate,
                route: PigeonholeRoute::Induction,
                counting_failure: None,
            });
        }
        Err(Error::Counting(msg)) if !strict => msg,
        Err(e) => return Err(e),
    };
    let target = LargenessSpec::new(b, 1, theta);
    for c in 0..f.colors() {
        let class = x.filter(|v| ph.color(v) == c);
        if let Some(certificate) = check_large(&class, &target, Mode::Exhaustive)? {
            return Ok(PigeonholeOutcome {
                set: class,
                color: c,
                certificate,
                route: PigeonholeRoute::ClassSearch,
                counting_failure: Some(failure),
            });
        }
    }
    Err(Error::Counting(format!(
        "{failure}; no color class is {target:?} either"
    )))
}

/// Pairwise apart `ω^n`-large(T) blocks of an `ω^(n+m+1)`-large(T) set whose
/// minima form a (plainly) `ω^m`-large set. Each block comes with its own
/// certificate.
pub fn decompose_mixed(
    x: &FinSet,
    n: usize,
    m: usize,
    theta: Arc<dyn Theta>,
) -> Result<Vec<(FinSet, Certificate)>> {
    let spec = LargenessSpec::new(n + m + 1, 1, theta);
    let root = top_block(x, &spec, "the set")?;
    let kids = root.children();
    if kids.len() < 2 {
        return Err(Error::Precondition(
            "the top block has fewer than two children".into(),
        ));
    }
    let blocks = split_pair(&kids[0], &kids[1], n, m)?;
    blocks
        .iter()
        .map(|vb| {
            let set = vb.members(x);
            let cert = certificate_from_values(&set, std::slice::from_ref(vb))?;
            Ok((set, cert))
        })
        .collect()
}

fn split_pair(y0: &ValueBlock, y1: &ValueBlock, n: usize, m: usize) -> Result<Vec<ValueBlock>> {
    if m == 0 {
        return Ok(vec![y0.clone(), y1.clone()]);
    }
    let mut out = vec![y0.downgrade(n + m, n)];
    let z = y1.children();
    let pairs = y0
        .lo
        .to_usize()
        .filter(|&k| 2 * k <= z.len())
        .ok_or_else(|| {
            Error::Precondition(format!(
                "{} sub-blocks cannot be paired {} times",
                z.len(),
                y0.lo
            ))
        })?;
    for j in 0..pairs {
        out.extend(split_pair(&z[2 * j], &z[2 * j + 1], n, m - 1)?);
    }
    Ok(out)
}

/// `{max X_0} ∪ X_1 ∪ … ∪ X_(k−1)` with an `ω^(a+b)`-large(T) certificate,
/// given pairwise apart `ω^a`-large(T) blocks whose maxima form an
/// `ω^(b+1)`-large(T) set.
pub fn fuse(
    blocks: &[FinSet],
    a: usize,
    b: usize,
    theta: Arc<dyn Theta>,
) -> Result<(FinSet, Certificate)> {
    if blocks.len() < 2 {
        return Err(Error::Precondition(
            "fusion needs at least two blocks".into(),
        ));
    }
    let spec_a = LargenessSpec::new(a, 1, theta.clone());
    let mut vbs = Vec::with_capacity(blocks.len());
    for (s, bl) in blocks.iter().enumerate() {
        let mut vb = top_block(bl, &spec_a, &format!("block {s}"))?;
        vb.hi = bl.max().expect("large sets are nonempty").clone();
        vbs.push(vb);
    }
    for (s, w) in blocks.windows(2).enumerate() {
        let (hi, lo, top) = (
            w[0].max().unwrap(),
            w[1].min().unwrap(),
            w[1].max().unwrap(),
        );
        if hi >= lo {
            return Err(Error::Precondition(format!(
                "blocks {s} and {} are not increasing",
                s + 1
            )));
        }
        if !apart_values(hi, lo, top, theta.as_ref())? {
            return Err(Error::Precondition(format!(
                "blocks {s} and {} are not apart",
                s + 1
            )));
        }
    }
    let maxima = FinSet::new(
        vbs.iter().map(|v| v.hi.clone()).collect(),
        blocks[0].floor().clone(),
    )?;
    let mb = top_block(
        &maxima,
        &LargenessSpec::new(b + 1, 1, theta),
        "the set of maxima",
    )?;

    let first_max = vbs[0].hi.clone();
    let mut members = vec![first_max.clone()];
    for bl in &blocks[1..] {
        members.extend(bl.iter().cloned());
    }
    let out = FinSet::new(members, blocks[0].floor().clone())?;
    let last = vbs.last().unwrap().hi.clone();

    let result = if b == 0 {
        ValueBlock {
            hi: last,
            ..vbs[1].clone()
        }
    } else {
        let need = to_usize_sat(&first_max);
        let mut children = Vec::with_capacity(need);
        for z in mb.children().iter().take(need) {
            children.push(fuse_rec(&within(&vbs, z), z, b - 1)?);
        }
        let hi = children.last().map_or(first_max.clone(), |c| c.hi.clone());
        ValueBlock {
            lo: first_max.clone(),
            hi,
            tree: ValueTree::Node {
                min: first_max,
                children,
            },
        }
    };
    let cert = certificate_from_values(&out, &[result])?;
    Ok((out, cert))
}

fn within(vbs: &[ValueBlock], z: &ValueBlock) -> Vec<ValueBlock> {
    vbs.iter()
        .filter(|v| v.hi >= z.lo && v.hi <= z.hi)
        .cloned()
        .collect()
}

/// `xs` are the blocks whose maxima lie in `mb`, an exponent-`bp+1` witness
/// rooted at the first of those maxima.
fn fuse_rec(xs: &[ValueBlock], mb: &ValueBlock, bp: usize) -> Result<ValueBlock> {
    if bp == 0 {
        let next = xs.get(1).ok_or_else(|| {
            Error::Precondition("an exponent-1 set of maxima with one element".into())
        })?;
        return Ok(ValueBlock {
            hi: mb.hi.clone(),
            ..next.clone()
        });
    }
    let mut children = Vec::new();
    for z in mb.children() {
        children.push(fuse_rec(&within(xs, z), z, bp - 1)?);
    }
    Ok(ValueBlock {
        lo: mb.lo.clone(),
        hi: mb.hi.clone(),
        tree: ValueTree::Node {
            min: mb.lo.clone(),
            children,
        },
    })
}
