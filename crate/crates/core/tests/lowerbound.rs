mod common;

use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::minimal::decompositions;
use common::{interval, set};
use omegalarge::formula::Theta;
use omegalarge::largeness::{
    check_large, is_large, is_minimal, minimal_large_interval, t_apart, Certificate, LargenessSpec,
    Magnitude, Mode,
};
use omegalarge::lowerbound::*;
use omegalarge::nat::{nat, to_u64};
use omegalarge::{Error, FinSet};

fn tree(base: u64, rank: usize) -> Arc<CanonicalTree> {
    CanonicalTree::new(nat(base), rank).unwrap()
}

fn blocks(base: u64, rank: usize) -> Arc<dyn CanonicalBlocks> {
    tree(base, rank)
}

fn values(x: &FinSet) -> Vec<u64> {
    x.to_u64s().unwrap()
}

fn big() -> omegalarge::Nat {
    nat(1 << 20)
}

fn split_theta(t: &Arc<dyn CanonicalBlocks>) -> Arc<dyn Theta> {
    Arc::new(SplitTheta::new(t.clone()))
}

/// Canonical blocks level by level, each level's blocks taken from the
/// unique decomposition found by `decompositions`.
fn oracle_blocks(xs: &[u64], n: usize) -> Vec<(usize, Vec<u64>)> {
    let mut out = vec![(n, xs.to_vec())];
    if n > 0 {
        let d = decompositions(xs, n);
        assert_eq!(
            d.len(),
            1,
            "{xs:?} at rank {n} has {} decompositions",
            d.len()
        );
        for part in &d[0] {
            out.extend(oracle_blocks(part, n - 1));
        }
    }
    out
}

fn oracle_same(blocks: &[(usize, Vec<u64>)], x: u64, y: u64, c: usize) -> bool {
    blocks
        .iter()
        .any(|(l, b)| *l == c && b.contains(&x) && b.contains(&y))
}

fn oracle_level(blocks: &[(usize, Vec<u64>)], v: u64) -> usize {
    blocks
        .iter()
        .filter(|(_, b)| b.contains(&v))
        .map(|(l, _)| *l)
        .min()
        .unwrap()
}

#[test]
fn tree_examples() {
    let t = tree(3, 1);
    assert_eq!(t.cardinality(), Magnitude::Exact(nat(4)));
    assert_eq!(*t.max(), Magnitude::Exact(nat(6)));
    let t = tree(3, 2);
    assert_eq!(t.cardinality(), Magnitude::Exact(nat(36)));
    let bases: Vec<u64> = t
        .children()
        .unwrap()
        .iter()
        .map(|c| to_u64(c.base()).unwrap())
        .collect();
    assert_eq!(bases, vec![4, 9, 19]);
    let deep = tree(3, 3);
    assert!(deep.cardinality().exact().is_none());
    assert!(matches!(
        deep.materialize(&big()),
        Err(Error::Overflow { .. })
    ));
    assert!(tree(3, 10).cardinality().exact().is_none());
    assert!(CanonicalTree::new(nat(2), 1).is_err());
}

#[test]
fn materialization_matches_minimal_intervals() {
    for base in 3..12 {
        for rank in 0..3 {
            let t = tree(base, rank);
            let Ok(x) = t.materialize(&nat(100_000)) else {
                continue;
            };
            assert_eq!(
                x,
                minimal_large_interval(&nat(base), rank, &nat(100_000)).unwrap()
            );
            if x.len() <= 100 {
                assert!(is_minimal(&x, rank).unwrap(), "tree({base}, {rank})");
            }
        }
    }
}

#[test]
fn decomposition_is_unique_and_equals_children() {
    for (base, rank) in [(3, 1), (3, 2), (4, 1), (4, 2), (5, 1)] {
        let t = tree(base, rank);
        let xs = values(&t.materialize(&big()).unwrap());
        let d = decompositions(&xs, rank);
        assert_eq!(d.len(), 1, "tree({base}, {rank})");
        assert_eq!(d[0].len(), base as usize);
        let kids: Vec<Vec<u64>> = t
            .children()
            .unwrap()
            .iter()
            .map(|c| values(&c.materialize(&big()).unwrap()))
            .collect();
        assert_eq!(d[0], kids);
    }
}

#[test]
fn block_addresses() {
    let t = tree(3, 2);
    assert_eq!(t.block_of(&nat(3), 1).unwrap(), None);
    let first = t.block_of(&nat(7), 1).unwrap().unwrap();
    assert_eq!(first.path, vec![0]);
    assert_eq!(
        values(&t.subtree(&first.path).unwrap().materialize(&big()).unwrap()),
        (4..=8).collect::<Vec<_>>()
    );
    assert_eq!(t.block_of(&nat(4), 0).unwrap(), None);
    let b = blocks(3, 2);
    assert!(same_block(b.as_ref(), &nat(5), &nat(8), 1).unwrap());
    assert!(!same_block(b.as_ref(), &nat(8), &nat(9), 1).unwrap());
    for v in 3..=38 {
        assert!(same_block(b.as_ref(), &nat(v), &nat(v), 2).unwrap());
    }
    assert!(!same_block(b.as_ref(), &nat(40), &nat(40), 2).unwrap());
}

#[test]
fn blocks_match_the_decomposition_oracle() {
    for (base, rank) in [(3, 1), (3, 2), (4, 2), (5, 1)] {
        let b = blocks(base, rank);
        let xs = values(&b.materialize(&big()).unwrap());
        let oracle = oracle_blocks(&xs, rank);
        for &x in &xs {
            assert_eq!(
                b.least_level(&nat(x)).unwrap(),
                Some(oracle_level(&oracle, x))
            );
            for &y in &xs {
                for c in 0..=rank {
                    assert_eq!(
                        same_block(b.as_ref(), &nat(x), &nat(y), c).unwrap(),
                        oracle_same(&oracle, x, y, c),
                        "tree({base}, {rank}) x={x} y={y} c={c}"
                    );
                }
            }
        }
    }
}

#[test]
fn splitting_examples() {
    let b = blocks(3, 2);
    assert!(splits(b.as_ref(), &nat(2), &nat(0), &nat(5)).unwrap());
    assert!(splits(blocks(3, 1).as_ref(), &nat(4), &nat(5), &nat(5)).unwrap());
    assert!(splits(b.as_ref(), &nat(6), &nat(9), &nat(18)).unwrap());
    // 9 opens the 1-block reaching 18, but 6 and 9 are apart only at level 2.
    assert!(!splits(b.as_ref(), &nat(6), &nat(9), &nat(19)).unwrap());
    assert!(!splits(b.as_ref(), &nat(6), &nat(6), &nat(7)).unwrap());
}

#[test]
fn parity_coloring_examples() {
    let small = blocks(3, 1);
    let colors: Vec<u32> = (3..=6)
        .map(|v| level_parity(small.as_ref(), &nat(v)).unwrap())
        .collect();
    assert_eq!(colors, vec![1, 0, 0, 0]);
    let b = blocks(3, 2);
    assert_eq!(level_parity(b.as_ref(), &nat(4)).unwrap(), 1);
    assert_eq!(level_parity(b.as_ref(), &nat(5)).unwrap(), 0);
    assert_eq!(level_parity(b.as_ref(), &nat(3)).unwrap(), 0);
    assert!(matches!(
        level_parity(b.as_ref(), &nat(39)),
        Err(Error::Domain(_))
    ));
}

#[test]
fn parity_is_the_least_level() {
    let b = blocks(3, 2);
    let xs = values(&b.materialize(&big()).unwrap());
    let oracle = oracle_blocks(&xs, 2);
    for &v in &xs {
        assert_eq!(
            level_parity(b.as_ref(), &nat(v)).unwrap() == 1,
            oracle_level(&oracle, v) % 2 == 1
        );
    }
}

#[test]
fn blockfree_views_are_minimal_one_rank_lower() {
    let once: Arc<dyn CanonicalBlocks> = Arc::new(zero_blockfree(blocks(3, 1)).unwrap());
    assert_eq!(once.materialize(&big()).unwrap(), set(&[3]));
    for (base, rank) in [(3, 2), (4, 2), (5, 2), (3, 1), (6, 1)] {
        let view: Arc<dyn CanonicalBlocks> = Arc::new(zero_blockfree(blocks(base, rank)).unwrap());
        let x = view.materialize(&big()).unwrap();
        assert!(
            is_minimal(&x, rank - 1).unwrap(),
            "blockfree(tree({base}, {rank})) = {x}"
        );
        let xs = values(&x);
        if rank >= 2 {
            let oracle = oracle_blocks(&xs, rank - 1);
            for &u in &xs {
                for &v in &xs {
                    for c in 0..rank {
                        assert_eq!(
                            same_block(view.as_ref(), &nat(u), &nat(v), c).unwrap(),
                            oracle_same(&oracle, u, v, c)
                        );
                    }
                }
            }
        }
    }
    let view: Arc<dyn CanonicalBlocks> = Arc::new(zero_blockfree(blocks(3, 2)).unwrap());
    assert_eq!(view.materialize(&big()).unwrap(), set(&[3, 4, 9, 19]));
    let twice = zero_blockfree(view).unwrap();
    assert_eq!(twice.materialize(&big()).unwrap(), set(&[3]));
    assert!(matches!(
        zero_blockfree(blocks(3, 0)),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn exported_sentence_matches_structural_evaluation() {
    for b in [
        blocks(3, 1),
        blocks(3, 2),
        Arc::new(zero_blockfree(blocks(4, 2)).unwrap()) as Arc<dyn CanonicalBlocks>,
    ] {
        let exported = split_sentence(b.as_ref(), TABLE_CEILING).unwrap();
        let direct = SplitTheta::new(b.clone());
        for x in 0..42 {
            for y in 0..42 {
                for z in 0..42 {
                    assert_eq!(
                        exported.holds(x, y, z).unwrap(),
                        direct.holds(x, y, z).unwrap(),
                        "{x} {y} {z}"
                    );
                }
            }
        }
    }
    assert!(matches!(
        split_sentence(blocks(4, 2).as_ref(), 1000),
        Err(Error::TooLarge(_))
    ));
}

/// The splitting condition used as a matrix without the shift.
struct Literal(Arc<dyn CanonicalBlocks>);

impl Theta for Literal {
    fn holds(&self, x: u64, y: u64, z: u64) -> omegalarge::Result<bool> {
        splits(self.0.as_ref(), &nat(x), &nat(y), &nat(z))
    }
    fn describe(&self) -> String {
        "literal".into()
    }
}

#[test]
fn literal_bounds_miss_the_block_ends() {
    // Strict bounds stop one short of the block ends, so the unshifted
    // matrix separates none of the canonical children.
    let b = blocks(3, 2);
    let literal = Literal(b.clone());
    assert!(!t_apart(&interval(4, 8), &interval(9, 18), &literal).unwrap());
    assert!(!is_large(
        &interval(3, 38),
        &LargenessSpec::new(2, 1, Arc::new(Literal(b.clone())))
    )
    .unwrap());
    assert!(t_apart(&interval(4, 8), &interval(9, 18), split_theta(&b).as_ref()).unwrap());
}

fn all_pairs(xs: &[u64]) -> Vec<(Vec<u64>, Vec<u64>)> {
    let n = xs.len();
    let mut out = Vec::new();
    for ma in 1u32..1 << n {
        for mb in 1u32..1 << n {
            let a: Vec<u64> = (0..n).filter(|i| ma >> i & 1 == 1).map(|i| xs[i]).collect();
            let b: Vec<u64> = (0..n).filter(|i| mb >> i & 1 == 1).map(|i| xs[i]).collect();
            if a.last() < b.first() {
                out.push((a, b));
            }
        }
    }
    out
}

fn random_pair(xs: &[u64], rng: &mut ChaCha8Rng) -> (Vec<u64>, Vec<u64>) {
    let cut = rng.gen_range(1..xs.len());
    let pick = |part: &[u64], rng: &mut ChaCha8Rng| {
        let p = rng.gen_range(0.1..0.9);
        let mut s: Vec<u64> = part.iter().copied().filter(|_| rng.gen_bool(p)).collect();
        if s.is_empty() {
            s.push(part[rng.gen_range(0..part.len())]);
        }
        s
    };
    (pick(&xs[..cut], rng), pick(&xs[cut..], rng))
}

#[test]
fn shortcut_agrees_with_apartness() {
    let small = blocks(3, 1);
    let t_small = split_sentence(small.as_ref(), TABLE_CEILING).unwrap();
    let pairs = all_pairs(&values(&small.materialize(&big()).unwrap()));
    assert_eq!(pairs.len(), 17);
    for (a, b) in pairs {
        let (a, b) = (set(&a), set(&b));
        assert_eq!(
            apart_shortcut(small.as_ref(), &a, &b).unwrap(),
            t_apart(&a, &b, &t_small).unwrap(),
            "{a} {b}"
        );
    }
    let x = blocks(3, 2);
    let tx = split_sentence(x.as_ref(), TABLE_CEILING).unwrap();
    let xs = values(&x.materialize(&big()).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut apart = 0;
    for _ in 0..2000 {
        let (a, b) = random_pair(&xs, &mut rng);
        let (a, b) = (set(&a), set(&b));
        let full = t_apart(&a, &b, &tx).unwrap();
        assert_eq!(apart_shortcut(x.as_ref(), &a, &b).unwrap(), full, "{a} {b}");
        apart += usize::from(full);
    }
    assert!(apart > 100, "only {apart} apart pairs sampled");
}

#[test]
fn shortcut_preconditions() {
    let b = blocks(3, 2);
    assert!(matches!(
        apart_shortcut(b.as_ref(), &set(&[5, 9]), &set(&[9])),
        Err(Error::Precondition(_))
    ));
    assert!(matches!(
        apart_shortcut(b.as_ref(), &set(&[5]), &set(&[40])),
        Err(Error::Precondition(_))
    ));
    assert!(matches!(
        apart_shortcut(b.as_ref(), &FinSet::empty(), &set(&[9])),
        Err(Error::Precondition(_))
    ));
    assert!(apart_shortcut(b.as_ref(), &set(&[5, 6]), &interval(9, 18)).unwrap());
    assert!(apart_shortcut(b.as_ref(), &set(&[5]), &set(&[7])).unwrap());
}

#[test]
fn apart_pairs_fall_inside_one_child() {
    let x = blocks(3, 2);
    let tx = split_theta(&x);
    let xs = values(&x.materialize(&big()).unwrap());
    let children: Vec<FinSet> = tree(3, 2)
        .children()
        .unwrap()
        .iter()
        .map(|c| c.materialize(&big()).unwrap())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut seen = 0;
    for _ in 0..3000 {
        let (a, b) = random_pair(&xs, &mut rng);
        let (a, b) = (set(&a), set(&b));
        if t_apart(&a, &b, tx.as_ref()).unwrap() {
            seen += 1;
            assert!(children.iter().any(|c| b.is_subset_of(c)), "{a} {b}");
        }
    }
    assert!(seen > 100);
}

#[test]
fn splitting_is_local_to_blocks() {
    let x = tree(3, 2);
    let xb: Arc<dyn CanonicalBlocks> = x.clone();
    for child in x.children().unwrap() {
        let yb: Arc<dyn CanonicalBlocks> = child.clone();
        let ys = values(&child.materialize(&big()).unwrap());
        for &a in &ys {
            for &b in &ys {
                for &c in &ys {
                    let (a, b, c) = (nat(a), nat(b), nat(c));
                    assert_eq!(
                        splits(xb.as_ref(), &a, &b, &c).unwrap(),
                        splits(yb.as_ref(), &a, &b, &c).unwrap()
                    );
                }
            }
        }
        // Large subsets of the block are the same under either sentence.
        let (tx, ty) = (split_theta(&xb), split_theta(&yb));
        let mut rng = ChaCha8Rng::seed_from_u64(to_u64(child.base()).unwrap());
        let masks: Vec<u32> = if ys.len() <= 12 {
            (1..1 << ys.len()).collect()
        } else {
            (0..400)
                .map(|_| rng.gen_range(1..1u32 << ys.len()))
                .chain([(1u32 << ys.len()) - 1])
                .collect()
        };
        for mask in masks {
            let sub: Vec<u64> = (0..ys.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| ys[i])
                .collect();
            let sub = set(&sub);
            for k in 0..=1 {
                assert_eq!(
                    is_large(&sub, &LargenessSpec::new(k, 1, tx.clone())).unwrap(),
                    is_large(&sub, &LargenessSpec::new(k, 1, ty.clone())).unwrap(),
                    "{sub} k={k}"
                );
            }
        }
    }
}

#[test]
fn splitting_survives_removing_zero_blocks() {
    for (base, rank) in [(3, 2), (4, 2), (5, 2)] {
        let x = blocks(base, rank);
        let view: Arc<dyn CanonicalBlocks> = Arc::new(zero_blockfree(x.clone()).unwrap());
        let vs = values(&view.materialize(&big()).unwrap());
        for &a in &vs {
            for &b in &vs {
                for &c in &vs {
                    let (a, b, c) = (nat(a), nat(b), nat(c));
                    assert_eq!(
                        splits(x.as_ref(), &a, &b, &c).unwrap(),
                        splits(view.as_ref(), &a, &b, &c).unwrap()
                    );
                }
            }
        }
    }
}

#[test]
fn minimal_sets_are_large_for_their_own_sentence() {
    for (base, rank) in [(3, 1), (3, 2), (4, 2), (5, 1)] {
        let t = tree(base, rank);
        let b: Arc<dyn CanonicalBlocks> = t.clone();
        let x = b.materialize(&big()).unwrap();
        let cert = check_large(
            &x,
            &LargenessSpec::new(rank, 1, split_theta(&b)),
            Mode::Exhaustive,
        )
        .unwrap()
        .unwrap();
        let Certificate::Node { children, .. } = &cert.blocks()[0].cert else {
            panic!("expected a node")
        };
        let ranges: Vec<(u64, u64)> = children
            .iter()
            .map(|c| {
                (
                    to_u64(x.get(c.start)).unwrap(),
                    to_u64(x.get(c.end)).unwrap(),
                )
            })
            .collect();
        let expected: Vec<(u64, u64)> = t
            .children()
            .unwrap()
            .iter()
            .map(|c| {
                (
                    to_u64(c.base()).unwrap(),
                    to_u64(c.max().exact().unwrap()).unwrap(),
                )
            })
            .collect();
        assert_eq!(ranges, expected, "tree({base}, {rank})");
    }
}

#[test]
fn no_homogeneous_large_subset_at_rank_one() {
    for base in [3, 5, 7, 9] {
        let t = tree(base, 1);
        let r = verify_lower_bound(&t, 1, LowerBoundMode::Exhaustive).unwrap();
        assert_eq!(r.status, LowerBoundStatus::Confirmed, "base {base}");
        let p = verify_lower_bound(&t, 1, LowerBoundMode::Pruned { budget: 10 }).unwrap();
        assert_eq!(p.status, LowerBoundStatus::Confirmed);
    }
    // {4, 5, 6} is homogeneous but one element short of ω-large.
    let b = blocks(3, 1);
    let six = set(&[4, 5, 6]);
    assert!(six
        .iter()
        .all(|v| level_parity(b.as_ref(), v).unwrap() == 0));
    assert!(!is_large(&six, &LargenessSpec::new(1, 1, split_theta(&b))).unwrap());
}

#[test]
fn exhaustive_lower_bound_agrees_with_subset_oracle() {
    // The same question answered by the bitmask oracle, which tries every
    // family of subsets rather than contiguous blocks.
    for base in [3, 4, 5, 6] {
        let b = blocks(base, 1);
        let theta = split_sentence(b.as_ref(), TABLE_CEILING).unwrap();
        let xs = values(&b.materialize(&big()).unwrap());
        let mut oracle = common::SubsetOracle::new(&xs, Some(&theta));
        let colors: Vec<u32> = xs
            .iter()
            .map(|&v| level_parity(b.as_ref(), &nat(v)).unwrap())
            .collect();
        for mask in 1..=oracle.full() {
            let picked: Vec<usize> = (0..xs.len()).filter(|i| mask >> i & 1 == 1).collect();
            if picked.iter().all(|&i| colors[i] == colors[picked[0]]) {
                assert!(
                    !oracle.check(1, 1, mask),
                    "base {base}: {:?}",
                    oracle.subset(mask)
                );
            }
        }
    }
}

#[test]
fn rank_three_is_only_consistent() {
    let t = tree(3, 3);
    let r = verify_lower_bound(&t, 2, LowerBoundMode::Pruned { budget: 40 }).unwrap();
    assert_eq!(r.status, LowerBoundStatus::Consistent);
    assert!(r.sub_instances > 5);
    assert!(matches!(
        verify_lower_bound(&t, 2, LowerBoundMode::Exhaustive),
        Err(Error::Overflow { .. })
    ));
    assert!(matches!(
        verify_lower_bound(&tree(3, 2), 1, LowerBoundMode::Exhaustive),
        Err(Error::Precondition(_))
    ));
    let tight = verify_lower_bound(&t, 2, LowerBoundMode::Pruned { budget: 2 }).unwrap();
    assert_eq!(
        (tight.status, tight.sub_instances),
        (LowerBoundStatus::Consistent, 2)
    );
}

proptest! {
    #[test]
    fn addresses_lead_to_blocks_holding_the_value(base in 3u64..12, rank in 0usize..3, pick in 0u64..1000, c in 0usize..3) {
        let t = tree(base, rank);
        let max = to_u64(t.max().exact().unwrap()).unwrap();
        let v = base + pick % (max - base + 1);
        let c = c.min(rank);
        if let Some(a) = t.block_of(&nat(v), c).unwrap() {
            prop_assert_eq!(a.level, c);
            prop_assert_eq!(a.path.len(), rank - c);
            let sub = t.subtree(&a.path).unwrap();
            prop_assert!(sub.contains(&nat(v)).unwrap());
            prop_assert!(t.least_level(&nat(v)).unwrap().unwrap() <= c);
        } else {
            prop_assert!(t.least_level(&nat(v)).unwrap().unwrap() > c);
        }
    }
}
