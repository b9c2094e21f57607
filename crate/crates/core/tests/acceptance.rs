//! The ten acceptance criteria. Each prints one PASS or FAIL line, and the
//! test fails if any of them does.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::formulas::{naive_eval, random_formula, FREE};
use common::minimal::decompositions;
use common::{interval, sentence, set, SubsetOracle};
use omegalarge::formula::{
    eval, weakly_pi04_transform, Pi03Sentence, PrefixSentence, Quantifier, SecondOrderParam, Theta,
};
use omegalarge::grouping::{
    find_grouping, grouping_violation, is_grouping, GroupingWitness, LSpec, Violation,
};
use omegalarge::largeness::*;
use omegalarge::lowerbound::*;
use omegalarge::nat::{nat, to_u64};
use omegalarge::ramsey::{bounds_row, em_extract, EmConfig, FailureKind};
use omegalarge::{Budget, ColoringTable, FinSet, Outcome, SparsityPolicy};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn top() -> Arc<dyn Theta> {
    Arc::new(Pi03Sentence::top())
}

fn values(x: &FinSet) -> Vec<u64> {
    x.to_u64s().unwrap()
}

fn big() -> omegalarge::Nat {
    nat(1 << 20)
}

fn tree(base: u64, rank: usize) -> Arc<CanonicalTree> {
    CanonicalTree::new(nat(base), rank).unwrap()
}

fn exported(t: &Arc<CanonicalTree>) -> Pi03Sentence {
    split_sentence(t.as_ref(), TABLE_CEILING).unwrap()
}

fn top_collapse() -> Check {
    let xs: Vec<u64> = (3..=16).collect();
    let mut oracle = SubsetOracle::new(&xs, None);
    let spec_top = top();
    let mut compared = 0;
    for mask in 1..=oracle.full() {
        let sub = set(&oracle.subset(mask));
        for n in 0..=2 {
            for k in 1..=2 {
                let fast = check_large(
                    &sub,
                    &LargenessSpec::new(n, k, spec_top.clone()),
                    Mode::Exhaustive,
                )
                .unwrap();
                let slow = oracle.check(n, k, mask);
                ensure(fast.is_some() == slow, || {
                    format!("{sub} n={n} k={k}: search {} oracle {slow}", fast.is_some())
                })?;
                compared += 1;
            }
        }
    }
    Ok(format!("{compared} comparisons, 0 mismatches"))
}

fn minimal_intervals() -> Check {
    let one = minimal_large_interval(&nat(3), 1, &big()).unwrap();
    ensure(one == set(&[3, 4, 5, 6]), || {
        format!("minimal ω-large interval is {one}")
    })?;
    let two = minimal_large_interval(&nat(3), 2, &big()).unwrap();
    ensure(two == interval(3, 38) && two.len() == 36, || {
        format!("minimal ω²-large interval is {two}")
    })?;
    ensure(
        is_minimal(&one, 1).unwrap() && is_minimal(&two, 2).unwrap(),
        || "is_minimal rejects".into(),
    )?;
    let t = tree(3, 2);
    ensure(
        t.cardinality() == Magnitude::Exact(nat(36)) && *t.max() == Magnitude::Exact(nat(38)),
        || {
            format!(
                "tree(3, 2) has {} elements up to {}",
                t.cardinality(),
                t.max()
            )
        },
    )?;
    // Recursion oracle: the least top making [3, top] large.
    for (n, want) in [(1, 6), (2, 38)] {
        let least = (3..)
            .find(|&m| is_large(&interval(3, m), &LargenessSpec::plain(n, 1)).unwrap())
            .unwrap();
        ensure(least == want, || {
            format!("least ω^{n}-large interval ends at {least}")
        })?;
    }
    Ok("{3,4,5,6} and [3,38] minimal, tree(3,2) has 36 elements up to 38".into())
}

fn pigeonhole() -> Check {
    let x = interval(3, 38);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut by_route = BTreeMap::new();
    for run in 0..1000 {
        let f = ColoringTable::random(x.clone(), 1, 3, &mut rng).unwrap();
        let out = pigeonhole_extract(&x, &f, 1, top(), SparsityPolicy::None, false)
            .map_err(|e| format!("run {run}: {e}"))?;
        ensure(out.set.is_subset_of(&x), || {
            format!("run {run}: {} leaves X", out.set)
        })?;
        ensure(
            out.set
                .iter()
                .all(|v| f.color(std::slice::from_ref(v)).unwrap() == out.color),
            || format!("run {run}: {} is not homogeneous", out.set),
        )?;
        ensure(
            verify_certificate(
                &out.set,
                &out.certificate,
                &LargenessSpec::plain(1, 1),
                true,
            )
            .unwrap(),
            || format!("run {run}: certificate rejected"),
        )?;
        // Independently of the certificate: ω-large means more than min elements.
        let min = to_u64(out.set.min().unwrap()).unwrap();
        ensure(out.set.len() as u64 > min, || {
            format!("run {run}: {} is too small", out.set)
        })?;
        *by_route.entry(out.route.to_string()).or_insert(0) += 1;
    }
    Ok(format!("1000/1000 verified ({by_route:?})"))
}

fn naive_apart(a: &FinSet, b: &FinSet, t: &dyn Theta) -> bool {
    let (max_a, min_b, max_b) = (
        to_u64(a.max().unwrap()).unwrap(),
        to_u64(b.min().unwrap()).unwrap(),
        to_u64(b.max().unwrap()).unwrap(),
    );
    (0..max_a).all(|x| (0..min_b).any(|y| (0..max_b).all(|z| t.holds(x, y, z).unwrap())))
}

fn random_subset(part: &[u64], rng: &mut ChaCha8Rng) -> FinSet {
    let mut s: Vec<u64> = part.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
    if s.is_empty() {
        s.push(part[rng.gen_range(0..part.len())]);
    }
    set(&s)
}

fn apartness_laws() -> Check {
    let thetas: Vec<(String, Arc<dyn Theta>)> = vec![
        ("TOP".into(), top()),
        ("x + x < y".into(), sentence("x + x < y")),
        (
            "x < y and z < y * 9".into(),
            sentence("x < y and z < y * 9"),
        ),
        (
            "x * x < y + 3 or z < x".into(),
            sentence("x * x < y + 3 or z < x"),
        ),
        ("T_X of tree(3,2)".into(), Arc::new(exported(&tree(3, 2)))),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut transitive_cases, mut monotone_cases, mut oracle_checks) = (0, 0, 0);
    for i in 0..10_000 {
        let (name, t) = &thetas[i % thetas.len()];
        let t = t.as_ref();
        let mut cuts = [rng.gen_range(4..38), rng.gen_range(4..38)];
        cuts.sort();
        if cuts[0] == cuts[1] {
            cuts[1] += 1;
        }
        let xs: Vec<u64> = (3..=39).collect();
        let (lo, mid, hi) = (
            &xs[..cuts[0] as usize - 3],
            &xs[cuts[0] as usize - 3..cuts[1] as usize - 3],
            &xs[cuts[1] as usize - 3..],
        );
        let (a, b, c) = (
            random_subset(lo, &mut rng),
            random_subset(mid, &mut rng),
            random_subset(hi, &mut rng),
        );
        let ab = t_apart(&a, &b, t).unwrap();
        let bc = t_apart(&b, &c, t).unwrap();
        if ab && bc {
            transitive_cases += 1;
            ensure(t_apart(&a, &c, t).unwrap(), || {
                format!("{name}: {a} {b} {c} not transitive")
            })?;
        }
        if ab {
            monotone_cases += 1;
            let (a2, b2) = (
                random_subset(&values(&a), &mut rng),
                random_subset(&values(&b), &mut rng),
            );
            ensure(t_apart(&a2, &b2, t).unwrap(), || {
                format!("{name}: {a} {b} apart but not {a2} {b2}")
            })?;
        }
        if i % 10 == 0 {
            oracle_checks += 1;
            ensure(ab == naive_apart(&a, &b, t), || {
                format!("{name}: {a} {b} disagrees with the definition")
            })?;
        }
    }
    ensure(transitive_cases > 500 && monotone_cases > 1000, || {
        format!(
            "too few nontrivial samples: {transitive_cases} transitive, {monotone_cases} monotone"
        )
    })?;
    Ok(format!(
        "10000 samples over 5 sentences, 0 violations ({transitive_cases} transitivity and {monotone_cases} monotonicity cases, {oracle_checks} checked against the definition)"
    ))
}

fn all_pairs(xs: &[u64]) -> Vec<(FinSet, FinSet)> {
    let n = xs.len();
    let mut out = Vec::new();
    for ma in 1u32..1 << n {
        for mb in 1u32..1 << n {
            let a: Vec<u64> = (0..n).filter(|i| ma >> i & 1 == 1).map(|i| xs[i]).collect();
            let b: Vec<u64> = (0..n).filter(|i| mb >> i & 1 == 1).map(|i| xs[i]).collect();
            if a.last() < b.first() {
                out.push((set(&a), set(&b)));
            }
        }
    }
    out
}

fn lemma_suite() -> Check {
    for rank in [1, 2] {
        let t = tree(3, rank);
        let xs = values(&t.materialize(&big()).unwrap());
        let found = decompositions(&xs, rank);
        let children: Vec<Vec<u64>> = t
            .children()
            .unwrap()
            .iter()
            .map(|c| values(&c.materialize(&big()).unwrap()))
            .collect();
        ensure(found == vec![children.clone()], || {
            format!("tree(3, {rank}) has decompositions {found:?}")
        })?;
    }

    let small = tree(3, 1);
    let t_small = exported(&small);
    let pairs = all_pairs(&values(&small.materialize(&big()).unwrap()));
    for (a, b) in &pairs {
        ensure(
            apart_shortcut(small.as_ref(), a, b).unwrap() == t_apart(a, b, &t_small).unwrap(),
            || format!("shortcut differs on {a} {b}"),
        )?;
    }
    let x = tree(3, 2);
    let tx = exported(&x);
    let xs = values(&x.materialize(&big()).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..2000 {
        let cut = rng.gen_range(1..xs.len());
        let (a, b) = (
            random_subset(&xs[..cut], &mut rng),
            random_subset(&xs[cut..], &mut rng),
        );
        ensure(
            apart_shortcut(x.as_ref(), &a, &b).unwrap() == t_apart(&a, &b, &tx).unwrap(),
            || format!("shortcut differs on {a} {b}"),
        )?;
    }

    let mut triples = 0;
    for child in x.children().unwrap() {
        let ys = values(&child.materialize(&big()).unwrap());
        for &p in &ys {
            for &q in &ys {
                for &r in &ys {
                    let (p, q, r) = (nat(p), nat(q), nat(r));
                    let whole = splits(x.as_ref(), &p, &q, &r).unwrap();
                    ensure(whole == splits(child.as_ref(), &p, &q, &r).unwrap(), || {
                        format!("splitting at {p} {q} {r} is not local")
                    })?;
                    triples += 1;
                }
            }
        }
    }

    let view = zero_blockfree(x.clone()).unwrap();
    let rest = view.materialize(&big()).unwrap();
    ensure(
        rest == set(&[3, 4, 9, 19]) && is_minimal(&rest, 1).unwrap(),
        || format!("0-blockfree part {rest}"),
    )?;

    for (t, rank) in [(&small, 1), (&x, 2)] {
        let set = t.materialize(&big()).unwrap();
        let theta: Arc<dyn Theta> = Arc::new(exported(t));
        ensure(
            check_large(&set, &LargenessSpec::new(rank, 1, theta), Mode::Exhaustive)
                .unwrap()
                .is_some(),
            || format!("tree(3, {rank}) is not large for its own sentence"),
        )?;
    }
    Ok(format!(
        "unique decompositions, {} + 2000 shortcut pairs, {triples} local triples, {{3,4,9,19}} minimal, self-largeness",
        pairs.len()
    ))
}

fn lower_bound_rank_one() -> Check {
    for base in [3, 5] {
        let t = tree(base, 1);
        let report = verify_lower_bound(&t, 1, LowerBoundMode::Exhaustive).unwrap();
        ensure(report.status == LowerBoundStatus::Confirmed, || {
            format!("tree({base}, 1): {}", report.status)
        })?;

        // Every subset, through the family-of-subsets oracle.
        let xs = values(&t.materialize(&big()).unwrap());
        let theta = exported(&t);
        let mut oracle = SubsetOracle::new(&xs, Some(&theta));
        let colors: Vec<u32> = xs
            .iter()
            .map(|&v| level_parity(t.as_ref(), &nat(v)).unwrap())
            .collect();
        for mask in 1..=oracle.full() {
            let picked: Vec<usize> = (0..xs.len()).filter(|i| mask >> i & 1 == 1).collect();
            if picked.iter().all(|&i| colors[i] == colors[picked[0]]) {
                ensure(!oracle.check(1, 1, mask), || {
                    format!(
                        "tree({base}, 1): {:?} is homogeneous and large",
                        oracle.subset(mask)
                    )
                })?;
            }
        }
        let mut expected = vec![0; xs.len()];
        expected[0] = 1;
        ensure(colors == expected, || {
            format!("tree({base}, 1) colors {colors:?}")
        })?;
    }
    Ok("no homogeneous ω-large(T_X) subset of tree(3,1) or tree(5,1); colors [1,0,0,0] and [1,0,0,0,0,0]".into())
}

fn bounds() -> Check {
    let row = bounds_row(1, 1);
    let e = BigUint::from(16u32).pow(6) + 1u32;
    ensure(
        row.pigeonhole == nat(2) && row.ads == nat(8) && row.lower == Some(nat(1)),
        || format!("{row:?}"),
    )?;
    ensure(row.em == nat(16_777_217) && row.rt22 == e.pow(8), || {
        format!("em {} rt22 {}", row.em, row.rt22)
    })?;
    for n in 1..=50 {
        let r = bounds_row(n, 1);
        ensure(r.lower.as_ref().is_some_and(|l| *l < r.pigeonhole), || {
            format!("n = {n}: {:?} vs {}", r.lower, r.pigeonhole)
        })?;
    }
    Ok(format!("row 1 exact, rt22 = {}", row.rt22))
}

fn formula_engine() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut truths = 0;
    for i in 0..10_000 {
        let f = random_formula(&mut rng, 8, &mut Vec::new());
        ensure(f.size() <= 8, || format!("{f} has size {}", f.size()))?;
        let a = rng.gen_range(0..=16u64);
        let bits: Vec<bool> = (0..rng.gen_range(0..20))
            .map(|_| rng.gen_bool(0.5))
            .collect();
        let mut env = BTreeMap::new();
        let mut naive_env = BTreeMap::new();
        for v in FREE {
            let val = rng.gen_range(0..=16u64);
            env.insert(v.to_string(), nat(val));
            naive_env.insert(v.to_string(), BigUint::from(val));
        }
        let got = eval(&f, &env, &nat(a), &SecondOrderParam::new(bits.clone()))
            .map_err(|e| format!("{f}: {e}"))?;
        let want = naive_eval(&f, &mut naive_env, &BigUint::from(a), &bits);
        ensure(got == want, || {
            format!("pair {i}: {f} gives {got}, expected {want}")
        })?;
        truths += usize::from(got);
    }

    let leads = ["", "forall A . ", "forall a . ", "forall A . forall a . "];
    let cores = [
        "x + y < z",
        "z in A or a < z",
        "forall w < z . w * x < y + z",
        "exists x' < z . x' = x",
        "x = y",
    ];
    let mut shapes = 0;
    for lead in leads {
        for core in cores {
            let text = format!("{lead}exists x . forall y . exists z . {core}");
            let s = PrefixSentence::parse(&text).map_err(|e| format!("{text}: {e}"))?;
            let t = weakly_pi04_transform(&s).map_err(|e| format!("{text}: {e}"))?;
            let k = s.prefix.len() - 3;
            ensure(
                t.prefix.len() == k + 5 && t.prefix[..k] == s.prefix[..k],
                || format!("{text} became {t}"),
            )?;
            let rest = &t.prefix[k..];
            let kinds: Vec<(Quantifier, bool)> = rest
                .iter()
                .map(|q| (q.quantifier, q.bound.is_some()))
                .collect();
            let want = [
                (Quantifier::Exists, false),
                (Quantifier::Forall, false),
                (Quantifier::Exists, true),
                (Quantifier::Forall, true),
                (Quantifier::Exists, false),
            ];
            ensure(kinds == want, || format!("{text} became {t}"))?;
            ensure(
                rest[2].bound.as_ref().unwrap().to_string() == "x"
                    && rest[3].bound.as_ref().unwrap().to_string() == "y",
                || format!("{text} became {t}"),
            )?;
            let (x2, y2) = (&rest[2].var, &rest[3].var);
            ensure(
                t.core == s.core.rename_free("x", x2).rename_free("y", y2),
                || format!("{text}: core {}", t.core),
            )?;
            ensure(weakly_pi04_transform(&t).is_err(), || {
                format!("{text}: output accepted again")
            })?;
            shapes += 1;
        }
    }
    Ok(format!(
        "10000 pairs agree ({truths} true), {shapes} rewrites have the expected prefix"
    ))
}

fn recolor(f: &ColoringTable, i: usize, j: usize) -> ColoringTable {
    ColoringTable::from_fn(f.domain().clone(), 2, f.colors(), |t| {
        let c = f.color_idx(t);
        if t == [i, j] {
            1 - c
        } else {
            c
        }
    })
    .unwrap()
}

fn groupings() -> Check {
    let z = interval(3, 38);
    let (l0, l1) = (LSpec::CardAtLeast(2), LSpec::CardAtLeast(3));
    let never = sentence("x < 0");
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut found, mut absent, mut exhausted, mut mutants) = (0, 0, 0, 0);
    for run in 0..500 {
        let f = ColoringTable::random(z.clone(), 2, 2, &mut rng).unwrap();
        let w = match find_grouping(&z, &f, &l0, &l1, top().as_ref(), &mut Budget::new(200_000))
            .unwrap()
        {
            Outcome::Found(w) => w,
            Outcome::Absent => {
                absent += 1;
                continue;
            }
            Outcome::Exhausted(_) => {
                exhausted += 1;
                continue;
            }
        };
        found += 1;
        ensure(is_grouping(&w, &l0, &l1, top().as_ref()).unwrap(), || {
            format!("run {run}: found witness is not a grouping")
        })?;

        let (expected, broken, theta) = match run % 4 {
            0 => {
                let mut blocks = w.blocks.clone();
                blocks[0] = set(&[to_u64(blocks[0].min().unwrap()).unwrap()]);
                (
                    "block",
                    GroupingWitness {
                        blocks,
                        coloring: w.coloring.clone(),
                    },
                    top(),
                )
            }
            1 => (
                "transversal",
                GroupingWitness {
                    blocks: w.blocks[..2].to_vec(),
                    coloring: w.coloring.clone(),
                },
                top(),
            ),
            2 => {
                let i = z.index_of(w.blocks[0].min().unwrap()).unwrap();
                let j = z.index_of(w.blocks[1].min().unwrap()).unwrap();
                (
                    "color",
                    GroupingWitness {
                        blocks: w.blocks.clone(),
                        coloring: recolor(&w.coloring, i, j),
                    },
                    top(),
                )
            }
            _ => ("apart", w.clone(), never.clone()),
        };
        let v = grouping_violation(&broken, &l0, &l1, theta.as_ref()).unwrap();
        let right_kind = matches!(
            (expected, &v),
            ("block", Some(Violation::BlockNotLarge(0)))
                | ("transversal", Some(Violation::Transversal(_)))
                | ("color", Some(Violation::NotMonochromatic(_)))
                | ("apart", Some(Violation::NotApart(_, _)))
        );
        ensure(
            right_kind && !is_grouping(&broken, &l0, &l1, theta.as_ref()).unwrap(),
            || format!("run {run}: {expected} mutation gave {v:?}"),
        )?;
        mutants += 1;
    }
    // Top up the mutants from fresh colorings until there are 500.
    let mut extra_rng = ChaCha8Rng::seed_from_u64(10);
    while mutants < 500 {
        let f = ColoringTable::random(z.clone(), 2, 2, &mut extra_rng).unwrap();
        if let Outcome::Found(w) =
            find_grouping(&z, &f, &l0, &l1, top().as_ref(), &mut Budget::new(200_000)).unwrap()
        {
            ensure(
                grouping_violation(&w, &l0, &l1, never.as_ref())
                    .unwrap()
                    .is_some(),
                || "apart mutation accepted".into(),
            )?;
            mutants += 1;
        }
    }
    ensure(found > 0, || "no grouping found at all".into())?;
    Ok(format!("{found} found and verified, {absent} absent, {exhausted} out of budget; {mutants} mutants rejected"))
}

fn transitive_oracle(f: &ColoringTable, s: &FinSet) -> bool {
    let v = s.elements();
    let c = |p: usize, q: usize| f.color(&[v[p].clone(), v[q].clone()]).unwrap();
    (0..v.len()).all(|a| {
        (a + 1..v.len()).all(|b| (b + 1..v.len()).all(|d| c(a, b) != c(b, d) || c(a, d) == c(a, b)))
    })
}

fn em() -> Check {
    let x = interval(3, 38);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut ok, mut budget) = (0, 0);
    for run in 0..200 {
        let f = ColoringTable::random(x.clone(), 2, 2, &mut rng).unwrap();
        match em_extract(
            &x,
            &f,
            1,
            top(),
            &EmConfig::scaled(vec![0], 2),
            &mut Budget::new(200_000),
        )
        .unwrap()
        {
            Ok(w) => {
                ensure(
                    w.set.is_subset_of(&x) && transitive_oracle(&f, &w.set),
                    || format!("run {run}: {} not transitive", w.set),
                )?;
                ensure(
                    verify_certificate(&w.set, &w.certificate, &LargenessSpec::plain(1, 1), true)
                        .unwrap(),
                    || format!("run {run}: certificate rejected"),
                )?;
                ok += 1;
            }
            Err(e) => {
                ensure(e.kind == FailureKind::Budget, || format!("run {run}: {e}"))?;
                budget += 1;
            }
        }
    }
    Ok(format!(
        "{ok} extracted and re-validated, {budget} out of budget, 0 invalid"
    ))
}

#[test]
fn acceptance() {
    type Criterion = (&'static str, fn() -> Check, u64);
    let criteria: [Criterion; 10] = [
        ("TOP-collapse oracle equivalence", top_collapse, 60),
        ("minimal-interval facts", minimal_intervals, 1),
        ("pigeonhole extractor", pigeonhole, 120),
        ("apartness laws", apartness_laws, 60),
        ("lemma suite on tree(3,1) and tree(3,2)", lemma_suite, 120),
        ("lower bound n = 1", lower_bound_rank_one, 5),
        ("bounds table exactness", bounds, 1),
        ("formula engine oracle", formula_engine, 30),
        ("grouping soundness", groupings, 120),
        ("EM extractor", em, 300),
    ];
    let mut failed = Vec::new();
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let took = start.elapsed();
        let result = result.and_then(|msg| {
            if took <= Duration::from_secs(*limit) {
                Ok(msg)
            } else {
                Err(format!("took {took:.1?}, limit {limit} s"))
            }
        });
        match result {
            Ok(msg) => println!("PASS {:>2} {name}: {msg} [{took:.2?}]", i + 1),
            Err(msg) => {
                println!("FAIL {:>2} {name}: {msg} [{took:.2?}]", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
