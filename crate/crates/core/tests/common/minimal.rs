use omegalarge::largeness::{is_large, max_of_minimal, minimal_interval_size, LargenessSpec};
use omegalarge::nat::{nat, to_u64};
use omegalarge::FinSet;

/// Every ω^n-decomposition of `xs` into subsets, found by backtracking with
/// only the size recurrence for pruning.
pub fn decompositions(xs: &[u64], n: usize) -> Vec<Vec<Vec<u64>>> {
    assert!(n >= 1);
    let top = *xs.last().unwrap();
    let least_end = |b: u64| to_u64(max_of_minimal(&nat(b), n - 1).exact().unwrap()).unwrap();
    let least_size =
        |b: u64| to_u64(minimal_interval_size(&nat(b), n - 1).exact().unwrap()).unwrap() as usize;
    let room = |mut v: u64, r: usize| {
        for _ in 0..r {
            v = least_end(v + 1);
            if v > top {
                return false;
            }
        }
        true
    };
    let spec = LargenessSpec::plain(n - 1, 1);
    let need = xs[0] as usize;
    let rest = &xs[1..];
    let mut out = Vec::new();
    let mut stack: Vec<Vec<u64>> = Vec::new();

    #[allow(clippy::too_many_arguments)]
    fn grow(
        rest: &[u64],
        from: usize,
        need: usize,
        stack: &mut Vec<Vec<u64>>,
        out: &mut Vec<Vec<Vec<u64>>>,
        spec: &LargenessSpec,
        least_size: &dyn Fn(u64) -> usize,
        room: &dyn Fn(u64, usize) -> bool,
    ) {
        if stack.len() >= need {
            out.push(stack.clone());
        }
        for s in from..rest.len() {
            let b = rest[s];
            for e in s..rest.len() {
                if !room(rest[e], need.saturating_sub(stack.len() + 1)) {
                    break;
                }
                let inner: Vec<u64> = if e > s {
                    rest[s + 1..e].to_vec()
                } else {
                    Vec::new()
                };
                let want = least_size(b).saturating_sub(if e > s { 2 } else { 1 });
                if e == s && least_size(b) > 1 {
                    continue;
                }
                for pick in subsets_at_least(&inner, want) {
                    let mut block = vec![b];
                    block.extend(pick);
                    if e > s {
                        block.push(rest[e]);
                    }
                    if is_large(&FinSet::from_u64s_floor(&block, 0).unwrap(), spec).unwrap() {
                        stack.push(block);
                        grow(rest, e + 1, need, stack, out, spec, least_size, room);
                        stack.pop();
                    }
                }
            }
        }
    }
    grow(
        rest,
        0,
        need,
        &mut stack,
        &mut out,
        &spec,
        &least_size,
        &room,
    );
    out
}

fn subsets_at_least(xs: &[u64], k: usize) -> Vec<Vec<u64>> {
    if k > xs.len() {
        return Vec::new();
    }
    if xs.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for mut s in subsets_at_least(&xs[1..], k.saturating_sub(1)) {
        s.insert(0, xs[0]);
        out.push(s);
    }
    out.extend(subsets_at_least(&xs[1..], k));
    out
}
