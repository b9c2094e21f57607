use std::collections::BTreeMap;

use num_bigint::BigUint;
use rand::Rng;

use omegalarge::formula::{Formula, Quantifier, Term};

pub const FREE: [&str; 3] = ["x", "y", "z"];

/// Random formula with at most `budget` nodes (terms included).
pub fn random_formula<R: Rng>(rng: &mut R, budget: usize, scope: &mut Vec<String>) -> Formula {
    let budget = budget.max(1);
    if budget < 3 {
        return if rng.gen_bool(0.5) {
            Formula::True
        } else {
            Formula::False
        };
    }
    match rng.gen_range(0..7) {
        0 if budget >= 4 => Formula::negate(random_formula(rng, budget - 1, scope)),
        1 | 2 if budget >= 7 => {
            let left = rng.gen_range(3..=budget - 4);
            let l = random_formula(rng, left, scope);
            let r = random_formula(rng, budget - 1 - l.size(), scope);
            match rng.gen_range(0..3) {
                0 => Formula::and(l, r),
                1 => Formula::or(l, r),
                _ => Formula::implies(l, r),
            }
        }
        3 if budget >= 5 => {
            let v = format!("v{}", scope.len());
            let bound = random_term(rng, 1, scope);
            scope.push(v.clone());
            let body = random_formula(rng, budget - 1 - bound.size(), scope);
            scope.pop();
            let q = if rng.gen_bool(0.5) {
                Quantifier::Forall
            } else {
                Quantifier::Exists
            };
            Formula::Quant(q, v, bound, Box::new(body))
        }
        4 if budget >= 2 => Formula::In(random_term(rng, budget - 1, scope)),
        _ => {
            let left = rng.gen_range(1..=(budget - 1) / 2);
            let l = random_term(rng, left, scope);
            let r = random_term(rng, budget - 1 - l.size(), scope);
            match rng.gen_range(0..3) {
                0 => Formula::Lt(l, r),
                1 => Formula::Le(l, r),
                _ => Formula::Eq(l, r),
            }
        }
    }
}

pub fn random_term<R: Rng>(rng: &mut R, budget: usize, scope: &[String]) -> Term {
    if budget < 3 || rng.gen_bool(0.4) {
        if budget >= 2 && rng.gen_bool(0.2) {
            let base = random_term(rng, 1, scope);
            return Term::Pow(Box::new(base), rng.gen_range(0..3));
        }
        return match rng.gen_range(0..4) {
            0 => Term::num(rng.gen_range(0..5)),
            1 => Term::ConstA,
            _ => {
                let names: Vec<&str> = FREE
                    .iter()
                    .copied()
                    .chain(scope.iter().map(String::as_str))
                    .collect();
                Term::var(names[rng.gen_range(0..names.len())])
            }
        };
    }
    let left = rng.gen_range(1..=budget - 2);
    let l = random_term(rng, left, scope);
    let r = random_term(rng, budget - 1 - l.size(), scope);
    if rng.gen_bool(0.5) {
        Term::Add(Box::new(l), Box::new(r))
    } else {
        Term::Mul(Box::new(l), Box::new(r))
    }
}

/// Straight recursive evaluation with bignums and a map environment.
pub fn naive_eval(
    f: &Formula,
    env: &mut BTreeMap<String, BigUint>,
    a: &BigUint,
    set: &[bool],
) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Lt(l, r) => naive_term(l, env, a) < naive_term(r, env, a),
        Formula::Le(l, r) => naive_term(l, env, a) <= naive_term(r, env, a),
        Formula::Eq(l, r) => naive_term(l, env, a) == naive_term(r, env, a),
        Formula::In(t) => {
            let v = naive_term(t, env, a);
            set.iter()
                .enumerate()
                .any(|(i, &bit)| bit && BigUint::from(i) == v)
        }
        Formula::Not(g) => !naive_eval(g, env, a, set),
        Formula::And(l, r) => naive_eval(l, env, a, set) && naive_eval(r, env, a, set),
        Formula::Or(l, r) => naive_eval(l, env, a, set) || naive_eval(r, env, a, set),
        Formula::Implies(l, r) => !naive_eval(l, env, a, set) || naive_eval(r, env, a, set),
        Formula::Quant(q, v, bound, body) => {
            let b = naive_term(bound, env, a);
            let saved = env.get(v).cloned();
            let mut i = BigUint::from(0u32);
            let mut result = *q == Quantifier::Forall;
            while i < b {
                env.insert(v.clone(), i.clone());
                let r = naive_eval(body, env, a, set);
                if r != result {
                    result = r;
                    break;
                }
                i += 1u32;
            }
            match saved {
                Some(s) => env.insert(v.clone(), s),
                None => env.remove(v),
            };
            result
        }
    }
}

fn naive_term(t: &Term, env: &BTreeMap<String, BigUint>, a: &BigUint) -> BigUint {
    match t {
        Term::Num(n) => n.clone(),
        Term::ConstA => a.clone(),
        Term::Var(v) => env[v].clone(),
        Term::Add(l, r) => naive_term(l, env, a) + naive_term(r, env, a),
        Term::Mul(l, r) => naive_term(l, env, a) * naive_term(r, env, a),
        Term::Pow(b, e) => naive_term(b, env, a).pow(*e),
    }
}
