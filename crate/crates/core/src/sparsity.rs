//! Sparsity policies: each element must exceed a threshold of its predecessor.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::finset::FinSet;
use crate::nat::{nat, Nat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SparsityPolicy {
    /// `4^x < y`
    Exp4,
    /// `x*x < y`
    Poly2,
    /// `2*x < y`
    Linear,
    None,
}

impl SparsityPolicy {
    pub const ALL: [SparsityPolicy; 4] = [Self::Exp4, Self::Poly2, Self::Linear, Self::None];

    pub fn name(self) -> &'static str {
        match self {
            Self::Exp4 => "exp4",
            Self::Poly2 => "poly2",
            Self::Linear => "linear",
            Self::None => "none",
        }
    }

    /// True iff `threshold(x) < y`.
    pub fn separates(self, x: &Nat, y: &Nat) -> bool {
        match self {
            Self::Exp4 => {
                // 4^x = 2^(2x) already reaches 2^bits(y) > y once 2x >= bits(y).
                let bits = nat(y.bits());
                if x * 2u32 >= bits {
                    return false;
                }
                let e = u32::try_from(x).expect("exponent bounded by bit length");
                crate::nat::pow(&nat(4), e) < *y
            }
            Self::Poly2 => x * x < *y,
            Self::Linear => x * 2u32 < *y,
            Self::None => true,
        }
    }

    /// The threshold value itself; `None` when it is too big to write down.
    pub fn threshold(self, x: &Nat) -> Option<Nat> {
        match self {
            Self::Exp4 => u32::try_from(x)
                .ok()
                .filter(|&e| e <= 1 << 20)
                .map(|e| crate::nat::pow(&nat(4), e)),
            Self::Poly2 => Some(x * x),
            Self::Linear => Some(x * 2u32),
            Self::None => Some(nat(0)),
        }
    }
}

impl fmt::Display for SparsityPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SparsityPolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Self::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Unknown {
                kind: "sparsity policy",
                name: s.to_string(),
            })
    }
}

/// Adjacent pairs suffice because every threshold is increasing.
pub fn is_sparse(x: &FinSet, policy: SparsityPolicy) -> bool {
    x.elements()
        .windows(2)
        .all(|w| policy.separates(&w[0], &w[1]))
}

/// Index of the first adjacent pair violating the policy, for diagnostics.
pub fn first_violation(x: &FinSet, policy: SparsityPolicy) -> Option<usize> {
    x.elements()
        .windows(2)
        .position(|w| !policy.separates(&w[0], &w[1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nat::pow;
    use proptest::prelude::*;

    #[test]
    fn exp4_examples() {
        let big = pow(&nat(4), 65) + nat(1);
        let x = FinSet::from_nats(vec![nat(3), nat(65), big]).unwrap();
        assert!(is_sparse(&x, SparsityPolicy::Exp4));
        let y = FinSet::from_u64s(&[3, 4]).unwrap();
        assert!(!is_sparse(&y, SparsityPolicy::Exp4));
        let exact = FinSet::from_nats(vec![nat(3), nat(64)]).unwrap();
        assert!(!is_sparse(&exact, SparsityPolicy::Exp4));
    }

    #[test]
    fn singletons_always_sparse() {
        let s = FinSet::from_u64s(&[1000]).unwrap();
        for p in SparsityPolicy::ALL {
            assert!(is_sparse(&s, p));
        }
    }

    #[test]
    fn names_round_trip() {
        for p in SparsityPolicy::ALL {
            assert_eq!(p.name().parse::<SparsityPolicy>().unwrap(), p);
        }
        assert!("cubic".parse::<SparsityPolicy>().is_err());
    }

    fn brute_sparse(v: &[u64], p: SparsityPolicy) -> bool {
        // All pairs, not just adjacent ones.
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                let ok = match p {
                    SparsityPolicy::Exp4 => v[i] < 32 && 4u64.pow(v[i] as u32) < v[j],
                    SparsityPolicy::Poly2 => v[i] * v[i] < v[j],
                    SparsityPolicy::Linear => 2 * v[i] < v[j],
                    SparsityPolicy::None => true,
                };
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    proptest! {
        #[test]
        fn stricter_implies_weaker(mut v in proptest::collection::vec(3u64..5000, 0..6)) {
            v.sort();
            v.dedup();
            let x = FinSet::from_u64s(&v).unwrap();
            let r: Vec<bool> = SparsityPolicy::ALL.iter().map(|&p| is_sparse(&x, p)).collect();
            for i in 0..3 {
                prop_assert!(!r[i] || r[i + 1]);
            }
        }

        #[test]
        fn adjacent_check_matches_all_pairs(mut v in proptest::collection::vec(3u64..200_000, 0..6)) {
            v.sort();
            v.dedup();
            let x = FinSet::from_u64s(&v).unwrap();
            for p in SparsityPolicy::ALL {
                prop_assert_eq!(is_sparse(&x, p), brute_sparse(&v, p));
            }
        }
    }
}
