#![allow(dead_code)]

use std::collections::HashMap;

use std::sync::Arc;

use omegalarge::formula::{Pi03Sentence, SecondOrderParam, Theta};
use omegalarge::nat::nat;
use omegalarge::FinSet;

pub mod formulas;
pub mod minimal;

pub fn set(v: &[u64]) -> FinSet {
    FinSet::from_u64s(v).unwrap()
}

pub fn sentence(text: &str) -> Arc<dyn Theta> {
    Arc::new(Pi03Sentence::parse(text, nat(0), SecondOrderParam::empty()).unwrap())
}

pub fn interval(lo: u64, hi: u64) -> FinSet {
    FinSet::interval(lo, hi).unwrap()
}

/// Decides `ω^n·k`-largeness by trying every family of subsets, not just
/// contiguous ranges. Blocks are compared only by bitmask, so nothing about
/// minimal ends or superset closure is assumed.
pub struct SubsetOracle<'a> {
    xs: Vec<u64>,
    theta: Option<&'a dyn Theta>,
    single: HashMap<(usize, u32), bool>,
    chain: HashMap<(usize, usize, u32, Option<u64>), bool>,
}

impl<'a> SubsetOracle<'a> {
    /// `theta = None` means plain largeness.
    pub fn new(xs: &[u64], theta: Option<&'a dyn Theta>) -> Self {
        assert!(xs.len() <= 20);
        SubsetOracle {
            xs: xs.to_vec(),
            theta,
            single: HashMap::new(),
            chain: HashMap::new(),
        }
    }

    fn apart(&self, max_x: u64, min_y: u64, max_y: u64) -> bool {
        let Some(t) = self.theta else { return true };
        (0..max_x).all(|x| (0..min_y).any(|y| (0..max_y).all(|z| t.holds(x, y, z).unwrap())))
    }

    fn min_of(&self, mask: u32) -> u64 {
        self.xs[mask.trailing_zeros() as usize]
    }

    fn max_of(&self, mask: u32) -> u64 {
        self.xs[31 - mask.leading_zeros() as usize]
    }

    /// The subset `mask` is `ω^n`-large(T).
    pub fn large(&mut self, n: usize, mask: u32) -> bool {
        if mask == 0 {
            return false;
        }
        if n == 0 {
            return true;
        }
        if let Some(&v) = self.single.get(&(n, mask)) {
            return v;
        }
        let low = mask & mask.wrapping_neg();
        let k = self.min_of(mask) as usize;
        let v = self.family(n - 1, k, mask & !low, None);
        self.single.insert((n, mask), v);
        v
    }

    /// `mask` contains `k` apart `ω^n`-large(T) subsets, the first apart from
    /// a block ending at `prev_max`.
    pub fn family(&mut self, n: usize, k: usize, mask: u32, prev_max: Option<u64>) -> bool {
        if k == 0 {
            return true;
        }
        if (mask.count_ones() as usize) < k {
            return false;
        }
        let key = (n, k, mask, prev_max);
        if let Some(&v) = self.chain.get(&key) {
            return v;
        }
        let mut found = false;
        let mut s = mask;
        while s != 0 {
            if self.large(n, s) {
                let (lo, hi) = (self.min_of(s), self.max_of(s));
                let top_bit = 31 - s.leading_zeros();
                let above = mask & !((2u32 << top_bit) - 1);
                let next = self.theta.is_some().then_some(hi);
                if prev_max.is_none_or(|p| self.apart(p, lo, hi))
                    && self.family(n, k - 1, above, next)
                {
                    found = true;
                    break;
                }
            }
            s = (s - 1) & mask;
        }
        self.chain.insert(key, found);
        found
    }

    pub fn check(&mut self, n: usize, k: usize, mask: u32) -> bool {
        self.family(n, k, mask, None)
    }

    pub fn full(&self) -> u32 {
        ((1u64 << self.xs.len()) - 1) as u32
    }

    pub fn subset(&self, mask: u32) -> Vec<u64> {
        (0..self.xs.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| self.xs[i])
            .collect()
    }
}
