//! Colorings of increasing tuples stored as explicit tables.
//!
//! Tuples are ranked in lexicographic order of their index sequences, so a
//! coloring of arity `n` over a domain of size `N` is a flat vector of length
//! `C(N, n)`.

use itertools::Itertools;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finset::FinSet;
use crate::nat::{nat, parse_nat, Nat};

pub type Color = u32;

/// Hard cap on table length, so a typo in the arity cannot exhaust memory.
pub const MAX_TABLE_LEN: u128 = 1 << 26;

pub fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Lexicographic rank of a strictly increasing index tuple among all
/// `tuple.len()`-subsets of `0..n`.
pub fn tuple_rank(n: usize, tuple: &[usize]) -> usize {
    let r = tuple.len();
    let mut rank: u128 = 0;
    let mut prev: isize = -1;
    for (j, &i) in tuple.iter().enumerate() {
        let rest = r - j;
        // Tuples whose j-th entry lies strictly between prev and i come first.
        let start = (n as isize - 1 - prev) as usize;
        rank += binom(start, rest) - binom(n - i, rest);
        prev = i as isize;
    }
    rank as usize
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoringTable {
    domain: FinSet,
    arity: usize,
    colors: Color,
    table: Vec<Color>,
}

#[derive(Serialize, Deserialize)]
struct ColoringJson {
    domain: Vec<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    floor: Option<String>,
    arity: usize,
    colors: Color,
    table: Vec<Color>,
}

impl ColoringTable {
    pub fn new(domain: FinSet, arity: usize, colors: Color, table: Vec<Color>) -> Result<Self> {
        let want = binom(domain.len(), arity);
        if table.len() as u128 != want {
            return Err(Error::Domain(format!(
                "table has {} entries, expected C({}, {}) = {want}",
                table.len(),
                domain.len(),
                arity
            )));
        }
        if let Some(pos) = table.iter().position(|&c| c >= colors) {
            return Err(Error::Domain(format!(
                "entry {pos} has color {} but only {colors} colors",
                table[pos]
            )));
        }
        Ok(ColoringTable {
            domain,
            arity,
            colors,
            table,
        })
    }

    /// Fill the table by calling `f` on every increasing index tuple, in order.
    pub fn from_fn(
        domain: FinSet,
        arity: usize,
        colors: Color,
        mut f: impl FnMut(&[usize]) -> Color,
    ) -> Result<Self> {
        let len = binom(domain.len(), arity);
        if len > MAX_TABLE_LEN {
            return Err(Error::TooLarge(format!(
                "coloring table with {len} entries"
            )));
        }
        let mut table = Vec::with_capacity(len as usize);
        if arity == 0 {
            table.push(f(&[]));
        } else {
            for t in (0..domain.len()).combinations(arity) {
                table.push(f(&t));
            }
        }
        Self::new(domain, arity, colors, table)
    }

    pub fn constant(domain: FinSet, arity: usize, colors: Color, c: Color) -> Result<Self> {
        Self::from_fn(domain, arity, colors, |_| c)
    }

    pub fn random<R: Rng + ?Sized>(
        domain: FinSet,
        arity: usize,
        colors: Color,
        rng: &mut R,
    ) -> Result<Self> {
        Self::from_fn(domain, arity, colors, |_| rng.gen_range(0..colors))
    }

    pub fn domain(&self) -> &FinSet {
        &self.domain
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn colors(&self) -> Color {
        self.colors
    }

    pub fn table(&self) -> &[Color] {
        &self.table
    }

    /// Color of an increasing tuple of domain indices.
    pub fn color_idx(&self, tuple: &[usize]) -> Color {
        debug_assert_eq!(tuple.len(), self.arity);
        if self.arity == 2 {
            let (i, j, n) = (tuple[0], tuple[1], self.domain.len());
            return self.table[i * (2 * n - i - 1) / 2 + (j - i - 1)];
        }
        self.table[tuple_rank(self.domain.len(), tuple)]
    }

    /// Color of an increasing tuple of domain values.
    pub fn color(&self, tuple: &[Nat]) -> Result<Color> {
        let idx = self.indices_of(tuple)?;
        if idx.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("tuple not strictly increasing".into()));
        }
        Ok(self.color_idx(&idx))
    }

    fn indices_of(&self, values: &[Nat]) -> Result<Vec<usize>> {
        values
            .iter()
            .map(|v| {
                self.domain
                    .index_of(v)
                    .ok_or_else(|| Error::Domain(format!("{v} is not in the domain")))
            })
            .collect()
    }

    /// The reindexed coloring `f_G` on `{0, ..., |G|-1}`.
    pub fn restrict(&self, g: &FinSet) -> Result<ColoringTable> {
        let idx = self.indices_of(g.elements())?;
        Ok(self.restrict_idx(&idx))
    }

    /// [`ColoringTable::restrict`] for an increasing list of domain indices.
    pub fn restrict_idx(&self, idx: &[usize]) -> ColoringTable {
        let mut buf = vec![0usize; self.arity];
        Self::from_fn(
            FinSet::index_domain(idx.len()),
            self.arity,
            self.colors,
            |t| {
                for (b, &i) in buf.iter_mut().zip(t) {
                    *b = idx[i];
                }
                self.color_idx(&buf)
            },
        )
        .expect("restriction of a valid table is valid")
    }

    /// The same coloring over a subset of the domain, keeping raw values.
    pub fn subcoloring(&self, g: &FinSet) -> Result<ColoringTable> {
        let r = self.restrict(g)?;
        Ok(ColoringTable {
            domain: g.clone(),
            ..r
        })
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let j = ColoringJson {
            domain: self
                .domain
                .to_json_value()
                .as_array()
                .cloned()
                .unwrap_or_default(),
            floor: (*self.domain.floor() != nat(crate::finset::DEFAULT_FLOOR))
                .then(|| self.domain.floor().to_string()),
            arity: self.arity,
            colors: self.colors,
            table: self.table.clone(),
        };
        serde_json::to_value(j).expect("coloring serializes")
    }

    pub fn from_json_str(text: &str) -> Result<ColoringTable> {
        let j: ColoringJson = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
        let floor = match &j.floor {
            Some(s) => parse_nat(s)?,
            None => nat(crate::finset::DEFAULT_FLOOR),
        };
        let elements = j
            .domain
            .iter()
            .map(|v| match v {
                serde_json::Value::String(s) => parse_nat(s),
                serde_json::Value::Number(n) if n.is_u64() => Ok(nat(n.as_u64().unwrap())),
                other => Err(Error::Parse(format!(
                    "domain entry {other} is not a natural"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(FinSet::new(elements, floor)?, j.arity, j.colors, j.table)
    }
}

/// Whether every tuple inside `idx` (domain indices) gets the same color.
pub fn is_homogeneous_idx(f: &ColoringTable, idx: &[usize]) -> bool {
    let mut seen: Option<Color> = None;
    let mut buf = vec![0usize; f.arity()];
    for t in (0..idx.len()).combinations(f.arity()) {
        for (b, &i) in buf.iter_mut().zip(&t) {
            *b = idx[i];
        }
        let c = f.color_idx(&buf);
        match seen {
            None => seen = Some(c),
            Some(s) if s != c => return false,
            _ => {}
        }
    }
    true
}

/// Arity-2 transitivity: `f(x,y) = f(y,z) = i` implies `f(x,z) = i`.
pub fn is_transitive_idx(f: &ColoringTable, idx: &[usize]) -> bool {
    assert_eq!(f.arity(), 2, "transitivity is defined for pairs");
    let m = idx.len();
    for a in 0..m {
        for b in a + 1..m {
            let ab = f.color_idx(&[idx[a], idx[b]]);
            for c in b + 1..m {
                if f.color_idx(&[idx[b], idx[c]]) == ab && f.color_idx(&[idx[a], idx[c]]) != ab {
                    return false;
                }
            }
        }
    }
    true
}
