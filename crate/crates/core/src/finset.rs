//! Finite strictly increasing sets of naturals with an admissible floor.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nat::{nat, parse_nat, serde_dec, serde_dec_vec, Nat};

pub const DEFAULT_FLOOR: u64 = 3;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinSet {
    #[serde(with = "serde_dec_vec")]
    elements: Vec<Nat>,
    #[serde(with = "serde_dec")]
    floor: Nat,
}

/// Floor to use when a sentence with constant `a` is in play.
pub fn floor_for(a: &Nat) -> Nat {
    std::cmp::max(nat(DEFAULT_FLOOR), a.clone())
}

impl FinSet {
    pub fn new(elements: Vec<Nat>, floor: Nat) -> Result<Self> {
        for w in elements.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Domain(format!(
                    "elements not strictly increasing at {} >= {}",
                    w[0], w[1]
                )));
            }
        }
        if let Some(m) = elements.first() {
            if *m < floor {
                return Err(Error::Domain(format!("minimum {m} below floor {floor}")));
            }
        }
        Ok(FinSet { elements, floor })
    }

    /// Build with the default floor of 3.
    pub fn from_nats(elements: Vec<Nat>) -> Result<Self> {
        Self::new(elements, nat(DEFAULT_FLOOR))
    }

    pub fn from_u64s(values: &[u64]) -> Result<Self> {
        Self::from_nats(values.iter().map(|&v| nat(v)).collect())
    }

    /// Like [`FinSet::from_u64s`] but with an explicit floor.
    pub fn from_u64s_floor(values: &[u64], floor: u64) -> Result<Self> {
        Self::new(values.iter().map(|&v| nat(v)).collect(), nat(floor))
    }

    /// The interval `[lo, hi]` with the default floor.
    pub fn interval(lo: u64, hi: u64) -> Result<Self> {
        Self::from_nats((lo..=hi).map(nat).collect())
    }

    /// `{0, ..., len-1}` with floor 0, the index domain of a restricted coloring.
    pub fn index_domain(len: usize) -> Self {
        FinSet {
            elements: (0..len as u64).map(nat).collect(),
            floor: nat(0),
        }
    }

    pub fn empty() -> Self {
        FinSet {
            elements: Vec::new(),
            floor: nat(DEFAULT_FLOOR),
        }
    }

    pub fn elements(&self) -> &[Nat] {
        &self.elements
    }

    pub fn into_elements(self) -> Vec<Nat> {
        self.elements
    }

    pub fn floor(&self) -> &Nat {
        &self.floor
    }

    pub fn with_floor(self, floor: Nat) -> Result<Self> {
        Self::new(self.elements, floor)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn min(&self) -> Option<&Nat> {
        self.elements.first()
    }

    pub fn max(&self) -> Option<&Nat> {
        self.elements.last()
    }

    pub fn get(&self, i: usize) -> &Nat {
        &self.elements[i]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Nat> {
        self.elements.iter()
    }

    pub fn index_of(&self, v: &Nat) -> Option<usize> {
        self.elements.binary_search(v).ok()
    }

    pub fn contains(&self, v: &Nat) -> bool {
        self.index_of(v).is_some()
    }

    pub fn is_subset_of(&self, other: &FinSet) -> bool {
        self.elements.iter().all(|v| other.contains(v))
    }

    /// Elements at indices `lo..=hi`, keeping the floor.
    pub fn range(&self, lo: usize, hi: usize) -> FinSet {
        FinSet {
            elements: self.elements[lo..=hi].to_vec(),
            floor: self.floor.clone(),
        }
    }

    /// Subset picked by indices (which must be increasing), keeping the floor.
    pub fn pick(&self, idx: &[usize]) -> FinSet {
        FinSet {
            elements: idx.iter().map(|&i| self.elements[i].clone()).collect(),
            floor: self.floor.clone(),
        }
    }

    /// Elements satisfying `keep`, same floor.
    pub fn filter(&self, mut keep: impl FnMut(&Nat) -> bool) -> FinSet {
        FinSet {
            elements: self.elements.iter().filter(|v| keep(v)).cloned().collect(),
            floor: self.floor.clone(),
        }
    }

    /// Union of sets, which must be pairwise disjoint; result is re-sorted.
    pub fn union_of(parts: &[FinSet], floor: Nat) -> Result<FinSet> {
        let mut all: Vec<Nat> = parts
            .iter()
            .flat_map(|p| p.elements.iter().cloned())
            .collect();
        all.sort();
        FinSet::new(all, floor)
    }

    /// Small-value view for enumeration; `None` if some element exceeds `u64`.
    pub fn to_u64s(&self) -> Option<Vec<u64>> {
        self.elements.iter().map(crate::nat::to_u64).collect()
    }

    /// Parse either a JSON array of decimal strings or one numeral per line.
    pub fn parse_text(text: &str, floor: Nat) -> Result<FinSet> {
        let trimmed = text.trim_start();
        let elements = if trimmed.starts_with('[') {
            let raw: Vec<serde_json::Value> = serde_json::from_str(text).map_err(|e| {
                Error::Parse(format!("line {} column {}: {e}", e.line(), e.column()))
            })?;
            raw.into_iter()
                .enumerate()
                .map(|(i, v)| match v {
                    serde_json::Value::String(s) => parse_nat(&s),
                    serde_json::Value::Number(n) if n.is_u64() => Ok(nat(n.as_u64().unwrap())),
                    other => Err(Error::Parse(format!(
                        "entry {i}: expected decimal string, got {other}"
                    ))),
                })
                .collect::<Result<Vec<_>>>()?
        } else {
            let mut out = Vec::new();
            for (ln, line) in text.lines().enumerate() {
                let l = line.trim();
                if l.is_empty() || l.starts_with('#') {
                    continue;
                }
                out.push(parse_nat(l).map_err(|e| Error::Parse(format!("line {}: {e}", ln + 1)))?);
            }
            out
        };
        FinSet::new(elements, floor)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.elements
                .iter()
                .map(|v| serde_json::Value::String(v.to_string()))
                .collect(),
        )
    }

    pub fn to_lines(&self) -> String {
        let mut s = String::new();
        for v in &self.elements {
            s.push_str(&v.to_string());
            s.push('\n');
        }
        s
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        // Long runs of consecutive values print as ranges.
        let mut i = 0;
        let mut first = true;
        while i < self.elements.len() {
            let mut j = i;
            while j + 1 < self.elements.len() && self.elements[j + 1] == &self.elements[j] + 1u32 {
                j += 1;
            }
            if !first {
                write!(f, ",")?;
            }
            first = false;
            if j >= i + 2 {
                write!(f, "{}..{}", self.elements[i], self.elements[j])?;
            } else {
                for k in i..=j {
                    if k > i {
                        write!(f, ",")?;
                    }
                    write!(f, "{}", self.elements[k])?;
                }
            }
            i = j + 1;
        }
        write!(f, "}}")
    }
}
