use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::finset::FinSet;
use crate::formula::Theta;
use crate::nat::Nat;

/// `∀x < max_x ∃y < min_y ∀z < max_y θ(x, y, z)`.
pub fn apart_values(max_x: &Nat, min_y: &Nat, max_y: &Nat, theta: &dyn Theta) -> Result<bool> {
    if theta.is_top() {
        return Ok(true);
    }
    let small = |v: &Nat| {
        v.to_u64()
            .ok_or_else(|| Error::TooLarge(format!("apartness over values up to {v}")))
    };
    apart_u64(small(max_x)?, small(min_y)?, small(max_y)?, theta)
}

pub fn apart_u64(max_x: u64, min_y: u64, max_y: u64, theta: &dyn Theta) -> Result<bool> {
    if theta.is_top() {
        return Ok(true);
    }
    'x: for x in 0..max_x {
        'y: for y in 0..min_y {
            for z in 0..max_y {
                if !theta.holds(x, y, z)? {
                    continue 'y;
                }
            }
            continue 'x;
        }
        return Ok(false);
    }
    Ok(true)
}

/// Values up to which [`ApartTable`] tabulates instead of enumerating.
pub const TABLE_CAP: u64 = 2048;

/// Apartness queries with every `z` bound at most `cap`, answered from a lazily
/// filled table: for each `x`, the best run length `max_{y' < y} |{z : θ(x,y',z) for all smaller z}|`.
pub struct ApartTable<'a> {
    theta: &'a dyn Theta,
    cap: u64,
    rows: Vec<Vec<u32>>,
}

impl<'a> ApartTable<'a> {
    /// `None` when `cap` is too big to tabulate.
    pub fn new(theta: &'a dyn Theta, cap: u64) -> Option<Self> {
        (cap <= TABLE_CAP).then(|| ApartTable {
            theta,
            cap,
            rows: Vec::new(),
        })
    }

    fn run_length(&self, x: u64, y: u64) -> Result<u32> {
        let mut z = 0;
        while z < self.cap && self.theta.holds(x, y, z)? {
            z += 1;
        }
        Ok(z as u32)
    }

    fn best(&mut self, x: u64, min_y: u64) -> Result<u32> {
        let xi = x as usize;
        while self.rows.len() <= xi {
            self.rows.push(Vec::new());
        }
        while (self.rows[xi].len() as u64) < min_y {
            let y = self.rows[xi].len() as u64;
            let prev = self.rows[xi].last().copied().unwrap_or(0);
            let v = if prev as u64 >= self.cap {
                prev
            } else {
                prev.max(self.run_length(x, y)?)
            };
            self.rows[xi].push(v);
        }
        Ok(if min_y == 0 {
            0
        } else {
            self.rows[xi][min_y as usize - 1]
        })
    }

    pub fn apart(&mut self, max_x: u64, min_y: u64, max_y: u64) -> Result<bool> {
        if self.theta.is_top() {
            return Ok(true);
        }
        if max_x > self.cap || min_y > self.cap || max_y > self.cap {
            return apart_u64(max_x, min_y, max_y, self.theta);
        }
        if min_y == 0 {
            return Ok(max_x == 0);
        }
        for x in 0..max_x {
            if (self.best(x, min_y)? as u64) < max_y {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Whether `x < y` are `T`-apart. Both must be nonempty with `max x < min y`.
pub fn t_apart(x: &FinSet, y: &FinSet, theta: &dyn Theta) -> Result<bool> {
    let (Some(max_x), Some(min_y), Some(max_y)) = (x.max(), y.min(), y.max()) else {
        return Err(Error::Precondition("apartness needs nonempty sets".into()));
    };
    if max_x >= min_y {
        return Err(Error::Precondition(format!(
            "sets overlap or are out of order: max {max_x} >= min {min_y}"
        )));
    }
    apart_values(max_x, min_y, max_y, theta)
}
