//! Exponents of the explicit largeness bounds, computed exactly.

use std::fmt::Write;

use crate::nat::{nat, pow, Nat};

/// Exponents `e` such that `ω^e`-largeness(T) suffices at parameter `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundsRow {
    pub n: u64,
    /// Homogeneous sets for colorings of singletons: `2n`.
    pub pigeonhole: Nat,
    /// The grouping chain `2n`, `4n+1`, `16n+5`, `16^k·(n+1)`.
    pub grouping_chain: [Nat; 4],
    /// Transitive subsets of pair colorings: `(16^6+1)^n`.
    pub em: Nat,
    /// Homogeneous subsets of transitive colorings: `4n+4`.
    pub ads: Nat,
    /// Homogeneous subsets of pair colorings: `(16^6+1)^(4n+4)`.
    pub rt22: Nat,
    /// Largest exponent with a defeating coloring: `2n-1`, absent for `n = 0`.
    pub lower: Option<Nat>,
}

pub const EM_BASE: u64 = 16_777_217;

pub fn bounds_row(n: u64, k: u32) -> BoundsRow {
    let big_n = nat(n);
    BoundsRow {
        n,
        pigeonhole: nat(2 * n),
        grouping_chain: [
            nat(2 * n),
            nat(4 * n + 1),
            nat(16 * n + 5),
            pow(&nat(16), k) * (big_n.clone() + 1u32),
        ],
        em: pow(&nat(EM_BASE), n as u32),
        ads: nat(4 * n + 4),
        rt22: pow(&nat(EM_BASE), (4 * n + 4) as u32),
        lower: (n > 0).then(|| nat(2 * n - 1)),
    }
}

pub fn bounds_table(n_max: u64, k: u32) -> Vec<BoundsRow> {
    (0..=n_max).map(|n| bounds_row(n, k)).collect()
}

pub const TSV_HEADER: &str = "n\tpigeonhole\tgrouping_2n\tgrouping_4n+1\tgrouping_16n+5\tgrouping_16^k(n+1)\tem\tads\trt22\tlower";

pub fn to_tsv(rows: &[BoundsRow]) -> String {
    let mut out = String::from(TSV_HEADER);
    out.push('\n');
    for r in rows {
        let g = &r.grouping_chain;
        let lower = r.lower.as_ref().map_or("-".to_string(), Nat::to_string);
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.n, r.pigeonhole, g[0], g[1], g[2], g[3], r.em, r.ads, r.rt22, lower
        )
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_rows() {
        let one = bounds_row(1, 1);
        assert_eq!(one.ads, nat(8));
        assert_eq!(one.lower, Some(nat(1)));
        assert_eq!(one.pigeonhole, nat(2));
        assert_eq!(one.em, nat(16777217));
        let zero = bounds_row(0, 1);
        assert_eq!(zero.em, nat(1));
        assert_eq!(zero.rt22, pow(&nat(16777217), 4));
        assert_eq!(zero.lower, None);
    }

    #[test]
    fn tsv_shape() {
        let t = to_tsv(&bounds_table(3, 2));
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 5);
        assert!(lines.iter().all(|l| l.split('\t').count() == 10));
        assert!(lines[1].ends_with("\t-"));
    }
}
