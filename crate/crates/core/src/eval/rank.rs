// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::{Error, Result};

/// Critical values of the Studentized range divided by sqrt(2), alpha = 0.05,
/// for k = 2..=10 compared methods.
pub const NEMENYI_Q05: [f64; 9] = [1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164];

pub fn nemenyi_q05(k: usize) -> Option<f64> {
    (2..=10).contains(&k).then(|| NEMENYI_Q05[k - 2])
}

/// `q * sqrt(k (k + 1) / (6 N))`.
pub fn critical_difference(q: f64, k: usize, n: usize) -> f64 {
    q * ((k * (k + 1)) as f64 / (6 * n) as f64).sqrt()
}

/// Friedman statistic from average ranks.
pub fn friedman_q(average_ranks: &[f64], n: usize) -> f64 {
    let k = average_ranks.len() as f64;
    let sum_sq: f64 = average_ranks.iter().map(|r| r * r).sum();
    12.0 * n as f64 / (k * (k + 1.0)) * (sum_sq - k * (k + 1.0) * (k + 1.0) / 4.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankReport {
    pub methods: Vec<String>,
    /// `ranks[i][j]`: rank of method `j` on dataset `i`, 1 is best.
    pub ranks: Vec<Vec<f64>>,
    pub average_ranks: Vec<f64>,
    pub friedman_q: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
    /// `None` when k is outside the built-in table.
    pub q_alpha: Option<f64>,
    pub nemenyi_cd: Option<f64>,
    pub k: usize,
    pub n: usize,
}

/// Ranks one row, higher value first, ties sharing their average rank.
pub fn rank_row(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        let avg = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = avg;
        }
        start = end;
    }
    ranks
}

/// Friedman test and Nemenyi critical difference at alpha = 0.05 over a
/// dataset-by-method table where higher is better.
pub fn rank_methods(methods: &[String], table: &[Vec<f64>]) -> Result<RankReport> {
    let k = methods.len();
    let n = table.len();
    if k < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 methods, got {k}")));
    }
    if n < 1 {
        return Err(Error::InvalidArgument("need at least 1 dataset".into()));
    }
    for (i, row) in table.iter().enumerate() {
        if row.len() != k {
            return Err(Error::InvalidArgument(format!(
                "dataset {i} has {} entries for {k} methods",
                row.len()
            )));
        }
        if row.iter().any(|v| v.is_nan()) {
            return Err(Error::InvalidArgument(format!("dataset {i} has a missing entry")));
        }
    }
    let ranks: Vec<Vec<f64>> = table.iter().map(|row| rank_row(row)).collect();
    let average_ranks: Vec<f64> = (0..k)
        .map(|j| ranks.iter().map(|r| r[j]).sum::<f64>() / n as f64)
        .collect();
    let q = friedman_q(&average_ranks, n);
    let df = k - 1;
    let p_value = ChiSquared::new(df as f64).map(|d| d.sf(q.max(0.0))).unwrap_or(f64::NAN);
    let q_alpha = nemenyi_q05(k);
    Ok(RankReport {
        methods: methods.to_vec(),
        ranks,
        average_ranks,
        friedman_q: q,
        degrees_of_freedom: df,
        p_value,
        q_alpha,
        nemenyi_cd: q_alpha.map(|q| critical_difference(q, k, n)),
        k,
        n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(k: usize) -> Vec<String> {
        (0..k).map(|i| format!("m{i}")).collect()
    }

    #[test]
    fn ranks_with_ties() {
        assert_eq!(rank_row(&[0.9, 0.5, 0.9, 0.1]), vec![1.5, 3.0, 1.5, 4.0]);
    }

    #[test]
    fn consistent_ordering_gives_q_4() {
        let table = vec![vec![0.9, 0.8, 0.7], vec![0.6, 0.5, 0.4]];
        let r = rank_methods(&names(3), &table).unwrap();
        assert_eq!(r.average_ranks, vec![1.0, 2.0, 3.0]);
        assert_eq!(r.friedman_q, 4.0);
        assert_eq!(r.degrees_of_freedom, 2);
        assert!((r.p_value - (-2.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn all_tied() {
        let r = rank_methods(&names(4), &vec![vec![0.5; 4]; 3]).unwrap();
        assert_eq!(r.average_ranks, vec![2.5; 4]);
        assert_eq!(r.friedman_q, 0.0);
    }

    #[test]
    fn degenerate_tables() {
        assert!(rank_methods(&names(1), &[vec![1.0]]).is_err());
        assert!(rank_methods(&names(2), &[]).is_err());
        assert!(rank_methods(&names(2), &[vec![1.0]]).is_err());
        assert!(rank_methods(&names(2), &[vec![1.0, f64::NAN]]).is_err());
    }

    #[test]
    fn cd_for_eight_methods() {
        let cd = critical_difference(nemenyi_q05(8).unwrap(), 8, 66);
        assert!((cd - 3.031 * (72.0f64 / 396.0).sqrt()).abs() < 1e-12);
        assert_eq!(nemenyi_q05(11), None);
    }
}
