// SPDX-License-Identifier: Apache-2.0

use gargaml::eval::{auc_pr, auc_roc, compute_metrics, critical_difference, rank_methods, rank_row, NEMENYI_Q05};
use proptest::prelude::*;

/// Share of (positive, negative) pairs ordered correctly, ties counting half.
fn pairwise_auc(s: &[f64], y: &[bool]) -> f64 {
    let mut wins = 0.0;
    let mut pairs = 0.0;
    for i in (0..s.len()).filter(|&i| y[i]) {
        for j in (0..s.len()).filter(|&j| !y[j]) {
            pairs += 1.0;
            wins += if s[i] > s[j] {
                1.0
            } else if s[i] == s[j] {
                0.5
            } else {
                0.0
            };
        }
    }
    wins / pairs
}

/// Average precision stepping through each distinct threshold.
fn stepwise_ap(s: &[f64], y: &[bool]) -> f64 {
    let total = y.iter().filter(|&&b| b).count() as f64;
    let mut thresholds: Vec<f64> = s.to_vec();
    thresholds.sort_by(|a, b| b.total_cmp(a));
    thresholds.dedup();
    let mut ap = 0.0;
    let mut prev_recall = 0.0;
    for t in thresholds {
        let tp = (0..s.len()).filter(|&i| s[i] >= t && y[i]).count() as f64;
        let pp = (0..s.len()).filter(|&i| s[i] >= t).count() as f64;
        let recall = tp / total;
        ap += (recall - prev_recall) * tp / pp;
        prev_recall = recall;
    }
    ap
}

fn scored() -> impl Strategy<Value = (Vec<f64>, Vec<bool>)> {
    (2usize..=50)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(prop::sample::select(vec![0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0, -1.0]), n),
                prop::collection::vec(any::<bool>(), n),
            )
        })
        .prop_filter("both classes", |(_, y)| y.iter().any(|&b| b) && y.iter().any(|&b| !b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn auc_roc_matches_pairwise_count((s, y) in scored()) {
        prop_assert_eq!(auc_roc(&s, &y), pairwise_auc(&s, &y));
    }

    #[test]
    fn auc_pr_matches_stepwise_oracle((s, y) in scored()) {
        prop_assert!((auc_pr(&s, &y) - stepwise_ap(&s, &y)).abs() < 1e-12);
    }

    #[test]
    fn negated_scores_complement_auc(y in prop::collection::vec(any::<bool>(), 2..50), seed in any::<u64>()) {
        prop_assume!(y.iter().any(|&b| b) && y.iter().any(|&b| !b));
        // distinct scores
        let s: Vec<f64> = (0..y.len()).map(|i| ((i as u64 * 2654435761 + seed) % 1_000_003) as f64 + i as f64 * 1e-7).collect();
        let neg: Vec<f64> = s.iter().map(|v| -v).collect();
        prop_assert!((auc_roc(&s, &y) - (1.0 - auc_roc(&neg, &y))).abs() < 1e-12);
    }

    #[test]
    fn constant_scores_give_base_rate((_, y) in scored(), c in -1.0f64..1.0) {
        let s = vec![c; y.len()];
        let rate = y.iter().filter(|&&b| b).count() as f64 / y.len() as f64;
        prop_assert!((auc_pr(&s, &y) - rate).abs() < 1e-12);
        prop_assert_eq!(auc_roc(&s, &y), 0.5);
    }

    #[test]
    fn f1_is_harmonic_mean((s, y) in scored(), t in prop::sample::select(vec![0.0, 0.5, 0.9])) {
        let m = compute_metrics(&s, &y, t);
        let predicted: Vec<bool> = s.iter().map(|&v| v > t).collect();
        let tp = (0..y.len()).filter(|&i| predicted[i] && y[i]).count() as f64;
        let pp = predicted.iter().filter(|&&b| b).count() as f64;
        let ap = y.iter().filter(|&&b| b).count() as f64;
        prop_assert_eq!(m.no_positive_predictions, pp == 0.0);
        prop_assert_eq!(m.precision, if pp == 0.0 { 0.0 } else { tp / pp });
        prop_assert_eq!(m.recall, tp / ap);
        if m.precision == 0.0 || m.recall == 0.0 {
            prop_assert_eq!(m.f1, 0.0);
        } else {
            let h = 2.0 * m.precision * m.recall / (m.precision + m.recall);
            prop_assert!((m.f1 - h).abs() < 1e-12);
        }
    }

    #[test]
    fn rank_rows_sum_to_triangle(row in prop::collection::vec(prop::sample::select(vec![0.1, 0.5, 0.5, 0.9, 1.0]), 2..12)) {
        let k = row.len() as f64;
        let r = rank_row(&row);
        prop_assert_eq!(r.iter().sum::<f64>(), k * (k + 1.0) / 2.0);
        for i in 0..row.len() {
            for j in 0..row.len() {
                if row[i] > row[j] {
                    prop_assert!(r[i] < r[j]);
                }
            }
        }
    }
}

#[test]
fn hand_example_auc() {
    let s = [0.9, 0.4, 0.6, 0.1];
    let y = [true, true, false, false];
    assert_eq!(auc_roc(&s, &y), 0.75);
}

#[test]
fn friedman_hand_cases() {
    let names: Vec<String> = ["a", "b", "c"].map(String::from).to_vec();
    let r = rank_methods(&names, &[vec![0.9, 0.8, 0.7], vec![0.6, 0.5, 0.4]]).unwrap();
    assert_eq!(r.friedman_q, 4.0);
    let r = rank_methods(&names, &[vec![0.3; 3], vec![0.7; 3]]).unwrap();
    assert_eq!(r.friedman_q, 0.0);
    assert_eq!(r.p_value, 1.0);

    let names: Vec<String> = (0..8).map(|i| i.to_string()).collect();
    let table: Vec<Vec<f64>> = (0..66)
        .map(|i| (0..8).map(|j| ((i * 7 + j * 3) % 11) as f64).collect())
        .collect();
    let r = rank_methods(&names, &table).unwrap();
    let direct = 3.031 * (8.0f64 * 9.0 / (6.0 * 66.0)).sqrt();
    assert!((r.nemenyi_cd.unwrap() - direct).abs() < 1e-9);
    assert_eq!(critical_difference(NEMENYI_Q05[6], 8, 66), r.nemenyi_cd.unwrap());
}
