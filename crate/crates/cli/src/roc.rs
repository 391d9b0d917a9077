//! ROC curves of a test from its p-values under the null and the alternative.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RocPoint {
    pub threshold: f64,
    pub sensitivity: f64,
    pub false_positive_rate: f64,
}

/// Rejecting when `p <= threshold`, swept over every observed p-value plus
/// both ends of `[0, 1]`.
pub fn roc_curve(null: &[f64], alternative: &[f64]) -> Vec<RocPoint> {
    let mut thresholds: Vec<f64> = null.iter().chain(alternative).copied().collect();
    thresholds.push(0.0);
    thresholds.push(1.0);
    thresholds.sort_by(f64::total_cmp);
    thresholds.dedup();
    let rate = |ps: &[f64], t: f64| ps.iter().filter(|&&p| p <= t).count() as f64 / ps.len() as f64;
    thresholds
        .into_iter()
        .map(|t| RocPoint {
            threshold: t,
            sensitivity: rate(alternative, t),
            false_positive_rate: rate(null, t),
        })
        .collect()
}

/// Probability that an alternative p-value is below a null one, ties
/// counting one half. Equals the trapezoid area under [`roc_curve`].
pub fn auc(null: &[f64], alternative: &[f64]) -> f64 {
    let mut sorted = null.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut total = 0.0;
    for &a in alternative {
        let below = sorted.partition_point(|&x| x < a);
        let upto = sorted.partition_point(|&x| x <= a);
        total += (sorted.len() - upto) as f64 + 0.5 * (upto - below) as f64;
    }
    total / (null.len() * alternative.len()) as f64
}

/// Fraction of p-values at or below `alpha`.
pub fn rejection_rate(p_values: &[f64], alpha: f64) -> f64 {
    p_values.iter().filter(|&&p| p <= alpha).count() as f64 / p_values.len() as f64
}

/// Counts of p-values in the ten bins `[0, 0.1), ..., [0.9, 1]`.
pub fn decile_counts(p_values: &[f64]) -> [usize; 10] {
    let mut bins = [0; 10];
    for &p in p_values {
        bins[((p * 10.0).floor() as usize).min(9)] += 1;
    }
    bins
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trapezoid(curve: &[RocPoint]) -> f64 {
        curve
            .windows(2)
            .map(|w| {
                (w[1].false_positive_rate - w[0].false_positive_rate) * (w[0].sensitivity + w[1].sensitivity) / 2.0
            })
            .sum()
    }

    #[test]
    fn perfect_and_useless_tests() {
        let null = [0.5, 0.6, 0.9];
        assert_eq!(auc(&null, &[0.01, 0.02]), 1.0);
        assert_eq!(auc(&null, &null), 0.5);
        assert_eq!(auc(&[0.01], &[0.5]), 0.0);
    }

    #[test]
    fn area_matches_curve() {
        let null = [0.2, 0.4, 0.4, 0.7, 1.0];
        let alt = [0.05, 0.4, 0.3, 0.9];
        let curve = roc_curve(&null, &alt);
        assert!((trapezoid(&curve) - auc(&null, &alt)).abs() < 1e-12);
        assert_eq!(curve.first().unwrap().threshold, 0.0);
        let last = curve.last().unwrap();
        assert_eq!((last.sensitivity, last.false_positive_rate), (1.0, 1.0));
    }

    #[test]
    fn shuffled_labels_give_half() {
        // p-values from one source split arbitrarily into two groups
        let ps: Vec<f64> = (0..2000).map(|i| ((i * 7919) % 2000) as f64 / 2000.0).collect();
        let (a, b): (Vec<_>, Vec<_>) = ps.iter().enumerate().partition(|(i, _)| (i * 31) % 7 < 3);
        let a: Vec<f64> = a.into_iter().map(|(_, &p)| p).collect();
        let b: Vec<f64> = b.into_iter().map(|(_, &p)| p).collect();
        assert!((auc(&a, &b) - 0.5).abs() < 0.05);
    }

    #[test]
    fn deciles_and_rates() {
        let ps = [0.0, 0.05, 0.1, 0.55, 1.0];
        assert_eq!(decile_counts(&ps), [2, 1, 0, 0, 0, 1, 0, 0, 0, 1]);
        assert_eq!(rejection_rate(&ps, 0.1), 0.6);
    }
}
