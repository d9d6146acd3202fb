//! Sample aggregation and the two-sided Mann-Whitney U test used to
//! compare 30-run result samples.

use statrs::distribution::{ContinuousCDF, Normal};

/// Observations of one cell plus their arithmetic mean.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSummary {
    values: Vec<f64>,
    mean: f64,
}

impl SampleSummary {
    pub fn new(values: Vec<f64>) -> Self {
        assert!(!values.is_empty(), "summary of an empty sample");
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        SampleSummary { values, mean }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn count(&self) -> usize {
        self.values.len()
    }
}

/// Two-sided Mann-Whitney U test with average ranks for ties,
/// tie-corrected variance, and ±0.5 continuity correction. Returns
/// (U of the first sample, p-value). Zero variance (all observations
/// equal) yields p = 1.
pub fn mann_whitney_u(a: &[f64], b: &[f64]) -> (f64, f64) {
    assert!(!a.is_empty() && !b.is_empty(), "empty sample");
    assert!(
        a.iter().chain(b).all(|x| !x.is_nan()),
        "samples must not contain NaN"
    );
    let n1 = a.len() as f64;
    let n2 = b.len() as f64;
    let n = n1 + n2;

    let mut pooled: Vec<(f64, bool)> = a
        .iter()
        .map(|&x| (x, true))
        .chain(b.iter().map(|&x| (x, false)))
        .collect();
    pooled.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("no NaN"));

    let mut rank_sum_a = 0.0;
    let mut tie_sum = 0.0;
    let mut i = 0;
    while i < pooled.len() {
        let mut j = i;
        while j + 1 < pooled.len() && pooled[j + 1].0 == pooled[i].0 {
            j += 1;
        }
        let rank = (i + 1 + j + 1) as f64 / 2.0;
        let ties = (j - i + 1) as f64;
        tie_sum += ties * ties * ties - ties;
        for &(_, from_a) in &pooled[i..=j] {
            if from_a {
                rank_sum_a += rank;
            }
        }
        i = j + 1;
    }

    let u1 = rank_sum_a - n1 * (n1 + 1.0) / 2.0;
    let mean_u = n1 * n2 / 2.0;
    let variance = n1 * n2 / 12.0 * ((n + 1.0) - tie_sum / (n * (n - 1.0)));
    if variance <= 0.0 {
        return (u1, 1.0);
    }
    let u_big = u1.max(n1 * n2 - u1);
    let z = (u_big - mean_u - 0.5) / variance.sqrt();
    let normal = Normal::new(0.0, 1.0).expect("valid standard normal");
    let p = (2.0 * normal.sf(z)).clamp(0.0, 1.0);
    (u1, p)
}

/// The paper-style significance call: p strictly below α = 0.05.
pub fn significance_label(p: f64) -> bool {
    p < 0.05
}

/// Renders p with three decimals; values below 0.0005 print as "0.000".
pub fn format_p(p: f64) -> String {
    format!("{p:.3}")
}
