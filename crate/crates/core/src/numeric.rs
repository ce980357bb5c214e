//! Small numerical helpers shared by the other modules.

use std::f64::consts::PI;

/// Pairwise (cascade) summation with a fixed reduction tree.
///
/// The tree depends only on the slice length, so the result is bit-identical
/// for identical inputs regardless of how the inputs were produced.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const LEAF: usize = 32;
    if values.len() <= LEAF {
        let mut acc = 0.0;
        for v in values {
            acc += v;
        }
        return acc;
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Weighted sum `Σ wᵢ fᵢ` with pairwise accumulation.
pub fn weighted_sum(weights: &[f64], values: &[f64]) -> f64 {
    debug_assert_eq!(weights.len(), values.len());
    let terms: Vec<f64> = weights.iter().zip(values).map(|(w, f)| w * f).collect();
    pairwise_sum(&terms)
}

/// Binomial coefficient as a float; exact for the small arguments used here.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

/// Volume of the unit n-sphere `Sⁿ ⊂ ℝⁿ⁺¹`, i.e. `2π^{(n+1)/2} / Γ((n+1)/2)`.
pub fn unit_sphere_volume(n: usize) -> f64 {
    // ω₀ = 2, ω₁ = 2π, ωₙ = 2π/(n−1) · ωₙ₋₂
    let (mut even, mut odd) = (2.0, 2.0 * PI);
    if n == 0 {
        return even;
    }
    let mut m = 1;
    while m < n {
        m += 1;
        if m % 2 == 0 {
            even *= 2.0 * PI / (m as f64 - 1.0);
        } else {
            odd *= 2.0 * PI / (m as f64 - 1.0);
        }
    }
    if n.is_multiple_of(2) {
        even
    } else {
        odd
    }
}
