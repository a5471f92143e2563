use serde::Serialize;
use statrs::function::erf::erfc;

use super::MetricsError;

/// 1-based ranks with ties sharing the mean of their positions.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && values[order[j]] == values[order[i]] {
            j += 1;
        }
        // positions i..j (0-based) share rank mean(i+1..=j)
        let rank = (i + j + 1) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = rank;
        }
        i = j;
    }
    ranks
}

fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    (sxx > 0.0 && syy > 0.0).then(|| (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Spearman's rank correlation: Pearson correlation of average ranks.
pub fn spearman_rho(pairs: &[(f64, f64)]) -> Result<f64, MetricsError> {
    if pairs.len() < 2 {
        return Err(MetricsError::DegenerateInput("Spearman needs at least 2 pairs".into()));
    }
    let xs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    pearson(&average_ranks(&xs), &average_ranks(&ys))
        .ok_or_else(|| MetricsError::DegenerateInput("a coordinate is constant".into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TestMethod {
    Exact,
    Normal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MannWhitney {
    /// U statistic of the first sample.
    pub u: f64,
    pub p_value: f64,
    pub reject: bool,
    pub method: TestMethod,
}

/// Combined sample size from which the normal approximation is used.
pub const EXACT_BELOW: usize = 20;

/// Two-sided Mann-Whitney U test. Below [`EXACT_BELOW`] pooled observations
/// the p-value comes from the exact permutation distribution of the rank
/// sum (ties kept as midranks); otherwise from the tie-corrected normal
/// approximation with continuity correction.
pub fn mann_whitney_u(a: &[f64], b: &[f64], alpha: f64) -> Result<MannWhitney, MetricsError> {
    if a.is_empty() || b.is_empty() {
        return Err(MetricsError::DegenerateInput("Mann-Whitney needs two non-empty samples".into()));
    }
    let (na, nb) = (a.len(), b.len());
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = average_ranks(&pooled);
    let rank_sum_a: f64 = ranks[..na].iter().sum();
    let u = rank_sum_a - (na * (na + 1)) as f64 / 2.0;

    let (p_value, method) = if na + nb < EXACT_BELOW {
        (exact_p(&ranks, na, rank_sum_a), TestMethod::Exact)
    } else {
        (normal_p(&pooled, u, na, nb), TestMethod::Normal)
    };
    Ok(MannWhitney {
        u,
        p_value,
        reject: p_value < alpha,
        method,
    })
}

fn exact_p(ranks: &[f64], na: usize, observed: f64) -> f64 {
    // midranks are multiples of 1/2, so doubled ranks are integers
    let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
    let max_sum: usize = doubled.iter().sum();
    // ways[k][s]: number of k-subsets with doubled rank sum s
    let mut ways = vec![vec![0.0f64; max_sum + 1]; na + 1];
    ways[0][0] = 1.0;
    for &r in &doubled {
        for k in (1..=na).rev() {
            for s in (r..=max_sum).rev() {
                let add = ways[k - 1][s - r];
                if add != 0.0 {
                    ways[k][s] += add;
                }
            }
        }
    }
    let total: f64 = ways[na].iter().sum();
    let obs = (2.0 * observed).round() as usize;
    let lower: f64 = ways[na][..=obs].iter().sum::<f64>() / total;
    let upper: f64 = ways[na][obs..].iter().sum::<f64>() / total;
    (2.0 * lower.min(upper)).min(1.0)
}

fn normal_p(pooled: &[f64], u: f64, na: usize, nb: usize) -> f64 {
    let n = (na + nb) as f64;
    let mut sorted = pooled.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        let t = (j - i) as f64;
        tie_term += t * t * t - t;
        i = j;
    }
    let (na, nb) = (na as f64, nb as f64);
    let mean = na * nb / 2.0;
    let var = na * nb / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if var <= 0.0 {
        return 1.0;
    }
    let z = ((u - mean).abs() - 0.5).max(0.0) / var.sqrt();
    erfc(z / std::f64::consts::SQRT_2).min(1.0)
}
