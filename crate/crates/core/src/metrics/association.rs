use std::collections::BTreeMap;

use serde::Serialize;

use super::MetricsError;
use crate::elicitation::{ElicitationRecord, Relation};

fn entropy_bits(p: &[f64]) -> f64 {
    -p.iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x * x.log2())
        .sum::<f64>()
}

/// Generalized Jensen-Shannon divergence with uniform weights, in bits,
/// divided by `log2(k)` so that it lies in [0, 1].
pub fn gjsd(distributions: &[Vec<f64>]) -> Result<f64, MetricsError> {
    let k = distributions.len();
    if k < 2 {
        return Err(MetricsError::DegenerateInput(format!(
            "GJSD needs at least 2 distributions, got {k}"
        )));
    }
    let support = distributions[0].len();
    for d in distributions {
        if d.len() != support {
            return Err(MetricsError::DegenerateInput("distributions differ in support size".into()));
        }
        if d.iter().any(|&x| x.is_nan() || x < 0.0) || (d.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(MetricsError::DegenerateInput("not a probability distribution".into()));
        }
    }
    let weight = 1.0 / k as f64;
    let mut mixture = vec![0.0; support];
    for d in distributions {
        for (m, &x) in mixture.iter_mut().zip(d) {
            *m += weight * x;
        }
    }
    let mean_entropy: f64 = distributions.iter().map(|d| entropy_bits(d)).sum::<f64>() * weight;
    let value = (entropy_bits(&mixture) - mean_entropy) / (k as f64).log2();
    Ok(value.clamp(0.0, 1.0))
}

/// Cramér's V of a count table, `sqrt(χ² / (n · min(r−1, c−1)))`. All-zero
/// rows and columns are dropped first.
pub fn cramers_v(table: &[Vec<f64>]) -> Result<f64, MetricsError> {
    let n_cols = table.first().map_or(0, Vec::len);
    if table.iter().any(|r| r.len() != n_cols) {
        return Err(MetricsError::DegenerateInput("ragged contingency table".into()));
    }
    if table.iter().flatten().any(|&x| x.is_nan() || x < 0.0) {
        return Err(MetricsError::DegenerateInput("negative or NaN count".into()));
    }
    let row_sums: Vec<f64> = table.iter().map(|r| r.iter().sum()).collect();
    let col_sums: Vec<f64> = (0..n_cols).map(|j| table.iter().map(|r| r[j]).sum()).collect();
    let rows: Vec<usize> = (0..table.len()).filter(|&i| row_sums[i] > 0.0).collect();
    let cols: Vec<usize> = (0..n_cols).filter(|&j| col_sums[j] > 0.0).collect();
    if rows.len() < 2 || cols.len() < 2 {
        return Err(MetricsError::DegenerateTable);
    }
    let n: f64 = row_sums.iter().sum();
    let mut chi2 = 0.0;
    for &i in &rows {
        for &j in &cols {
            let expected = row_sums[i] * col_sums[j] / n;
            let diff = table[i][j] - expected;
            chi2 += diff * diff / expected;
        }
    }
    let dof = (rows.len().min(cols.len()) - 1) as f64;
    Ok((chi2 / (n * dof)).sqrt().min(1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssociationScores {
    pub relation: Relation,
    /// `None` when no target word had a scorable table.
    pub gjsd_mean: Option<f64>,
    pub cramers_v_mean: Option<f64>,
    pub n_targets: usize,
}

/// Per relation, the mean over target words of GJSD and Cramér's V between
/// the templates' relata distributions. Targets with fewer than two
/// responding templates or a single distinct relatum are skipped.
pub fn template_association(records: &[ElicitationRecord]) -> Vec<AssociationScores> {
    // relation -> target -> template -> relatum -> count
    type Nested<'a> = BTreeMap<&'a str, BTreeMap<&'a str, BTreeMap<&'a str, f64>>>;
    let mut by_relation: BTreeMap<Relation, Nested> = BTreeMap::new();
    for r in records {
        *by_relation
            .entry(r.relation)
            .or_default()
            .entry(&r.target)
            .or_default()
            .entry(&r.template)
            .or_default()
            .entry(&r.relatum)
            .or_insert(0.0) += 1.0;
    }

    Relation::ALL
        .into_iter()
        .map(|relation| {
            let mut gjsd_sum = 0.0;
            let mut v_sum = 0.0;
            let mut n_targets = 0;
            for templates in by_relation.get(&relation).into_iter().flat_map(|m| m.values()) {
                let mut relata: Vec<&str> = templates.values().flat_map(|m| m.keys().copied()).collect();
                relata.sort_unstable();
                relata.dedup();
                if templates.len() < 2 || relata.len() < 2 {
                    continue;
                }
                let table: Vec<Vec<f64>> = templates
                    .values()
                    .map(|counts| relata.iter().map(|v| counts.get(v).copied().unwrap_or(0.0)).collect())
                    .collect();
                let dists: Vec<Vec<f64>> = table
                    .iter()
                    .map(|row| {
                        let total: f64 = row.iter().sum();
                        row.iter().map(|&c| c / total).collect()
                    })
                    .collect();
                let (Ok(g), Ok(v)) = (gjsd(&dists), cramers_v(&table)) else {
                    continue;
                };
                gjsd_sum += g;
                v_sum += v;
                n_targets += 1;
            }
            let mean = |sum: f64| (n_targets > 0).then(|| sum / n_targets as f64);
            AssociationScores {
                relation,
                gjsd_mean: mean(gjsd_sum),
                cramers_v_mean: mean(v_sum),
                n_targets,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gjsd_extremes() {
        let p = vec![0.2, 0.3, 0.5];
        assert!(gjsd(&[p.clone(), p.clone(), p]).unwrap().abs() < 1e-12);
        assert!((gjsd(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap() - 1.0).abs() < 1e-12);
        let masses: Vec<Vec<f64>> = (0..4)
            .map(|i| (0..4).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        assert!((gjsd(&masses).unwrap() - 1.0).abs() < 1e-12);
        assert!(gjsd(&[vec![1.0]]).is_err());
        assert!(gjsd(&[vec![0.5, 0.4], vec![0.5, 0.5]]).is_err());
    }

    #[test]
    fn cramers_v_extremes() {
        assert!((cramers_v(&[vec![5.0, 0.0], vec![0.0, 7.0]]).unwrap() - 1.0).abs() < 1e-12);
        let row = [1.0, 2.0, 3.0];
        let col = [2.0, 5.0];
        let independent: Vec<Vec<f64>> = col.iter().map(|c| row.iter().map(|r| r * c).collect()).collect();
        assert!(cramers_v(&independent).unwrap().abs() < 1e-12);
        assert!(matches!(cramers_v(&[vec![1.0, 2.0]]), Err(MetricsError::DegenerateTable)));
        assert!(matches!(
            cramers_v(&[vec![1.0, 0.0], vec![2.0, 0.0]]),
            Err(MetricsError::DegenerateTable)
        ));
    }

    fn rec(template: &str, relation: Relation, target: &str, relatum: &str) -> ElicitationRecord {
        ElicitationRecord {
            participant: "p".into(),
            template: template.into(),
            relation,
            target: target.into(),
            rank: 1,
            relatum: relatum.into(),
        }
    }

    #[test]
    fn association_skips_degenerate_targets() {
        let records = vec![
            // single template for "apple"
            rec("HYP-01", Relation::Hyp, "apple", "fruit"),
            rec("HYP-01", Relation::Hyp, "apple", "food"),
            // two templates but one relatum for "pear"
            rec("HYP-01", Relation::Hyp, "pear", "fruit"),
            rec("HYP-02", Relation::Hyp, "pear", "fruit"),
            // scorable "dog": fully separated templates
            rec("HYP-01", Relation::Hyp, "dog", "animal"),
            rec("HYP-02", Relation::Hyp, "dog", "pet"),
        ];
        let scores = template_association(&records);
        let hyp = &scores[Relation::Hyp.index()];
        assert_eq!(hyp.n_targets, 1);
        assert!((hyp.gjsd_mean.unwrap() - 1.0).abs() < 1e-12);
        assert!((hyp.cramers_v_mean.unwrap() - 1.0).abs() < 1e-12);
        let syn = &scores[Relation::Syn.index()];
        assert_eq!((syn.n_targets, syn.gjsd_mean), (0, None));
    }
}
