use std::collections::BTreeMap;

use serde::Serialize;

use super::{spearman_rho, FrequencyTable};
use crate::elicitation::Relation;
use crate::matcher::{ClassifiedTriplet, MatchStatus};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceSummary {
    pub relation: Relation,
    pub n_direct: usize,
    pub n_missing: usize,
    /// Missing triplets reachable over a longer hypernym path.
    pub n_indirect: usize,
    pub recovery_rate: Option<f64>,
    /// Path length → number of direct or indirect matches.
    pub histogram: BTreeMap<u32, usize>,
    pub n_indirect_2_to_4: usize,
    pub share_indirect_2_to_4: Option<f64>,
    /// Spearman correlation between distance and elicitation frequency.
    pub spearman: Option<f64>,
    /// (distance, frequency) for every direct and indirect match.
    pub points: Vec<(u32, f64)>,
}

pub fn distance_analysis(
    classified: &[ClassifiedTriplet],
    freq: &FrequencyTable,
    relation: Relation,
) -> DistanceSummary {
    let mut summary = DistanceSummary {
        relation,
        n_direct: 0,
        n_missing: 0,
        n_indirect: 0,
        recovery_rate: None,
        histogram: BTreeMap::new(),
        n_indirect_2_to_4: 0,
        share_indirect_2_to_4: None,
        spearman: None,
        points: Vec::new(),
    };
    for c in classified.iter().filter(|c| c.triplet.relation == relation) {
        match c.status {
            MatchStatus::Matched => summary.n_direct += 1,
            MatchStatus::Missing => summary.n_missing += 1,
            _ => continue,
        }
        let Some(d) = c.distance else { continue };
        if c.is_indirect_match() {
            summary.n_indirect += 1;
            if (2..=4).contains(&d) {
                summary.n_indirect_2_to_4 += 1;
            }
        } else if c.status != MatchStatus::Matched {
            continue;
        }
        *summary.histogram.entry(d).or_insert(0) += 1;
        summary.points.push((d, freq.freq(&c.triplet)));
    }
    if summary.n_missing > 0 {
        summary.recovery_rate = Some(summary.n_indirect as f64 / summary.n_missing as f64);
    }
    if summary.n_indirect > 0 {
        summary.share_indirect_2_to_4 = Some(summary.n_indirect_2_to_4 as f64 / summary.n_indirect as f64);
    }
    let pairs: Vec<(f64, f64)> = summary.points.iter().map(|&(d, f)| (f64::from(d), f)).collect();
    summary.spearman = spearman_rho(&pairs).ok();
    summary
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcher::Triplet;
    use crate::metrics::elicitation_frequency;

    fn item(v: &str, count: u32, status: MatchStatus, distance: Option<u32>) -> ClassifiedTriplet {
        ClassifiedTriplet {
            triplet: Triplet {
                target: "w".into(),
                relation: Relation::Hyp,
                relatum: v.into(),
                count,
                is_hapax: count == 1,
            },
            status,
            distance,
            self_response: false,
        }
    }

    #[test]
    fn recovery_and_histogram() {
        let cs = vec![
            item("a", 4, MatchStatus::Matched, Some(1)),
            item("b", 3, MatchStatus::Missing, Some(2)),
            item("c", 2, MatchStatus::Missing, Some(5)),
            item("d", 1, MatchStatus::Missing, None),
            item("e", 1, MatchStatus::Mismatched { documented: Relation::Syn }, None),
        ];
        let triplets: Vec<Triplet> = cs.iter().map(|c| c.triplet.clone()).collect();
        let s = distance_analysis(&cs, &elicitation_frequency(&triplets), Relation::Hyp);
        assert_eq!((s.n_direct, s.n_missing, s.n_indirect), (1, 3, 2));
        assert!((s.recovery_rate.unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(s.histogram, BTreeMap::from([(1, 1), (2, 1), (5, 1)]));
        assert_eq!(s.share_indirect_2_to_4, Some(0.5));
        // higher frequency at shorter distance
        assert!((s.spearman.unwrap() + 1.0).abs() < 1e-12);
        assert_eq!(s.points.len(), 3);
    }

    #[test]
    fn empty_relation() {
        let s = distance_analysis(&[], &FrequencyTable::default(), Relation::Hpo);
        assert_eq!((s.recovery_rate, s.spearman, s.share_indirect_2_to_4), (None, None, None));
    }
}
