//! Alignment statistics over classified triplets.

mod association;
mod distance;
mod mismatch;
mod rank;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::elicitation::Relation;
use crate::matcher::{ClassifiedTriplet, MatchStatus, Triplet};

pub use association::{cramers_v, gjsd, template_association, AssociationScores};
pub use distance::{distance_analysis, DistanceSummary};
pub use mismatch::{
    abstract_physical_split, mismatch_matrix, word_category, AbstractPhysicalSplit,
    MismatchMatrix, SynsetCountComparison, WordCategory, ABSTRACT_ANCHOR, PHYSICAL_ANCHOR,
};
pub use rank::{average_ranks, mann_whitney_u, spearman_rho, MannWhitney, TestMethod};

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("threshold grid must lie in [0, 1] and be strictly increasing")]
    InvalidGrid,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("contingency table needs at least 2 non-empty rows and columns")]
    DegenerateTable,
    #[error("anchor synset {0} not found in the graph")]
    UnknownAnchor(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TripletKey {
    pub target: String,
    pub relation: Relation,
    pub relatum: String,
}

impl TripletKey {
    pub fn of(t: &Triplet) -> Self {
        Self {
            target: t.target.clone(),
            relation: t.relation,
            relatum: t.relatum.clone(),
        }
    }
}

/// Elicitation frequency per triplet: its share of all relata elicited for
/// the same (target, relation).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FrequencyTable {
    entries: BTreeMap<TripletKey, f64>,
}

impl FrequencyTable {
    pub fn get(&self, t: &Triplet) -> Option<f64> {
        self.entries.get(&TripletKey::of(t)).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TripletKey, f64)> {
        self.entries.iter().map(|(k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn freq(&self, t: &Triplet) -> f64 {
        self.get(t).unwrap_or(0.0)
    }
}

pub fn elicitation_frequency(triplets: &[Triplet]) -> FrequencyTable {
    let mut totals: BTreeMap<(&str, Relation), u64> = BTreeMap::new();
    for t in triplets {
        *totals.entry((t.target.as_str(), t.relation)).or_insert(0) += u64::from(t.count);
    }
    let entries = triplets
        .iter()
        .map(|t| {
            let total = totals[&(t.target.as_str(), t.relation)];
            (TripletKey::of(t), f64::from(t.count) / total as f64)
        })
        .collect();
    FrequencyTable { entries }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub threshold: f64,
    pub match_rate: f64,
    pub n_retained: usize,
    pub n_matched: usize,
}

/// `0, step, 2·step, …` up to and including 1 when `1/step` is integral.
pub fn threshold_grid(step: f64) -> Result<Vec<f64>, MetricsError> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(MetricsError::InvalidGrid);
    }
    let n = (1.0 / step + 1e-9).floor() as usize;
    let exact = ((1.0 / step) - (1.0 / step).round()).abs() < 1e-9;
    Ok((0..=n)
        .map(|i| if exact { i as f64 / n as f64 } else { i as f64 * step })
        .collect())
}

/// Match rate among non-excluded triplets of `relation` whose frequency is
/// strictly above each threshold. Thresholds retaining nothing are omitted.
pub fn match_rate_curve(
    classified: &[ClassifiedTriplet],
    freq: &FrequencyTable,
    relation: Relation,
    thresholds: &[f64],
) -> Result<Vec<CurvePoint>, MetricsError> {
    let in_range = thresholds.iter().all(|t| (0.0..=1.0).contains(t));
    let increasing = thresholds.windows(2).all(|w| w[0] < w[1]);
    if !in_range || !increasing {
        return Err(MetricsError::InvalidGrid);
    }
    let mut pool: Vec<(f64, bool)> = classified
        .iter()
        .filter(|c| c.triplet.relation == relation && !c.status.is_excluded())
        .map(|c| (freq.freq(&c.triplet), c.status == MatchStatus::Matched))
        .collect();
    pool.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut out = Vec::new();
    for &threshold in thresholds {
        let start = pool.partition_point(|&(f, _)| f <= threshold);
        let retained = &pool[start..];
        if retained.is_empty() {
            continue;
        }
        let n_matched = retained.iter().filter(|&&(_, m)| m).count();
        out.push(CurvePoint {
            threshold,
            match_rate: n_matched as f64 / retained.len() as f64,
            n_retained: retained.len(),
            n_matched,
        });
    }
    Ok(out)
}

/// Which triplets a status tally covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HapaxFilter {
    All,
    Hapax,
    NonHapax,
}

impl HapaxFilter {
    pub fn as_str(self) -> &'static str {
        match self {
            HapaxFilter::All => "all",
            HapaxFilter::Hapax => "hapax",
            HapaxFilter::NonHapax => "non_hapax",
        }
    }

    fn keeps(self, t: &Triplet) -> bool {
        match self {
            HapaxFilter::All => true,
            HapaxFilter::Hapax => t.is_hapax,
            HapaxFilter::NonHapax => !t.is_hapax,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatusCounts {
    pub relation: Relation,
    pub subset: HapaxFilter,
    pub matched: usize,
    pub missing: usize,
    pub mismatched: usize,
    pub excluded: usize,
}

impl StatusCounts {
    /// Non-excluded triplets.
    pub fn retained(&self) -> usize {
        self.matched + self.missing + self.mismatched
    }

    fn share(&self, n: usize) -> f64 {
        match self.retained() {
            0 => 0.0,
            total => n as f64 / total as f64,
        }
    }

    pub fn matched_share(&self) -> f64 {
        self.share(self.matched)
    }

    pub fn missing_share(&self) -> f64 {
        self.share(self.missing)
    }

    pub fn mismatched_share(&self) -> f64 {
        self.share(self.mismatched)
    }
}

/// Per-relation tallies of each match status.
pub fn status_distribution(classified: &[ClassifiedTriplet], subset: HapaxFilter) -> Vec<StatusCounts> {
    Relation::ALL
        .into_iter()
        .map(|relation| {
            let mut counts = StatusCounts {
                relation,
                subset,
                matched: 0,
                missing: 0,
                mismatched: 0,
                excluded: 0,
            };
            for c in classified
                .iter()
                .filter(|c| c.triplet.relation == relation && subset.keeps(&c.triplet))
            {
                match c.status {
                    MatchStatus::Matched => counts.matched += 1,
                    MatchStatus::Missing => counts.missing += 1,
                    MatchStatus::Mismatched { .. } => counts.mismatched += 1,
                    MatchStatus::Excluded { .. } => counts.excluded += 1,
                }
            }
            counts
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trip(w: &str, r: Relation, v: &str, count: u32) -> Triplet {
        Triplet {
            target: w.into(),
            relation: r,
            relatum: v.into(),
            count,
            is_hapax: count == 1,
        }
    }

    fn classified(t: Triplet, status: MatchStatus) -> ClassifiedTriplet {
        ClassifiedTriplet {
            self_response: t.target == t.relatum,
            triplet: t,
            status,
            distance: None,
        }
    }

    #[test]
    fn frequency_arithmetic() {
        let ts = vec![
            trip("orange", Relation::Hyp, "fruit", 3),
            trip("orange", Relation::Hyp, "food", 1),
            trip("orange", Relation::Syn, "citrus", 5),
        ];
        let f = elicitation_frequency(&ts);
        assert_eq!(f.get(&ts[0]), Some(0.75));
        assert_eq!(f.get(&ts[1]), Some(0.25));
        assert_eq!(f.get(&ts[2]), Some(1.0));
    }

    #[test]
    fn grid() {
        let g = threshold_grid(0.01).unwrap();
        assert_eq!(g.len(), 101);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[25], 0.25);
        assert_eq!(g[100], 1.0);
        assert_eq!(threshold_grid(0.3).unwrap().len(), 4);
        assert!(threshold_grid(0.0).is_err());
        assert!(threshold_grid(1.5).is_err());
    }

    #[test]
    fn curve_retention() {
        let ts = vec![
            trip("a", Relation::Hyp, "x", 3),
            trip("a", Relation::Hyp, "y", 1),
            trip("b", Relation::Hyp, "z", 1),
            trip("b", Relation::Hyp, "q", 1),
        ];
        let f = elicitation_frequency(&ts);
        let cs = vec![
            classified(ts[0].clone(), MatchStatus::Missing),
            classified(ts[1].clone(), MatchStatus::Matched),
            classified(ts[2].clone(), MatchStatus::Matched),
            classified(
                ts[3].clone(),
                MatchStatus::Excluded {
                    reason: crate::matcher::ExclusionReason::RelatumNotNoun,
                },
            ),
        ];
        let curve = match_rate_curve(&cs, &f, Relation::Hyp, &[0.0, 0.3, 0.5, 0.8]).unwrap();
        // freqs: x .75 (missing), y .25 (matched), z .5 (matched)
        assert_eq!(curve.len(), 3);
        assert_eq!(curve[0].n_retained, 3);
        assert!((curve[0].match_rate - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!((curve[1].n_retained, curve[1].n_matched), (2, 1));
        assert_eq!((curve[2].n_retained, curve[2].match_rate), (1, 0.0));
        assert!(match_rate_curve(&cs, &f, Relation::Hyp, &[0.5, 0.2]).is_err());
        assert!(match_rate_curve(&cs, &f, Relation::Hyp, &[-0.1]).is_err());
        assert!(match_rate_curve(&cs, &f, Relation::Syn, &[0.0]).unwrap().is_empty());
    }

    #[test]
    fn status_tallies() {
        let ts = [
            trip("a", Relation::Ant, "x", 1),
            trip("a", Relation::Ant, "y", 2),
            trip("a", Relation::Ant, "z", 1),
        ];
        let cs = vec![
            classified(ts[0].clone(), MatchStatus::Matched),
            classified(ts[1].clone(), MatchStatus::Missing),
            classified(ts[2].clone(), MatchStatus::Mismatched { documented: Relation::Mer }),
        ];
        let all = status_distribution(&cs, HapaxFilter::All);
        let ant = &all[Relation::Ant.index()];
        assert_eq!((ant.matched, ant.missing, ant.mismatched, ant.excluded), (1, 1, 1, 0));
        let hapax = status_distribution(&cs, HapaxFilter::Hapax);
        assert_eq!(hapax[Relation::Ant.index()].retained(), 2);
        assert_eq!(all[Relation::Hyp.index()].matched_share(), 0.0);
    }
}
