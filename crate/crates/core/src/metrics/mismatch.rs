use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::{mann_whitney_u, FrequencyTable, MannWhitney, MetricsError};
use crate::elicitation::Relation;
use crate::matcher::{ClassifiedTriplet, MatchStatus};
use crate::wn_store::{SynsetId, WordNetGraph};

pub const ABSTRACT_ANCHOR: &str = "abstraction.n.06";
pub const PHYSICAL_ANCHOR: &str = "physical_entity.n.01";

/// Mismatch likelihood of documented relation `s` given elicited relation
/// `r`, indexed `[s][r]` in `Relation::ALL` order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MismatchMatrix {
    /// Summed elicitation frequency of mismatched triplets per cell.
    pub mass: [[f64; 6]; 6],
    /// Normalized per elicited-relation column; `None` on the diagonal.
    pub likelihood: [[Option<f64>; 6]; 6],
    /// Whether any mismatch was elicited for the column's relation.
    pub populated: [bool; 6],
}

impl MismatchMatrix {
    pub fn get(&self, documented: Relation, elicited: Relation) -> Option<f64> {
        self.likelihood[documented.index()][elicited.index()]
    }

    pub fn column_sum(&self, elicited: Relation) -> f64 {
        (0..6)
            .filter_map(|s| self.likelihood[s][elicited.index()])
            .sum()
    }
}

pub fn mismatch_matrix(classified: &[ClassifiedTriplet], freq: &FrequencyTable) -> MismatchMatrix {
    let mut mass = [[0.0; 6]; 6];
    for c in classified {
        if let MatchStatus::Mismatched { documented } = c.status {
            mass[documented.index()][c.triplet.relation.index()] += freq.freq(&c.triplet);
        }
    }
    let mut likelihood = [[None; 6]; 6];
    let mut populated = [false; 6];
    for r in 0..6 {
        let total: f64 = (0..6).filter(|&t| t != r).map(|t| mass[t][r]).sum();
        populated[r] = total > 0.0;
        for s in (0..6).filter(|&s| s != r) {
            likelihood[s][r] = Some(if total > 0.0 { mass[s][r] / total } else { 0.0 });
        }
    }
    MismatchMatrix {
        mass,
        likelihood,
        populated,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WordCategory {
    Abstract,
    Physical,
}

struct Anchors {
    abstraction: SynsetId,
    physical: SynsetId,
}

impl Anchors {
    fn resolve(graph: &WordNetGraph) -> Result<Self, MetricsError> {
        let get = |name: &str| {
            graph
                .synset_by_name(name)
                .map_err(|_| MetricsError::UnknownAnchor(name.to_string()))
        };
        Ok(Self {
            abstraction: get(ABSTRACT_ANCHOR)?,
            physical: get(PHYSICAL_ANCHOR)?,
        })
    }

    fn category(&self, graph: &WordNetGraph, word: &str) -> Option<WordCategory> {
        let synsets = graph.synsets_of(word);
        if synsets.is_empty() {
            return None;
        }
        let under = |anchor: SynsetId| {
            synsets
                .iter()
                .all(|&s| s == anchor || graph.is_descendant(s, anchor))
        };
        if under(self.abstraction) {
            Some(WordCategory::Abstract)
        } else if under(self.physical) {
            Some(WordCategory::Physical)
        } else {
            None
        }
    }
}

/// Abstract iff every sense descends from (or is) the abstraction anchor;
/// physical likewise for the physical-entity anchor.
pub fn word_category(graph: &WordNetGraph, word: &str) -> Result<Option<WordCategory>, MetricsError> {
    Ok(Anchors::resolve(graph)?.category(graph, word))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SynsetCountComparison {
    pub n_abstract_targets: usize,
    pub n_physical_targets: usize,
    pub abstract_mean_synsets: f64,
    pub physical_mean_synsets: f64,
    pub test: Option<MannWhitney>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AbstractPhysicalSplit {
    pub n_abstract: usize,
    pub n_physical: usize,
    pub abstract_matrix: MismatchMatrix,
    pub physical_matrix: MismatchMatrix,
    pub target_synsets: SynsetCountComparison,
}

/// Splits non-excluded triplets into those whose target and relatum are
/// both abstract or both physical, and computes a mismatch matrix per side
/// (frequencies stay those of the full table).
pub fn abstract_physical_split(
    graph: &WordNetGraph,
    classified: &[ClassifiedTriplet],
    freq: &FrequencyTable,
    alpha: f64,
) -> Result<AbstractPhysicalSplit, MetricsError> {
    let anchors = Anchors::resolve(graph)?;
    let mut cache: HashMap<&str, Option<WordCategory>> = HashMap::new();
    let mut abstract_side = Vec::new();
    let mut physical_side = Vec::new();
    let mut targets: BTreeMap<&str, WordCategory> = BTreeMap::new();
    for c in classified.iter().filter(|c| !c.status.is_excluded()) {
        let t = &c.triplet;
        let ct = *cache
            .entry(&t.target)
            .or_insert_with(|| anchors.category(graph, &t.target));
        let cv = *cache
            .entry(&t.relatum)
            .or_insert_with(|| anchors.category(graph, &t.relatum));
        if let Some(cat) = ct {
            targets.insert(&t.target, cat);
        }
        match (ct, cv) {
            (Some(WordCategory::Abstract), Some(WordCategory::Abstract)) => abstract_side.push(c.clone()),
            (Some(WordCategory::Physical), Some(WordCategory::Physical)) => physical_side.push(c.clone()),
            _ => {}
        }
    }

    let counts = |cat: WordCategory| -> Vec<f64> {
        targets
            .iter()
            .filter(|(_, &c)| c == cat)
            .map(|(w, _)| graph.synsets_of(w).len() as f64)
            .collect()
    };
    let (abs_counts, phys_counts) = (counts(WordCategory::Abstract), counts(WordCategory::Physical));
    let mean = |v: &[f64]| if v.is_empty() { 0.0 } else { v.iter().sum::<f64>() / v.len() as f64 };
    let test = mann_whitney_u(&abs_counts, &phys_counts, alpha).ok();

    Ok(AbstractPhysicalSplit {
        n_abstract: abstract_side.len(),
        n_physical: physical_side.len(),
        abstract_matrix: mismatch_matrix(&abstract_side, freq),
        physical_matrix: mismatch_matrix(&physical_side, freq),
        target_synsets: SynsetCountComparison {
            n_abstract_targets: abs_counts.len(),
            n_physical_targets: phys_counts.len(),
            abstract_mean_synsets: mean(&abs_counts),
            physical_mean_synsets: mean(&phys_counts),
            test,
        },
    })
}
