//! Relation inventory, cloze templates, task generation, and response ingestion.

mod ingest;
mod partition;
mod templates;

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use indexmap::IndexSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use ingest::{ingest_responses, ingest_responses_str, load_allowlist, load_seeds, write_tasks};
pub use partition::partition_tasks;
pub use templates::{builtin_templates, template_checksum};

#[derive(Debug, Error)]
pub enum ElicitError {
    #[error("bad target word {0:?}: must be a single non-empty token")]
    BadTarget(String),
    #[error("no seed triplet survives the allowlist filter")]
    EmptyResult,
    #[error("cannot split into {n_subsets} subsets: a (relation, target) pair has {max_group} sentences")]
    InfeasiblePartition { n_subsets: usize, max_group: usize },
    #[error("row {row}: {reason}")]
    MalformedRow { row: usize, reason: String },
    #[error("row {row}: duplicate of row {first}")]
    DuplicateRow { row: usize, first: usize },
    #[error("reading {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// The six studied semantic relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "HYP")]
    Hyp,
    #[serde(rename = "HPO")]
    Hpo,
    #[serde(rename = "HOL")]
    Hol,
    #[serde(rename = "MER")]
    Mer,
    #[serde(rename = "ANT")]
    Ant,
    #[serde(rename = "SYN")]
    Syn,
}

impl Relation {
    pub const ALL: [Relation; 6] = [
        Relation::Hyp,
        Relation::Hpo,
        Relation::Hol,
        Relation::Mer,
        Relation::Ant,
        Relation::Syn,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Relation::Hyp => "HYP",
            Relation::Hpo => "HPO",
            Relation::Hol => "HOL",
            Relation::Mer => "MER",
            Relation::Ant => "ANT",
            Relation::Syn => "SYN",
        }
    }

    /// The relation holding from relatum back to target.
    pub fn reverse(self) -> Relation {
        match self {
            Relation::Hyp => Relation::Hpo,
            Relation::Hpo => Relation::Hyp,
            Relation::Hol => Relation::Mer,
            Relation::Mer => Relation::Hol,
            r => r,
        }
    }

    pub fn is_symmetric(self) -> bool {
        self.reverse() == self
    }

    pub fn is_taxonomic(self) -> bool {
        matches!(self, Relation::Hyp | Relation::Hpo)
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error)]
#[error("unknown relation {0:?}")]
pub struct UnknownRelation(pub String);

impl FromStr for Relation {
    type Err = UnknownRelation;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Relation::ALL
            .into_iter()
            .find(|r| r.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| UnknownRelation(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Template {
    pub id: String,
    pub relation: Relation,
    /// Text with one `{W}` (target) and one `{V}` (relatum) slot.
    pub text: String,
}

pub const TARGET_SLOT: &str = "{W}";
pub const RELATUM_SLOT: &str = "{V}";

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TaskSentence {
    pub template: String,
    pub relation: Relation,
    pub target: String,
    /// Template text with the target filled in; `{V}` stays open.
    pub rendered: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElicitationRecord {
    pub participant: String,
    pub template: String,
    pub relation: Relation,
    pub target: String,
    pub rank: u8,
    pub relatum: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedTriplet {
    pub target: String,
    pub relation: Relation,
    pub relatum: String,
}

fn is_single_token(word: &str) -> bool {
    !word.is_empty() && !word.chars().any(char::is_whitespace)
}

pub fn render(template: &Template, target: &str) -> Result<TaskSentence, ElicitError> {
    if !is_single_token(target) {
        return Err(ElicitError::BadTarget(target.to_string()));
    }
    Ok(TaskSentence {
        template: template.id.clone(),
        relation: template.relation,
        target: target.to_string(),
        rendered: template.text.replacen(TARGET_SLOT, target, 1),
    })
}

pub type TargetWords = BTreeMap<Relation, IndexSet<String>>;

/// Target words per relation from seed triplets surviving the allowlist.
///
/// Symmetric relations take both words of a seed. For the directional
/// relations a seed `(w, r, v)` contributes `w` to `r` and `v` to the
/// reverse of `r`.
pub fn extract_target_words(
    seeds: &[SeedTriplet],
    allowlist: &HashSet<String>,
) -> Result<TargetWords, ElicitError> {
    let mut out = TargetWords::new();
    let mut survived = false;
    for seed in seeds {
        if !allowlist.contains(&seed.target) || !allowlist.contains(&seed.relatum) {
            continue;
        }
        survived = true;
        out.entry(seed.relation)
            .or_default()
            .insert(seed.target.clone());
        out.entry(seed.relation.reverse())
            .or_default()
            .insert(seed.relatum.clone());
    }
    if !survived {
        return Err(ElicitError::EmptyResult);
    }
    Ok(out)
}

/// Every target of a relation crossed with every template of that relation.
pub fn generate_tasks(targets: &TargetWords, templates: &[Template]) -> Vec<TaskSentence> {
    let mut out = Vec::new();
    for (&relation, words) in targets {
        for word in words {
            for t in templates.iter().filter(|t| t.relation == relation) {
                // targets came through the allowlist; a multi-token entry is skipped
                if let Ok(task) = render(t, word) {
                    out.push(task);
                }
            }
        }
    }
    out
}
