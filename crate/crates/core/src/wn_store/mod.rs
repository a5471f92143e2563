//! In-memory WordNet noun graph built from the Princeton wndb flat files.
//!
//! The graph is immutable once [`parse_wordnet`] returns. Instance pointers
//! are folded into plain hypernym/hyponym queries, and every mirrorable
//! pointer (hypernym/hyponym, the holonym/meronym subtypes, antonym) is
//! guaranteed to have its inverse recorded on the target synset.

pub mod fixture;
mod parse;
mod relation;

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::path::PathBuf;

use serde::{Serialize, Serializer};
use thiserror::Error;

pub use parse::{parse_wndb_str, parse_wordnet};
pub use relation::RelationKind;

#[derive(Debug, Error)]
pub enum WnError {
    #[error("missing WordNet file {}", .0.display())]
    MissingFile(PathBuf),
    #[error("{file}:{line}: malformed record: {reason}")]
    MalformedRecord {
        file: String,
        line: usize,
        reason: String,
    },
    #[error("{file}:{line}: pointer to unknown synset offset {offset:08}")]
    DanglingPointer {
        file: String,
        line: usize,
        offset: u32,
    },
    #[error("unknown synset name {0:?}")]
    UnknownName(String),
    #[error("reading {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pos {
    Noun,
}

impl Pos {
    pub fn tag(self) -> char {
        match self {
            Pos::Noun => 'n',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SynsetId {
    pub pos: Pos,
    pub offset: u32,
}

impl SynsetId {
    pub fn noun(offset: u32) -> Self {
        Self {
            pos: Pos::Noun,
            offset,
        }
    }
}

impl fmt::Display for SynsetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:08}-{}", self.offset, self.pos.tag())
    }
}

impl Serialize for SynsetId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A lexical (lemma-to-lemma) pointer. Lemma indices are zero-based
/// positions in the respective synsets' lemma lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaEdge {
    pub source: u16,
    pub kind: RelationKind,
    pub target: SynsetId,
    pub target_lemma: u16,
}

#[derive(Debug, Clone, Serialize)]
pub struct Synset {
    pub id: SynsetId,
    pub lemmas: Vec<String>,
    /// Definition text, verbatim, including any example sentences.
    pub gloss: String,
    pub edges: Vec<(RelationKind, SynsetId)>,
    pub lemma_edges: Vec<LemmaEdge>,
}

#[derive(Debug, Serialize)]
pub struct WordNetGraph {
    synsets: Vec<Synset>,
    #[serde(skip)]
    by_id: HashMap<SynsetId, usize>,
    lemma_index: BTreeMap<String, Vec<SynsetId>>,
}

impl WordNetGraph {
    pub(crate) fn from_parts(
        mut synsets: Vec<Synset>,
        lemma_index: BTreeMap<String, Vec<SynsetId>>,
    ) -> Self {
        synsets.sort_by_key(|s| s.id);
        let by_id = synsets
            .iter()
            .enumerate()
            .map(|(i, s)| (s.id, i))
            .collect();
        Self {
            synsets,
            by_id,
            lemma_index,
        }
    }

    pub fn len(&self) -> usize {
        self.synsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.synsets.is_empty()
    }

    pub fn synset(&self, id: SynsetId) -> Option<&Synset> {
        self.by_id.get(&id).map(|&i| &self.synsets[i])
    }

    pub fn synsets(&self) -> impl Iterator<Item = &Synset> {
        self.synsets.iter()
    }

    /// Every lemma string in the index file, in sorted order.
    pub fn lemmas(&self) -> impl Iterator<Item = &str> {
        self.lemma_index.keys().map(String::as_str)
    }

    /// Sense-ordered synsets of a noun; empty when the word is not a noun.
    pub fn synsets_of(&self, word: &str) -> &[SynsetId] {
        self.lemma_index
            .get(word.to_lowercase().as_str())
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn is_noun(&self, word: &str) -> bool {
        !self.synsets_of(word).is_empty()
    }

    /// Resolves a `lemma.n.NN` name to the NN-th sense of the lemma.
    pub fn synset_by_name(&self, name: &str) -> Result<SynsetId, WnError> {
        let unknown = || WnError::UnknownName(name.to_string());
        let mut parts = name.rsplitn(3, '.');
        let (Some(sense), Some(pos), Some(lemma)) = (parts.next(), parts.next(), parts.next())
        else {
            return Err(unknown());
        };
        if pos != "n" || lemma.is_empty() || !sense.bytes().all(|b| b.is_ascii_digit()) {
            return Err(unknown());
        }
        let sense: usize = sense.parse().map_err(|_| unknown())?;
        if sense == 0 {
            return Err(unknown());
        }
        self.synsets_of(lemma)
            .get(sense - 1)
            .copied()
            .ok_or_else(unknown)
    }

    /// Canonical `lemma.n.NN` name: first lemma of the synset and the
    /// synset's sense number for that lemma.
    pub fn synset_name(&self, id: SynsetId) -> Option<String> {
        let synset = self.synset(id)?;
        let head = synset.lemmas[0].to_lowercase();
        let sense = self.synsets_of(&head).iter().position(|&s| s == id)? + 1;
        Some(format!("{head}.{}.{sense:02}", id.pos.tag()))
    }

    /// Targets of semantic edges of `kind`. Hypernym and hyponym queries
    /// include instance pointers. Antonym queries read lemma-level edges.
    pub fn direct_relata(&self, s: SynsetId, kind: &RelationKind) -> Vec<SynsetId> {
        let Some(synset) = self.synset(s) else {
            return Vec::new();
        };
        let mut out: Vec<SynsetId> = if *kind == RelationKind::Antonym {
            synset
                .lemma_edges
                .iter()
                .filter(|e| e.kind == RelationKind::Antonym)
                .map(|e| e.target)
                .collect()
        } else {
            synset
                .edges
                .iter()
                .filter(|(k, _)| k.answers(kind))
                .map(|&(_, t)| t)
                .collect()
        };
        dedup_in_order(&mut out);
        out
    }

    pub fn hypernyms(&self, s: SynsetId) -> impl Iterator<Item = SynsetId> + '_ {
        self.edges_where(s, RelationKind::is_hypernym)
    }

    pub fn hyponyms(&self, s: SynsetId) -> impl Iterator<Item = SynsetId> + '_ {
        self.edges_where(s, RelationKind::is_hyponym)
    }

    /// Holonyms of any subtype (member, part, substance).
    pub fn holonyms(&self, s: SynsetId) -> impl Iterator<Item = SynsetId> + '_ {
        self.edges_where(s, RelationKind::is_holonym)
    }

    /// Meronyms of any subtype (member, part, substance).
    pub fn meronyms(&self, s: SynsetId) -> impl Iterator<Item = SynsetId> + '_ {
        self.edges_where(s, RelationKind::is_meronym)
    }

    /// Synsets reached by a lemma-level antonym pointer from any lemma of `s`.
    pub fn antonym_synsets(&self, s: SynsetId) -> impl Iterator<Item = SynsetId> + '_ {
        self.synset(s)
            .into_iter()
            .flat_map(|syn| syn.lemma_edges.iter())
            .filter(|e| e.kind == RelationKind::Antonym)
            .map(|e| e.target)
    }

    fn edges_where(
        &self,
        s: SynsetId,
        pred: fn(&RelationKind) -> bool,
    ) -> impl Iterator<Item = SynsetId> + '_ {
        self.synset(s)
            .into_iter()
            .flat_map(|syn| syn.edges.iter())
            .filter(move |(k, _)| pred(k))
            .map(|&(_, t)| t)
    }

    /// Upward hypernym distance from `s` to each of its ancestors,
    /// including `s` itself at distance 0.
    pub fn ancestor_distances(&self, s: SynsetId) -> HashMap<SynsetId, u32> {
        let mut dist = HashMap::new();
        if self.synset(s).is_none() {
            return dist;
        }
        let mut queue = VecDeque::from([s]);
        dist.insert(s, 0);
        while let Some(cur) = queue.pop_front() {
            let d = dist[&cur];
            for parent in self.hypernyms(cur) {
                if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(parent) {
                    e.insert(d + 1);
                    queue.push_back(parent);
                }
            }
        }
        dist
    }

    /// Shortest number of upward hypernym edges from `from` to `to`.
    pub fn hypernym_path_length(&self, from: SynsetId, to: SynsetId) -> Option<u32> {
        if self.synset(from).is_none() || self.synset(to).is_none() {
            return None;
        }
        if from == to {
            return Some(0);
        }
        let mut seen = HashSet::from([from]);
        let mut frontier = vec![from];
        let mut depth = 0;
        while !frontier.is_empty() {
            depth += 1;
            let mut next = Vec::new();
            for cur in frontier {
                for parent in self.hypernyms(cur) {
                    if parent == to {
                        return Some(depth);
                    }
                    if seen.insert(parent) {
                        next.push(parent);
                    }
                }
            }
            frontier = next;
        }
        None
    }

    /// True iff a non-empty upward hypernym path leads from `s` to `ancestor`.
    pub fn is_descendant(&self, s: SynsetId, ancestor: SynsetId) -> bool {
        s != ancestor && self.hypernym_path_length(s, ancestor).is_some()
    }

    /// Share of synsets with at least one hypernym, holonym and meronym.
    pub fn relation_coverage(&self) -> Coverage {
        let share = |pred: fn(&RelationKind) -> bool| {
            let n = self
                .synsets
                .iter()
                .filter(|s| s.edges.iter().any(|(k, _)| pred(k)))
                .count();
            if self.synsets.is_empty() {
                0.0
            } else {
                n as f64 / self.synsets.len() as f64
            }
        };
        Coverage {
            synsets: self.synsets.len(),
            hypernym: share(RelationKind::is_hypernym),
            holonym: share(RelationKind::is_holonym),
            meronym: share(RelationKind::is_meronym),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Coverage {
    pub synsets: usize,
    pub hypernym: f64,
    pub holonym: f64,
    pub meronym: f64,
}

fn dedup_in_order(ids: &mut Vec<SynsetId>) {
    let mut seen = HashSet::new();
    ids.retain(|id| seen.insert(*id));
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain() -> WordNetGraph {
        // a -> b -> c, plus d unrelated; "bank" has two senses
        parse::tests_support::graph_from_records(&[
            (1, &["a", "bank"], &[("@", 2)], "first"),
            (2, &["b"], &[("@", 3)], "second"),
            (3, &["c"], &[], "root"),
            (4, &["d", "bank"], &[], "other"),
        ])
    }

    #[test]
    fn direct_relata_and_mirror() {
        let g = chain();
        let (a, b) = (SynsetId::noun(1), SynsetId::noun(2));
        assert_eq!(g.direct_relata(a, &RelationKind::Hypernym), vec![b]);
        assert_eq!(g.direct_relata(b, &RelationKind::Hyponym), vec![a]);
    }

    #[test]
    fn path_lengths() {
        let g = chain();
        let (a, c, d) = (SynsetId::noun(1), SynsetId::noun(3), SynsetId::noun(4));
        assert_eq!(g.hypernym_path_length(a, c), Some(2));
        assert_eq!(g.hypernym_path_length(a, a), Some(0));
        assert_eq!(g.hypernym_path_length(c, a), None);
        assert_eq!(g.hypernym_path_length(a, d), None);
        assert!(g.is_descendant(a, c));
        assert!(!g.is_descendant(c, a));
        assert!(!g.is_descendant(a, a));
    }

    #[test]
    fn sense_order_and_names() {
        let g = chain();
        assert_eq!(
            g.synsets_of("bank"),
            &[SynsetId::noun(1), SynsetId::noun(4)]
        );
        assert_eq!(g.synsets_of("Bank").len(), 2);
        assert!(g.synsets_of("zzxqv").is_empty());
        assert_eq!(g.synset_by_name("bank.n.02").unwrap(), SynsetId::noun(4));
        assert_eq!(g.synset_name(SynsetId::noun(4)).unwrap(), "d.n.01");
        for bad in ["bank.06", "bank.n.03", "bank.v.01", "bank.n.00", "bank.n.x1", ".n.01"] {
            assert!(matches!(g.synset_by_name(bad), Err(WnError::UnknownName(_))), "{bad}");
        }
    }

    #[test]
    fn coverage_shares() {
        let c = chain().relation_coverage();
        assert_eq!(c.synsets, 4);
        // a and b have hypernyms
        assert_eq!(c.hypernym, 0.5);
        assert_eq!((c.holonym, c.meronym), (0.0, 0.0));
    }
}
