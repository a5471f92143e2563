//! Gloss-based similarity between word pairs.
//!
//! A word pair's similarity is the best score over every pairing of the
//! two words' synset glosses. Scorers are pluggable: [`BaselineScorer`] is a
//! token-overlap F1, and [`ExternalScorer`] serves precomputed scores (for
//! instance from a neural model) keyed by synset names.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::io::Read;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::elicitation::Relation;
use crate::matcher::documented_relations;
use crate::metrics::{mann_whitney_u, MannWhitney};
use crate::wn_store::{SynsetId, WordNetGraph};

#[derive(Debug, Error)]
pub enum GlossError {
    #[error("{0:?} is not a noun in the graph")]
    UnknownWord(String),
    #[error("malformed score file at line {line}: {reason}")]
    MalformedScoreFile { line: u64, reason: String },
    #[error("no external score for ({0}, {1})")]
    MissingPair(String, String),
    #[error("only {available} unrelated pairs exist, {requested} requested")]
    InsufficientPairs { requested: usize, available: usize },
    #[error("reading {path}: {source}")]
    Io {
        path: std::path::PathBuf,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy)]
pub struct GlossPair<'g> {
    pub synset_w: SynsetId,
    pub synset_v: SynsetId,
    pub gloss_w: &'g str,
    pub gloss_v: &'g str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimilarityScore {
    pub value: f64,
    pub scorer_id: String,
}

pub trait Scorer {
    fn id(&self) -> &str;
    /// A value in [0, 1].
    fn score(&self, graph: &WordNetGraph, pair: &GlossPair<'_>) -> Result<f64, GlossError>;
}

fn tokens(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// Token-level F1 with exact-match similarity. Each token of `b` may cover
/// at most one equal token of `a`, so the score is 1 exactly when the two
/// token multisets coincide.
pub fn baseline_scorer(gloss_a: &str, gloss_b: &str) -> f64 {
    let (a, b) = (tokens(gloss_a), tokens(gloss_b));
    match (a.is_empty(), b.is_empty()) {
        (true, true) => return 1.0,
        (true, false) | (false, true) => return 0.0,
        _ => {}
    }
    let mut available: HashMap<&str, usize> = HashMap::new();
    for t in &a {
        *available.entry(t).or_insert(0) += 1;
    }
    let mut matched = 0usize;
    for t in &b {
        if let Some(n) = available.get_mut(t.as_str()).filter(|n| **n > 0) {
            *n -= 1;
            matched += 1;
        }
    }
    if matched == 0 {
        return 0.0;
    }
    let precision = matched as f64 / b.len() as f64;
    let recall = matched as f64 / a.len() as f64;
    2.0 * precision * recall / (precision + recall)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BaselineScorer;

impl Scorer for BaselineScorer {
    fn id(&self) -> &str {
        "baseline"
    }

    fn score(&self, _graph: &WordNetGraph, pair: &GlossPair<'_>) -> Result<f64, GlossError> {
        Ok(baseline_scorer(pair.gloss_w, pair.gloss_v))
    }
}

/// Precomputed scores keyed by unordered synset-name pairs.
#[derive(Debug, Clone)]
pub struct ExternalScorer {
    id: String,
    scores: HashMap<(String, String), f64>,
}

fn unordered(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_owned(), b.to_owned())
    } else {
        (b.to_owned(), a.to_owned())
    }
}

impl ExternalScorer {
    pub fn from_reader<R: Read>(id: impl Into<String>, input: R) -> Result<Self, GlossError> {
        #[derive(Deserialize)]
        struct Row {
            synset_a: String,
            synset_b: String,
            score: f64,
        }
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
        let malformed = |e: csv::Error| GlossError::MalformedScoreFile {
            line: e.position().map_or(0, |p| p.line()),
            reason: e.to_string(),
        };
        let headers = reader.headers().map_err(malformed)?.clone();
        let mut record = csv::StringRecord::new();
        let mut scores = HashMap::new();
        while reader.read_record(&mut record).map_err(malformed)? {
            let line = record.position().map_or(0, |p| p.line());
            let row: Row = record.deserialize(Some(&headers)).map_err(|e| GlossError::MalformedScoreFile {
                line,
                reason: e.to_string(),
            })?;
            if !(0.0..=1.0).contains(&row.score) {
                return Err(GlossError::MalformedScoreFile {
                    line,
                    reason: format!("score {} outside [0, 1]", row.score),
                });
            }
            let key = unordered(&row.synset_a, &row.synset_b);
            if let Some(prev) = scores.insert(key, row.score) {
                if prev != row.score {
                    return Err(GlossError::MalformedScoreFile {
                        line,
                        reason: format!("conflicting scores for ({}, {})", row.synset_a, row.synset_b),
                    });
                }
            }
        }
        Ok(Self { id: id.into(), scores })
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn lookup(&self, a: &str, b: &str) -> Option<f64> {
        self.scores.get(&unordered(a, b)).copied()
    }
}

pub fn load_external_scores(path: &Path) -> Result<ExternalScorer, GlossError> {
    let file = std::fs::File::open(path).map_err(|source| GlossError::Io {
        path: path.to_owned(),
        source,
    })?;
    ExternalScorer::from_reader(format!("external:{}", path.display()), file)
}

impl Scorer for ExternalScorer {
    fn id(&self) -> &str {
        &self.id
    }

    fn score(&self, graph: &WordNetGraph, pair: &GlossPair<'_>) -> Result<f64, GlossError> {
        let name = |s: SynsetId| graph.synset_name(s).unwrap_or_else(|| s.to_string());
        let (a, b) = (name(pair.synset_w), name(pair.synset_v));
        match self.lookup(&a, &b) {
            Some(v) => Ok(v),
            // a gloss compared with itself
            None if pair.synset_w == pair.synset_v => Ok(1.0),
            None => Err(GlossError::MissingPair(a, b)),
        }
    }
}

/// Maximum score over all pairs of `w`'s and `v`'s glosses.
pub fn gloss_similarity(
    graph: &WordNetGraph,
    w: &str,
    v: &str,
    scorer: &dyn Scorer,
) -> Result<SimilarityScore, GlossError> {
    let senses = |word: &str| {
        let s = graph.synsets_of(word);
        if s.is_empty() {
            Err(GlossError::UnknownWord(word.to_owned()))
        } else {
            Ok(s)
        }
    };
    let (sw, sv) = (senses(w)?, senses(v)?);
    let mut best = 0.0f64;
    for &a in sw {
        for &b in sv {
            let pair = GlossPair {
                synset_w: a,
                synset_v: b,
                gloss_w: graph.synset(a).map_or("", |s| s.gloss.as_str()),
                gloss_v: graph.synset(b).map_or("", |s| s.gloss.as_str()),
            };
            best = best.max(scorer.score(graph, &pair)?);
        }
    }
    Ok(SimilarityScore {
        value: best,
        scorer_id: scorer.id().to_owned(),
    })
}

/// Draw `n` distinct ordered pairs of distinct vocabulary words with no
/// documented relation between them.
pub fn sample_unrelated(
    graph: &WordNetGraph,
    vocabulary: &BTreeSet<String>,
    n: usize,
    seed: u64,
) -> Result<Vec<(String, String)>, GlossError> {
    let words: Vec<&str> = vocabulary.iter().map(String::as_str).collect();
    if let Some(w) = words.iter().find(|w| !graph.is_noun(w)) {
        return Err(GlossError::UnknownWord((*w).to_owned()));
    }
    let k = words.len();
    let total = k.saturating_mul(k.saturating_sub(1));
    let unrelated = |i: usize, j: usize| documented_relations(graph, words[i], words[j]).is_empty();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let enumerate = |rng: &mut ChaCha8Rng| {
        let mut all: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| (0..k).filter(move |&j| j != i).map(move |j| (i, j)))
            .filter(|&(i, j)| unrelated(i, j))
            .collect();
        if all.len() < n {
            return Err(GlossError::InsufficientPairs {
                requested: n,
                available: all.len(),
            });
        }
        all.shuffle(rng);
        all.truncate(n);
        Ok(all)
    };

    // rejection sampling is only worthwhile when the pair space dwarfs n
    let chosen = if total < n.saturating_mul(4) {
        enumerate(&mut rng)?
    } else {
        let mut seen = HashSet::new();
        let mut chosen = Vec::with_capacity(n);
        let mut attempts = 0usize;
        let budget = n.saturating_mul(50).max(10_000);
        while chosen.len() < n && attempts < budget {
            attempts += 1;
            let (i, j) = (rng.random_range(0..k), rng.random_range(0..k));
            if i != j && !seen.contains(&(i, j)) && unrelated(i, j) {
                seen.insert((i, j));
                chosen.push((i, j));
            }
        }
        if chosen.len() < n {
            enumerate(&mut rng)?
        } else {
            chosen
        }
    };
    Ok(chosen
        .into_iter()
        .map(|(i, j)| (words[i].to_owned(), words[j].to_owned()))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroupStats {
    pub n: usize,
    pub mean: Option<f64>,
}

impl GroupStats {
    pub fn of(scores: &[f64]) -> Self {
        Self {
            n: scores.len(),
            mean: (!scores.is_empty()).then(|| scores.iter().sum::<f64>() / scores.len() as f64),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupComparison {
    pub relation: Relation,
    pub matched: GroupStats,
    pub missing: GroupStats,
    pub unrelated: GroupStats,
    /// `None` when either group is empty.
    pub unrelated_vs_matched: Option<MannWhitney>,
    pub unrelated_vs_missing: Option<MannWhitney>,
    pub matched_vs_missing: Option<MannWhitney>,
}

pub fn group_comparison(
    relation: Relation,
    matched: &[f64],
    missing: &[f64],
    unrelated: &[f64],
    alpha: f64,
) -> GroupComparison {
    let test = |a: &[f64], b: &[f64]| mann_whitney_u(a, b, alpha).ok();
    GroupComparison {
        relation,
        matched: GroupStats::of(matched),
        missing: GroupStats::of(missing),
        unrelated: GroupStats::of(unrelated),
        unrelated_vs_matched: test(unrelated, matched),
        unrelated_vs_missing: test(unrelated, missing),
        matched_vs_missing: test(matched, missing),
    }
}

/// Scores for each word pair, in input order.
pub fn score_pairs<'a, I>(
    graph: &WordNetGraph,
    pairs: I,
    scorer: &dyn Scorer,
) -> Result<Vec<f64>, GlossError>
where
    I: IntoIterator<Item = (&'a str, &'a str)>,
{
    let mut cache: BTreeMap<(&str, &str), f64> = BTreeMap::new();
    let mut out = Vec::new();
    for (w, v) in pairs {
        let value = match cache.get(&(w, v)) {
            Some(&x) => x,
            None => {
                let x = gloss_similarity(graph, w, v, scorer)?.value;
                cache.insert((w, v), x);
                x
            }
        };
        out.push(value);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wn_store::fixture::{render_wndb, FixtureSynset};
    use crate::wn_store::parse_wndb_str;

    fn graph() -> WordNetGraph {
        let synsets = [
            FixtureSynset::new(1, &["entity"], "that which exists").pointer("~", 2).pointer("~", 3),
            FixtureSynset::new(2, &["fruit", "produce"], "a sweet edible part of a plant").pointer("@", 1),
            FixtureSynset::new(3, &["stone"], "a hard lump of rock").pointer("@", 1),
            FixtureSynset::new(4, &["fruit"], "the consequence of some effort"),
            FixtureSynset::new(5, &["cloud"], "a visible mass of water droplets"),
        ];
        let (index, data) = render_wndb(&synsets);
        parse_wndb_str(&index, &data).unwrap()
    }

    #[test]
    fn baseline_examples() {
        assert_eq!(baseline_scorer("a sweet fruit", "a sweet fruit"), 1.0);
        assert_eq!(baseline_scorer("red apple", "blue sky"), 0.0);
        assert!((baseline_scorer("a sweet fruit", "a fruit") - 0.8).abs() < 1e-12);
        assert_eq!(baseline_scorer("", ""), 1.0);
        assert_eq!(baseline_scorer("", "x"), 0.0);
        assert_eq!(baseline_scorer("Fruit, (sweet)", "sweet fruit"), 1.0);
        // repeated tokens are matched one to one
        assert!(baseline_scorer("a a", "a") < 1.0);
    }

    #[test]
    fn similarity_maximizes_over_senses() {
        let g = graph();
        let s = gloss_similarity(&g, "fruit", "produce", &BaselineScorer).unwrap();
        assert_eq!(s.value, 1.0);
        assert_eq!(s.scorer_id, "baseline");
        let expected = [2u32, 4]
            .iter()
            .map(|&o| baseline_scorer(&g.synset(SynsetId::noun(o)).unwrap().gloss, "a hard lump of rock"))
            .fold(0.0, f64::max);
        assert_eq!(gloss_similarity(&g, "fruit", "stone", &BaselineScorer).unwrap().value, expected);
        assert!(matches!(
            gloss_similarity(&g, "fruit", "nothing", &BaselineScorer),
            Err(GlossError::UnknownWord(w)) if w == "nothing"
        ));
    }

    #[test]
    fn external_scores() {
        let csv = "synset_a,synset_b,score\nfruit.n.01,stone.n.01,0.9\n";
        let scorer = ExternalScorer::from_reader("ext", csv.as_bytes()).unwrap();
        assert_eq!(scorer.lookup("stone.n.01", "fruit.n.01"), Some(0.9));
        let g = graph();
        let err = gloss_similarity(&g, "fruit", "stone", &scorer).unwrap_err();
        assert!(matches!(err, GlossError::MissingPair(a, _) if a == "fruit.n.02"));
        let full = format!("{csv}fruit.n.02,stone.n.01,0.2\nfruit.n.02,fruit.n.01,0.3\n");
        let scorer = ExternalScorer::from_reader("ext", full.as_bytes()).unwrap();
        assert_eq!(gloss_similarity(&g, "stone", "fruit", &scorer).unwrap().value, 0.9);
        assert_eq!(gloss_similarity(&g, "fruit", "produce", &scorer).unwrap().value, 1.0);

        let bad = "synset_a,synset_b,score\na.n.01,b.n.01,1.3\n";
        assert!(matches!(
            ExternalScorer::from_reader("ext", bad.as_bytes()),
            Err(GlossError::MalformedScoreFile { line: 2, .. })
        ));
        let garbled = "synset_a,synset_b,score\na.n.01,b.n.01,high\n";
        assert!(ExternalScorer::from_reader("ext", garbled.as_bytes()).is_err());
    }

    #[test]
    fn unrelated_sampling() {
        let g = graph();
        let vocab: BTreeSet<String> = ["entity", "fruit", "stone", "cloud"].map(String::from).into();
        let a = sample_unrelated(&g, &vocab, 6, 7).unwrap();
        assert_eq!(a, sample_unrelated(&g, &vocab, 6, 7).unwrap());
        // 12 ordered pairs, 4 of which are taxonomic
        assert!(matches!(
            sample_unrelated(&g, &vocab, 9, 7),
            Err(GlossError::InsufficientPairs { available: 8, .. })
        ));
        let distinct: HashSet<_> = a.iter().collect();
        assert_eq!(distinct.len(), 6);
        for (w, v) in &a {
            assert_ne!(w, v);
            assert!(documented_relations(&g, w, v).is_empty());
        }
        let synonyms: BTreeSet<String> = ["fruit", "produce"].map(String::from).into();
        assert!(matches!(
            sample_unrelated(&g, &synonyms, 1, 0),
            Err(GlossError::InsufficientPairs { available: 0, .. })
        ));
        let stray: BTreeSet<String> = ["fruit", "zebra"].map(String::from).into();
        assert!(matches!(sample_unrelated(&g, &stray, 1, 0), Err(GlossError::UnknownWord(_))));
    }

    #[test]
    fn comparison_of_identical_groups() {
        let xs: Vec<f64> = (0..25).map(|i| f64::from(i % 5) / 5.0).collect();
        let c = group_comparison(Relation::Syn, &xs, &xs, &xs, 0.05);
        for t in [c.unrelated_vs_matched, c.unrelated_vs_missing, c.matched_vs_missing] {
            assert!(!t.unwrap().reject);
        }
        assert_eq!(c.matched.n, 25);
        let empty = group_comparison(Relation::Syn, &[], &xs, &xs, 0.05);
        assert_eq!((empty.matched.mean, empty.unrelated_vs_matched), (None, None));
    }
}
