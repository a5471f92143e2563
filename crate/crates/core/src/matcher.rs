//! Aggregation of responses into triplets and their classification against
//! the WordNet graph.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::elicitation::{ElicitationRecord, Relation};
use crate::wn_store::WordNetGraph;

#[derive(Debug, Error)]
pub enum MatchError {
    #[error("path distance is only defined for HYP/HPO, got {0}")]
    WrongRelation(Relation),
    #[error("classified CSV line {line}: {reason}")]
    BadCsv { line: usize, reason: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// A set of the six relations, stored as a bitmask.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelationSet(u8);

impl RelationSet {
    pub fn insert(&mut self, r: Relation) {
        self.0 |= 1 << r.index();
    }

    pub fn contains(self, r: Relation) -> bool {
        self.0 & (1 << r.index()) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Relation> {
        Relation::ALL.into_iter().filter(move |&r| self.contains(r))
    }
}

impl FromIterator<Relation> for RelationSet {
    fn from_iter<I: IntoIterator<Item = Relation>>(iter: I) -> Self {
        let mut s = RelationSet::default();
        for r in iter {
            s.insert(r);
        }
        s
    }
}

impl fmt::Display for RelationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.iter().map(Relation::as_str).collect();
        f.write_str(&names.join("+"))
    }
}

impl Serialize for RelationSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Triplet {
    pub target: String,
    pub relation: Relation,
    pub relatum: String,
    pub count: u32,
    pub is_hapax: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExclusionReason {
    MultiRelation { relations: RelationSet },
    RelatumNotNoun,
    /// Target words are nouns by construction; this only fires on
    /// hand-edited inputs.
    TargetNotNoun,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum MatchStatus {
    Matched,
    Missing,
    Mismatched { documented: Relation },
    Excluded { reason: ExclusionReason },
}

impl MatchStatus {
    pub fn is_excluded(&self) -> bool {
        matches!(self, MatchStatus::Excluded { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            MatchStatus::Matched => "matched",
            MatchStatus::Missing => "missing",
            MatchStatus::Mismatched { .. } => "mismatched",
            MatchStatus::Excluded { .. } => "excluded",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassifiedTriplet {
    pub triplet: Triplet,
    pub status: MatchStatus,
    /// Shortest upward path length, HYP/HPO triplets only.
    pub distance: Option<u32>,
    /// Target and relatum are the same word.
    pub self_response: bool,
}

impl ClassifiedTriplet {
    /// Missing HYP/HPO triplet reachable through the hierarchy.
    pub fn is_indirect_match(&self) -> bool {
        self.status == MatchStatus::Missing && self.distance.is_some_and(|d| d > 1)
    }
}

/// Sums counts per distinct (target, relation, relatum). Output is sorted by
/// relation, then target, then relatum.
pub fn aggregate(records: &[ElicitationRecord]) -> Vec<Triplet> {
    let mut counts: BTreeMap<(Relation, &str, &str), u32> = BTreeMap::new();
    for r in records {
        *counts
            .entry((r.relation, r.target.as_str(), r.relatum.as_str()))
            .or_insert(0) += 1;
    }
    counts
        .into_iter()
        .map(|((relation, target, relatum), count)| Triplet {
            target: target.to_string(),
            relation,
            relatum: relatum.to_string(),
            count,
            is_hapax: count == 1,
        })
        .collect()
}

/// Relations WordNet documents directly between any sense of `w` and any
/// sense of `v`, read from `w`'s side: HYP means a sense of `v` is a
/// hypernym of a sense of `w`.
pub fn documented_relations(graph: &WordNetGraph, w: &str, v: &str) -> RelationSet {
    let sw = graph.synsets_of(w);
    let sv = graph.synsets_of(v);
    let mut out = RelationSet::default();
    if sw.is_empty() || sv.is_empty() {
        return out;
    }
    let in_v = |id: crate::wn_store::SynsetId| sv.contains(&id);
    if sw.iter().any(|s| sv.contains(s)) {
        out.insert(Relation::Syn);
    }
    for &s in sw {
        if graph.hypernyms(s).any(in_v) {
            out.insert(Relation::Hyp);
        }
        if graph.hyponyms(s).any(in_v) {
            out.insert(Relation::Hpo);
        }
        if graph.holonyms(s).any(in_v) {
            out.insert(Relation::Hol);
        }
        if graph.meronyms(s).any(in_v) {
            out.insert(Relation::Mer);
        }
        if graph.antonym_synsets(s).any(in_v) {
            out.insert(Relation::Ant);
        }
    }
    if !out.contains(Relation::Ant)
        && sv
            .iter()
            .any(|&t| graph.antonym_synsets(t).any(|x| sw.contains(&x)))
    {
        out.insert(Relation::Ant);
    }
    out
}

pub fn classify(graph: &WordNetGraph, t: &Triplet) -> MatchStatus {
    let excluded = |reason| MatchStatus::Excluded { reason };
    if !graph.is_noun(&t.target) {
        return excluded(ExclusionReason::TargetNotNoun);
    }
    if !graph.is_noun(&t.relatum) {
        return excluded(ExclusionReason::RelatumNotNoun);
    }
    let documented = documented_relations(graph, &t.target, &t.relatum);
    match documented.len() {
        0 => MatchStatus::Missing,
        1 => {
            let d = documented.iter().next().expect("one relation");
            if d == t.relation {
                MatchStatus::Matched
            } else {
                MatchStatus::Mismatched { documented: d }
            }
        }
        _ => excluded(ExclusionReason::MultiRelation {
            relations: documented,
        }),
    }
}

/// Shortest positive upward path over all sense pairs: target to relatum
/// for HYP, relatum to target for HPO.
pub fn indirect_distance(graph: &WordNetGraph, t: &Triplet) -> Result<Option<u32>, MatchError> {
    let (lower, upper) = match t.relation {
        Relation::Hyp => (&t.target, &t.relatum),
        Relation::Hpo => (&t.relatum, &t.target),
        r => return Err(MatchError::WrongRelation(r)),
    };
    let uppers = graph.synsets_of(upper);
    let mut best: Option<u32> = None;
    for &s in graph.synsets_of(lower) {
        let dist = graph.ancestor_distances(s);
        for u in uppers {
            if let Some(&d) = dist.get(u) {
                if d > 0 && best.is_none_or(|b| d < b) {
                    best = Some(d);
                }
            }
        }
    }
    Ok(best)
}

/// Classifies every triplet, in input order, and attaches path distances
/// to matched and missing HYP/HPO triplets.
pub fn classify_all(graph: &WordNetGraph, triplets: &[Triplet]) -> Vec<ClassifiedTriplet> {
    triplets
        .iter()
        .map(|t| {
            let status = classify(graph, t);
            let distance = if t.relation.is_taxonomic()
                && matches!(status, MatchStatus::Matched | MatchStatus::Missing)
            {
                indirect_distance(graph, t).expect("taxonomic relation")
            } else {
                None
            };
            ClassifiedTriplet {
                triplet: t.clone(),
                status,
                distance,
                self_response: t.target == t.relatum,
            }
        })
        .collect()
}

const CSV_HEADER: [&str; 9] = [
    "target",
    "relation",
    "relatum",
    "count",
    "is_hapax",
    "status",
    "documented_relation",
    "exclusion_reason",
    "distance",
];

fn exclusion_label(reason: &ExclusionReason) -> String {
    match reason {
        ExclusionReason::MultiRelation { relations } => format!("multi_relation:{relations}"),
        ExclusionReason::RelatumNotNoun => "relatum_not_noun".into(),
        ExclusionReason::TargetNotNoun => "target_not_noun".into(),
    }
}

pub fn write_classified<W: Write>(out: W, rows: &[ClassifiedTriplet]) -> Result<(), MatchError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for c in rows {
        let t = &c.triplet;
        let (documented, reason) = match &c.status {
            MatchStatus::Mismatched { documented } => (documented.as_str().to_string(), String::new()),
            MatchStatus::Excluded { reason } => (String::new(), exclusion_label(reason)),
            _ => (String::new(), String::new()),
        };
        w.write_record([
            t.target.as_str(),
            t.relation.as_str(),
            &t.relatum,
            &t.count.to_string(),
            if t.is_hapax { "true" } else { "false" },
            c.status.label(),
            &documented,
            &reason,
            &c.distance.map(|d| d.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_classified<R: Read>(input: R) -> Result<Vec<ClassifiedTriplet>, MatchError> {
    let mut reader = csv::Reader::from_reader(input);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(MatchError::BadCsv {
            line: 1,
            reason: format!("unexpected header {header:?}"),
        });
    }
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        let bad = |reason: String| MatchError::BadCsv { line, reason };
        let relation = Relation::from_str(&row[1]).map_err(|e| bad(e.to_string()))?;
        let count: u32 = row[3].parse().map_err(|_| bad(format!("bad count {:?}", &row[3])))?;
        if count == 0 {
            return Err(bad("count must be positive".into()));
        }
        let is_hapax = match &row[4] {
            "true" => true,
            "false" => false,
            other => return Err(bad(format!("bad is_hapax {other:?}"))),
        };
        if is_hapax != (count == 1) {
            return Err(bad("is_hapax disagrees with count".into()));
        }
        let status = match &row[5] {
            "matched" => MatchStatus::Matched,
            "missing" => MatchStatus::Missing,
            "mismatched" => MatchStatus::Mismatched {
                documented: Relation::from_str(&row[6]).map_err(|e| bad(e.to_string()))?,
            },
            "excluded" => MatchStatus::Excluded {
                reason: parse_exclusion(&row[7]).ok_or_else(|| bad(format!("bad exclusion {:?}", &row[7])))?,
            },
            other => return Err(bad(format!("bad status {other:?}"))),
        };
        let distance = match &row[8] {
            "" => None,
            d => Some(d.parse().map_err(|_| bad(format!("bad distance {d:?}")))?),
        };
        let (target, relatum) = (row[0].to_string(), row[2].to_string());
        out.push(ClassifiedTriplet {
            self_response: target == relatum,
            triplet: Triplet {
                target,
                relation,
                relatum,
                count,
                is_hapax,
            },
            status,
            distance,
        });
    }
    Ok(out)
}

fn parse_exclusion(s: &str) -> Option<ExclusionReason> {
    match s {
        "relatum_not_noun" => Some(ExclusionReason::RelatumNotNoun),
        "target_not_noun" => Some(ExclusionReason::TargetNotNoun),
        _ => {
            let list = s.strip_prefix("multi_relation:")?;
            let relations = list
                .split('+')
                .map(Relation::from_str)
                .collect::<Result<RelationSet, _>>()
                .ok()?;
            (relations.len() >= 2).then_some(ExclusionReason::MultiRelation { relations })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wn_store::fixture::{render_wndb, FixtureSynset};
    use crate::wn_store::parse_wndb_str;

    /// fruit <- orange (also "citrus" synonym), food <- fruit,
    /// day !-> night, wheel part-of car, "orange" also a colour sense.
    fn graph() -> WordNetGraph {
        let synsets = vec![
            FixtureSynset::new(10, &["food"], "any substance that can be eaten"),
            FixtureSynset::new(20, &["fruit"], "the ripened seed-bearing part of a plant").pointer("@", 10),
            FixtureSynset::new(30, &["orange", "citrus"], "round yellow-orange fruit").pointer("@", 20),
            FixtureSynset::new(40, &["orange"], "a colour between red and yellow").pointer("@", 50),
            FixtureSynset::new(50, &["colour", "fruit"], "visual attribute"),
            FixtureSynset::new(60, &["day"], "time when it is light").antonym(0, 70, 0),
            FixtureSynset::new(70, &["night"], "time when it is dark"),
            FixtureSynset::new(80, &["car"], "a motor vehicle"),
            FixtureSynset::new(90, &["wheel"], "a round frame").pointer("#p", 80),
        ];
        let (index, data) = render_wndb(&synsets);
        parse_wndb_str(&index, &data).unwrap()
    }

    fn trip(w: &str, r: Relation, v: &str) -> Triplet {
        Triplet {
            target: w.into(),
            relation: r,
            relatum: v.into(),
            count: 1,
            is_hapax: true,
        }
    }

    fn rec(p: &str, t: &str, r: Relation, w: &str, rank: u8, v: &str) -> ElicitationRecord {
        ElicitationRecord {
            participant: p.into(),
            template: t.into(),
            relation: r,
            target: w.into(),
            rank,
            relatum: v.into(),
        }
    }

    #[test]
    fn aggregate_counts_across_templates() {
        let recs = vec![
            rec("p1", "HYP-01", Relation::Hyp, "orange", 1, "fruit"),
            rec("p2", "HYP-02", Relation::Hyp, "orange", 1, "fruit"),
            rec("p2", "HYP-02", Relation::Hyp, "orange", 2, "food"),
        ];
        let ts = aggregate(&recs);
        assert_eq!(ts.len(), 2);
        let fruit = ts.iter().find(|t| t.relatum == "fruit").unwrap();
        assert_eq!((fruit.count, fruit.is_hapax), (2, false));
        let food = ts.iter().find(|t| t.relatum == "food").unwrap();
        assert_eq!((food.count, food.is_hapax), (1, true));
    }

    #[test]
    fn documented_relation_kinds() {
        let g = graph();
        let doc = |w, v| documented_relations(&g, w, v);
        assert_eq!(doc("fruit", "food"), [Relation::Hyp].into_iter().collect());
        assert_eq!(doc("food", "fruit"), [Relation::Hpo].into_iter().collect());
        assert_eq!(doc("wheel", "car"), [Relation::Hol].into_iter().collect());
        assert_eq!(doc("car", "wheel"), [Relation::Mer].into_iter().collect());
        assert_eq!(doc("day", "night"), [Relation::Ant].into_iter().collect());
        assert_eq!(doc("night", "day"), [Relation::Ant].into_iter().collect());
        assert_eq!(doc("orange", "citrus"), [Relation::Syn].into_iter().collect());
        assert_eq!(doc("car", "car"), [Relation::Syn].into_iter().collect());
        assert!(doc("orange", "food").is_empty());
        // orange#2 is a hyponym of colour/fruit#2, and "fruit" has both senses
        assert_eq!(doc("orange", "fruit"), [Relation::Hyp].into_iter().collect());
        assert_eq!(
            doc("colour", "fruit"),
            [Relation::Syn].into_iter().collect::<RelationSet>()
        );
    }

    #[test]
    fn classification() {
        let g = graph();
        assert_eq!(classify(&g, &trip("orange", Relation::Hyp, "fruit")), MatchStatus::Matched);
        assert_eq!(classify(&g, &trip("orange", Relation::Hyp, "food")), MatchStatus::Missing);
        assert_eq!(
            classify(&g, &trip("day", Relation::Syn, "night")),
            MatchStatus::Mismatched { documented: Relation::Ant }
        );
        assert_eq!(
            classify(&g, &trip("orange", Relation::Hyp, "zzxqv")),
            MatchStatus::Excluded { reason: ExclusionReason::RelatumNotNoun }
        );
    }

    #[test]
    fn multi_relation_is_excluded() {
        // "plant" names both tree#1 and its hypernym
        let synsets = vec![
            FixtureSynset::new(1, &["plant"], "x"),
            FixtureSynset::new(2, &["tree", "plant"], "y").pointer("@", 1),
        ];
        let (i, d) = render_wndb(&synsets);
        let g = parse_wndb_str(&i, &d).unwrap();
        let doc = documented_relations(&g, "tree", "plant");
        assert_eq!(doc, [Relation::Hyp, Relation::Syn].into_iter().collect());
        assert_eq!(
            classify(&g, &trip("tree", Relation::Hyp, "plant")),
            MatchStatus::Excluded {
                reason: ExclusionReason::MultiRelation { relations: doc }
            }
        );
    }

    #[test]
    fn distances() {
        let g = graph();
        assert_eq!(indirect_distance(&g, &trip("orange", Relation::Hyp, "fruit")).unwrap(), Some(1));
        assert_eq!(indirect_distance(&g, &trip("orange", Relation::Hyp, "food")).unwrap(), Some(2));
        assert_eq!(indirect_distance(&g, &trip("food", Relation::Hpo, "orange")).unwrap(), Some(2));
        assert_eq!(indirect_distance(&g, &trip("car", Relation::Hyp, "food")).unwrap(), None);
        assert!(matches!(
            indirect_distance(&g, &trip("day", Relation::Ant, "night")),
            Err(MatchError::WrongRelation(Relation::Ant))
        ));
    }

    #[test]
    fn classify_all_attaches_distances() {
        let g = graph();
        let ts = vec![
            trip("orange", Relation::Hyp, "fruit"),
            trip("orange", Relation::Hyp, "food"),
            trip("wheel", Relation::Hol, "car"),
            trip("car", Relation::Syn, "car"),
        ];
        let out = classify_all(&g, &ts);
        assert_eq!(out[0].distance, Some(1));
        assert_eq!(out[1].distance, Some(2));
        assert!(out[1].is_indirect_match());
        assert_eq!(out[2].distance, None);
        assert!(out[3].self_response);
        assert_eq!(out[3].status, MatchStatus::Matched);
        assert!(classify_all(&g, &[]).is_empty());
    }

    #[test]
    fn classified_csv_reads_back() {
        let g = graph();
        let ts = vec![
            trip("orange", Relation::Hyp, "fruit"),
            trip("orange", Relation::Hyp, "food"),
            trip("day", Relation::Syn, "night"),
            trip("orange", Relation::Hyp, "zzxqv"),
        ];
        let out = classify_all(&g, &ts);
        let mut buf = Vec::new();
        write_classified(&mut buf, &out).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("target,relation,relatum,count,is_hapax,status,documented_relation,exclusion_reason,distance\n"));
        assert!(text.contains("day,SYN,night,1,true,mismatched,ANT,,\n"));
        assert_eq!(read_classified(buf.as_slice()).unwrap(), out);
        let multi = parse_exclusion("multi_relation:HYP+SYN").unwrap();
        assert_eq!(
            multi,
            ExclusionReason::MultiRelation {
                relations: [Relation::Hyp, Relation::Syn].into_iter().collect()
            }
        );
        assert!(parse_exclusion("multi_relation:HYP").is_none());
    }
}
