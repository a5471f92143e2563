//! End-to-end analysis: parse, ingest, classify, measure, report.

mod output;
mod plot;
pub mod published;

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::elicitation::{self, builtin_templates, template_checksum, ElicitationRecord, Relation};
use crate::gloss_sim::{
    group_comparison, load_external_scores, sample_unrelated, score_pairs, BaselineScorer,
    GroupComparison, Scorer,
};
use crate::matcher::{aggregate, classify_all, ClassifiedTriplet, MatchStatus, Triplet};
use crate::metrics::{
    abstract_physical_split, distance_analysis, elicitation_frequency, match_rate_curve,
    mismatch_matrix, status_distribution, template_association, threshold_grid,
    AbstractPhysicalSplit, AssociationScores, CurvePoint, DistanceSummary, FrequencyTable,
    HapaxFilter, MismatchMatrix, StatusCounts,
};
use crate::wn_store::{parse_wordnet, Coverage, WordNetGraph};

pub use output::{report_json, write_classified_csv, write_gloss_outputs, write_metric_outputs, write_report};
pub use plot::emit_plots;
pub use published::HapaxReading;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Config,
    Parse,
    Ingest,
    Classify,
    Analyze,
    Gloss,
    Report,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Config => "config",
            Stage::Parse => "parse",
            Stage::Ingest => "ingest",
            Stage::Classify => "classify",
            Stage::Analyze => "analyze",
            Stage::Gloss => "gloss",
            Stage::Report => "report",
        })
    }
}

#[derive(Debug, Error)]
#[error("[{stage}] {source}")]
pub struct PipelineError {
    pub stage: Stage,
    #[source]
    pub source: Box<dyn std::error::Error + Send + Sync>,
}

impl PipelineError {
    pub fn new(stage: Stage, source: impl Into<Box<dyn std::error::Error + Send + Sync>>) -> Self {
        Self {
            stage,
            source: source.into(),
        }
    }
}

pub(crate) fn at<E>(stage: Stage) -> impl FnOnce(E) -> PipelineError
where
    E: Into<Box<dyn std::error::Error + Send + Sync>>,
{
    move |e| PipelineError::new(stage, e)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScorerSpec {
    Baseline,
    External(PathBuf),
}

impl FromStr for ScorerSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once(':') {
            None if s == "baseline" => Ok(ScorerSpec::Baseline),
            Some(("external", path)) if !path.is_empty() => Ok(ScorerSpec::External(path.into())),
            _ => Err(format!("scorer must be `baseline` or `external:PATH`, got {s:?}")),
        }
    }
}

impl fmt::Display for ScorerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScorerSpec::Baseline => f.write_str("baseline"),
            ScorerSpec::External(p) => write!(f, "external:{}", p.display()),
        }
    }
}

impl Serialize for ScorerSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ScorerSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

pub const DEFAULT_THRESHOLD_STEP: f64 = 0.01;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_ALPHA: f64 = 0.05;
pub const DEFAULT_UNRELATED_PAIRS: usize = 30_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub wordnet_dir: PathBuf,
    pub responses_file: PathBuf,
    #[serde(default)]
    pub allowlist_file: Option<PathBuf>,
    pub output_dir: PathBuf,
    #[serde(default = "default_step")]
    pub threshold_step: f64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_scorer")]
    pub scorer: ScorerSpec,
    #[serde(default = "default_unrelated")]
    pub unrelated_pairs: usize,
}

fn default_step() -> f64 {
    DEFAULT_THRESHOLD_STEP
}
fn default_seed() -> u64 {
    DEFAULT_SEED
}
fn default_alpha() -> f64 {
    DEFAULT_ALPHA
}
fn default_scorer() -> ScorerSpec {
    ScorerSpec::Baseline
}
fn default_unrelated() -> usize {
    DEFAULT_UNRELATED_PAIRS
}

impl RunConfig {
    pub fn new(wordnet_dir: PathBuf, responses_file: PathBuf, output_dir: PathBuf) -> Self {
        Self {
            wordnet_dir,
            responses_file,
            allowlist_file: None,
            output_dir,
            threshold_step: DEFAULT_THRESHOLD_STEP,
            seed: DEFAULT_SEED,
            alpha: DEFAULT_ALPHA,
            scorer: ScorerSpec::Baseline,
            unrelated_pairs: DEFAULT_UNRELATED_PAIRS,
        }
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        let fail = |msg: String| Err(PipelineError::new(Stage::Config, msg));
        if !(self.threshold_step > 0.0 && self.threshold_step <= 1.0) {
            return fail(format!("threshold_step must lie in (0, 1], got {}", self.threshold_step));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return fail(format!("alpha must lie in (0, 1), got {}", self.alpha));
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON encoding. The output directory does
    /// not affect results and is left out.
    pub fn hash(&self) -> String {
        let mut keyed = self.clone();
        keyed.output_dir = PathBuf::new();
        let json = serde_json::to_vec(&keyed).expect("config serializes");
        format!("{:x}", Sha256::digest(json))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1Row {
    pub relation: Relation,
    pub target_words: usize,
    pub templates: usize,
    pub triplets: usize,
    pub hapax: usize,
    pub non_hapax: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1 {
    pub rows: Vec<Table1Row>,
    pub total_target_words: usize,
    pub unique_target_words: usize,
    pub total_triplets: usize,
    pub total_hapax: usize,
    pub total_non_hapax: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatusReport {
    pub all: Vec<StatusCounts>,
    pub hapax: Vec<StatusCounts>,
    pub non_hapax: Vec<StatusCounts>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationCurve {
    pub relation: Relation,
    pub points: Vec<CurvePoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixReport {
    pub overall: MismatchMatrix,
    pub split: AbstractPhysicalSplit,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GlossReport {
    pub scorer: String,
    pub n_unrelated: usize,
    pub comparisons: Vec<GroupComparison>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub config_hash: String,
    pub config: RunConfig,
    pub template_checksum: String,
    pub wordnet: Coverage,
    pub n_records: usize,
    /// Records dropped because their target is not on the allowlist.
    pub n_records_dropped: usize,
    pub hapax_reading: HapaxReading,
    pub hapax_note: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Analysis {
    pub table1: Table1,
    pub status_dist: StatusReport,
    pub curves: Vec<RelationCurve>,
    pub matrix: MatrixReport,
    pub distances: Vec<DistanceSummary>,
    pub association: Vec<AssociationScores>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    #[serde(flatten)]
    pub analysis: Analysis,
    pub gloss: GlossReport,
    pub provenance: Provenance,
}

pub struct Inputs {
    pub graph: WordNetGraph,
    pub records: Vec<ElicitationRecord>,
    pub n_dropped: usize,
}

pub fn load_graph(dir: &Path) -> Result<WordNetGraph, PipelineError> {
    parse_wordnet(dir).map_err(at(Stage::Parse))
}

/// Responses, restricted to allowlisted targets when an allowlist is set.
pub fn load_records(config: &RunConfig) -> Result<(Vec<ElicitationRecord>, usize), PipelineError> {
    let mut records = elicitation::ingest_responses(&config.responses_file).map_err(at(Stage::Ingest))?;
    let mut dropped = 0;
    if let Some(path) = &config.allowlist_file {
        let allow = elicitation::load_allowlist(path).map_err(at(Stage::Ingest))?;
        let before = records.len();
        records.retain(|r| allow.contains(&r.target));
        dropped = before - records.len();
    }
    Ok((records, dropped))
}

pub fn load_inputs(config: &RunConfig) -> Result<Inputs, PipelineError> {
    config.validate()?;
    let graph = load_graph(&config.wordnet_dir)?;
    let (records, n_dropped) = load_records(config)?;
    Ok(Inputs {
        graph,
        records,
        n_dropped,
    })
}

pub fn classify_records(graph: &WordNetGraph, records: &[ElicitationRecord]) -> Vec<ClassifiedTriplet> {
    classify_all(graph, &aggregate(records))
}

pub fn triplets_of(classified: &[ClassifiedTriplet]) -> Vec<Triplet> {
    classified.iter().map(|c| c.triplet.clone()).collect()
}

pub fn table1(records: &[ElicitationRecord], classified: &[ClassifiedTriplet]) -> Table1 {
    let rows: Vec<Table1Row> = Relation::ALL
        .into_iter()
        .map(|relation| {
            let rel_records = records.iter().filter(|r| r.relation == relation);
            let targets: HashSet<&str> = rel_records.clone().map(|r| r.target.as_str()).collect();
            let templates: HashSet<&str> = rel_records.map(|r| r.template.as_str()).collect();
            let triplets: Vec<&Triplet> = classified
                .iter()
                .map(|c| &c.triplet)
                .filter(|t| t.relation == relation)
                .collect();
            let hapax = triplets.iter().filter(|t| t.is_hapax).count();
            Table1Row {
                relation,
                target_words: targets.len(),
                templates: templates.len(),
                triplets: triplets.len(),
                hapax,
                non_hapax: triplets.len() - hapax,
            }
        })
        .collect();
    let unique: HashSet<&str> = records.iter().map(|r| r.target.as_str()).collect();
    Table1 {
        total_target_words: rows.iter().map(|r| r.target_words).sum(),
        unique_target_words: unique.len(),
        total_triplets: rows.iter().map(|r| r.triplets).sum(),
        total_hapax: rows.iter().map(|r| r.hapax).sum(),
        total_non_hapax: rows.iter().map(|r| r.non_hapax).sum(),
        rows,
    }
}

pub fn hapax_reading(table: &Table1) -> HapaxReading {
    let hapax: [usize; 6] = std::array::from_fn(|i| table.rows[i].hapax);
    let non_hapax: [usize; 6] = std::array::from_fn(|i| table.rows[i].non_hapax);
    HapaxReading::resolve(&hapax, &non_hapax)
}

/// Every statistic except the gloss study.
pub fn analyze(
    graph: &WordNetGraph,
    records: &[ElicitationRecord],
    classified: &[ClassifiedTriplet],
    config: &RunConfig,
) -> Result<Analysis, PipelineError> {
    let freq = elicitation_frequency(&triplets_of(classified));
    let grid = threshold_grid(config.threshold_step).map_err(at(Stage::Analyze))?;
    let curves = Relation::ALL
        .into_iter()
        .map(|relation| {
            match_rate_curve(classified, &freq, relation, &grid).map(|points| RelationCurve { relation, points })
        })
        .collect::<Result<_, _>>()
        .map_err(at(Stage::Analyze))?;
    let split = abstract_physical_split(graph, classified, &freq, config.alpha).map_err(at(Stage::Analyze))?;
    Ok(Analysis {
        table1: table1(records, classified),
        status_dist: StatusReport {
            all: status_distribution(classified, HapaxFilter::All),
            hapax: status_distribution(classified, HapaxFilter::Hapax),
            non_hapax: status_distribution(classified, HapaxFilter::NonHapax),
        },
        curves,
        matrix: MatrixReport {
            overall: mismatch_matrix(classified, &freq),
            split,
        },
        distances: [Relation::Hyp, Relation::Hpo]
            .into_iter()
            .map(|r| distance_analysis(classified, &freq, r))
            .collect(),
        association: template_association(records),
    })
}

pub fn frequency_table(classified: &[ClassifiedTriplet]) -> FrequencyTable {
    elicitation_frequency(&triplets_of(classified))
}

fn build_scorer(spec: &ScorerSpec) -> Result<Box<dyn Scorer>, PipelineError> {
    Ok(match spec {
        ScorerSpec::Baseline => Box::new(BaselineScorer),
        ScorerSpec::External(path) => Box::new(load_external_scores(path).map_err(at(Stage::Gloss))?),
    })
}

/// Gloss similarity of non-hapax matched and missing triplets against
/// sampled unrelated pairs. Self-responses are left out.
pub fn gloss_study(
    graph: &WordNetGraph,
    classified: &[ClassifiedTriplet],
    config: &RunConfig,
) -> Result<GlossReport, PipelineError> {
    let scorer = build_scorer(&config.scorer)?;
    let vocabulary: BTreeSet<String> = classified
        .iter()
        .flat_map(|c| [&c.triplet.target, &c.triplet.relatum])
        .filter(|w| graph.is_noun(w))
        .cloned()
        .collect();
    let unrelated_pairs =
        sample_unrelated(graph, &vocabulary, config.unrelated_pairs, config.seed).map_err(at(Stage::Gloss))?;
    let unrelated = score_pairs(
        graph,
        unrelated_pairs.iter().map(|(w, v)| (w.as_str(), v.as_str())),
        scorer.as_ref(),
    )
    .map_err(at(Stage::Gloss))?;

    let mut comparisons = Vec::new();
    for relation in Relation::ALL {
        let group = |status: MatchStatus| {
            let pairs = classified
                .iter()
                .filter(|c| {
                    c.triplet.relation == relation && !c.triplet.is_hapax && !c.self_response && c.status == status
                })
                .map(|c| (c.triplet.target.as_str(), c.triplet.relatum.as_str()));
            score_pairs(graph, pairs, scorer.as_ref()).map_err(at(Stage::Gloss))
        };
        let matched = group(MatchStatus::Matched)?;
        let missing = group(MatchStatus::Missing)?;
        comparisons.push(group_comparison(relation, &matched, &missing, &unrelated, config.alpha));
    }
    Ok(GlossReport {
        scorer: scorer.id().to_owned(),
        n_unrelated: unrelated.len(),
        comparisons,
    })
}

pub fn provenance(
    config: &RunConfig,
    graph: &WordNetGraph,
    inputs_records: usize,
    n_dropped: usize,
    table: &Table1,
) -> Provenance {
    let reading = hapax_reading(table);
    Provenance {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        config_hash: config.hash(),
        config: config.clone(),
        template_checksum: template_checksum(&builtin_templates()),
        wordnet: graph.relation_coverage(),
        n_records: inputs_records,
        n_records_dropped: n_dropped,
        hapax_reading: reading,
        hapax_note: reading.describe(),
    }
}

/// Runs every stage and writes all tables, `report.json`, and figures
/// under the configured output directory.
pub fn run_pipeline(config: &RunConfig) -> Result<AnalysisReport, PipelineError> {
    let inputs = load_inputs(config)?;
    let classified = classify_records(&inputs.graph, &inputs.records);
    let analysis = analyze(&inputs.graph, &inputs.records, &classified, config)?;
    let gloss = gloss_study(&inputs.graph, &classified, config)?;
    let provenance = provenance(
        config,
        &inputs.graph,
        inputs.records.len(),
        inputs.n_dropped,
        &analysis.table1,
    );
    let report = AnalysisReport {
        analysis,
        gloss,
        provenance,
    };
    let dir = &config.output_dir;
    write_classified_csv(dir, &classified)?;
    write_metric_outputs(dir, &report.analysis, &frequency_table(&classified))?;
    write_gloss_outputs(dir, &report.gloss)?;
    write_report(dir, &report)?;
    emit_plots(&report, dir)?;
    Ok(report)
}
