use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use relalign::pipeline::{
    RunConfig, ScorerSpec, DEFAULT_ALPHA, DEFAULT_SEED, DEFAULT_THRESHOLD_STEP, DEFAULT_UNRELATED_PAIRS,
};
use serde::Deserialize;

/// Settings shared by every subcommand. Flags override the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// TOML config file; relative paths inside it resolve against its directory
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory holding index.noun and data.noun
    #[arg(long, global = true)]
    pub wordnet_dir: Option<PathBuf>,
    /// Tab-separated response file
    #[arg(long, global = true)]
    pub responses: Option<PathBuf>,
    /// One word per line; restricts responses to these targets
    #[arg(long, global = true)]
    pub allowlist: Option<PathBuf>,
    /// Output directory
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub threshold_step: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// `baseline` or `external:PATH`
    #[arg(long, global = true)]
    pub scorer: Option<ScorerSpec>,
    /// Number of unrelated word pairs sampled for the gloss study
    #[arg(long, global = true)]
    pub unrelated_pairs: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    wordnet_dir: Option<PathBuf>,
    responses_file: Option<PathBuf>,
    allowlist_file: Option<PathBuf>,
    output_dir: Option<PathBuf>,
    threshold_step: Option<f64>,
    seed: Option<u64>,
    alpha: Option<f64>,
    scorer: Option<ScorerSpec>,
    unrelated_pairs: Option<usize>,
}

fn load_file(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("[config] reading {}", path.display()))?;
    let mut cfg: FileConfig =
        toml::from_str(&text).with_context(|| format!("[config] parsing {}", path.display()))?;
    let base = path.parent().unwrap_or(Path::new(""));
    let resolve = |p: &mut Option<PathBuf>| {
        if let Some(p) = p {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
    };
    resolve(&mut cfg.wordnet_dir);
    resolve(&mut cfg.responses_file);
    resolve(&mut cfg.allowlist_file);
    resolve(&mut cfg.output_dir);
    if let Some(ScorerSpec::External(p)) = &mut cfg.scorer {
        if p.is_relative() {
            *p = base.join(&*p);
        }
    }
    Ok(cfg)
}

pub struct Settings {
    pub wordnet_dir: Option<PathBuf>,
    pub responses: Option<PathBuf>,
    pub allowlist: Option<PathBuf>,
    pub out: PathBuf,
    pub threshold_step: f64,
    pub seed: u64,
    pub alpha: f64,
    pub scorer: ScorerSpec,
    pub unrelated_pairs: usize,
}

impl Settings {
    pub fn resolve(args: &CommonArgs) -> Result<Self> {
        let file = match &args.config {
            Some(p) => load_file(p)?,
            None => FileConfig::default(),
        };
        Ok(Self {
            wordnet_dir: args.wordnet_dir.clone().or(file.wordnet_dir),
            responses: args.responses.clone().or(file.responses_file),
            allowlist: args.allowlist.clone().or(file.allowlist_file),
            out: args.out.clone().or(file.output_dir).unwrap_or_else(|| PathBuf::from("out")),
            threshold_step: args.threshold_step.or(file.threshold_step).unwrap_or(DEFAULT_THRESHOLD_STEP),
            seed: args.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            alpha: args.alpha.or(file.alpha).unwrap_or(DEFAULT_ALPHA),
            scorer: args.scorer.clone().or(file.scorer).unwrap_or(ScorerSpec::Baseline),
            unrelated_pairs: args.unrelated_pairs.or(file.unrelated_pairs).unwrap_or(DEFAULT_UNRELATED_PAIRS),
        })
    }

    pub fn wordnet_dir(&self) -> Result<&Path> {
        match &self.wordnet_dir {
            Some(p) => Ok(p),
            None => bail!("[config] --wordnet-dir (or wordnet_dir in the config file) is required"),
        }
    }

    pub fn run_config(&self) -> Result<RunConfig> {
        let Some(responses) = &self.responses else {
            bail!("[config] --responses (or responses_file in the config file) is required");
        };
        let config = RunConfig {
            wordnet_dir: self.wordnet_dir()?.to_path_buf(),
            responses_file: responses.clone(),
            allowlist_file: self.allowlist.clone(),
            output_dir: self.out.clone(),
            threshold_step: self.threshold_step,
            seed: self.seed,
            alpha: self.alpha,
            scorer: self.scorer.clone(),
            unrelated_pairs: self.unrelated_pairs,
        };
        config.validate()?;
        Ok(config)
    }
}
