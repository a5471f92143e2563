mod config;

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use relalign::elicitation::{
    builtin_templates, extract_target_words, generate_tasks, load_allowlist, load_seeds, partition_tasks,
    template_checksum, write_tasks,
};
use relalign::matcher::{read_classified, ClassifiedTriplet};
use relalign::pipeline::{self, Stage};

use config::{CommonArgs, Settings};

#[derive(Parser)]
#[command(name = "relalign", version, about = "Align elicited semantic-relation triplets with WordNet")]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse the WordNet noun files and print relation coverage
    ParseCheck,
    /// Render and partition elicitation task sentences
    GenerateTasks {
        /// Seed triplets CSV (target, relation, relatum)
        #[arg(long)]
        seeds: PathBuf,
        /// Number of task subsets
        #[arg(long, default_value_t = 276)]
        subsets: usize,
    },
    /// Aggregate responses and classify triplets into classified.csv
    Classify,
    /// Compute every statistic except the gloss study
    Analyze {
        /// Reuse a classified.csv instead of classifying again
        #[arg(long)]
        classified: Option<PathBuf>,
    },
    /// Run the gloss-similarity study
    Gloss {
        #[arg(long)]
        classified: Option<PathBuf>,
    },
    /// Run everything and write report.json, all tables, and figures
    Report,
}

fn load_classified(
    path: &Option<PathBuf>,
    graph: &relalign::wn_store::WordNetGraph,
    records: impl FnOnce() -> Result<Vec<relalign::elicitation::ElicitationRecord>>,
) -> Result<Vec<ClassifiedTriplet>> {
    match path {
        Some(p) => {
            let file = File::open(p).with_context(|| format!("[{}] opening {}", Stage::Classify, p.display()))?;
            Ok(read_classified(file).with_context(|| format!("[{}] reading {}", Stage::Classify, p.display()))?)
        }
        None => Ok(pipeline::classify_records(graph, &records()?)),
    }
}

fn run(cli: Cli) -> Result<()> {
    let settings = Settings::resolve(&cli.common)?;
    match cli.command {
        Command::ParseCheck => {
            let start = Instant::now();
            let graph = pipeline::load_graph(settings.wordnet_dir()?)?;
            let elapsed = start.elapsed();
            let c = graph.relation_coverage();
            println!("synsets\t{}", c.synsets);
            println!("hypernym_coverage\t{:.4}", c.hypernym);
            println!("holonym_coverage\t{:.4}", c.holonym);
            println!("meronym_coverage\t{:.4}", c.meronym);
            println!("parse_seconds\t{:.3}", elapsed.as_secs_f64());
        }
        Command::GenerateTasks { seeds, subsets } => {
            let seeds = load_seeds(&seeds).context("[ingest] seeds")?;
            let allow = match &settings.allowlist {
                Some(p) => load_allowlist(p).context("[ingest] allowlist")?,
                None => seeds.iter().flat_map(|s| [s.target.clone(), s.relatum.clone()]).collect(),
            };
            let targets = extract_target_words(&seeds, &allow).context("[ingest] target words")?;
            let templates = builtin_templates();
            let tasks = generate_tasks(&targets, &templates);
            let parts = partition_tasks(&tasks, subsets, settings.seed).context("[ingest] partition")?;
            std::fs::create_dir_all(&settings.out).context("[report] output dir")?;
            let path = settings.out.join("tasks.csv");
            let file = File::create(&path).with_context(|| format!("[report] creating {}", path.display()))?;
            write_tasks(BufWriter::new(file), &parts).context("[report] writing tasks")?;
            println!("template_checksum\t{}", template_checksum(&templates));
            println!("tasks\t{}", tasks.len());
            println!("subsets\t{}", parts.len());
            println!("wrote\t{}", path.display());
        }
        Command::Classify => {
            let config = settings.run_config()?;
            let inputs = pipeline::load_inputs(&config)?;
            let classified = pipeline::classify_records(&inputs.graph, &inputs.records);
            let path = pipeline::write_classified_csv(&config.output_dir, &classified)?;
            println!("triplets\t{}", classified.len());
            println!("wrote\t{}", path.display());
        }
        Command::Analyze { classified } => {
            let config = settings.run_config()?;
            let inputs = pipeline::load_inputs(&config)?;
            let classified = load_classified(&classified, &inputs.graph, || Ok(inputs.records.clone()))?;
            let analysis = pipeline::analyze(&inputs.graph, &inputs.records, &classified, &config)?;
            let files =
                pipeline::write_metric_outputs(&config.output_dir, &analysis, &pipeline::frequency_table(&classified))?;
            for f in files {
                println!("wrote\t{}", f.display());
            }
        }
        Command::Gloss { classified } => {
            let config = settings.run_config()?;
            let graph = pipeline::load_graph(&config.wordnet_dir)?;
            let classified = load_classified(&classified, &graph, || Ok(pipeline::load_records(&config)?.0))?;
            let gloss = pipeline::gloss_study(&graph, &classified, &config)?;
            for f in pipeline::write_gloss_outputs(&config.output_dir, &gloss)? {
                println!("wrote\t{}", f.display());
            }
        }
        Command::Report => {
            let config = settings.run_config()?;
            let report = pipeline::run_pipeline(&config)?;
            println!("triplets\t{}", report.analysis.table1.total_triplets);
            println!("hapax_reading\t{:?}", report.provenance.hapax_reading);
            println!("config_hash\t{}", report.provenance.config_hash);
            println!("wrote\t{}", config.output_dir.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
