//! `wsd`: train and evaluate word-sense-disambiguation ensembles from the
//! command line.
//!
//! Four subcommands: `inspect` prints a corpus's sense distribution,
//! `sample` draws a uniform per-sense subsample, `run` executes the full
//! cross-validation experiment and writes reports plus one saved ensemble
//! per fold, and `classify` applies a saved ensemble to new instances.
//!
//! `run` settings resolve in precedence order: command-line flags, then the
//! `--config` JSON file, then built-in defaults (k=5, epsilon=1e-6,
//! vote=majority, scoring=bernoulli, format=marked, report=text). The seed
//! has no default: every run must state one, so every result is
//! reproducible by construction.

use std::fs::{self, File};
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use wsd_core::corpus::{canonical_string, parse_corpus, sense_distribution, uniform_subsample};
use wsd_core::ensemble::{load_ensemble, save_ensemble};
use wsd_core::evaluation::{run_experiment, McNemarMethod, RunConfig};
use wsd_core::report::{render_json, render_text, summary_line};
use wsd_core::{check_epsilon, vote_strategy, Corpus, CorpusFormat, Error, ScoringMode};

#[derive(Parser)]
#[command(
    name = "wsd",
    version,
    about = "Word sense disambiguation with ensembles of naive Bayes classifiers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a corpus's per-sense instance counts and total.
    Inspect {
        /// Corpus file to read.
        #[arg(long)]
        corpus: PathBuf,
        /// Input format: marked or pretokenized.
        #[arg(long, default_value = "marked")]
        format: String,
    },
    /// Draw a uniform per-sense subsample and write it in canonical format.
    Sample {
        /// Corpus file to read.
        #[arg(long)]
        corpus: PathBuf,
        /// Input format: marked or pretokenized.
        #[arg(long, default_value = "marked")]
        format: String,
        /// Instances to keep per sense.
        #[arg(long = "per-sense")]
        per_sense: usize,
        /// RNG seed for the draw.
        #[arg(long)]
        seed: u64,
        /// Output corpus file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the cross-validation experiment and write reports and ensembles.
    Run(RunArgs),
    /// Apply a saved ensemble to a corpus; print one `id<TAB>sense` line
    /// per instance.
    Classify {
        /// Ensemble manifest file (or the directory holding one).
        #[arg(long)]
        ensemble: PathBuf,
        /// Corpus file to classify.
        #[arg(long)]
        corpus: PathBuf,
        /// Input format: marked or pretokenized.
        #[arg(long, default_value = "marked")]
        format: String,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Corpus file to read.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// JSON config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Input format: marked or pretokenized.
    #[arg(long)]
    format: Option<String>,
    /// Fold count for cross-validation.
    #[arg(long)]
    k: Option<usize>,
    /// RNG seed. Required (here or in the config file); no default.
    #[arg(long)]
    seed: Option<u64>,
    /// Smoothing constant in (0, 1).
    #[arg(long)]
    epsilon: Option<f64>,
    /// Vote rule: majority, weighted, all81, or category=<left>,<right>.
    #[arg(long)]
    vote: Option<String>,
    /// Subsample the corpus to this many instances per sense first.
    #[arg(long = "per-sense")]
    per_sense: Option<usize>,
    /// Output directory for reports and fold ensembles.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format: text or structured. Repeat the flag for both.
    #[arg(long = "report")]
    report: Vec<String>,
    /// Stratify the devtest/test halving by sense.
    #[arg(long = "stratify-halves", num_args = 0..=1, default_missing_value = "true")]
    stratify_halves: Option<bool>,
    /// Significance method: chi2 or exact.
    #[arg(long)]
    mcnemar: Option<String>,
    /// Scoring mode: bernoulli or presence.
    #[arg(long)]
    scoring: Option<String>,
}

/// The `--config` file: every field optional, same names as the flags.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    corpus: Option<PathBuf>,
    format: Option<String>,
    k: Option<usize>,
    seed: Option<u64>,
    epsilon: Option<f64>,
    vote: Option<String>,
    per_sense: Option<usize>,
    out: Option<PathBuf>,
    report: Option<Vec<String>>,
    stratify_halves: Option<bool>,
    mcnemar: Option<String>,
    scoring: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ReportKind {
    Text,
    Structured,
}

impl ReportKind {
    fn parse(name: &str) -> Result<ReportKind> {
        match name {
            "text" => Ok(ReportKind::Text),
            "structured" => Ok(ReportKind::Structured),
            other => bail!("unknown report format `{other}` (expected text or structured)"),
        }
    }
}

/// A fully validated `run` invocation.
struct ResolvedRun {
    corpus: PathBuf,
    format: CorpusFormat,
    per_sense: Option<usize>,
    out: PathBuf,
    reports: Vec<ReportKind>,
    config: RunConfig,
}

fn resolve_run(args: RunArgs) -> Result<ResolvedRun> {
    let file: FileConfig = match &args.config {
        Some(path) => {
            let reader = File::open(path)
                .with_context(|| format!("cannot open config file {}", path.display()))?;
            serde_json::from_reader(BufReader::new(reader))
                .with_context(|| format!("bad config file {}", path.display()))?
        }
        None => FileConfig::default(),
    };

    let corpus = args
        .corpus
        .or(file.corpus)
        .ok_or_else(|| anyhow!("a corpus is required (--corpus or config file)"))?;
    let seed = args
        .seed
        .or(file.seed)
        .ok_or_else(|| anyhow!("a seed is required (--seed or config file); there is no default"))?;
    let out = args
        .out
        .or(file.out)
        .ok_or_else(|| anyhow!("an output directory is required (--out or config file)"))?;

    let format = CorpusFormat::parse(
        &args
            .format
            .or(file.format)
            .unwrap_or_else(|| "marked".to_string()),
    )?;
    let report_names = if args.report.is_empty() {
        file.report.unwrap_or_else(|| vec!["text".to_string()])
    } else {
        args.report
    };
    let mut reports = Vec::new();
    for name in &report_names {
        let kind = ReportKind::parse(name)?;
        if !reports.contains(&kind) {
            reports.push(kind);
        }
    }
    if reports.is_empty() {
        bail!("at least one report format is required");
    }

    let mut config = RunConfig::new(seed);
    if let Some(k) = args.k.or(file.k) {
        config.k = k;
    }
    if let Some(epsilon) = args.epsilon.or(file.epsilon) {
        config.epsilon = epsilon;
    }
    if let Some(vote) = args.vote.or(file.vote) {
        config.vote_rule = vote;
    }
    if let Some(scoring) = args.scoring.or(file.scoring) {
        config.scoring = ScoringMode::parse(&scoring)?;
    }
    if let Some(mcnemar) = args.mcnemar.or(file.mcnemar) {
        config.mcnemar_method = McNemarMethod::parse(&mcnemar)?;
    }
    config.stratify_halves = args
        .stratify_halves
        .or(file.stratify_halves)
        .unwrap_or(false);

    // Validate everything up front; no output should exist for a config
    // that was never viable.
    if config.k < 2 {
        return Err(Error::InvalidFoldCount(config.k).into());
    }
    check_epsilon(config.epsilon)?;
    vote_strategy(&config.vote_rule)?;
    if args.per_sense.or(file.per_sense) == Some(0) {
        bail!("--per-sense must be at least 1");
    }

    Ok(ResolvedRun {
        corpus,
        format,
        per_sense: args.per_sense.or(file.per_sense),
        out,
        reports,
        config,
    })
}

fn read_corpus(path: &Path, format: CorpusFormat) -> Result<Corpus> {
    let file =
        File::open(path).with_context(|| format!("cannot open corpus {}", path.display()))?;
    Ok(parse_corpus(BufReader::new(file), format)?)
}

fn cmd_inspect(corpus: &Path, format: &str) -> Result<()> {
    let format = CorpusFormat::parse(format)?;
    match read_corpus(corpus, format) {
        Ok(corpus) => {
            for (sense, count) in sense_distribution(&corpus) {
                println!("{sense}\t{count}");
            }
            println!("total\t{}", corpus.len());
            Ok(())
        }
        // A readable file with no records is a legitimate (empty) corpus.
        Err(e) if matches!(e.downcast_ref(), Some(Error::EmptyCorpus)) => {
            println!("total\t0");
            Ok(())
        }
        Err(e) => Err(e),
    }
}

fn cmd_sample(
    corpus: &Path,
    format: &str,
    per_sense: usize,
    seed: u64,
    out: &Path,
) -> Result<()> {
    let format = CorpusFormat::parse(format)?;
    let full = read_corpus(corpus, format)?;
    let sample = uniform_subsample(&full, per_sense, seed)?;
    fs::write(out, canonical_string(&sample))
        .with_context(|| format!("cannot write {}", out.display()))?;
    Ok(())
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let resolved = resolve_run(args)?;
    let mut corpus = read_corpus(&resolved.corpus, resolved.format)?;
    if let Some(per_sense) = resolved.per_sense {
        corpus = uniform_subsample(&corpus, per_sense, resolved.config.seed)?;
    }

    // The whole experiment runs in memory before anything is written.
    let run = run_experiment(&corpus, &resolved.config)?;

    let out = &resolved.out;
    fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;
    for kind in &resolved.reports {
        let (name, body) = match kind {
            ReportKind::Text => ("report.txt", render_text(&run.report)),
            ReportKind::Structured => ("report.json", render_json(&run.report)),
        };
        let path = out.join(name);
        fs::write(&path, body).with_context(|| format!("cannot write {}", path.display()))?;
    }
    for (f, ensemble) in run.fold_ensembles.iter().enumerate() {
        let dir = out.join(format!("fold_{f}"));
        fs::create_dir_all(&dir).with_context(|| format!("cannot create {}", dir.display()))?;
        save_ensemble(ensemble, &dir)?;
    }

    println!("{}", summary_line(&run.report));
    Ok(())
}

fn cmd_classify(ensemble: &Path, corpus: &Path, format: &str) -> Result<()> {
    let format = CorpusFormat::parse(format)?;
    let manifest = if ensemble.is_dir() {
        ensemble.join("ensemble.manifest")
    } else {
        ensemble.to_path_buf()
    };
    let ensemble = load_ensemble(&manifest)?;
    let corpus = read_corpus(corpus, format)?;
    let stdout = std::io::stdout();
    let mut w = stdout.lock();
    for inst in corpus.instances() {
        writeln!(w, "{}\t{}", inst.id(), ensemble.vote_label(inst))?;
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Inspect { corpus, format } => cmd_inspect(&corpus, &format),
        Command::Sample {
            corpus,
            format,
            per_sense,
            seed,
            out,
        } => cmd_sample(&corpus, &format, per_sense, seed, &out),
        Command::Run(args) => cmd_run(args),
        Command::Classify {
            ensemble,
            corpus,
            format,
        } => cmd_classify(&ensemble, &corpus, &format),
    };
    if let Err(e) = result {
        // A closed pipe (`wsd classify ... | head`) is how the reader says
        // "enough", not a failure.
        if let Some(io) = e.downcast_ref::<std::io::Error>() {
            if io.kind() == std::io::ErrorKind::BrokenPipe {
                return;
            }
        }
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
