//! Command line: `ingest`, `stats`, `classify` and `simulate`.
//!
//! Each command echoes its effective configuration (defaults included) as
//! `#`-prefixed header lines so a run can be reproduced from its output.
//! Files are written into the `--out` directory; if a command fails, the
//! files it already created are removed.

use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::classifier::{evaluate, EvalConfig, Hyperparameters, LabeledSet, Strategy, Taxonomy};
use crate::error::{Error, Result};
use crate::store::{EntityKind, Folksonomy};
use crate::ingest::{self, build_folksonomy, Format, IngestOptions, IngestReport, OrderHint, RawRecord};
use crate::simulator::{describe, generate, Policy, SimConfig};
use crate::stats::{availability_report, avg_distinct_tags, novelty_curve, rank_usage_curve, rub_comparison};
use crate::weighting::Scheme;

#[derive(Debug, Parser)]
#[command(name = "folksonomy", version, about = "Tag distribution analysis and tag-based classification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Read a bookmark file and print the tag availability table.
    Ingest(IngestArgs),
    /// Write distribution statistics as CSV files.
    Stats(StatsArgs),
    /// Run the classification accuracy grid.
    Classify(ClassifyArgs),
    /// Generate a synthetic folksonomy with category labels.
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Jsonl,
    Tsv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Jsonl => Format::Jsonl,
            FormatArg::Tsv => Format::Tsv,
        }
    }
}

#[derive(Clone, Debug, Args)]
pub struct ReadArgs {
    /// Input format.
    #[arg(long, value_enum, default_value = "jsonl")]
    pub format: FormatArg,
    /// Strip the GoodReads reading-state tags (read, currently-reading, to-read).
    #[arg(long)]
    pub strip_goodreads: bool,
    /// Additional automatic tags to strip, comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub auto_tags: Vec<String>,
    /// File order carries no chronological meaning (disables novelty).
    #[arg(long)]
    pub unordered: bool,
    /// Skip malformed lines instead of failing.
    #[arg(long)]
    pub allow_malformed: bool,
}

impl ReadArgs {
    fn options(&self) -> IngestOptions {
        let mut options = if self.strip_goodreads { IngestOptions::goodreads() } else { IngestOptions::default() };
        options.auto_tags.extend(self.auto_tags.iter().map(|t| crate::store::normalize_tag(t)));
        options.file_order_is_chronological = !self.unordered;
        options
    }
}

/// Bookmarks come from exactly one of an input file or a cache.
#[derive(Clone, Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Bookmark file (JSONL or TSV).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Folksonomy cache written by `ingest --write-cache`.
    #[arg(long)]
    pub cache: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub read: ReadArgs,
    /// Write a folksonomy cache for later commands.
    #[arg(long)]
    pub write_cache: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub read: ReadArgs,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// Highest bookmark rank of the novelty curve.
    #[arg(long, default_value_t = crate::stats::DEFAULT_MAX_RANK)]
    pub max_rank: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    CrammerSinger,
    OneVsRest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TaxonomyArg {
    Odp,
    Ddc,
    Lcc,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub read: ReadArgs,
    /// Labels file: `resource_id<TAB>category_id`.
    #[arg(long)]
    pub labels: PathBuf,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "tf,tf-irf,tf-iuf,tf-ibf")]
    pub schemes: Vec<Scheme>,
    /// Training-set sizes, comma-separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 6)]
    pub runs: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Use raw (unnormalized) weights.
    #[arg(long)]
    pub no_normalize: bool,
    /// Merge LCC classes E and F into one category.
    #[arg(long)]
    pub lcc_merge_ef: bool,
    /// Check the label category count against a taxonomy.
    #[arg(long, value_enum)]
    pub taxonomy: Option<TaxonomyArg>,
    /// Only classify resources annotated by at least this many users.
    #[arg(long)]
    pub min_users: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long, default_value_t = 50)]
    pub epochs: usize,
    /// SVM trade-off constant (default 0.01 times the training-set size).
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long, value_enum, default_value = "crammer-singer")]
    pub strategy: StrategyArg,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Output directory (bookmarks.jsonl, labels.tsv).
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value = "none")]
    pub policy: Policy,
    #[arg(long, default_value_t = SimConfig::default().n_users)]
    pub users: usize,
    #[arg(long, default_value_t = SimConfig::default().n_resources)]
    pub resources: usize,
    #[arg(long, default_value_t = SimConfig::default().n_categories)]
    pub categories: usize,
    #[arg(long, default_value_t = SimConfig::default().bookmarks_per_user)]
    pub bookmarks_per_user: f64,
    #[arg(long, default_value_t = SimConfig::default().tags_per_bookmark)]
    pub tags_per_bookmark: f64,
    #[arg(long, default_value_t = SimConfig::default().vocab_size)]
    pub vocab: usize,
    #[arg(long, default_value_t = SimConfig::default().zipf_exponent)]
    pub zipf: f64,
    #[arg(long, default_value_t = SimConfig::default().suggestion_acceptance)]
    pub acceptance: f64,
    #[arg(long, default_value_t = SimConfig::default().n_suggestions)]
    pub suggestions: usize,
    #[arg(long, default_value_t = SimConfig::default().signal_strength)]
    pub signal: f64,
    #[arg(long, default_value_t = SimConfig::default().category_pool_size)]
    pub pool_size: usize,
    #[arg(long, default_value_t = SimConfig::default().seed)]
    pub seed: u64,
}

impl SimulateArgs {
    pub fn config(&self) -> SimConfig {
        SimConfig {
            policy: self.policy,
            n_users: self.users,
            n_resources: self.resources,
            n_categories: self.categories,
            bookmarks_per_user: self.bookmarks_per_user,
            tags_per_bookmark: self.tags_per_bookmark,
            vocab_size: self.vocab,
            zipf_exponent: self.zipf,
            suggestion_acceptance: self.acceptance,
            n_suggestions: self.suggestions,
            signal_strength: self.signal,
            category_pool_size: self.pool_size,
            seed: self.seed,
        }
    }
}

const CACHE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Cache {
    format_version: u32,
    ordered: bool,
    bookmarks: Vec<RawRecord>,
}

/// Writes a versioned JSON snapshot of the folksonomy's bookmarks.
pub fn write_cache<W: Write>(f: &Folksonomy, out: W) -> Result<()> {
    let bookmarks = f
        .bookmarks()
        .iter()
        .enumerate()
        .map(|(i, b)| RawRecord {
            user: f.user_name(b.user).to_owned(),
            resource: f.resource_name(b.resource).to_owned(),
            tags: b.tags.iter().map(|&t| f.tag_name(t).to_owned()).collect(),
            order_hint: Some(OrderHint::Seq(i as u64)),
        })
        .collect();
    serde_json::to_writer(out, &Cache { format_version: CACHE_VERSION, ordered: f.is_ordered(), bookmarks })?;
    Ok(())
}

pub fn read_cache(path: &Path) -> Result<Folksonomy> {
    let cache: Cache = serde_json::from_reader(BufReader::new(File::open(path)?))?;
    if cache.format_version != CACHE_VERSION {
        return Err(Error::CacheVersion(cache.format_version));
    }
    let (mut f, _) = build_folksonomy(cache.bookmarks, &IngestOptions::default());
    if !cache.ordered {
        f.mark_unordered();
    }
    Ok(f)
}

fn read_input(path: &Path, read: &ReadArgs) -> Result<(Folksonomy, IngestReport)> {
    let file = File::open(path)?;
    let (f, report) = ingest::ingest(BufReader::new(file), read.format.into(), &read.options())?;
    if !read.allow_malformed {
        if let Some(first) = report.malformed.first() {
            for m in &report.malformed {
                eprintln!("{}:{}", path.display(), m);
            }
            return Err(Error::Parse {
                path: path.display().to_string(),
                line: first.line,
                reason: format!("{} ({} malformed lines)", first.reason, report.malformed.len()),
            });
        }
    }
    Ok((f, report))
}

fn load(source: &Source, read: &ReadArgs) -> Result<Folksonomy> {
    match (&source.input, &source.cache) {
        (Some(input), None) => Ok(read_input(input, read)?.0),
        (None, Some(cache)) => {
            if !cache.exists() {
                return Err(Error::InvalidConfig(format!("cache {} does not exist", cache.display())));
            }
            read_cache(cache)
        }
        _ => Err(Error::InvalidConfig("exactly one of --input or --cache is required".into())),
    }
}

/// Files created by a command; removed on drop unless committed.
struct Outputs {
    dir: PathBuf,
    created: Vec<PathBuf>,
    committed: bool,
}

impl Outputs {
    fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Outputs { dir: dir.to_owned(), created: Vec::new(), committed: false })
    }

    fn write(&mut self, name: &str, body: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
        let path = self.dir.join(name);
        self.created.push(path.clone());
        let mut w = BufWriter::new(File::create(&path)?);
        body(&mut w)?;
        w.flush()?;
        Ok(())
    }

    fn commit(mut self) -> Vec<PathBuf> {
        self.committed = true;
        std::mem::take(&mut self.created)
    }
}

impl Drop for Outputs {
    fn drop(&mut self) {
        if !self.committed {
            for p in &self.created {
                let _ = fs::remove_file(p);
            }
        }
    }
}

fn header(out: &mut dyn Write, config: &dyn std::fmt::Debug) -> Result<()> {
    writeln!(out, "# folksonomy {}", env!("CARGO_PKG_VERSION"))?;
    for line in format!("{config:#?}").lines() {
        writeln!(out, "# {line}")?;
    }
    Ok(())
}

pub fn cmd_ingest(args: &IngestArgs, out: &mut dyn Write) -> Result<IngestReport> {
    header(out, args)?;
    let (f, report) = read_input(&args.input, &args.read)?;
    writeln!(out, "{}", availability_report(&report))?;
    writeln!(out, "auto tags stripped: {}", report.auto_tags_stripped)?;
    writeln!(out, "malformed lines: {}", report.malformed.len())?;
    if let Some(path) = &args.write_cache {
        let result = File::create(path)
            .map_err(Error::from)
            .and_then(|file| {
                let mut w = BufWriter::new(file);
                write_cache(&f, &mut w)?;
                w.flush()?;
                Ok(())
            });
        if let Err(e) = result {
            let _ = fs::remove_file(path);
            return Err(e);
        }
        writeln!(out, "cache written to {}", path.display())?;
    }
    Ok(report)
}

pub fn cmd_stats(args: &StatsArgs, out: &mut dyn Write) -> Result<Vec<PathBuf>> {
    header(out, args)?;
    let (f, report) = match &args.source.input {
        Some(input) => {
            let (f, r) = read_input(input, &args.read)?;
            (f, Some(r))
        }
        None => (load(&args.source, &args.read)?, None),
    };
    let mut outputs = Outputs::new(&args.out)?;
    if let Some(report) = &report {
        let table = availability_report(report);
        outputs.write("availability.csv", |w| table.write_csv(w))?;
    }
    let averages = avg_distinct_tags(&f)?;
    outputs.write("averages.csv", |w| averages.write_csv(w))?;
    for kind in EntityKind::ALL {
        let curve = rank_usage_curve(&f, kind)?;
        outputs.write(&format!("rank_usage_{}.csv", kind.name()), |w| curve.write_csv(&f, w))?;
    }
    let rub = rub_comparison(&f)?;
    outputs.write("rub.csv", |w| rub.write_csv(w))?;
    match novelty_curve(&f, args.max_rank) {
        Ok(curve) => outputs.write("novelty.csv", |w| curve.write_csv(w))?,
        Err(Error::Unordered) => writeln!(out, "novelty skipped: bookmarks are unordered")?,
        Err(e) => return Err(e),
    }
    let written = outputs.commit();
    for p in &written {
        writeln!(out, "wrote {}", p.display())?;
    }
    Ok(written)
}

pub fn cmd_classify(args: &ClassifyArgs, out: &mut dyn Write) -> Result<Vec<PathBuf>> {
    header(out, args)?;
    let f = load(&args.source, &args.read)?;
    let load = LabeledSet::read_tsv(BufReader::new(File::open(&args.labels)?), &f, args.lcc_merge_ef)?;
    if let Some(&line) = load.malformed.first() {
        return Err(Error::Parse {
            path: args.labels.display().to_string(),
            line,
            reason: "expected resource_id<TAB>category_id".into(),
        });
    }
    let mut labels = load.set;
    if let Some(tax) = args.taxonomy {
        labels.validate_taxonomy(match tax {
            TaxonomyArg::Odp => Taxonomy::Odp,
            TaxonomyArg::Ddc => Taxonomy::Ddc,
            TaxonomyArg::Lcc => Taxonomy::Lcc,
        })?;
    }
    if let Some(min) = args.min_users {
        labels = labels.restrict(&ingest::filter_popular(&f, min)?);
    }
    writeln!(
        out,
        "labeled resources: {} in {} categories ({} labels for unknown resources skipped)",
        labels.len(),
        labels.n_categories(),
        load.unknown_resources
    )?;
    let cfg = EvalConfig {
        schemes: args.schemes.clone(),
        sizes: args.sizes.clone(),
        runs: args.runs,
        seed: args.seed,
        normalize: !args.no_normalize,
        hyper: Hyperparameters {
            c: args.c,
            epochs: args.epochs,
            seed: args.seed,
            strategy: match args.strategy {
                StrategyArg::CrammerSinger => Strategy::CrammerSinger,
                StrategyArg::OneVsRest => Strategy::OneVsRest,
            },
        },
    };
    let grid = match args.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::InvalidConfig(e.to_string()))?
            .install(|| evaluate(&f, &labels, &cfg))?,
        None => evaluate(&f, &labels, &cfg)?,
    };
    let mut outputs = Outputs::new(&args.out)?;
    outputs.write("grid.csv", |w| grid.write_csv(w))?;
    outputs.write("grid_runs.csv", |w| grid.write_runs_csv(w))?;
    grid.write_csv(&mut *out)?;
    let written = outputs.commit();
    for p in &written {
        writeln!(out, "wrote {}", p.display())?;
    }
    Ok(written)
}

pub fn cmd_simulate(args: &SimulateArgs, out: &mut dyn Write) -> Result<Vec<PathBuf>> {
    let cfg = args.config();
    header(out, &cfg)?;
    let sim = generate(&cfg)?;
    let mut outputs = Outputs::new(&args.out)?;
    outputs.write("bookmarks.jsonl", |w| sim.write_jsonl(w))?;
    outputs.write("labels.tsv", |w| sim.write_labels(w))?;
    writeln!(out, "{}", describe(&sim.folksonomy)?)?;
    let written = outputs.commit();
    for p in &written {
        writeln!(out, "wrote {}", p.display())?;
    }
    Ok(written)
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Ingest(a) => cmd_ingest(a, out).map(drop),
        Command::Stats(a) => cmd_stats(a, out).map(drop),
        Command::Classify(a) => cmd_classify(a, out).map(drop),
        Command::Simulate(a) => cmd_simulate(a, out).map(drop),
    }
}

/// Entry point for the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match run(&cli, &mut lock) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
