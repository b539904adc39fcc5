//! Command-line surface.
//!
//! Every command writes a short human-readable summary to stderr and a
//! machine-readable record to `--output` (stdout when omitted).

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use leitmotif_core::learn::{extent_function_for, LearnConfig, LengthChoice, LengthSweep};
use leitmotif_core::{learn_parameters, CoreError, DistanceMeasure, LamaConfig, OverlapRule};
use serde::Serialize;

use crate::bench::{self, Background, NoiseConfig, SynthConfig};
use crate::io::{self, CsvOptions, IoError, LearnedFlags, ResultRecord, TimingRecord, TruthRecord};

/// Exit status: success.
pub const EXIT_OK: i32 = 0;
/// Exit status: no feasible leitmotif.
pub const EXIT_NO_LEITMOTIF: i32 = 1;
/// Exit status: invalid parameter or usage.
pub const EXIT_PARAMETER: i32 = 2;
/// Exit status: unreadable, unwritable or malformed file.
pub const EXIT_IO: i32 = 3;
/// Exit status: memory budget exceeded.
pub const EXIT_CAPACITY: i32 = 4;

/// Default memory budget for distance storage: 1 GiB.
pub const DEFAULT_BUDGET: usize = 1 << 30;

/// Failure of a command, mapped onto an exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad parameter.
    #[error("{0}")]
    Parameter(String),
    /// File problem.
    #[error(transparent)]
    Io(#[from] IoError),
    /// Memory budget exceeded.
    #[error("{0}")]
    Capacity(String),
    /// Nothing feasible to report.
    #[error("no feasible leitmotif")]
    NoLeitmotif,
}

impl CliError {
    /// Exit status of this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Parameter(_) => EXIT_PARAMETER,
            Self::Io(_) => EXIT_IO,
            Self::Capacity(_) => EXIT_CAPACITY,
            Self::NoLeitmotif => EXIT_NO_LEITMOTIF,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Capacity { .. } => Self::Capacity(e.to_string()),
            CoreError::NoLeitmotif => Self::NoLeitmotif,
            other => Self::Parameter(other.to_string()),
        }
    }
}

/// Leitmotif discovery in multivariate time series.
#[derive(Debug, Parser)]
#[command(name = "leitmotif", version, about)]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

/// Subcommands.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Find the leitmotif of a series, learning l and k when not given.
    Discover(DiscoverArgs),
    /// Learn l and k and write the extent function and length profile.
    Learn(LearnArgs),
    /// Generate a series with an implanted leitmotif and its ground truth.
    Synth(SynthArgs),
    /// Score a result record against a ground-truth file.
    Eval(EvalArgs),
    /// Precision and recall under increasing Gaussian noise.
    Noise(NoiseArgs),
}

/// Input series options.
#[derive(Debug, Args)]
pub struct InputArgs {
    /// Series CSV: one column per dimension, one row per time stamp.
    #[arg(long)]
    pub input: PathBuf,
    /// Field delimiter.
    #[arg(long, default_value = ",")]
    pub delimiter: char,
    /// Ignore the first column (time stamps).
    #[arg(long)]
    pub timestamp_column: bool,
}

/// Search parameters shared by `discover` and `learn`.
#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("length").required(true).args(["l", "l_min"]))]
#[command(group = clap::ArgGroup::new("size").required(true).args(["k", "k_max"]))]
pub struct ParamArgs {
    /// Motif length.
    #[arg(long)]
    pub l: Option<usize>,
    /// Smallest length of the sweep.
    #[arg(long, requires = "l_max")]
    pub l_min: Option<usize>,
    /// Largest length of the sweep.
    #[arg(long, requires = "l_min")]
    pub l_max: Option<usize>,
    /// Step of the sweep.
    #[arg(long, default_value_t = 1)]
    pub l_step: usize,
    /// Motif set size.
    #[arg(long)]
    pub k: Option<usize>,
    /// Largest set size for the elbow search.
    #[arg(long)]
    pub k_max: Option<usize>,
    /// Number of dimensions to select.
    #[arg(long)]
    pub f: usize,
    /// Distance measure: zed, ed, cd or cid.
    #[arg(long, default_value = "zed")]
    pub measure: String,
    /// Trivial-match factor in [0, 1].
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Bytes allowed for distance storage.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub memory_budget: usize,
}

impl ParamArgs {
    fn measure(&self) -> Result<DistanceMeasure, CliError> {
        self.measure
            .parse()
            .map_err(|e: CoreError| CliError::Parameter(e.to_string()))
    }

    fn length(&self) -> LengthChoice {
        match (self.l, self.l_min, self.l_max) {
            (Some(l), _, _) => LengthChoice::Fixed(l),
            (None, Some(min), Some(max)) => LengthChoice::Sweep(LengthSweep {
                min,
                max,
                step: self.l_step,
            }),
            _ => unreachable!("clap enforces the length group"),
        }
    }

    fn learn_config(&self) -> Result<LearnConfig, CliError> {
        Ok(LearnConfig {
            k_max: self.k_max.unwrap_or(0),
            f: self.f,
            measure: self.measure()?,
            alpha: self.alpha,
            budget_bytes: self.memory_budget,
        })
    }
}

/// `discover` options.
#[derive(Debug, Args)]
pub struct DiscoverArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Always use the sparse two-pass store.
    #[arg(long)]
    pub sparse: bool,
    /// Disable lower-bound pruning.
    #[arg(long)]
    pub no_pruning: bool,
    /// Result record path.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Flat table of the found occurrences per dimension.
    #[arg(long)]
    pub occurrences: Option<PathBuf>,
}

/// `learn` options.
#[derive(Debug, Args)]
pub struct LearnArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Learning record path.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Two-column table `k,extent` at the chosen length.
    #[arg(long)]
    pub ef_table: Option<PathBuf>,
    /// Two-column table `l,au_ef` of the sweep.
    #[arg(long)]
    pub au_ef_table: Option<PathBuf>,
}

/// `synth` options.
#[derive(Debug, Args)]
pub struct SynthArgs {
    /// RNG seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Series length.
    #[arg(long)]
    pub n: usize,
    /// Number of dimensions.
    #[arg(long)]
    pub d: usize,
    /// Number of copies.
    #[arg(long)]
    pub k: usize,
    /// Copy length.
    #[arg(long)]
    pub l: usize,
    /// Dimensions carrying the copies.
    #[arg(long)]
    pub f: usize,
    /// Copy noise std relative to the template std.
    #[arg(long, default_value_t = 0.0)]
    pub jitter: f64,
    /// Background signal: white or random-walk.
    #[arg(long, value_enum, default_value = "white")]
    pub background: Background,
    /// Series CSV path.
    #[arg(long)]
    pub output_series: PathBuf,
    /// Ground-truth record path.
    #[arg(long)]
    pub output_truth: PathBuf,
}

/// `eval` options.
#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Result record written by `discover`.
    #[arg(long)]
    pub found: PathBuf,
    /// Ground-truth record written by `synth`.
    #[arg(long)]
    pub truth: PathBuf,
    /// Minimum overlap ratio for a match.
    #[arg(long, default_value_t = bench::DEFAULT_OVERLAP)]
    pub threshold: f64,
    /// Evaluation record path.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// `noise` options.
#[derive(Debug, Args)]
pub struct NoiseArgs {
    /// First seed; seeds run from here upwards.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Seeds per level.
    #[arg(long, default_value_t = 20)]
    pub seeds: usize,
    /// Noise levels as fractions of the series std.
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5])]
    pub levels: Vec<f64>,
    /// Series length.
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    /// Number of dimensions.
    #[arg(long, default_value_t = 4)]
    pub d: usize,
    /// Number of copies.
    #[arg(long, default_value_t = 4)]
    pub k: usize,
    /// Copy length.
    #[arg(long, default_value_t = 40)]
    pub l: usize,
    /// Dimensions carrying the copies.
    #[arg(long, default_value_t = 2)]
    pub f: usize,
    /// Copy noise std relative to the template std.
    #[arg(long, default_value_t = 0.0)]
    pub jitter: f64,
    /// Background signal: white or random-walk.
    #[arg(long, value_enum, default_value = "white")]
    pub background: Background,
    /// Minimum overlap ratio for a match.
    #[arg(long, default_value_t = bench::DEFAULT_OVERLAP)]
    pub threshold: f64,
    /// Table `level,precision_mean,precision_std,recall_mean,recall_std`.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Parses `args` (program name first) and runs the command; returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARAMETER } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Runs a parsed command.
pub fn execute(cli: Cli) -> Result<i32, CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Parameter("--threads must be positive".into()));
        }
        if rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
            log::warn!("thread pool already initialized; --threads {n} ignored");
        }
    }
    match cli.command {
        Command::Discover(a) => cmd_discover(&a),
        Command::Learn(a) => cmd_learn(&a),
        Command::Synth(a) => cmd_synth(&a),
        Command::Eval(a) => cmd_eval(&a),
        Command::Noise(a) => cmd_noise(&a),
    }
}

fn emit<T: Serialize>(output: Option<&Path>, value: &T) -> Result<(), CliError> {
    match output {
        Some(p) => io::write_json(p, value)?,
        None => println!("{}", serde_json::to_string_pretty(value).expect("records serialize")),
    }
    Ok(())
}

fn read_input(a: &InputArgs) -> Result<io::SeriesFile, CliError> {
    if !a.delimiter.is_ascii() {
        return Err(CliError::Parameter(format!("delimiter {:?} is not ASCII", a.delimiter)));
    }
    Ok(io::read_series_csv(
        &a.input,
        CsvOptions {
            delimiter: a.delimiter as u8,
            timestamp_column: a.timestamp_column,
        },
    )?)
}

/// `discover`: learn what is missing, run the search, write the record.
pub fn cmd_discover(a: &DiscoverArgs) -> Result<i32, CliError> {
    let start = Instant::now();
    let input = read_input(&a.input)?;
    let ts = &input.series;
    let p = &a.params;
    let measure = p.measure()?;
    let learned = learn_parameters(ts, p.length(), p.k, &p.learn_config()?)?;
    let learn_seconds = start.elapsed().as_secs_f64();
    if !learned.l_confident || !learned.k_confident {
        log::warn!(
            "low-confidence parameters: l = {} (confident: {}), k = {} (confident: {})",
            learned.l,
            learned.l_confident,
            learned.k,
            learned.k_confident
        );
    }
    let (l, k) = (learned.l, learned.k);
    let rule = OverlapRule::new(l, p.alpha)?;
    let config = LamaConfig::new(k, p.f, rule).with_pruning(!a.no_pruning);
    let search_start = Instant::now();
    let outcome = bench::discover(ts, l, measure, &config, p.memory_budget, a.sparse);
    let search_seconds = search_start.elapsed().as_secs_f64();
    let flags = LearnedFlags {
        l: matches!(p.length(), LengthChoice::Sweep(_)),
        k: p.k.is_none(),
        l_confident: learned.l_confident,
        k_confident: learned.k_confident,
    };
    let mut record = ResultRecord {
        schema: io::SCHEMA.into(),
        status: "ok".into(),
        l,
        k,
        f: p.f,
        measure: measure.tag().into(),
        alpha: p.alpha,
        backend: "dense".into(),
        offsets: Vec::new(),
        dims: Vec::new(),
        dim_names: Vec::new(),
        extent: None,
        query: None,
        stats: None,
        learned: flags,
    };
    let (code, motif) = match outcome {
        Ok((out, sparse)) => {
            let m = out.leitmotif;
            record.backend = if sparse { "sparse" } else { "dense" }.into();
            record.offsets = m.offsets.clone();
            record.dims = m.dims.clone();
            record.dim_names = m.dims.iter().map(|&d| input.names[d].clone()).collect();
            record.extent = Some(m.extent);
            record.query = Some(m.query);
            record.stats = Some(out.stats.into());
            eprintln!(
                "leitmotif: l = {l}, k = {k}, f = {}, dims {:?}, offsets {:?}, extent {:.6} ({} backend, {} of {} queries pruned)",
                p.f, record.dim_names, m.offsets, m.extent, record.backend, out.stats.pruned, out.stats.queries
            );
            (EXIT_OK, Some(m))
        }
        Err(CoreError::NoLeitmotif) => {
            record.status = "no-leitmotif".into();
            eprintln!("no feasible leitmotif for l = {l}, k = {k}, f = {}", p.f);
            (EXIT_NO_LEITMOTIF, None)
        }
        Err(e) => return Err(e.into()),
    };
    emit(a.output.as_deref(), &record)?;
    if let Some(path) = &a.occurrences {
        io::write_occurrences(path, ts, &input.names, motif.as_ref())?;
    }
    if let Some(path) = &a.output {
        let timing = TimingRecord {
            schema: io::SCHEMA,
            learn_seconds,
            search_seconds,
            wall_seconds: start.elapsed().as_secs_f64(),
        };
        io::write_json(&io::timing_path(path), &timing)?;
    }
    Ok(code)
}

#[derive(Debug, Serialize)]
struct LearnRecord {
    schema: &'static str,
    l: usize,
    k: usize,
    f: usize,
    measure: &'static str,
    l_confident: bool,
    k_confident: bool,
    lengths: Vec<usize>,
    au_ef: Vec<f64>,
    minima: Vec<usize>,
    ks: Vec<usize>,
    extents: Vec<f64>,
    elbows: Vec<(usize, f64)>,
}

/// `learn`: length profile and extent function with their tables.
pub fn cmd_learn(a: &LearnArgs) -> Result<i32, CliError> {
    let input = read_input(&a.input)?;
    let ts = &input.series;
    let p = &a.params;
    let mut cfg = p.learn_config()?;
    let learned = match p.k {
        // A pinned k still gets an extent function for the tables.
        Some(k) => {
            cfg.k_max = cfg.k_max.max(k);
            let mut r = learn_parameters(ts, p.length(), Some(k), &cfg)?;
            let ef = match &r.profile {
                Some(prof) => prof.extent_functions[prof.lengths.iter().position(|&x| x == r.l).unwrap_or(0)].clone(),
                None => extent_function_for(ts, r.l, k, p.f, cfg.measure, p.alpha, p.memory_budget)?,
            };
            r.extent_function = Some(ef);
            r
        }
        None => learn_parameters(ts, p.length(), None, &cfg)?,
    };
    let ef = learned.extent_function.as_ref().expect("extent function computed");
    let (lengths, au_ef, minima) = match &learned.profile {
        Some(prof) => (prof.lengths.clone(), prof.au_ef.clone(), prof.minima.clone()),
        None => (vec![learned.l], vec![ef.area()], Vec::new()),
    };
    let record = LearnRecord {
        schema: io::SCHEMA,
        l: learned.l,
        k: learned.k,
        f: p.f,
        measure: cfg.measure.tag(),
        l_confident: learned.l_confident,
        k_confident: learned.k_confident,
        lengths,
        au_ef,
        minima,
        ks: ef.ks.clone(),
        extents: ef.extents.clone(),
        elbows: learned.elbows.as_ref().map(|e| e.ranked.clone()).unwrap_or_default(),
    };
    if let Some(path) = &a.ef_table {
        io::write_table(path, ("k", "extent"), ef.ks.iter().zip(&ef.extents))?;
    }
    if let Some(path) = &a.au_ef_table {
        io::write_table(path, ("l", "au_ef"), record.lengths.iter().zip(&record.au_ef))?;
    }
    eprintln!(
        "learned l = {} (confident: {}), k = {} (confident: {}); AU-EF minima at {:?}",
        record.l, record.l_confident, record.k, record.k_confident, record.minima
    );
    emit(a.output.as_deref(), &record)?;
    Ok(EXIT_OK)
}

/// `synth`: series CSV plus ground-truth record.
pub fn cmd_synth(a: &SynthArgs) -> Result<i32, CliError> {
    let cfg = SynthConfig {
        seed: a.seed,
        n: a.n,
        d: a.d,
        k: a.k,
        l: a.l,
        f: a.f,
        jitter: a.jitter,
        background: a.background,
    };
    let (ts, truth) = bench::generate_synthetic(&cfg)?;
    io::write_series_csv(&a.output_series, &ts)?;
    let starts: Vec<usize> = truth.occurrences.iter().map(|o| o.start).collect();
    eprintln!(
        "implanted k = {} copies of length {} into dims {:?} at {:?}",
        truth.k, truth.l, truth.dims, starts
    );
    io::write_json(
        &a.output_truth,
        &TruthRecord {
            schema: io::SCHEMA.into(),
            seed: a.seed,
            n: a.n,
            d: a.d,
            jitter: a.jitter,
            truth,
        },
    )?;
    Ok(EXIT_OK)
}

/// `eval`: precision and recall of a result record.
pub fn cmd_eval(a: &EvalArgs) -> Result<i32, CliError> {
    let found: ResultRecord = io::read_json(&a.found)?;
    let truth: TruthRecord = io::read_json(&a.truth)?;
    let occ = found.occurrences();
    let report = bench::evaluate(&occ, &truth.truth.occurrences, a.threshold)?;
    eprintln!(
        "precision {:.3}, recall {:.3} ({} of {} found, {} truth, threshold {})",
        report.precision,
        report.recall,
        report.matched.len(),
        occ.len(),
        truth.truth.occurrences.len(),
        a.threshold
    );
    let record = io::EvalRecord {
        schema: io::SCHEMA.into(),
        found: occ.len(),
        truth: truth.truth.occurrences.len(),
        report,
    };
    emit(a.output.as_deref(), &record)?;
    Ok(EXIT_OK)
}

/// `noise`: the noise experiment table.
pub fn cmd_noise(a: &NoiseArgs) -> Result<i32, CliError> {
    let cfg = NoiseConfig {
        synth: SynthConfig {
            seed: a.seed,
            n: a.n,
            d: a.d,
            k: a.k,
            l: a.l,
            f: a.f,
            jitter: a.jitter,
            background: a.background,
        },
        levels: a.levels.clone(),
        seeds: a.seeds,
        threshold: a.threshold,
    };
    let rows = bench::noise_experiment(&cfg)?;
    for r in &rows {
        eprintln!(
            "noise {:>4.0}%: precision {:.3} +- {:.3}, recall {:.3} +- {:.3}",
            r.level * 100.0,
            r.precision_mean,
            r.precision_std,
            r.recall_mean,
            r.recall_std
        );
    }
    match &a.output {
        Some(p) => io::write_noise_table(p, &rows)?,
        None => emit(None, &rows)?,
    }
    Ok(EXIT_OK)
}
