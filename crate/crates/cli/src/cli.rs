//! Argument definitions and subcommand drivers.

use std::fs::{self, File};
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use graphspectra::density::{average_density, estimate_density, BandwidthRule, DensityOptions, SpectralDensity};
use graphspectra::divergence::{js_divergence, kl_divergence, spectral_entropy, DivergenceKind, DivergenceValue};
use graphspectra::estimation::{Estimator, ParameterGrid, DEFAULT_REPLICATES};
use graphspectra::graph::{metrics, parse_edge_list, write_edge_list, Family, FamilyKind, Graph, ModelSpec};
use graphspectra::jstest::{degree_sample, js_test, GraphSet, DEFAULT_BOOTSTRAP_REPLICATES};
use graphspectra::selection::{classify_network, matched_family, write_selection_table, CandidateConfig};
use graphspectra::spectrum::Spectrum;
use graphspectra::Error;

use crate::experiments::{self, EstimateRow, PowerSetting};
use crate::output::{write_atomic, Cell, Csv, Manifest, OutputSet};
use crate::roc::{decile_counts, rejection_rate};

/// Spectral analysis of random graphs.
#[derive(Debug, Parser)]
#[command(name = "graphspectra", version)]
pub struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Flat `key = value` file of flags; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DensityArgs {
    /// Points of the evaluation grid.
    #[arg(long, default_value_t = graphspectra::density::DEFAULT_GRID_POINTS)]
    pub grid_points: usize,
    /// `silverman`, `sturges` or a fixed positive bandwidth.
    #[arg(long, default_value = "silverman")]
    pub bandwidth: BandwidthRule,
}

impl DensityArgs {
    fn options(&self) -> Result<DensityOptions, CliError> {
        if self.grid_points < 2 {
            return Err(CliError::config("--grid-points must be at least 2"));
        }
        Ok(DensityOptions {
            bandwidth: self.bandwidth,
            grid_points: self.grid_points,
            ..Default::default()
        })
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct StructureArgs {
    /// Edges per new node (scale-free).
    #[arg(long)]
    pub m1: Option<usize>,
    /// Seed nodes (scale-free); defaults to m1.
    #[arg(long)]
    pub n0: Option<usize>,
    /// Lattice neighbors (small-world, even).
    #[arg(long)]
    pub k: Option<usize>,
}

impl StructureArgs {
    /// The family with these constants, falling back to `default`.
    fn family(&self, kind: FamilyKind, default: Option<Family>) -> Result<Family, CliError> {
        let (dm1, dn0, dk) = match default {
            Some(Family::ScaleFree { m1, n0 }) => (Some(m1), Some(n0), None),
            Some(Family::SmallWorld { k }) => (None, None, Some(k)),
            _ => (None, None, None),
        };
        Ok(match kind {
            FamilyKind::ErdosRenyi => Family::ErdosRenyi,
            FamilyKind::ScaleFree => {
                let m1 = self.m1.or(dm1).ok_or_else(|| CliError::config("scale-free needs --m1"))?;
                Family::ScaleFree {
                    m1,
                    n0: self.n0.or(if self.m1.is_some() { None } else { dn0 }).unwrap_or(m1),
                }
            }
            FamilyKind::SmallWorld => Family::SmallWorld {
                k: self.k.or(dk).ok_or_else(|| CliError::config("small-world needs --k"))?,
            },
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Structure {
    /// Candidates keep the structural constants of the generating models.
    Fixed,
    /// Candidates are matched to each observed graph's edge count.
    Matched,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw a random graph and write it as an edge list.
    Generate(GenerateArgs),
    /// Scaled adjacency eigenvalues of an edge list.
    Spectrum(InputArgs),
    /// Spectral density (CSV) of one graph, or the average over several.
    Density(DensityCmd),
    /// Spectral entropy of a graph.
    Entropy(EntropyCmd),
    /// KL divergence between the spectral densities of two graphs.
    Kl(PairCmd),
    /// JS divergence between the spectral densities of two graphs.
    Js(PairCmd),
    /// Minimum-KL estimate of one family's parameter.
    Fit(FitCmd),
    /// Model selection for one graph (JSON).
    Select(SelectCmd),
    /// Model selection for a file or every edge list in a directory (CSV).
    Classify(SelectCmd),
    /// Bootstrap JS test between two directories of edge lists.
    JsTest(JsTestCmd),
    /// Topology metrics (CSV) of edge lists or directories of them.
    Metrics(MetricsCmd),
    /// Mean spectral entropy over a parameter sweep.
    ExpEntropy(ExpEntropyCmd),
    /// Accuracy of the minimum-KL estimator.
    ExpTable1(ExpTable1Cmd),
    /// Accuracy of model selection by graph size.
    ExpFig2(ExpFig2Cmd),
    /// Power of the spectrum and degree tests (ROC curves).
    ExpRoc(ExpRocCmd),
    /// p-values of the spectrum test under the null.
    ExpNull(ExpNullCmd),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GenerateArgs {
    #[arg(long)]
    pub family: FamilyKind,
    #[arg(long)]
    pub n: usize,
    /// p, p_s or p_r.
    #[arg(long)]
    pub theta: f64,
    #[command(flatten)]
    pub structure: StructureArgs,
    #[arg(long)]
    pub seed: u64,
    /// Output file (default: standard output).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct InputArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DensityCmd {
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    #[command(flatten)]
    pub density: DensityArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EntropyCmd {
    pub input: PathBuf,
    #[command(flatten)]
    pub density: DensityArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PairCmd {
    pub first: PathBuf,
    pub second: PathBuf,
    #[command(flatten)]
    pub density: DensityArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FitCmd {
    pub input: PathBuf,
    #[arg(long)]
    pub family: FamilyKind,
    /// Structural constants; matched to the graph's edge count when absent.
    #[command(flatten)]
    pub structure: StructureArgs,
    #[arg(long)]
    pub from: Option<f64>,
    #[arg(long)]
    pub to: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
    /// Graphs per reference density.
    #[arg(long, default_value_t = DEFAULT_REPLICATES)]
    pub mc_reps: usize,
    #[arg(long)]
    pub seed: u64,
    /// Directory for persisted reference densities.
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
    #[command(flatten)]
    pub density: DensityArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SelectCmd {
    pub input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_REPLICATES)]
    pub mc_reps: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
    #[command(flatten)]
    pub density: DensityArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct JsTestCmd {
    /// Directory of edge lists for the first set.
    pub set1: PathBuf,
    /// Directory of edge lists for the second set.
    pub set2: PathBuf,
    /// Compare degree distributions instead of spectra.
    #[arg(long)]
    pub degree: bool,
    #[arg(long, default_value_t = DEFAULT_BOOTSTRAP_REPLICATES)]
    pub bootstrap: usize,
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    pub density: DensityArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write every bootstrap statistic to this CSV.
    #[arg(long)]
    pub sample_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MetricsCmd {
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ExpCommon {
    #[arg(long)]
    pub seed: u64,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// Repetitions (default depends on --full).
    #[arg(long)]
    pub reps: Option<usize>,
    /// Full-scale repetition counts.
    #[arg(long)]
    pub full: bool,
    #[command(flatten)]
    pub density: DensityArgs,
}

impl ExpCommon {
    fn reps(&self, desk: usize, full: usize) -> Result<usize, CliError> {
        let reps = self.reps.unwrap_or(if self.full { full } else { desk });
        positive("--reps", reps)?;
        Ok(reps)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ExpEntropyCmd {
    #[arg(long)]
    pub family: FamilyKind,
    #[arg(long, default_value_t = 500)]
    pub n: usize,
    #[command(flatten)]
    pub structure: StructureArgs,
    #[arg(long)]
    pub from: Option<f64>,
    #[arg(long)]
    pub to: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
    #[command(flatten)]
    pub common: ExpCommon,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ExpTable1Cmd {
    /// Graph sizes (default 100,300; with --full 50,100,200,300).
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    #[arg(long, default_value_t = 1)]
    pub m1: usize,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = DEFAULT_REPLICATES)]
    pub mc_reps: usize,
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
    #[command(flatten)]
    pub common: ExpCommon,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ExpFig2Cmd {
    #[arg(long, value_delimiter = ',', default_values_t = [10, 40, 80, 120])]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    pub m1: usize,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = DEFAULT_REPLICATES)]
    pub mc_reps: usize,
    #[arg(long, value_enum, default_value_t = Structure::Fixed)]
    pub structure: Structure,
    #[command(flatten)]
    pub common: ExpCommon,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ExpRocCmd {
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    /// Graphs in each of the two sets.
    #[arg(long, default_value_t = 50)]
    pub per_set: usize,
    #[arg(long, default_value_t = 2)]
    pub m1: usize,
    #[arg(long, default_value_t = 4)]
    pub k: usize,
    #[arg(long, default_value_t = DEFAULT_BOOTSTRAP_REPLICATES)]
    pub bootstrap: usize,
    /// Families to run (default: all three).
    #[arg(long, value_delimiter = ',')]
    pub families: Option<Vec<FamilyKind>>,
    #[command(flatten)]
    pub common: ExpCommon,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ExpNullCmd {
    #[arg(long, default_value = "erdos-renyi")]
    pub family: FamilyKind,
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long)]
    pub theta: Option<f64>,
    #[command(flatten)]
    pub structure: StructureArgs,
    #[arg(long, default_value_t = 50)]
    pub per_set: usize,
    #[arg(long, default_value_t = DEFAULT_BOOTSTRAP_REPLICATES)]
    pub bootstrap: usize,
    #[command(flatten)]
    pub common: ExpCommon,
}

/// A failure with its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

impl CliError {
    pub fn config(message: impl Into<String>) -> CliError {
        CliError {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }

    fn in_file(path: &Path, e: Error) -> CliError {
        let mut err = CliError::from(e);
        err.message = format!("{}: {}", path.display(), err.message);
        err
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        let code = match e {
            Error::Domain(_) => EXIT_CONFIG,
            Error::Parse { .. } | Error::Io { .. } | Error::Stream(_) | Error::Cache { .. } | Error::DegenerateSample(_) => {
                EXIT_DATA
            }
            Error::GridMismatch(_) | Error::NoFeasibleModel(_) | Error::Numeric(_) => EXIT_NUMERIC,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn positive(flag: &str, v: usize) -> CliResult {
    if v == 0 {
        return Err(CliError::config(format!("{flag} must be positive")));
    }
    Ok(())
}

pub fn read_graph(path: &Path) -> CliResult<Graph> {
    let file = File::open(path).map_err(|e| {
        CliError::from(Error::Io {
            path: path.to_path_buf(),
            source: e,
        })
    })?;
    let parsed = parse_edge_list(BufReader::new(file)).map_err(|e| CliError::in_file(path, e))?;
    if !parsed.duplicate_lines.is_empty() {
        log::warn!(
            "{}: {} duplicate edge(s) ignored (first at line {})",
            path.display(),
            parsed.duplicate_lines.len(),
            parsed.duplicate_lines[0]
        );
    }
    Ok(parsed.graph)
}

/// Files named by `inputs`, with directories expanded to their visible
/// regular files in name order.
pub fn expand_inputs(inputs: &[PathBuf]) -> CliResult<Vec<PathBuf>> {
    let mut files = Vec::new();
    for input in inputs {
        if input.is_dir() {
            let mut entries = Vec::new();
            let listing = fs::read_dir(input).map_err(|e| CliError::from(Error::io_at(input, e)))?;
            for entry in listing {
                let path = entry.map_err(|e| CliError::from(Error::io_at(input, e)))?.path();
                let hidden = path.file_name().is_some_and(|n| n.to_string_lossy().starts_with('.'));
                if path.is_file() && !hidden {
                    entries.push(path);
                }
            }
            entries.sort();
            files.extend(entries);
        } else {
            files.push(input.clone());
        }
    }
    Ok(files)
}

trait IoAt {
    fn io_at(path: &Path, e: std::io::Error) -> Error;
}

impl IoAt for Error {
    fn io_at(path: &Path, e: std::io::Error) -> Error {
        Error::Io {
            path: path.to_path_buf(),
            source: e,
        }
    }
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> CliResult {
    match out {
        Some(path) => write_atomic(path, bytes)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes).map_err(Error::Stream)?;
        }
    }
    Ok(())
}

fn emit_json<T: Serialize>(out: Option<&Path>, value: &T) -> CliResult {
    let mut text = serde_json::to_string_pretty(value).expect("result types serialize");
    text.push('\n');
    emit(out, text.as_bytes())
}

fn stem(path: &Path) -> String {
    path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn estimator(density: &DensityArgs, cache_dir: Option<&PathBuf>) -> CliResult<Estimator> {
    let est = Estimator::new(density.options()?);
    Ok(match cache_dir {
        Some(dir) => est.with_cache_dir(dir)?,
        None => est,
    })
}

fn default_range(kind: FamilyKind) -> (f64, f64, f64) {
    match kind {
        FamilyKind::ErdosRenyi => (0.01, 0.99, 0.01),
        FamilyKind::ScaleFree => (0.0, 2.5, 0.05),
        FamilyKind::SmallWorld => (0.0, 1.0, 0.01),
    }
}

/// Runs a parsed command line.
pub fn run(cli: Cli) -> CliResult {
    if let Some(jobs) = cli.jobs {
        positive("--jobs", jobs)?;
        // fails only if a pool already exists, as in repeated in-process runs
        if rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global().is_err() {
            log::debug!("thread pool already initialized");
        }
    }
    let started = Instant::now();
    match cli.command {
        Command::Generate(a) => generate(a),
        Command::Spectrum(a) => {
            let g = read_graph(&a.input)?;
            let mut buf = Vec::new();
            Spectrum::of(&g)?.write_to(&mut buf)?;
            emit(a.out.as_deref(), &buf)
        }
        Command::Density(a) => density(a),
        Command::Entropy(a) => {
            let opts = a.density.options()?;
            let g = read_graph(&a.input)?;
            let d = estimate_density(Spectrum::of(&g)?.values(), None, &opts)?;
            emit_json(
                a.out.as_deref(),
                &DivergenceValue {
                    kind: DivergenceKind::Entropy,
                    value: spectral_entropy(&d),
                },
            )
        }
        Command::Kl(a) => pair(a, DivergenceKind::Kl),
        Command::Js(a) => pair(a, DivergenceKind::Js),
        Command::Fit(a) => fit(a),
        Command::Select(a) => {
            let est = estimator(&a.density, a.cache_dir.as_ref())?;
            positive("--mc-reps", a.mc_reps)?;
            let g = read_graph(&a.input)?;
            let config = CandidateConfig {
                replicates: a.mc_reps,
                ..Default::default()
            };
            let result = classify_network(&est, &g, &config, a.seed)?;
            emit_json(a.out.as_deref(), &result)
        }
        Command::Classify(a) => classify(a),
        Command::JsTest(a) => js_test_cmd(a),
        Command::Metrics(a) => {
            let files = expand_inputs(&a.inputs)?;
            let mut csv = Csv::with_header(&[
                "network",
                "nodes",
                "edges",
                "average_degree",
                "diameter",
                "clustering_coefficient",
                "average_path_length",
            ]);
            for f in &files {
                let m = metrics(&read_graph(f)?);
                csv.row(&[
                    f.display().to_string().into(),
                    m.node_count.into(),
                    m.edge_count.into(),
                    m.average_degree.into(),
                    m.diameter.into(),
                    m.clustering_coefficient.into(),
                    m.average_path_length.into(),
                ]);
            }
            emit(a.out.as_deref(), &csv.into_bytes())
        }
        Command::ExpEntropy(a) => exp_entropy(a, started),
        Command::ExpTable1(a) => exp_table1(a, started),
        Command::ExpFig2(a) => exp_fig2(a, started),
        Command::ExpRoc(a) => exp_roc(a, started),
        Command::ExpNull(a) => exp_null(a, started),
    }
}

fn generate(a: GenerateArgs) -> CliResult {
    let family = a.structure.family(a.family, None)?;
    let spec = ModelSpec::new(family, a.n, a.theta)?;
    let g = spec.generate(a.seed)?;
    let mut buf = Vec::new();
    writeln!(buf, "# {} seed={}", spec.canonical_key(), a.seed).map_err(Error::Stream)?;
    write_edge_list(&g, &mut buf)?;
    emit(a.out.as_deref(), &buf)
}

fn density(a: DensityCmd) -> CliResult {
    let opts = a.density.options()?;
    let files = expand_inputs(&a.inputs)?;
    let samples = files
        .iter()
        .map(|f| Ok(Spectrum::of(&read_graph(f)?)?.values().to_vec()))
        .collect::<CliResult<Vec<_>>>()?;
    let densities = experiments::shared_densities(&samples, &opts)?;
    let d = average_density(&densities)?;
    let mut buf = Vec::new();
    d.write_csv(&mut buf)?;
    emit(a.out.as_deref(), &buf)
}

fn pair(a: PairCmd, kind: DivergenceKind) -> CliResult {
    let opts = a.density.options()?;
    let samples = [&a.first, &a.second]
        .iter()
        .map(|f| Ok(Spectrum::of(&read_graph(f)?)?.values().to_vec()))
        .collect::<CliResult<Vec<_>>>()?;
    let d = experiments::shared_densities(&samples, &opts)?;
    let value = match kind {
        DivergenceKind::Kl => kl_divergence(&d[0], &d[1])?,
        _ => js_divergence(&d[0], &d[1])?,
    };
    emit_json(a.out.as_deref(), &DivergenceValue { kind, value })
}

fn fit(a: FitCmd) -> CliResult {
    let est = estimator(&a.density, a.cache_dir.as_ref())?;
    positive("--mc-reps", a.mc_reps)?;
    let g = read_graph(&a.input)?;
    let matched = matched_family(a.family, g.node_count(), g.edge_count());
    let family = a.structure.family(a.family, matched)?;
    let (lo, hi, step) = default_range(a.family);
    let params = ParameterGrid::linspace(
        family,
        g.node_count(),
        a.from.unwrap_or(lo),
        a.to.unwrap_or(hi),
        a.step.unwrap_or(step),
        a.mc_reps,
    )?;
    let result = est.fit_spectra(&[Spectrum::of(&g)?], &params, a.seed)?;
    emit_json(a.out.as_deref(), &result)
}

fn classify(a: SelectCmd) -> CliResult {
    let est = estimator(&a.density, a.cache_dir.as_ref())?;
    positive("--mc-reps", a.mc_reps)?;
    let files = expand_inputs(std::slice::from_ref(&a.input))?;
    let graphs = files.iter().map(|f| read_graph(f)).collect::<CliResult<Vec<_>>>()?;
    let config = CandidateConfig {
        replicates: a.mc_reps,
        ..Default::default()
    };
    let mut rows = Vec::with_capacity(files.len());
    for (f, g) in files.iter().zip(&graphs) {
        log::info!("classifying {}", f.display());
        let result = classify_network(&est, g, &config, a.seed).map_err(|e| CliError::in_file(f, e))?;
        rows.push((stem(f), result));
        est.clear_densities();
    }
    let mut buf = Vec::new();
    write_selection_table(&rows, &mut buf)?;
    emit(a.out.as_deref(), &buf)
}

fn js_test_cmd(a: JsTestCmd) -> CliResult {
    let opts = a.density.options()?;
    let load = |dir: &PathBuf| -> CliResult<Vec<Vec<f64>>> {
        let files = expand_inputs(std::slice::from_ref(dir))?;
        if files.is_empty() {
            return Err(CliError::config(format!("{} holds no edge lists", dir.display())));
        }
        files
            .iter()
            .map(|f| {
                let g = read_graph(f)?;
                Ok(if a.degree {
                    degree_sample(&g)
                } else {
                    Spectrum::of(&g)?.values().to_vec()
                })
            })
            .collect()
    };
    let (s1, s2) = (load(&a.set1)?, load(&a.set2)?);
    let all: Vec<Vec<f64>> = s1.iter().chain(&s2).cloned().collect();
    let densities = experiments::shared_densities(&all, &opts)?;
    let (d1, d2) = densities.split_at(s1.len());
    let set1 = GraphSet::new(a.set1.display().to_string(), d1.to_vec())?;
    let set2 = GraphSet::new(a.set2.display().to_string(), d2.to_vec())?;
    let mut result = js_test(&set1, &set2, a.bootstrap, a.seed, a.sample_out.is_some())?;
    if let (Some(path), Some(sample)) = (&a.sample_out, result.sample.take()) {
        let mut csv = Csv::with_header(&["replicate", "js"]);
        for (i, v) in sample.into_iter().enumerate() {
            csv.row(&[i.into(), v.into()]);
        }
        write_atomic(path, &csv.into_bytes())?;
    }
    emit_json(a.out.as_deref(), &result)
}

fn manifest<T: Serialize>(command: &str, seed: u64, args: &T, started: Instant) -> Manifest {
    Manifest {
        command: command.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: Some(seed),
        config: serde_json::to_value(args).expect("arguments serialize"),
        outputs: Vec::new(),
        wall_time_seconds: started.elapsed().as_secs_f64(),
    }
}

fn exp_entropy(a: ExpEntropyCmd, started: Instant) -> CliResult {
    let c = &a.common;
    let opts = c.density.options()?;
    let reps = c.reps(20, 100)?;
    let defaults = match a.family {
        FamilyKind::ErdosRenyi => (0.05, 0.95, 0.05),
        FamilyKind::ScaleFree => (0.0, 3.0, 0.25),
        FamilyKind::SmallWorld => (0.0, 1.0, 0.05),
    };
    let thetas = graphspectra::estimation::steps(
        a.from.unwrap_or(defaults.0),
        a.to.unwrap_or(defaults.1),
        a.step.unwrap_or(defaults.2),
    )?;
    let fallback = match a.family {
        FamilyKind::ScaleFree => Some(Family::ScaleFree { m1: 1, n0: 1 }),
        FamilyKind::SmallWorld => Some(Family::SmallWorld { k: 2 }),
        FamilyKind::ErdosRenyi => None,
    };
    let family = a.structure.family(a.family, fallback)?;
    let base = ModelSpec::new(family, a.n, thetas[0])?;
    let rows = experiments::entropy_curve(&base, &thetas, reps, c.seed, &opts)?;
    let mut csv = Csv::with_header(&["theta", "mean_entropy", "sd_entropy", "theoretical", "reps"]);
    for r in &rows {
        csv.row(&[r.theta.into(), r.mean.into(), r.sd.into(), r.theoretical.into(), reps.into()]);
    }
    let mut out = OutputSet::new(&c.out);
    out.add("entropy.csv", csv.into_bytes());
    out.commit(manifest("exp-entropy", c.seed, &a, started))?;
    Ok(())
}

fn estimate_csv(rows: &[EstimateRow]) -> (Vec<u8>, Vec<u8>) {
    let mut table = Csv::with_header(&["family", "structure", "n", "truth", "mean", "sd", "reps"]);
    let mut raw = Csv::with_header(&["family", "n", "repetition", "theta_hat"]);
    for r in rows {
        table.row(&[
            r.family.kind().name().into(),
            r.family.to_string().into(),
            r.n.into(),
            r.truth.into(),
            r.mean.into(),
            r.sd.into(),
            r.estimates.len().into(),
        ]);
        for (i, &t) in r.estimates.iter().enumerate() {
            raw.row(&[r.family.kind().name().into(), r.n.into(), i.into(), t.into()]);
        }
    }
    (table.into_bytes(), raw.into_bytes())
}

fn exp_table1(a: ExpTable1Cmd, started: Instant) -> CliResult {
    let c = &a.common;
    let reps = c.reps(30, 50)?;
    positive("--mc-reps", a.mc_reps)?;
    let sizes = a
        .sizes
        .clone()
        .unwrap_or_else(|| if c.full { vec![50, 100, 200, 300] } else { vec![100, 300] });
    let cases = experiments::estimate_cases(&sizes, a.m1, a.k, a.mc_reps)?;
    let est = estimator(&c.density, a.cache_dir.as_ref())?;
    let rows = experiments::estimate_table(&est, &cases, reps, c.seed)?;
    let (table, raw) = estimate_csv(&rows);
    let mut out = OutputSet::new(&c.out);
    out.add("table1.csv", table);
    out.add("estimates.csv", raw);
    out.commit(manifest("exp-table1", c.seed, &a, started))?;
    Ok(())
}

fn exp_fig2(a: ExpFig2Cmd, started: Instant) -> CliResult {
    let c = &a.common;
    let reps = c.reps(100, 1000)?;
    positive("--mc-reps", a.mc_reps)?;
    let est = estimator(&c.density, None)?;
    let mut csv = Csv::with_header(&[
        "truth",
        "n",
        "reps",
        "erdos_renyi",
        "scale_free",
        "small_world",
        "infeasible",
        "accuracy",
    ]);
    for &n in &a.sizes {
        log::info!("selection accuracy at n = {n}");
        let (truths, candidates) = experiments::selection_design(n, a.m1, a.k, a.mc_reps)?;
        let rows = match a.structure {
            Structure::Fixed => experiments::selection_accuracy(&est, &truths, &candidates, reps, c.seed)?,
            Structure::Matched => {
                let config = CandidateConfig {
                    replicates: a.mc_reps,
                    ..Default::default()
                };
                experiments::matched_selection_accuracy(&est, &truths, &config, reps, c.seed)?
            }
        };
        est.clear_spectra();
        for r in &rows {
            let mut cells: Vec<Cell> = vec![r.truth.to_string().into(), n.into(), r.reps.into()];
            cells.extend(FamilyKind::ALL.iter().map(|&k| r.proportion(k).into()));
            cells.push(r.infeasible.into());
            cells.push(r.accuracy().into());
            csv.row(&cells);
        }
    }
    let mut out = OutputSet::new(&c.out);
    out.add("selection_accuracy.csv", csv.into_bytes());
    out.commit(manifest("exp-fig2", c.seed, &a, started))?;
    Ok(())
}

fn exp_roc(a: ExpRocCmd, started: Instant) -> CliResult {
    let c = &a.common;
    let opts = c.density.options()?;
    let experiments_count = c.reps(200, 10_000)?;
    positive("--per-set", a.per_set)?;
    let wanted = a.families.clone().unwrap_or_else(|| FamilyKind::ALL.to_vec());
    let settings: Vec<PowerSetting> = PowerSetting::defaults(a.n, a.m1, a.k)?
        .into_iter()
        .filter(|s| wanted.contains(&s.null.family.kind()))
        .collect();
    if a.bootstrap < graphspectra::jstest::MIN_BOOTSTRAP_REPLICATES {
        return Err(CliError::config(format!(
            "--bootstrap must be at least {}",
            graphspectra::jstest::MIN_BOOTSTRAP_REPLICATES
        )));
    }
    let mut curves = Csv::with_header(&["setting", "variant", "threshold", "sensitivity", "false_positive_rate"]);
    let mut aucs = Csv::with_header(&["setting", "null", "alternative", "auc_spectrum", "auc_degree"]);
    let mut pvals = Csv::with_header(&["setting", "hypothesis", "experiment", "p_spectrum", "p_degree"]);
    for s in &settings {
        log::info!("power study for {}", s.null.canonical_key());
        let r = experiments::power_study(s, experiments_count, a.per_set, a.bootstrap, c.seed, &opts)?;
        let name = s.null.family.kind().name();
        for (variant, v) in [("spectrum", &r.spectrum), ("degree", &r.degree)] {
            for p in &v.curve {
                curves.row(&[
                    name.into(),
                    variant.into(),
                    p.threshold.into(),
                    p.sensitivity.into(),
                    p.false_positive_rate.into(),
                ]);
            }
        }
        aucs.row(&[
            name.into(),
            s.null.theta.into(),
            s.alternative.theta.into(),
            r.spectrum.auc.into(),
            r.degree.auc.into(),
        ]);
        for (hyp, spec_p, deg_p) in [
            ("h0", &r.spectrum.null_p_values, &r.degree.null_p_values),
            ("h1", &r.spectrum.alternative_p_values, &r.degree.alternative_p_values),
        ] {
            for (i, (x, y)) in spec_p.iter().zip(deg_p).enumerate() {
                pvals.row(&[name.into(), hyp.into(), i.into(), (*x).into(), (*y).into()]);
            }
        }
    }
    let mut out = OutputSet::new(&c.out);
    out.add("roc_curves.csv", curves.into_bytes());
    out.add("auc.csv", aucs.into_bytes());
    out.add("p_values.csv", pvals.into_bytes());
    out.commit(manifest("exp-roc", c.seed, &a, started))?;
    Ok(())
}

fn exp_null(a: ExpNullCmd, started: Instant) -> CliResult {
    let c = &a.common;
    let opts = c.density.options()?;
    let experiments_count = c.reps(500, 10_000)?;
    positive("--per-set", a.per_set)?;
    let (family, theta) = match a.family {
        FamilyKind::ErdosRenyi => (Family::ErdosRenyi, 0.5),
        FamilyKind::ScaleFree => (a.structure.family(a.family, Some(Family::ScaleFree { m1: 2, n0: 2 }))?, 1.0),
        FamilyKind::SmallWorld => (a.structure.family(a.family, Some(Family::SmallWorld { k: 4 }))?, 0.3),
    };
    let spec = ModelSpec::new(family, a.n, a.theta.unwrap_or(theta))?;
    if a.bootstrap < graphspectra::jstest::MIN_BOOTSTRAP_REPLICATES {
        return Err(CliError::config(format!(
            "--bootstrap must be at least {}",
            graphspectra::jstest::MIN_BOOTSTRAP_REPLICATES
        )));
    }
    let ps = experiments::null_p_values(&spec, experiments_count, a.per_set, a.bootstrap, c.seed, &opts)?;
    let mut sample = Csv::with_header(&["experiment", "p_value"]);
    for (i, &p) in ps.iter().enumerate() {
        sample.row(&[i.into(), p.into()]);
    }
    let mut hist = Csv::with_header(&["bin_lo", "bin_hi", "count"]);
    for (i, count) in decile_counts(&ps).iter().enumerate() {
        hist.row(&[(i as f64 / 10.0).into(), ((i + 1) as f64 / 10.0).into(), (*count).into()]);
    }
    let mut rates = Csv::with_header(&["alpha", "rejection_rate"]);
    for alpha in [0.001, 0.01, 0.05, 0.10] {
        rates.row(&[alpha.into(), rejection_rate(&ps, alpha).into()]);
    }
    let mut out = OutputSet::new(&c.out);
    out.add("null_p_values.csv", sample.into_bytes());
    out.add("null_histogram.csv", hist.into_bytes());
    out.add("null_rejection.csv", rates.into_bytes());
    out.commit(manifest("exp-null", c.seed, &a, started))?;
    Ok(())
}

/// Convenience for callers holding densities rather than graphs.
pub fn density_csv(d: &SpectralDensity) -> Vec<u8> {
    let mut buf = Vec::new();
    d.write_csv(&mut buf).expect("writing to memory");
    buf
}
