//! Command-line front end: fit, generate, transform, plot, and full
//! pipelines over distribution files.
//!
//! Exit codes are part of the interface: 0 success, 1 argument error,
//! 2 input or parse error, 3 numeric failure. Diagnostics go to standard
//! error; standard output carries exactly one summary line per successful
//! run. Every subcommand renders its outputs in memory first and writes
//! files only after the whole computation has succeeded, so a nonzero exit
//! never leaves partial results behind.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde::Deserialize;

use crate::datasets::{generate_blobs, load_csv_grouped, BlobSpec, FitMethod};
use crate::distribution::{Distribution, MultivariateNormal};
use crate::error::{Error, Result};
use crate::io::{
    load_distributions, render_distribution_file, DistributionFile,
};
use crate::transforms::{uamds_fit, uamds_stress, uapca, EmbeddingResult, UamdsParams};
use crate::viz::{
    self, render_contours, render_matrix, render_scatter, render_univariate, DiagKind, OffDiag,
    PlotStyle, QuantileSpec, UnivariateKind,
};

/// Environment variable consulted when `--seed` is absent.
pub const SEED_ENV: &str = "UNCERTKIT_SEED";

const PLOT_KINDS: [&str; 8] = [
    "scatter", "contour", "isoband", "box", "violin", "strip", "swarm", "matrix",
];

#[derive(Parser)]
#[command(
    name = "uncertkit",
    version,
    about = "Fit, reduce, and plot multivariate distributions",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit one distribution per group of CSV rows.
    Fit {
        /// CSV file with a header row.
        #[arg(long)]
        input: PathBuf,
        /// Column whose values split rows into groups.
        #[arg(long = "group-by")]
        group_by: String,
        /// Model fitted to each group.
        #[arg(long, value_parser = ["gaussian", "kde"], default_value = "gaussian")]
        method: String,
        /// Distribution file to write.
        #[arg(long)]
        output: PathBuf,
    },
    /// Generate a synthetic distribution collection.
    Dataset {
        /// Generator to run.
        #[arg(long, value_parser = ["blobs"])]
        name: String,
        /// Number of distributions.
        #[arg(long)]
        count: usize,
        /// Dimension of each distribution.
        #[arg(long)]
        dim: usize,
        /// Generator seed; falls back to UNCERTKIT_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
        /// Distribution file to write.
        #[arg(long)]
        output: PathBuf,
    },
    /// Reduce a distribution collection to a lower dimension.
    Transform {
        /// Distribution file to read.
        #[arg(long)]
        input: PathBuf,
        /// Reduction method.
        #[arg(long, value_parser = ["uapca", "uamds"])]
        method: String,
        /// Output dimension.
        #[arg(long)]
        dims: usize,
        /// Iteration cap for the stress minimizer.
        #[arg(long = "max-iter")]
        max_iter: Option<usize>,
        /// Relative stress decrease treated as converged.
        #[arg(long)]
        tol: Option<f64>,
        /// Seed for randomized initialization; falls back to UNCERTKIT_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
        /// Drop the per-distribution spread terms from the stress.
        #[arg(long = "no-self-pairs")]
        no_self_pairs: bool,
        /// Distribution file to write.
        #[arg(long)]
        output: PathBuf,
    },
    /// Render a distribution file to SVG.
    Plot {
        /// Distribution file to read.
        #[arg(long)]
        input: PathBuf,
        /// Plot kind.
        #[arg(long, value_parser = PLOT_KINDS)]
        kind: String,
        /// Coverage levels for contour, isoband, and matrix plots.
        #[arg(long, value_delimiter = ',')]
        quantiles: Option<Vec<f64>>,
        /// Points drawn per distribution; selects scatter panels in matrix plots.
        #[arg(long)]
        samples: Option<usize>,
        /// Seed for sampled geometry; falls back to UNCERTKIT_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
        /// SVG file to write.
        #[arg(long)]
        output: PathBuf,
    },
    /// Run load, fit, transform, and plots from one JSON config.
    Pipeline {
        /// Pipeline configuration file.
        #[arg(long)]
        config: PathBuf,
    },
}

/// Parse an argument vector, run it, and return the process exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_logging();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            // Help and version print to stdout, errors to stderr.
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(summary) => {
            println!("{summary}");
            0
        }
        Err(e) => {
            log::error!("{e}");
            match e {
                Error::Numeric(_) => 3,
                _ => 2,
            }
        }
    }
}

fn init_logging() {
    let _ = env_logger::Builder::from_env(
        env_logger::Env::default().default_filter_or("info"),
    )
    .format_timestamp(None)
    .format_target(false)
    .try_init();
}

/// Rendered results waiting until the whole command has succeeded.
#[derive(Default)]
struct Outputs {
    files: Vec<(PathBuf, String)>,
}

impl Outputs {
    fn add(&mut self, path: &Path, content: String) -> Result<()> {
        if path.as_os_str().is_empty() {
            return Err(Error::input("output path must not be empty".to_string()));
        }
        self.files.push((path.to_path_buf(), content));
        Ok(())
    }

    fn write_all(self) -> Result<usize> {
        let n = self.files.len();
        for (path, content) in self.files {
            fs::write(&path, content).map_err(|e| Error::io(&path, e))?;
        }
        Ok(n)
    }
}

fn execute(command: Command) -> Result<String> {
    let mut out = Outputs::default();
    let summary = match command {
        Command::Fit {
            input,
            group_by,
            method,
            output,
        } => {
            let method: FitMethod = method.parse()?;
            let dists = load_csv_grouped(&input, &group_by, method)?;
            let mut provenance = BTreeMap::new();
            provenance.insert("tool".to_string(), "uncertkit fit".to_string());
            provenance.insert("method".to_string(), method_name(method).to_string());
            provenance.insert("group_by".to_string(), group_by);
            provenance.insert("source".to_string(), input.display().to_string());
            let n = dists.len();
            out.add(
                &output,
                render_distribution_file(&DistributionFile {
                    distributions: dists,
                    provenance,
                }),
            )?;
            format!("fit: wrote {n} distributions to {}", output.display())
        }
        Command::Dataset {
            name,
            count,
            dim,
            seed,
            output,
        } => {
            debug_assert_eq!(name, "blobs");
            let seed = resolve_seed(seed)?;
            let spec = BlobSpec::new(count, dim, seed);
            let dists = generate_blobs(&spec)?;
            let mut provenance = BTreeMap::new();
            provenance.insert("tool".to_string(), "uncertkit dataset".to_string());
            provenance.insert("generator".to_string(), name);
            provenance.insert("count".to_string(), count.to_string());
            provenance.insert("dim".to_string(), dim.to_string());
            provenance.insert("seed".to_string(), seed.to_string());
            out.add(
                &output,
                render_distribution_file(&DistributionFile {
                    distributions: dists,
                    provenance,
                }),
            )?;
            format!(
                "dataset: wrote {count} blobs of dimension {dim} to {}",
                output.display()
            )
        }
        Command::Transform {
            input,
            method,
            dims,
            max_iter,
            tol,
            seed,
            no_self_pairs,
            output,
        } => {
            let dists = load_distributions(&input)?;
            let seed = resolve_seed(seed)?;
            let spec = TransformSpec {
                method: method.parse()?,
                dims,
                max_iter,
                tol,
                seed,
                self_pairs: !no_self_pairs,
            };
            let (file, line) = run_transform(&dists, &spec)?;
            out.add(&output, render_distribution_file(&file))?;
            format!("transform: {line}, wrote {}", output.display())
        }
        Command::Plot {
            input,
            kind,
            quantiles,
            samples,
            seed,
            output,
        } => {
            let dists = load_distributions(&input)?;
            let seed = resolve_seed(seed)?;
            let spec = PlotSpec {
                kind: kind.parse()?,
                quantiles,
                samples,
                seed,
            };
            let svg = render_plot(&dists, &spec)?;
            out.add(&output, svg)?;
            format!(
                "plot: wrote {kind} plot of {n} distributions to {}",
                output.display(),
                n = dists.len()
            )
        }
        Command::Pipeline { config } => {
            let text = fs::read_to_string(&config).map_err(|e| Error::io(&config, e))?;
            let parsed: PipelineConfig = serde_json::from_str(&text).map_err(|e| {
                Error::input(format!("invalid pipeline config {}: {e}", config.display()))
            })?;
            run_pipeline(&parsed, &mut out)?
        }
    };
    out.write_all()?;
    Ok(summary)
}

/// Seed precedence: flag, then the environment, then 0.
fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV) {
        Ok(text) => text.trim().parse().map_err(|_| {
            Error::input(format!(
                "{SEED_ENV} must be an unsigned 64-bit integer, got {text:?}"
            ))
        }),
        Err(std::env::VarError::NotPresent) => {
            log::info!("no --seed and no {SEED_ENV} set; using seed 0");
            Ok(0)
        }
        Err(std::env::VarError::NotUnicode(_)) => Err(Error::input(format!(
            "{SEED_ENV} holds invalid unicode"
        ))),
    }
}

fn method_name(method: FitMethod) -> &'static str {
    match method {
        FitMethod::Gaussian => "gaussian",
        FitMethod::Kde => "kde",
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum TransformMethod {
    Uapca,
    Uamds,
}

impl FromStr for TransformMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uapca" => Ok(TransformMethod::Uapca),
            "uamds" => Ok(TransformMethod::Uamds),
            other => Err(Error::input(format!(
                "unknown transform method {other:?}; expected uapca or uamds"
            ))),
        }
    }
}

struct TransformSpec {
    method: TransformMethod,
    dims: usize,
    max_iter: Option<usize>,
    tol: Option<f64>,
    seed: u64,
    self_pairs: bool,
}

/// Run a reduction and package the result with its provenance. The summary
/// fragment describes what happened without naming any file.
fn run_transform(
    dists: &[Distribution],
    spec: &TransformSpec,
) -> Result<(DistributionFile, String)> {
    if spec.dims == 0 {
        return Err(Error::input("dims must be at least 1".to_string()));
    }
    let mut provenance = BTreeMap::new();
    provenance.insert("tool".to_string(), "uncertkit transform".to_string());
    provenance.insert("dims".to_string(), spec.dims.to_string());

    let (result, line) = match spec.method {
        TransformMethod::Uapca => {
            let (result, _model) = uapca(dists, spec.dims)?;
            provenance.insert("method".to_string(), "uapca".to_string());
            // The projection's quality under the same objective the
            // iterative method minimizes, for apples-to-apples comparison.
            let stress = embedding_stress(dists, &result, spec.self_pairs)?;
            provenance.insert("stress".to_string(), format!("{stress:e}"));
            let line = format!(
                "uapca projected {} distributions into {} dims (stress {stress:.6e})",
                dists.len(),
                spec.dims
            );
            (result, line)
        }
        TransformMethod::Uamds => {
            let params = UamdsParams {
                max_iter: spec.max_iter.unwrap_or(UamdsParams::default().max_iter),
                tol: spec.tol.unwrap_or(UamdsParams::default().tol),
                seed: spec.seed,
                include_self_pairs: spec.self_pairs,
                ..UamdsParams::default()
            };
            let result = uamds_fit(dists, spec.dims, &params)?;
            let stress = result.stress_trace.last().copied().unwrap_or(0.0);
            let iterations = result.stress_trace.len().saturating_sub(1);
            provenance.insert("method".to_string(), "uamds".to_string());
            provenance.insert("max_iter".to_string(), params.max_iter.to_string());
            provenance.insert("tol".to_string(), format!("{:e}", params.tol));
            provenance.insert("seed".to_string(), params.seed.to_string());
            provenance.insert(
                "self_pairs".to_string(),
                params.include_self_pairs.to_string(),
            );
            provenance.insert("stress".to_string(), format!("{stress:e}"));
            provenance.insert("iterations".to_string(), iterations.to_string());
            provenance.insert("converged".to_string(), result.converged.to_string());
            let line = format!(
                "uamds embedded {} distributions into {} dims (stress {stress:.6e}, {iterations} iterations)",
                dists.len(),
                spec.dims
            );
            (result, line)
        }
    };

    Ok((
        DistributionFile {
            distributions: result.distributions,
            provenance,
        },
        line,
    ))
}

/// Stress of an already-computed embedding, measured by the coupled
/// squared-distance objective over the inputs' moment Gaussians.
fn embedding_stress(
    dists: &[Distribution],
    result: &EmbeddingResult,
    self_pairs: bool,
) -> Result<f64> {
    let gaussians = dists
        .iter()
        .map(|d| {
            let (mean, cov) = d.moments();
            MultivariateNormal::new(mean, cov)
        })
        .collect::<Result<Vec<_>>>()?;
    let params = UamdsParams {
        maps: result.maps.clone(),
        include_self_pairs: self_pairs,
        ..UamdsParams::default()
    };
    uamds_stress(&gaussians, &params)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum PlotKind {
    Scatter,
    Contour,
    Isoband,
    Univariate(UnivariateKind),
    Matrix,
}

impl FromStr for PlotKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "scatter" => Ok(PlotKind::Scatter),
            "contour" => Ok(PlotKind::Contour),
            "isoband" => Ok(PlotKind::Isoband),
            "matrix" => Ok(PlotKind::Matrix),
            "box" | "violin" | "strip" | "swarm" => Ok(PlotKind::Univariate(s.parse()?)),
            other => Err(Error::input(format!(
                "unknown plot kind {other:?}; expected one of {}",
                PLOT_KINDS.join(", ")
            ))),
        }
    }
}

struct PlotSpec {
    kind: PlotKind,
    quantiles: Option<Vec<f64>>,
    samples: Option<usize>,
    seed: u64,
}

fn render_plot(dists: &[Distribution], spec: &PlotSpec) -> Result<String> {
    let mut style = PlotStyle::default();
    if let Some(samples) = spec.samples {
        style.sample_points = samples;
    }
    let q = match &spec.quantiles {
        Some(levels) => QuantileSpec::new(levels.clone())?,
        None => QuantileSpec::default(),
    };

    let doc = match spec.kind {
        PlotKind::Scatter => {
            require_planar(dists, "scatter")?;
            render_scatter(dists, style.sample_points, spec.seed, &style)?
        }
        PlotKind::Contour => {
            require_planar(dists, "contour")?;
            render_contours(dists, &q, false, &style, spec.seed)?
        }
        PlotKind::Isoband => {
            require_planar(dists, "isoband")?;
            render_contours(dists, &q, true, &style, spec.seed)?
        }
        PlotKind::Univariate(kind) => {
            let marginals = univariate_inputs(dists)?;
            render_univariate(&marginals, kind, &style, spec.seed)?
        }
        PlotKind::Matrix => {
            // An explicit sample budget asks for point panels; the default
            // is contour panels, which need no sampling for normal inputs.
            let off_diag = if spec.samples.is_some() {
                OffDiag::Scatter
            } else {
                OffDiag::Contour
            };
            render_matrix(dists, off_diag, DiagKind::Density, &q, &style, spec.seed)?
        }
    };
    Ok(doc.to_svg())
}

/// Planar plot kinds take 2-dimensional input only; higher-dimensional data
/// has two ways forward and the message names both.
fn require_planar(dists: &[Distribution], kind: &str) -> Result<()> {
    let n = dists.first().map(Distribution::dim).unwrap_or(2);
    if n > 2 {
        return Err(Error::input(format!(
            "{kind} plots need 2-dimensional input but these distributions have {n} dimensions; \
             use the matrix plot kind for a pairwise grid, or reduce to 2 dimensions with the \
             transform subcommand first"
        )));
    }
    Ok(())
}

/// One slot per dimension per distribution, grouped by distribution, so a
/// collection of n-dimensional inputs reads as n adjacent marginals each.
fn univariate_inputs(dists: &[Distribution]) -> Result<Vec<Distribution>> {
    let n = dists.first().map(Distribution::dim).unwrap_or(1);
    if n == 1 {
        return Ok(dists.to_vec());
    }
    let mut out = Vec::with_capacity(dists.len() * n);
    for (i, dist) in dists.iter().enumerate() {
        let base = viz::label(dist, i);
        for j in 0..n {
            out.push(dist.marginal(&[j])?.with_name(format!("{base}[{j}]")));
        }
    }
    Ok(out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PipelineConfig {
    /// Default seed for every stage that does not set its own.
    seed: Option<u64>,
    input: InputStage,
    #[serde(default)]
    fit: FitStage,
    transform: Option<TransformStage>,
    #[serde(default)]
    plots: Vec<PlotRequest>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InputStage {
    path: PathBuf,
    /// "csv" or "json"; inferred from the extension when absent.
    format: Option<String>,
    /// Grouping column, required for CSV input.
    group_by: Option<String>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FitStage {
    method: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TransformStage {
    method: String,
    dims: Option<usize>,
    max_iter: Option<usize>,
    tol: Option<f64>,
    seed: Option<u64>,
    self_pairs: Option<bool>,
    /// Where to save the reduced distributions; omit to keep them in memory.
    output: Option<PathBuf>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PlotRequest {
    kind: String,
    quantiles: Option<Vec<f64>>,
    samples: Option<usize>,
    seed: Option<u64>,
    output: PathBuf,
}

fn run_pipeline(config: &PipelineConfig, out: &mut Outputs) -> Result<String> {
    let seed = resolve_seed(config.seed)?;

    if config.input.path.as_os_str().is_empty() {
        return Err(Error::input("input.path must not be empty".to_string()));
    }
    let format = match &config.input.format {
        Some(f) if f == "csv" || f == "json" => f.clone(),
        Some(f) => {
            return Err(Error::input(format!(
                "unknown input format {f:?}; expected csv or json"
            )))
        }
        None => match config.input.path.extension().and_then(|e| e.to_str()) {
            Some("csv") => "csv".to_string(),
            _ => "json".to_string(),
        },
    };

    let mut dists = if format == "csv" {
        let group_by = config.input.group_by.as_deref().ok_or_else(|| {
            Error::input("csv input needs input.group_by naming the grouping column".to_string())
        })?;
        let method: FitMethod = config.fit.method.as_deref().unwrap_or("gaussian").parse()?;
        load_csv_grouped(&config.input.path, group_by, method)?
    } else {
        load_distributions(&config.input.path)?
    };
    let loaded = dists.len();

    let mut transform_note = String::from("no transform");
    if let Some(stage) = &config.transform {
        if stage.method != "none" {
            let spec = TransformSpec {
                method: stage.method.parse()?,
                dims: stage.dims.unwrap_or(2),
                max_iter: stage.max_iter,
                tol: stage.tol,
                seed: stage.seed.unwrap_or(seed),
                self_pairs: stage.self_pairs.unwrap_or(true),
            };
            let (file, line) = run_transform(&dists, &spec)?;
            transform_note = line;
            if let Some(path) = &stage.output {
                out.add(path, render_distribution_file(&file))?;
            }
            dists = file.distributions;
        }
    }

    for request in &config.plots {
        let spec = PlotSpec {
            kind: request.kind.parse()?,
            quantiles: request.quantiles.clone(),
            samples: request.samples,
            seed: request.seed.unwrap_or(seed),
        };
        let svg = render_plot(&dists, &spec)?;
        out.add(&request.output, svg)?;
    }

    Ok(format!(
        "pipeline: loaded {loaded} distributions, {transform_note}, wrote {} files",
        out.files.len()
    ))
}
