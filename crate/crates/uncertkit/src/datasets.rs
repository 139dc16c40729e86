//! Seeded example-data generation and grouped CSV ingestion.
//!
//! [`generate_blobs`] gives a quick deterministic entry point into the
//! pipeline; [`load_csv_grouped`] turns a labeled table into one fitted
//! distribution per group.

use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;

use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::estimation::{fit_gaussian, fit_kde, BandwidthRule};
use crate::numerics::matrix::{Mat, SymMatrix};
use crate::numerics::rng::Rng;

/// Parameters for [`generate_blobs`].
#[derive(Debug, Clone, PartialEq)]
pub struct BlobSpec {
    /// Number of distributions, at least 1.
    pub count: usize,
    /// Dimension, at least 1.
    pub dim: usize,
    pub seed: u64,
    /// Means are drawn uniformly from [-mean_box, mean_box] per axis.
    pub mean_box: f64,
    /// Covariances are scaled by this positive factor.
    pub cov_scale: f64,
}

impl BlobSpec {
    pub fn new(count: usize, dim: usize, seed: u64) -> Self {
        Self {
            count,
            dim,
            seed,
            mean_box: 10.0,
            cov_scale: 1.0,
        }
    }
}

/// Generate `count` random Gaussians named `blob 0`, `blob 1`, ...
///
/// Each covariance is `cov_scale · (AAᵀ + 0.1·I)` with `A` entries i.i.d.
/// standard normal divided by √dim, so the smallest eigenvalue is at least
/// `0.1 · cov_scale` and every draw comes from the one generator seeded
/// with `spec.seed`.
pub fn generate_blobs(spec: &BlobSpec) -> Result<Vec<Distribution>> {
    if spec.count < 1 || spec.dim < 1 {
        return Err(Error::domain(format!(
            "blob spec needs count >= 1 and dim >= 1, got count {} dim {}",
            spec.count, spec.dim
        )));
    }
    if !(spec.cov_scale > 0.0) || !spec.cov_scale.is_finite() {
        return Err(Error::domain(format!(
            "cov_scale must be a positive real, got {}",
            spec.cov_scale
        )));
    }
    if !(spec.mean_box >= 0.0) || !spec.mean_box.is_finite() {
        return Err(Error::domain(format!(
            "mean_box must be a nonnegative real, got {}",
            spec.mean_box
        )));
    }

    let mut rng = Rng::new(spec.seed);
    let n = spec.dim;
    let root_n = (n as f64).sqrt();
    let mut out = Vec::with_capacity(spec.count);
    for i in 0..spec.count {
        let mean: Vec<f64> = (0..n)
            .map(|_| (2.0 * rng.next_f64() - 1.0) * spec.mean_box)
            .collect();
        let a = Mat::from_fn(n, n, |_, _| rng.next_normal() / root_n);
        let mut gram = a.mul(&a.transpose());
        for k in 0..n {
            gram.set(k, k, gram.get(k, k) + 0.1);
        }
        let cov = SymMatrix::new(&gram.scale(spec.cov_scale))
            .expect("AAᵀ + 0.1·I is symmetric by construction");
        out.push(Distribution::normal(mean, cov)?.with_name(format!("blob {i}")));
    }
    Ok(out)
}

/// How [`load_csv_grouped`] turns each group's rows into a distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitMethod {
    /// Sample mean and covariance; needs at least two rows per group.
    Gaussian,
    /// Kernel density estimate with the default bandwidth rule.
    Kde,
}

impl FromStr for FitMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(Self::Gaussian),
            "kde" => Ok(Self::Kde),
            other => Err(Error::domain(format!(
                "unknown fit method {other:?}; expected gaussian or kde"
            ))),
        }
    }
}

/// Load a CSV with a header row, split it by the values of `group_column`,
/// and fit one named distribution per group (first-appearance order).
///
/// All columns other than the group column must be numeric. Row numbers in
/// errors count the header as row 1, matching what a text editor shows.
pub fn load_csv_grouped(
    path: impl AsRef<Path>,
    group_column: &str,
    fit: FitMethod,
) -> Result<Vec<Distribution>> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;

    let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    let group_idx = headers.iter().position(|h| h == group_column).ok_or_else(|| {
        Error::input(format!(
            "column {group_column:?} not found; file has columns {:?}",
            headers.iter().collect::<Vec<_>>()
        ))
    })?;
    let value_cols: Vec<(usize, String)> = headers
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != group_idx)
        .map(|(i, name)| (i, name.to_string()))
        .collect();
    if value_cols.is_empty() {
        return Err(Error::input(format!(
            "file has no numeric columns besides {group_column:?}"
        )));
    }

    let mut order: Vec<String> = Vec::new();
    let mut groups: HashMap<String, Vec<Vec<f64>>> = HashMap::new();
    for (record_idx, record) in reader.records().enumerate() {
        // Header is row 1, so the first data record is row 2.
        let row = record_idx + 2;
        let record = record.map_err(|e| Error::input(format!("malformed CSV row {row}: {e}")))?;
        let group = record
            .get(group_idx)
            .ok_or_else(|| Error::input(format!("row {row} is missing the group column")))?
            .to_string();
        let mut values = Vec::with_capacity(value_cols.len());
        for (col_idx, col_name) in &value_cols {
            let cell = record.get(*col_idx).ok_or_else(|| {
                Error::input(format!("row {row} is missing column {col_name:?}"))
            })?;
            let value: f64 = cell.trim().parse().map_err(|_| {
                Error::input(format!(
                    "non-numeric value {cell:?} at row {row}, column {col_name:?}"
                ))
            })?;
            values.push(value);
        }
        if !groups.contains_key(&group) {
            order.push(group.clone());
        }
        groups.entry(group).or_default().push(values);
    }

    let mut out = Vec::with_capacity(order.len());
    for name in order {
        let rows = groups.remove(&name).expect("group recorded on insert");
        let count = rows.len();
        let data = Mat::from_rows(&rows);
        let dist = match fit {
            FitMethod::Gaussian => {
                if count < 2 {
                    return Err(Error::input(format!(
                        "group {name:?} has {count} row(s); a gaussian fit needs at least 2 \
                         (use the kde method for single-row groups)"
                    )));
                }
                Distribution::from_normal(fit_gaussian(&data)?)
            }
            FitMethod::Kde => Distribution::from_mixture(fit_kde(&data, BandwidthRule::Scott)?),
        };
        out.push(dist.with_name(name));
    }
    Ok(out)
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            _ => unreachable!("is_io_error implies an Io kind"),
        }
    } else {
        Error::input(format!("cannot parse {}: {e}", path.display()))
    }
}
