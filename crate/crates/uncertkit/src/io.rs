//! Lossless JSON persistence for distribution lists.
//!
//! Files carry a version gate, the distributions in order, and an optional
//! free-text provenance map. Floats are written with 17 significant digits
//! so every 64-bit value round-trips exactly; the writer emits keys in a
//! fixed order so identical inputs give identical bytes. Loading re-runs
//! all constructor validation, so a file can never smuggle in a covariance
//! the library would not accept.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde_json::Value;

use crate::distribution::{
    Distribution, DistributionKind, EmpiricalSamples, GaussianMixture, MultivariateNormal,
};
use crate::error::{Error, Result};
use crate::numerics::matrix::{Mat, SymMatrix};

/// Format version written by this build and accepted on load.
pub const FORMAT_VERSION: u64 = 1;

/// Largest element-wise asymmetry tolerated in a stored covariance before
/// the file is rejected instead of symmetrized.
const SYMMETRY_TOL: f64 = 1e-8;

/// A distribution list plus free-text provenance, as stored on disk.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DistributionFile {
    pub distributions: Vec<Distribution>,
    /// Tool, seed, transform parameters, and similar notes. Empty means
    /// the file carries none.
    pub provenance: BTreeMap<String, String>,
}

/// Save a distribution list without provenance.
pub fn save_distributions(dists: &[Distribution], path: impl AsRef<Path>) -> Result<()> {
    save_distribution_file(
        &DistributionFile {
            distributions: dists.to_vec(),
            provenance: BTreeMap::new(),
        },
        path,
    )
}

/// Save a distribution list with its provenance map.
pub fn save_distribution_file(file: &DistributionFile, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, render_distribution_file(file)).map_err(|e| Error::io(path, e))
}

/// Render a file to its canonical byte layout without touching disk.
/// Equal inputs give equal bytes.
pub fn render_distribution_file(file: &DistributionFile) -> String {
    render(file)
}

/// Load just the distributions of a file.
pub fn load_distributions(path: impl AsRef<Path>) -> Result<Vec<Distribution>> {
    Ok(load_distribution_file(path)?.distributions)
}

/// Load a file, validating the version gate, the kind tags, and every
/// distribution through its ordinary constructor.
pub fn load_distribution_file(path: impl AsRef<Path>) -> Result<DistributionFile> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let root: Value = serde_json::from_str(&text)
        .map_err(|e| Error::input(format!("invalid JSON in {}: {e}", path.display())))?;
    let root = root
        .as_object()
        .ok_or_else(|| Error::input("top level must be a JSON object".to_string()))?;

    let version = root
        .get("version")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::input("missing integer \"version\" field".to_string()))?;
    if version != FORMAT_VERSION {
        return Err(Error::input(format!(
            "unsupported version {version}; this build reads version {FORMAT_VERSION}"
        )));
    }

    let entries = root
        .get("distributions")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::input("missing \"distributions\" array".to_string()))?;
    let mut distributions = Vec::with_capacity(entries.len());
    for (i, entry) in entries.iter().enumerate() {
        distributions.push(parse_distribution(entry, i)?);
    }

    let mut provenance = BTreeMap::new();
    if let Some(value) = root.get("provenance") {
        let map = value
            .as_object()
            .ok_or_else(|| Error::input("\"provenance\" must be an object".to_string()))?;
        for (k, v) in map {
            let v = v.as_str().ok_or_else(|| {
                Error::input(format!("provenance entry {k:?} must be a string"))
            })?;
            provenance.insert(k.clone(), v.to_string());
        }
    }

    Ok(DistributionFile {
        distributions,
        provenance,
    })
}

fn parse_distribution(value: &Value, index: usize) -> Result<Distribution> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::input(format!("distribution {index} is not an object")))?;
    let kind = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::input(format!("distribution {index} has no \"kind\" tag")))?;

    let dist = match kind {
        "normal" => Distribution::from_normal(parse_normal(value, index)?),
        "mixture" => {
            let weights = float_vec(require(obj, "weights", index)?, index, "weights")?;
            let components = require(obj, "components", index)?
                .as_array()
                .ok_or_else(|| {
                    Error::input(format!("distribution {index}: \"components\" must be an array"))
                })?
                .iter()
                .map(|c| parse_normal(c, index))
                .collect::<Result<Vec<_>>>()?;
            Distribution::from_mixture(GaussianMixture::new(weights, components)?)
        }
        "samples" => {
            let data = float_mat(require(obj, "data", index)?, index, "data")?;
            Distribution::from_samples(EmpiricalSamples::new(data)?)
        }
        other => {
            return Err(Error::input(format!(
                "distribution {index} has unknown kind {other:?}; expected normal, mixture, or samples"
            )))
        }
    };

    match obj.get("name") {
        None => Ok(dist),
        Some(Value::String(name)) => Ok(dist.with_name(name.clone())),
        Some(_) => Err(Error::input(format!(
            "distribution {index}: \"name\" must be a string"
        ))),
    }
}

fn parse_normal(value: &Value, index: usize) -> Result<MultivariateNormal> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::input(format!("distribution {index}: component is not an object")))?;
    let mean = float_vec(require(obj, "mean", index)?, index, "mean")?;
    let rows = float_mat(require(obj, "cov", index)?, index, "cov")?;
    if rows.rows() != rows.cols() || rows.rows() != mean.len() {
        return Err(Error::input(format!(
            "distribution {index}: cov must be {n}x{n} to match the mean, got {r}x{c}",
            n = mean.len(),
            r = rows.rows(),
            c = rows.cols()
        )));
    }
    for r in 0..rows.rows() {
        for c in (r + 1)..rows.cols() {
            let gap = (rows.get(r, c) - rows.get(c, r)).abs();
            if gap > SYMMETRY_TOL {
                return Err(Error::input(format!(
                    "distribution {index}: cov[{r}][{c}] and cov[{c}][{r}] differ by {gap:e}, \
                     beyond the {SYMMETRY_TOL:e} symmetry tolerance"
                )));
            }
        }
    }
    MultivariateNormal::new(mean, SymMatrix::new(&rows)?)
}

fn require<'a>(
    obj: &'a serde_json::Map<String, Value>,
    key: &str,
    index: usize,
) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::input(format!("distribution {index} is missing {key:?}")))
}

fn float_vec(value: &Value, index: usize, field: &str) -> Result<Vec<f64>> {
    value
        .as_array()
        .ok_or_else(|| Error::input(format!("distribution {index}: {field:?} must be an array")))?
        .iter()
        .map(|v| {
            v.as_f64().ok_or_else(|| {
                Error::input(format!("distribution {index}: {field:?} holds a non-number"))
            })
        })
        .collect()
}

fn float_mat(value: &Value, index: usize, field: &str) -> Result<Mat> {
    let rows = value
        .as_array()
        .ok_or_else(|| {
            Error::input(format!("distribution {index}: {field:?} must be an array of rows"))
        })?
        .iter()
        .map(|row| float_vec(row, index, field))
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Err(Error::input(format!(
            "distribution {index}: {field:?} must not be empty"
        )));
    }
    let width = rows[0].len();
    if rows.iter().any(|r| r.len() != width) {
        return Err(Error::input(format!(
            "distribution {index}: rows of {field:?} have unequal lengths"
        )));
    }
    Ok(Mat::from_rows(&rows))
}

fn render(file: &DistributionFile) -> String {
    let mut out = String::new();
    out.push_str("{\"version\":");
    let _ = write!(out, "{FORMAT_VERSION}");
    out.push_str(",\"distributions\":[");
    for (i, dist) in file.distributions.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        render_distribution(&mut out, dist);
    }
    out.push(']');
    if !file.provenance.is_empty() {
        out.push_str(",\"provenance\":{");
        for (i, (k, v)) in file.provenance.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            render_string(&mut out, k);
            out.push(':');
            render_string(&mut out, v);
        }
        out.push('}');
    }
    out.push_str("}\n");
    out
}

fn render_distribution(out: &mut String, dist: &Distribution) {
    match &dist.kind {
        DistributionKind::Normal(n) => {
            out.push_str("{\"kind\":\"normal\"");
            render_name(out, dist);
            out.push_str(",\"mean\":");
            render_floats(out, n.mean());
            out.push_str(",\"cov\":");
            render_sym(out, n.cov());
            out.push('}');
        }
        DistributionKind::Mixture(m) => {
            out.push_str("{\"kind\":\"mixture\"");
            render_name(out, dist);
            out.push_str(",\"weights\":");
            render_floats(out, m.weights());
            out.push_str(",\"components\":[");
            for (i, c) in m.components().iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str("{\"mean\":");
                render_floats(out, c.mean());
                out.push_str(",\"cov\":");
                render_sym(out, c.cov());
                out.push('}');
            }
            out.push_str("]}");
        }
        DistributionKind::Samples(s) => {
            out.push_str("{\"kind\":\"samples\"");
            render_name(out, dist);
            out.push_str(",\"data\":[");
            let data = s.data();
            for r in 0..data.rows() {
                if r > 0 {
                    out.push(',');
                }
                render_floats(out, data.row(r));
            }
            out.push_str("]}");
        }
    }
}

fn render_name(out: &mut String, dist: &Distribution) {
    if let Some(name) = &dist.name {
        out.push_str(",\"name\":");
        render_string(out, name);
    }
}

fn render_sym(out: &mut String, m: &SymMatrix) {
    out.push('[');
    for r in 0..m.dim() {
        if r > 0 {
            out.push(',');
        }
        out.push('[');
        for c in 0..m.dim() {
            if c > 0 {
                out.push(',');
            }
            out.push_str(&fmt17(m.get(r, c)));
        }
        out.push(']');
    }
    out.push(']');
}

fn render_floats(out: &mut String, values: &[f64]) {
    out.push('[');
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&fmt17(*v));
    }
    out.push(']');
}

/// 17 significant digits pin down every finite 64-bit float exactly.
fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

fn render_string(out: &mut String, s: &str) {
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tmp() -> tempfile::NamedTempFile {
        tempfile::NamedTempFile::new().unwrap()
    }

    fn normal(mean: Vec<f64>, cov: Vec<Vec<f64>>) -> Distribution {
        Distribution::normal(mean, SymMatrix::from_rows(&cov).unwrap()).unwrap()
    }

    #[test]
    fn round_trip_preserves_values_exactly() {
        let awkward = vec![0.1, 1.0 / 3.0, std::f64::consts::PI, 1e-300, -7.25e200];
        let dists = vec![
            normal(vec![0.1, -0.2], vec![vec![1.0, 0.5], vec![0.5, 1.0]]).with_name("A"),
            Distribution::mixture(
                vec![0.25, 0.75],
                vec![
                    MultivariateNormal::standard(2),
                    MultivariateNormal::new(vec![3.0, 4.0], SymMatrix::from_diag(&[2.0, 0.5]))
                        .unwrap(),
                ],
            )
            .unwrap(),
            Distribution::samples(Mat::from_rows(&[awkward.clone(), vec![1.0; 5]])).unwrap(),
        ];
        let f = tmp();
        save_distributions(&dists, f.path()).unwrap();
        let loaded = load_distributions(f.path()).unwrap();
        assert_eq!(loaded, dists);
        // Bit-exact, not just PartialEq-equal.
        let DistributionKind::Samples(s) = &loaded[2].kind else {
            panic!("samples kind lost");
        };
        for (a, b) in s.data().row(0).iter().zip(&awkward) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn empty_list_round_trips() {
        let f = tmp();
        save_distributions(&[], f.path()).unwrap();
        assert_eq!(load_distributions(f.path()).unwrap(), Vec::new());
        let text = fs::read_to_string(f.path()).unwrap();
        assert!(text.contains("\"distributions\":[]"));
    }

    #[test]
    fn mixture_schema_nests_component_records() {
        let dists = vec![Distribution::mixture(
            vec![0.5, 0.5],
            vec![
                MultivariateNormal::standard(1),
                MultivariateNormal::new(vec![2.0], SymMatrix::identity(1)).unwrap(),
            ],
        )
        .unwrap()];
        let f = tmp();
        save_distributions(&dists, f.path()).unwrap();
        let text = fs::read_to_string(f.path()).unwrap();
        assert!(text.contains("\"kind\":\"mixture\""));
        assert!(text.contains("\"components\":[{\"mean\":"));
        assert!(text.contains("\"weights\":[5.0000000000000000e-1"));
    }

    #[test]
    fn provenance_round_trips() {
        let mut file = DistributionFile {
            distributions: vec![normal(vec![0.0], vec![vec![1.0]])],
            provenance: BTreeMap::new(),
        };
        file.provenance.insert("tool".to_string(), "uncertkit".to_string());
        file.provenance.insert("seed".to_string(), "42".to_string());
        let f = tmp();
        save_distribution_file(&file, f.path()).unwrap();
        let loaded = load_distribution_file(f.path()).unwrap();
        assert_eq!(loaded, file);
    }

    #[test]
    fn unknown_kind_is_rejected() {
        let f = tmp();
        fs::write(
            f.path(),
            "{\"version\":1,\"distributions\":[{\"kind\":\"weibull\",\"shape\":2}]}",
        )
        .unwrap();
        let err = load_distributions(f.path()).unwrap_err();
        assert!(err.to_string().contains("weibull"));
    }

    #[test]
    fn unknown_version_is_rejected() {
        let f = tmp();
        fs::write(f.path(), "{\"version\":99,\"distributions\":[]}").unwrap();
        let err = load_distributions(f.path()).unwrap_err();
        assert!(err.to_string().contains("99"));
    }

    #[test]
    fn hand_written_normal_loads() {
        let f = tmp();
        fs::write(
            f.path(),
            "{\"version\":1,\"distributions\":[{\"kind\":\"normal\",\"name\":\"H\",\
             \"mean\":[0,1],\"cov\":[[1,0.5],[0.5,1]]}]}",
        )
        .unwrap();
        let dists = load_distributions(f.path()).unwrap();
        assert_eq!(dists.len(), 1);
        assert_eq!(dists[0].name.as_deref(), Some("H"));
        let (mean, cov) = dists[0].moments();
        assert_eq!(mean, vec![0.0, 1.0]);
        assert_eq!(cov.get(0, 1), 0.5);
    }

    #[test]
    fn asymmetry_beyond_tolerance_is_rejected() {
        let f = tmp();
        fs::write(
            f.path(),
            "{\"version\":1,\"distributions\":[{\"kind\":\"normal\",\
             \"mean\":[0,0],\"cov\":[[1,0.5],[0.4,1]]}]}",
        )
        .unwrap();
        let err = load_distributions(f.path()).unwrap_err();
        assert!(matches!(err, Error::Input(_)), "{err}");
        assert!(err.to_string().contains("symmetry"));

        // Asymmetry inside the tolerance is symmetrized silently.
        let f2 = tmp();
        fs::write(
            f2.path(),
            "{\"version\":1,\"distributions\":[{\"kind\":\"normal\",\
             \"mean\":[0,0],\"cov\":[[1,0.5],[0.5000000001,1]]}]}",
        )
        .unwrap();
        let dists = load_distributions(f2.path()).unwrap();
        let (_, cov) = dists[0].moments();
        assert_eq!(cov.get(0, 1), cov.get(1, 0));
    }

    #[test]
    fn invalid_covariance_is_rejected_on_load() {
        let f = tmp();
        fs::write(
            f.path(),
            "{\"version\":1,\"distributions\":[{\"kind\":\"normal\",\
             \"mean\":[0,0],\"cov\":[[1,2],[2,1]]}]}",
        )
        .unwrap();
        assert!(load_distributions(f.path()).is_err());
    }

    #[test]
    fn missing_file_is_io_error() {
        assert!(matches!(
            load_distributions("/nonexistent/dists.json").unwrap_err(),
            Error::Io { .. }
        ));
    }

    #[test]
    fn saving_is_byte_stable() {
        let dists = vec![normal(vec![1.5], vec![vec![2.25]]).with_name("stable")];
        let (fa, fb) = (tmp(), tmp());
        save_distributions(&dists, fa.path()).unwrap();
        save_distributions(&dists, fb.path()).unwrap();
        assert_eq!(
            fs::read(fa.path()).unwrap(),
            fs::read(fb.path()).unwrap()
        );
    }

    fn arb_finite(limit: f64) -> impl Strategy<Value = f64> {
        prop::num::f64::NORMAL.prop_map(move |v| v % limit).prop_filter("finite", |v| v.is_finite())
    }

    fn arb_normal(dim: usize) -> impl Strategy<Value = Distribution> {
        (
            prop::collection::vec(arb_finite(1e9), dim),
            prop::collection::vec(arb_finite(1e3), dim * dim),
        )
            .prop_map(move |(mean, factor)| {
                let a = Mat::from_fn(dim, dim, |r, c| factor[r * dim + c]);
                let cov = SymMatrix::new(&a.mul(&a.transpose())).unwrap();
                Distribution::normal(mean, cov).unwrap()
            })
    }

    fn arb_distribution() -> impl Strategy<Value = Distribution> {
        (1usize..4).prop_flat_map(|dim| {
            prop_oneof![
                arb_normal(dim),
                (
                    prop::collection::vec(arb_normal(dim), 1..4),
                    prop::collection::vec(0.01f64..1.0, 1..4)
                )
                    .prop_filter("counts match", |(c, w)| c.len() == w.len())
                    .prop_map(|(comps, raw_w)| {
                        let total: f64 = raw_w.iter().sum();
                        let mut weights: Vec<f64> = raw_w.iter().map(|w| w / total).collect();
                        let head: f64 = weights[..weights.len() - 1].iter().sum();
                        let last = weights.len() - 1;
                        weights[last] = 1.0 - head;
                        let normals = comps
                            .into_iter()
                            .map(|d| match d.kind {
                                DistributionKind::Normal(n) => n,
                                _ => unreachable!(),
                            })
                            .collect();
                        Distribution::mixture(weights, normals).unwrap()
                    }),
                prop::collection::vec(prop::collection::vec(arb_finite(1e9), dim), 1..6)
                    .prop_map(|rows| Distribution::samples(Mat::from_rows(&rows)).unwrap()),
            ]
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]
        #[test]
        fn load_after_save_is_identity(dists in prop::collection::vec(arb_distribution(), 0..5)) {
            let f = tmp();
            save_distributions(&dists, f.path()).unwrap();
            let loaded = load_distributions(f.path()).unwrap();
            prop_assert_eq!(loaded, dists);
        }
    }
}
