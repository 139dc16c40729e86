//! The whole route in one program: grouped CSV to fitted distributions,
//! stress-minimized embedding, and a finished SVG.
//!
//! This is the library-level twin of
//! `uncertkit pipeline --config run.json`.

use std::fs;
use std::path::PathBuf;

use uncertkit::datasets::{load_csv_grouped, FitMethod};
use uncertkit::io::save_distributions;
use uncertkit::transforms::{uamds_fit, UamdsParams};
use uncertkit::viz::{render_contours, PlotStyle, QuantileSpec};

fn out_dir() -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../target/examples");
    fs::create_dir_all(&dir).expect("create output directory");
    dir
}

fn main() -> uncertkit::Result<()> {
    let fixture = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/synthetic_groups.csv");

    // Stage 1: one Gaussian per batch.
    let fitted = load_csv_grouped(&fixture, "batch", FitMethod::Gaussian)?;
    println!("fitted {} groups from {}", fitted.len(), fixture.display());

    // Stage 2: 4 dimensions down to 2, preserving pairwise structure.
    let params = UamdsParams {
        seed: 6,
        ..UamdsParams::default()
    };
    let embedded = uamds_fit(&fitted, 2, &params)?;
    println!(
        "embedded at stress {:.4e} after {} steps",
        embedded.stress_trace.last().unwrap(),
        embedded.stress_trace.len() - 1,
    );

    let reduced_path = out_dir().join("batches_2d.json");
    save_distributions(&embedded.distributions, &reduced_path)?;

    // Stage 3: the embedded Gaussians as 50% and 90% coverage bands.
    let doc = render_contours(
        &embedded.distributions,
        &QuantileSpec::new(vec![0.5, 0.9])?,
        true,
        &PlotStyle::default(),
        6,
    )?;
    let svg_path = out_dir().join("batches_2d.svg");
    fs::write(&svg_path, doc.to_svg()).expect("write SVG");

    println!("wrote {}", reduced_path.display());
    println!("wrote {}", svg_path.display());
    Ok(())
}
