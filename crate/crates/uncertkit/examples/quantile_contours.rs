//! Isolines and filled isobands at chosen coverage levels.
//!
//! A level q encloses probability mass q: the median contour holds half
//! the mass. Gaussians get exact ellipses; anything else falls back to a
//! density grid traced with marching squares, so mixtures render with the
//! same call.

use std::fs;
use std::path::PathBuf;

use uncertkit::distribution::{Distribution, MultivariateNormal};
use uncertkit::numerics::matrix::SymMatrix;
use uncertkit::viz::{render_contours, PlotStyle, QuantileSpec};

fn out_dir() -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../target/examples");
    fs::create_dir_all(&dir).expect("create output directory");
    dir
}

fn main() -> uncertkit::Result<()> {
    let dists = vec![
        Distribution::normal(
            vec![0.0, 0.0],
            SymMatrix::from_rows(&[vec![2.0, 1.2], vec![1.2, 1.0]])?,
        )?
        .with_name("gaussian"),
        Distribution::mixture(
            vec![0.6, 0.4],
            vec![
                MultivariateNormal::new(vec![5.0, 0.0], SymMatrix::from_diag(&[0.5, 0.5]))?,
                MultivariateNormal::new(vec![7.0, 2.0], SymMatrix::from_diag(&[0.8, 0.3]))?,
            ],
        )?
        .with_name("mixture"),
    ];

    let levels = QuantileSpec::new(vec![0.5, 0.9])?;
    let style = PlotStyle::default();

    // Lines only.
    let contours = render_contours(&dists, &levels, false, &style, 17)?;
    let lines_path = out_dir().join("contours.svg");
    fs::write(&lines_path, contours.to_svg()).expect("write SVG");

    // Filled bands between consecutive levels, inner band most opaque.
    let bands = render_contours(&dists, &levels, true, &style, 17)?;
    let bands_path = out_dir().join("isobands.svg");
    fs::write(&bands_path, bands.to_svg()).expect("write SVG");

    println!("wrote {}", lines_path.display());
    println!("wrote {}", bands_path.display());
    Ok(())
}
