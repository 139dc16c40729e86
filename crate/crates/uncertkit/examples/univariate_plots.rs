//! The four 1-dimensional views of the same three distributions.
//!
//! Box shows five quantiles, violin the mirrored density, strip jittered
//! draws, swarm collision-free draws. All four share slot layout and
//! colors, so switching kinds never rearranges the picture.

use std::fs;
use std::path::PathBuf;

use uncertkit::distribution::{Distribution, MultivariateNormal};
use uncertkit::numerics::matrix::{Mat, SymMatrix};
use uncertkit::viz::{render_univariate, PlotStyle, UnivariateKind};

fn out_dir() -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../target/examples");
    fs::create_dir_all(&dir).expect("create output directory");
    dir
}

fn main() -> uncertkit::Result<()> {
    let skewed_sample = {
        let base = Distribution::normal(vec![0.0], SymMatrix::from_diag(&[1.0]))?;
        let draws = base.sample(80, 5);
        // Squaring skews the draws right; kept as an empirical sample set.
        let rows: Vec<Vec<f64>> = (0..draws.rows())
            .map(|r| vec![draws.get(r, 0) * draws.get(r, 0) * 2.0 - 1.0])
            .collect();
        Distribution::samples(Mat::from_rows(&rows))?.with_name("skewed")
    };

    let dists = vec![
        Distribution::normal(vec![0.0], SymMatrix::from_diag(&[1.0]))?.with_name("unit"),
        Distribution::mixture(
            vec![0.5, 0.5],
            vec![
                MultivariateNormal::new(vec![-2.0], SymMatrix::from_diag(&[0.2]))?,
                MultivariateNormal::new(vec![2.0], SymMatrix::from_diag(&[0.2]))?,
            ],
        )?
        .with_name("split"),
        skewed_sample,
    ];

    let style = PlotStyle::default();
    for kind in [
        UnivariateKind::Box,
        UnivariateKind::Violin,
        UnivariateKind::Strip,
        UnivariateKind::Swarm,
    ] {
        let doc = render_univariate(&dists, kind, &style, 31)?;
        let path = out_dir().join(format!("{kind:?}.svg").to_lowercase());
        fs::write(&path, doc.to_svg()).expect("write SVG");
        println!("wrote {}", path.display());
    }
    Ok(())
}
