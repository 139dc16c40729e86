//! A pairwise plot matrix for data beyond two dimensions.
//!
//! Off-diagonal cells show the 2-dimensional marginal of each axis pair;
//! the diagonal shows each axis alone. Cell (r, c) puts axis c horizontal
//! and axis r vertical, so the matrix transposes cleanly across the
//! diagonal.

use std::fs;
use std::path::PathBuf;

use uncertkit::datasets::{generate_blobs, BlobSpec};
use uncertkit::viz::{render_matrix, DiagKind, OffDiag, PlotStyle, QuantileSpec};

fn out_dir() -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../target/examples");
    fs::create_dir_all(&dir).expect("create output directory");
    dir
}

fn main() -> uncertkit::Result<()> {
    let blobs = generate_blobs(&BlobSpec::new(3, 4, 8))?;
    let style = PlotStyle {
        width: 780.0,
        height: 780.0,
        ..PlotStyle::default()
    };
    let levels = QuantileSpec::new(vec![0.5, 0.9])?;

    // Contour panels stay faithful to the model densities.
    let contour = render_matrix(
        &blobs,
        OffDiag::Contour,
        DiagKind::Density,
        &levels,
        &style,
        2,
    )?;
    let contour_path = out_dir().join("matrix_contour.svg");
    fs::write(&contour_path, contour.to_svg()).expect("write SVG");

    // Scatter panels with violin diagonals read better for raw samples.
    let scatter = render_matrix(
        &blobs,
        OffDiag::Scatter,
        DiagKind::Violin,
        &levels,
        &style,
        2,
    )?;
    let scatter_path = out_dir().join("matrix_scatter.svg");
    fs::write(&scatter_path, scatter.to_svg()).expect("write SVG");

    println!("wrote {}", contour_path.display());
    println!("wrote {}", scatter_path.display());
    Ok(())
}
