//! Project a collection of distributions to 2 dimensions with
//! uncertainty-aware PCA.
//!
//! Classical PCA sees only the means. Here the principal directions come
//! from the sum of two terms: the covariance of the means and the average
//! of the per-distribution covariances, so spread influences the axes even
//! when all means coincide.

use uncertkit::datasets::{generate_blobs, BlobSpec};
use uncertkit::transforms::uapca;

fn main() -> uncertkit::Result<()> {
    let spec = BlobSpec::new(6, 8, 3);
    let blobs = generate_blobs(&spec)?;
    println!("{} blobs in {} dimensions", blobs.len(), blobs[0].dim());

    let (embedding, model) = uapca(&blobs, 2)?;

    // Eigenvalues come sorted descending; the leading pair says how much
    // generalized variance the plane captures.
    let total: f64 = model.eigenvalues.iter().sum();
    let kept: f64 = model.eigenvalues[..2].iter().sum();
    println!(
        "leading eigenvalues {:.2} and {:.2} capture {:.1}% of {:.2}",
        model.eigenvalues[0],
        model.eigenvalues[1],
        100.0 * kept / total,
        total,
    );

    // Every output is again a distribution: the projection is applied to
    // means and covariances alike, never to point samples.
    for (raw, low) in blobs.iter().zip(&embedding.distributions) {
        let (mean, cov) = low.moments();
        println!(
            "{:8} -> mean [{:7.3}, {:7.3}], projected variance {:6.3}",
            raw.name.as_deref().unwrap_or("?"),
            mean[0],
            mean[1],
            cov.get(0, 0) + cov.get(1, 1),
        );
    }

    // The same affine map serves new points later.
    let map = model.map();
    let (mean0, _) = blobs[0].moments();
    println!("map applied to blob 0 mean: {:?}", map.apply(&mean0));
    Ok(())
}
