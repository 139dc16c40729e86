//! Embed Gaussians into the plane by stress minimization.
//!
//! Each input gets its own affine map, chosen so expected squared
//! distances between the low-dimensional images match those between the
//! originals. Unlike a single global projection, this can flatten
//! structure a linear map cannot.

use uncertkit::datasets::{generate_blobs, BlobSpec};
use uncertkit::transforms::{uamds_fit, UamdsInit, UamdsParams};

fn main() -> uncertkit::Result<()> {
    let blobs = generate_blobs(&BlobSpec::new(5, 10, 21))?;

    // The default starts from the uncertainty-aware PCA plane, which is
    // already close; random init shows the optimizer doing real work.
    let params = UamdsParams {
        init: UamdsInit::Random,
        seed: 4,
        max_iter: 2000,
        ..UamdsParams::default()
    };
    let result = uamds_fit(&blobs, 2, &params)?;

    let trace = &result.stress_trace;
    println!(
        "stress {:.4e} -> {:.4e} over {} accepted steps (converged: {})",
        trace[0],
        trace[trace.len() - 1],
        trace.len() - 1,
        result.converged,
    );

    // The trace never increases: each step passed a sufficient-decrease test.
    assert!(trace.windows(2).all(|w| w[1] <= w[0]));

    for (dist, map) in result.distributions.iter().zip(&result.maps) {
        let (mean, cov) = dist.moments();
        println!(
            "{:8} at [{:7.2}, {:7.2}], spread {:5.2}, map norm {:.3}",
            dist.name.as_deref().unwrap_or("?"),
            mean[0],
            mean[1],
            (cov.get(0, 0) + cov.get(1, 1)).sqrt(),
            map.matrix().frob_norm(),
        );
    }

    // Starting from the PCA plane instead cuts the iteration count.
    let warm = uamds_fit(&blobs, 2, &UamdsParams { seed: 4, ..UamdsParams::default() })?;
    println!(
        "warm start: {} steps to stress {:.4e}",
        warm.stress_trace.len() - 1,
        warm.stress_trace.last().unwrap(),
    );
    Ok(())
}
