//! Fitting distributions to raw samples: Gaussian maximum likelihood and
//! Gaussian kernel density estimation.
//!
//! The KDE uses a full-covariance bandwidth `H = f²·S` with `S` the sample
//! covariance, so the estimate is equivariant under rotations of the data,
//! not just axis-aligned scalings. `f` comes from the chosen rule.

use crate::distribution::{sample_moments, GaussianMixture, MultivariateNormal};
use crate::error::{Error, Result};
use crate::numerics::cholesky::cholesky_pd_jittered;
use crate::numerics::matrix::{Mat, SymMatrix};

/// Bandwidth scale selection for [`fit_kde`].
///
/// `Scott` and `Silverman` are the classic plug-in rules for Gaussian
/// kernels; `Fixed` takes the scale factor directly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BandwidthRule {
    Scott,
    Silverman,
    Fixed(f64),
}

impl Default for BandwidthRule {
    fn default() -> Self {
        BandwidthRule::Scott
    }
}

impl BandwidthRule {
    /// The scalar factor `f` for `k` samples in `n` dimensions.
    pub fn factor(&self, k: usize, n: usize) -> Result<f64> {
        let k = k as f64;
        let n = n as f64;
        match self {
            BandwidthRule::Scott => Ok(k.powf(-1.0 / (n + 4.0))),
            BandwidthRule::Silverman => Ok((k * (n + 2.0) / 4.0).powf(-1.0 / (n + 4.0))),
            BandwidthRule::Fixed(s) => {
                if *s > 0.0 {
                    Ok(*s)
                } else {
                    Err(Error::domain(format!(
                        "fixed bandwidth scale must be positive, got {s}"
                    )))
                }
            }
        }
    }
}

/// Maximum-likelihood Gaussian: column means and the unbiased sample
/// covariance (repaired onto the PSD cone if rounding pushed it off).
pub fn fit_gaussian(samples: &Mat) -> Result<MultivariateNormal> {
    if samples.rows() < 2 {
        return Err(Error::domain(format!(
            "Gaussian fit needs at least 2 samples, got {}",
            samples.rows()
        )));
    }
    let (mean, cov) = sample_moments(samples);
    MultivariateNormal::new(mean, cov)
}

/// Kernel density estimate: an equal-weight mixture of `k` Gaussians, one
/// per sample, sharing the bandwidth covariance `H = f²·S`.
///
/// When the sample covariance `S` is unavailable (a single sample) or
/// singular beyond the jitter ladder, the kernel falls back to a scaled
/// identity so the estimate keeps a usable density; the fallback is logged.
pub fn fit_kde(samples: &Mat, rule: BandwidthRule) -> Result<GaussianMixture> {
    let k = samples.rows();
    let n = samples.cols();
    if k == 0 || n == 0 {
        return Err(Error::domain("kernel density fit needs at least one sample".to_string()));
    }
    let f = rule.factor(k, n)?;

    let shape = kernel_shape(samples);
    let h = shape.scale(f * f);

    let components = (0..k)
        .map(|i| MultivariateNormal::new(samples.row_vec(i), h.clone()))
        .collect::<Result<Vec<_>>>()?;
    GaussianMixture::uniform(components)
}

/// The unscaled kernel covariance: the sample covariance when it is usable,
/// otherwise an identity scaled to the data's diagonal spread.
fn kernel_shape(samples: &Mat) -> SymMatrix {
    let k = samples.rows();
    let n = samples.cols();
    if k >= 2 {
        let (_, s) = sample_moments(samples);
        if cholesky_pd_jittered(&s).is_ok() {
            return s;
        }
        let mean_diag = s.trace() / n as f64;
        let unit = if mean_diag > 0.0 { mean_diag } else { 1.0 };
        log::warn!(
            "kernel density: singular sample covariance, using identity scaled by {unit:.3e}"
        );
        return SymMatrix::identity(n).scale(unit);
    }
    log::warn!("kernel density: single sample, using identity bandwidth shape");
    SymMatrix::identity(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::Distribution;
    use crate::numerics::rng::Rng;

    #[test]
    fn gaussian_fit_hand_example() {
        let data = Mat::from_rows(&[
            vec![0.0, 0.0],
            vec![2.0, 0.0],
            vec![0.0, 2.0],
            vec![2.0, 2.0],
        ]);
        let d = fit_gaussian(&data).unwrap();
        assert_eq!(d.mean(), &[1.0, 1.0]);
        assert!((d.cov().get(0, 0) - 4.0 / 3.0).abs() < 1e-15);
        assert!((d.cov().get(1, 1) - 4.0 / 3.0).abs() < 1e-15);
        assert!(d.cov().get(0, 1).abs() < 1e-15);
    }

    #[test]
    fn gaussian_fit_identical_rows_zero_covariance() {
        let data = Mat::from_rows(&vec![vec![1.0, -1.0]; 5]);
        let d = fit_gaussian(&data).unwrap();
        assert_eq!(d.cov(), &SymMatrix::zeros(2));
    }

    #[test]
    fn gaussian_fit_needs_two_samples() {
        let data = Mat::from_rows(&[vec![1.0, 2.0]]);
        assert!(fit_gaussian(&data).is_err());
    }

    #[test]
    fn gaussian_fit_sampling_round_trip() {
        let cov = SymMatrix::from_rows(&[
            vec![2.0, 0.6, -0.3],
            vec![0.6, 1.5, 0.2],
            vec![-0.3, 0.2, 1.0],
        ])
        .unwrap();
        let mean = vec![1.0, 2.0, -1.0];
        let d = Distribution::normal(mean.clone(), cov.clone()).unwrap();
        let draws = d.sample(100_000, 2024);
        let refit = fit_gaussian(&draws).unwrap();

        let mean_norm: f64 = mean.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mean_err: f64 = refit
            .mean()
            .iter()
            .zip(&mean)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        assert!(mean_err <= 0.05 * mean_norm, "mean error {mean_err}");

        let cov_err = refit.cov().to_mat().sub(&cov.to_mat()).frob_norm();
        assert!(cov_err <= 0.05 * cov.frob_norm(), "cov error {cov_err}");
    }

    #[test]
    fn gaussian_fit_translation_equivariance() {
        let mut rng = Rng::new(11);
        let data = Mat::from_fn(30, 3, |_, _| rng.next_normal());
        let shift = [10.0, -5.0, 2.5];
        let shifted = Mat::from_fn(30, 3, |i, j| data.get(i, j) + shift[j]);

        let a = fit_gaussian(&data).unwrap();
        let b = fit_gaussian(&shifted).unwrap();
        for j in 0..3 {
            assert!((b.mean()[j] - a.mean()[j] - shift[j]).abs() < 1e-12);
        }
        let cov_diff = a.cov().to_mat().sub(&b.cov().to_mat()).frob_norm();
        assert!(cov_diff < 1e-12);
    }

    #[test]
    fn kde_single_sample_identity_fallback() {
        let data = Mat::from_rows(&[vec![0.0]]);
        let kde = fit_kde(&data, BandwidthRule::Fixed(0.5)).unwrap();
        assert_eq!(kde.components().len(), 1);
        assert_eq!(kde.weights(), &[1.0]);
        assert!((kde.components()[0].cov().get(0, 0) - 0.25).abs() < 1e-15);
        assert_eq!(kde.components()[0].mean(), &[0.0]);
    }

    #[test]
    fn kde_scott_factor_and_shared_covariance() {
        let mut rng = Rng::new(404);
        let data = Mat::from_fn(100, 2, |_, _| rng.next_normal());
        let kde = fit_kde(&data, BandwidthRule::Scott).unwrap();

        let f = 0.46415888336127786; // 100^(-1/6)
        let (_, s) = sample_moments(&data);
        let h0 = kde.components()[0].cov();
        for i in 0..2 {
            for j in 0..2 {
                assert!((h0.get(i, j) - f * f * s.get(i, j)).abs() < 1e-12);
            }
        }
        for c in kde.components() {
            assert_eq!(c.cov(), h0);
        }
        let total: f64 = kde.weights().iter().sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn kde_silverman_factor() {
        let k = 50usize;
        let n = 2usize;
        let f = BandwidthRule::Silverman.factor(k, n).unwrap();
        let want = (50.0f64 * 4.0 / 4.0).powf(-1.0 / 6.0);
        assert!((f - want).abs() < 1e-15);
        assert!(BandwidthRule::Fixed(-1.0).factor(k, n).is_err());
        assert!(BandwidthRule::Fixed(0.0).factor(k, n).is_err());
    }

    #[test]
    fn kde_pdf_at_sample_dominates_own_kernel() {
        let mut rng = Rng::new(8);
        let data = Mat::from_fn(20, 2, |_, _| 3.0 * rng.next_normal());
        let kde = fit_kde(&data, BandwidthRule::Scott).unwrap();
        let h = kde.components()[0].cov().clone();
        let det = h.get(0, 0) * h.get(1, 1) - h.get(0, 1) * h.get(1, 0);
        let own_peak = 1.0 / (2.0 * std::f64::consts::PI * det.sqrt());
        let d = Distribution::from_mixture(kde);
        let density = d.density().unwrap();
        for i in 0..20 {
            let x = [data.get(i, 0), data.get(i, 1)];
            assert!(density.at(&x) >= 0.05 * own_peak * (1.0 - 1e-12));
        }
    }

    #[test]
    fn kde_integrates_to_one_2d() {
        let mut rng = Rng::new(99);
        let data = Mat::from_fn(40, 2, |_, c| {
            if c == 0 {
                rng.next_normal()
            } else {
                0.5 * rng.next_normal() + 0.3
            }
        });
        let kde = fit_kde(&data, BandwidthRule::Scott).unwrap();
        let d = Distribution::from_mixture(kde);
        let integral = grid_integral_2d(&d, 220);
        assert!((integral - 1.0).abs() <= 1e-2, "integral {integral}");
    }

    #[test]
    fn kde_integrates_to_one_1d() {
        let mut rng = Rng::new(7);
        let data = Mat::from_fn(25, 1, |_, _| 2.0 * rng.next_normal() - 1.0);
        let kde = fit_kde(&data, BandwidthRule::Silverman).unwrap();
        let d = Distribution::from_mixture(kde);

        let (mean, cov) = d.moments();
        let sd = cov.get(0, 0).sqrt();
        let (lo, hi) = (mean[0] - 6.0 * sd, mean[0] + 6.0 * sd);
        let steps = 4000;
        let h = (hi - lo) / steps as f64;
        let density = d.density().unwrap();
        let mut total = 0.0;
        for i in 0..steps {
            let x = lo + (i as f64 + 0.5) * h;
            total += density.at(&[x]) * h;
        }
        assert!((total - 1.0).abs() <= 1e-2, "integral {total}");
    }

    #[test]
    fn kde_zero_covariance_falls_back_to_identity() {
        // Identical rows: the sample covariance is exactly zero, which no
        // jitter rung can rescue (the rungs scale with the trace).
        let data = Mat::from_rows(&vec![vec![1.0, -1.0]; 4]);
        let kde = fit_kde(&data, BandwidthRule::Fixed(0.5)).unwrap();
        let h = kde.components()[0].cov();
        assert_eq!(h.get(0, 1), 0.0);
        assert_eq!(h.get(0, 0), h.get(1, 1));
        assert!((h.get(0, 0) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn kde_collinear_data_keeps_sample_covariance() {
        // Rank-deficient but nonzero: the jitter ladder keeps the density
        // usable, so the full sample covariance is retained.
        let data = Mat::from_rows(&[
            vec![0.0, 0.0],
            vec![1.0, 2.0],
            vec![2.0, 4.0],
            vec![3.0, 6.0],
        ]);
        let kde = fit_kde(&data, BandwidthRule::Scott).unwrap();
        let h = kde.components()[0].cov();
        assert!(h.get(0, 1) > 0.0, "cross term should survive");
        let d = Distribution::from_mixture(kde);
        let p = d.pdf(&[1.0, 2.0]).unwrap();
        assert!(p.is_finite() && p > 0.0);
    }

    /// Midpoint-rule integral of a 2D density over the mean ± 6σ box.
    fn grid_integral_2d(d: &Distribution, steps: usize) -> f64 {
        let (mean, cov) = d.moments();
        let sx = cov.get(0, 0).sqrt();
        let sy = cov.get(1, 1).sqrt();
        let (x0, x1) = (mean[0] - 6.0 * sx, mean[0] + 6.0 * sx);
        let (y0, y1) = (mean[1] - 6.0 * sy, mean[1] + 6.0 * sy);
        let hx = (x1 - x0) / steps as f64;
        let hy = (y1 - y0) / steps as f64;
        let density = d.density().unwrap();
        let mut total = 0.0;
        for i in 0..steps {
            let x = x0 + (i as f64 + 0.5) * hx;
            for j in 0..steps {
                let y = y0 + (j as f64 + 0.5) * hy;
                total += density.at(&[x, y]);
            }
        }
        total * hx * hy
    }
}
