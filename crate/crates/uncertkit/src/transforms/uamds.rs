//! Uncertainty-aware multidimensional scaling.
//!
//! Each Gaussian input gets its own affine map `x ↦ Pᵢ·x + tᵢ` into the
//! target space, and the maps are optimized jointly so that squared
//! distances between the low-dimensional random variables match those
//! between the high-dimensional ones. Coupling the output to the input
//! through the map makes the objective a closed-form polynomial in Gaussian
//! moments:
//!
//! For a pair (i, j), with Δμ = μᵢ−μⱼ, cᵢ = Pᵢμᵢ+tᵢ, e = cᵢ−cⱼ,
//! V = blockdiag(Σᵢ, Σⱼ), G = [Pᵢ, −Pⱼ], A = [[I,−I],[−I,I]] − GᵀG,
//! b = 2·([Δμ; −Δμ] − Gᵀe) and k = ‖Δμ‖² − ‖e‖²:
//!
//! ```text
//! s_ij = (tr(AV) + k)² + 2·tr((AV)²) + bᵀVb
//!      = E[(‖Xᵢ−Xⱼ‖² − ‖Yᵢ−Yⱼ‖²)²]
//! ```
//!
//! which Monte-Carlo estimation over coupled draws confirms in the tests.
//! Self-pairs (an independent copy of the same distribution, both mapped
//! with the same parameters) constrain the projected covariance shapes
//! directly and are included by default.
//!
//! The optimizer is plain gradient descent with Armijo backtracking; the
//! gradient is analytic and checked against central finite differences.

use crate::distribution::{AffineMap, Distribution, MultivariateNormal};
use crate::error::{Error, Result};
use crate::numerics::matrix::{dot, outer, sub_vec, Mat, SymMatrix};
use crate::numerics::rng::Rng;
use crate::transforms::{uapca, EmbeddingResult};

/// Starting point for the map parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UamdsInit {
    /// Every `Pᵢ` is the transposed top-d basis and `tᵢ` centers the data,
    /// so the start equals the linear projection. Deterministic.
    Uapca,
    /// Entries i.i.d. standard normal divided by √n, from `seed`.
    Random,
}

/// Optimization settings.
///
/// `maps`, when non-empty, is used as the starting point (one map per
/// distribution, each d×n) and takes precedence over `init`.
#[derive(Debug, Clone)]
pub struct UamdsParams {
    pub maps: Vec<AffineMap>,
    pub include_self_pairs: bool,
    pub max_iter: usize,
    pub tol: f64,
    pub seed: u64,
    pub init: UamdsInit,
}

impl Default for UamdsParams {
    fn default() -> Self {
        Self {
            maps: Vec::new(),
            include_self_pairs: true,
            max_iter: 2000,
            tol: 1e-8,
            seed: 0,
            init: UamdsInit::Uapca,
        }
    }
}

const ARMIJO_C: f64 = 1e-4;
const ARMIJO_SHRINK: f64 = 0.5;
const MIN_STEP: f64 = 1e-20;

/// Total stress of the given maps on the given Gaussians.
pub fn uamds_stress(dists: &[MultivariateNormal], params: &UamdsParams) -> Result<f64> {
    let (means, covs) = split_moments(dists)?;
    let state = Params::from_maps(&params.maps, means.len(), covs[0].dim())?;
    let pairs = build_pairs(&means, &covs, params.include_self_pairs);
    Ok(total_stress(&pairs, &means, &state))
}

/// Stress plus its exact derivative with respect to every map entry.
///
/// The derivative comes back shaped like the maps themselves: one entry per
/// input whose matrix part differentiates the map's matrix and whose offset
/// part differentiates the translation. This is the same closed form the
/// optimizer steps on, so external optimizers can drive it directly; it
/// agrees with central finite differences of `uamds_stress`.
pub fn uamds_stress_gradient(
    dists: &[MultivariateNormal],
    params: &UamdsParams,
) -> Result<(f64, Vec<AffineMap>)> {
    let (means, covs) = split_moments(dists)?;
    let state = Params::from_maps(&params.maps, means.len(), covs[0].dim())?;
    let pairs = build_pairs(&means, &covs, params.include_self_pairs);
    let (value, grad) = stress_and_gradient(&pairs, &means, &state);
    let maps = grad
        .p
        .into_iter()
        .zip(grad.t)
        .map(|(p, t)| AffineMap::new(p, t))
        .collect::<Result<Vec<_>>>()?;
    Ok((value, maps))
}

/// Optimize per-distribution affine maps to `d` dimensions.
///
/// Non-Gaussian inputs are reduced to their first two moments. The stress
/// trace starts at the initial stress and records every accepted step, so
/// it is non-increasing by construction; `converged` reports whether the
/// relative decrease fell below `tol` before `max_iter`.
pub fn uamds_fit(
    dists: &[Distribution],
    d: usize,
    params: &UamdsParams,
) -> Result<EmbeddingResult> {
    if dists.is_empty() {
        return Err(Error::domain("embedding needs at least one distribution".to_string()));
    }
    let n = dists[0].dim();
    for (i, dist) in dists.iter().enumerate() {
        if dist.dim() != n {
            return Err(Error::domain(format!(
                "distribution {i} has dimension {} but the first has {n}",
                dist.dim()
            )));
        }
    }
    if d == 0 || d > n {
        return Err(Error::domain(format!(
            "target dimension must satisfy 1 <= d <= {n}, got {d}"
        )));
    }

    let reduced: Vec<MultivariateNormal> = dists
        .iter()
        .map(|dist| {
            let (mean, cov) = dist.moments();
            MultivariateNormal::new(mean, cov)
        })
        .collect::<Result<Vec<_>>>()?;
    let (means, covs) = split_moments(&reduced)?;

    let mut state = if params.maps.is_empty() {
        initial_params(dists, &means, d, n, params)?
    } else {
        Params::from_maps(&params.maps, means.len(), n)?
    };
    if state.p[0].rows() != d {
        return Err(Error::domain(format!(
            "starting maps have {} rows but target dimension is {d}",
            state.p[0].rows()
        )));
    }

    let pairs = build_pairs(&means, &covs, params.include_self_pairs);

    let mut stress = total_stress(&pairs, &means, &state);
    if !stress.is_finite() {
        return Err(Error::numeric(
            "stress is not finite at iteration 0".to_string(),
        ));
    }
    let mut trace = vec![stress];
    let mut converged = false;

    for iter in 0..params.max_iter {
        let (_, grad) = stress_and_gradient(&pairs, &means, &state);
        let gnorm2 = grad.norm2();
        if !gnorm2.is_finite() {
            return Err(Error::numeric(format!(
                "gradient is not finite at iteration {iter}"
            )));
        }
        if gnorm2 == 0.0 {
            converged = true;
            break;
        }

        // Backtracking line search along the negative gradient, restarted
        // from a unit step every iteration.
        let mut alpha = 1.0;
        let mut accepted = None;
        while alpha >= MIN_STEP {
            let mut candidate = state.clone();
            candidate.axpy(-alpha, &grad);
            let s = total_stress(&pairs, &means, &candidate);
            if s.is_finite() && s <= stress - ARMIJO_C * alpha * gnorm2 {
                accepted = Some((candidate, s));
                break;
            }
            alpha *= ARMIJO_SHRINK;
        }
        let Some((next, s_next)) = accepted else {
            // No descent step exists at any representable scale: treat the
            // point as stationary.
            converged = true;
            break;
        };

        let decrease = (stress - s_next) / stress.max(f64::MIN_POSITIVE);
        state = next;
        stress = s_next;
        trace.push(stress);
        if decrease < params.tol {
            converged = true;
            break;
        }
    }

    let maps: Vec<AffineMap> = (0..means.len())
        .map(|i| AffineMap::new(state.p[i].clone(), state.t[i].clone()))
        .collect::<Result<Vec<_>>>()?;

    let distributions = dists
        .iter()
        .zip(&reduced)
        .zip(&maps)
        .map(|((orig, gaussian), map)| {
            let out = Distribution::from_normal(gaussian.clone()).affine_transform(map)?;
            Ok(match &orig.name {
                Some(name) => out.with_name(name.clone()),
                None => out,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(EmbeddingResult {
        distributions,
        maps,
        stress_trace: trace,
        converged,
    })
}

fn split_moments(dists: &[MultivariateNormal]) -> Result<(Vec<Vec<f64>>, Vec<SymMatrix>)> {
    if dists.is_empty() {
        return Err(Error::domain("stress needs at least one distribution".to_string()));
    }
    let n = dists[0].dim();
    for (i, d) in dists.iter().enumerate() {
        if d.dim() != n {
            return Err(Error::domain(format!(
                "distribution {i} has dimension {} but the first has {n}",
                d.dim()
            )));
        }
    }
    Ok((
        dists.iter().map(|d| d.mean().to_vec()).collect(),
        dists.iter().map(|d| d.cov().clone()).collect(),
    ))
}

fn initial_params(
    dists: &[Distribution],
    means: &[Vec<f64>],
    d: usize,
    n: usize,
    params: &UamdsParams,
) -> Result<Params> {
    let count = means.len();
    match params.init {
        UamdsInit::Uapca => {
            let (_, model) = uapca(dists, d)?;
            let wt = model.basis.transpose();
            let t0: Vec<f64> = wt.mul_vec(&model.center).iter().map(|v| -v).collect();
            Ok(Params {
                p: vec![wt; count],
                t: vec![t0; count],
            })
        }
        UamdsInit::Random => {
            let mut rng = Rng::new(params.seed);
            let scale = 1.0 / (n as f64).sqrt();
            let mut p = Vec::with_capacity(count);
            let mut t = Vec::with_capacity(count);
            for _ in 0..count {
                p.push(Mat::from_fn(d, n, |_, _| scale * rng.next_normal()));
                t.push((0..d).map(|_| scale * rng.next_normal()).collect());
            }
            Ok(Params { p, t })
        }
    }
}

/// The full parameter set: one projection matrix and offset per
/// distribution. Doubles as the gradient container.
#[derive(Debug, Clone)]
struct Params {
    p: Vec<Mat>,
    t: Vec<Vec<f64>>,
}

impl Params {
    fn from_maps(maps: &[AffineMap], count: usize, n: usize) -> Result<Self> {
        if maps.len() != count {
            return Err(Error::domain(format!(
                "{} maps for {count} distributions",
                maps.len()
            )));
        }
        let d = maps[0].out_dim();
        for (i, m) in maps.iter().enumerate() {
            if m.in_dim() != n || m.out_dim() != d {
                return Err(Error::domain(format!(
                    "map {i} is {}x{}, expected {d}x{n}",
                    m.out_dim(),
                    m.in_dim()
                )));
            }
        }
        Ok(Self {
            p: maps.iter().map(|m| m.matrix().clone()).collect(),
            t: maps.iter().map(|m| m.offset().to_vec()).collect(),
        })
    }

    fn zeros_like(&self) -> Self {
        Self {
            p: self
                .p
                .iter()
                .map(|m| Mat::zeros(m.rows(), m.cols()))
                .collect(),
            t: self.t.iter().map(|v| vec![0.0; v.len()]).collect(),
        }
    }

    /// self += alpha · other
    fn axpy(&mut self, alpha: f64, other: &Params) {
        for (a, b) in self.p.iter_mut().zip(&other.p) {
            for r in 0..a.rows() {
                for c in 0..a.cols() {
                    a.set(r, c, a.get(r, c) + alpha * b.get(r, c));
                }
            }
        }
        for (a, b) in self.t.iter_mut().zip(&other.t) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += alpha * y;
            }
        }
    }

    fn norm2(&self) -> f64 {
        let p: f64 = self
            .p
            .iter()
            .map(|m| m.as_slice().iter().map(|x| x * x).sum::<f64>())
            .sum();
        let t: f64 = self
            .t
            .iter()
            .map(|v| v.iter().map(|x| x * x).sum::<f64>())
            .sum();
        p + t
    }
}

/// Everything about a pair that does not change during optimization.
struct PairData {
    i: usize,
    j: usize,
    /// [Δμ; −Δμ] where Δμ = μᵢ − μⱼ; zero for self-pairs.
    h: Vec<f64>,
    /// ‖Δμ‖²
    k_mu: f64,
    /// blockdiag(Σᵢ, Σⱼ)
    v: Mat,
    /// [[I,−I],[−I,I]] · V
    ahv: Mat,
    tr_ahv: f64,
}

fn build_pairs(means: &[Vec<f64>], covs: &[SymMatrix], self_pairs: bool) -> Vec<PairData> {
    let count = means.len();
    let mut pairs = Vec::new();
    for i in 0..count {
        for j in (i + 1)..count {
            pairs.push(PairData::new(i, j, means, covs));
        }
    }
    if self_pairs {
        for i in 0..count {
            pairs.push(PairData::new(i, i, means, covs));
        }
    }
    pairs
}

impl PairData {
    fn new(i: usize, j: usize, means: &[Vec<f64>], covs: &[SymMatrix]) -> Self {
        let n = means[i].len();
        let dmu = if i == j {
            vec![0.0; n]
        } else {
            sub_vec(&means[i], &means[j])
        };
        let mut h = vec![0.0; 2 * n];
        for a in 0..n {
            h[a] = dmu[a];
            h[n + a] = -dmu[a];
        }
        let k_mu = dot(&dmu, &dmu);

        let (si, sj) = (&covs[i], &covs[j]);
        let v = Mat::from_fn(2 * n, 2 * n, |r, c| {
            if r < n && c < n {
                si.get(r, c)
            } else if r >= n && c >= n {
                sj.get(r - n, c - n)
            } else {
                0.0
            }
        });
        // A_h·V = [[Σᵢ, −Σⱼ], [−Σᵢ, Σⱼ]]
        let ahv = Mat::from_fn(2 * n, 2 * n, |r, c| {
            let (top, left) = (r < n, c < n);
            match (top, left) {
                (true, true) => si.get(r, c),
                (true, false) => -sj.get(r, c - n),
                (false, true) => -si.get(r - n, c),
                (false, false) => sj.get(r - n, c - n),
            }
        });
        let tr_ahv = si.trace() + sj.trace();

        Self {
            i,
            j,
            h,
            k_mu,
            v,
            ahv,
            tr_ahv,
        }
    }

    /// Stress of this pair under the given parameters; when `grad` is
    /// supplied the pair's contribution is accumulated into it.
    fn stress(&self, means: &[Vec<f64>], params: &Params, mut grad: Option<&mut Params>) -> f64 {
        let n = means[self.i].len();
        let pi = &params.p[self.i];
        let pj = &params.p[self.j];
        let d = pi.rows();
        let self_pair = self.i == self.j;

        // e = cᵢ − cⱼ; identically zero for self-pairs (same map applied to
        // two copies of the same distribution).
        let e: Vec<f64> = if self_pair {
            vec![0.0; d]
        } else {
            let ci = crate::numerics::matrix::add_vec(
                &pi.mul_vec(&means[self.i]),
                &params.t[self.i],
            );
            let cj = crate::numerics::matrix::add_vec(
                &pj.mul_vec(&means[self.j]),
                &params.t[self.j],
            );
            sub_vec(&ci, &cj)
        };
        let k = self.k_mu - dot(&e, &e);

        // G = [Pᵢ, −Pⱼ]
        let g = Mat::from_fn(d, 2 * n, |r, c| {
            if c < n {
                pi.get(r, c)
            } else {
                -pj.get(r, c - n)
            }
        });
        let gv = g.mul(&self.v);
        let tr_ggv: f64 = gv
            .as_slice()
            .iter()
            .zip(g.as_slice())
            .map(|(a, b)| a * b)
            .sum();
        let t_av = self.tr_ahv - tr_ggv;

        // AV = A_h·V − Gᵀ·(G·V)
        let gt_gv = g.transpose().mul(&gv);
        let av = self.ahv.sub(&gt_gv);
        let two_n = 2 * n;
        let mut tr_av2 = 0.0;
        for r in 0..two_n {
            for c in 0..two_n {
                tr_av2 += av.get(r, c) * av.get(c, r);
            }
        }

        // b = 2(h − Gᵀe); identically zero for self-pairs.
        let (b, vb, bvb) = if self_pair {
            (vec![0.0; two_n], vec![0.0; two_n], 0.0)
        } else {
            let gte = g.tr_mul_vec(&e);
            let b: Vec<f64> = self
                .h
                .iter()
                .zip(&gte)
                .map(|(hh, ge)| 2.0 * (hh - ge))
                .collect();
            let vb = self.v.mul_vec(&b);
            let bvb = dot(&b, &vb);
            (b, vb, bvb)
        };

        let s = (t_av + k) * (t_av + k) + 2.0 * tr_av2 + bvb;

        if let Some(grad) = grad.as_deref_mut() {
            let coef = -4.0 * (t_av + k);
            // ∂s/∂G = −4(tr(AV)+k)·GV − 8·GV·AV − 4·e·(Vb)ᵀ
            let mut grad_g = gv.scale(coef);
            let gvav = gv.mul(&av);
            for r in 0..d {
                for c in 0..two_n {
                    grad_g.set(r, c, grad_g.get(r, c) - 8.0 * gvav.get(r, c));
                }
            }
            if !self_pair {
                let evb = outer(&e, &vb);
                for r in 0..d {
                    for c in 0..two_n {
                        grad_g.set(r, c, grad_g.get(r, c) - 4.0 * evb.get(r, c));
                    }
                }
            }

            if self_pair {
                // G = [Pᵢ, −Pᵢ]: both halves feed the same matrix.
                let gp = &mut grad.p[self.i];
                for r in 0..d {
                    for c in 0..n {
                        gp.set(
                            r,
                            c,
                            gp.get(r, c) + grad_g.get(r, c) - grad_g.get(r, n + c),
                        );
                    }
                }
            } else {
                // ∂s/∂e = −4(tr(AV)+k)·e − 4·GV·b, scattered through
                // e = (Pᵢμᵢ + tᵢ) − (Pⱼμⱼ + tⱼ).
                let gvb = gv.mul_vec(&b);
                let grad_e: Vec<f64> = e
                    .iter()
                    .zip(&gvb)
                    .map(|(ee, gb)| coef * ee - 4.0 * gb)
                    .collect();

                let gpi = &mut grad.p[self.i];
                for r in 0..d {
                    for c in 0..n {
                        gpi.set(
                            r,
                            c,
                            gpi.get(r, c) + grad_g.get(r, c) + grad_e[r] * means[self.i][c],
                        );
                    }
                }
                let gpj = &mut grad.p[self.j];
                for r in 0..d {
                    for c in 0..n {
                        gpj.set(
                            r,
                            c,
                            gpj.get(r, c) - grad_g.get(r, n + c) - grad_e[r] * means[self.j][c],
                        );
                    }
                }
                for r in 0..d {
                    grad.t[self.i][r] += grad_e[r];
                    grad.t[self.j][r] -= grad_e[r];
                }
            }
        }

        s
    }
}

fn total_stress(pairs: &[PairData], means: &[Vec<f64>], params: &Params) -> f64 {
    pairs
        .iter()
        .map(|pair| pair.stress(means, params, None))
        .sum()
}

fn stress_and_gradient(pairs: &[PairData], means: &[Vec<f64>], params: &Params) -> (f64, Params) {
    let mut grad = params.zeros_like();
    let mut total = 0.0;
    for pair in pairs {
        total += pair.stress(means, params, Some(&mut grad));
    }
    (total, grad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rng::Rng;

    fn gaussian(mean: Vec<f64>, cov: SymMatrix) -> MultivariateNormal {
        MultivariateNormal::new(mean, cov).unwrap()
    }

    fn random_instance(
        count: usize,
        n: usize,
        seed: u64,
    ) -> (Vec<MultivariateNormal>, Vec<Distribution>) {
        let mut rng = Rng::new(seed);
        let normals: Vec<MultivariateNormal> = (0..count)
            .map(|_| {
                let mean: Vec<f64> = (0..n).map(|_| 2.0 * rng.next_normal()).collect();
                let a = Mat::from_fn(n, n, |_, _| rng.next_normal());
                let cov = SymMatrix::new(&a.mul(&a.transpose()).scale(1.0 / n as f64)).unwrap();
                gaussian(mean, cov)
            })
            .collect();
        let dists = normals
            .iter()
            .cloned()
            .map(Distribution::from_normal)
            .collect();
        (normals, dists)
    }

    fn random_maps(count: usize, d: usize, n: usize, seed: u64) -> Vec<AffineMap> {
        let mut rng = Rng::new(seed);
        (0..count)
            .map(|_| {
                AffineMap::new(
                    Mat::from_fn(d, n, |_, _| rng.next_normal()),
                    (0..d).map(|_| rng.next_normal()).collect(),
                )
                .unwrap()
            })
            .collect()
    }

    #[test]
    fn identity_embedding_has_zero_stress() {
        let (normals, _) = random_instance(3, 3, 42);
        let maps: Vec<AffineMap> = (0..3).map(|_| AffineMap::identity(3)).collect();
        let params = UamdsParams {
            maps,
            ..Default::default()
        };
        let s = uamds_stress(&normals, &params).unwrap();
        assert!(s.abs() < 1e-18, "stress {s}");
    }

    #[test]
    fn zero_covariance_pair_hand_values() {
        let normals = vec![
            gaussian(vec![3.0, 4.0], SymMatrix::zeros(2)),
            gaussian(vec![0.0, 0.0], SymMatrix::zeros(2)),
        ];
        // Maps with P = 0 so e is controlled entirely by the offsets.
        let zero = Mat::zeros(2, 2);
        let exact = UamdsParams {
            maps: vec![
                AffineMap::new(zero.clone(), vec![5.0, 0.0]).unwrap(),
                AffineMap::new(zero.clone(), vec![0.0, 0.0]).unwrap(),
            ],
            ..Default::default()
        };
        // ‖Δμ‖² = 25 and ‖e‖² = 25: perfectly matched distances.
        assert_eq!(uamds_stress(&normals, &exact).unwrap(), 0.0);

        let collapsed = UamdsParams {
            maps: vec![
                AffineMap::new(zero.clone(), vec![0.0, 0.0]).unwrap(),
                AffineMap::new(zero, vec![0.0, 0.0]).unwrap(),
            ],
            ..Default::default()
        };
        // e = 0: s = (25 − 0)² = 625.
        assert_eq!(uamds_stress(&normals, &collapsed).unwrap(), 625.0);
    }

    /// Monte-Carlo estimate of E[(‖Xᵢ−Xⱼ‖² − ‖Yᵢ−Yⱼ‖²)²] under the
    /// coupling Y = P·X + t, summed over the same pairs as the closed form.
    fn mc_stress(
        normals: &[MultivariateNormal],
        maps: &[AffineMap],
        self_pairs: bool,
        reps: usize,
        seed: u64,
    ) -> f64 {
        let count = normals.len();
        let dists: Vec<Distribution> = normals
            .iter()
            .cloned()
            .map(Distribution::from_normal)
            .collect();
        let mut pair_list: Vec<(usize, usize)> = Vec::new();
        for i in 0..count {
            for j in (i + 1)..count {
                pair_list.push((i, j));
            }
        }
        if self_pairs {
            for i in 0..count {
                pair_list.push((i, i));
            }
        }

        let mut total = 0.0;
        for (pair_index, &(i, j)) in pair_list.iter().enumerate() {
            let xi = dists[i].sample(reps, seed.wrapping_add(2 * pair_index as u64));
            let xj = dists[j].sample(reps, seed.wrapping_add(2 * pair_index as u64 + 1));
            let mut acc = 0.0;
            for r in 0..reps {
                let a = xi.row(r);
                let b = xj.row(r);
                let dx2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
                let ya = maps[i].apply(a);
                let yb = maps[j].apply(b);
                let dy2: f64 = ya.iter().zip(&yb).map(|(x, y)| (x - y) * (x - y)).sum();
                acc += (dx2 - dy2) * (dx2 - dy2);
            }
            total += acc / reps as f64;
        }
        total
    }

    #[test]
    fn stress_matches_monte_carlo() {
        let (normals, _) = random_instance(2, 3, 1001);
        let maps = random_maps(2, 2, 3, 55);
        for self_pairs in [false, true] {
            let params = UamdsParams {
                maps: maps.clone(),
                include_self_pairs: self_pairs,
                ..Default::default()
            };
            let closed = uamds_stress(&normals, &params).unwrap();
            let mc = mc_stress(&normals, &maps, self_pairs, 200_000, 7);
            let rel = (closed - mc).abs() / closed.max(1e-12);
            assert!(
                rel < 0.05,
                "self_pairs={self_pairs}: closed {closed} vs MC {mc} (rel {rel})"
            );
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        for seed in 0..3u64 {
            let (normals, _) = random_instance(3, 3, 300 + seed);
            let maps = random_maps(3, 2, 3, 900 + seed);
            let params = UamdsParams {
                maps: maps.clone(),
                ..Default::default()
            };
            let (means, covs) = split_moments(&normals).unwrap();
            let pairs = build_pairs(&means, &covs, params.include_self_pairs);
            let state = Params::from_maps(&maps, 3, 3).unwrap();
            let (_, grad) = stress_and_gradient(&pairs, &means, &state);

            let h = 1e-5;
            let mut num = state.zeros_like();
            for idx in 0..3 {
                for r in 0..2 {
                    for c in 0..3 {
                        let base = state.p[idx].get(r, c);
                        let mut plus = state.clone();
                        plus.p[idx].set(r, c, base + h);
                        let mut minus = state.clone();
                        minus.p[idx].set(r, c, base - h);
                        let fd = (total_stress(&pairs, &means, &plus)
                            - total_stress(&pairs, &means, &minus))
                            / (2.0 * h);
                        num.p[idx].set(r, c, fd);
                    }
                    let mut plus = state.clone();
                    plus.t[idx][r] += h;
                    let mut minus = state.clone();
                    minus.t[idx][r] -= h;
                    num.t[idx][r] = (total_stress(&pairs, &means, &plus)
                        - total_stress(&pairs, &means, &minus))
                        / (2.0 * h);
                }
            }

            let mut diff2 = 0.0;
            let mut norm2 = 0.0;
            for idx in 0..3 {
                for r in 0..2 {
                    for c in 0..3 {
                        let d = grad.p[idx].get(r, c) - num.p[idx].get(r, c);
                        diff2 += d * d;
                        norm2 += grad.p[idx].get(r, c).powi(2);
                    }
                    let d = grad.t[idx][r] - num.t[idx][r];
                    diff2 += d * d;
                    norm2 += grad.t[idx][r].powi(2);
                }
            }
            let rel = (diff2 / norm2.max(1e-300)).sqrt();
            assert!(rel <= 1e-5, "seed {seed}: relative gradient error {rel}");
        }
    }

    #[test]
    fn stress_invariant_under_output_rotation_and_shift() {
        let (normals, _) = random_instance(3, 4, 15);
        let maps = random_maps(3, 2, 4, 16);
        let params = UamdsParams {
            maps: maps.clone(),
            ..Default::default()
        };
        let s0 = uamds_stress(&normals, &params).unwrap();

        // 2D rotation and arbitrary shift applied to every output map.
        let angle = 0.83f64;
        let r = Mat::from_rows(&[
            vec![angle.cos(), -angle.sin()],
            vec![angle.sin(), angle.cos()],
        ]);
        let u = vec![1.7, -0.4];
        let moved: Vec<AffineMap> = maps
            .iter()
            .map(|m| {
                let rp = r.mul(m.matrix());
                let rt = crate::numerics::matrix::add_vec(&r.mul_vec(m.offset()), &u);
                AffineMap::new(rp, rt).unwrap()
            })
            .collect();
        let params_moved = UamdsParams {
            maps: moved,
            ..Default::default()
        };
        let s1 = uamds_stress(&normals, &params_moved).unwrap();
        assert!((s0 - s1).abs() <= 1e-9 * s0.max(1.0), "{s0} vs {s1}");
    }

    #[test]
    fn equilateral_triangle_embeds_exactly() {
        let dists = vec![
            Distribution::normal(vec![0.0, 0.0, 0.0], SymMatrix::zeros(3)).unwrap(),
            Distribution::normal(vec![1.0, 0.0, 0.0], SymMatrix::zeros(3)).unwrap(),
            Distribution::normal(vec![0.5, 3.0f64.sqrt() / 2.0, 0.0], SymMatrix::zeros(3))
                .unwrap(),
        ];
        let params = UamdsParams {
            init: UamdsInit::Random,
            seed: 4,
            ..Default::default()
        };
        let result = uamds_fit(&dists, 2, &params).unwrap();
        let final_stress = *result.stress_trace.last().unwrap();
        assert!(final_stress <= 1e-6, "final stress {final_stress}");
        for w in result.stress_trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-15, "trace increased: {} -> {}", w[0], w[1]);
        }
        // Pairwise output distances must be ~1.
        for i in 0..3 {
            for j in (i + 1)..3 {
                let mi = result.distributions[i].moments().0;
                let mj = result.distributions[j].moments().0;
                let d2: f64 = mi.iter().zip(&mj).map(|(a, b)| (a - b) * (a - b)).sum();
                assert!((d2 - 1.0).abs() < 1e-3, "pair ({i},{j}) distance² {d2}");
            }
        }
    }

    #[test]
    fn fit_is_deterministic() {
        let (_, dists) = random_instance(4, 3, 500);
        let params = UamdsParams {
            max_iter: 50,
            ..Default::default()
        };
        let a = uamds_fit(&dists, 2, &params).unwrap();
        let b = uamds_fit(&dists, 2, &params).unwrap();
        assert_eq!(a.stress_trace, b.stress_trace);
        for (ma, mb) in a.maps.iter().zip(&b.maps) {
            assert_eq!(ma, mb);
        }
        for (da, db) in a.distributions.iter().zip(&b.distributions) {
            assert_eq!(da, db);
        }
    }

    #[test]
    fn trace_non_increasing_on_random_instances() {
        for seed in 0..4u64 {
            let (_, dists) = random_instance(4, 4, 700 + seed);
            let params = UamdsParams {
                max_iter: 120,
                init: if seed % 2 == 0 {
                    UamdsInit::Uapca
                } else {
                    UamdsInit::Random
                },
                seed,
                ..Default::default()
            };
            let result = uamds_fit(&dists, 2, &params).unwrap();
            for w in result.stress_trace.windows(2) {
                assert!(w[1] <= w[0], "seed {seed}: {} -> {}", w[0], w[1]);
            }
        }
    }

    #[test]
    fn fit_improves_on_projection_start() {
        let (_, dists) = random_instance(5, 4, 2500);
        let short = UamdsParams {
            max_iter: 1,
            ..Default::default()
        };
        let long = UamdsParams {
            max_iter: 400,
            ..Default::default()
        };
        let first = uamds_fit(&dists, 2, &short).unwrap();
        let full = uamds_fit(&dists, 2, &long).unwrap();
        let s_first = *first.stress_trace.first().unwrap();
        let s_full = *full.stress_trace.last().unwrap();
        assert!(
            s_full < s_first,
            "optimization did not improve: {s_first} -> {s_full}"
        );
    }

    #[test]
    fn outputs_carry_propagated_covariance() {
        let (_, dists) = random_instance(3, 3, 31);
        let params = UamdsParams {
            max_iter: 30,
            ..Default::default()
        };
        let result = uamds_fit(&dists, 2, &params).unwrap();
        for (dist, map) in dists.iter().zip(&result.maps) {
            let (mean, cov) = dist.moments();
            let idx = result
                .maps
                .iter()
                .position(|m| std::ptr::eq(m, map))
                .unwrap();
            let (out_mean, out_cov) = result.distributions[idx].moments();
            let want_mean = map.apply(&mean);
            let want_cov = cov.congruence(map.matrix());
            for r in 0..2 {
                assert!((out_mean[r] - want_mean[r]).abs() < 1e-12);
                for c in 0..2 {
                    assert!((out_cov.get(r, c) - want_cov.get(r, c)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn dimension_validation() {
        let (_, dists) = random_instance(2, 3, 9);
        assert!(uamds_fit(&dists, 0, &UamdsParams::default()).is_err());
        assert!(uamds_fit(&dists, 4, &UamdsParams::default()).is_err());
        assert!(uamds_fit(&[], 1, &UamdsParams::default()).is_err());

        let (normals, _) = random_instance(2, 3, 9);
        let bad_maps = random_maps(3, 2, 3, 1);
        let params = UamdsParams {
            maps: bad_maps,
            ..Default::default()
        };
        assert!(uamds_stress(&normals, &params).is_err());
    }
}
