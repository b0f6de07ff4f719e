//! Upper estimates of the polynomial numerical index `n^(k)(X)`.
//!
//! The objective `v(P) / ||P||` is scale invariant, so it is minimized over
//! the unconstrained coefficient space of degree `k` maps. The search uses a
//! fixed sphere grid on which the pairing is linear in the coefficients; the
//! reported value is re-evaluated with [`radius`] and
//! [`VectorHomoPoly::sup_norm`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::homopoly::VectorHomoPoly;
use crate::linalg::symmetric_eigen;
use crate::norms::NormSpec;
use crate::numrange::{radius, verify_zero};
use crate::scalar::Real;
use crate::vec2::Vec2;

/// Estimates at or below this value count as zero candidates.
pub const ZERO_THRESHOLD: f64 = 1e-6;
/// Half-circle angles used by the optimizer's objective.
pub const OPTIMIZER_GRID: usize = 512;
/// Largest degree accepted by [`min_zero_degree`].
pub const MAX_ZERO_DEGREE: usize = 9;
/// Largest degree accepted by [`monotonicity_report`].
pub const MAX_MONOTONE_DEGREE: usize = 7;
/// Slack allowed between consecutive estimates in [`monotonicity_report`].
pub const MONOTONE_TOL: f64 = 1e-3;

const FINAL_TOL: f64 = 1e-12;

/// Search budget: independent starts, and simplex iterations per start.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub starts: usize,
    pub iterations: usize,
}

impl Budget {
    pub fn new(starts: usize, iterations: usize) -> Result<Self> {
        if starts == 0 {
            return Err(invalid("starts", "must be positive"));
        }
        if iterations == 0 {
            return Err(invalid("iterations", "must be positive"));
        }
        Ok(Self { starts, iterations })
    }

    /// 64 starts of 3000 iterations.
    pub fn desk() -> Self {
        Self {
            starts: 64,
            iterations: 3000,
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self::desk()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Clone + Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct IndexEstimate<T> {
    pub k: usize,
    /// Best `v(P) / ||P||` found; an upper bound for `n^(k)`.
    pub value: T,
    /// Minimizer with unit Euclidean coefficient vector.
    pub best: VectorHomoPoly<T>,
    pub starts: usize,
    /// Objective evaluations over all starts.
    pub evals: u64,
    pub seed: u64,
}

/// Grid version of `v(P) / ||P||` as a function of the coefficient vector.
struct Objective<'a, T> {
    norm: &'a NormSpec<T>,
    k: usize,
    /// `k + 1` monomials `x^(k-i) y^i` per sample point.
    monos: Vec<T>,
    /// Norming functionals of each sample point.
    functionals: Vec<Vec<Vec2<T>>>,
}

impl<'a, T: Real> Objective<'a, T> {
    fn new(norm: &'a NormSpec<T>, k: usize, grid: usize) -> Self {
        let step = T::PI() / T::from_usize_lossy(grid);
        let points: Vec<Vec2<T>> = (0..grid)
            .map(|j| norm.sphere_point(step * T::from_usize_lossy(j)))
            .chain(norm.vertices())
            .collect();
        let mut monos = Vec::with_capacity(points.len() * (k + 1));
        let mut functionals = Vec::with_capacity(points.len());
        for u in points {
            for i in 0..=k {
                monos.push(u.x.powi((k - i) as i32) * u.y.powi(i as i32));
            }
            functionals.push(norm.norming_set(u).expect("sphere points are non-zero"));
        }
        Self {
            norm,
            k,
            monos,
            functionals,
        }
    }

    fn dim(&self) -> usize {
        2 * (self.k + 1)
    }

    fn eval(&self, c: &[T]) -> T {
        let n1 = self.k + 1;
        let (c1, c2) = c.split_at(n1);
        let mut v = T::zero();
        let mut s = T::zero();
        for (m, fs) in self.monos.chunks_exact(n1).zip(&self.functionals) {
            let pu = Vec2::new(dot(m, c1), dot(m, c2));
            for f in fs {
                v = v.max(f.dot(pu).abs());
            }
            s = s.max(self.norm.eval_monotone(pu));
        }
        let s = self.norm.from_monotone(s);
        if s > T::zero() && s.is_finite() {
            v / s
        } else {
            T::infinity()
        }
    }

    /// Unit vector minimizing the mean squared grid pairing relative to the
    /// coefficient length: the bottom eigenvector of `sum F F^T`.
    fn gram_start(&self) -> Vec<T> {
        let n1 = self.k + 1;
        let n = self.dim();
        let mut g = vec![vec![T::zero(); n]; n];
        let mut row = vec![T::zero(); n];
        for (m, fs) in self.monos.chunks_exact(n1).zip(&self.functionals) {
            for f in fs {
                for i in 0..n1 {
                    row[i] = f.x * m[i];
                    row[n1 + i] = f.y * m[i];
                }
                for i in 0..n {
                    for j in i..n {
                        g[i][j] = g[i][j] + row[i] * row[j];
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                g[i][j] = g[j][i];
            }
        }
        let (_, vectors) = symmetric_eigen(g);
        vectors.into_iter().next().expect("dimension is positive")
    }
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

fn normalize<T: Real>(x: &mut [T]) {
    let n = dot(x, x).sqrt();
    if n > T::zero() {
        x.iter_mut().for_each(|c| *c = *c / n);
    }
}

/// Adaptive Nelder-Mead (dimension dependent reflection, expansion,
/// contraction and shrink coefficients), restarted from the incumbent with
/// a fresh simplex until a restart brings no improvement or the iteration
/// budget is used up. The incumbent is rescaled to unit length at every
/// restart, which the scale invariant objective allows.
fn nelder_mead<T: Real, F: Fn(&[T]) -> T>(
    f: &F,
    mut x0: Vec<T>,
    step: T,
    iterations: usize,
    evals: &mut u64,
) -> (Vec<T>, T) {
    let n = x0.len();
    let nf = T::from_usize_lossy(n);
    let one = T::one();
    let two = T::lit(2.0);
    let alpha = one;
    let gamma = one + two / nf;
    let rho = T::lit(0.75) - (two * nf).recip();
    let sigma = one - nf.recip();
    let floor = T::epsilon() * T::lit(16.0);

    let mut call = |x: &[T]| {
        *evals += 1;
        f(x)
    };
    normalize(&mut x0);
    let mut best_f = call(&x0);
    let mut best_x = x0;
    let mut used = 0usize;

    while used < iterations {
        let mut simplex: Vec<(Vec<T>, T)> = Vec::with_capacity(n + 1);
        simplex.push((best_x.clone(), best_f));
        for i in 0..n {
            let mut x = best_x.clone();
            x[i] = x[i] + step;
            normalize(&mut x);
            let fx = call(&x);
            simplex.push((x, fx));
        }
        let start_f = best_f;
        while used < iterations {
            used += 1;
            simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
            let (fl, fh) = (simplex[0].1, simplex[n].1);
            let spread = (fh - fl).abs();
            let diameter = simplex[1..]
                .iter()
                .map(|(x, _)| {
                    x.iter()
                        .zip(&simplex[0].0)
                        .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()))
                })
                .fold(T::zero(), T::max);
            if fl <= floor || diameter < T::lit(1e-10) || spread <= T::lit(1e-12) * fl.abs() {
                break;
            }
            let mut centroid = vec![T::zero(); n];
            for (x, _) in &simplex[..n] {
                for (c, &xi) in centroid.iter_mut().zip(x) {
                    *c = *c + xi;
                }
            }
            centroid.iter_mut().for_each(|c| *c = *c / nf);
            let along = |t: T| -> Vec<T> {
                centroid
                    .iter()
                    .zip(&simplex[n].0)
                    .map(|(&c, &h)| c + t * (c - h))
                    .collect()
            };
            let xr = along(alpha);
            let fr = call(&xr);
            if fr < simplex[0].1 {
                let xe = along(alpha * gamma);
                let fe = call(&xe);
                simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            } else if fr < simplex[n - 1].1 {
                simplex[n] = (xr, fr);
            } else {
                let (xc, fc) = if fr < fh {
                    let xc = along(alpha * rho);
                    let fc = call(&xc);
                    (xc, fc)
                } else {
                    let xc = along(-rho);
                    let fc = call(&xc);
                    (xc, fc)
                };
                if fc < fh.min(fr) {
                    simplex[n] = (xc, fc);
                } else {
                    let x_best = simplex[0].0.clone();
                    for (x, fx) in simplex.iter_mut().skip(1) {
                        for (xi, &bi) in x.iter_mut().zip(&x_best) {
                            *xi = bi + sigma * (*xi - bi);
                        }
                        *fx = call(x);
                    }
                }
            }
        }
        let (bx, bf) = simplex
            .into_iter()
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal))
            .expect("simplex is non-empty");
        if bf < best_f {
            best_f = bf;
            best_x = bx;
            normalize(&mut best_x);
        }
        if best_f <= floor || !(best_f < start_f * (one - T::lit(1e-9))) {
            break;
        }
    }
    (best_x, best_f)
}

fn start_rng(seed: u64, k: usize, start: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    rng.set_stream(start as u64);
    rng
}

/// Minimize `v(P) / ||P||` over degree `k` maps.
///
/// Start 0 is seeded deterministically from the bottom eigenvector of the
/// grid Gram matrix of the pairing; every other start draws `4(k + 1)`
/// random coefficient vectors from its own ChaCha stream and descends from
/// the best of them. Starts run on the current rayon pool and the minimum
/// is reduced in start order, so results do not depend on the thread count.
pub fn estimate_index<T: Real>(
    norm: &NormSpec<T>,
    k: usize,
    budget: Budget,
    seed: u64,
) -> Result<IndexEstimate<T>> {
    if k == 0 {
        return Err(invalid("k", "degree must be at least 1"));
    }
    Budget::new(budget.starts, budget.iterations)?;
    if norm.dim() != 2 {
        return Err(invalid("norm", "index search works on planar norms"));
    }
    let obj = Objective::new(norm, k, OPTIMIZER_GRID);
    let n = obj.dim();
    let population = 4 * (k + 1);
    let step = T::lit(0.25);

    let runs: Vec<(Vec<T>, T, u64)> = (0..budget.starts)
        .into_par_iter()
        .map(|s| {
            let mut evals = 0u64;
            let x0 = if s == 0 {
                obj.gram_start()
            } else {
                let mut rng = start_rng(seed, k, s);
                let mut best: Option<(Vec<T>, T)> = None;
                for _ in 0..population {
                    let c: Vec<T> = (0..n).map(|_| T::lit(rng.gen_range(-1.0..=1.0))).collect();
                    let fc = obj.eval(&c);
                    evals += 1;
                    if best.as_ref().map_or(true, |b| fc < b.1) {
                        best = Some((c, fc));
                    }
                }
                best.expect("population is non-empty").0
            };
            let (x, fx) = nelder_mead(&|c: &[T]| obj.eval(c), x0, step, budget.iterations, &mut evals);
            (x, fx, evals)
        })
        .collect();

    let evals = runs.iter().map(|r| r.2).sum();
    let mut best = 0;
    for (i, r) in runs.iter().enumerate() {
        if r.1 < runs[best].1 {
            best = i;
        }
    }
    let poly = VectorHomoPoly::from_coeff_vec(k, &runs[best].0)?.normalized();
    let value = objective_value(&poly, norm);
    Ok(IndexEstimate {
        k,
        value,
        best: poly,
        starts: budget.starts,
        evals,
        seed,
    })
}

/// `v(P) / ||P||` with the full radius and sup-norm evaluations.
pub fn objective_value<T: Real>(p: &VectorHomoPoly<T>, norm: &NormSpec<T>) -> T {
    let tol = T::lit(FINAL_TOL);
    let s = p.sup_norm(norm, tol);
    if s == T::zero() {
        return T::zero();
    }
    radius(p, norm, tol).value / s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Clone + Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct ZeroDegree<T> {
    /// Smallest degree with a certified zero-radius polynomial, if any.
    pub k0: Option<usize>,
    pub per_k: Vec<IndexEstimate<T>>,
}

/// Smallest `k <= kmax` whose estimate drops to [`ZERO_THRESHOLD`] and whose
/// minimizer also passes [`verify_zero`]. The sweep stops at the first hit.
pub fn min_zero_degree<T: Real>(
    norm: &NormSpec<T>,
    kmax: usize,
    budget: Budget,
    seed: u64,
) -> Result<ZeroDegree<T>> {
    if kmax == 0 || kmax > MAX_ZERO_DEGREE {
        return Err(invalid("kmax", format!("must lie in 1..={MAX_ZERO_DEGREE}")));
    }
    let thr = T::lit(ZERO_THRESHOLD);
    let mut per_k = Vec::new();
    for k in 1..=kmax {
        let est = estimate_index(norm, k, budget, seed)?;
        let zero = est.value <= thr && verify_zero(&est.best, norm, thr).certified;
        per_k.push(est);
        if zero {
            return Ok(ZeroDegree { k0: Some(k), per_k });
        }
    }
    Ok(ZeroDegree { k0: None, per_k })
}

/// `|cos|` of the angle between the coefficient vectors of two zero-radius
/// maps of equal degree; `1` means proportional.
///
/// Both maps must pass [`verify_zero`] at [`ZERO_THRESHOLD`].
pub fn uniqueness_check<T: Real>(
    norm: &NormSpec<T>,
    canonical: &VectorHomoPoly<T>,
    found: &VectorHomoPoly<T>,
) -> Result<T> {
    if canonical.degree() != found.degree() {
        return Err(Error::DegreeMismatch {
            expected: canonical.degree(),
            found: found.degree(),
        });
    }
    let thr = T::lit(ZERO_THRESHOLD);
    for (name, p) in [("canonical", canonical), ("found", found)] {
        let check = verify_zero(p, norm, thr);
        if !check.certified {
            return Err(invalid(
                name,
                format!("numerical radius {} is not zero", check.max_pairing),
            ));
        }
    }
    let (a, b) = (canonical.normalized(), found.normalized());
    Ok(dot(&a.coeff_vec(), &b.coeff_vec()).abs().min(T::one()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Clone + Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct MonotonicityReport<T> {
    /// `(k, estimate)` for `k = 1..=kmax`.
    pub rows: Vec<(usize, T)>,
    /// Degrees `k` with `value(k + 1) > value(k) + tolerance`.
    pub violations: Vec<usize>,
    pub tolerance: T,
    pub estimates: Vec<IndexEstimate<T>>,
}

impl<T> MonotonicityReport<T> {
    pub fn is_monotone(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn monotonicity_report<T: Real>(
    norm: &NormSpec<T>,
    kmax: usize,
    budget: Budget,
    seed: u64,
) -> Result<MonotonicityReport<T>> {
    if kmax == 0 || kmax > MAX_MONOTONE_DEGREE {
        return Err(invalid("kmax", format!("must lie in 1..={MAX_MONOTONE_DEGREE}")));
    }
    let tolerance = T::lit(MONOTONE_TOL);
    let estimates = (1..=kmax)
        .map(|k| estimate_index(norm, k, budget, seed))
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<(usize, T)> = estimates.iter().map(|e| (e.k, e.value)).collect();
    let violations = rows
        .windows(2)
        .filter(|w| w[1].1 > w[0].1 + tolerance)
        .map(|w| w[0].0)
        .collect();
    Ok(MonotonicityReport {
        rows,
        violations,
        tolerance,
        estimates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homopoly::lp_zero_poly;

    fn small() -> Budget {
        Budget::new(8, 800).unwrap()
    }

    #[test]
    fn objective_matches_full_evaluation() {
        let norm = NormSpec::<f64>::lp(3.0).unwrap();
        let obj = Objective::new(&norm, 2, 2048);
        let c = [0.3, -1.0, 0.2, 0.7, 0.1, -0.4];
        let p = VectorHomoPoly::from_coeff_vec(2, &c).unwrap();
        let full = objective_value(&p, &norm);
        assert!((obj.eval(&c) - full).abs() < 1e-5 * full);
    }

    #[test]
    fn objective_is_scale_invariant() {
        let norm = NormSpec::<f64>::beta_quartic(2.0).unwrap();
        let obj = Objective::new(&norm, 3, OPTIMIZER_GRID);
        let c: Vec<f64> = (0..8).map(|i| ((i * 7 % 5) as f64 - 2.0) * 0.3 + 0.05).collect();
        let base = obj.eval(&c);
        for lam in [-3.5, 0.01, 42.0] {
            let s: Vec<f64> = c.iter().map(|x| x * lam).collect();
            assert!((obj.eval(&s) - base).abs() <= 1e-12 * base);
        }
    }

    #[test]
    fn nelder_mead_minimizes_a_kinked_function() {
        // max |a_i . x| / |x| restricted to the sphere vanishes on e_2 only
        let f = |x: &[f64]| {
            let n = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
            (x[0].abs() + (x[2] - 0.5 * x[0]).abs()) / n
        };
        let mut evals = 0;
        let (x, fx) = nelder_mead(&f, vec![0.5, 0.5, 0.5], 0.25, 5000, &mut evals);
        assert!(fx < 1e-8, "{fx}");
        assert!(x[1].abs() > 1.0 - 1e-8);
        assert!(evals > 0);
    }

    #[test]
    fn hilbert_rotation_is_found() {
        let norm = NormSpec::<f64>::lp(2.0).unwrap();
        let est = estimate_index(&norm, 1, small(), 3).unwrap();
        assert!(est.value <= 1e-8, "{}", est.value);
        let c = est.best.coeff_vec();
        // multiple of (-y, x)
        assert!(c[0].abs() < 1e-6 && c[3].abs() < 1e-6);
        assert!((c[1] + c[2]).abs() < 1e-6);
    }

    #[test]
    fn determinism_and_thread_independence() {
        let norm = NormSpec::<f64>::lp(3.0).unwrap();
        let a = estimate_index(&norm, 2, small(), 11).unwrap();
        let b = estimate_index(&norm, 2, small(), 11).unwrap();
        assert_eq!(a, b);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let c = pool.install(|| estimate_index(&norm, 2, small(), 11).unwrap());
        assert_eq!(a, c);
        let d = estimate_index(&norm, 2, small(), 12).unwrap();
        assert_eq!(d.seed, 12);
    }

    #[test]
    fn square_order_two_is_near_half() {
        let est = estimate_index(&NormSpec::<f64>::linf(), 2, Budget::new(16, 1500).unwrap(), 0).unwrap();
        assert!(est.value > 0.45 && est.value < 0.55, "{}", est.value);
    }

    #[test]
    fn uniqueness_examples() {
        let norm = NormSpec::<f64>::lp(4.0).unwrap();
        let p = lp_zero_poly(4.0).unwrap();
        assert!((uniqueness_check(&norm, &p, &p).unwrap() - 1.0).abs() < 1e-15);
        let q = p.scale(-2.7);
        assert!((uniqueness_check(&norm, &p, &q).unwrap() - 1.0).abs() < 1e-15);
        let r = lp_zero_poly(6.0).unwrap();
        assert!(matches!(
            uniqueness_check(&norm, &p, &r),
            Err(Error::DegreeMismatch { .. })
        ));
        let id3 = VectorHomoPoly::from_coeffs(vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(uniqueness_check(&norm, &p, &id3).is_err());
    }

    #[test]
    fn argument_validation() {
        let norm = NormSpec::<f64>::lp(4.0).unwrap();
        assert!(estimate_index(&norm, 0, small(), 0).is_err());
        assert!(estimate_index(&norm, 1, Budget { starts: 0, iterations: 5 }, 0).is_err());
        assert!(min_zero_degree(&norm, 10, small(), 0).is_err());
        assert!(monotonicity_report(&norm, 8, small(), 0).is_err());
        assert!(Budget::new(1, 0).is_err());
    }
}
