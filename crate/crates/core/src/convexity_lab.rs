//! Numerical convexity checks for the planar norm formulas.
//!
//! Nothing here proves convexity: a grid either finds a reproducible
//! violation of `f(l u + (1 - l) v) <= l f(u) + (1 - l) f(v)` or certifies
//! the inequality on the points it sampled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::norms::{NormKind, NormSpec};
use crate::scalar::Real;
use crate::vec2::Vec2;

/// Smallest accepted excess for a violation witness.
pub const WITNESS_MARGIN: f64 = 1e-10;
/// Hessian eigenvalues above this count as non-negative.
pub const HESSIAN_TOL: f64 = -1e-7;
/// Base step of the finite differences in [`hessian_grid`].
pub const HESSIAN_STEP: f64 = 1e-5;
/// Agreement required between closed-form and finite-difference
/// derivatives in [`log_convexity_profile`].
pub const PROFILE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    CertifiedConvexOnGrid,
    ViolationFound,
}

/// `f(l u + (1 - l) v) = lhs > rhs = l f(u) + (1 - l) f(v)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness<T> {
    pub u: Vec2<T>,
    pub v: Vec2<T>,
    pub lambda: T,
    pub lhs: T,
    pub rhs: T,
    pub margin: T,
}

impl<T: Real> Witness<T> {
    pub fn evaluate<F: Fn(Vec2<T>) -> T>(f: F, u: Vec2<T>, v: Vec2<T>, lambda: T) -> Self {
        let lhs = f(u * lambda + v * (T::one() - lambda));
        let rhs = lambda * f(u) + (T::one() - lambda) * f(v);
        Self {
            u,
            v,
            lambda,
            lhs,
            rhs,
            margin: lhs - rhs,
        }
    }

    /// Excess `lhs - rhs` recomputed from scratch with `f`.
    pub fn recheck<F: Fn(Vec2<T>) -> T>(&self, f: F) -> T {
        Self::evaluate(f, self.u, self.v, self.lambda).margin
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport<T> {
    pub verdict: Verdict,
    pub witness: Option<Witness<T>>,
    /// Pairs tested or Hessian points evaluated.
    pub grid: usize,
    pub min_hessian_eig: Option<T>,
}

/// Octant of `v`: cone `c` holds the angles in `[c pi/4, (c + 1) pi/4)`.
pub fn cone_index<T: Real>(v: Vec2<T>) -> usize {
    let mut a = v.y.atan2(v.x);
    if a < T::zero() {
        a = a + T::TAU();
    }
    let c = (a / T::FRAC_PI_4()).floor().to_usize().unwrap_or(0);
    c.min(7)
}

/// Random convex combinations of sphere points.
///
/// `pairs` is split evenly between the eight octants (both points and a
/// random weight drawn in one cone), pairs mirrored across the `x` axis,
/// and unrestricted pairs. The largest excess above [`WITNESS_MARGIN`] is
/// reported.
pub fn midpoint_test<T: Real>(norm: &NormSpec<T>, pairs: usize, seed: u64) -> Result<ConvexityReport<T>> {
    if pairs < 1000 {
        return Err(invalid("pairs", "need at least 1000 pairs"));
    }
    let f = |w: Vec2<T>| norm.eval(w);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let per_group = pairs / 10;
    let mut best: Option<Witness<T>> = None;
    let mut consider = |u: Vec2<T>, v: Vec2<T>, lambda: T| {
        if !(u.is_finite() && v.is_finite()) {
            return;
        }
        let w = Witness::evaluate(f, u, v, lambda);
        if w.margin.is_finite() && best.map_or(true, |b| w.margin > b.margin) {
            best = Some(w);
        }
    };
    let quarter = std::f64::consts::FRAC_PI_4;
    let mut tested = 0;
    for cone in 0..8 {
        let lo = quarter * cone as f64;
        for _ in 0..per_group {
            let a = norm.sphere_point(T::lit(rng.gen_range(lo..lo + quarter)));
            let b = norm.sphere_point(T::lit(rng.gen_range(lo..lo + quarter)));
            consider(a, b, T::lit(rng.gen_range(0.0..1.0)));
            tested += 1;
        }
    }
    let rest = pairs - tested;
    for i in 0..rest {
        let a = norm.sphere_point(T::lit(rng.gen_range(0.0..std::f64::consts::TAU)));
        if i % 2 == 0 {
            consider(a, Vec2::new(a.x, -a.y), T::lit(0.5));
        } else {
            let b = norm.sphere_point(T::lit(rng.gen_range(0.0..std::f64::consts::TAU)));
            consider(a, b, T::lit(rng.gen_range(0.0..1.0)));
        }
    }
    let witness = best.filter(|w| w.margin >= T::lit(WITNESS_MARGIN));
    Ok(ConvexityReport {
        verdict: if witness.is_some() {
            Verdict::ViolationFound
        } else {
            Verdict::CertifiedConvexOnGrid
        },
        witness,
        grid: pairs,
        min_hessian_eig: None,
    })
}

/// Hessian of `norm` at `v` from central differences of the analytic
/// gradient with steps `h` and `h / 2`, Richardson-combined and symmetrized.
fn hessian<T: Real>(norm: &NormSpec<T>, v: Vec2<T>, h: T) -> Result<[[T; 2]; 2]> {
    let central = |h: T| -> Result<[[T; 2]; 2]> {
        let two_h = h + h;
        let dx = norm.gradient(v + Vec2::new(h, T::zero()))? - norm.gradient(v - Vec2::new(h, T::zero()))?;
        let dy = norm.gradient(v + Vec2::new(T::zero(), h))? - norm.gradient(v - Vec2::new(T::zero(), h))?;
        Ok([[dx.x / two_h, dy.x / two_h], [dx.y / two_h, dy.y / two_h]])
    };
    let coarse = central(h)?;
    let fine = central(h / T::lit(2.0))?;
    let r = |i: usize, j: usize| (T::lit(4.0) * fine[i][j] - coarse[i][j]) / T::lit(3.0);
    let off = (r(0, 1) + r(1, 0)) / T::lit(2.0);
    Ok([[r(0, 0), off], [off, r(1, 1)]])
}

/// Smallest eigenvalue of a symmetric 2x2 matrix and a unit eigenvector.
fn min_eigen<T: Real>(m: [[T; 2]; 2]) -> (T, Vec2<T>) {
    let (a, b, c) = (m[0][0], m[0][1], m[1][1]);
    let half = (a - c) / T::lit(2.0);
    let r = (half * half + b * b).sqrt();
    let lam = (a + c) / T::lit(2.0) - r;
    let e = if b.abs() > T::zero() {
        Vec2::new(b, lam - a)
    } else if a <= c {
        Vec2::new(T::one(), T::zero())
    } else {
        Vec2::new(T::zero(), T::one())
    };
    (lam, e.scale(e.euclid().recip()))
}

/// Hessian certificate on the annulus `0.5 <= |v|_2 <= 2`.
///
/// `grid` angles offset from the axes are used on four radii; cells with
/// `|sin| <= 0.05` are subdivided eightfold. A negative eigenvalue yields a
/// witness along its eigenvector when one with margin above
/// [`WITNESS_MARGIN`] exists.
pub fn hessian_grid<T: Real>(norm: &NormSpec<T>, grid: usize) -> Result<ConvexityReport<T>> {
    if norm.is_polyhedral() {
        return Err(Error::NotSmoothVariant(norm.variant_name()));
    }
    if norm.dim() != 2 {
        return Err(invalid("norm", "the Hessian grid works on planar norms"));
    }
    let grid = grid.max(8);
    let step = std::f64::consts::TAU / grid as f64;
    let mut angles = Vec::with_capacity(grid * 2);
    for j in 0..grid {
        let t = step * (j as f64 + 0.5);
        if t.sin().abs() <= 0.05 {
            for s in 0..8 {
                angles.push(step * (j as f64 + (s as f64 + 0.5) / 8.0));
            }
        } else {
            angles.push(t);
        }
    }
    let radii = [0.5, 1.0, 1.5, 2.0];
    let h = T::lit(HESSIAN_STEP);
    let evals: Vec<(T, Vec2<T>, Vec2<T>)> = angles
        .par_iter()
        .flat_map_iter(|&t| radii.iter().map(move |&r| Vec2::<T>::from_angle(T::lit(t)).scale(T::lit(r))))
        .map(|p| {
            let (lam, e) = min_eigen(hessian(norm, p, h)?);
            Ok((lam, p, e))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut worst = 0;
    for (i, ev) in evals.iter().enumerate() {
        if ev.0 < evals[worst].0 {
            worst = i;
        }
    }
    let (min_eig, p, e) = evals[worst];
    let mut witness = None;
    if min_eig < T::lit(HESSIAN_TOL) {
        let f = |w: Vec2<T>| norm.eval(w);
        for s in [0.2, 0.1, 0.03, 0.01, 3e-3, 1e-3] {
            let s = T::lit(s) * p.euclid();
            let w = Witness::evaluate(f, p + e.scale(s), p - e.scale(s), T::lit(0.5));
            if w.margin.is_finite() && witness.map_or(true, |b: Witness<T>| w.margin > b.margin) {
                witness = Some(w);
            }
        }
        witness = witness.filter(|w| w.margin >= T::lit(WITNESS_MARGIN));
    }
    Ok(ConvexityReport {
        verdict: if min_eig >= T::lit(HESSIAN_TOL) {
            Verdict::CertifiedConvexOnGrid
        } else {
            Verdict::ViolationFound
        },
        witness,
        grid: evals.len(),
        min_hessian_eig: Some(min_eig),
    })
}

/// One sample of `phi(t) = log f(t, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow<T> {
    pub t: T,
    pub phi1: T,
    pub phi2: T,
    /// `phi'' + phi'^2`, which has the sign of the second derivative of
    /// `f(t, 1)`.
    pub convexity: T,
    pub fd_phi1: T,
    pub fd_phi2: T,
    /// `phi'` obtained from the implemented gradient.
    pub grad_phi1: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile<T> {
    pub rows: Vec<ProfileRow<T>>,
    /// Largest disagreement between the closed forms and either the
    /// finite differences or the gradient.
    pub max_error: T,
    pub min_convexity: T,
}

impl<T: Real> Profile<T> {
    pub fn matches(&self) -> bool {
        self.max_error <= T::lit(PROFILE_TOL)
    }
}

/// Closed forms of `phi'` and `phi''`.
fn profile_closed<T: Real>(norm: &NormSpec<T>, t: T) -> (T, T) {
    let one = T::one();
    match *norm.kind() {
        NormKind::GeomMean { p0, p1, theta } => {
            let parts = |p: T| {
                let tp = t.abs().powf(p);
                let d = one + tp;
                (
                    t.signum() * t.abs().powf(p - one) / d,
                    t.abs().powf(p - T::lit(2.0)) * (p - one - tp) / (d * d),
                )
            };
            let (a1, a2) = parts(p0);
            let (b1, b2) = parts(p1);
            (theta * b1 + (one - theta) * a1, theta * b2 + (one - theta) * a2)
        }
        NormKind::AsymA { a } => {
            let r = a / (one + a);
            let (c0, c1) = (r.powf(a), r.powf(one + a));
            let t2 = t * t;
            let d = (c0 + t2) * (c1 + t2);
            let num = -t2 * t2 * t2 + (c0 + c1) * t2 * t2 + T::lit(3.0) * c0 * c1 * t2;
            (t * t2 / d, num / (d * d))
        }
        _ => unreachable!("checked by the caller"),
    }
}

/// Derivatives of `phi(t) = log f(t, 1)` from the closed forms, checked
/// against Richardson-extrapolated central differences of the implemented
/// norm (step `1e-3`) and against the implemented gradient.
///
/// Accepts `GeomMean` (with `t` in `[0, 1]`) and `AsymA` (any `t`).
pub fn log_convexity_profile<T: Real>(norm: &NormSpec<T>, t_grid: &[T]) -> Result<Profile<T>> {
    match *norm.kind() {
        NormKind::GeomMean { .. } => {
            if t_grid.iter().any(|&t| !(t >= T::zero() && t <= T::one())) {
                return Err(invalid("t_grid", "GeomMean profiles live on [0, 1]"));
            }
        }
        NormKind::AsymA { .. } => {
            if t_grid.iter().any(|t| !t.is_finite()) {
                return Err(invalid("t_grid", "samples must be finite"));
            }
        }
        _ => return Err(Error::NotSmoothVariant(norm.variant_name())),
    }
    let phi = |t: T| norm.eval(Vec2::new(t, T::one())).ln();
    let two = T::lit(2.0);
    let d1 = |t: T, h: T| (phi(t + h) - phi(t - h)) / (two * h);
    let d2 = |t: T, h: T| (phi(t + h) - two * phi(t) + phi(t - h)) / (h * h);
    let richardson = |d: &dyn Fn(T, T) -> T, t: T| {
        let h = T::lit(1e-3);
        (T::lit(4.0) * d(t, h / two) - d(t, h)) / T::lit(3.0)
    };
    let mut max_error = T::zero();
    let mut min_convexity = T::infinity();
    let mut rows = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let (phi1, phi2) = profile_closed(norm, t);
        let fd_phi1 = richardson(&d1, t);
        let fd_phi2 = richardson(&d2, t);
        let w = Vec2::new(t, T::one());
        let grad_phi1 = norm.gradient(w)?.x / norm.eval(w);
        let convexity = phi2 + phi1 * phi1;
        max_error = max_error
            .max((phi1 - fd_phi1).abs())
            .max((phi2 - fd_phi2).abs())
            .max((phi1 - grad_phi1).abs());
        min_convexity = min_convexity.min(convexity);
        rows.push(ProfileRow {
            t,
            phi1,
            phi2,
            convexity,
            fd_phi1,
            fd_phi2,
            grad_phi1,
        });
    }
    Ok(Profile {
        rows,
        max_error,
        min_convexity,
    })
}

/// `(x^4 + 2 beta x^2 y^2 + y^4)^(1/4)` for any real `beta`; NaN where the
/// quartic is negative.
pub fn quartic_root<T: Real>(beta: T, v: Vec2<T>) -> T {
    let (x2, y2) = (v.x * v.x, v.y * v.y);
    (x2 * x2 + T::lit(2.0) * beta * x2 * y2 + y2 * y2).sqrt().sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BetaRoute {
    /// `beta` in `[0, 1]`: an `l_4` norm of `l_2` and `l_4` norms.
    Decomposition,
    /// `beta` in `(1, 3]`: rotated coordinates reduce to `g(beta)` in `[0, 1)`.
    ChangeOfVariables,
    /// `beta < 0`: two sphere points with a midpoint outside the ball.
    NegativeWitness,
    /// `beta > 3`: the `g(beta) < 0` witness mapped back.
    MappedWitness,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaClassification<T> {
    pub beta: T,
    pub is_norm: bool,
    pub route: BetaRoute,
    /// `(3 - beta) / (1 + beta)` when the change of variables was used.
    pub g: Option<T>,
    /// Largest relative error of the identities checked on the way.
    pub identity_error: T,
    pub witness: Option<Witness<T>>,
}

const IDENTITY_TOL: f64 = 1e-12;

fn identity_samples<T: Real>() -> impl Iterator<Item = Vec2<T>> {
    (0..256).map(|j| {
        let t = T::lit((j as f64 + 0.37) * std::f64::consts::TAU / 256.0);
        Vec2::from_angle(t).scale(T::lit(0.5 + (j % 7) as f64 * 0.25))
    })
}

fn decomposition_error<T: Real>(beta: T) -> T {
    let one = T::one();
    let w2 = beta.sqrt().sqrt();
    let w4 = (one - beta).sqrt().sqrt();
    identity_samples::<T>()
        .map(|v| {
            let n2 = v.euclid();
            let n4 = (v.x.powi(4) + v.y.powi(4)).sqrt().sqrt();
            let outer = ((w2 * n2).powi(4) + (w4 * n4).powi(4)).sqrt().sqrt();
            let direct = quartic_root(beta, v);
            ((outer - direct) / direct).abs()
        })
        .fold(T::zero(), T::max)
}

/// `(x, y)` from `(u, v)` in the rotated coordinates.
fn rotate_back<T: Real>(beta: T, w: Vec2<T>) -> Vec2<T> {
    let s = (T::lit(2.0) + T::lit(2.0) * beta).sqrt().sqrt();
    Vec2::new((w.x + w.y) / s, (w.x - w.y) / s)
}

fn change_of_variables_error<T: Real>(beta: T, g: T) -> T {
    identity_samples::<T>()
        .map(|w| {
            let lhs = quartic_root(beta, rotate_back(beta, w));
            let rhs = quartic_root(g, w);
            ((lhs - rhs) / rhs).abs()
        })
        .fold(T::zero(), T::max)
}

/// Witness for `beta < 0`: `(1, +-d) / s` with `s^4 = 1 + 2 beta d^2 + d^4`.
fn negative_witness<T: Real>(beta: T) -> Witness<T> {
    let one = T::one();
    let mut delta = one.min((-T::lit(2.0) * beta).sqrt() / T::lit(2.0));
    // below -1 the default can leave the quartic negative
    while one + T::lit(2.0) * beta * delta * delta + delta.powi(4) <= T::zero() {
        delta = delta / T::lit(2.0);
    }
    let s = (one + T::lit(2.0) * beta * delta * delta + delta.powi(4)).sqrt().sqrt();
    let u = Vec2::new(one / s, delta / s);
    let v = Vec2::new(one / s, -delta / s);
    Witness::evaluate(|w| quartic_root(beta, w), u, v, T::lit(0.5))
}

/// Whether `(x^4 + 2 beta x^2 y^2 + y^4)^(1/4)` is a norm, with the identity
/// or the witness that decides it.
pub fn beta_classify<T: Real>(beta: T) -> Result<BetaClassification<T>> {
    if !beta.is_finite() {
        return Err(invalid("beta", "must be finite"));
    }
    let one = T::one();
    let three = T::lit(3.0);
    let tol = T::lit(IDENTITY_TOL);
    let out = if beta < T::zero() {
        BetaClassification {
            beta,
            is_norm: false,
            route: BetaRoute::NegativeWitness,
            g: None,
            identity_error: T::zero(),
            witness: Some(negative_witness(beta)),
        }
    } else if beta <= one {
        let err = decomposition_error(beta);
        BetaClassification {
            beta,
            is_norm: err <= tol,
            route: BetaRoute::Decomposition,
            g: None,
            identity_error: err,
            witness: None,
        }
    } else {
        let g = (three - beta) / (one + beta);
        let cov = change_of_variables_error(beta, g);
        if beta <= three {
            let err = cov.max(decomposition_error(g.max(T::zero())));
            BetaClassification {
                beta,
                is_norm: err <= tol,
                route: BetaRoute::ChangeOfVariables,
                g: Some(g),
                identity_error: err,
                witness: None,
            }
        } else {
            let base = negative_witness(g);
            let (u, v) = (rotate_back(beta, base.u), rotate_back(beta, base.v));
            let witness = Witness::evaluate(|w| quartic_root(beta, w), u, v, base.lambda);
            BetaClassification {
                beta,
                is_norm: false,
                route: BetaRoute::MappedWitness,
                g: Some(g),
                identity_error: cov,
                witness: Some(witness),
            }
        }
    };
    Ok(out)
}

/// Values of `n(x, y) = (x^2 + e y^2)^(theta/2) (e x^2 + y^2)^((1-theta)/2)`
/// at `(1, 0)`, `(0, 1)` and `(1, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsWitness<T> {
    pub eps: T,
    pub theta: T,
    pub n10: T,
    pub n01: T,
    pub n11: T,
    /// `n(1, 1) - n(1, 0) - n(0, 1)`.
    pub margin: T,
}

impl<T: Real> EpsWitness<T> {
    pub fn evaluate(theta: T, eps: T) -> Result<Self> {
        let n = NormSpec::eps_geom_mean(theta, eps)?;
        let (o, z) = (T::one(), T::zero());
        let n10 = n.eval(Vec2::new(o, z));
        let n01 = n.eval(Vec2::new(z, o));
        let n11 = n.eval(Vec2::new(o, o));
        Ok(Self {
            eps,
            theta,
            n10,
            n01,
            n11,
            margin: n11 - n10 - n01,
        })
    }
}

/// First `eps` of `eps_grid` (in the given order) for which the triangle
/// inequality fails at `(1, 0) + (0, 1)`.
pub fn eps_counterexample<T: Real>(theta: T, eps_grid: &[T]) -> Result<Option<EpsWitness<T>>> {
    if !(theta > T::zero() && theta < T::one()) {
        return Err(invalid("theta", "must lie in (0, 1)"));
    }
    for &eps in eps_grid {
        let w = EpsWitness::evaluate(theta, eps)?;
        if w.margin > T::zero() {
            return Ok(Some(w));
        }
    }
    Ok(None)
}
