//! Numerical range and numerical radius of polynomial maps of the plane.
//!
//! The numerical range of `P` is the set of pairings `x*(P(x))` over all
//! norming pairs `(x, x*)`. Sphere points are taken by radial scaling of the
//! Euclidean circle; at polyhedral vertices every extreme functional of the
//! norming face is evaluated, which is exact because the pairing is affine
//! in the functional.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homopoly::{EmbeddedPoly, VectorHomoPoly};
use crate::norms::{DualPair, NormSpec};
use crate::scalar::Real;
use crate::search::periodic_max;
use crate::vec2::Vec2;

/// Default angular grid of the radius scan.
pub const DEFAULT_GRID: usize = 4096;
/// Grid used to confirm near-zero radii.
pub const ESCALATED_GRID: usize = 65536;

/// Numerical radius together with the norming pair that attains it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusEstimate<T> {
    pub value: T,
    pub witness: DualPair<T>,
    /// Signed pairing `x*(P(x))` at the witness.
    pub witness_pairing: T,
    /// Angle of the witness on the Euclidean circle.
    pub angle: T,
    pub grid: usize,
    pub refined_tol: T,
}

/// Outcome of [`verify_zero`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroCheck<T> {
    pub certified: bool,
    pub max_pairing: T,
    /// Finest grid used for the decision.
    pub grid: usize,
}

/// Largest `|x*(P(x))|` over the norming set at `u`, with the maximizing
/// functional and its signed pairing.
fn best_pairing<T: Real>(p: &VectorHomoPoly<T>, norm: &NormSpec<T>, u: Vec2<T>) -> (T, Vec2<T>, T) {
    let pu = p.eval(u);
    let fs = norm.norming_set(u).expect("sphere points are non-zero");
    let mut best = (-T::one(), fs[0], T::zero());
    for f in fs {
        let val = f.dot(pu);
        if val.abs() > best.0 {
            best = (val.abs(), f, val);
        }
    }
    best
}

/// Pairings `x*(P(x))` at `n` equispaced angles of the full circle.
///
/// Polyhedral norms contribute one value per extreme norming functional and
/// additionally every vertex of their unit sphere.
pub fn range_samples<T: Real>(p: &VectorHomoPoly<T>, norm: &NormSpec<T>, n: usize) -> Vec<T> {
    let n = n.max(16);
    let step = T::TAU() / T::from_usize_lossy(n);
    let mut out = Vec::with_capacity(n);
    let mut push_at = |u: Vec2<T>| {
        let pu = p.eval(u);
        for f in norm.norming_set(u).expect("sphere points are non-zero") {
            out.push(f.dot(pu));
        }
    };
    for j in 0..n {
        push_at(norm.sphere_point(step * T::from_usize_lossy(j)));
    }
    for v in norm.vertices() {
        push_at(v);
    }
    out
}

/// Numerical radius on the default 4096-angle grid.
pub fn radius<T: Real>(p: &VectorHomoPoly<T>, norm: &NormSpec<T>, tol: T) -> RadiusEstimate<T> {
    radius_grid(p, norm, DEFAULT_GRID, tol)
}

/// `sup |x*(P(x))|` over norming pairs.
///
/// `grid` angles of a half turn are scanned (the pairing is odd or even
/// under `x -> -x`, so its modulus has period pi), the best cells are
/// refined by golden-section search down to `tol`, and polyhedral vertices
/// are evaluated exactly.
pub fn radius_grid<T: Real>(
    p: &VectorHomoPoly<T>,
    norm: &NormSpec<T>,
    grid: usize,
    tol: T,
) -> RadiusEstimate<T> {
    let scan = periodic_max(
        |t| best_pairing(p, norm, norm.sphere_point(t)).0,
        T::zero(),
        T::PI(),
        grid.max(16),
        4,
        tol,
    );
    let mut angle = scan.arg;
    let mut u = norm.sphere_point(angle);
    let (mut value, mut f, mut signed) = best_pairing(p, norm, u);
    for v in norm.vertices() {
        let (val, fv, s) = best_pairing(p, norm, v);
        if val > value {
            value = val;
            f = fv;
            signed = s;
            u = v;
            angle = v.y.atan2(v.x);
        }
    }
    RadiusEstimate {
        value,
        witness: DualPair::new(u, f),
        witness_pairing: signed,
        angle,
        grid,
        refined_tol: tol,
    }
}

/// Certify `v(P) <= tol`.
///
/// A 4096-angle scan rejects clear failures (radius above `100 tol`);
/// anything else is decided on the 65536-angle grid.
pub fn verify_zero<T: Real>(p: &VectorHomoPoly<T>, norm: &NormSpec<T>, tol: T) -> ZeroCheck<T> {
    if p.is_zero() {
        return ZeroCheck {
            certified: true,
            max_pairing: T::zero(),
            grid: 0,
        };
    }
    let coarse = radius_grid(p, norm, DEFAULT_GRID, tol);
    if coarse.value > T::lit(100.0) * tol {
        return ZeroCheck {
            certified: false,
            max_pairing: coarse.value,
            grid: DEFAULT_GRID,
        };
    }
    let fine = radius_grid(p, norm, ESCALATED_GRID, tol);
    let max_pairing = fine.value.max(coarse.value);
    ZeroCheck {
        certified: max_pairing <= tol,
        max_pairing,
        grid: ESCALATED_GRID,
    }
}

/// Closed-form norming functional from a zero-radius polynomial:
/// `(-P2(v), P1(v)) ||v|| / Q(v)` with `Q = y P1 - x P2`.
pub fn thm_norming<T: Real>(p: &VectorHomoPoly<T>, v: Vec2<T>, norm: &NormSpec<T>) -> Result<Vec2<T>> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let pv = p.eval(v);
    let q = v.y * pv.x - v.x * pv.y;
    if q == T::zero() || !q.is_finite() {
        return Err(Error::QVanishes {
            x: v.x.as_f64(),
            y: v.y.as_f64(),
        });
    }
    let s = norm.eval(v) / q;
    Ok(Vec2::new(-pv.y * s, pv.x * s))
}

/// Pairing of an embedded map with the `l_p^d` norming functional at `x`.
pub fn embedded_pairing<T: Real>(e: &EmbeddedPoly<T>, norm: &NormSpec<T>, x: &[T]) -> Result<T> {
    let f = norm.gradient_nd(x)?;
    let px = e.eval(x);
    Ok(f.iter().zip(&px).map(|(&a, &b)| a * b).sum())
}

/// Diagnostic for the connectedness of the numerical range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalCheck<T> {
    /// Largest gap between consecutive sorted samples.
    pub max_gap: T,
    /// Largest jump between pairings at consecutive angles.
    pub modulus: T,
    pub looks_connected: bool,
}

/// Compare the gaps of the sorted range samples with the empirical modulus
/// of continuity of the pairing along the circle. A gap larger than the
/// modulus (with a 1e-12 slack) is flagged.
pub fn interval_check<T: Real>(p: &VectorHomoPoly<T>, norm: &NormSpec<T>, n: usize) -> IntervalCheck<T> {
    let n = n.max(16);
    let step = T::TAU() / T::from_usize_lossy(n);
    // per angle: all pairings over the norming set
    let per_angle: Vec<Vec<T>> = (0..n)
        .map(|j| {
            let u = norm.sphere_point(step * T::from_usize_lossy(j));
            let pu = p.eval(u);
            norm.norming_set(u)
                .expect("sphere points are non-zero")
                .into_iter()
                .map(|f| f.dot(pu))
                .collect()
        })
        .collect();
    let mut modulus = T::zero();
    for j in 0..n {
        let (a, b) = (&per_angle[j], &per_angle[(j + 1) % n]);
        // closest transition between the two norming sets
        let mut jump = T::infinity();
        for &x in a {
            for &y in b {
                jump = jump.min((x - y).abs());
            }
        }
        // a face of functionals sweeps the whole segment between extremes
        let spread = |v: &[T]| {
            let lo = v.iter().copied().fold(T::infinity(), T::min);
            let hi = v.iter().copied().fold(T::neg_infinity(), T::max);
            hi - lo
        };
        modulus = modulus.max(jump).max(spread(a));
    }
    let mut all: Vec<T> = per_angle.into_iter().flatten().collect();
    all.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let max_gap = all
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(T::zero(), T::max);
    IntervalCheck {
        max_gap,
        modulus,
        looks_connected: max_gap <= modulus + T::lit(1e-12),
    }
}
