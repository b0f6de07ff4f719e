//! Homogeneous polynomials of two variables and polynomial maps of the plane.
//!
//! A degree `k` scalar polynomial is stored densely as `k + 1` coefficients,
//! `c[i]` multiplying `x^(k-i) y^i`. Coefficient arithmetic only needs a ring
//! (so exact rationals work); evaluation needs [`Real`].

use std::ops::Neg;

use num_traits::Num;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::norms::NormSpec;
use crate::scalar::Real;
use crate::search::periodic_max;
use crate::vec2::Vec2;

/// Sum of `c[i] x^(k-i) y^i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ScalarHomoPoly<T> {
    coeffs: Vec<T>,
}

impl<T> ScalarHomoPoly<T> {
    /// Build from a non-empty coefficient list; the degree is `len - 1`.
    pub fn new(coeffs: Vec<T>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::CoefficientLength {
                len: 0,
                expected: 1,
            });
        }
        Ok(Self { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }
}

impl<T: Num + Copy + Neg<Output = T>> ScalarHomoPoly<T> {
    pub fn zero(degree: usize) -> Self {
        Self {
            coeffs: vec![T::zero(); degree + 1],
        }
    }

    /// The monomial `x^(k-i) y^i` scaled by `c`.
    pub fn monomial(degree: usize, i: usize, c: T) -> Self {
        let mut p = Self::zero(degree);
        p.coeffs[i] = c;
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.degree(),
                found: other.degree(),
            });
        }
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-T::one()))
    }

    /// `x * self`.
    pub fn mul_x(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.push(T::zero());
        Self { coeffs }
    }

    /// `y * self`.
    pub fn mul_y(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(T::zero());
        coeffs.extend_from_slice(&self.coeffs);
        Self { coeffs }
    }

    /// Product of two homogeneous polynomials.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree() + other.degree());
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out.coeffs[i + j] = out.coeffs[i + j] + a * b;
            }
        }
        out
    }

    /// `p(x, -y)`.
    pub fn reflect_y(&self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| if i % 2 == 1 { -c } else { c })
                .collect(),
        }
    }

    /// `p(-x, y)`.
    pub fn reflect_x(&self) -> Self {
        let k = self.degree();
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| if (k - i) % 2 == 1 { -c } else { c })
                .collect(),
        }
    }

    /// `p(y, x)`.
    pub fn swap_args(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self { coeffs }
    }

    fn int(n: usize) -> T {
        let mut v = T::zero();
        for _ in 0..n {
            v = v + T::one();
        }
        v
    }

    /// Partial derivative in `x` (a constant differentiates to the zero constant).
    pub fn d_dx(&self) -> Self {
        let k = self.degree();
        if k == 0 {
            return Self::zero(0);
        }
        Self {
            coeffs: (0..k).map(|i| self.coeffs[i] * Self::int(k - i)).collect(),
        }
    }

    /// Partial derivative in `y`.
    pub fn d_dy(&self) -> Self {
        let k = self.degree();
        if k == 0 {
            return Self::zero(0);
        }
        Self {
            coeffs: (1..=k).map(|i| self.coeffs[i] * Self::int(i)).collect(),
        }
    }
}

impl<T: Real> ScalarHomoPoly<T> {
    /// Horner evaluation in `y/x` or `x/y`, whichever ratio has modulus <= 1.
    pub fn eval(&self, v: Vec2<T>) -> T {
        let k = self.degree();
        let (x, y) = (v.x, v.y);
        if x.abs() >= y.abs() {
            if x == T::zero() {
                return if k == 0 { self.coeffs[0] } else { T::zero() };
            }
            let t = y / x;
            let h = self
                .coeffs
                .iter()
                .rev()
                .fold(T::zero(), |acc, &c| acc * t + c);
            h * x.powi(k as i32)
        } else {
            let s = x / y;
            let h = self.coeffs.iter().fold(T::zero(), |acc, &c| acc * s + c);
            h * y.powi(k as i32)
        }
    }

    /// Value and first two angular derivatives of `t -> p(cos t, sin t)`.
    fn angular_jet(&self, t: T, dx: &Self, dy: &Self, dxx: &Self, dxy: &Self, dyy: &Self) -> (T, T, T) {
        let (s, c) = t.sin_cos();
        let v = Vec2::new(c, s);
        let (px, py) = (dx.eval(v), dy.eval(v));
        let d1 = -s * px + c * py;
        let d2 = -c * px - s * py + s * s * dxx.eval(v) - T::lit(2.0) * s * c * dxy.eval(v)
            + c * c * dyy.eval(v);
        (self.eval(v), d1, d2)
    }
}

/// Outcome of a definiteness scan on the Euclidean circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Definiteness<T> {
    /// True iff `min |Q|` on the circle exceeds `1e-10`.
    pub definite: bool,
    /// Point of the Euclidean unit circle attaining the minimum of `|Q|`
    /// (or a zero of `Q` when a sign change was found).
    pub witness: Vec2<T>,
    pub min_abs: T,
}

/// Decide whether `q` vanishes only at the origin.
///
/// `grid` angles of `[0, pi]` are scanned; a sign change is resolved to a
/// root by bisection, otherwise the smallest `|q|` is polished with three
/// Newton steps on the angular derivative. Odd degrees always change sign.
pub fn q_definite<T: Real>(q: &ScalarHomoPoly<T>, grid: usize) -> Definiteness<T> {
    let grid = grid.max(16);
    let step = T::PI() / T::from_usize_lossy(grid);
    let at = |j: usize| step * T::from_usize_lossy(j);
    let f = |t: T| q.eval(Vec2::from_angle(t));
    let values: Vec<T> = (0..=grid).map(|j| f(at(j))).collect();

    let root_between = |mut lo: T, mut hi: T| {
        let mut flo = f(lo);
        for _ in 0..200 {
            let mid = (lo + hi) / T::lit(2.0);
            let fm = f(mid);
            if fm == T::zero() {
                return mid;
            }
            if (fm < T::zero()) == (flo < T::zero()) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        (lo + hi) / T::lit(2.0)
    };

    for j in 0..grid {
        let (a, b) = (values[j], values[j + 1]);
        if a == T::zero() || (a < T::zero()) != (b < T::zero()) {
            let t = if a == T::zero() { at(j) } else { root_between(at(j), at(j + 1)) };
            let w = Vec2::from_angle(t);
            return Definiteness {
                definite: false,
                witness: w,
                min_abs: q.eval(w).abs(),
            };
        }
    }

    // constant sign: polish the smallest |q|
    let (mut jmin, mut vmin) = (0, values[0].abs());
    for (j, v) in values.iter().enumerate().take(grid) {
        if v.abs() < vmin {
            vmin = v.abs();
            jmin = j;
        }
    }
    let (dx, dy) = (q.d_dx(), q.d_dy());
    let (dxx, dxy, dyy) = (dx.d_dx(), dx.d_dy(), dy.d_dy());
    let mut t = at(jmin);
    for _ in 0..3 {
        let (_, d1, d2) = q.angular_jet(t, &dx, &dy, &dxx, &dxy, &dyy);
        if d2 == T::zero() {
            break;
        }
        let cand = t - d1 / d2;
        if (cand - t).abs() <= step && f(cand).abs() < vmin {
            t = cand;
            vmin = f(cand).abs();
        }
    }
    Definiteness {
        definite: q.degree() % 2 == 0 && vmin > T::lit(1e-10),
        witness: Vec2::from_angle(t),
        min_abs: vmin,
    }
}

/// A polynomial map `P = (P1, P2)` of the plane, homogeneous of degree `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "RawVectorPoly<T>",
    into = "RawVectorPoly<T>",
    bound(serialize = "T: Clone + Serialize", deserialize = "T: Deserialize<'de>")
)]
pub struct VectorHomoPoly<T> {
    p1: ScalarHomoPoly<T>,
    p2: ScalarHomoPoly<T>,
}

#[derive(Serialize, Deserialize)]
struct RawVectorPoly<T> {
    degree: usize,
    p1: Vec<T>,
    p2: Vec<T>,
}

impl<T> TryFrom<RawVectorPoly<T>> for VectorHomoPoly<T> {
    type Error = Error;
    fn try_from(raw: RawVectorPoly<T>) -> Result<Self> {
        for c in [&raw.p1, &raw.p2] {
            if c.len() != raw.degree + 1 {
                return Err(Error::CoefficientLength {
                    len: c.len(),
                    expected: raw.degree + 1,
                });
            }
        }
        Self::new(ScalarHomoPoly::new(raw.p1)?, ScalarHomoPoly::new(raw.p2)?)
    }
}

impl<T: Clone> From<VectorHomoPoly<T>> for RawVectorPoly<T> {
    fn from(p: VectorHomoPoly<T>) -> Self {
        Self {
            degree: p.degree(),
            p1: p.p1.coeffs,
            p2: p.p2.coeffs,
        }
    }
}

impl<T> VectorHomoPoly<T> {
    pub fn new(p1: ScalarHomoPoly<T>, p2: ScalarHomoPoly<T>) -> Result<Self> {
        if p1.degree() != p2.degree() {
            return Err(Error::DegreeMismatch {
                expected: p1.degree(),
                found: p2.degree(),
            });
        }
        if p1.degree() == 0 {
            return Err(invalid("degree", "polynomial maps need degree >= 1"));
        }
        Ok(Self { p1, p2 })
    }

    pub fn from_coeffs(p1: Vec<T>, p2: Vec<T>) -> Result<Self> {
        Self::new(ScalarHomoPoly::new(p1)?, ScalarHomoPoly::new(p2)?)
    }

    pub fn degree(&self) -> usize {
        self.p1.degree()
    }

    pub fn p1(&self) -> &ScalarHomoPoly<T> {
        &self.p1
    }

    pub fn p2(&self) -> &ScalarHomoPoly<T> {
        &self.p2
    }
}

impl<T: Num + Copy + Neg<Output = T>> VectorHomoPoly<T> {
    pub fn zero(degree: usize) -> Self {
        Self {
            p1: ScalarHomoPoly::zero(degree),
            p2: ScalarHomoPoly::zero(degree),
        }
    }

    /// The identity map `(x, y)`.
    pub fn identity() -> Self {
        Self {
            p1: ScalarHomoPoly::monomial(1, 0, T::one()),
            p2: ScalarHomoPoly::monomial(1, 1, T::one()),
        }
    }

    /// Coefficients of `P1` followed by those of `P2`.
    pub fn coeff_vec(&self) -> Vec<T> {
        self.p1.coeffs.iter().chain(&self.p2.coeffs).copied().collect()
    }

    /// Inverse of [`coeff_vec`](Self::coeff_vec).
    pub fn from_coeff_vec(degree: usize, c: &[T]) -> Result<Self> {
        if c.len() != 2 * (degree + 1) {
            return Err(Error::CoefficientLength {
                len: c.len(),
                expected: 2 * (degree + 1),
            });
        }
        let (a, b) = c.split_at(degree + 1);
        Self::from_coeffs(a.to_vec(), b.to_vec())
    }

    pub fn is_zero(&self) -> bool {
        self.p1.is_zero() && self.p2.is_zero()
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            p1: self.p1.scale(s),
            p2: self.p2.scale(s),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            p1: self.p1.add(&other.p1)?,
            p2: self.p2.add(&other.p2)?,
        })
    }

    /// `Q(x, y) = y P1(x, y) - x P2(x, y)`, exact in the coefficient ring.
    pub fn q_poly(&self) -> ScalarHomoPoly<T> {
        self.p1
            .mul_y()
            .sub(&self.p2.mul_x())
            .expect("both products have degree k + 1")
    }

    /// `U^-1 P U` for the reflection `U(x, y) = (x, -y)`.
    pub fn conj_reflect_y(&self) -> Self {
        Self {
            p1: self.p1.reflect_y(),
            p2: self.p2.reflect_y().scale(-T::one()),
        }
    }

    /// `U^-1 P U` for the reflection `U(x, y) = (-x, y)`.
    pub fn conj_reflect_x(&self) -> Self {
        Self {
            p1: self.p1.reflect_x().scale(-T::one()),
            p2: self.p2.reflect_x(),
        }
    }

    /// `V^-1 P V` for the swap `V(x, y) = (y, x)`.
    pub fn conj_swap(&self) -> Self {
        Self {
            p1: self.p2.swap_args(),
            p2: self.p1.swap_args(),
        }
    }
}

impl<T: Real> VectorHomoPoly<T> {
    pub fn eval(&self, v: Vec2<T>) -> Vec2<T> {
        Vec2::new(self.p1.eval(v), self.p2.eval(v))
    }

    /// Euclidean length of the coefficient vector.
    pub fn coeff_norm(&self) -> T {
        self.coeff_vec().iter().map(|&c| c * c).sum::<T>().sqrt()
    }

    /// Copy rescaled to unit coefficient length (zero stays zero).
    pub fn normalized(&self) -> Self {
        let n = self.coeff_norm();
        if n == T::zero() {
            self.clone()
        } else {
            self.scale(n.recip())
        }
    }

    /// `sup { ||P(x)|| : ||x|| <= 1 }` on the default 4096-angle grid.
    pub fn sup_norm(&self, norm: &NormSpec<T>, tol: T) -> T {
        self.sup_norm_grid(norm, 4096, tol)
    }

    /// `sup ||P(x)||` over the unit sphere: `grid` angles of a half turn
    /// (`||P(-x)|| = ||P(x)||`), then golden-section refinement to `tol`.
    pub fn sup_norm_grid(&self, norm: &NormSpec<T>, grid: usize, tol: T) -> T {
        if self.is_zero() {
            return T::zero();
        }
        periodic_max(
            |t| norm.eval(self.eval(norm.sphere_point(t))),
            T::zero(),
            T::PI(),
            grid.max(16),
            4,
            tol,
        )
        .value
    }
}

/// `(-y^(p-1), x^(p-1))` for an even integer `p`.
pub fn lp_zero_poly<T: Real>(p: T) -> Result<VectorHomoPoly<T>> {
    let r = p.round();
    if !(p.is_finite() && p == r && r >= T::lit(2.0)) {
        return Err(invalid("p", format!("{p} must be an even integer >= 2")));
    }
    let pi = r.to_usize().expect("checked positive integer");
    if pi % 2 != 0 {
        return Err(invalid("p", format!("{p} must be even")));
    }
    let k = pi - 1;
    VectorHomoPoly::new(
        ScalarHomoPoly::monomial(k, k, -T::one()),
        ScalarHomoPoly::monomial(k, 0, T::one()),
    )
}

/// Cubic map whose numerical radius vanishes for the asymmetric norm with
/// parameter `a`.
pub fn example8_poly<T: Real>(a: T) -> Result<VectorHomoPoly<T>> {
    if !(a.is_finite() && a > T::zero() && a < T::one()) {
        return Err(invalid("a", format!("{a} not in (0, 1)")));
    }
    let one = T::one();
    let r = a / (one + a);
    let mut p1 = ScalarHomoPoly::zero(3);
    p1.coeffs[1] = r.powf(a) * (one + T::lit(2.0) * a) / (one + a);
    p1.coeffs[3] = r.powf(one + T::lit(2.0) * a);
    VectorHomoPoly::new(p1, ScalarHomoPoly::monomial(3, 0, -one))
}

/// Degree `2m-1` map with zero numerical radius on the interpolated norm.
pub fn example9_poly<T: Real>(m: u32, theta: T) -> Result<VectorHomoPoly<T>> {
    if m < 3 {
        return Err(invalid("m", format!("{m} must be >= 3")));
    }
    interp_poly(m, theta)
}

// Same coefficient formulas, but also accepting m = 2 where they collapse to
// the Euclidean case.
pub(crate) fn interp_poly<T: Real>(m: u32, theta: T) -> Result<VectorHomoPoly<T>> {
    if !(theta.is_finite() && theta >= T::zero() && theta <= T::one()) {
        return Err(invalid("theta", format!("{theta} not in [0, 1]")));
    }
    if m < 2 {
        return Err(invalid("m", format!("{m} must be >= 2")));
    }
    let m = m as usize;
    let k = 2 * m - 1;
    let rest = T::one() - theta;
    let mut p1 = ScalarHomoPoly::zero(k);
    // theta y (x^(2m-2) + y^(2m-2)) + (1 - theta) y^(2m-3) (x^2 + y^2)
    p1.coeffs[1] = p1.coeffs[1] + theta;
    p1.coeffs[k] = p1.coeffs[k] + theta;
    p1.coeffs[2 * m - 3] = p1.coeffs[2 * m - 3] + rest;
    p1.coeffs[k] = p1.coeffs[k] + rest;
    // -theta x (x^(2m-2) + y^(2m-2)) - (1 - theta) x^(2m-3) (x^2 + y^2)
    let mut p2 = ScalarHomoPoly::zero(k);
    p2.coeffs[0] = p2.coeffs[0] - theta;
    p2.coeffs[2 * m - 2] = p2.coeffs[2 * m - 2] - theta;
    p2.coeffs[0] = p2.coeffs[0] - rest;
    p2.coeffs[2] = p2.coeffs[2] - rest;
    VectorHomoPoly::new(p1, p2)
}

/// A planar map acting on the first two coordinates of `R^d`, zero elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedPoly<T> {
    base: VectorHomoPoly<T>,
    dim: usize,
}

impl<T: Real> EmbeddedPoly<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn base(&self) -> &VectorHomoPoly<T> {
        &self.base
    }

    pub fn eval(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.dim, "point dimension");
        let v = self.base.eval(Vec2::new(x[0], x[1]));
        let mut out = vec![T::zero(); self.dim];
        out[0] = v.x;
        out[1] = v.y;
        out
    }
}

/// Embed a planar map into `R^d` (`d >= 2`).
pub fn embed_lp<T: Real>(p: &VectorHomoPoly<T>, d: usize) -> Result<EmbeddedPoly<T>> {
    if d < 2 {
        return Err(invalid("d", format!("{d} must be >= 2")));
    }
    Ok(EmbeddedPoly {
        base: p.clone(),
        dim: d,
    })
}
