//! The concrete norms of the plane handled by the crate.
//!
//! Every variant ships its closed-form gradient, which for a smooth norm is
//! the unique norming functional of the point. Polyhedral norms expose the
//! extreme points of their norming faces instead.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::scalar::{abs_pow, signed_pow, Real};
use crate::search::periodic_max;
use crate::vec2::Vec2;

/// `l1` or `linf` on the plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolyhedralKind {
    L1,
    Linf,
}

/// Raw description of a norm together with its parameters.
///
/// This is the serialized form (`{"variant": ..., "params": {...}}`). It is
/// only usable after validation through [`NormSpec::new`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", content = "params", rename_all = "snake_case")]
pub enum NormKind<T> {
    /// `l_p` on `R^d`; planar operations act on the first two coordinates.
    Lp {
        p: T,
        #[serde(default = "default_dim")]
        d: usize,
    },
    Polyhedral { kind: PolyhedralKind },
    /// `(x^4 + 2 beta x^2 y^2 + y^4)^(1/4)`.
    BetaQuartic { beta: T },
    /// The asymmetric absolute norm built from two weighted Euclidean forms.
    AsymA { a: T },
    /// `(x^2+y^2)^(theta/2) (x^(2m-2)+y^(2m-2))^((1-theta)/(2m-2))`.
    InterpSym { m: u32, theta: T },
    /// `||.||_{p1}^theta ||.||_{p0}^(1-theta)`.
    GeomMean { p0: T, p1: T, theta: T },
    /// `(x^2+eps y^2)^(theta/2) (eps x^2+y^2)^((1-theta)/2)`; not a norm in general.
    EpsGeomMean { theta: T, eps: T },
}

fn default_dim() -> usize {
    2
}

/// A validated norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "NormKind<T>",
    into = "NormKind<T>",
    bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>")
)]
pub struct NormSpec<T> {
    kind: NormKind<T>,
    // Variant constants fixed at construction (weights, exponents).
    c0: T,
    c1: T,
    p_int: Option<i32>,
}

impl<T: Real> TryFrom<NormKind<T>> for NormSpec<T> {
    type Error = Error;
    fn try_from(kind: NormKind<T>) -> Result<Self> {
        Self::new(kind)
    }
}

impl<T: Real> From<NormSpec<T>> for NormKind<T> {
    fn from(n: NormSpec<T>) -> Self {
        n.kind
    }
}

/// A point of the unit sphere together with a norming functional.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualPair<T> {
    pub point: Vec2<T>,
    pub functional: Vec2<T>,
    pub pairing: T,
}

impl<T: Real> DualPair<T> {
    pub fn new(point: Vec2<T>, functional: Vec2<T>) -> Self {
        Self {
            point,
            functional,
            pairing: functional.dot(point),
        }
    }
}

/// Outcome of [`NormSpec::classify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub absolute: bool,
    pub symmetric: bool,
    pub normalized: bool,
}

fn check_range<T: Real>(name: &'static str, v: T, lo: T, hi: T) -> Result<()> {
    if !(v.is_finite() && v >= lo && v <= hi) {
        return Err(invalid(name, format!("{v} not in [{lo}, {hi}]")));
    }
    Ok(())
}

fn integer_exponent<T: Real>(p: T) -> Option<i32> {
    let r = p.round();
    if (p - r).abs() == T::zero() && r <= T::lit(64.0) {
        r.to_i32()
    } else {
        None
    }
}

impl<T: Real> NormSpec<T> {
    pub fn new(kind: NormKind<T>) -> Result<Self> {
        let one = T::one();
        let mut spec = Self {
            kind,
            c0: T::zero(),
            c1: T::zero(),
            p_int: None,
        };
        match kind {
            NormKind::Lp { p, d } => {
                if !(p.is_finite() && p > one) {
                    return Err(invalid("p", format!("{p} must be > 1")));
                }
                if d < 2 {
                    return Err(invalid("d", format!("{d} must be >= 2")));
                }
                spec.p_int = integer_exponent(p);
            }
            NormKind::Polyhedral { .. } => {}
            NormKind::BetaQuartic { beta } => {
                // Below -1 the quartic form is negative on part of the circle.
                if !(beta.is_finite() && beta >= -one) {
                    return Err(invalid("beta", format!("{beta} must be finite and >= -1")));
                }
            }
            NormKind::AsymA { a } => {
                if !(a.is_finite() && a > T::zero() && a < one) {
                    return Err(invalid("a", format!("{a} not in (0, 1)")));
                }
                let r = a / (one + a);
                spec.c0 = r.powf(a);
                spec.c1 = r.powf(one + a);
            }
            NormKind::InterpSym { m, theta } => {
                if m < 3 {
                    return Err(invalid("m", format!("{m} must be >= 3")));
                }
                check_range("theta", theta, T::zero(), one)?;
            }
            NormKind::GeomMean { p0, p1, theta } => {
                for (name, p) in [("p0", p0), ("p1", p1)] {
                    if !(p.is_finite() && p > one) {
                        return Err(invalid(name, format!("{p} must be > 1")));
                    }
                }
                check_range("theta", theta, T::zero(), one)?;
            }
            NormKind::EpsGeomMean { theta, eps } => {
                if !(theta.is_finite() && theta > T::zero() && theta < one) {
                    return Err(invalid("theta", format!("{theta} not in (0, 1)")));
                }
                if !(eps.is_finite() && eps > T::zero()) {
                    return Err(invalid("eps", format!("{eps} must be > 0")));
                }
            }
        }
        Ok(spec)
    }

    pub fn lp(p: T) -> Result<Self> {
        Self::new(NormKind::Lp { p, d: 2 })
    }

    pub fn lp_dim(p: T, d: usize) -> Result<Self> {
        Self::new(NormKind::Lp { p, d })
    }

    pub fn l1() -> Self {
        Self::new(NormKind::Polyhedral {
            kind: PolyhedralKind::L1,
        })
        .expect("l1 has no parameters")
    }

    pub fn linf() -> Self {
        Self::new(NormKind::Polyhedral {
            kind: PolyhedralKind::Linf,
        })
        .expect("linf has no parameters")
    }

    pub fn beta_quartic(beta: T) -> Result<Self> {
        Self::new(NormKind::BetaQuartic { beta })
    }

    pub fn asym_a(a: T) -> Result<Self> {
        Self::new(NormKind::AsymA { a })
    }

    pub fn interp_sym(m: u32, theta: T) -> Result<Self> {
        Self::new(NormKind::InterpSym { m, theta })
    }

    pub fn geom_mean(p0: T, p1: T, theta: T) -> Result<Self> {
        Self::new(NormKind::GeomMean { p0, p1, theta })
    }

    pub fn eps_geom_mean(theta: T, eps: T) -> Result<Self> {
        Self::new(NormKind::EpsGeomMean { theta, eps })
    }

    pub fn kind(&self) -> &NormKind<T> {
        &self.kind
    }

    /// Short stable name of the variant.
    pub fn variant_name(&self) -> &'static str {
        match self.kind {
            NormKind::Lp { .. } => "lp",
            NormKind::Polyhedral {
                kind: PolyhedralKind::L1,
            } => "l1",
            NormKind::Polyhedral {
                kind: PolyhedralKind::Linf,
            } => "linf",
            NormKind::BetaQuartic { .. } => "beta_quartic",
            NormKind::AsymA { .. } => "asym_a",
            NormKind::InterpSym { .. } => "interp_sym",
            NormKind::GeomMean { .. } => "geom_mean",
            NormKind::EpsGeomMean { .. } => "eps_geom_mean",
        }
    }

    /// Human readable label including parameters, e.g. `lp(p=4)`.
    pub fn label(&self) -> String {
        match self.kind {
            NormKind::Lp { p, d } if d == 2 => format!("lp(p={p})"),
            NormKind::Lp { p, d } => format!("lp(p={p},d={d})"),
            NormKind::Polyhedral { .. } => self.variant_name().to_string(),
            NormKind::BetaQuartic { beta } => format!("beta_quartic(beta={beta})"),
            NormKind::AsymA { a } => format!("asym_a(a={a})"),
            NormKind::InterpSym { m, theta } => format!("interp_sym(m={m},theta={theta})"),
            NormKind::GeomMean { p0, p1, theta } => {
                format!("geom_mean(p0={p0},p1={p1},theta={theta})")
            }
            NormKind::EpsGeomMean { theta, eps } => {
                format!("eps_geom_mean(theta={theta},eps={eps})")
            }
        }
    }

    /// True when the formula is known to satisfy the triangle inequality.
    pub fn is_norm(&self) -> bool {
        match self.kind {
            NormKind::BetaQuartic { beta } => beta >= T::zero() && beta <= T::lit(3.0),
            NormKind::EpsGeomMean { .. } => false,
            NormKind::GeomMean { p0, p1, theta } => {
                // Proven for exponents >= 2; the endpoints are plain lp norms.
                let two = T::lit(2.0);
                (p0 >= two && p1 >= two) || p0 == p1 || theta == T::zero() || theta == T::one()
            }
            _ => true,
        }
    }

    pub fn is_polyhedral(&self) -> bool {
        matches!(self.kind, NormKind::Polyhedral { .. })
    }

    /// Vertices of the unit sphere of a polyhedral norm (empty otherwise).
    pub fn vertices(&self) -> Vec<Vec2<T>> {
        let (o, z) = (T::one(), T::zero());
        match self.kind {
            NormKind::Polyhedral {
                kind: PolyhedralKind::L1,
            } => vec![
                Vec2::new(o, z),
                Vec2::new(z, o),
                Vec2::new(-o, z),
                Vec2::new(z, -o),
            ],
            NormKind::Polyhedral {
                kind: PolyhedralKind::Linf,
            } => vec![
                Vec2::new(o, o),
                Vec2::new(-o, o),
                Vec2::new(-o, -o),
                Vec2::new(o, -o),
            ],
            _ => Vec::new(),
        }
    }

    /// Ambient dimension (only `Lp` may exceed two).
    pub fn dim(&self) -> usize {
        match self.kind {
            NormKind::Lp { d, .. } => d,
            _ => 2,
        }
    }

    #[inline]
    fn lp_unit(&self, x: T, y: T, p: T) -> T {
        // x, y already scaled to max(|x|, |y|) = 1
        match self.p_int {
            Some(k) if k > 0 => (x.abs().powi(k) + y.abs().powi(k)).powf(p.recip()),
            _ => (abs_pow(x, p) + abs_pow(y, p)).powf(p.recip()),
        }
    }

    /// Norm value at a point whose larger coordinate has modulus one.
    fn eval_unit(&self, x: T, y: T) -> T {
        let one = T::one();
        let two = T::lit(2.0);
        match self.kind {
            NormKind::Lp { p, .. } => self.lp_unit(x, y, p),
            NormKind::Polyhedral {
                kind: PolyhedralKind::L1,
            } => x.abs() + y.abs(),
            NormKind::Polyhedral {
                kind: PolyhedralKind::Linf,
            } => x.abs().max(y.abs()),
            NormKind::BetaQuartic { beta } => {
                let (x2, y2) = (x * x, y * y);
                (x2 * x2 + two * beta * x2 * y2 + y2 * y2).powf(T::lit(0.25))
            }
            NormKind::AsymA { a } => {
                let (x2, y2) = (x * x, y * y);
                let u = x2 + self.c1 * y2;
                let w = x2 + self.c0 * y2;
                u.powf(-a / two) * w.powf((one + a) / two)
            }
            NormKind::InterpSym { m, theta } => {
                let e = (2 * m - 2) as i32;
                let s2 = x * x + y * y;
                let sm = x.powi(e) + y.powi(e);
                s2.powf(theta / two) * sm.powf((one - theta) / T::from_usize_lossy(e as usize))
            }
            NormKind::GeomMean { p0, p1, theta } => {
                let n0 = (abs_pow(x, p0) + abs_pow(y, p0)).powf(p0.recip());
                let n1 = (abs_pow(x, p1) + abs_pow(y, p1)).powf(p1.recip());
                n1.powf(theta) * n0.powf(one - theta)
            }
            NormKind::EpsGeomMean { theta, eps } => {
                let (x2, y2) = (x * x, y * y);
                (x2 + eps * y2).powf(theta / two) * (eps * x2 + y2).powf((one - theta) / two)
            }
        }
    }

    /// Value of the norm at `v`; zero exactly at the origin.
    pub fn eval(&self, v: Vec2<T>) -> T {
        let m = v.x.abs().max(v.y.abs());
        if m == T::zero() {
            return T::zero();
        }
        m * self.eval_unit(v.x / m, v.y / m)
    }

    /// A strictly increasing function of the norm that avoids fractional
    /// powers where possible (`||v||^p` for integer `Lp`, `||v||^4` for the
    /// quartic family). [`Self::from_monotone`] maps it back.
    pub(crate) fn eval_monotone(&self, v: Vec2<T>) -> T {
        match (self.kind, self.p_int) {
            (NormKind::Lp { .. }, Some(k)) if k > 0 => v.x.abs().powi(k) + v.y.abs().powi(k),
            (NormKind::BetaQuartic { beta }, _) => {
                let (x2, y2) = (v.x * v.x, v.y * v.y);
                x2 * x2 + T::lit(2.0) * beta * x2 * y2 + y2 * y2
            }
            _ => self.eval(v),
        }
    }

    pub(crate) fn from_monotone(&self, s: T) -> T {
        match (self.kind, self.p_int) {
            (NormKind::Lp { p, .. }, Some(k)) if k > 0 => s.powf(p.recip()),
            (NormKind::BetaQuartic { .. }, _) => s.sqrt().sqrt(),
            _ => s,
        }
    }

    /// Gradient at a point whose larger coordinate has modulus one.
    fn gradient_unit(&self, x: T, y: T) -> Result<Vec2<T>> {
        let one = T::one();
        let two = T::lit(2.0);
        let g = match self.kind {
            NormKind::Lp { p, .. } => {
                let n = self.lp_unit(x, y, p);
                let s = n.powf(p - one);
                Vec2::new(signed_pow(x, p - one) / s, signed_pow(y, p - one) / s)
            }
            NormKind::Polyhedral { kind } => {
                let smooth = match kind {
                    PolyhedralKind::L1 => x != T::zero() && y != T::zero(),
                    PolyhedralKind::Linf => x.abs() != y.abs(),
                };
                if !smooth {
                    return Err(Error::NonSmooth {
                        x: x.as_f64(),
                        y: y.as_f64(),
                    });
                }
                match kind {
                    PolyhedralKind::L1 => Vec2::new(x.signum(), y.signum()),
                    PolyhedralKind::Linf if x.abs() > y.abs() => Vec2::new(x.signum(), T::zero()),
                    PolyhedralKind::Linf => Vec2::new(T::zero(), y.signum()),
                }
            }
            NormKind::BetaQuartic { beta } => {
                let n = self.eval_unit(x, y);
                let n3 = n * n * n;
                Vec2::new(
                    (x * x * x + beta * x * y * y) / n3,
                    (y * y * y + beta * x * x * y) / n3,
                )
            }
            NormKind::AsymA { a } => {
                let (x2, y2) = (x * x, y * y);
                let u = x2 + self.c1 * y2;
                let w = x2 + self.c0 * y2;
                let big_a = u.powf(-a / two - one) * w.powf((one + a) / two - one);
                let coef_x2y = self.c0 * (one + two * a) / (one + a);
                let coef_y3 = self.c0 * self.c1;
                Vec2::new(
                    x * x2 * big_a,
                    (coef_x2y * x2 * y + coef_y3 * y2 * y) * big_a,
                )
            }
            NormKind::InterpSym { m, theta } => {
                let e = (2 * m - 2) as i32;
                let s2 = x * x + y * y;
                let sm = x.powi(e) + y.powi(e);
                let b = s2.powf(theta / two - one)
                    * sm.powf((one - theta) / T::from_usize_lossy(e as usize) - one);
                let gx = theta * x * sm + (one - theta) * x.powi(e - 1) * s2;
                let gy = theta * y * sm + (one - theta) * y.powi(e - 1) * s2;
                Vec2::new(gx * b, gy * b)
            }
            NormKind::GeomMean { p0, p1, theta } => {
                let lp = |p: T| {
                    let n = (abs_pow(x, p) + abs_pow(y, p)).powf(p.recip());
                    let s = n.powf(p);
                    // gradient of log ||.||_p
                    (
                        n,
                        Vec2::new(signed_pow(x, p - one) / s, signed_pow(y, p - one) / s),
                    )
                };
                let (n0, g0) = lp(p0);
                let (n1, g1) = lp(p1);
                let f = n1.powf(theta) * n0.powf(one - theta);
                (g1 * theta + g0 * (one - theta)) * f
            }
            NormKind::EpsGeomMean { theta, eps } => {
                let (x2, y2) = (x * x, y * y);
                let u = x2 + eps * y2;
                let w = eps * x2 + y2;
                let n = u.powf(theta / two) * w.powf((one - theta) / two);
                Vec2::new(
                    n * (theta * x / u + (one - theta) * eps * x / w),
                    n * (theta * eps * y / u + (one - theta) * y / w),
                )
            }
        };
        Ok(g)
    }

    /// Gradient of the norm at `v`, i.e. the unique norming functional of
    /// `v / ||v||` when the norm is smooth there.
    pub fn gradient(&self, v: Vec2<T>) -> Result<Vec2<T>> {
        let m = v.x.abs().max(v.y.abs());
        if m == T::zero() {
            return Err(Error::ZeroVector);
        }
        self.gradient_unit(v.x / m, v.y / m)
    }

    /// Extreme points of the set of norming functionals of `v / ||v||`.
    ///
    /// Smooth norms give a single functional. For `l1`/`linf`, points within a
    /// relative `1e-12` of a vertex get both extreme functionals of the face.
    pub fn norming_set(&self, v: Vec2<T>) -> Result<Vec<Vec2<T>>> {
        let m = v.x.abs().max(v.y.abs());
        if m == T::zero() {
            return Err(Error::ZeroVector);
        }
        let (x, y) = (v.x / m, v.y / m);
        let eps = T::lit(1e-12);
        let sgn = |t: T| if t < T::zero() { -T::one() } else { T::one() };
        let one = T::one();
        let zero = T::zero();
        match self.kind {
            NormKind::Polyhedral {
                kind: PolyhedralKind::Linf,
            } => {
                let gap = x.abs() - y.abs();
                if gap.abs() <= eps {
                    Ok(vec![Vec2::new(sgn(x), zero), Vec2::new(zero, sgn(y))])
                } else if gap > zero {
                    Ok(vec![Vec2::new(sgn(x), zero)])
                } else {
                    Ok(vec![Vec2::new(zero, sgn(y))])
                }
            }
            NormKind::Polyhedral {
                kind: PolyhedralKind::L1,
            } => {
                if y.abs() <= eps {
                    Ok(vec![Vec2::new(sgn(x), one), Vec2::new(sgn(x), -one)])
                } else if x.abs() <= eps {
                    Ok(vec![Vec2::new(one, sgn(y)), Vec2::new(-one, sgn(y))])
                } else {
                    Ok(vec![Vec2::new(sgn(x), sgn(y))])
                }
            }
            _ => Ok(vec![self.gradient_unit(x, y)?]),
        }
    }

    /// All norming pairs at the sphere point in direction `v`.
    pub fn dual_pairs(&self, v: Vec2<T>) -> Result<Vec<DualPair<T>>> {
        let n = self.eval(v);
        if n == T::zero() {
            return Err(Error::ZeroVector);
        }
        let u = v.scale(n.recip());
        Ok(self
            .norming_set(v)?
            .into_iter()
            .map(|f| DualPair::new(u, f))
            .collect())
    }

    /// `(cos t, sin t) / ||(cos t, sin t)||`.
    pub fn sphere_point(&self, angle: T) -> Vec2<T> {
        let e = Vec2::from_angle(angle);
        e.scale(self.eval(e).recip())
    }

    /// Dual norm `sup { f.x : ||x|| <= 1 }`.
    ///
    /// Polyhedral norms use their exact dual; every other variant scans 2048
    /// sphere angles and refines the best cells by golden-section search.
    pub fn dual_eval(&self, functional: Vec2<T>) -> T {
        if functional.is_zero() {
            return T::zero();
        }
        match self.kind {
            NormKind::Polyhedral {
                kind: PolyhedralKind::L1,
            } => functional.x.abs().max(functional.y.abs()),
            NormKind::Polyhedral {
                kind: PolyhedralKind::Linf,
            } => functional.x.abs() + functional.y.abs(),
            _ => {
                periodic_max(
                    |t| functional.dot(self.sphere_point(t)),
                    T::zero(),
                    T::TAU(),
                    2048,
                    4,
                    T::lit(1e-13),
                )
                .value
            }
        }
    }

    /// Closed-form dual norm where one exists (`lp` and polyhedral).
    pub fn dual_closed_form(&self, f: Vec2<T>) -> Option<T> {
        match self.kind {
            NormKind::Lp { p, .. } => {
                let q = p / (p - T::one());
                Some((abs_pow(f.x, q) + abs_pow(f.y, q)).powf(q.recip()))
            }
            NormKind::Polyhedral { .. } => Some(self.dual_eval(f)),
            _ => None,
        }
    }

    /// Test the absolute / symmetric / normalized identities on `samples`
    /// points of the Euclidean circle, each to a relative `1e-12`.
    pub fn classify(&self, samples: usize) -> Result<Classification> {
        if samples < 100 {
            return Err(invalid("samples", format!("{samples} must be >= 100")));
        }
        let tol = T::lit(1e-12);
        let close = |a: T, b: T| (a - b).abs() <= tol * a.abs().max(b.abs()).max(T::one());
        let step = T::TAU() / T::from_usize_lossy(samples);
        let mut absolute = true;
        let mut symmetric = true;
        for j in 0..samples {
            // offset keeps the samples off the axes and diagonals
            let v = Vec2::from_angle(step * (T::from_usize_lossy(j) + T::lit(0.37)));
            let n = self.eval(v);
            absolute &= close(n, self.eval(Vec2::new(v.x, -v.y)))
                && close(n, self.eval(Vec2::new(-v.x, v.y)));
            symmetric &= close(n, self.eval(v.swap()));
        }
        let normalized = close(self.eval(Vec2::new(T::one(), T::zero())), T::one())
            && close(self.eval(Vec2::new(T::zero(), T::one())), T::one());
        Ok(Classification {
            absolute,
            symmetric,
            normalized,
        })
    }

    /// `l_p` norm of a `d`-dimensional point (only for the `Lp` variant, or
    /// any variant when `v.len() == 2`).
    pub fn eval_nd(&self, v: &[T]) -> Result<T> {
        match self.kind {
            NormKind::Lp { p, .. } => {
                let m = v.iter().fold(T::zero(), |acc, t| acc.max(t.abs()));
                if m == T::zero() {
                    return Ok(T::zero());
                }
                let s: T = v.iter().map(|&t| abs_pow(t / m, p)).sum();
                Ok(m * s.powf(p.recip()))
            }
            _ if v.len() == 2 => Ok(self.eval(Vec2::new(v[0], v[1]))),
            _ => Err(invalid("v", "only lp norms act on more than two coordinates")),
        }
    }

    /// Norming functional `x_i |x_i|^(p-2) / ||x||^(p-1)` of an `l_p^d` point.
    pub fn gradient_nd(&self, v: &[T]) -> Result<Vec<T>> {
        match self.kind {
            NormKind::Lp { p, .. } => {
                let n = self.eval_nd(v)?;
                if n == T::zero() {
                    return Err(Error::ZeroVector);
                }
                Ok(v.iter()
                    .map(|&t| signed_pow(t / n, p - T::one()))
                    .collect())
            }
            _ if v.len() == 2 => {
                let g = self.gradient(Vec2::new(v[0], v[1]))?;
                Ok(vec![g.x, g.y])
            }
            _ => Err(invalid("v", "only lp norms act on more than two coordinates")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(x: f64, y: f64) -> Vec2<f64> {
        Vec2::new(x, y)
    }

    fn all_smooth() -> Vec<NormSpec<f64>> {
        vec![
            NormSpec::lp(1.5).unwrap(),
            NormSpec::lp(3.0).unwrap(),
            NormSpec::lp(4.0).unwrap(),
            NormSpec::beta_quartic(0.0).unwrap(),
            NormSpec::beta_quartic(2.0).unwrap(),
            NormSpec::asym_a(0.3).unwrap(),
            NormSpec::asym_a(0.7).unwrap(),
            NormSpec::interp_sym(3, 0.4).unwrap(),
            NormSpec::interp_sym(4, 1.0).unwrap(),
            NormSpec::geom_mean(2.0, 6.0, 0.3).unwrap(),
            NormSpec::eps_geom_mean(0.5, 0.2).unwrap(),
        ]
    }

    #[test]
    fn eval_examples() {
        let b1 = NormSpec::beta_quartic(1.0).unwrap();
        assert!((b1.eval(v(1.0, 1.0)) - 2f64.sqrt()).abs() < 1e-15);
        let b0 = NormSpec::beta_quartic(0.0).unwrap();
        assert!((b0.eval(v(1.0, 1.0)) - 2f64.powf(0.25)).abs() < 1e-15);
        for a in [0.1, 0.3, 0.5, 0.9] {
            let n = NormSpec::asym_a(a).unwrap();
            assert!((n.eval(v(0.0, 1.0)) - 1.0).abs() < 1e-14, "a={a}");
            assert!((n.eval(v(1.0, 0.0)) - 1.0).abs() < 1e-15);
        }
        let e = NormSpec::eps_geom_mean(0.3, 0.01).unwrap();
        assert!((e.eval(v(1.0, 0.0)) - 0.01f64.powf(0.35)).abs() < 1e-15);
        assert!((e.eval(v(0.0, 1.0)) - 0.01f64.powf(0.15)).abs() < 1e-15);
    }

    #[test]
    fn zero_vector_is_zero_everywhere() {
        for n in all_smooth().into_iter().chain([NormSpec::l1(), NormSpec::linf()]) {
            assert_eq!(n.eval(Vec2::zero()), 0.0);
            assert_eq!(n.gradient(Vec2::zero()), Err(Error::ZeroVector));
            assert_eq!(n.norming_set(Vec2::zero()), Err(Error::ZeroVector));
        }
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(NormSpec::lp(1.0).is_err());
        assert!(NormSpec::lp_dim(3.0, 1).is_err());
        assert!(NormSpec::asym_a(0.0).is_err());
        assert!(NormSpec::asym_a(1.0).is_err());
        assert!(NormSpec::interp_sym(2, 0.5).is_err());
        assert!(NormSpec::interp_sym(3, 1.5).is_err());
        assert!(NormSpec::geom_mean(2.0, 3.0, -0.1).is_err());
        assert!(NormSpec::eps_geom_mean(0.0, 0.5).is_err());
        assert!(NormSpec::eps_geom_mean(0.5, 0.0).is_err());
        assert!(NormSpec::beta_quartic(-1.5).is_err());
        assert!(NormSpec::beta_quartic(f64::NAN).is_err());
    }

    #[test]
    fn validity_flags() {
        assert!(NormSpec::beta_quartic(3.0).unwrap().is_norm());
        assert!(!NormSpec::beta_quartic(3.5).unwrap().is_norm());
        assert!(!NormSpec::beta_quartic(-0.5).unwrap().is_norm());
        assert!(!NormSpec::eps_geom_mean(0.5, 0.01).unwrap().is_norm());
        assert!(NormSpec::asym_a(0.3).unwrap().is_norm());
    }

    #[test]
    fn lp_gradient_examples() {
        let n = NormSpec::lp(4.0).unwrap();
        assert_eq!(n.gradient(v(1.0, 0.0)).unwrap(), v(1.0, 0.0));
        for k in 0..50 {
            let u = n.sphere_point(k as f64 * 0.13);
            let g = n.gradient(u).unwrap();
            assert!((g.x - u.x.powi(3)).abs() < 1e-14);
            assert!((g.y - u.y.powi(3)).abs() < 1e-14);
        }
    }

    #[test]
    fn asym_gradient_has_x_cubed_factor() {
        let a = 0.3f64;
        let n = NormSpec::asym_a(a).unwrap();
        let r = a / (1.0 + a);
        let (c0, c1) = (r.powf(a), r.powf(1.0 + a));
        for k in 0..40 {
            let u = n.sphere_point(0.1 + k as f64 * 0.157);
            let big_a = (u.x * u.x + c1 * u.y * u.y).powf(-a / 2.0 - 1.0)
                * (u.x * u.x + c0 * u.y * u.y).powf((1.0 + a) / 2.0 - 1.0);
            let g = n.gradient(u).unwrap();
            assert!((g.x - u.x.powi(3) * big_a).abs() < 1e-13);
            let p1 = c0 * (1.0 + 2.0 * a) / (1.0 + a) * u.x * u.x * u.y + r.powf(1.0 + 2.0 * a) * u.y.powi(3);
            assert!((g.y - p1 * big_a).abs() < 1e-13);
        }
    }

    #[test]
    fn gradient_matches_central_differences() {
        let h = 1e-6;
        for n in all_smooth() {
            for k in 0..64 {
                let p = Vec2::from_angle(0.05 + k as f64 * std::f64::consts::TAU / 64.0).scale(1.7);
                let g = n.gradient(p).unwrap();
                let fx = (n.eval(p + v(h, 0.0)) - n.eval(p - v(h, 0.0))) / (2.0 * h);
                let fy = (n.eval(p + v(0.0, h)) - n.eval(p - v(0.0, h))) / (2.0 * h);
                let scale = g.euclid().max(1.0);
                assert!((fx - g.x).abs() < 1e-7 * scale, "{} at {p:?}: {fx} vs {}", n.label(), g.x);
                assert!((fy - g.y).abs() < 1e-7 * scale, "{} at {p:?}: {fy} vs {}", n.label(), g.y);
            }
        }
    }

    #[test]
    fn polyhedral_nonsmooth_points() {
        let linf = NormSpec::<f64>::linf();
        assert!(matches!(linf.gradient(v(1.0, 1.0)), Err(Error::NonSmooth { .. })));
        assert_eq!(linf.gradient(v(1.0, 0.5)).unwrap(), v(1.0, 0.0));
        let l1 = NormSpec::<f64>::l1();
        assert!(matches!(l1.gradient(v(0.0, 2.0)), Err(Error::NonSmooth { .. })));
    }

    /// Brute-force dual face: extreme points of `{f : f.u = 1, ||f||_* <= 1}`
    /// found by intersecting the pairing line with the dual unit ball's edges.
    fn dual_face_extremes(dual_vertices: &[(f64, f64)], u: (f64, f64)) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        let n = dual_vertices.len();
        for i in 0..n {
            let a = dual_vertices[i];
            let b = dual_vertices[(i + 1) % n];
            let pa = a.0 * u.0 + a.1 * u.1 - 1.0;
            let pb = b.0 * u.0 + b.1 * u.1 - 1.0;
            if pa.abs() < 1e-12 {
                out.push(a);
            } else if pa * pb < 0.0 {
                let t = pa / (pa - pb);
                out.push((a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1)));
            }
        }
        out.sort_by(|p, q| p.partial_cmp(q).unwrap());
        out.dedup();
        out
    }

    #[test]
    fn norming_set_examples_match_dual_face_enumeration() {
        let linf = NormSpec::<f64>::linf();
        let l1 = NormSpec::<f64>::l1();
        // dual of linf is l1 (diamond); dual of l1 is linf (square)
        let diamond = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)];
        let square = [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)];

        let mut got: Vec<_> = linf.norming_set(v(1.0, 0.5)).unwrap().iter().map(|f| (f.x, f.y)).collect();
        got.sort_by(|p, q| p.partial_cmp(q).unwrap());
        assert_eq!(got, vec![(1.0, 0.0)]);
        assert_eq!(got, dual_face_extremes(&diamond, (1.0, 0.5)));

        let mut got: Vec<_> = linf.norming_set(v(1.0, 1.0)).unwrap().iter().map(|f| (f.x, f.y)).collect();
        got.sort_by(|p, q| p.partial_cmp(q).unwrap());
        assert_eq!(got, dual_face_extremes(&diamond, (1.0, 1.0)));
        assert_eq!(got, vec![(0.0, 1.0), (1.0, 0.0)]);

        let mut got: Vec<_> = l1.norming_set(v(1.0, 0.0)).unwrap().iter().map(|f| (f.x, f.y)).collect();
        got.sort_by(|p, q| p.partial_cmp(q).unwrap());
        assert_eq!(got, dual_face_extremes(&square, (1.0, 0.0)));
        assert_eq!(got, vec![(1.0, -1.0), (1.0, 1.0)]);
    }

    #[test]
    fn sphere_point_examples() {
        let s = NormSpec::lp(4.0).unwrap().sphere_point(std::f64::consts::FRAC_PI_4);
        let c = 2f64.powf(-0.25);
        assert!((s.x - c).abs() < 1e-14 && (s.y - c).abs() < 1e-14);
        let s = NormSpec::beta_quartic(2.0).unwrap().sphere_point(std::f64::consts::FRAC_PI_4);
        // c^4 (1 + 2 beta + 1) = 1
        let c = 6f64.powf(-0.25);
        assert!((s.x - c).abs() < 1e-14 && (s.y - c).abs() < 1e-14);
        for n in all_smooth() {
            if n.classify(128).unwrap().normalized {
                let s = n.sphere_point(0.0);
                assert!((s.x - 1.0).abs() < 1e-15 && s.y == 0.0);
            }
            for k in 0..100 {
                let s = n.sphere_point(k as f64 * 0.0631);
                assert!((n.eval(s) - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn dual_eval_examples() {
        let l4 = NormSpec::lp(4.0).unwrap();
        assert!((l4.dual_eval(v(1.0, 0.0)) - 1.0).abs() < 1e-9);
        let expected = 2f64.powf(0.75);
        assert!((l4.dual_eval(v(1.0, 1.0)) - expected).abs() < 1e-9);
        assert!((l4.dual_closed_form(v(1.0, 1.0)).unwrap() - expected).abs() < 1e-14);
        assert!((NormSpec::lp(2.0).unwrap().dual_eval(v(3.0, 4.0)) - 5.0).abs() < 1e-9);
        for p in [1.5, 3.0, 6.0] {
            let n = NormSpec::lp(p).unwrap();
            for k in 0..20 {
                let f = Vec2::from_angle(k as f64 * 0.31).scale(1.3);
                assert!((n.dual_eval(f) - n.dual_closed_form(f).unwrap()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn dual_pairs_are_feasible() {
        for n in all_smooth() {
            if !n.is_norm() {
                continue;
            }
            for k in 0..32 {
                for pair in n.dual_pairs(Vec2::from_angle(k as f64 * 0.2)).unwrap() {
                    assert!((pair.pairing - 1.0).abs() < 1e-12, "{}", n.label());
                    assert!((n.dual_eval(pair.functional) - 1.0).abs() < 1e-8, "{}", n.label());
                }
            }
        }
        for n in [NormSpec::<f64>::l1(), NormSpec::linf()] {
            for p in [v(1.0, 1.0), v(1.0, 0.0), v(0.3, -0.9), v(0.0, -1.0)] {
                for pair in n.dual_pairs(p).unwrap() {
                    assert!((pair.pairing - 1.0).abs() < 1e-12);
                    assert!((n.dual_eval(pair.functional) - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn classify_examples() {
        let all = Classification { absolute: true, symmetric: true, normalized: true };
        assert_eq!(NormSpec::beta_quartic(2.0).unwrap().classify(1000).unwrap(), all);
        assert_eq!(NormSpec::lp(3.0).unwrap().classify(1000).unwrap(), all);
        assert_eq!(
            NormSpec::asym_a(0.3).unwrap().classify(1000).unwrap(),
            Classification { absolute: true, symmetric: false, normalized: true }
        );
        assert!(NormSpec::lp(3.0).unwrap().classify(99).is_err());
    }

    #[test]
    fn euler_identity() {
        for n in all_smooth() {
            for k in 0..50 {
                let p = Vec2::from_angle(k as f64 * 0.127).scale(0.5 + k as f64 * 0.1);
                let g = n.gradient(p).unwrap();
                assert!((g.dot(p) - n.eval(p)).abs() < 1e-9 * n.eval(p));
            }
        }
    }

    #[test]
    fn lp_nd_matches_planar() {
        let n = NormSpec::lp_dim(4.0, 3).unwrap();
        let x = [0.3, -0.7, 0.2];
        let s: f64 = x.iter().map(|t: &f64| t.powi(4)).sum::<f64>();
        assert!((n.eval_nd(&x).unwrap() - s.powf(0.25)).abs() < 1e-15);
        let g = n.gradient_nd(&x).unwrap();
        let dot: f64 = g.iter().zip(&x).map(|(a, b)| a * b).sum();
        assert!((dot - n.eval_nd(&x).unwrap()).abs() < 1e-14);
        assert!(NormSpec::<f64>::beta_quartic(1.0).unwrap().eval_nd(&x).is_err());
    }

    #[test]
    fn json_shape() {
        let n = NormSpec::beta_quartic(2.0).unwrap();
        let s = serde_json::to_string(&n).unwrap();
        assert_eq!(s, r#"{"variant":"beta_quartic","params":{"beta":2.0}}"#);
        let back: NormSpec<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, n);
        let bad = serde_json::from_str::<NormSpec<f64>>(r#"{"variant":"asym_a","params":{"a":1.5}}"#);
        assert!(bad.is_err());
        let lp: NormSpec<f64> = serde_json::from_str(r#"{"variant":"lp","params":{"p":4}}"#).unwrap();
        assert_eq!(lp.dim(), 2);
        let sq: NormSpec<f64> =
            serde_json::from_str(r#"{"variant":"polyhedral","params":{"kind":"linf"}}"#).unwrap();
        assert!(sq.is_polyhedral());
    }

    proptest! {
        #[test]
        fn homogeneity(t in -50.0f64..50.0, ang in 0.0f64..6.3, r in 0.01f64..10.0, idx in 0usize..13) {
            let norms: Vec<_> = all_smooth().into_iter().chain([NormSpec::l1(), NormSpec::linf()]).collect();
            let n = norms[idx];
            let p = Vec2::from_angle(ang).scale(r);
            let lhs = n.eval(p.scale(t));
            let rhs = t.abs() * n.eval(p);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300));
        }

        #[test]
        fn triangle_inequality_for_valid_norms(a1 in 0.0f64..6.3, a2 in 0.0f64..6.3, r1 in 0.1f64..3.0, r2 in 0.1f64..3.0, idx in 0usize..10) {
            let n = all_smooth()[idx];
            prop_assume!(n.is_norm());
            let u = Vec2::from_angle(a1).scale(r1);
            let w = Vec2::from_angle(a2).scale(r2);
            prop_assert!(n.eval(u + w) <= n.eval(u) + n.eval(w) + 1e-12);
        }
    }
}
