//! Symmetric multilinear forms generated by even-degree polynomials, and
//! the zero-radius "tangent" construction built from them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homopoly::{q_definite, ScalarHomoPoly, VectorHomoPoly};
use crate::linalg::{pairwise_sum, solve_full_pivot};
use crate::scalar::Real;
use crate::vec2::Vec2;

/// The symmetric `n`-linear form `A` with `A(x, ..., x) = R(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymMultiForm<T> {
    generator: ScalarHomoPoly<T>,
}

/// Polarize an even-degree polynomial.
pub fn polarize<T: Real>(r: &ScalarHomoPoly<T>) -> Result<SymMultiForm<T>> {
    if r.degree() % 2 != 0 || r.degree() == 0 {
        return Err(Error::OddDegree(r.degree()));
    }
    Ok(SymMultiForm {
        generator: r.clone(),
    })
}

impl<T: Real> SymMultiForm<T> {
    pub fn order(&self) -> usize {
        self.generator.degree()
    }

    pub fn generator(&self) -> &ScalarHomoPoly<T> {
        &self.generator
    }

    /// `A(v_1, ..., v_n) = 1/(2^n n!) sum_eps (prod eps_i) R(sum eps_i v_i)`.
    ///
    /// Terms with `eps_1 = -1` duplicate those with `eps_1 = +1` for even `n`,
    /// so only the latter half is summed and doubled.
    pub fn eval(&self, args: &[Vec2<T>]) -> Result<T> {
        let n = self.order();
        if args.len() != n {
            return Err(Error::DegreeMismatch {
                expected: n,
                found: args.len(),
            });
        }
        let half = 1usize << (n - 1);
        let terms: Vec<T> = (0..half)
            .map(|mask| {
                let mut s = args[0];
                let mut sign = T::one();
                for (i, a) in args.iter().enumerate().skip(1) {
                    if mask >> (i - 1) & 1 == 1 {
                        s = s - *a;
                        sign = -sign;
                    } else {
                        s = s + *a;
                    }
                }
                sign * self.generator.eval(s)
            })
            .collect();
        let mut denom = T::lit(2.0).powi(n as i32 - 1);
        for j in 2..=n {
            denom = denom * T::from_usize_lossy(j);
        }
        Ok(pairwise_sum(&terms) / denom)
    }

    /// `A(x, ..., x, w)` with `n - 1` copies of `x`.
    pub fn eval_tangent(&self, x: Vec2<T>, w: Vec2<T>) -> T {
        let mut args = vec![x; self.order()];
        args[self.order() - 1] = w;
        self.eval(&args).expect("argument count matches the order")
    }
}

/// Interpolation angles `pi (2j + 1) / (2n)`, `j < n`: distinct directions
/// of a half turn, clustered like Chebyshev nodes.
fn nodes<T: Real>(n: usize) -> Vec<T> {
    (0..n)
        .map(|j| T::PI() * T::from_usize_lossy(2 * j + 1) / T::from_usize_lossy(2 * n))
        .collect()
}

/// Recover the coefficients of a degree `m` homogeneous polynomial from its
/// values on `m + 1` interpolation directions.
fn interpolate<T: Real>(m: usize, f: impl Fn(Vec2<T>) -> T) -> Result<ScalarHomoPoly<T>> {
    let angles = nodes::<T>(m + 1);
    let rows: Vec<Vec<T>> = angles
        .iter()
        .map(|&t| {
            let (s, c) = t.sin_cos();
            (0..=m)
                .map(|i| c.powi((m - i) as i32) * s.powi(i as i32))
                .collect()
        })
        .collect();
    let rhs: Vec<T> = angles.iter().map(|&t| f(Vec2::from_angle(t))).collect();
    ScalarHomoPoly::new(solve_full_pivot(rows, rhs)?)
}

/// `P(x) = -A(x, ..., x, y0) x0 + A(x, ..., x, x0) y0` for the form polarized
/// from `r`; its numerical radius vanishes for the norm `r^(1/deg r)`.
pub fn tangent_poly<T: Real>(
    r: &ScalarHomoPoly<T>,
    x0: Vec2<T>,
    y0: Vec2<T>,
) -> Result<VectorHomoPoly<T>> {
    let form = polarize(r)?;
    let scale = x0.euclid() * y0.euclid();
    if scale == T::zero() || x0.cross(y0).abs() <= T::lit(1e-12) * scale {
        return Err(Error::DependentVectors);
    }
    let def = q_definite(r, 8192);
    if !def.definite || r.eval(def.witness) <= T::zero() {
        return Err(Error::NotPositiveDefinite {
            min: r.eval(def.witness).as_f64(),
        });
    }
    let m = r.degree() - 1;
    let along_y0 = interpolate(m, |x| form.eval_tangent(x, y0))?;
    let along_x0 = interpolate(m, |x| form.eval_tangent(x, x0))?;
    let p1 = along_x0.scale(y0.x).sub(&along_y0.scale(x0.x))?;
    let p2 = along_x0.scale(y0.y).sub(&along_y0.scale(x0.y))?;
    VectorHomoPoly::new(p1, p2)
}

/// `x^4 + 2 beta x^2 y^2 + y^4`, the fourth power of the quartic norms.
pub fn quartic_generator<T: Real>(beta: T) -> ScalarHomoPoly<T> {
    ScalarHomoPoly::new(vec![
        T::one(),
        T::zero(),
        T::lit(2.0) * beta,
        T::zero(),
        T::one(),
    ])
    .expect("five coefficients")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homopoly::lp_zero_poly;
    use proptest::prelude::*;

    fn v(x: f64, y: f64) -> Vec2<f64> {
        Vec2::new(x, y)
    }

    fn euclid_squared_squared() -> ScalarHomoPoly<f64> {
        quartic_generator(1.0)
    }

    /// Independent oracle: the fully expanded multilinear form of a quartic,
    /// A(u,v,w,z) = sum over coefficient monomials with symmetrized index
    /// choices, computed by brute-force enumeration of the 2^4 coordinate
    /// selections.
    fn quartic_form_brute(r: &ScalarHomoPoly<f64>, args: [Vec2<f64>; 4]) -> f64 {
        let binom = [1.0, 4.0, 6.0, 4.0, 1.0];
        let mut total = 0.0;
        for sel in 0..16u32 {
            // sel bit i set: argument i contributes its y coordinate
            let ny = sel.count_ones() as usize;
            let mut prod = 1.0;
            for (i, a) in args.iter().enumerate() {
                prod *= if sel >> i & 1 == 1 { a.y } else { a.x };
            }
            total += r.coeffs()[ny] / binom[ny] * prod;
        }
        total
    }

    #[test]
    fn polarization_examples() {
        let a = polarize(&euclid_squared_squared()).unwrap();
        let (e1, e2) = (v(1.0, 0.0), v(0.0, 1.0));
        assert!(a.eval(&[e1, e1, e1, e2]).unwrap().abs() < 1e-15);
        assert!((a.eval(&[e1, e1, e2, e2]).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((quartic_form_brute(&euclid_squared_squared(), [e1, e1, e2, e2]) - 1.0 / 3.0).abs() < 1e-15);
        assert!(polarize(&ScalarHomoPoly::new(vec![1.0, 0.0, 1.0, 0.0]).unwrap()).is_err());
    }

    #[test]
    fn polarization_matches_expanded_form() {
        let r = ScalarHomoPoly::new(vec![0.7, -1.2, 3.0, 0.4, 2.5]).unwrap();
        let a = polarize(&r).unwrap();
        let args = [v(0.3, -1.1), v(2.0, 0.5), v(-0.7, 0.9), v(1.3, 1.7)];
        let got = a.eval(&args).unwrap();
        let want = quartic_form_brute(&r, args);
        assert!((got - want).abs() < 1e-13 * want.abs().max(1.0));
    }

    #[test]
    fn form_is_symmetric() {
        let r = ScalarHomoPoly::new(vec![0.7, -1.2, 3.0, 0.4, 2.5, -0.3, 1.0]).unwrap();
        let a = polarize(&r).unwrap();
        let args = [v(0.3, -1.1), v(2.0, 0.5), v(-0.7, 0.9), v(1.3, 1.7), v(0.1, 0.2), v(-1.0, 0.4)];
        let base = a.eval(&args).unwrap();
        let perms = [[5, 4, 3, 2, 1, 0], [1, 0, 2, 3, 4, 5], [2, 5, 0, 4, 1, 3]];
        for p in perms {
            let permuted: Vec<_> = p.iter().map(|&i| args[i]).collect();
            assert!((a.eval(&permuted).unwrap() - base).abs() < 1e-12 * base.abs().max(1.0));
        }
    }

    #[test]
    fn tangent_poly_of_euclidean_generator() {
        let p = tangent_poly(&euclid_squared_squared(), v(1.0, 0.0), v(0.0, 1.0)).unwrap();
        // (x^2 + y^2)(-y, x)
        let want1 = [0.0, -1.0, 0.0, -1.0];
        let want2 = [1.0, 0.0, 1.0, 0.0];
        for (g, w) in p.p1().coeffs().iter().zip(want1) {
            assert!((g - w).abs() < 1e-12);
        }
        for (g, w) in p.p2().coeffs().iter().zip(want2) {
            assert!((g - w).abs() < 1e-12);
        }
    }

    #[test]
    fn tangent_poly_of_l4_is_multiple_of_lp_zero_poly() {
        let p = tangent_poly(&quartic_generator(0.0), v(1.0, 0.0), v(0.0, 1.0)).unwrap();
        let canon = lp_zero_poly(4.0).unwrap();
        let (a, b) = (p.coeff_vec(), canon.coeff_vec());
        let dot: f64 = a.iter().zip(&b).map(|(s, t)| s * t).sum();
        let cos = dot / (p.coeff_norm() * canon.coeff_norm());
        assert!((cos.abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tangent_poly_errors() {
        let r = euclid_squared_squared();
        assert_eq!(tangent_poly(&r, v(1.0, 1.0), v(1.0, 1.0)), Err(Error::DependentVectors));
        assert_eq!(tangent_poly(&r, v(1.0, 0.0), v(0.0, 0.0)), Err(Error::DependentVectors));
        let indefinite = ScalarHomoPoly::new(vec![1.0, 0.0, 0.0, 0.0, -1.0]).unwrap();
        assert!(matches!(
            tangent_poly(&indefinite, v(1.0, 0.0), v(0.0, 1.0)),
            Err(Error::NotPositiveDefinite { .. })
        ));
        let negative = quartic_generator(1.0).scale(-1.0);
        assert!(matches!(
            tangent_poly(&negative, v(1.0, 0.0), v(0.0, 1.0)),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn tangent_direction_is_half_gradient_over_degree() {
        // A(x,...,x,w) = grad R(x) . w / deg R
        let r = ScalarHomoPoly::new(vec![1.0, 0.3, 1.4, -0.2, 0.9, 0.0, 1.1]).unwrap();
        let a = polarize(&r).unwrap();
        let (dx, dy) = (r.d_dx(), r.d_dy());
        for k in 0..20 {
            let x = Vec2::from_angle(k as f64 * 0.3).scale(1.2);
            let w = v(0.4, -0.8);
            let want = (dx.eval(x) * w.x + dy.eval(x) * w.y) / 6.0;
            assert!((a.eval_tangent(x, w) - want).abs() < 1e-11 * want.abs().max(1.0));
        }
    }

    proptest! {
        #[test]
        fn diagonal_reproduces_generator(
            half_deg in 1usize..=4,
            c in proptest::collection::vec(-2.0f64..2.0, 9),
            ang in 0.0f64..6.3,
            rad in 0.2f64..2.0,
        ) {
            let deg = 2 * half_deg;
            let r = ScalarHomoPoly::new(c[..=deg].to_vec()).unwrap();
            let a = polarize(&r).unwrap();
            let x = Vec2::from_angle(ang).scale(rad);
            let want = r.eval(x);
            let got = a.eval(&vec![x; deg]).unwrap();
            let scale = r.coeffs().iter().map(|c| c.abs()).sum::<f64>() * rad.powi(deg as i32);
            prop_assert!((got - want).abs() <= 1e-10 * scale.max(want.abs()));
        }

        #[test]
        fn tangent_poly_pairs_to_zero(beta in 0.0f64..3.0, ang in 0.0f64..6.3, bx in -1.0f64..1.0, by in 0.2f64..1.5) {
            let r = quartic_generator(beta);
            let x0 = v(1.0, bx);
            let y0 = v(-bx * 0.5, by);
            prop_assume!(x0.cross(y0).abs() > 1e-3);
            let p = tangent_poly(&r, x0, y0).unwrap();
            let a = polarize(&r).unwrap();
            let x = Vec2::from_angle(ang);
            let val = a.eval_tangent(x, p.eval(x));
            prop_assert!(val.abs() < 1e-10 * p.coeff_norm().max(1.0));
        }
    }
}
