//! Acceptance suite: one line per criterion, non-zero exit on any failure.

use std::time::{Duration, Instant};

use pnindex_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = std::result::Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn timed<R>(f: impl FnOnce() -> R) -> (R, Duration) {
    let t = Instant::now();
    let r = f();
    (r, t.elapsed())
}

fn c1_zero_radius_certificates() -> Outcome {
    let mut notes = Vec::new();
    for p in [4.0, 6.0] {
        let norm = NormSpec::lp(p).map_err(|e| e.to_string())?;
        let poly = lp_zero_poly(p).map_err(|e| e.to_string())?;
        let (z, dt) = timed(|| verify_zero(&poly, &norm, 1e-10));
        check(z.certified, format!("l_{p}: max pairing {:e}", z.max_pairing))?;
        check(z.grid == 65536, format!("l_{p}: decided on grid {}", z.grid))?;
        check(dt < Duration::from_secs(1), format!("l_{p}: took {dt:?}"))?;
        notes.push(format!("l_{p} max {:.1e} in {:.0?}", z.max_pairing, dt));
    }
    Ok(notes.join(", "))
}

fn c2_exotic_zero_radius() -> Outcome {
    let mut worst: (f64, Duration) = (0.0, Duration::ZERO);
    let mut cases: Vec<(String, NormSpec<f64>, VectorHomoPoly<f64>)> = Vec::new();
    for a in [0.3, 0.9 / 2f64.sqrt(), 0.7] {
        cases.push((
            format!("AsymA({a:.4})"),
            NormSpec::asym_a(a).map_err(|e| e.to_string())?,
            example8_poly(a).map_err(|e| e.to_string())?,
        ));
    }
    for (m, theta) in [(3, 0.0), (3, 0.4), (4, 1.0)] {
        cases.push((
            format!("InterpSym({m},{theta})"),
            NormSpec::interp_sym(m, theta).map_err(|e| e.to_string())?,
            example9_poly(m, theta).map_err(|e| e.to_string())?,
        ));
    }
    for (name, norm, poly) in &cases {
        let (z, dt) = timed(|| verify_zero(poly, norm, 1e-9));
        check(z.certified, format!("{name}: max pairing {:e}", z.max_pairing))?;
        check(dt < Duration::from_secs(2), format!("{name}: took {dt:?}"))?;
        worst = (worst.0.max(z.max_pairing), worst.1.max(dt));
    }
    Ok(format!("6 maps, worst pairing {:.1e}, slowest {:.0?}", worst.0, worst.1))
}

fn c3_tangent_pipeline() -> Outcome {
    let (x0, y0) = (Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0));
    let mut worst = 0.0f64;
    for beta in [0.0, 1.0, 2.0, 3.0] {
        let norm = NormSpec::beta_quartic(beta).map_err(|e| e.to_string())?;
        let p = tangent_poly(&quartic_generator(beta), x0, y0).map_err(|e| e.to_string())?;
        let z = verify_zero(&p, &norm, 1e-10);
        check(z.certified, format!("beta {beta}: max pairing {:e}", z.max_pairing))?;
        worst = worst.max(z.max_pairing);
    }
    let p = tangent_poly(&quartic_generator(0.0), x0, y0).map_err(|e| e.to_string())?;
    let norm = NormSpec::lp(4.0).map_err(|e| e.to_string())?;
    let canon = lp_zero_poly(4.0).map_err(|e| e.to_string())?;
    let cos = uniqueness_check(&norm, &canon, &p).map_err(|e| e.to_string())?;
    check(cos >= 1.0 - 1e-9, format!("alignment {cos}"))?;
    Ok(format!("worst pairing {worst:.1e}, |cos| - 1 = {:.1e}", cos - 1.0))
}

fn c4_norming_closed_form() -> Outcome {
    let (x0, y0) = (Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0));
    let cases: Vec<(NormSpec<f64>, VectorHomoPoly<f64>)> = vec![
        (NormSpec::lp(4.0).unwrap(), lp_zero_poly(4.0).unwrap()),
        (
            NormSpec::beta_quartic(2.0).unwrap(),
            tangent_poly(&quartic_generator(2.0), x0, y0).map_err(|e| e.to_string())?,
        ),
        (NormSpec::asym_a(0.3).unwrap(), example8_poly(0.3).unwrap()),
        (NormSpec::interp_sym(3, 0.4).unwrap(), example9_poly(3, 0.4).unwrap()),
    ];
    let mut worst = 0.0f64;
    for (norm, poly) in &cases {
        for j in 0..1024 {
            let v = norm.sphere_point((j as f64 + 0.5) * std::f64::consts::TAU / 1024.0);
            let f = thm_norming(poly, v, norm).map_err(|e| format!("{}: {e}", norm.label()))?;
            let g = norm.gradient(v).map_err(|e| e.to_string())?;
            worst = worst.max((f.x - g.x).abs().max((f.y - g.y).abs()));
        }
    }
    check(worst <= 1e-8, format!("max deviation {worst:e}"))?;
    Ok(format!("4 norms x 1024 points, max deviation {worst:.1e}"))
}

fn c5_index_estimation() -> Outcome {
    let budget = Budget::desk();
    check(budget.starts == 64, "desk budget must use 64 starts")?;
    let mut notes = Vec::new();
    for (p, k) in [(2.0, 1usize), (4.0, 3), (6.0, 5)] {
        let norm = NormSpec::lp(p).map_err(|e| e.to_string())?;
        let (est, dt) = timed(|| estimate_index(&norm, k, budget, 0));
        let est = est.map_err(|e| e.to_string())?;
        check(est.value <= 1e-6, format!("l_{p}, k={k}: value {:e}", est.value))?;
        check(dt < Duration::from_secs(30), format!("l_{p}, k={k}: took {dt:?}"))?;
        let zd = min_zero_degree(&norm, 5, budget, 0).map_err(|e| e.to_string())?;
        check(zd.k0 == Some(k), format!("l_{p}: k0 = {:?}", zd.k0))?;
        check(k % 2 == 1, "k0 must be odd")?;
        notes.push(format!("l_{p}: k0={k} value {:.1e} in {:.1?}", est.value, dt));
    }
    Ok(notes.join(", "))
}

/// `max |a + b t + c t^2|` over `[-1, 1]`.
fn quad_sup(a: f64, b: f64, c: f64) -> f64 {
    let q = |t: f64| a + b * t + c * t * t;
    let mut m = q(-1.0).abs().max(q(1.0).abs());
    if c != 0.0 {
        let t = -b / (2.0 * c);
        if t.abs() < 1.0 {
            m = m.max(q(t).abs());
        }
    }
    m
}

/// Exact radius and norm of a degree 2 map on the square: the sphere is the
/// four edges, the norming functionals of an edge are constant and the
/// vertex faces are spanned by the adjacent edge functionals. Degree 2 maps
/// are even, so the edges `x = 1` and `y = 1` suffice.
fn square_exact(c: &[f64]) -> (f64, f64) {
    let (p1, p2) = (&c[0..3], &c[3..6]);
    // on x = 1: P(1, t) = c0 + c1 t + c2 t^2; on y = 1: P(t, 1) = c2 + c1 t + c0 t^2
    let e1 = |q: &[f64]| quad_sup(q[0], q[1], q[2]);
    let e2 = |q: &[f64]| quad_sup(q[2], q[1], q[0]);
    let radius = e1(p1).max(e2(p2));
    let norm = e1(p1).max(e1(p2)).max(e2(p1)).max(e2(p2));
    (radius, norm)
}

fn c6_square_order_two() -> Outcome {
    let norm = NormSpec::linf();
    let est = estimate_index(&norm, 2, Budget::desk(), 0).map_err(|e| e.to_string())?;
    check(
        (0.45..=0.55).contains(&est.value),
        format!("estimate {}", est.value),
    )?;
    let (r, s) = square_exact(&est.best.coeff_vec());
    check((r / s - est.value).abs() < 1e-9, format!("estimate disagrees with exact {}", r / s))?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = f64::INFINITY;
    for _ in 0..10_000 {
        let c: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let (r, s) = square_exact(&c);
        worst = worst.min(r / s);
    }
    check(worst >= 0.5 - 5e-3, format!("random map with ratio {worst}"))?;
    Ok(format!("estimate {:.6}, smallest random ratio {worst:.4}", est.value))
}

fn c7_monotonicity() -> Outcome {
    let norm = NormSpec::lp(4.0).map_err(|e| e.to_string())?;
    let rep = monotonicity_report(&norm, 4, Budget::desk(), 0).map_err(|e| e.to_string())?;
    let vals: Vec<String> = rep.rows.iter().map(|(k, v)| format!("k{k}={v:.2e}")).collect();
    check(rep.is_monotone(), format!("violations at {:?}: {}", rep.violations, vals.join(" ")))?;
    check(rep.rows[2].1 <= 1e-6 && rep.rows[3].1 <= 1e-6, "k = 3, 4 must reach zero")?;
    Ok(vals.join(" "))
}

fn c8_beta_classification() -> Outcome {
    let expected = [
        (-1.0, false),
        (-0.5, false),
        (0.0, true),
        (1.0, true),
        (2.0, true),
        (3.0, true),
        (3.5, false),
        (5.0, false),
    ];
    for (beta, want) in expected {
        let c = beta_classify(beta).map_err(|e| e.to_string())?;
        check(c.is_norm == want, format!("beta {beta}: is_norm {}", c.is_norm))?;
        if !want {
            let w = c.witness.ok_or(format!("beta {beta}: no witness"))?;
            let m = w.recheck(|v| quartic_root(beta, v));
            check(m >= 1e-10, format!("beta {beta}: witness margin {m:e}"))?;
        }
        if beta == 0.0 || beta == 3.0 {
            continue;
        }
        let norm = NormSpec::beta_quartic(beta).map_err(|e| e.to_string())?;
        let mid = midpoint_test(&norm, 4000, 0).map_err(|e| e.to_string())?;
        let hes = hessian_grid(&norm, 512).map_err(|e| e.to_string())?;
        let verdict = if want {
            Verdict::CertifiedConvexOnGrid
        } else {
            Verdict::ViolationFound
        };
        check(
            mid.verdict == verdict && hes.verdict == verdict,
            format!("beta {beta}: midpoint {:?}, hessian {:?}", mid.verdict, hes.verdict),
        )?;
        for w in [mid.witness, hes.witness].into_iter().flatten() {
            let m = w.recheck(|v| norm.eval(v));
            check(m >= 1e-10, format!("beta {beta}: grid witness margin {m:e}"))?;
        }
    }
    Ok("8 values classified, grid verdicts agree off the boundary".into())
}

fn c9_profile_formulas() -> Outcome {
    let unit: Vec<f64> = (0..512).map(|i| i as f64 / 511.0).collect();
    let wide: Vec<f64> = (0..512).map(|i| -8.0 + 16.0 * i as f64 / 511.0).collect();
    let mut worst = 0.0f64;
    for (p0, p1, theta) in [(2.0, 6.0, 0.3), (4.0, 2.0, 0.5), (2.0, 2.0, 0.0)] {
        let norm = NormSpec::geom_mean(p0, p1, theta).map_err(|e| e.to_string())?;
        let prof = log_convexity_profile(&norm, &unit).map_err(|e| e.to_string())?;
        check(prof.matches(), format!("{}: error {:e}", norm.label(), prof.max_error))?;
        worst = worst.max(prof.max_error);
    }
    let mut min_conv = f64::INFINITY;
    for a in [0.3, 0.5, 0.9 / 2f64.sqrt(), 0.9] {
        let norm = NormSpec::asym_a(a).map_err(|e| e.to_string())?;
        let prof = log_convexity_profile(&norm, &wide).map_err(|e| e.to_string())?;
        check(prof.matches(), format!("{}: error {:e}", norm.label(), prof.max_error))?;
        check(prof.min_convexity >= -1e-9, format!("{}: phi''+phi'^2 = {:e}", norm.label(), prof.min_convexity))?;
        worst = worst.max(prof.max_error);
        min_conv = min_conv.min(prof.min_convexity);
    }
    Ok(format!("max error {worst:.1e}, min phi''+phi'^2 {min_conv:.1e}"))
}

fn c10_eps_counterexample() -> Outcome {
    let w = eps_counterexample(0.5, &[1.0, 0.1, 0.01])
        .map_err(|e| e.to_string())?
        .ok_or("no violation found")?;
    check(w.eps == 0.01, format!("eps {}", w.eps))?;
    let n = NormSpec::eps_geom_mean(0.5, w.eps).map_err(|e| e.to_string())?;
    let margin = n.eval(Vec2::new(1.0, 1.0)) - n.eval(Vec2::new(1.0, 0.0)) - n.eval(Vec2::new(0.0, 1.0));
    check(margin > 0.0, format!("re-evaluated margin {margin}"))?;
    Ok(format!("eps = 0.01, n(1,1) - n(1,0) - n(0,1) = {margin:.4}"))
}

fn c11_isometry_invariance() -> Outcome {
    let norm = NormSpec::beta_quartic(2.0).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut polys = vec![tangent_poly(&quartic_generator(2.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0))
        .map_err(|e| e.to_string())?];
    for k in 1..=4 {
        let c: Vec<f64> = (0..2 * (k + 1)).map(|_| rng.gen_range(-1.0..1.0)).collect();
        polys.push(VectorHomoPoly::from_coeff_vec(k, &c).map_err(|e| e.to_string())?);
    }
    let mut worst = 0.0f64;
    for p in &polys {
        let mut base = range_samples(p, &norm, 4096);
        base.sort_by(f64::total_cmp);
        let sup = p.sup_norm(&norm, 1e-12);
        for q in [p.conj_reflect_x(), p.conj_reflect_y(), p.conj_swap()] {
            let mut other = range_samples(&q, &norm, 4096);
            other.sort_by(f64::total_cmp);
            check(other.len() == base.len(), "sample counts differ")?;
            for (a, b) in base.iter().zip(&other) {
                worst = worst.max((a - b).abs());
            }
            worst = worst.max((q.sup_norm(&norm, 1e-12) - sup).abs());
        }
    }
    check(worst <= 1e-8, format!("max deviation {worst:e}"))?;
    Ok(format!("5 maps x 3 isometries, max deviation {worst:.1e}"))
}

fn c12_embedding() -> Outcome {
    let norm = NormSpec::lp_dim(4.0, 3).map_err(|e| e.to_string())?;
    let e = embed_lp(&lp_zero_poly(4.0).map_err(|e| e.to_string())?, 3).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n = norm.eval_nd(&x).map_err(|e| e.to_string())?;
        if n == 0.0 {
            continue;
        }
        let x: Vec<f64> = x.iter().map(|c| c / n).collect();
        let pairing = embedded_pairing(&e, &norm, &x).map_err(|e| e.to_string())?;
        worst = worst.max(pairing.abs());
    }
    check(worst <= 1e-12, format!("max pairing {worst:e}"))?;
    Ok(format!("10000 points, max |pairing| {worst:.1e}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("zero-radius certificates on l_4 and l_6", c1_zero_radius_certificates),
        ("zero radius on the asymmetric and interpolated norms", c2_exotic_zero_radius),
        ("tangent polynomial pipeline for the quartic family", c3_tangent_pipeline),
        ("closed-form norming functional", c4_norming_closed_form),
        ("index estimation and minimal zero degree", c5_index_estimation),
        ("order-2 index of the square", c6_square_order_two),
        ("monotonicity in k on l_4", c7_monotonicity),
        ("beta classification", c8_beta_classification),
        ("log-convexity derivative formulas", c9_profile_formulas),
        ("epsilon counterexample", c10_eps_counterexample),
        ("isometry invariance", c11_isometry_invariance),
        ("embedding into l_4^3", c12_embedding),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (out, dt) = timed(run);
        match out {
            Ok(detail) => println!("criterion {:>2} PASS {name} ({detail}) [{dt:.1?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {why} [{dt:.1?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
