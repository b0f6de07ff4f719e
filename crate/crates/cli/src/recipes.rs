use pnindex_core::{
    beta_classify, embed_lp, embedded_pairing, eps_counterexample, estimate_index, example8_poly, example9_poly,
    hessian_grid, log_convexity_profile, lp_zero_poly, midpoint_test, min_zero_degree, monotonicity_report,
    quartic_generator, quartic_root, range_samples, tangent_poly, thm_norming, uniqueness_check, verify_zero,
    Budget, NormSpec, Vec2, Verdict, VectorHomoPoly,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::commands::profile_grid;
use crate::config::{usage, ExperimentConfig};
use crate::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: String,
    pub passed: bool,
}

fn le(name: impl Into<String>, value: f64, limit: f64) -> Check {
    Check {
        name: name.into(),
        value,
        limit: format!("<= {limit:e}"),
        passed: value <= limit,
    }
}

fn ge(name: impl Into<String>, value: f64, limit: f64) -> Check {
    Check {
        name: name.into(),
        value,
        limit: format!(">= {limit:e}"),
        passed: value >= limit,
    }
}

fn within(name: impl Into<String>, value: f64, lo: f64, hi: f64) -> Check {
    Check {
        name: name.into(),
        value,
        limit: format!("in [{lo}, {hi}]"),
        passed: (lo..=hi).contains(&value),
    }
}

fn equals(name: impl Into<String>, value: f64, want: f64) -> Check {
    Check {
        name: name.into(),
        value,
        limit: format!("== {want}"),
        passed: value == want,
    }
}

fn holds(name: impl Into<String>, cond: bool) -> Check {
    Check {
        name: name.into(),
        value: if cond { 1.0 } else { 0.0 },
        limit: "== 1".into(),
        passed: cond,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RecipeReport {
    pub recipe: &'static str,
    pub claim: &'static str,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub details: serde_json::Value,
}

impl RecipeReport {
    pub fn passed(&self) -> bool {
        self.passed
    }
}

type Run = fn(&ExperimentConfig) -> Result<(Vec<Check>, serde_json::Value), CliError>;

pub struct Recipe {
    pub name: &'static str,
    pub claim: &'static str,
    pub run: fn(&ExperimentConfig) -> Result<RecipeReport, CliError>,
}

macro_rules! recipe {
    ($name:literal, $claim:literal, $f:ident) => {
        Recipe {
            name: $name,
            claim: $claim,
            run: |cfg| finish($name, $claim, $f, cfg),
        }
    };
}

fn finish(name: &'static str, claim: &'static str, f: Run, cfg: &ExperimentConfig) -> Result<RecipeReport, CliError> {
    let (checks, details) = f(cfg)?;
    Ok(RecipeReport {
        recipe: name,
        claim,
        passed: checks.iter().all(|c| c.passed),
        checks,
        details,
    })
}

pub const RECIPES: [Recipe; 17] = [
    recipe!("lp-zero-p4", "(-y^3, x^3) has numerical radius zero on l_4^2", lp_zero_p4),
    recipe!("lp-zero-p6", "(-y^5, x^5) has numerical radius zero on l_6^2", lp_zero_p6),
    recipe!("hilbert-rotation", "the Euclidean plane has n^(1) = 0", hilbert_rotation),
    recipe!("lp-min-degree", "the smallest degree with zero index on l_p^2 (even p) is p - 1", lp_min_degree),
    recipe!("lp-below-zero-degree", "below degree p - 1 the l_p^2 estimates stay away from zero (upper bounds only)", lp_below),
    recipe!("lp-embedding", "(-y^(p-1), x^(p-1)) embedded in l_p^d pairs to zero", lp_embedding),
    recipe!("quartic-family", "the tangent map of the quartic generator has radius zero and its closed-form functional is the gradient", quartic_family),
    recipe!("quartic-uniqueness", "for beta = 0 the tangent map is a multiple of (-y^3, x^3)", quartic_uniqueness),
    recipe!("asym-zero", "the cubic map for the asymmetric norm has radius zero", asym_zero),
    recipe!("interp-zero", "the interpolated symmetric norm admits a zero-radius map of degree 2m - 1", interp_zero),
    recipe!("square-order2", "the square has polynomial numerical index of order 2 equal to 1/2", square_order2),
    recipe!("lp-monotone", "n^(k) is nonincreasing in k on l_4^2", lp_monotone),
    recipe!("beta-classification", "(x^4 + 2 beta x^2 y^2 + y^4)^(1/4) is a norm iff beta is in [0, 3]", beta_classification),
    recipe!("geom-mean-convex", "geometric means of l_p norms with p >= 2 are norms", geom_mean_convex),
    recipe!("asym-convex", "the asymmetric formula is a norm for every a in (0, 1)", asym_convex),
    recipe!("eps-not-norm", "geometric means of weighted Euclidean norms can fail the triangle inequality", eps_not_norm),
    recipe!("isometry-invariance", "numerical ranges and norms are invariant under conjugation by isometries", isometry_invariance),
];

pub fn names() -> Vec<&'static str> {
    RECIPES.iter().map(|r| r.name).collect()
}

pub fn find(name: &str) -> Result<&'static Recipe, CliError> {
    RECIPES
        .iter()
        .find(|r| r.name == name)
        .ok_or_else(|| usage("recipe", format!("unknown recipe `{name}` (expected one of {})", names().join(", "))))
}

fn core(field: &'static str) -> impl Fn(pnindex_core::Error) -> CliError {
    move |e| usage(field, e)
}

fn budget(cfg: &ExperimentConfig) -> Result<Budget, CliError> {
    let desk = Budget::desk();
    Budget::new(cfg.starts.unwrap_or(desk.starts), cfg.iterations.unwrap_or(desk.iterations)).map_err(core("budget"))
}

fn even_p(cfg: &ExperimentConfig) -> Result<f64, CliError> {
    let p = cfg.p.unwrap_or(4.0);
    if p.fract() != 0.0 || p < 2.0 || p > 10.0 || p as i64 % 2 != 0 {
        return Err(usage("p", format!("needs an even integer in 2..=10, got {p}")));
    }
    Ok(p)
}

fn tangent(beta: f64) -> Result<VectorHomoPoly<f64>, CliError> {
    tangent_poly(&quartic_generator(beta), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)).map_err(core("beta"))
}

/// Largest coordinate gap between the closed-form functional and the
/// gradient at `n` sphere points.
fn norming_gap(p: &VectorHomoPoly<f64>, norm: &NormSpec<f64>, n: usize) -> Result<f64, CliError> {
    let mut worst = 0.0f64;
    for j in 0..n {
        let v = norm.sphere_point((j as f64 + 0.5) * std::f64::consts::TAU / n as f64);
        let f = thm_norming(p, v, norm).map_err(core("polynomial"))?;
        let g = norm.gradient(v).map_err(core("norm"))?;
        worst = worst.max((f.x - g.x).abs()).max((f.y - g.y).abs());
    }
    Ok(worst)
}

fn zero_radius(p: f64, cfg: &ExperimentConfig) -> Result<(Vec<Check>, serde_json::Value), CliError> {
    let norm = NormSpec::lp(p).map_err(core("p"))?;
    let poly = lp_zero_poly(p).map_err(core("p"))?;
    let tol = cfg.zero_tol.unwrap_or(1e-10);
    let z = verify_zero(&poly, &norm, tol);
    Ok((
        vec![le("max |pairing|", z.max_pairing, tol), holds("decided on 65536 angles", z.grid == 65536)],
        json!({ "polynomial": poly, "zero_check": z }),
    ))
}

fn lp_zero_p4(cfg: &ExperimentConfig) -> Result<(Vec<Check>, serde_json::Value), CliError> {
    zero_radius(4.0, cfg)
}

fn lp_zero_p6(cfg: &ExperimentConfig) -> Result<(Vec<Check>, serde_json::Value), CliError> {
    zero_radius(6.0, cfg)
}

fn hilbert_rotation(cfg: &ExperimentConfig) -> Result<(Vec<Check>, serde_json::Value), CliError> {
    let norm = NormSpec::lp(2.0).map_err(core("norm"))?;
    let est = estimate_index(&norm, 1, budget(cfg)?, cfg.seed()).map_err(core("k"))?;
    Ok((vec![le("estimate", est.value, 1e-8)], json!({ "estimate": est })))
}

fn lp_min_degree(cfg: &ExperimentConfig) -> Result<(Vec<Check>, serde_json::Value), CliError> {
    let p = even_p(cfg)?;
    let norm = NormSpec::lp(p).map_err(core("p"))?;
    let want = p as usize - 1;
    let zd = min_zero_degree(&norm, want, budget(cfg)?, cfg.seed()).map_err(core("kmax"))?;
    let k0 = zd.k0.map(|k| k as f64).unwrap_or(f64::NAN);
    Ok((
        vec![equals("k0", k0, want as f64), holds("k0 is odd", zd.k0.is_some_and(|k| k % 2 == 1))],
        json!({ "p": p, "result": zd }),
    ))
}

fn lp_below(cfg: &ExperimentConfig) -> Result<(Vec<Check>, serde_json::Value), CliError> {
    let p = even_p(cfg)?;
    let norm = NormSpec::lp(p).map_err(core("p"))?;
    let b = budget(cfg)?;
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    for k in 1..(p as usize - 1) {
        let est = estimate_index(&norm, k, b, cfg.seed()).map_err(core("k"))?;
        checks.push(ge(format!("estimate k={k}"), est.value, 0.01));
        rows.push(json!({ "k": k, "estimate": est.value, "label": "upper bound only" }));
    }
    Ok((checks, json!({ "p": p, "rows": rows })))
}

fn lp_embedding(cfg: &ExperimentConfig) -> Result<(Vec<Check>, serde_json::Value), CliError> {
    let p = even_p(cfg)?;
    let d = cfg.d.unwrap_or(3);
    let norm = NormSpec::lp_dim(p, d).map_err(core("d"))?;
    let e = embed_lp(&lp_zero_poly(p).map_err(core("p"))?, d).map_err(core("d"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed());
    let mut worst = 0.0f64;
    let points = 10_000;
    for _ in 0..points {
        let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n = norm.eval_nd(&x).map_err(core("norm"))?;
        if n == 0.0 {
            continue;
        }
        let x: Vec<f64> = x.iter().map(|c| c / n).collect();
        worst = worst.max(embedded_pairing(&e, &norm, &x).map_err(core("norm"))?.abs());
    }
    Ok((vec![le("max |pairing|", worst, 1e-12)], json!({ "p": p, "d": d, "points": points })))
}

fn quartic_family(cfg: &ExperimentConfig) -> Result<(Vec<Check>, serde_json::Value), CliError> {
    let beta = cfg.beta.unwrap_or(2.0);
    if !(0.0..=3.0).contains(&beta) {
        return Err(usage("beta", format!("needs a norm, beta in [0, 3], got {beta}")));
    }
    let norm = NormSpec::beta_quartic(beta).map_err(core("beta"))?;
    let p = tangent(beta)?;
    let z = verify_zero(&p, &norm, cfg.zero_tol.unwrap_or(1e-10));
    let gap = norming_gap(&p, &norm, 1024)?;
    Ok((
        vec![le("max |pairing|", z.max_pairing, cfg.zero_tol.unwrap_or(1e-10)), le("functional vs gradient", gap, 1e-8)],
        json!({ "beta": beta, "polynomial": p, "zero_check": z }),
    ))
}

fn quartic_uniqueness(_cfg: &ExperimentConfig) -> Result<(Vec<Check>, serde_json::Value), CliError> {
    let norm = NormSpec::lp(4.0).map_err(core("norm"))?;
    let canon = lp_zero_poly(4.0).map_err(core("p"))?;
    let found = tangent(0.0)?;
    let cos = uniqueness_check(&norm, &canon, &found).map_err(core("polynomial"))?;
    Ok((vec![ge("|cos|", cos, 1.0 - 1e-9)], json!({ "tangent": found, "canonical": canon })))
}

fn asym_zero(cfg: &ExperimentConfig) -> Result<(Vec<Check>, serde_json::Value), CliError> {
    let a = cfg.a.unwrap_or(0.3);
    let norm = NormSpec::asym_a(a).map_err(core("a"))?;
    let p = example8_poly(a).map_err(core("a"))?;
    let tol = cfg.zero_tol.unwrap_or(1e-9);
    let z = verify_zero(&p, &norm, tol);
    let gap = norming_gap(&p, &norm, 1024)?;
    Ok((
        vec![le("max |pairing|", z.max_pairing, tol), le("functional vs gradient", gap, 1e-8)],
        json!({ "a": a, "polynomial": p, "zero_check": z }),
    ))
}

fn interp_zero(cfg: &ExperimentConfig) -> Result<(Vec<Check>, serde_json::Value), CliError> {
    let (m, theta) = (cfg.m.unwrap_or(3), cfg.theta.unwrap_or(0.4));
    let norm = NormSpec::interp_sym(m, theta).map_err(core("m"))?;
    let p = example9_poly(m, theta).map_err(core("m"))?;
    let tol = cfg.zero_tol.unwrap_or(1e-9);
    let z = verify_zero(&p, &norm, tol);
    let gap = norming_gap(&p, &norm, 1024)?;
    Ok((
        vec![le("max |pairing|", z.max_pairing, tol), le("functional vs gradient", gap, 1e-8)],
        json!({ "m": m, "theta": theta, "polynomial": p, "zero_check": z }),
    ))
}

fn square_order2(cfg: &ExperimentConfig) -> Result<(Vec<Check>, serde_json::Value), CliError> {
    let est = estimate_index(&NormSpec::linf(), 2, budget(cfg)?, cfg.seed()).map_err(core("k"))?;
    Ok((vec![within("estimate", est.value, 0.45, 0.55)], json!({ "estimate": est })))
}

fn lp_monotone(cfg: &ExperimentConfig) -> Result<(Vec<Check>, serde_json::Value), CliError> {
    let norm = NormSpec::lp(4.0).map_err(core("norm"))?;
    let rep = monotonicity_report(&norm, 4, budget(cfg)?, cfg.seed()).map_err(core("kmax"))?;
    let mut checks = vec![equals("violations", rep.violations.len() as f64, 0.0)];
    for &(k, v) in &rep.rows[2..] {
        checks.push(le(format!("estimate k={k}"), v, 1e-6));
    }
    Ok((checks, json!({ "rows": rep.rows, "tolerance": rep.tolerance })))
}

fn beta_classification(_cfg: &ExperimentConfig) -> Result<(Vec<Check>, serde_json::Value), CliError> {
    let table = [(-1.0, false), (-0.5, false), (0.0, true), (1.0, true), (2.0, true), (3.0, true), (3.5, false), (5.0, false)];
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    for (beta, want) in table {
        let c = beta_classify(beta).map_err(core("beta"))?;
        checks.push(holds(format!("beta={beta} is_norm={want}"), c.is_norm == want));
        if let Some(w) = c.witness {
            checks.push(ge(format!("beta={beta} witness margin"), w.recheck(|v| quartic_root(beta, v)), 1e-10));
        }
        rows.push(c);
    }
    Ok((checks, json!({ "classifications": rows })))
}

fn convex_checks(norm: &NormSpec<f64>, cfg: &ExperimentConfig, checks: &mut Vec<Check>) -> Result<serde_json::Value, CliError> {
    let ts = profile_grid(norm.kind(), 512).expect("profile family");
    let prof = log_convexity_profile(norm, &ts).map_err(core("norm"))?;
    checks.push(le("profile closed form vs finite differences", prof.max_error, 1e-6));
    let mid = midpoint_test(norm, cfg.pairs.unwrap_or(4000), cfg.seed()).map_err(core("pairs"))?;
    checks.push(holds("midpoint test certified", mid.verdict == Verdict::CertifiedConvexOnGrid));
    let hes = hessian_grid(norm, cfg.grid.unwrap_or(512)).map_err(core("norm"))?;
    checks.push(holds("hessian grid certified", hes.verdict == Verdict::CertifiedConvexOnGrid));
    Ok(json!({
        "norm": norm.label(),
        "profile_max_error": prof.max_error,
        "profile_min_convexity": prof.min_convexity,
        "min_hessian_eig": hes.min_hessian_eig,
    }))
}

fn geom_mean_convex(cfg: &ExperimentConfig) -> Result<(Vec<Check>, serde_json::Value), CliError> {
    let (p0, p1, theta) = (cfg.p0.unwrap_or(2.0), cfg.p1.unwrap_or(6.0), cfg.theta.unwrap_or(0.3));
    if p0 < 2.0 || p1 < 2.0 {
        return Err(usage("p0", "the claim needs p0, p1 >= 2"));
    }
    let norm = NormSpec::geom_mean(p0, p1, theta).map_err(core("norm"))?;
    let mut checks = Vec::new();
    let details = convex_checks(&norm, cfg, &mut checks)?;
    Ok((checks, details))
}

fn asym_convex(cfg: &ExperimentConfig) -> Result<(Vec<Check>, serde_json::Value), CliError> {
    let norm = NormSpec::asym_a(cfg.a.unwrap_or(0.35)).map_err(core("a"))?;
    let mut checks = Vec::new();
    let details = convex_checks(&norm, cfg, &mut checks)?;
    let min_conv = details["profile_min_convexity"].as_f64().unwrap_or(f64::NAN);
    checks.push(ge("min phi'' + phi'^2", min_conv, -1e-9));
    Ok((checks, details))
}

fn eps_not_norm(cfg: &ExperimentConfig) -> Result<(Vec<Check>, serde_json::Value), CliError> {
    let theta = cfg.theta.unwrap_or(0.5);
    let grid = [1.0, 0.1, 0.01, 1e-3, 1e-4, 1e-6];
    let found = eps_counterexample(theta, &grid).map_err(core("theta"))?;
    let mut checks = vec![holds("violation found", found.is_some())];
    if let Some(w) = found {
        let n = NormSpec::eps_geom_mean(theta, w.eps).map_err(core("eps"))?;
        let margin = n.eval(Vec2::new(1.0, 1.0)) - n.eval(Vec2::new(1.0, 0.0)) - n.eval(Vec2::new(0.0, 1.0));
        checks.push(ge("re-evaluated margin", margin, 1e-12));
    }
    Ok((checks, json!({ "theta": theta, "grid": grid, "witness": found })))
}

fn isometry_invariance(cfg: &ExperimentConfig) -> Result<(Vec<Check>, serde_json::Value), CliError> {
    let beta = cfg.beta.unwrap_or(2.0);
    let norm = NormSpec::beta_quartic(beta).map_err(core("beta"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed());
    let mut polys = Vec::new();
    for k in 1..=4 {
        let c: Vec<f64> = (0..2 * (k + 1)).map(|_| rng.gen_range(-1.0..1.0)).collect();
        polys.push(VectorHomoPoly::from_coeff_vec(k, &c).map_err(core("polynomial"))?);
    }
    let mut worst = 0.0f64;
    for p in &polys {
        let mut base = range_samples(p, &norm, 4096);
        base.sort_by(f64::total_cmp);
        let sup = p.sup_norm(&norm, 1e-12);
        for q in [p.conj_reflect_x(), p.conj_reflect_y(), p.conj_swap()] {
            let mut other = range_samples(&q, &norm, 4096);
            other.sort_by(f64::total_cmp);
            for (a, b) in base.iter().zip(&other) {
                worst = worst.max((a - b).abs());
            }
            worst = worst.max((q.sup_norm(&norm, 1e-12) - sup).abs());
        }
    }
    Ok((vec![le("max deviation", worst, 1e-8)], json!({ "beta": beta, "maps": polys.len() })))
}
