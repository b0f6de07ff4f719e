use pnindex_core::{
    beta_classify, estimate_index, hessian_grid, log_convexity_profile, midpoint_test, min_zero_degree,
    monotonicity_report, radius_grid, verify_zero, Budget, IndexEstimate, NormKind, NormSpec, Vec2,
};
use serde::Serialize;

use crate::config::{usage, ExperimentConfig, Format};
use crate::output::{csv_text, emit_table, json_text, opt_real, real, TableRow};
use crate::{recipes, CliError};

pub const ZERO_THRESHOLD: f64 = 1e-6;

/// Rendered output of a command and whether its verification held.
pub struct Outcome {
    pub text: String,
    pub samples: Option<String>,
    pub passed: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self {
            text,
            samples: None,
            passed: true,
        }
    }
}

fn budget(cfg: &ExperimentConfig) -> Result<Budget, CliError> {
    let desk = Budget::desk();
    Budget::new(cfg.starts.unwrap_or(desk.starts), cfg.iterations.unwrap_or(desk.iterations))
        .map_err(|e| usage("budget", e))
}

fn render<R: Serialize>(cfg: &ExperimentConfig, command: &str, result: &R, table: impl FnOnce() -> Result<String, CliError>) -> Result<String, CliError> {
    match cfg.format() {
        Format::Json => json_text(command, cfg, result),
        Format::Csv => table(),
    }
}

#[derive(Serialize)]
struct RadiusResult {
    norm: String,
    degree: usize,
    radius: pnindex_core::RadiusEstimate<f64>,
    sup_norm: f64,
    ratio: f64,
    zero_check: pnindex_core::ZeroCheck<f64>,
}

pub fn radius(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let norm = cfg.norm_spec()?;
    if norm.dim() != 2 {
        return Err(usage("norm", "the radius command works on planar norms"));
    }
    let p = cfg.polynomial(&norm)?;
    let grid = cfg.grid.unwrap_or(pnindex_core::numrange::DEFAULT_GRID);
    let tol = cfg.tol.unwrap_or(1e-12);
    let zero_tol = cfg.zero_tol.unwrap_or(1e-10);
    let r = radius_grid(&p, &norm, grid, tol);
    let sup = p.sup_norm_grid(&norm, grid, tol);
    let res = RadiusResult {
        norm: norm.label(),
        degree: p.degree(),
        radius: r,
        sup_norm: sup,
        ratio: if sup > 0.0 { r.value / sup } else { 0.0 },
        zero_check: verify_zero(&p, &norm, zero_tol),
    };
    let text = render(cfg, "radius", &res, || {
        emit_table(&[TableRow {
            k: res.degree,
            norm: res.norm.clone(),
            estimate: r.value,
            certified: res.zero_check.certified,
            seed: cfg.seed(),
            witness_angle: Some(r.angle),
        }])
    })?;
    let samples = match cfg.samples {
        Some(_) => {
            let n = grid.max(16);
            let mut rows = Vec::new();
            for j in 0..n {
                let t = std::f64::consts::TAU * j as f64 / n as f64;
                let u = norm.sphere_point(t);
                let pu = p.eval(u);
                for f in norm.norming_set(u).map_err(|e| CliError::Io(e.to_string()))? {
                    rows.push(vec![real(t), real(u.x), real(u.y), real(f.dot(pu))]);
                }
            }
            Some(csv_text(&["angle", "x", "y", "pairing"], &rows)?)
        }
        None => None,
    };
    Ok(Outcome {
        text,
        samples,
        passed: true,
    })
}

fn row(e: &IndexEstimate<f64>, norm: &NormSpec<f64>, certified: bool) -> TableRow {
    TableRow {
        k: e.k,
        norm: norm.label(),
        estimate: e.value,
        certified,
        seed: e.seed,
        witness_angle: None,
    }
}

fn certified_zero(e: &IndexEstimate<f64>, norm: &NormSpec<f64>) -> bool {
    e.value <= ZERO_THRESHOLD && verify_zero(&e.best, norm, ZERO_THRESHOLD).certified
}

#[derive(Serialize)]
struct IndexRow<'a> {
    estimate: &'a IndexEstimate<f64>,
    certified_zero: bool,
    label: &'static str,
}

fn label(certified: bool) -> &'static str {
    if certified {
        "certified zero"
    } else {
        "upper bound only"
    }
}

pub fn index(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let norm = cfg.norm_spec()?;
    let b = budget(cfg)?;
    let seed = cfg.seed();
    if let Some(kmax) = cfg.kmax {
        let rep = monotonicity_report(&norm, kmax, b, seed).map_err(|e| usage("kmax", e))?;
        let cert: Vec<bool> = rep.estimates.iter().map(|e| certified_zero(e, &norm)).collect();
        #[derive(Serialize)]
        struct Sweep<'a> {
            norm: String,
            rows: Vec<IndexRow<'a>>,
            violations: &'a [usize],
            tolerance: f64,
            monotone: bool,
        }
        let res = Sweep {
            norm: norm.label(),
            rows: rep
                .estimates
                .iter()
                .zip(&cert)
                .map(|(e, &c)| IndexRow {
                    estimate: e,
                    certified_zero: c,
                    label: label(c),
                })
                .collect(),
            violations: &rep.violations,
            tolerance: rep.tolerance,
            monotone: rep.is_monotone(),
        };
        let text = render(cfg, "index", &res, || {
            let rows: Vec<TableRow> = rep.estimates.iter().zip(&cert).map(|(e, &c)| row(e, &norm, c)).collect();
            emit_table(&rows)
        })?;
        return Ok(Outcome::ok(text));
    }
    let k = cfg.k.ok_or_else(|| usage("k", "is required (or give kmax for a sweep)"))?;
    let est = estimate_index(&norm, k, b, seed).map_err(|e| usage("k", e))?;
    let c = certified_zero(&est, &norm);
    let res = IndexRow {
        estimate: &est,
        certified_zero: c,
        label: label(c),
    };
    let text = render(cfg, "index", &res, || emit_table(&[row(&est, &norm, c)]))?;
    Ok(Outcome::ok(text))
}

pub fn min_degree(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let norm = cfg.norm_spec()?;
    let b = budget(cfg)?;
    let kmax = cfg.kmax.unwrap_or(5);
    let zd = min_zero_degree(&norm, kmax, b, cfg.seed()).map_err(|e| usage("kmax", e))?;
    let text = render(cfg, "min-degree", &zd, || {
        let rows: Vec<TableRow> = zd
            .per_k
            .iter()
            .map(|e| row(e, &norm, Some(e.k) == zd.k0))
            .collect();
        emit_table(&rows)
    })?;
    Ok(Outcome::ok(text))
}

#[derive(Serialize)]
struct ConvexityResult {
    norm: String,
    is_norm_formula: bool,
    midpoint: pnindex_core::ConvexityReport<f64>,
    hessian: Option<pnindex_core::ConvexityReport<f64>>,
    hessian_skipped: Option<String>,
    profile_max_error: Option<f64>,
    profile_min_convexity: Option<f64>,
}

/// Sample points of the log-convexity profile for the families that have one.
pub fn profile_grid(kind: &NormKind<f64>, n: usize) -> Option<Vec<f64>> {
    let n = n.max(2);
    match kind {
        NormKind::GeomMean { .. } => Some((0..n).map(|i| i as f64 / (n - 1) as f64).collect()),
        NormKind::AsymA { .. } => Some((0..n).map(|i| -8.0 + 16.0 * i as f64 / (n - 1) as f64).collect()),
        _ => None,
    }
}

pub fn convexity(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let norm = cfg.norm_spec()?;
    if norm.dim() != 2 {
        return Err(usage("norm", "convexity checks work on planar norms"));
    }
    let grid = cfg.grid.unwrap_or(512);
    let midpoint = midpoint_test(&norm, cfg.pairs.unwrap_or(4000), cfg.seed()).map_err(|e| usage("pairs", e))?;
    let (hessian, hessian_skipped) = match hessian_grid(&norm, grid) {
        Ok(h) => (Some(h), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let profile = match profile_grid(norm.kind(), grid) {
        Some(ts) => Some(log_convexity_profile(&norm, &ts).map_err(|e| usage("norm", e))?),
        None => None,
    };
    let res = ConvexityResult {
        norm: norm.label(),
        is_norm_formula: norm.is_norm(),
        midpoint,
        hessian,
        hessian_skipped,
        profile_max_error: profile.as_ref().map(|p| p.max_error),
        profile_min_convexity: profile.as_ref().map(|p| p.min_convexity),
    };
    let text = render(cfg, "convexity", &res, || {
        let mut rows = vec![report_row("midpoint", &res.midpoint)];
        if let Some(h) = &res.hessian {
            rows.push(report_row("hessian", h));
        }
        csv_text(&["test", "verdict", "grid", "min_hessian_eig", "witness_margin"], &rows)
    })?;
    let samples = match (&cfg.samples, &profile) {
        (Some(_), Some(p)) => {
            let rows: Vec<Vec<String>> = p
                .rows
                .iter()
                .map(|r| {
                    vec![
                        real(r.t),
                        real(r.phi1),
                        real(r.phi2),
                        real(r.convexity),
                        real(r.fd_phi1),
                        real(r.fd_phi2),
                    ]
                })
                .collect();
            Some(csv_text(&["t", "phi1", "phi2", "phi2_plus_phi1_sq", "fd_phi1", "fd_phi2"], &rows)?)
        }
        (Some(_), None) => return Err(usage("samples", "profiles exist only for geom-mean and asym-a norms")),
        _ => None,
    };
    Ok(Outcome {
        text,
        samples,
        passed: true,
    })
}

fn report_row(name: &str, r: &pnindex_core::ConvexityReport<f64>) -> Vec<String> {
    let verdict = match r.verdict {
        pnindex_core::Verdict::CertifiedConvexOnGrid => "certified-convex-on-grid",
        pnindex_core::Verdict::ViolationFound => "violation-found",
    };
    vec![
        name.to_string(),
        verdict.to_string(),
        r.grid.to_string(),
        opt_real(r.min_hessian_eig),
        opt_real(r.witness.map(|w| w.margin)),
    ]
}

pub fn beta(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let beta = cfg.beta.ok_or_else(|| usage("beta", "is required"))?;
    let c = beta_classify(beta).map_err(|e| usage("beta", e))?;
    let text = render(cfg, "beta-classify", &c, || {
        let w = |f: fn(&pnindex_core::Witness<f64>) -> Vec2<f64>| c.witness.map(|w| f(&w));
        let coords = |v: Option<Vec2<f64>>| (opt_real(v.map(|v| v.x)), opt_real(v.map(|v| v.y)));
        let (ux, uy) = coords(w(|w| w.u));
        let (vx, vy) = coords(w(|w| w.v));
        let route = serde_json::to_value(c.route)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default();
        csv_text(
            &["beta", "is_norm", "route", "g", "identity_error", "witness_margin", "ux", "uy", "vx", "vy"],
            &[vec![
                real(c.beta),
                c.is_norm.to_string(),
                route,
                opt_real(c.g),
                real(c.identity_error),
                opt_real(c.witness.map(|w| w.margin)),
                ux,
                uy,
                vx,
                vy,
            ]],
        )
    })?;
    Ok(Outcome::ok(text))
}

pub fn recipe(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let name = cfg
        .recipe
        .as_deref()
        .ok_or_else(|| usage("recipe", format!("a name is required (one of {})", recipes::names().join(", "))))?;
    if name == "list" {
        let rows: Vec<Vec<String>> = recipes::RECIPES
            .iter()
            .map(|r| vec![r.name.to_string(), r.claim.to_string()])
            .collect();
        return Ok(Outcome::ok(csv_text(&["recipe", "claim"], &rows)?));
    }
    let rec = recipes::find(name)?;
    let report = (rec.run)(cfg)?;
    let passed = report.passed();
    let text = render(cfg, "recipe", &report, || {
        let rows: Vec<Vec<String>> = report
            .checks
            .iter()
            .map(|c| {
                vec![
                    report.recipe.to_string(),
                    c.name.clone(),
                    real(c.value),
                    c.limit.clone(),
                    c.passed.to_string(),
                ]
            })
            .collect();
        csv_text(&["recipe", "check", "value", "limit", "passed"], &rows)
    })?;
    Ok(Outcome {
        text,
        samples: None,
        passed,
    })
}
