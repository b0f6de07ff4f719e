use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, ValueEnum};
use pnindex_core::{
    example8_poly, example9_poly, lp_zero_poly, quartic_generator, tangent_poly, NormKind, NormSpec,
    Vec2, VectorHomoPoly,
};
use serde::{Deserialize, Deserializer, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Radius,
    Index,
    MinDegree,
    Convexity,
    BetaClassify,
    Recipe,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Radius => "radius",
            Command::Index => "index",
            Command::MinDegree => "min-degree",
            Command::Convexity => "convexity",
            Command::BetaClassify => "beta-classify",
            Command::Recipe => "recipe",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// A norm given by variant name (parameters from the other flags) or as a
/// full `{"variant": .., "params": {..}}` object.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum NormArg {
    Name(String),
    Spec(NormKind<f64>),
}

impl<'de> Deserialize<'de> for NormArg {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::String(s) => Ok(NormArg::Name(s)),
            other => NormKind::deserialize(other)
                .map(NormArg::Spec)
                .map_err(serde::de::Error::custom),
        }
    }
}

impl FromStr for NormArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s.trim_start().starts_with('{') {
            serde_json::from_str::<NormKind<f64>>(s)
                .map(NormArg::Spec)
                .map_err(|e| e.to_string())
        } else {
            Ok(NormArg::Name(s.to_string()))
        }
    }
}

/// A named constructor or explicit `{"degree", "p1", "p2"}` coefficients.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum PolyArg {
    Name(String),
    Coeffs(VectorHomoPoly<f64>),
}

impl<'de> Deserialize<'de> for PolyArg {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::String(s) => Ok(PolyArg::Name(s)),
            other => VectorHomoPoly::deserialize(other)
                .map(PolyArg::Coeffs)
                .map_err(serde::de::Error::custom),
        }
    }
}

impl FromStr for PolyArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s.trim_start().starts_with('{') {
            serde_json::from_str::<VectorHomoPoly<f64>>(s)
                .map(PolyArg::Coeffs)
                .map_err(|e| e.to_string())
        } else {
            Ok(PolyArg::Name(s.to_string()))
        }
    }
}

pub const POLY_CONSTRUCTORS: [&str; 5] = ["lp-zero", "example8", "example9", "tangent", "identity"];
pub const NORM_VARIANTS: [&str; 8] = [
    "lp",
    "l1",
    "linf",
    "beta-quartic",
    "asym-a",
    "interp-sym",
    "geom-mean",
    "eps-geom-mean",
];

/// Every experiment setting. The JSON config file uses the same keys as the
/// long flags (with `_` for `-`); flags override the file.
#[derive(Debug, Clone, Default, PartialEq, Parser, Serialize, Deserialize)]
#[command(name = "pnindex", version, about = "Numerical radius and polynomial numerical index experiments")]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    #[arg(value_enum)]
    pub command: Option<Command>,
    /// Recipe name for the `recipe` command (`list` prints them all).
    pub recipe: Option<String>,
    /// JSON config file.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Norm variant name or a JSON norm object.
    #[arg(long)]
    pub norm: Option<NormArg>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub p0: Option<f64>,
    #[arg(long)]
    pub p1: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,

    /// Named constructor (lp-zero, example8, example9, tangent, identity) or
    /// JSON coefficients.
    #[arg(long = "poly")]
    pub polynomial: Option<PolyArg>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub kmax: Option<usize>,
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub zero_tol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub starts: Option<usize>,
    #[arg(long)]
    pub iterations: Option<usize>,
    #[arg(long)]
    pub pairs: Option<usize>,

    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Plot-ready CSV of range samples (radius) or log-convexity profile
    /// (convexity).
    #[arg(long)]
    pub samples: Option<PathBuf>,
}

macro_rules! overlay {
    ($base:ident, $top:ident; $($f:ident),* $(,)?) => {
        ExperimentConfig { $($f: $top.$f.or($base.$f),)* }
    };
}

impl ExperimentConfig {
    /// Fields set in `top` win.
    pub fn overlay(self, top: Self) -> Self {
        let base = self;
        overlay!(base, top; command, recipe, config, norm, p, d, beta, a, m, theta, p0, p1, eps,
            polynomial, k, kmax, grid, tol, zero_tol, seed, starts, iterations, pairs, out, format,
            samples)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let positive = [("tol", self.tol), ("zero_tol", self.zero_tol)];
        for (name, v) in positive {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(usage(name, format!("must be positive, got {v}")));
                }
            }
        }
        let counts = [
            ("k", self.k),
            ("kmax", self.kmax),
            ("grid", self.grid),
            ("starts", self.starts),
            ("iterations", self.iterations),
            ("pairs", self.pairs),
        ];
        for (name, v) in counts {
            if v == Some(0) {
                return Err(usage(name, "must be positive"));
            }
        }
        if let Some(PolyArg::Name(n)) = &self.polynomial {
            if !POLY_CONSTRUCTORS.contains(&n.as_str()) {
                return Err(usage(
                    "polynomial",
                    format!("unknown constructor `{n}` (expected one of {})", POLY_CONSTRUCTORS.join(", ")),
                ));
            }
        }
        if let Some(NormArg::Name(n)) = &self.norm {
            if !NORM_VARIANTS.contains(&canonical(n).as_str()) {
                return Err(unknown_norm(n));
            }
        }
        Ok(())
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    pub fn norm_spec(&self) -> Result<NormSpec<f64>, CliError> {
        let arg = self.norm.as_ref().ok_or_else(|| usage("norm", "is required"))?;
        let spec = match arg {
            NormArg::Spec(kind) => NormSpec::new(*kind),
            NormArg::Name(name) => {
                let need = |field: &'static str, v: Option<f64>| {
                    v.ok_or_else(|| usage(field, format!("is required by norm `{name}`")))
                };
                match canonical(name).as_str() {
                    "lp" => NormSpec::lp_dim(need("p", self.p)?, self.d.unwrap_or(2)),
                    "l1" => Ok(NormSpec::l1()),
                    "linf" => Ok(NormSpec::linf()),
                    "beta-quartic" => NormSpec::beta_quartic(need("beta", self.beta)?),
                    "asym-a" => NormSpec::asym_a(need("a", self.a)?),
                    "interp-sym" => NormSpec::interp_sym(
                        self.m.ok_or_else(|| usage("m", format!("is required by norm `{name}`")))?,
                        need("theta", self.theta)?,
                    ),
                    "geom-mean" => NormSpec::geom_mean(
                        need("p0", self.p0)?,
                        need("p1", self.p1)?,
                        need("theta", self.theta)?,
                    ),
                    "eps-geom-mean" => NormSpec::eps_geom_mean(need("theta", self.theta)?, need("eps", self.eps)?),
                    _ => return Err(unknown_norm(name)),
                }
            }
        };
        spec.map_err(|e| usage("norm", e.to_string()))
    }

    /// The polynomial map; constructor parameters default to those of the
    /// norm when it has them.
    pub fn polynomial(&self, norm: &NormSpec<f64>) -> Result<VectorHomoPoly<f64>, CliError> {
        let arg = self
            .polynomial
            .as_ref()
            .ok_or_else(|| usage("polynomial", "is required"))?;
        let name = match arg {
            PolyArg::Coeffs(p) => return Ok(p.clone()),
            PolyArg::Name(n) => n.as_str(),
        };
        let kind = *norm.kind();
        let missing = |field: &'static str| usage(field, format!("is required by constructor `{name}`"));
        let built = match name {
            "lp-zero" => {
                let p = self
                    .p
                    .or(match kind {
                        NormKind::Lp { p, .. } => Some(p),
                        _ => None,
                    })
                    .ok_or_else(|| missing("p"))?;
                lp_zero_poly(p)
            }
            "example8" => {
                let a = self
                    .a
                    .or(match kind {
                        NormKind::AsymA { a } => Some(a),
                        _ => None,
                    })
                    .ok_or_else(|| missing("a"))?;
                example8_poly(a)
            }
            "example9" => {
                let (m, theta) = match kind {
                    NormKind::InterpSym { m, theta } => (self.m.unwrap_or(m), self.theta.unwrap_or(theta)),
                    _ => (
                        self.m.ok_or_else(|| missing("m"))?,
                        self.theta.ok_or_else(|| missing("theta"))?,
                    ),
                };
                example9_poly(m, theta)
            }
            "tangent" => {
                let beta = self
                    .beta
                    .or(match kind {
                        NormKind::BetaQuartic { beta } => Some(beta),
                        _ => None,
                    })
                    .ok_or_else(|| missing("beta"))?;
                tangent_poly(&quartic_generator(beta), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0))
            }
            "identity" => Ok(VectorHomoPoly::identity()),
            other => {
                return Err(usage(
                    "polynomial",
                    format!("unknown constructor `{other}` (expected one of {})", POLY_CONSTRUCTORS.join(", ")),
                ))
            }
        };
        built.map_err(|e| usage("polynomial", e.to_string()))
    }
}

fn canonical(name: &str) -> String {
    name.trim().to_ascii_lowercase().replace('_', "-")
}

fn unknown_norm(name: &str) -> CliError {
    usage(
        "norm",
        format!("unknown variant `{name}` (expected one of {})", NORM_VARIANTS.join(", ")),
    )
}

pub fn usage(field: &str, msg: impl fmt::Display) -> CliError {
    CliError::Usage(format!("{field}: {msg}"))
}
