//! TOML run configuration.
//!
//! ```toml
//! [model]
//! type = "power_law"        # or "ideal_gas"
//! A0 = 1.0
//! m = -0.6666666666666666
//! rho_range = [1e-6, 1e5]
//!
//! [family]
//! lambda = 1.0
//! alpha0 = 1.0
//! alpha2 = -2.0
//! t0 = 1.0
//! x0 = 0.0
//!
//! [run]
//! times = [0.0, 2.7, 3.75]
//! dt = 0.01
//!
//! [output]
//! dir = "out"
//! formats = ["csv", "svg"]
//! ```
//!
//! Every section and key is optional; unknown keys are rejected.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use gasfold::thermo::{homentropic_reduce, ideal_gas_model, power_law_model, IdealGasParams};
use gasfold::{Domain, Family, Model};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub family: FamilyConfig,
    pub run: RunParams,
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    IdealGas,
    #[default]
    PowerLaw,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelConfig {
    #[serde(rename = "type")]
    pub kind: ModelKind,
    pub n: Option<f64>,
    #[serde(rename = "R")]
    pub r: Option<f64>,
    pub s0: Option<f64>,
    #[serde(rename = "A0")]
    pub a0: Option<f64>,
    pub m: Option<f64>,
    pub rho_range: [f64; 2],
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            kind: ModelKind::PowerLaw,
            n: None,
            r: None,
            s0: None,
            a0: None,
            m: None,
            rho_range: [1e-6, 1e5],
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FamilyConfig {
    pub lambda: f64,
    pub alpha0: f64,
    pub alpha2: f64,
    pub t0: f64,
    pub x0: f64,
}

impl Default for FamilyConfig {
    fn default() -> Self {
        Self {
            lambda: 1.0,
            alpha0: 1.0,
            alpha2: -2.0,
            t0: 1.0,
            x0: 0.0,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunParams {
    /// Profile times.
    pub times: Vec<f64>,
    pub profile_points: usize,
    /// Smallest density sampled on a profile.
    pub profile_rho_min: f64,
    /// x window of the profile plot; fitted to the dense core when absent.
    pub profile_x_range: Option<[f64; 2]>,
    pub thermo_points: usize,
    pub caustic_rho_range: [f64; 2],
    pub caustic_points: usize,
    /// Fronts are continued over `[t_cusp, t_cusp + shock_span]`.
    pub shock_span: f64,
    pub dt: f64,
    /// Added to `m` in the model used for the solution-property check only.
    pub corrupt_m_offset: f64,
}

impl Default for RunParams {
    fn default() -> Self {
        Self {
            times: vec![0.0, 2.7, 3.75],
            profile_points: 2000,
            profile_rho_min: 1e-3,
            profile_x_range: None,
            thermo_points: 41,
            caustic_rho_range: [0.65, 12.0],
            caustic_points: 400,
            shock_span: 3.0,
            dt: 0.01,
            corrupt_m_offset: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            "svg" => Ok(Self::Svg),
            other => Err(format!(
                "unknown format `{other}` (expected csv, json or svg)"
            )),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Csv => "csv",
            Self::Json => "json",
            Self::Svg => "svg",
        })
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub formats: Vec<Format>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
            formats: vec![Format::Csv, Format::Svg],
        }
    }
}

impl OutputConfig {
    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }
}

fn is_blank(text: &str) -> bool {
    text.lines()
        .map(str::trim)
        .all(|l| l.is_empty() || l.starts_with('#'))
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::ReadConfig {
            path: path.to_owned(),
            source,
        })?;
        if is_blank(&text) {
            return Err(CliError::EmptyConfig(path.to_owned()));
        }
        let cfg = Self::parse(&text).map_err(|e| match e {
            CliError::Parse { message, .. } => CliError::Parse {
                path: path.to_owned(),
                message,
            },
            other => other,
        })?;
        Ok(cfg)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: Self = toml::from_str(text).map_err(|e| CliError::Parse {
            path: PathBuf::new(),
            message: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let finite = |key: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(CliError::invalid(key, format!("{v} is not finite")))
            }
        };
        let range = |key: &str, r: [f64; 2]| {
            if r[0] > 0.0 && r[0] < r[1] && r[1].is_finite() {
                Ok(())
            } else {
                Err(CliError::invalid(
                    key,
                    format!("expected 0 < min < max, got [{}, {}]", r[0], r[1]),
                ))
            }
        };
        let m = &self.model;
        range("model.rho_range", m.rho_range)?;
        let unused: &[(&str, bool)] = match m.kind {
            ModelKind::PowerLaw => &[
                ("model.n", m.n.is_some()),
                ("model.R", m.r.is_some()),
                ("model.s0", m.s0.is_some()),
            ],
            ModelKind::IdealGas => &[("model.A0", m.a0.is_some()), ("model.m", m.m.is_some())],
        };
        if let Some((key, _)) = unused.iter().find(|(_, set)| *set) {
            return Err(CliError::invalid(
                key,
                format!("not used by model type {:?}", m.kind),
            ));
        }
        for (key, v) in [
            ("model.n", m.n),
            ("model.R", m.r),
            ("model.s0", m.s0),
            ("model.A0", m.a0),
            ("model.m", m.m),
        ] {
            if let Some(v) = v {
                finite(key, v)?;
            }
        }
        let f = &self.family;
        for (key, v) in [
            ("family.lambda", f.lambda),
            ("family.alpha0", f.alpha0),
            ("family.alpha2", f.alpha2),
            ("family.t0", f.t0),
            ("family.x0", f.x0),
        ] {
            finite(key, v)?;
        }
        let r = &self.run;
        for (i, t) in r.times.iter().enumerate() {
            finite(&format!("run.times[{i}]"), *t)?;
        }
        range("run.caustic_rho_range", r.caustic_rho_range)?;
        if let Some([lo, hi]) = r.profile_x_range {
            if !(lo < hi && lo.is_finite() && hi.is_finite()) {
                return Err(CliError::invalid(
                    "run.profile_x_range",
                    "expected min < max",
                ));
            }
        }
        if !(r.profile_rho_min > 0.0 && r.profile_rho_min.is_finite()) {
            return Err(CliError::invalid("run.profile_rho_min", "must be positive"));
        }
        if !(r.dt > 0.0 && r.dt.is_finite()) {
            return Err(CliError::invalid("run.dt", "must be positive"));
        }
        if !(r.shock_span > 0.0 && r.shock_span.is_finite()) {
            return Err(CliError::invalid("run.shock_span", "must be positive"));
        }
        finite("run.corrupt_m_offset", r.corrupt_m_offset)?;
        for (key, n) in [
            ("run.profile_points", r.profile_points),
            ("run.thermo_points", r.thermo_points),
            ("run.caustic_points", r.caustic_points),
        ] {
            if n < 2 {
                return Err(CliError::invalid(key, "needs at least 2 points"));
            }
        }
        Ok(())
    }

    pub fn domain(&self) -> Result<Domain, CliError> {
        let [lo, hi] = self.model.rho_range;
        Ok(Domain::new(lo, hi)?)
    }

    /// The homentropic model described by `[model]`.
    pub fn homentropic(&self) -> Result<Model, CliError> {
        self.homentropic_with_offset(0.0)
    }

    /// Same model with `m` shifted by `dm`; ideal gases are first reduced to
    /// their power law.
    pub fn homentropic_with_offset(&self, dm: f64) -> Result<Model, CliError> {
        let m = &self.model;
        let domain = self.domain()?;
        let hm = match m.kind {
            ModelKind::PowerLaw => {
                power_law_model(m.a0.unwrap_or(1.0), m.m.unwrap_or(-2.0 / 3.0), domain)?
            }
            ModelKind::IdealGas => {
                let params = IdealGasParams::new(
                    m.n.unwrap_or(3.0),
                    m.r.unwrap_or(1.0),
                    m.s0.unwrap_or(0.0),
                );
                homentropic_reduce(&ideal_gas_model(params)?, params.s0, domain)?
            }
        };
        if dm == 0.0 {
            return Ok(hm);
        }
        let (a0, exp) = hm.power_law().ok_or_else(|| {
            CliError::invalid("run.corrupt_m_offset", "model has no power-law form")
        })?;
        Ok(power_law_model(a0, exp + dm, domain)?)
    }

    pub fn thermodynamic(
        &self,
    ) -> Result<Option<gasfold::thermo::ThermodynamicModel<f64>>, CliError> {
        match self.model.kind {
            ModelKind::PowerLaw => Ok(None),
            ModelKind::IdealGas => {
                let m = &self.model;
                let params = IdealGasParams::new(
                    m.n.unwrap_or(3.0),
                    m.r.unwrap_or(1.0),
                    m.s0.unwrap_or(0.0),
                );
                Ok(Some(ideal_gas_model(params)?))
            }
        }
    }

    pub fn family(&self) -> Result<Family, CliError> {
        let f = &self.family;
        if f.lambda == 0.0 {
            return Err(CliError::invalid("family.lambda", "must be nonzero"));
        }
        Ok(Family::new(
            f.lambda,
            f.alpha0,
            f.alpha2,
            f.t0,
            f.x0,
            self.homentropic()?,
        ))
    }
}
