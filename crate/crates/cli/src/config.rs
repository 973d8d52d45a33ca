//! TOML run configuration.
//!
//! ```toml
//! schema_version = 1
//!
//! [params]
//! omega0 = 0.5
//! omega1 = -0.7
//! n_th = 1000.0
//! quality_factor = 1e6   # sets gamma_m = omega_m / Q
//!
//! [sweep]
//! resonance_lock = true
//! outputs = ["n_ss", "var_x", "omega_ab"]
//! [[sweep.axes]]
//! name = "omega0"
//! min = 0.0175
//! max = 1.4
//! count = 81
//! ```

use std::path::Path;

use nvsqueeze::SystemParams;
use serde::{Deserialize, Serialize};

use crate::sweep::{Axis, Output, SweepSpec};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed config: {0}")]
    Parse(String),
    #[error("unsupported schema_version {0} (expected {SCHEMA_VERSION})")]
    Schema(u32),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSection {
    pub omega_m: Option<f64>,
    pub delta: Option<f64>,
    pub omega0: Option<f64>,
    pub omega1: Option<f64>,
    pub g: Option<f64>,
    pub phi: Option<f64>,
    pub gamma_m: Option<f64>,
    pub quality_factor: Option<f64>,
    pub n_th: Option<f64>,
    pub gamma0: Option<f64>,
    pub gamma1: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSection {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

fn yes() -> bool {
    true
}
fn default_stride() -> usize {
    10
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub axes: Vec<AxisSection>,
    #[serde(default = "yes")]
    pub resonance_lock: bool,
    pub outputs: Vec<String>,
    #[serde(default)]
    pub two_mode: bool,
    #[serde(default)]
    pub validate_with_oracle: bool,
    #[serde(default = "default_stride")]
    pub oracle_stride: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub schema_version: u32,
    #[serde(default)]
    pub params: ParamsSection,
    pub sweep: Option<SweepSection>,
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: Config = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(ConfigError::Schema(cfg.schema_version));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        Self::from_toml(&text)
    }

    /// Baseline parameters overridden by the `[params]` table. Not validated.
    pub fn params(&self) -> Result<SystemParams, ConfigError> {
        let s = &self.params;
        let mut p = SystemParams::baseline();
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(v) = s.$f { p.$f = v; } )* };
        }
        set!(omega_m, delta, omega0, omega1, g, phi, gamma_m, n_th, gamma0, gamma1);
        if let Some(q) = s.quality_factor {
            if s.gamma_m.is_some() {
                return Err(ConfigError::Invalid("give either gamma_m or quality_factor, not both".into()));
            }
            if !(q > 0.0) {
                return Err(ConfigError::Invalid("quality_factor must be > 0".into()));
            }
            p.gamma_m = p.omega_m / q;
        }
        // Γ₁ follows Γ₀ unless set on its own
        if s.gamma0.is_some() && s.gamma1.is_none() {
            p.gamma1 = p.gamma0;
        }
        Ok(p)
    }

    pub fn sweep_spec(&self) -> Result<SweepSpec, ConfigError> {
        let sw = self.sweep.as_ref().ok_or_else(|| ConfigError::Invalid("missing [sweep] table".into()))?;
        let outputs = sw
            .outputs
            .iter()
            .map(|o| Output::parse(o).ok_or_else(|| ConfigError::Invalid(format!("unknown output '{o}'"))))
            .collect::<Result<Vec<_>, _>>()?;
        let spec = SweepSpec {
            base: self.params()?,
            axes: sw.axes.iter().map(|a| Axis { name: a.name.clone(), min: a.min, max: a.max, count: a.count }).collect(),
            resonance_lock: sw.resonance_lock,
            outputs,
            two_mode: sw.two_mode,
            validate_with_oracle: sw.validate_with_oracle,
            oracle_stride: sw.oracle_stride,
        };
        spec.validate().map_err(ConfigError::Invalid)?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = r#"
schema_version = 1
[params]
omega1 = -0.7
quality_factor = 1e6
[sweep]
outputs = ["n_ss", "s1", "stability"]
[[sweep.axes]]
name = "omega0"
min = 0.1
max = 1.4
count = 5
"#;

    #[test]
    fn parses_and_builds_spec() {
        let c = Config::from_toml(GOOD).unwrap();
        let p = c.params().unwrap();
        assert_eq!(p.omega1, -0.7);
        assert!((p.gamma_m - 1e-6).abs() < 1e-20);
        let s = c.sweep_spec().unwrap();
        assert!(s.resonance_lock);
        assert_eq!(s.rows(), 5);
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(matches!(Config::from_toml("schema_version = 2"), Err(ConfigError::Schema(2))));
        assert!(matches!(Config::from_toml("schema_version = 1\n[params]\nbogus = 1"), Err(ConfigError::Parse(_))));
        let c = Config::from_toml(&GOOD.replace("\"n_ss\"", "\"nope\"")).unwrap();
        assert!(matches!(c.sweep_spec(), Err(ConfigError::Invalid(_))));
        let c = Config::from_toml(&GOOD.replace("count = 5", "count = 1")).unwrap();
        assert!(matches!(c.sweep_spec(), Err(ConfigError::Invalid(_))));
        let c = Config::from_toml(&GOOD.replace("quality_factor = 1e6", "quality_factor = 1e6\ngamma_m = 1e-6")).unwrap();
        assert!(c.params().is_err());
    }
}
