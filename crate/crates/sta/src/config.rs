//! Run configuration.
//!
//! A single JSON document with optional `atom`, `oscillator` and `check`
//! sections; every key has a default, and unknown keys are rejected.
//! Frequencies are plain (non-angular) values and get multiplied by 2π:
//!
//! | key | unit | internal |
//! |-----|------|----------|
//! | `atom.gamma_mhz`, `atom.omega0_mhz` | MHz | rad/ns (× 2π × 10⁻³) |
//! | `atom.a_ghz2`, `atom.b_ghz2` | GHz² | 1/ns² (× (2π)²) |
//! | `atom.dt_ns` | ns | ns |
//! | `oscillator.omega0_hz`, `oscillator.omegaf_hz` | Hz | rad/s (× 2π) |
//! | `oscillator.tf_ms`, `oscillator.dt_ms` | ms | s |
//! | `oscillator.q0_um` | μm | m |
//! | `oscillator.v0_um_per_ms` | μm/ms | m/s |

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sta_core::ermakov::ExpansionSpec;
use sta_core::pulse::{chirped_gaussian, ChirpedGaussianParams, PulseSchedule};

use crate::ShellError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Scenario {
    Rap,
    RapCd,
    RapCdApprox,
    CdTerms,
    Oscillator,
    Check,
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scenario::Rap => "rap",
            Scenario::RapCd => "rap-cd",
            Scenario::RapCdApprox => "rap-cd-approx",
            Scenario::CdTerms => "cd-terms",
            Scenario::Oscillator => "oscillator",
            Scenario::Check => "check",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AtomConfig {
    pub gamma_mhz: f64,
    pub omega0_mhz: f64,
    pub a_ghz2: f64,
    pub b_ghz2: f64,
    pub window_factor: f64,
    pub dt_ns: f64,
}

impl Default for AtomConfig {
    fn default() -> Self {
        Self {
            gamma_mhz: 2.0,
            omega0_mhz: 100.0,
            a_ghz2: 0.01,
            b_ghz2: 0.00025,
            window_factor: sta_core::pulse::DEFAULT_WINDOW_FACTOR,
            dt_ns: 1e-3,
        }
    }
}

impl AtomConfig {
    pub fn params(&self) -> ChirpedGaussianParams {
        let two_pi = 2.0 * PI;
        ChirpedGaussianParams {
            omega0_rabi: two_pi * self.omega0_mhz * 1e-3,
            a_width: two_pi * two_pi * self.a_ghz2,
            b_chirp: two_pi * two_pi * self.b_ghz2,
            gamma: two_pi * self.gamma_mhz * 1e-3,
        }
    }

    pub fn schedule(&self) -> Result<PulseSchedule, ShellError> {
        self.validate()?;
        Ok(chirped_gaussian(self.params(), self.window_factor)?)
    }

    pub fn validate(&self) -> Result<(), ShellError> {
        require(self.gamma_mhz >= 0.0, "atom.gamma_mhz must be >= 0")?;
        require(self.omega0_mhz >= 0.0, "atom.omega0_mhz must be >= 0")?;
        require(self.a_ghz2 > 0.0, "atom.a_ghz2 must be > 0")?;
        require(self.b_ghz2.is_finite(), "atom.b_ghz2 must be finite")?;
        require(self.window_factor > 0.0, "atom.window_factor must be > 0")?;
        require(self.dt_ns > 0.0, "atom.dt_ns must be > 0")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OscillatorConfig {
    pub omega0_hz: f64,
    pub omegaf_hz: f64,
    pub tf_ms: f64,
    pub mass_kg: f64,
    pub q0_um: f64,
    pub v0_um_per_ms: f64,
    pub dt_ms: f64,
}

impl Default for OscillatorConfig {
    fn default() -> Self {
        Self {
            omega0_hz: 250.0,
            omegaf_hz: 2.5,
            tf_ms: 25.0,
            mass_kg: 1.44e-25,
            q0_um: 1.0,
            v0_um_per_ms: 0.0,
            dt_ms: 0.0125,
        }
    }
}

impl OscillatorConfig {
    pub fn spec(&self) -> Result<ExpansionSpec, ShellError> {
        self.validate()?;
        Ok(ExpansionSpec {
            omega0: 2.0 * PI * self.omega0_hz,
            omegaf: 2.0 * PI * self.omegaf_hz,
            tf: self.tf_ms * 1e-3,
            mass: self.mass_kg,
            q0: self.q0_um * 1e-6,
            v0: self.v0_um_per_ms * 1e-3,
        })
    }

    pub fn validate(&self) -> Result<(), ShellError> {
        require(self.omega0_hz > 0.0, "oscillator.omega0_hz must be > 0")?;
        require(self.omegaf_hz > 0.0, "oscillator.omegaf_hz must be > 0")?;
        require(self.tf_ms > 0.0, "oscillator.tf_ms must be > 0")?;
        require(self.mass_kg > 0.0, "oscillator.mass_kg must be > 0")?;
        require(
            self.q0_um.is_finite() && self.v0_um_per_ms.is_finite(),
            "oscillator initial conditions must be finite",
        )?;
        require(self.dt_ms > 0.0, "oscillator.dt_ms must be > 0")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CheckConfig {
    /// Multiplies every pass threshold; values below 1 tighten the suite.
    pub tolerance_scale: f64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            tolerance_scale: 1.0,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    pub atom: AtomConfig,
    pub oscillator: OscillatorConfig,
    pub check: CheckConfig,
}

impl Params {
    pub fn from_json(text: &str) -> Result<Self, ShellError> {
        let p: Params =
            serde_json::from_str(text).map_err(|e| ShellError::Config(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }

    pub fn from_path(path: &Path) -> Result<Self, ShellError> {
        let text = std::fs::read_to_string(path).map_err(|source| ShellError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), ShellError> {
        self.atom.validate()?;
        self.oscillator.validate()?;
        require(
            self.check.tolerance_scale > 0.0,
            "check.tolerance_scale must be > 0",
        )
    }
}

/// Everything a single `sta` invocation needs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub params: Params,
    pub approx: bool,
}

impl RunConfig {
    pub fn new(scenario: Scenario, params: Params) -> Self {
        Self {
            scenario,
            params,
            approx: scenario == Scenario::RapCdApprox,
        }
    }

    /// Applies `--dt` (in the scenario's native time unit: ns for atomic
    /// scenarios, ms for the oscillator) and `--window-factor`.
    pub fn with_overrides(
        mut self,
        dt: Option<f64>,
        window_factor: Option<f64>,
        approx: bool,
    ) -> Result<Self, ShellError> {
        if let Some(dt) = dt {
            match self.scenario {
                Scenario::Oscillator => self.params.oscillator.dt_ms = dt,
                _ => self.params.atom.dt_ns = dt,
            }
        }
        if let Some(w) = window_factor {
            self.params.atom.window_factor = w;
        }
        self.approx |= approx;
        self.params.validate()?;
        Ok(self)
    }
}

fn require(ok: bool, what: &str) -> Result<(), ShellError> {
    if ok {
        Ok(())
    } else {
        Err(ShellError::Config(what.to_owned()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_defaults() {
        let p = Params::from_json("{}").unwrap();
        assert_eq!(p, Params::default());
        let reference = ChirpedGaussianParams::reference();
        let got = p.atom.params();
        assert!((got.gamma - reference.gamma).abs() < 1e-15);
        assert!((got.omega0_rabi - reference.omega0_rabi).abs() < 1e-15);
        assert!((got.a_width - reference.a_width).abs() < 1e-15);
        assert!((got.b_chirp - reference.b_chirp).abs() < 1e-15);
        let spec = p.oscillator.spec().unwrap();
        let r = ExpansionSpec::reference();
        assert!((spec.omega0 - r.omega0).abs() < 1e-12);
        assert!((spec.q0 - r.q0).abs() < 1e-20);
    }

    #[test]
    fn unknown_key_is_named() {
        let err = Params::from_json(r#"{"atom": {"gama_mhz": 3.0}}"#).unwrap_err();
        assert!(err.to_string().contains("gama_mhz"), "{err}");
        let err = Params::from_json(r#"{"atoms": {}}"#).unwrap_err();
        assert!(err.to_string().contains("atoms"));
    }

    #[test]
    fn negative_values_rejected() {
        assert!(Params::from_json(r#"{"atom": {"gamma_mhz": -1}}"#).is_err());
        assert!(Params::from_json(r#"{"oscillator": {"tf_ms": 0}}"#).is_err());
        let run = RunConfig::new(Scenario::Rap, Params::default());
        assert!(run.with_overrides(Some(-1e-3), None, false).is_err());
    }

    #[test]
    fn dt_override_targets_scenario_unit() {
        let run = RunConfig::new(Scenario::Oscillator, Params::default())
            .with_overrides(Some(0.5), None, false)
            .unwrap();
        assert_eq!(run.params.oscillator.dt_ms, 0.5);
        assert_eq!(run.params.atom.dt_ns, 1e-3);
        assert!(RunConfig::new(Scenario::RapCdApprox, Params::default()).approx);
    }
}
