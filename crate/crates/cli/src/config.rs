//! JSON run configuration. Every section is optional at parse time; each
//! subcommand asks for the sections it needs.

use crate::error::CliError;
use biclab_core::bic::{BicInputs, DEFAULT_TOL_IM};
use biclab_core::dressing::DressingInput;
use biclab_core::microscopic::{CouplingModel, LevelScheme, VicConvention};
use biclab_core::oracle::GridSpec;
use biclab_core::params::{default_g12, validate, DimensionlessParams, ParamsSpec, ValidationMode};
use biclab_core::quadrature::QuadSpec;
use biclab_core::spectrum::{Baseline, Channel, SweepOptions};
use serde::Deserialize;
use std::path::Path;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub params: Option<serde_json::Value>,
    #[serde(default)]
    pub microscopic: Option<MicroscopicSection>,
    #[serde(default)]
    pub grid: Option<GridSection>,
    #[serde(default)]
    pub sweep: Option<SweepSection>,
    #[serde(default)]
    pub dressing: Option<DressingInput>,
    #[serde(default)]
    pub discretization: Option<GridSpec>,
    #[serde(default)]
    pub channel: Channel,
    #[serde(default)]
    pub validation: ValidationMode,
    /// Accepted for reproducibility bookkeeping; no subcommand draws random
    /// numbers.
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_tol_im")]
    pub tol_im: f64,
}

fn default_tol_im() -> f64 {
    DEFAULT_TOL_IM
}

impl Default for Config {
    fn default() -> Self {
        serde_json::from_str("{}").expect("empty config parses")
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MicroscopicSection {
    pub model: CouplingModel,
    pub levels: LevelScheme,
    #[serde(default)]
    pub vic_convention: VicConvention,
    #[serde(default)]
    pub quad: QuadSpec,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub e_min: f64,
    pub e_max: f64,
    pub n_points: usize,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EtaRange {
    pub start: f64,
    pub stop: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    #[serde(default)]
    pub eta_list: Option<Vec<f64>>,
    #[serde(default)]
    pub eta_range: Option<EtaRange>,
    #[serde(default = "default_halfwidths")]
    pub window_halfwidths: f64,
    #[serde(default = "default_baseline")]
    pub baseline: Baseline,
    #[serde(default)]
    pub window: Option<(f64, f64)>,
}

fn default_halfwidths() -> f64 {
    5.0
}

fn default_baseline() -> Baseline {
    Baseline::Linear
}

impl SweepSection {
    pub fn etas(&self) -> Result<Vec<f64>, CliError> {
        match (&self.eta_list, &self.eta_range) {
            (Some(list), None) if !list.is_empty() => Ok(list.clone()),
            (Some(_), None) => Err(CliError::Config("sweep.eta_list is empty".into())),
            (None, Some(r)) => {
                if r.n == 0 {
                    return Err(CliError::Config("sweep.eta_range.n must be positive".into()));
                }
                if r.n == 1 {
                    return Ok(vec![r.start]);
                }
                let last = (r.n - 1) as f64;
                Ok((0..r.n)
                    .map(|k| if k + 1 == r.n { r.stop } else { r.start + (r.stop - r.start) * k as f64 / last })
                    .collect())
            }
            (Some(_), Some(_)) => Err(CliError::Config("sweep: give eta_list or eta_range, not both".into())),
            (None, None) => Err(CliError::Config("sweep: one of eta_list or eta_range is required".into())),
        }
    }

    pub fn options(&self, channel: Channel) -> SweepOptions {
        SweepOptions {
            channel,
            window_halfwidths: self.window_halfwidths,
            baseline: self.baseline,
            window: self.window,
        }
    }
}

/// `params` for `solve`: the detunings and `η` are outputs and may be left
/// out.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
struct SolveSpec {
    g1: f64,
    g2: f64,
    #[serde(default)]
    g12: Option<f64>,
    q1: f64,
    q2: f64,
    delta: f64,
    gamma1: f64,
    gamma2: f64,
    #[serde(default)]
    inv_kca: Option<f64>,
    #[serde(default)]
    #[allow(dead_code)]
    delta1: Option<f64>,
    #[serde(default)]
    #[allow(dead_code)]
    delta2: Option<f64>,
    #[serde(default)]
    #[allow(dead_code)]
    eta: Option<f64>,
}

fn section<T>(name: &str, v: &Option<T>) -> Result<T, CliError>
where
    T: Clone,
{
    v.clone().ok_or_else(|| CliError::Config(format!("missing section `{name}`")))
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path.display(), e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    fn params_value(&self) -> Result<serde_json::Value, CliError> {
        section("params", &self.params)
    }

    pub fn params(&self) -> Result<DimensionlessParams, CliError> {
        let spec: ParamsSpec =
            serde_json::from_value(self.params_value()?).map_err(|e| CliError::Config(format!("params: {e}")))?;
        Ok(validate(spec.resolve(), self.validation)?)
    }

    pub fn bic_inputs(&self) -> Result<BicInputs, CliError> {
        let s: SolveSpec =
            serde_json::from_value(self.params_value()?).map_err(|e| CliError::Config(format!("params: {e}")))?;
        Ok(BicInputs {
            g1: s.g1,
            g2: s.g2,
            g12: s.g12.unwrap_or_else(|| default_g12(s.g1, s.g2)),
            q1: s.q1,
            q2: s.q2,
            delta: s.delta,
            gamma1: s.gamma1,
            gamma2: s.gamma2,
            inv_kca: s.inv_kca.unwrap_or(0.0),
        })
    }

    pub fn microscopic(&self) -> Result<MicroscopicSection, CliError> {
        section("microscopic", &self.microscopic)
    }

    pub fn grid(&self) -> Result<GridSection, CliError> {
        section("grid", &self.grid)
    }

    pub fn sweep(&self) -> Result<SweepSection, CliError> {
        section("sweep", &self.sweep)
    }

    pub fn dressing(&self) -> Result<DressingInput, CliError> {
        section("dressing", &self.dressing)
    }

    pub fn discretization(&self) -> GridSpec {
        self.discretization.unwrap_or_else(GridSpec::reference)
    }
}
