//! Dimensionless parameter set of the three-level effective Hamiltonian.
//!
//! Energies are measured in units of `ħΓ_F/2` and rates in units of `Γ_F`,
//! where `Γ_F` is the Feshbach resonance width.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Absolute tolerance for equality and Cauchy–Schwarz checks. Every entry
/// is O(1) after scaling.
pub const PARAM_TOL: f64 = 1e-12;

/// Scaled parameters entering the matrices `A` and `B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct DimensionlessParams {
    /// Laser-induced width of `|e1⟩`, `Γ₁/Γ_F`.
    pub g1: f64,
    /// Laser-induced width of `|e2⟩`, `Γ₂/Γ_F`.
    pub g2: f64,
    /// Laser-induced coherence `γ_LIC/Γ_F`.
    pub g12: f64,
    /// Fano asymmetry of the `|e1⟩ ↔ |c⟩` pathway.
    pub q1: f64,
    /// Fano asymmetry of the `|e2⟩ ↔ |c⟩` pathway.
    pub q2: f64,
    pub delta1: f64,
    pub delta2: f64,
    /// Laser–laser cross shift `α/(ħΓ_F/2)`.
    pub delta: f64,
    /// Spontaneous width of `|e1⟩`, `γ₁/Γ_F`.
    pub gamma1: f64,
    /// Spontaneous width of `|e2⟩`, `γ₂/Γ_F`.
    pub gamma2: f64,
    /// Vacuum-induced cross decay `γ_VIC/Γ_F`.
    pub eta: f64,
    /// Inverse scaled scattering length `(k_c a_s)⁻¹`.
    pub inv_kca: f64,
}

impl DimensionlessParams {
    /// The VIC value that cancels spontaneous emission, `√(γ̃₁γ̃₂)`.
    pub fn vic_eta(&self) -> f64 {
        (self.gamma1 * self.gamma2).sqrt()
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = eta;
        self
    }

    pub fn fields(&self) -> [(&'static str, f64); 12] {
        [
            ("g1", self.g1),
            ("g2", self.g2),
            ("g12", self.g12),
            ("q1", self.q1),
            ("q2", self.q2),
            ("delta1", self.delta1),
            ("delta2", self.delta2),
            ("delta", self.delta),
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("eta", self.eta),
            ("inv_kca", self.inv_kca),
        ]
    }
}

/// Laser coherence for real, equal-phase free–bound couplings.
pub fn default_g12(g1: f64, g2: f64) -> f64 {
    (g1 * g2).sqrt()
}

/// Config-file form of [`DimensionlessParams`]: `g12`, `eta` and `inv_kca`
/// may be omitted and take their canonical defaults.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSpec {
    pub g1: f64,
    pub g2: f64,
    #[serde(default)]
    pub g12: Option<f64>,
    pub q1: f64,
    pub q2: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub delta: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    #[serde(default)]
    pub eta: Option<f64>,
    #[serde(default)]
    pub inv_kca: Option<f64>,
}

impl ParamsSpec {
    pub fn resolve(&self) -> DimensionlessParams {
        DimensionlessParams {
            g1: self.g1,
            g2: self.g2,
            g12: self.g12.unwrap_or_else(|| default_g12(self.g1, self.g2)),
            q1: self.q1,
            q2: self.q2,
            delta1: self.delta1,
            delta2: self.delta2,
            delta: self.delta,
            gamma1: self.gamma1,
            gamma2: self.gamma2,
            eta: self.eta.unwrap_or_else(|| (self.gamma1 * self.gamma2).sqrt()),
            inv_kca: self.inv_kca.unwrap_or(0.0),
        }
    }
}

impl From<DimensionlessParams> for ParamsSpec {
    fn from(p: DimensionlessParams) -> Self {
        ParamsSpec {
            g1: p.g1,
            g2: p.g2,
            g12: Some(p.g12),
            q1: p.q1,
            q2: p.q2,
            delta1: p.delta1,
            delta2: p.delta2,
            delta: p.delta,
            gamma1: p.gamma1,
            gamma2: p.gamma2,
            eta: Some(p.eta),
            inv_kca: Some(p.inv_kca),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ValidationMode {
    /// Sign and finiteness only.
    #[default]
    Permissive,
    /// Adds the two Cauchy–Schwarz bounds on the cross terms.
    Physical,
    /// Requires the cross terms to saturate their bounds exactly.
    Strict,
}

/// One violated invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub field: &'static str,
    pub value: f64,
    pub rule: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}: {}", self.field, self.value, self.rule)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid parameters: {}", .violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
pub struct ValidationError {
    pub violations: Vec<Violation>,
}

/// Check `params` against the invariants of `mode`. Every violation is
/// collected, not only the first.
pub fn validate(
    params: DimensionlessParams,
    mode: ValidationMode,
) -> Result<DimensionlessParams, ValidationError> {
    let mut violations = Vec::new();
    for (field, value) in params.fields() {
        if !value.is_finite() {
            violations.push(Violation {
                field,
                value,
                rule: "must be finite".into(),
            });
        }
    }
    for (field, value) in [
        ("g1", params.g1),
        ("g2", params.g2),
        ("gamma1", params.gamma1),
        ("gamma2", params.gamma2),
    ] {
        if value < 0.0 {
            violations.push(Violation {
                field,
                value,
                rule: "must be nonnegative".into(),
            });
        }
    }

    if matches!(mode, ValidationMode::Physical | ValidationMode::Strict) {
        let eta_bound = (params.gamma1.max(0.0) * params.gamma2.max(0.0)).sqrt();
        if params.eta.abs() > eta_bound + PARAM_TOL {
            violations.push(Violation {
                field: "eta",
                value: params.eta,
                rule: format!("|eta| exceeds sqrt(gamma1*gamma2) = {eta_bound}"),
            });
        }
        let g12_bound = (params.g1.max(0.0) * params.g2.max(0.0)).sqrt();
        if params.g12.abs() > g12_bound + PARAM_TOL {
            violations.push(Violation {
                field: "g12",
                value: params.g12,
                rule: format!("|g12| exceeds sqrt(g1*g2) = {g12_bound}"),
            });
        }
        if mode == ValidationMode::Strict {
            if (params.eta - eta_bound).abs() > PARAM_TOL {
                violations.push(Violation {
                    field: "eta",
                    value: params.eta,
                    rule: format!("strict mode requires eta = sqrt(gamma1*gamma2) = {eta_bound}"),
                });
            }
            if (params.g12 - g12_bound).abs() > PARAM_TOL {
                violations.push(Violation {
                    field: "g12",
                    value: params.g12,
                    rule: format!("strict mode requires g12 = sqrt(g1*g2) = {g12_bound}"),
                });
            }
        }
    }

    if violations.is_empty() {
        Ok(params)
    } else {
        Err(ValidationError { violations })
    }
}

/// Dimensional scales that tie the scaled model to an experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalScales {
    /// Feshbach width `Γ_F` in rad/s.
    pub gamma_f: f64,
    /// Reduced mass in kg.
    pub reduced_mass: f64,
    /// Collision wavenumber in 1/m.
    pub k_c: f64,
}

/// Reduced Planck constant in J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

impl PhysicalScales {
    pub fn new(gamma_f: f64, reduced_mass: f64, k_c: f64) -> Option<Self> {
        (gamma_f > 0.0 && reduced_mass > 0.0 && k_c >= 0.0).then_some(Self {
            gamma_f,
            reduced_mass,
            k_c,
        })
    }

    /// Energy unit `E_F = ħΓ_F/2` in joules.
    pub fn energy_unit(&self) -> f64 {
        HBAR * self.gamma_f / 2.0
    }

    /// Collision energy `ħ²k_c²/2μ` in joules.
    pub fn collision_energy(&self) -> f64 {
        HBAR * HBAR * self.k_c * self.k_c / (2.0 * self.reduced_mass)
    }

    /// Collision energy in units of `E_F`.
    pub fn scaled_collision_energy(&self) -> f64 {
        self.collision_energy() / self.energy_unit()
    }
}
