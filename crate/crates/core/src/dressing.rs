//! Microwave dressing of the two excited vibrational levels.
//!
//! `|e1⟩ = cos θ |v1⟩ + sin θ |v2⟩`, `|e2⟩ = −sin θ |v1⟩ + cos θ |v2⟩` with
//! `tan 2θ = Ω_m/Δ_m`. The dressed decay rates are taken as inputs
//! downstream; only the rotation and its energy scale live here.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum DressingError {
    #[error("mixing angle undefined: Omega_m and Delta_m are both zero")]
    DegenerateDressing,
    #[error("bare linewidths must be positive")]
    ZeroLinewidth,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DressingInput {
    /// Microwave Rabi coupling (rad/s).
    pub omega_m: f64,
    /// Microwave detuning `ω₁₂ − ω_m` (rad/s).
    pub delta_m: f64,
    pub gamma1_bare: f64,
    pub gamma2_bare: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DressedPair {
    pub theta: f64,
    pub c1: f64,
    pub s1: f64,
    pub splitting: f64,
}

impl DressedPair {
    /// Rows give `|e1⟩`, `|e2⟩` in the bare `{|v1⟩, |v2⟩}` basis.
    pub fn rotation(&self) -> [[f64; 2]; 2] {
        [[self.c1, self.s1], [-self.s1, self.c1]]
    }
}

/// `θ = ½ atan2(Ω_m, Δ_m)`, continuous through `Δ_m = 0` for `Ω_m > 0`.
pub fn mixing_angle(omega_m: f64, delta_m: f64) -> Result<f64, DressingError> {
    if omega_m == 0.0 && delta_m == 0.0 {
        return Err(DressingError::DegenerateDressing);
    }
    Ok(0.5 * omega_m.atan2(delta_m))
}

/// Dressed-state gap `√(Ω_m² + Δ_m²)`.
pub fn dressed_splitting(omega_m: f64, delta_m: f64) -> f64 {
    omega_m.hypot(delta_m)
}

/// `Ω_m/√(γ₁γ₂)`; values near one put the dressed pair in the regime where
/// the two decay paths can interfere.
pub fn vic_feasibility(omega_m: f64, gamma1_bare: f64, gamma2_bare: f64) -> Result<f64, DressingError> {
    if gamma1_bare <= 0.0 || gamma2_bare <= 0.0 {
        return Err(DressingError::ZeroLinewidth);
    }
    Ok(omega_m / (gamma1_bare * gamma2_bare).sqrt())
}

pub fn dress(input: &DressingInput) -> Result<DressedPair, DressingError> {
    let theta = mixing_angle(input.omega_m, input.delta_m)?;
    Ok(DressedPair {
        theta,
        c1: theta.cos(),
        s1: theta.sin(),
        splitting: dressed_splitting(input.omega_m, input.delta_m),
    })
}
