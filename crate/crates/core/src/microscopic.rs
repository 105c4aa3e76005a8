//! From energy-dependent couplings to the scaled parameters.
//!
//! Units: energies throughout, `ħ = 1`, so a rate `Γ` is quoted as the
//! energy `ħΓ`. Continuum couplings are energy-normalized, i.e. `Λ(E)²`
//! has units of energy. Following the pole approximation, every principal
//! value and every on-shell width is evaluated at `E = E3`; vacuum-induced
//! shifts are dropped and all couplings are real.

use crate::params::DimensionlessParams;
use crate::quadrature::{pv_integral, QuadError, QuadSpec};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MicroError {
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error("Gamma_F vanishes; the energy unit is undefined")]
    ZeroWidth,
    #[error("Gamma_{0}F vanishes while beta_{0} + Omega_{0}3 does not; q_{0} is undefined")]
    ZeroCross(u8),
    #[error("invalid model: {0}")]
    InvalidModel(String),
}

/// Parametrized coupling shapes, defined for `E ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase", deny_unknown_fields)]
pub enum CouplingShape {
    /// `A·exp(−(E−E₀)²/2w²)`.
    Gaussian { amplitude: f64, center: f64, width: f64 },
    /// Threshold law `A·E^(1/4)·exp(−E/E_w)`.
    Wigner { amplitude: f64, scale: f64 },
    /// `A` on `[0, upper]`, zero above.
    Flat { amplitude: f64, upper: f64 },
    Zero,
}

impl CouplingShape {
    pub fn eval(&self, e: f64) -> f64 {
        if e < 0.0 {
            return 0.0;
        }
        match *self {
            CouplingShape::Gaussian { amplitude, center, width } => {
                amplitude * (-(e - center).powi(2) / (2.0 * width * width)).exp()
            }
            CouplingShape::Wigner { amplitude, scale } => amplitude * e.powf(0.25) * (-e / scale).exp(),
            CouplingShape::Flat { amplitude, upper } => {
                if e <= upper {
                    amplitude
                } else {
                    0.0
                }
            }
            CouplingShape::Zero => 0.0,
        }
    }

    /// End of the support (`∞` for the smooth shapes).
    pub fn support_end(&self) -> f64 {
        match *self {
            CouplingShape::Flat { upper, .. } => upper,
            CouplingShape::Zero => 0.0,
            _ => f64::INFINITY,
        }
    }

    fn check(&self) -> Result<(), MicroError> {
        let ok = match *self {
            CouplingShape::Gaussian { amplitude, center, width } => {
                amplitude.is_finite() && center.is_finite() && width > 0.0 && width.is_finite()
            }
            CouplingShape::Wigner { amplitude, scale } => amplitude.is_finite() && scale > 0.0 && scale.is_finite(),
            CouplingShape::Flat { amplitude, upper } => amplitude.is_finite() && upper > 0.0 && upper.is_finite(),
            CouplingShape::Zero => true,
        };
        if ok {
            Ok(())
        } else {
            Err(MicroError::InvalidModel(format!("bad coupling shape {self:?}")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingModel {
    pub lambda1: CouplingShape,
    pub lambda2: CouplingShape,
    pub v3: CouplingShape,
    pub v1f: f64,
    pub v2f: f64,
    pub omega13: f64,
    pub omega23: f64,
    pub e3: f64,
    pub dipole_overlap: f64,
}

impl CouplingModel {
    pub fn check(&self) -> Result<(), MicroError> {
        self.lambda1.check()?;
        self.lambda2.check()?;
        self.v3.check()?;
        if !(-1.0..=1.0).contains(&self.dipole_overlap) {
            return Err(MicroError::InvalidModel(format!(
                "dipole_overlap {} outside [-1, 1]",
                self.dipole_overlap
            )));
        }
        for (name, v) in [
            ("v1f", self.v1f),
            ("v2f", self.v2f),
            ("omega13", self.omega13),
            ("omega23", self.omega23),
            ("e3", self.e3),
        ] {
            if !v.is_finite() {
                return Err(MicroError::InvalidModel(format!("{name} is not finite")));
            }
        }
        if self.e3 <= 0.0 {
            return Err(MicroError::InvalidModel("e3 must lie above threshold".into()));
        }
        Ok(())
    }
}

/// Normalization of the radiative rates relative to the vacuum coherence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum VicConvention {
    /// `γₙ = 4π V²ₙf`, `γ_VIC = 2π V₁f V₂f cos φ`: parallel dipoles then
    /// give only half the coherence needed for a BIC.
    AsWritten,
    /// `γₙ = 2π V²ₙf`, `γ_VIC = 2π V₁f V₂f cos φ`: the golden-rule values of
    /// two levels sharing one photon continuum, for which parallel dipoles
    /// saturate `γ_VIC = √(γ₁γ₂)`.
    #[default]
    MaxInterference,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MicroscopicResult {
    pub e_sh_1: f64,
    pub e_sh_2: f64,
    pub e_sh_f: f64,
    pub alpha: f64,
    pub beta1: f64,
    pub beta2: f64,
    #[serde(rename = "Gamma1")]
    pub big_gamma1: f64,
    #[serde(rename = "Gamma2")]
    pub big_gamma2: f64,
    #[serde(rename = "Gamma_F")]
    pub gamma_f: f64,
    pub gamma_lic: f64,
    #[serde(rename = "Gamma_1F")]
    pub gamma_1f: f64,
    #[serde(rename = "Gamma_2F")]
    pub gamma_2f: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma_vic: f64,
    /// Bound-bound couplings after the sign convention below.
    pub omega13: f64,
    pub omega23: f64,
    /// Summed quadrature error estimate over the six principal values.
    pub quad_error: f64,
    /// States whose sign was flipped so that `Γ_nF ≥ 0`.
    pub flipped: [bool; 2],
}

/// Evaluates all shifts, widths and coherences at the pole `E3`.
///
/// The phase of each state `|eₙ⟩` is free; it is chosen so that
/// `Λₙ(E3)V₃(E3) ≥ 0`, which makes `Γ_nF = √(ΓₙΓ_F)` when the shapes
/// agree and matches the sign pattern of `B`. Every quantity odd in state
/// `n` (βₙ, Ωₙ₃, V_nf and the cross terms) follows the flip.
pub fn derive_couplings(
    model: &CouplingModel,
    convention: VicConvention,
    spec: &QuadSpec,
) -> Result<MicroscopicResult, MicroError> {
    model.check()?;
    let e3 = model.e3;
    let l1 = |e: f64| model.lambda1.eval(e);
    let l2 = |e: f64| model.lambda2.eval(e);
    let v3 = |e: f64| model.v3.eval(e);
    let (l1f, l2f, v3f) = (l1(e3), l2(e3), v3(e3));
    let s1 = if l1f * v3f < 0.0 { -1.0 } else { 1.0 };
    let s2 = if l2f * v3f < 0.0 { -1.0 } else { 1.0 };

    let upper = |a: &CouplingShape, b: &CouplingShape| a.support_end().min(b.support_end());
    let mut err = 0.0;
    let mut pv = |f: &dyn Fn(f64) -> f64, a: &CouplingShape, b: &CouplingShape| -> Result<f64, MicroError> {
        let u = upper(a, b);
        if u <= e3 {
            // the product vanishes above u, so the integrand is regular
            let q = crate::quadrature::integrate(|e| f(e) / (e3 - e), 0.0, u.max(0.0), spec)?;
            err += q.error;
            return Ok(q.value);
        }
        let q = pv_integral(f, e3, u, spec)?;
        err += q.error;
        Ok(q.value)
    };
    let e_sh_1 = pv(&|e| l1(e) * l1(e), &model.lambda1, &model.lambda1)?;
    let e_sh_2 = pv(&|e| l2(e) * l2(e), &model.lambda2, &model.lambda2)?;
    let e_sh_f = pv(&|e| v3(e) * v3(e), &model.v3, &model.v3)?;
    let alpha = s1 * s2 * pv(&|e| l1(e) * l2(e), &model.lambda1, &model.lambda2)?;
    let beta1 = s1 * pv(&|e| l1(e) * v3(e), &model.lambda1, &model.v3)?;
    let beta2 = s2 * pv(&|e| l2(e) * v3(e), &model.lambda2, &model.v3)?;

    let two_pi = 2.0 * PI;
    let radiative = match convention {
        VicConvention::AsWritten => 2.0 * two_pi,
        VicConvention::MaxInterference => two_pi,
    };
    Ok(MicroscopicResult {
        e_sh_1,
        e_sh_2,
        e_sh_f,
        alpha,
        beta1,
        beta2,
        big_gamma1: two_pi * l1f * l1f,
        big_gamma2: two_pi * l2f * l2f,
        gamma_f: two_pi * v3f * v3f,
        gamma_lic: two_pi * s1 * s2 * l1f * l2f,
        gamma_1f: two_pi * s1 * l1f * v3f,
        gamma_2f: two_pi * s2 * l2f * v3f,
        gamma1: radiative * model.v1f * model.v1f,
        gamma2: radiative * model.v2f * model.v2f,
        gamma_vic: two_pi * s1 * s2 * model.v1f * model.v2f * model.dipole_overlap,
        omega13: s1 * model.omega13,
        omega23: s2 * model.omega23,
        quad_error: err,
        flipped: [s1 < 0.0, s2 < 0.0],
    })
}

/// Bound-level energies and laser photon energies (same units as `E3`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelScheme {
    pub e1: f64,
    pub e2: f64,
    pub laser1: f64,
    pub laser2: f64,
}

fn ratio_or_zero(num: f64, den: f64, channel: u8) -> Result<f64, MicroError> {
    if den == 0.0 {
        if num == 0.0 {
            return Ok(0.0);
        }
        return Err(MicroError::ZeroCross(channel));
    }
    Ok(num / den)
}

pub fn to_dimensionless(
    res: &MicroscopicResult,
    model: &CouplingModel,
    levels: &LevelScheme,
) -> Result<DimensionlessParams, MicroError> {
    let gf = res.gamma_f;
    if !(gf > 0.0) {
        return Err(MicroError::ZeroWidth);
    }
    let unit = gf / 2.0;
    Ok(DimensionlessParams {
        g1: res.big_gamma1 / gf,
        g2: res.big_gamma2 / gf,
        g12: res.gamma_lic / gf,
        q1: ratio_or_zero(res.beta1 + res.omega13, res.gamma_1f / 2.0, 1)?,
        q2: ratio_or_zero(res.beta2 + res.omega23, res.gamma_2f / 2.0, 2)?,
        delta1: (levels.e1 - levels.laser1 + res.e_sh_1) / unit,
        delta2: (levels.e2 - levels.laser2 + res.e_sh_2) / unit,
        delta: res.alpha / unit,
        gamma1: res.gamma1 / gf,
        gamma2: res.gamma2 / gf,
        eta: res.gamma_vic / gf,
        inv_kca: -(model.e3 + res.e_sh_f) / unit,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatteringLength {
    pub inv_kca: f64,
    /// Infinite on resonance.
    pub a_s: f64,
    pub on_resonance: bool,
}

/// `(k_c a_s)⁻¹ = −2(E3 + E^sh_F)/ħΓ_F`.
pub fn scattering_length(e3_plus_shift: f64, gamma_f: f64, k_c: f64) -> Result<ScatteringLength, MicroError> {
    if !(gamma_f > 0.0) {
        return Err(MicroError::ZeroWidth);
    }
    if !(k_c > 0.0) {
        return Err(MicroError::InvalidModel(format!("k_c must be positive, got {k_c}")));
    }
    let inv_kca = -2.0 * e3_plus_shift / gamma_f;
    let on_resonance = inv_kca == 0.0;
    Ok(ScatteringLength {
        inv_kca,
        a_s: if on_resonance { f64::INFINITY } else { 1.0 / (k_c * inv_kca) },
        on_resonance,
    })
}

/// The bundled reference model: Gaussian laser and magnetic couplings
/// centred near `E3 = 10`, nearly parallel dipoles.
pub fn reference_model() -> CouplingModel {
    CouplingModel {
        lambda1: CouplingShape::Gaussian {
            amplitude: 0.6,
            center: 9.0,
            width: 2.5,
        },
        lambda2: CouplingShape::Gaussian {
            amplitude: 0.5,
            center: 11.0,
            width: 3.0,
        },
        v3: CouplingShape::Gaussian {
            amplitude: 0.4,
            center: 10.5,
            width: 3.0,
        },
        v1f: 0.2,
        v2f: 0.18,
        omega13: 0.1,
        omega23: 0.05,
        e3: 10.0,
        dipole_overlap: 0.95,
    }
}

pub fn reference_levels() -> LevelScheme {
    LevelScheme {
        e1: 12.0,
        e2: 11.5,
        laser1: 2.0,
        laser2: 1.3,
    }
}
