//! Bound states in the continuum of `A + iB`.
//!
//! A BIC needs a real eigenvector `X` with `BX = 0` and `AX = λX`. `B` can
//! only be singular when `η² = γ̃₁γ̃₂`; the closed-form route below then
//! fixes `δ₁`, `δ₂` and `λ` so that the null vector of `B` is also an
//! eigenvector of `A`.

use crate::heff::{self, EffectivePair, EigenError};
use crate::linalg::{self, Mat3, Vec3};
use crate::params::DimensionlessParams;
use serde::Serialize;
use thiserror::Error;

pub const DEFAULT_TOL_IM: f64 = 1e-9;
const DENOM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BicError {
    #[error("null vector of B is undefined: sqrt(g2*gamma1) - sqrt(g1*gamma2) = {0:e}")]
    DegenerateVector(f64),
    #[error("BIC eigenvalue undefined: g1 - g12*sqrt(gamma1/gamma2) = {0:e}")]
    SingularSolve(f64),
    #[error("decay rates must be positive, got gamma1 = {gamma1}, gamma2 = {gamma2}")]
    NonPositiveDecay { gamma1: f64, gamma2: f64 },
    #[error(transparent)]
    Eigen(#[from] EigenError),
}

/// `η² − γ̃₁γ̃₂`.
pub fn vic_residual(p: &DimensionlessParams) -> f64 {
    p.eta * p.eta - p.gamma1 * p.gamma2
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BicVector {
    /// `(x₁, x₂, 1)`, not normalized.
    pub x: Vec3,
    /// `√(x₁² + x₂² + 1)`.
    pub norm: f64,
}

impl BicVector {
    pub fn unit(&self) -> Vec3 {
        self.x.map(|v| v / self.norm)
    }
}

pub fn bic_vector(p: &DimensionlessParams) -> Result<BicVector, BicError> {
    bic_vector_parts(p.g1, p.g2, p.gamma1, p.gamma2)
}

fn bic_vector_parts(g1: f64, g2: f64, gamma1: f64, gamma2: f64) -> Result<BicVector, BicError> {
    if !(gamma1 > 0.0 && gamma2 > 0.0) {
        return Err(BicError::NonPositiveDecay { gamma1, gamma2 });
    }
    let d = (g2 * gamma1).sqrt() - (g1 * gamma2).sqrt();
    if d.abs() < DENOM_TOL || !d.is_finite() {
        return Err(BicError::DegenerateVector(d));
    }
    let x = [gamma2.sqrt() / d, -gamma1.sqrt() / d, 1.0];
    Ok(BicVector {
        x,
        norm: linalg::norm_real(&x),
    })
}

/// Everything except the two detunings and `η`, which the BIC fixes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
pub struct BicInputs {
    pub g1: f64,
    pub g2: f64,
    pub g12: f64,
    pub q1: f64,
    pub q2: f64,
    pub delta: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    #[serde(default)]
    pub inv_kca: f64,
}

impl From<&DimensionlessParams> for BicInputs {
    fn from(p: &DimensionlessParams) -> Self {
        Self {
            g1: p.g1,
            g2: p.g2,
            g12: p.g12,
            q1: p.q1,
            q2: p.q2,
            delta: p.delta,
            gamma1: p.gamma1,
            gamma2: p.gamma2,
            inv_kca: p.inv_kca,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BicSolution {
    pub lambda: f64,
    pub delta1_req: f64,
    pub delta2_req: f64,
    /// Unit-norm BIC eigenvector.
    pub x: Vec3,
    /// `‖BX‖`.
    pub residual_b: f64,
    /// `‖AX − λX‖`.
    pub residual_a: f64,
    /// `|(A − λ)(x₁, x₂, 1)|` row by row, i.e. the three defining equations
    /// evaluated at the solution.
    pub equation_residuals: [f64; 3],
    /// The full parameter set realizing the BIC (`η = √(γ̃₁γ̃₂)`).
    pub params: DimensionlessParams,
}

pub fn solve_bic(inp: &BicInputs) -> Result<BicSolution, BicError> {
    if !(inp.gamma1 > 0.0 && inp.gamma2 > 0.0) {
        return Err(BicError::NonPositiveDecay {
            gamma1: inp.gamma1,
            gamma2: inp.gamma2,
        });
    }
    let r = (inp.gamma1 / inp.gamma2).sqrt();
    let den = inp.g1 - inp.g12 * r;
    if den.abs() < DENOM_TOL {
        return Err(BicError::SingularSolve(den));
    }
    let lambda = (inp.g12 * r * inp.q2 - inp.g1 * inp.q1 + inp.inv_kca * (inp.g12 * r - inp.g1)) / den;
    let delta2 = lambda + inp.g2 * inp.q2 + (inp.delta - inp.g12 * inp.q2) / r;
    let delta1 = lambda + inp.g1 * inp.q1 - r * (inp.g12 * inp.q1 - inp.delta);

    let params = DimensionlessParams {
        g1: inp.g1,
        g2: inp.g2,
        g12: inp.g12,
        q1: inp.q1,
        q2: inp.q2,
        delta1,
        delta2,
        delta: inp.delta,
        gamma1: inp.gamma1,
        gamma2: inp.gamma2,
        eta: (inp.gamma1 * inp.gamma2).sqrt(),
        inv_kca: inp.inv_kca,
    };
    let vec = bic_vector(&params)?;
    let pair = heff::build(&params);
    let x = vec.unit();
    let shifted = shifted_a(&pair.a, lambda);
    let raw = linalg::mat_vec_real(&shifted, &vec.x);
    Ok(BicSolution {
        lambda,
        delta1_req: delta1,
        delta2_req: delta2,
        x,
        residual_b: linalg::norm_real(&linalg::mat_vec_real(&pair.b, &x)),
        residual_a: linalg::norm_real(&linalg::mat_vec_real(&shifted, &x)),
        equation_residuals: raw.map(f64::abs),
        params,
    })
}

fn shifted_a(a: &Mat3, lambda: f64) -> Mat3 {
    let mut s = *a;
    for (i, row) in s.iter_mut().enumerate() {
        row[i] -= lambda;
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Certification {
    pub is_bic: bool,
    pub min_abs_im: f64,
    /// Real part of the eigenvalue closest to the real axis.
    pub lambda_est: f64,
    /// `‖Bv‖` for that eigenvalue's eigenvector.
    pub residual_b: f64,
    pub eigenvalues: [num_complex::Complex64; 3],
}

pub fn certify(p: &DimensionlessParams, tol_im: f64) -> Result<Certification, BicError> {
    let pair = heff::build(p);
    let es = heff::eigensystem(&pair)?;
    let best = es
        .pairs
        .iter()
        .min_by(|x, y| x.value.im.abs().total_cmp(&y.value.im.abs()))
        .expect("three eigenpairs");
    let bv: Vec<num_complex::Complex64> = (0..3)
        .map(|i| (0..3).map(|j| best.vector[j] * pair.b[i][j]).sum())
        .collect();
    let residual_b = bv.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let min_abs_im = best.value.im.abs();
    Ok(Certification {
        is_bic: min_abs_im <= tol_im,
        min_abs_im,
        lambda_est: best.value.re,
        residual_b,
        eigenvalues: es.values(),
    })
}

/// Looks for a BIC when `B` has a degenerate null space (no radiative
/// decay): an eigenvector of `A` restricted to `ker B` that `A` keeps
/// inside `ker B`.
pub fn bic_no_decay(pair: &EffectivePair, tol: f64) -> Option<(f64, Vec3)> {
    let b_scale = linalg::frobenius_real(&pair.b).max(1.0);
    let basis = heff::null_space_b(pair, heff::NULL_SPACE_TOL * b_scale);
    let k = basis.len();
    if k == 0 {
        return None;
    }
    // restricted block N^T A N, padded to 3x3 so the Jacobi solver applies
    let mut block = linalg::ZERO3;
    for i in 0..k {
        let ai = linalg::mat_vec_real(&pair.a, &basis[i]);
        for j in 0..k {
            block[i][j] = (0..3).map(|m| basis[j][m] * ai[m]).sum();
        }
    }
    let (values, vectors) = linalg::symmetric_eigen(&block);
    let mut best: Option<(f64, f64, Vec3)> = None;
    for (mu, y) in values.iter().zip(vectors) {
        // skip the padding directions
        if y[k..].iter().any(|c| c.abs() > 1e-8) {
            continue;
        }
        let mut x = [0.0; 3];
        for (j, b) in basis.iter().enumerate() {
            for m in 0..3 {
                x[m] += y[j] * b[m];
            }
        }
        let ax = linalg::mat_vec_real(&pair.a, &x);
        let res = linalg::norm_real(&[ax[0] - mu * x[0], ax[1] - mu * x[1], ax[2] - mu * x[2]]);
        if res <= tol && best.map_or(true, |(r, _, _)| res < r) {
            best = Some((res, *mu, x));
        }
    }
    best.map(|(_, mu, x)| (mu, x))
}
