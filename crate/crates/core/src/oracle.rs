//! Brute-force check of the continuum elimination.
//!
//! The collisional continuum and the two photon continua are replaced by
//! bins. Bin `j` of width `ΔEⱼ` couples to the three discrete states with
//! `coupling(Eⱼ)·√ΔEⱼ`, so `Σⱼ cⱼcⱼᵀ/(z − Eⱼ)` approximates the continuum
//! self-energy. Photon bins use the interaction-term measure `dk` and the
//! photon energy as bin energy.
//!
//! Photon continuum `a` couples to `|e1⟩` with `V₁f` and to `|e2⟩` with
//! `V₂f cos φ`; continuum `b` couples only to `|e2⟩`, with `V₂f sin φ`.
//! That reproduces rates `2πV²ₙf` and a cross term `2πV₁fV₂f cos φ`.

use crate::heff::{self, EffectivePair, EigenError, EigenOptions};
use crate::linalg::{self, CMat3, Mat3, Vec3};
use crate::microscopic::{CouplingModel, CouplingShape, LevelScheme, MicroError};
use crate::params::DimensionlessParams;
use crate::quadrature::{self, QuadError, QuadSpec};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("grid misses {fraction:e} of the weight of {coupling} (limit 1e-8)")]
    GridCoverage { coupling: &'static str, fraction: f64 },
    #[error("probe {0} lies on the real axis")]
    ProbeOnSpectrum(Complex64),
    #[error("pole search from {start} did not converge (last step {last_step:e})")]
    FixedPointDivergence { start: Complex64, last_step: f64 },
    #[error("linear solve failed at z = {0}")]
    Singular(Complex64),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error(transparent)]
    Micro(#[from] MicroError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GridKind {
    Uniform {
        lo: f64,
        hi: f64,
        n: usize,
    },
    /// Uniform bins of `inner_step` on `center ± inner_half`, then widths
    /// growing geometrically by `ratio` out to `lo` and `hi`.
    Graded {
        lo: f64,
        hi: f64,
        center: f64,
        inner_half: f64,
        inner_step: f64,
        ratio: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct BinGrid {
    pub centers: Vec<f64>,
    pub widths: Vec<f64>,
}

impl BinGrid {
    pub fn uniform(lo: f64, hi: f64, n: usize) -> Result<Self, OracleError> {
        if n == 0 {
            return Ok(Self::default());
        }
        if !(lo < hi) {
            return Err(OracleError::InvalidGrid(format!("need lo < hi, got [{lo}, {hi}]")));
        }
        let w = (hi - lo) / n as f64;
        Ok(Self {
            centers: (0..n).map(|j| lo + w * (j as f64 + 0.5)).collect(),
            widths: vec![w; n],
        })
    }

    pub fn graded(lo: f64, hi: f64, center: f64, inner_half: f64, inner_step: f64, ratio: f64) -> Result<Self, OracleError> {
        if !(lo <= center - inner_half && center + inner_half <= hi && inner_step > 0.0 && ratio >= 1.0) {
            return Err(OracleError::InvalidGrid(
                "graded grid needs lo <= center - inner_half, center + inner_half <= hi, inner_step > 0, ratio >= 1".into(),
            ));
        }
        let n_in = (2.0 * inner_half / inner_step).round().max(1.0) as usize;
        let step = 2.0 * inner_half / n_in as f64;
        let start = center - inner_half;
        let mut edges: Vec<f64> = (0..=n_in).map(|j| start + step * j as f64).collect();
        let mut w = step;
        let mut pos = center + inner_half;
        while pos < hi {
            w *= ratio;
            pos = (pos + w).min(hi);
            edges.push(pos);
        }
        let mut w = step;
        let mut pos = start;
        let mut left = Vec::new();
        while pos > lo {
            w *= ratio;
            pos = (pos - w).max(lo);
            left.push(pos);
        }
        left.reverse();
        left.extend(edges);
        Ok(Self::from_edges(&left))
    }

    fn from_edges(edges: &[f64]) -> Self {
        let centers = edges.windows(2).map(|e| 0.5 * (e[0] + e[1])).collect();
        let widths = edges.windows(2).map(|e| e[1] - e[0]).collect();
        Self { centers, widths }
    }

    pub fn from_kind(kind: &GridKind) -> Result<Self, OracleError> {
        match *kind {
            GridKind::Uniform { lo, hi, n } => Self::uniform(lo, hi, n),
            GridKind::Graded {
                lo,
                hi,
                center,
                inner_half,
                inner_step,
                ratio,
            } => Self::graded(lo, hi, center, inner_half, inner_step, ratio),
        }
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn lo(&self) -> f64 {
        self.centers.first().map_or(0.0, |c| c - 0.5 * self.widths[0])
    }

    pub fn hi(&self) -> f64 {
        self.centers.last().map_or(0.0, |c| c + 0.5 * self.widths[self.len() - 1])
    }

    /// Width of the bin nearest to `e` (0 for an empty grid).
    pub fn local_width(&self, e: f64) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        let k = self.centers.partition_point(|&c| c < e);
        let pick = if k == 0 {
            0
        } else if k == self.len() || e - self.centers[k - 1] < self.centers[k] - e {
            k - 1
        } else {
            k
        };
        self.widths[pick]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub collision: GridKind,
    pub photon: GridKind,
}

impl GridSpec {
    /// The grid used for the resolvent identity on the bundled model.
    pub fn reference() -> Self {
        Self {
            collision: GridKind::Uniform { lo: 0.0, hi: 40.0, n: 400 },
            photon: GridKind::Uniform { lo: 0.0, hi: 20.0, n: 200 },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QState {
    pub energy: f64,
    pub coupling: Vec3,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscretizedModel {
    /// `PH′P`: bare energies `(E₁ − ħω₁, E₂ − ħω₂, E3)` and the bound-bound
    /// couplings.
    pub p_block: Mat3,
    /// Collisional bins first, then photon continuum `a`, then `b`.
    pub q: Vec<QState>,
    pub collision: BinGrid,
    pub photon: BinGrid,
}

fn tail_weight(shape: &CouplingShape, lo: f64, hi: f64, spec: &QuadSpec) -> Result<(f64, f64), OracleError> {
    let f2 = |e: f64| shape.eval(e).powi(2);
    let end = shape.support_end();
    let total = if end.is_infinite() {
        quadrature::integrate_to_infinity(f2, 0.0, spec)?.value
    } else {
        quadrature::integrate(f2, 0.0, end, spec)?.value
    };
    let mut outside = 0.0;
    if lo > 0.0 {
        outside += quadrature::integrate(f2, 0.0, lo.min(end), spec)?.value;
    }
    if hi < end {
        outside += if end.is_infinite() {
            quadrature::integrate_to_infinity(f2, hi, spec)?.value
        } else {
            quadrature::integrate(f2, hi, end, spec)?.value
        };
    }
    Ok((outside, total))
}

pub fn discretize(model: &CouplingModel, levels: &LevelScheme, grid: &GridSpec) -> Result<DiscretizedModel, OracleError> {
    model.check()?;
    let collision = BinGrid::from_kind(&grid.collision)?;
    let photon = BinGrid::from_kind(&grid.photon)?;
    let spec = QuadSpec {
        rel_tol: 1e-12,
        abs_tol: 1e-300,
        ..QuadSpec::default()
    };
    if !collision.is_empty() {
        for (name, shape) in [("lambda1", &model.lambda1), ("lambda2", &model.lambda2), ("v3", &model.v3)] {
            let (outside, total) = tail_weight(shape, collision.lo(), collision.hi(), &spec)?;
            if total > 0.0 && outside > 1e-8 * total {
                return Err(OracleError::GridCoverage {
                    coupling: name,
                    fraction: outside / total,
                });
            }
        }
    }

    let mut p_block = linalg::ZERO3;
    p_block[0][0] = levels.e1 - levels.laser1;
    p_block[1][1] = levels.e2 - levels.laser2;
    p_block[2][2] = model.e3;
    p_block[0][2] = model.omega13;
    p_block[2][0] = model.omega13;
    p_block[1][2] = model.omega23;
    p_block[2][1] = model.omega23;

    let mut q = Vec::with_capacity(collision.len() + 2 * photon.len());
    for (&e, &w) in collision.centers.iter().zip(&collision.widths) {
        let s = w.sqrt();
        q.push(QState {
            energy: e,
            coupling: [model.lambda1.eval(e) * s, model.lambda2.eval(e) * s, model.v3.eval(e) * s],
        });
    }
    let cos = model.dipole_overlap;
    let sin = (1.0 - cos * cos).max(0.0).sqrt();
    for (&k, &w) in photon.centers.iter().zip(&photon.widths) {
        let s = w.sqrt();
        q.push(QState {
            energy: k,
            coupling: [model.v1f * s, model.v2f * cos * s, 0.0],
        });
    }
    for (&k, &w) in photon.centers.iter().zip(&photon.widths) {
        let s = w.sqrt();
        q.push(QState {
            energy: k,
            coupling: [0.0, model.v2f * sin * s, 0.0],
        });
    }
    Ok(DiscretizedModel {
        p_block,
        q,
        collision,
        photon,
    })
}

impl DiscretizedModel {
    pub fn dim(&self) -> usize {
        3 + self.q.len()
    }

    /// Full symmetric matrix, row-major. Continuum bins couple only to the
    /// three discrete states.
    pub fn hamiltonian(&self) -> Vec<f64> {
        let n = self.dim();
        let mut h = vec![0.0; n * n];
        for i in 0..3 {
            for j in 0..3 {
                h[i * n + j] = self.p_block[i][j];
            }
        }
        for (k, s) in self.q.iter().enumerate() {
            let r = 3 + k;
            h[r * n + r] = s.energy;
            for i in 0..3 {
                h[i * n + r] = s.coupling[i];
                h[r * n + i] = s.coupling[i];
            }
        }
        h
    }

    /// `Σ(z) = Σⱼ cⱼcⱼᵀ/(z − Eⱼ)`.
    pub fn self_energy(&self, z: Complex64) -> CMat3 {
        let mut s = [[linalg::czero(); 3]; 3];
        for st in &self.q {
            let g = (z - st.energy).inv();
            let c = st.coupling;
            for i in 0..3 {
                if c[i] == 0.0 {
                    continue;
                }
                for j in i..3 {
                    s[i][j] += g * (c[i] * c[j]);
                }
            }
        }
        for i in 0..3 {
            for j in 0..i {
                s[i][j] = s[j][i];
            }
        }
        s
    }

    /// `(z − PH′P − Σ(z))⁻¹`.
    pub fn feshbach_inverse(&self, z: Complex64) -> Result<CMat3, OracleError> {
        let sigma = self.self_energy(z);
        let mut m = [[linalg::czero(); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = -sigma[i][j] - self.p_block[i][j];
            }
            m[i][i] += z;
        }
        let d = linalg::det(&m);
        if d.norm() == 0.0 {
            return Err(OracleError::Singular(z));
        }
        let adj = linalg::adjugate(&m);
        Ok(adj.map(|row| row.map(|x| x / d)))
    }

    /// `P(z − H′)⁻¹P` from a dense solve of the full model.
    pub fn projected_resolvent(&self, z: Complex64) -> Result<CMat3, OracleError> {
        let n = self.dim();
        let h = self.hamiltonian();
        let mut a: Vec<Complex64> = h.iter().map(|&x| Complex64::new(-x, 0.0)).collect();
        for i in 0..n {
            a[i * n + i] += z;
        }
        let mut rhs = vec![linalg::czero(); n * 3];
        for i in 0..3 {
            rhs[i * 3 + i] = Complex64::new(1.0, 0.0);
        }
        if !linalg::lu_solve_in_place(&mut a, n, &mut rhs, 3) {
            return Err(OracleError::Singular(z));
        }
        let mut out = [[linalg::czero(); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = rhs[i * 3 + j];
            }
        }
        Ok(out)
    }

    fn energy_range(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..3 {
            lo = lo.min(self.p_block[i][i]);
            hi = hi.max(self.p_block[i][i]);
        }
        for s in &self.q {
            lo = lo.min(s.energy);
            hi = hi.max(s.energy);
        }
        (lo, hi)
    }

    /// `2π max |c|²/ΔE` over the bins: the largest golden-rule rate.
    fn width_scale(&self) -> f64 {
        let widths = self.collision.widths.iter().chain(&self.photon.widths).chain(&self.photon.widths);
        self.q
            .iter()
            .zip(widths)
            .map(|(s, w)| 2.0 * std::f64::consts::PI * linalg::norm_real(&s.coupling).powi(2) / w)
            .fold(0.0, f64::max)
    }

    /// Eight points on a rectangle around the spectrum, four above and four
    /// below the real axis.
    pub fn default_probes(&self) -> Vec<Complex64> {
        let (lo, hi) = self.energy_range();
        let im = self.width_scale().max(1.0);
        let mut out = Vec::with_capacity(8);
        for sign in [1.0, -1.0] {
            for k in 0..4 {
                let re = lo + (hi - lo) * k as f64 / 3.0;
                out.push(Complex64::new(re, sign * im));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeDeviation {
    pub z: Complex64,
    /// `max|L − R| / max|L|` over the nine entries.
    pub max_dev: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolventReport {
    pub probes: Vec<ProbeDeviation>,
    pub max_dev: f64,
}

pub fn resolvent_check(dm: &DiscretizedModel, probes: &[Complex64]) -> Result<ResolventReport, OracleError> {
    if let Some(z) = probes.iter().find(|z| z.im.abs() < 1e-12) {
        return Err(OracleError::ProbeOnSpectrum(*z));
    }
    let rows = probes
        .par_iter()
        .map(|&z| {
            let full = dm.projected_resolvent(z)?;
            let fesh = dm.feshbach_inverse(z)?;
            let scale = linalg::max_abs(&full);
            let diff = (0..3)
                .flat_map(|i| (0..3).map(move |j| (i, j)))
                .map(|(i, j)| (full[i][j] - fesh[i][j]).norm())
                .fold(0.0, f64::max);
            Ok(ProbeDeviation {
                z,
                max_dev: if scale > 0.0 { diff / scale } else { diff },
            })
        })
        .collect::<Result<Vec<_>, OracleError>>()?;
    let max_dev = rows.iter().map(|r| r.max_dev).fold(0.0, f64::max);
    Ok(ResolventReport { probes: rows, max_dev })
}

/// `Re Σⱼ ΔEⱼ f(Eⱼ)/(E3 + iε − Eⱼ)` on a bin grid. With `ε → 0⁺` and `E3`
/// on a bin edge this is the midpoint-rule principal value.
pub fn discrete_pv<F: Fn(f64) -> f64>(grid: &BinGrid, f: F, e3: f64, eps: f64) -> f64 {
    let z = Complex64::new(e3, eps);
    grid.centers
        .iter()
        .zip(&grid.widths)
        .map(|(&e, &w)| (w * f(e) / (z - e)).re)
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoleReport {
    /// Eigenvalues of the constant effective Hamiltonian, in energy units.
    pub predicted: [Complex64; 3],
    /// Poles of the discretized model found from each prediction.
    pub discretized: [Complex64; 3],
    pub deviation: [f64; 3],
    /// Deviation relative to `max(|Im predicted|, 1e-300)`.
    pub relative: [f64; 3],
    pub iterations: [usize; 3],
}

const POLE_BUDGET: usize = 2000;

/// Locates the resonance poles of the discretized model by the damped
/// fixed point `z ← eig(PH′P + Σ(Re z + iε))`, started from the
/// eigenvalues of `energy_unit·(A + iB)`. `ε` is ten local bin widths.
pub fn compare_pole_approximation(
    dm: &DiscretizedModel,
    params: &DimensionlessParams,
    energy_unit: f64,
) -> Result<PoleReport, OracleError> {
    let es = heff::eigensystem(&heff::build(params))?;
    let predicted = es.values().map(|z| z * energy_unit);
    let e_ref = dm.p_block[2][2];
    let opts = EigenOptions::default();
    let mut discretized = [linalg::czero(); 3];
    let mut iterations = [0usize; 3];
    for (k, &start) in predicted.iter().enumerate() {
        let mut z = start;
        let mut last_step = f64::INFINITY;
        let mut converged = false;
        for it in 0..POLE_BUDGET {
            let eps = 10.0 * dm.collision.local_width(z.re).max(dm.photon.local_width(z.re));
            let sigma = dm.self_energy(Complex64::new(z.re, eps));
            let mut re = dm.p_block;
            let mut im = linalg::ZERO3;
            for i in 0..3 {
                for j in 0..3 {
                    re[i][j] += sigma[i][j].re;
                    im[i][j] = sigma[i][j].im;
                }
                re[i][i] -= e_ref;
            }
            let ev = heff::eigensystem_matrix(&EffectivePair::new(re, im).hamiltonian(), opts)?.values();
            let target = z - e_ref;
            let nearest = ev
                .iter()
                .min_by(|a, b| (*a - target).norm().total_cmp(&(*b - target).norm()))
                .copied()
                .unwrap();
            let next = 0.5 * (z + nearest + e_ref);
            last_step = (next - z).norm();
            z = next;
            iterations[k] = it + 1;
            if last_step <= 1e-13 * (z - e_ref).norm().max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(OracleError::FixedPointDivergence { start, last_step });
        }
        discretized[k] = z;
    }
    let mut deviation = [0.0; 3];
    let mut relative = [0.0; 3];
    for k in 0..3 {
        deviation[k] = (discretized[k] - predicted[k]).norm();
        relative[k] = deviation[k] / predicted[k].im.abs().max(1e-300);
    }
    Ok(PoleReport {
        predicted,
        discretized,
        deviation,
        relative,
        iterations,
    })
}
