//! The scaled effective Hamiltonian `A + iB` and its eigenanalysis.
//!
//! Both matrices are real symmetric, so `A + iB` is complex symmetric (not
//! Hermitian). Eigenvalues come from the characteristic cubic solved in
//! closed form and polished with a simultaneous Newton (Aberth) iteration on
//! `det(E − H)`; eigenvectors are read off the adjugate of the shifted matrix.

use crate::linalg::{self, CMat3, CVec3, Mat3, Vec3};
use crate::params::DimensionlessParams;
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EigenError {
    #[error("eigenpair {index} did not converge: residual {residual:e} exceeds {tolerance:e}")]
    ConvergenceFailure {
        index: usize,
        residual: f64,
        tolerance: f64,
    },
    #[error("matrix contains non-finite entries")]
    NonFinite,
}

/// The two real symmetric matrices whose combination `A + iB` is the
/// effective Hamiltonian in units of `ħΓ_F/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectivePair {
    pub a: Mat3,
    pub b: Mat3,
}

impl EffectivePair {
    /// Builds a pair from the upper triangles of `a` and `b`; the lower
    /// triangles are mirrored so both results are exactly symmetric.
    pub fn new(a: Mat3, b: Mat3) -> Self {
        let mut a = a;
        let mut b = b;
        for i in 0..3 {
            for j in 0..i {
                a[i][j] = a[j][i];
                b[i][j] = b[j][i];
            }
        }
        Self { a, b }
    }

    pub fn hamiltonian(&self) -> CMat3 {
        linalg::combine(&self.a, &self.b)
    }
}

/// Assemble `A` and `B` from the scaled parameters.
pub fn build(p: &DimensionlessParams) -> EffectivePair {
    let s1 = p.g1.sqrt();
    let s2 = p.g2.sqrt();
    let a = [
        [p.delta1, p.delta, p.q1 * s1],
        [p.delta, p.delta2, p.q2 * s2],
        [p.q1 * s1, p.q2 * s2, -p.inv_kca],
    ];
    let b = [
        [-(p.g1 + p.gamma1), -(p.g12 + p.eta), -s1],
        [-(p.g12 + p.eta), -(p.g2 + p.gamma2), -s2],
        [-s1, -s2, -1.0],
    ];
    EffectivePair { a, b }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Eigenpair {
    pub value: Complex64,
    /// Unit norm; the first component of non-negligible size is real positive.
    pub vector: CVec3,
    /// `‖(A+iB)v − Ẽv‖`.
    pub residual: f64,
}

/// Eigenvalues sorted by descending imaginary part, then ascending real
/// part, so `pairs[0]` is always the least-damped root.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexEigenSet {
    pub pairs: [Eigenpair; 3],
    /// Set when a repeated eigenvalue lacks a full set of eigenvectors
    /// (exceptional point).
    pub defective: bool,
}

impl ComplexEigenSet {
    pub fn values(&self) -> [Complex64; 3] {
        self.pairs.map(|p| p.value)
    }

    pub fn least_damped(&self) -> &Eigenpair {
        &self.pairs[0]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenOptions {
    pub max_polish_iterations: usize,
    /// Residual bound relative to `‖A+iB‖_F`.
    pub residual_tol: f64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            max_polish_iterations: 60,
            residual_tol: 1e-10,
        }
    }
}

pub fn eigensystem(pair: &EffectivePair) -> Result<ComplexEigenSet, EigenError> {
    eigensystem_with(pair, EigenOptions::default())
}

pub fn eigensystem_with(pair: &EffectivePair, opts: EigenOptions) -> Result<ComplexEigenSet, EigenError> {
    eigensystem_matrix(&pair.hamiltonian(), opts)
}

/// Eigen-decomposition of an arbitrary complex 3×3 matrix.
pub fn eigensystem_matrix(m: &CMat3, opts: EigenOptions) -> Result<ComplexEigenSet, EigenError> {
    if m.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(EigenError::NonFinite);
    }
    let scale = linalg::frobenius(m);
    let mut roots = cubic_roots(char_poly(m));
    polish_roots(m, &mut roots, scale, opts.max_polish_iterations);
    sort_eigenvalues(&mut roots, scale);

    let (vectors, defective) = eigenvectors(m, &roots, scale);

    let mut pairs = [Eigenpair {
        value: linalg::czero(),
        vector: [linalg::czero(); 3],
        residual: 0.0,
    }; 3];
    let tolerance = opts.residual_tol * scale;
    for k in 0..3 {
        let v = vectors[k];
        let mv = linalg::mat_vec(m, &v);
        let r: CVec3 = [mv[0] - roots[k] * v[0], mv[1] - roots[k] * v[1], mv[2] - roots[k] * v[2]];
        let residual = linalg::norm(&r);
        if residual > tolerance && !defective {
            return Err(EigenError::ConvergenceFailure {
                index: k,
                residual,
                tolerance,
            });
        }
        pairs[k] = Eigenpair {
            value: roots[k],
            vector: v,
            residual,
        };
    }
    Ok(ComplexEigenSet { pairs, defective })
}

/// Coefficients `[c2, c1, c0]` of `det(xI − M) = x³ + c2 x² + c1 x + c0`.
pub fn char_poly(m: &CMat3) -> [Complex64; 3] {
    [-linalg::trace(m), linalg::principal_minor_sum(m), -linalg::det(m)]
}

/// Closed-form roots of the monic cubic `x³ + c2 x² + c1 x + c0`.
pub fn cubic_roots(c: [Complex64; 3]) -> [Complex64; 3] {
    let [a, b, c0] = c;
    let third = 1.0 / 3.0;
    let p = b - a * a * third;
    let q = a * a * a * (2.0 / 27.0) - a * b * third + c0;
    let s = (q * q * 0.25 + p * p * p / 27.0).sqrt();
    let u1 = -q * 0.5 + s;
    let u2 = -q * 0.5 - s;
    let u = if u1.norm() >= u2.norm() { u1 } else { u2 };
    let shift = a * third;
    if u.norm() == 0.0 {
        return [-shift; 3];
    }
    let cr = u.cbrt();
    let omega = Complex64::new(-0.5, 0.75f64.sqrt());
    let mut roots = [linalg::czero(); 3];
    let mut w = Complex64::new(1.0, 0.0);
    for r in roots.iter_mut() {
        let t = w * cr;
        *r = t - p / (t * 3.0) - shift;
        w *= omega;
    }
    roots
}

/// `det(zI − M)` and its derivative `tr adj(zI − M)`.
fn det_and_derivative(m: &CMat3, z: Complex64) -> (Complex64, Complex64) {
    let mut s = *m;
    for i in 0..3 {
        for j in 0..3 {
            s[i][j] = -s[i][j];
        }
        s[i][i] += z;
    }
    let adj = linalg::adjugate(&s);
    (linalg::det(&s), linalg::trace(&adj))
}

/// Simultaneous Newton iteration with implicit deflation; keeps clustered
/// roots from collapsing onto one another.
fn polish_roots(m: &CMat3, roots: &mut [Complex64; 3], scale: f64, max_iter: usize) {
    let eps = 4.0 * f64::EPSILON;
    for _ in 0..max_iter {
        let mut biggest = 0.0f64;
        let mut converged = true;
        for i in 0..3 {
            let (f, df) = det_and_derivative(m, roots[i]);
            if f == linalg::czero() || df == linalg::czero() {
                continue;
            }
            let w = f / df;
            let mut repulsion = linalg::czero();
            for j in 0..3 {
                if j != i {
                    let d = roots[i] - roots[j];
                    if d.norm() > 0.0 {
                        repulsion += d.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - w * repulsion;
            let step = if denom.norm() > 0.0 { w / denom } else { w };
            let candidate = roots[i] - step;
            let (f_new, _) = det_and_derivative(m, candidate);
            if f_new.norm() <= f.norm() {
                roots[i] = candidate;
                biggest = biggest.max(step.norm());
                if step.norm() > eps * (roots[i].norm() + scale) {
                    converged = false;
                }
            }
        }
        if converged || biggest == 0.0 {
            break;
        }
    }
}

fn sort_eigenvalues(roots: &mut [Complex64; 3], scale: f64) {
    let tie = 1e-12 * scale.max(1.0);
    let before = |x: &Complex64, y: &Complex64| -> bool {
        if (x.im - y.im).abs() <= tie {
            x.re < y.re
        } else {
            x.im > y.im
        }
    };
    for i in 1..3 {
        let mut j = i;
        while j > 0 && before(&roots[j], &roots[j - 1]) {
            roots.swap(j, j - 1);
            j -= 1;
        }
    }
}

fn normalize(v: CVec3) -> CVec3 {
    let n = linalg::norm(&v);
    if n == 0.0 {
        return v;
    }
    let mut u = v.map(|z| z / n);
    if let Some(lead) = u.iter().find(|z| z.norm() > 1e-10).copied() {
        let phase = lead.conj() / lead.norm();
        u = u.map(|z| z * phase);
        // exact real part for the leading component
        for z in u.iter_mut() {
            if z.norm() > 1e-10 {
                z.im = 0.0;
                break;
            }
        }
    }
    u
}

fn largest_column(adj: &CMat3) -> CVec3 {
    let mut best = 0;
    let mut best_norm = -1.0;
    for j in 0..3 {
        let n: f64 = (0..3).map(|i| adj[i][j].norm_sqr()).sum();
        if n > best_norm {
            best_norm = n;
            best = j;
        }
    }
    [adj[0][best], adj[1][best], adj[2][best]]
}

/// Two vectors spanning `{x : r·x = 0}` (bilinear), orthonormalized.
fn plane_basis(r: &CVec3) -> [CVec3; 2] {
    let e = |k: usize| {
        let mut v = [linalg::czero(); 3];
        v[k] = Complex64::new(1.0, 0.0);
        v
    };
    let mut cands: Vec<CVec3> = (0..3).map(|k| linalg::cross(r, &e(k))).collect();
    cands.sort_by(|x, y| linalg::norm(y).total_cmp(&linalg::norm(x)));
    let u1 = {
        let n = linalg::norm(&cands[0]);
        cands[0].map(|z| z / n)
    };
    let proj: Complex64 = (0..3).map(|i| u1[i].conj() * cands[1][i]).sum();
    let w: CVec3 = [0, 1, 2].map(|i| cands[1][i] - proj * u1[i]);
    let n = linalg::norm(&w);
    [u1, w.map(|z| z / n)]
}

/// Eigenvectors for each (sorted) root, plus a defectiveness flag.
fn eigenvectors(m: &CMat3, roots: &[Complex64; 3], scale: f64) -> ([CVec3; 3], bool) {
    let cluster_tol = 1e-7 * scale;
    let mut cluster = [0usize, 1, 2];
    for i in 0..3 {
        for j in 0..i {
            if (roots[i] - roots[j]).norm() <= cluster_tol {
                cluster[i] = cluster[j];
                break;
            }
        }
    }

    let mut out = [[linalg::czero(); 3]; 3];
    let mut defective = false;
    let mut done = [false; 3];
    for i in 0..3 {
        if done[i] {
            continue;
        }
        let members: Vec<usize> = (0..3).filter(|&k| cluster[k] == cluster[i]).collect();
        let mean = members.iter().map(|&k| roots[k]).sum::<Complex64>() / members.len() as f64;
        let s = linalg::shift(m, mean);
        let adj = linalg::adjugate(&s);
        let basis: Vec<CVec3> = if members.len() == 1 {
            vec![normalize(largest_column(&adj))]
        } else if members.len() == 3 && linalg::max_abs(&s) <= cluster_tol {
            (0..3)
                .map(|k| {
                    let mut v = [linalg::czero(); 3];
                    v[k] = Complex64::new(1.0, 0.0);
                    v
                })
                .collect()
        } else if linalg::max_abs(&adj) <= 1e-6 * scale * scale {
            let row = (0..3)
                .map(|r| s[r])
                .max_by(|x, y| linalg::norm(x).total_cmp(&linalg::norm(y)))
                .unwrap();
            plane_basis(&row).iter().map(|v| normalize(*v)).collect()
        } else {
            vec![normalize(largest_column(&adj))]
        };
        if basis.len() < members.len() {
            defective = true;
        }
        for (slot, &k) in members.iter().enumerate() {
            out[k] = basis[slot.min(basis.len() - 1)];
            done[k] = true;
        }
    }
    (out, defective)
}

/// Closed-form secular coefficients of `B`, `x³ + G₂x² + G₁x + G₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CharPolyB {
    pub g2: f64,
    pub g1: f64,
    pub g0: f64,
    /// `g12 − √(g1 g2)` when it exceeds 1e-9; the closed form is then not
    /// the characteristic polynomial of `B`.
    pub g12_deviation: Option<f64>,
}

pub fn char_poly_b(p: &DimensionlessParams) -> CharPolyB {
    let g2 = 1.0 + p.g1 + p.g2 + p.gamma1 + p.gamma2;
    let g1 = p.gamma1 + p.gamma2 + p.g1 * p.gamma2 + p.g2 * p.gamma1 + p.gamma1 * p.gamma2
        - p.eta * p.eta
        - 2.0 * p.eta * p.g12;
    let g0 = -p.eta * p.eta + p.gamma1 * p.gamma2;
    let dev = p.g12 - (p.g1 * p.g2).sqrt();
    CharPolyB {
        g2,
        g1,
        g0,
        g12_deviation: (dev.abs() > 1e-9).then_some(dev),
    }
}

/// `(G₂, G₁, G₀)` of `det(xI − B)` expanded directly from the matrix.
pub fn expand_char_poly_real(b: &Mat3) -> (f64, f64, f64) {
    let tr = b[0][0] + b[1][1] + b[2][2];
    let minors = b[0][0] * b[1][1] - b[0][1] * b[1][0] + b[0][0] * b[2][2] - b[0][2] * b[2][0]
        + b[1][1] * b[2][2]
        - b[1][2] * b[2][1];
    (-tr, minors, -linalg::det_real(b))
}

/// Orthonormal eigenvectors of `B` whose eigenvalues satisfy `|x| ≤ tol`.
pub fn null_space_b(pair: &EffectivePair, tol: f64) -> Vec<Vec3> {
    let (values, vectors) = linalg::symmetric_eigen(&pair.b);
    values
        .iter()
        .zip(vectors)
        .filter(|(x, _)| x.abs() <= tol)
        .map(|(_, v)| v)
        .collect()
}

pub const NULL_SPACE_TOL: f64 = 1e-10;

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    pub(crate) fn fig3_params() -> DimensionlessParams {
        DimensionlessParams {
            g1: 4.0,
            g2: 1.91,
            g12: (4.0f64 * 1.91).sqrt(),
            q1: -0.8,
            q2: -0.6,
            delta1: 0.45,
            delta2: 1.88,
            delta: 0.1,
            ..Default::default()
        }
    }

    fn fig4_bic_params() -> DimensionlessParams {
        DimensionlessParams {
            g1: 3.0,
            g2: 2.0,
            g12: 6f64.sqrt(),
            q1: -0.8,
            q2: 0.54,
            delta1: 6.4,
            delta2: 6.6,
            delta: 0.1,
            gamma1: 1.0,
            gamma2: 1.0,
            eta: 1.0,
            inv_kca: 0.0,
        }
    }

    #[test]
    fn zero_params_build() {
        let pair = build(&DimensionlessParams::default());
        assert_eq!(pair.a, linalg::ZERO3);
        assert_eq!(pair.b, [[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, -1.0]]);
    }

    #[test]
    fn fig4_matrix_entries() {
        let pair = build(&fig4_bic_params());
        assert!((pair.a[0][2] + 1.385641).abs() < 1e-6);
        assert_eq!(pair.a[0][2], pair.a[2][0]);
        let tr_b = pair.b[0][0] + pair.b[1][1] + pair.b[2][2];
        assert!((tr_b + 8.0).abs() < 1e-15);
    }

    #[test]
    fn diagonal_hermitian_case() {
        let a = [[1.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 3.0]];
        let es = eigensystem(&EffectivePair::new(a, linalg::ZERO3)).unwrap();
        let v = es.values();
        for (k, expect) in [1.0, 2.0, 3.0].into_iter().enumerate() {
            assert!((v[k] - c(expect, 0.0)).norm() < 1e-13, "{v:?}");
        }
        assert!(!es.defective);
    }

    #[test]
    fn fig3_eigenvalues() {
        let es = eigensystem(&build(&fig3_params())).unwrap();
        let expected = [c(1.29, -1e-4), c(1.571, -0.450), c(-0.538, -6.459)];
        for (got, want) in es.values().iter().zip(expected) {
            assert!((got.re - want.re).abs() < 0.02, "{got} vs {want}");
            assert!((got.im - want.im).abs() < 0.02, "{got} vs {want}");
        }
    }

    #[test]
    fn scaled_identity_has_full_eigenspace() {
        let a = [[2.5, 0.0, 0.0], [0.0, 2.5, 0.0], [0.0, 0.0, 2.5]];
        let es = eigensystem(&EffectivePair::new(a, linalg::ZERO3)).unwrap();
        assert!(!es.defective);
        for p in es.pairs {
            assert!((p.value - c(2.5, 0.0)).norm() < 1e-14);
            assert!(p.residual < 1e-14);
        }
    }

    #[test]
    fn exceptional_point_is_flagged() {
        // [[1, i], [i, -1]] is a nonzero nilpotent block: double eigenvalue 0
        // with a single eigenvector.
        let a = [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 5.0]];
        let b = [[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]];
        let es = eigensystem(&EffectivePair::new(a, b)).unwrap();
        assert!(es.defective);
        assert!((es.values()[2] - c(5.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn convergence_failure_is_reported() {
        let pair = build(&fig3_params());
        let opts = EigenOptions {
            max_polish_iterations: 0,
            residual_tol: 0.0,
        };
        assert!(matches!(
            eigensystem_with(&pair, opts),
            Err(EigenError::ConvergenceFailure { .. })
        ));
    }

    #[test]
    fn non_finite_input_rejected() {
        let mut p = fig3_params();
        p.delta = f64::NAN;
        assert_eq!(eigensystem(&build(&p)), Err(EigenError::NonFinite));
    }

    #[test]
    fn char_poly_no_decay_limit() {
        let p = DimensionlessParams {
            g1: 2.5,
            g2: 0.7,
            g12: (2.5f64 * 0.7).sqrt(),
            ..Default::default()
        };
        let cp = char_poly_b(&p);
        assert_eq!((cp.g2, cp.g1, cp.g0), (1.0 + 2.5 + 0.7, 0.0, 0.0));
        assert!(cp.g12_deviation.is_none());
    }

    #[test]
    fn char_poly_fig4_and_partial_vic() {
        let cp = char_poly_b(&fig4_bic_params());
        assert_eq!(cp.g2, 8.0);
        assert_eq!(cp.g0, 0.0);
        let p = DimensionlessParams {
            gamma1: 1.0,
            gamma2: 1.0,
            eta: 0.9,
            ..Default::default()
        };
        assert!((char_poly_b(&p).g0 - 0.19).abs() < 1e-15);
    }

    #[test]
    fn char_poly_warns_off_identification() {
        let p = DimensionlessParams {
            g1: 1.0,
            g2: 1.0,
            g12: 0.5,
            ..Default::default()
        };
        assert_eq!(char_poly_b(&p).g12_deviation, Some(-0.5));
    }

    #[test]
    fn null_space_no_decay_is_two_dimensional() {
        let p = DimensionlessParams {
            g1: 4.0,
            g2: 2.0,
            g12: 8f64.sqrt(),
            ..Default::default()
        };
        let ns = null_space_b(&build(&p), NULL_SPACE_TOL);
        assert_eq!(ns.len(), 2);
        let v = [2.0, 2f64.sqrt(), 1.0];
        for x in ns {
            let dot: f64 = (0..3).map(|i| x[i] * v[i]).sum();
            assert!(dot.abs() < 1e-12);
        }
    }

    #[test]
    fn null_space_fig4_is_bic_direction() {
        let ns = null_space_b(&build(&fig4_bic_params()), NULL_SPACE_TOL);
        assert_eq!(ns.len(), 1);
        let raw = [-3.146264, 3.146264, 1.0];
        let n = linalg::norm_real(&raw);
        let dir = raw.map(|x| x / n);
        let dot: f64 = (0..3).map(|i| ns[0][i] * dir[i]).sum();
        assert!((dot.abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn negative_definite_b_has_no_null_space() {
        let pair = EffectivePair::new(
            linalg::ZERO3,
            [[-1.0, 0.0, 0.0], [0.0, -2.0, 0.0], [0.0, 0.0, -3.0]],
        );
        assert!(null_space_b(&pair, NULL_SPACE_TOL).is_empty());
    }

    /// Independent root finder for the cross-check: Durand–Kerner on the
    /// monic cubic.
    fn durand_kerner(k: [Complex64; 3]) -> [Complex64; 3] {
        let f = |z: Complex64| ((z + k[0]) * z + k[1]) * z + k[2];
        let seed = c(0.4, 0.9);
        let mut z = [c(1.0, 0.0), seed, seed * seed];
        let radius = 1.0 + k.iter().map(|x| x.norm()).fold(0.0, f64::max);
        for zi in z.iter_mut() {
            *zi *= radius;
        }
        for _ in 0..2000 {
            for i in 0..3 {
                let mut den = c(1.0, 0.0);
                for j in 0..3 {
                    if i != j {
                        den *= z[i] - z[j];
                    }
                }
                z[i] -= f(z[i]) / den;
            }
        }
        z
    }

    fn sym3() -> impl Strategy<Value = Mat3> {
        prop::array::uniform6(-3.0f64..3.0).prop_map(|e| {
            [[e[0], e[1], e[2]], [e[1], e[3], e[4]], [e[2], e[4], e[5]]]
        })
    }

    fn physical_params() -> impl Strategy<Value = DimensionlessParams> {
        (
            prop::array::uniform4(0.0f64..4.0),
            prop::array::uniform4(-2.0f64..2.0),
            prop::array::uniform4(-2.0f64..2.0),
            0.0f64..1.0,
        )
            .prop_map(|(pos, a, b, frac)| {
                let g12 = (pos[0] * pos[1]).sqrt();
                DimensionlessParams {
                    g1: pos[0],
                    g2: pos[1],
                    gamma1: pos[2],
                    gamma2: pos[3],
                    g12,
                    eta: frac * (pos[2] * pos[3]).sqrt(),
                    q1: a[0],
                    q2: a[1],
                    delta1: a[2],
                    delta2: a[3],
                    delta: b[0],
                    inv_kca: b[1],
                }
            })
    }

    proptest! {
        #[test]
        fn trace_and_determinant_identities(a in sym3(), b in sym3()) {
            let pair = EffectivePair::new(a, b);
            let es = eigensystem(&pair).unwrap();
            let v = es.values();
            let m = pair.hamiltonian();
            let sum: Complex64 = v.iter().sum();
            prop_assert!((sum - linalg::trace(&m)).norm() < 1e-10);
            let prod = v[0] * v[1] * v[2];
            let d = linalg::det(&m);
            prop_assert!((prod - d).norm() <= 1e-9 * d.norm().max(1.0));
            let scale = linalg::frobenius(&m);
            for p in es.pairs {
                prop_assert!(p.residual <= 1e-10 * scale);
                prop_assert!((linalg::norm(&p.vector) - 1.0).abs() < 1e-12);
            }
        }

        #[test]
        fn matches_independent_root_finder(a in sym3(), b in sym3()) {
            let pair = EffectivePair::new(a, b);
            let es = eigensystem(&pair).unwrap();
            let dk = durand_kerner(char_poly(&pair.hamiltonian()));
            for ev in es.values() {
                let nearest = dk.iter().map(|z| (z - ev).norm()).fold(f64::INFINITY, f64::min);
                prop_assert!(nearest < 1e-8, "{} not matched in {:?}", ev, dk);
            }
        }

        #[test]
        fn decay_only_when_minus_b_psd(p in physical_params()) {
            let es = eigensystem(&build(&p)).unwrap();
            for v in es.values() {
                prop_assert!(v.im <= 1e-10);
            }
        }

        #[test]
        fn closed_form_matches_expansion(p in physical_params(), eta in -2.0f64..2.0) {
            let p = DimensionlessParams { eta, ..p };
            let (g2, g1, g0) = expand_char_poly_real(&build(&p).b);
            let cp = char_poly_b(&p);
            prop_assert!((g2 - cp.g2).abs() < 1e-10);
            prop_assert!((g1 - cp.g1).abs() < 1e-10);
            prop_assert!((g0 - cp.g0).abs() < 1e-10);
        }

        #[test]
        fn general_constant_term(p in physical_params(), g12 in -3.0f64..3.0, eta in -2.0f64..2.0) {
            let p = DimensionlessParams { g12, eta, ..p };
            let (_, _, g0) = expand_char_poly_real(&build(&p).b);
            let expect = p.gamma1 * p.gamma2 - (g12 + eta - (p.g1 * p.g2).sqrt()).powi(2);
            prop_assert!((g0 - expect).abs() < 1e-10);
        }

        #[test]
        fn zero_eigenvalue_iff_g0_vanishes(p in physical_params(), on_vic in any::<bool>()) {
            let eta = if on_vic { p.vic_eta() } else { p.eta };
            let p = DimensionlessParams { eta, ..p };
            let (vals, _) = linalg::symmetric_eigen(&build(&p).b);
            let has_zero = vals.iter().any(|x| x.abs() <= 1e-10);
            let g0 = char_poly_b(&p).g0;
            if g0.abs() <= 1e-12 {
                prop_assert!(has_zero);
            }
            if has_zero {
                prop_assert!(g0.abs() <= 1e-9);
            }
        }

        #[test]
        fn no_decay_b_is_rank_one(g1 in 0.0f64..5.0, g2 in 0.0f64..5.0) {
            let p = DimensionlessParams { g1, g2, g12: (g1 * g2).sqrt(), ..Default::default() };
            let (vals, _) = linalg::symmetric_eigen(&build(&p).b);
            prop_assert!((vals[0] + 1.0 + g1 + g2).abs() < 1e-12);
            prop_assert!(vals[1].abs() < 1e-12 && vals[2].abs() < 1e-12);
        }
    }
}
