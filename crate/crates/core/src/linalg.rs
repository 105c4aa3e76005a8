//! Fixed-size 3×3 helpers shared by the effective-Hamiltonian code.
//!
//! Everything here works on plain arrays: the matrices never grow beyond
//! three rows, so a general dense library would only add indirection.

use num_complex::Complex64;

pub type Mat3 = [[f64; 3]; 3];
pub type CMat3 = [[Complex64; 3]; 3];
pub type Vec3 = [f64; 3];
pub type CVec3 = [Complex64; 3];

pub const ZERO3: Mat3 = [[0.0; 3]; 3];

pub fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// `a + i b` for two real matrices.
pub fn combine(a: &Mat3, b: &Mat3) -> CMat3 {
    let mut m = [[czero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = Complex64::new(a[i][j], b[i][j]);
        }
    }
    m
}

pub fn trace(m: &CMat3) -> Complex64 {
    m[0][0] + m[1][1] + m[2][2]
}

pub fn det(m: &CMat3) -> Complex64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

pub fn det_real(m: &Mat3) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Adjugate (transpose of the cofactor matrix): `m · adj(m) = det(m) I`.
pub fn adjugate(m: &CMat3) -> CMat3 {
    let mut adj = [[czero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            // cofactor C_ji goes into adj[i][j]
            let (r0, r1) = others(j);
            let (c0, c1) = others(i);
            let minor = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
            adj[i][j] = if (i + j) % 2 == 0 { minor } else { -minor };
        }
    }
    adj
}

fn others(k: usize) -> (usize, usize) {
    match k {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// Sum of the three principal 2×2 minors.
pub fn principal_minor_sum(m: &CMat3) -> Complex64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] - m[0][2] * m[2][0]
        + m[1][1] * m[2][2]
        - m[1][2] * m[2][1]
}

pub fn shift(m: &CMat3, z: Complex64) -> CMat3 {
    let mut s = *m;
    for (i, row) in s.iter_mut().enumerate() {
        row[i] -= z;
    }
    s
}

pub fn mat_vec(m: &CMat3, v: &CVec3) -> CVec3 {
    let mut out = [czero(); 3];
    for i in 0..3 {
        out[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
    }
    out
}

pub fn mat_vec_real(m: &Mat3, v: &Vec3) -> Vec3 {
    let mut out = [0.0; 3];
    for i in 0..3 {
        out[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
    }
    out
}

pub fn norm(v: &CVec3) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn norm_real(v: &Vec3) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn frobenius(m: &CMat3) -> f64 {
    m.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn frobenius_real(m: &Mat3) -> f64 {
    m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn max_abs(m: &CMat3) -> f64 {
    m.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Bilinear cross product (no conjugation): `a·(a×b) = b·(a×b) = 0`.
pub fn cross(a: &CVec3, b: &CVec3) -> CVec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn cross_real(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn transpose(m: &Mat3) -> Mat3 {
    let mut t = ZERO3;
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = m[j][i];
        }
    }
    t
}

/// Eigen-decomposition of a real symmetric 3×3 matrix by cyclic Jacobi
/// rotations. Returns eigenvalues ascending with matching orthonormal
/// eigenvectors (`vectors[k]` belongs to `values[k]`).
pub fn symmetric_eigen(m: &Mat3) -> ([f64; 3], [Vec3; 3]) {
    let mut a = *m;
    let mut v = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    for _sweep in 0..64 {
        let off = a[0][1].powi(2) + a[0][2].powi(2) + a[1][2].powi(2);
        if off == 0.0 {
            break;
        }
        let diag = a[0][0].powi(2) + a[1][1].powi(2) + a[2][2].powi(2);
        if off <= f64::EPSILON.powi(2) * 1e-4 * diag {
            break;
        }
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            if a[p][q] == 0.0 {
                continue;
            }
            let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let t = if theta == 0.0 { 1.0 } else { t };
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            for k in 0..3 {
                let akp = a[k][p];
                let akq = a[k][q];
                a[k][p] = c * akp - s * akq;
                a[k][q] = s * akp + c * akq;
            }
            for k in 0..3 {
                let apk = a[p][k];
                let aqk = a[q][k];
                a[p][k] = c * apk - s * aqk;
                a[q][k] = s * apk + c * aqk;
            }
            for row in v.iter_mut() {
                let vkp = row[p];
                let vkq = row[q];
                row[p] = c * vkp - s * vkq;
                row[q] = s * vkp + c * vkq;
            }
        }
    }
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    let values = order.map(|k| a[k][k]);
    let vectors = order.map(|k| [v[0][k], v[1][k], v[2][k]]);
    (values, vectors)
}

/// Solve a dense complex system by LU with partial pivoting, in place.
/// `a` is row-major `n×n`; `rhs` holds `nrhs` column vectors stored row-major
/// (`rhs[i * nrhs + k]`). Returns `false` if a zero pivot is met.
pub fn lu_solve_in_place(a: &mut [Complex64], n: usize, rhs: &mut [Complex64], nrhs: usize) -> bool {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(rhs.len(), n * nrhs);
    for col in 0..n {
        let mut piv = col;
        let mut best = a[col * n + col].norm();
        for r in col + 1..n {
            let v = a[r * n + col].norm();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best == 0.0 {
            return false;
        }
        if piv != col {
            for k in 0..n {
                a.swap(col * n + k, piv * n + k);
            }
            for k in 0..nrhs {
                rhs.swap(col * nrhs + k, piv * nrhs + k);
            }
        }
        let inv = a[col * n + col].inv();
        let (upper, lower) = a.split_at_mut((col + 1) * n);
        let pivot_row = &upper[col * n..col * n + n];
        for (ri, row) in lower.chunks_exact_mut(n).enumerate() {
            let r = col + 1 + ri;
            let f = row[col] * inv;
            if f == czero() {
                continue;
            }
            row[col] = f;
            for k in col + 1..n {
                row[k] -= f * pivot_row[k];
            }
            for k in 0..nrhs {
                let v = rhs[col * nrhs + k];
                rhs[r * nrhs + k] -= f * v;
            }
        }
    }
    for col in (0..n).rev() {
        let inv = a[col * n + col].inv();
        for k in 0..nrhs {
            let mut acc = rhs[col * nrhs + k];
            for j in col + 1..n {
                acc -= a[col * n + j] * rhs[j * nrhs + k];
            }
            rhs[col * nrhs + k] = acc * inv;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn adjugate_times_matrix_is_det_identity() {
        let m = [
            [c(1.0, 0.5), c(2.0, -1.0), c(0.3, 0.0)],
            [c(-0.7, 0.2), c(0.1, 0.0), c(4.0, 1.0)],
            [c(2.2, 0.0), c(-1.0, -3.0), c(0.5, 0.5)],
        ];
        let adj = adjugate(&m);
        let d = det(&m);
        for i in 0..3 {
            for j in 0..3 {
                let mut s = czero();
                for k in 0..3 {
                    s += m[i][k] * adj[k][j];
                }
                let expect = if i == j { d } else { czero() };
                assert!((s - expect).norm() < 1e-12, "{i}{j}: {s} vs {expect}");
            }
        }
    }

    #[test]
    fn jacobi_recovers_rank_one_structure() {
        let v = [2.0, 2f64.sqrt(), 1.0];
        let mut m = ZERO3;
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = -v[i] * v[j];
            }
        }
        let (vals, vecs) = symmetric_eigen(&m);
        assert!((vals[0] + 7.0).abs() < 1e-12);
        assert!(vals[1].abs() < 1e-12 && vals[2].abs() < 1e-12);
        for k in 0..3 {
            let mv = mat_vec_real(&m, &vecs[k]);
            for i in 0..3 {
                assert!((mv[i] - vals[k] * vecs[k][i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn lu_solves_small_system() {
        // [[0, 1], [2, 1]] x = [1, 4]  ->  x = [1.5, 1]
        let mut a = vec![c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)];
        let mut b = vec![c(1.0, 0.0), c(4.0, 0.0)];
        assert!(lu_solve_in_place(&mut a, 2, &mut b, 1));
        assert!((b[0] - c(1.5, 0.0)).norm() < 1e-15);
        assert!((b[1] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn lu_reports_singular() {
        let mut a = vec![c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)];
        let mut b = vec![c(1.0, 0.0), c(1.0, 0.0)];
        assert!(!lu_solve_in_place(&mut a, 2, &mut b, 1));
    }
}
