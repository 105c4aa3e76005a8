//! Adaptive Gauss–Kronrod (7/15) quadrature and Cauchy principal values.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("integrand tail beyond {from} does not converge (estimate {estimate:e}, error {error:e})")]
    DivergentTail { from: f64, estimate: f64, error: f64 },
    #[error("pole at {pole} is not strictly inside (0, {upper})")]
    SingularEndpoint { pole: f64, upper: f64 },
    #[error("tolerance not reached after {subdivisions} subdivisions: {value} +- {error:e}")]
    NotConverged { value: f64, error: f64, subdivisions: usize },
    #[error("integrand is not finite at {0}")]
    NonFinite(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-15,
            max_subdivisions: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quad {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
// Gauss weights for the odd Kronrod nodes (1, 3, 5, 7)
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<(f64, f64), QuadError> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    if !fc.is_finite() {
        return Err(QuadError::NonFinite(c));
    }
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for k in 0..7 {
        let x1 = c - h * XGK[k];
        let x2 = c + h * XGK[k];
        let (f1, f2) = (f(x1), f(x2));
        if !f1.is_finite() {
            return Err(QuadError::NonFinite(x1));
        }
        if !f2.is_finite() {
            return Err(QuadError::NonFinite(x2));
        }
        kron += WGK[k] * (f1 + f2);
        if k % 2 == 1 {
            gauss += WG[k / 2] * (f1 + f2);
        }
    }
    Ok((kron * h, ((kron - gauss) * h).abs()))
}

/// `∫ₐᵇ f` on a finite interval.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadSpec) -> Result<Quad, QuadError> {
    if a == b {
        return Ok(Quad {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    let (v, e) = gk15(&f, a, b)?;
    let mut parts = vec![(a, b, v, e)];
    let mut evaluations = 15;
    loop {
        let value: f64 = parts.iter().map(|p| p.2).sum();
        let error: f64 = parts.iter().map(|p| p.3).sum();
        if error <= spec.abs_tol.max(spec.rel_tol * value.abs()) {
            return Ok(Quad {
                value,
                error,
                evaluations,
            });
        }
        if parts.len() >= spec.max_subdivisions {
            return Err(QuadError::NotConverged {
                value,
                error,
                subdivisions: parts.len(),
            });
        }
        let worst = (0..parts.len()).max_by(|&i, &j| parts[i].3.total_cmp(&parts[j].3)).unwrap();
        let (lo, hi, _, _) = parts.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Err(QuadError::NotConverged {
                value,
                error,
                subdivisions: parts.len() + 1,
            });
        }
        let (v1, e1) = gk15(&f, lo, mid)?;
        let (v2, e2) = gk15(&f, mid, hi)?;
        evaluations += 30;
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
}

/// `∫ₐ^∞ f` through `E = a + t/(1 − t)`.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, spec: &QuadSpec) -> Result<Quad, QuadError> {
    let g = |t: f64| {
        let s = 1.0 - t;
        let v = f(a + t / s);
        if v == 0.0 {
            0.0
        } else {
            v / (s * s)
        }
    };
    integrate(g, 0.0, 1.0, spec).map_err(|e| match e {
        QuadError::NotConverged { value, error, .. } => QuadError::DivergentTail {
            from: a,
            estimate: value,
            error,
        },
        QuadError::NonFinite(_) => QuadError::DivergentTail {
            from: a,
            estimate: f64::INFINITY,
            error: f64::INFINITY,
        },
        other => other,
    })
}

/// `𝒫∫₀^upper f(E)/(E3 − E) dE`; `upper` may be `f64::INFINITY`.
///
/// On `[0, min(upper, 2E3)]` the pole is removed by subtracting `f(E3)`,
/// whose own principal value is `f(E3)·ln(E3/(U − E3))`. Anything beyond
/// `2E3` is regular.
pub fn pv_integral<F: Fn(f64) -> f64>(f: F, e3: f64, upper: f64, spec: &QuadSpec) -> Result<Quad, QuadError> {
    if !(e3 > 0.0 && e3 < upper) {
        return Err(QuadError::SingularEndpoint { pole: e3, upper });
    }
    let f3 = f(e3);
    if !f3.is_finite() {
        return Err(QuadError::NonFinite(e3));
    }
    let u = upper.min(2.0 * e3);
    let sub = |x: f64| {
        let d = e3 - x;
        if d == 0.0 {
            0.0
        } else {
            (f(x) - f3) / d
        }
    };
    let left = integrate(sub, 0.0, e3, spec)?;
    let right = integrate(sub, e3, u, spec)?;
    let analytic = if u == 2.0 * e3 { 0.0 } else { f3 * (e3 / (u - e3)).ln() };
    let mut total = Quad {
        value: left.value + right.value + analytic,
        error: left.error + right.error,
        evaluations: left.evaluations + right.evaluations + 1,
    };
    if upper > u {
        let regular = |x: f64| f(x) / (e3 - x);
        let tail = if upper.is_infinite() {
            integrate_to_infinity(regular, u, spec)?
        } else {
            integrate(regular, u, upper, spec)?
        };
        total.value += tail.value;
        total.error += tail.error;
        total.evaluations += tail.evaluations;
    }
    Ok(total)
}
