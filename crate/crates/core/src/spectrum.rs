//! Photoassociation amplitude, the scaled spectrum `𝒮ₙ(Ẽ) = |amp|²/π`,
//! peak-shape metrics and η sweeps.
//!
//! The amplitude into dressed state `n` is the `n`-th row of
//! `adj(Ẽ − H)·(√g₁, √g₂, 1)` divided by `det(Ẽ − H)`, with the
//! dimensional prefactor dropped.

use crate::heff::{self, EigenError};
use crate::linalg::{self, CMat3, Vec3};
use crate::params::DimensionlessParams;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{E, PI};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error("amplitude has a pole on the real axis at E = {0}")]
    PoleHit(f64),
    #[error("no interior maximum in the window [{0}, {1}]")]
    NoPeak(f64, f64),
    #[error("window holds several separated maxima (at {0} and {1}); narrow it")]
    MultiPeak(f64, f64),
    #[error("the 1/e level is not crossed on the {0} side inside the window")]
    CrossingOutsideWindow(&'static str),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("eigenvalues {0} and {1} coalesce; tracking is ambiguous")]
    TrackingAmbiguity(Complex64, Complex64),
    #[error(transparent)]
    Eigen(#[from] EigenError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(try_from = "u8", into = "u8")]
pub enum Channel {
    #[default]
    One,
    Two,
}

impl Channel {
    pub fn index(self) -> usize {
        match self {
            Channel::One => 0,
            Channel::Two => 1,
        }
    }
}

impl TryFrom<u8> for Channel {
    type Error = String;
    fn try_from(n: u8) -> Result<Self, String> {
        match n {
            1 => Ok(Channel::One),
            2 => Ok(Channel::Two),
            _ => Err(format!("channel must be 1 or 2, got {n}")),
        }
    }
}

impl From<Channel> for u8 {
    fn from(c: Channel) -> u8 {
        c.index() as u8 + 1
    }
}

/// Precomputed pieces for repeated evaluation at many energies.
#[derive(Debug, Clone)]
pub struct SpectrumModel {
    h: CMat3,
    source: Vec3,
    eigenvalues: [Complex64; 3],
}

impl SpectrumModel {
    pub fn new(p: &DimensionlessParams) -> Result<Self, SpectrumError> {
        let pair = heff::build(p);
        let es = heff::eigensystem(&pair)?;
        Ok(Self {
            h: pair.hamiltonian(),
            source: [p.g1.sqrt(), p.g2.sqrt(), 1.0],
            eigenvalues: es.values(),
        })
    }

    pub fn eigenvalues(&self) -> [Complex64; 3] {
        self.eigenvalues
    }

    /// `(cofactor row · source, det(Ẽ − H))`.
    pub fn numerator_and_det(&self, e: f64, ch: Channel) -> (Complex64, Complex64) {
        let mut m = self.h;
        for (i, row) in m.iter_mut().enumerate() {
            for z in row.iter_mut() {
                *z = -*z;
            }
            row[i] += e;
        }
        let adj = linalg::adjugate(&m);
        let n = ch.index();
        let num = (0..3).map(|j| adj[n][j] * self.source[j]).sum();
        (num, linalg::det(&m))
    }

    pub fn amplitude(&self, e: f64, ch: Channel) -> Result<Complex64, SpectrumError> {
        let (num, det) = self.numerator_and_det(e, ch);
        if det.norm() < 1e-300 {
            if num.norm() < 1e-300 {
                return Ok(self.removable(e, ch));
            }
            return Err(SpectrumError::PoleHit(e));
        }
        Ok(num / det)
    }

    fn removable(&self, e: f64, ch: Channel) -> Complex64 {
        let h = 1e-7 * e.abs().max(1.0);
        let l = self.numerator_and_det(e - h, ch);
        let r = self.numerator_and_det(e + h, ch);
        (l.0 / l.1 + r.0 / r.1) * 0.5
    }

    /// Real energies where an exact BIC makes numerator and determinant
    /// vanish together.
    fn bic_points(&self) -> impl Iterator<Item = f64> + '_ {
        self.eigenvalues
            .iter()
            .filter(|z| z.im.abs() <= 1e-12 * z.re.abs().max(1.0))
            .map(|z| z.re)
    }

    /// `𝒮ₙ(Ẽ) = |amp|²/π`.
    pub fn density(&self, e: f64, ch: Channel) -> Result<f64, SpectrumError> {
        for lam in self.bic_points() {
            if (e - lam).abs() < 1e-13 * lam.abs().max(1.0) {
                return Ok(self.removable(lam, ch).norm_sqr() / PI);
            }
        }
        Ok(self.amplitude(e, ch)?.norm_sqr() / PI)
    }
}

pub fn amplitude(p: &DimensionlessParams, e: f64, ch: Channel) -> Result<Complex64, SpectrumError> {
    SpectrumModel::new(p)?.amplitude(e, ch)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumSeries {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub channel: Channel,
}

/// Points placed around a pole of half-width `w` at `c`: 32 per `w` out to
/// `±4w`, then geometrically spaced out to `reach`.
fn refinement_points(c: f64, w: f64, reach: f64) -> Vec<f64> {
    let mut out = Vec::new();
    for j in -64i32..=64 {
        out.push(c + w * j as f64 / 16.0);
    }
    let mut d = 4.0 * w;
    while d < reach {
        d *= 1.25;
        out.push(c - d);
        out.push(c + d);
    }
    out
}

pub fn spectrum_series(
    p: &DimensionlessParams,
    e_min: f64,
    e_max: f64,
    n_points: usize,
    ch: Channel,
) -> Result<SpectrumSeries, SpectrumError> {
    if !(e_min < e_max) || n_points < 2 {
        return Err(SpectrumError::InvalidGrid(format!(
            "need E_min < E_max and n_points >= 2, got [{e_min}, {e_max}] with {n_points}"
        )));
    }
    let model = SpectrumModel::new(p)?;
    let span = e_max - e_min;
    let step = span / (n_points - 1) as f64;
    let mut grid: Vec<f64> = (0..n_points).map(|i| e_min + step * i as f64).collect();
    grid[n_points - 1] = e_max;
    for z in model.eigenvalues() {
        if z.re > e_min && z.re < e_max && z.im.abs() < step {
            let w = z.im.abs().max(span * 1e-10);
            grid.extend(
                refinement_points(z.re, w, step)
                    .into_iter()
                    .filter(|&x| x > e_min && x < e_max),
            );
        }
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|b, a| *b <= *a);
    let values = grid
        .iter()
        .map(|&e| model.density(e, ch))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SpectrumSeries {
        grid,
        values,
        channel: ch,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Baseline {
    /// Crossings of `height/e` on the raw curve.
    #[default]
    None,
    /// Subtract the straight line through the window end points first; the
    /// 1/e level is taken relative to that line.
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeakMetrics {
    pub e_peak: f64,
    pub height: f64,
    pub width: f64,
    pub left_cross: f64,
    pub right_cross: f64,
    /// Baseline value under the peak (0 without a baseline).
    pub background: f64,
    /// False when the shape could not be resolved and the values are limits
    /// (an exact BIC, whose width is zero).
    pub refined: bool,
}

const SCAN_POINTS: usize = 4001;

/// Peak metrics of an arbitrary function on `window`. Used both for the
/// physical spectrum and for synthetic calibration curves.
pub fn peak_metrics_fn<F>(f: F, window: (f64, f64), baseline: Baseline) -> Result<PeakMetrics, SpectrumError>
where
    F: Fn(f64) -> Result<f64, SpectrumError>,
{
    let (a, b) = window;
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(SpectrumError::NoPeak(a, b));
    }
    let (fa, fb) = (f(a)?, f(b)?);
    let base = |x: f64| match baseline {
        Baseline::None => 0.0,
        Baseline::Linear => fa + (fb - fa) * (x - a) / (b - a),
    };
    let g = |x: f64| -> Result<f64, SpectrumError> { Ok(f(x)? - base(x)) };

    let h = (b - a) / (SCAN_POINTS - 1) as f64;
    let xs: Vec<f64> = (0..SCAN_POINTS).map(|i| a + h * i as f64).collect();
    let ys = xs.iter().map(|&x| g(x)).collect::<Result<Vec<_>, _>>()?;
    let imax = (0..SCAN_POINTS).max_by(|&i, &j| ys[i].total_cmp(&ys[j])).unwrap();
    if imax == 0 || imax == SCAN_POINTS - 1 || ys[imax] <= 0.0 {
        return Err(SpectrumError::NoPeak(a, b));
    }
    let top = ys[imax];
    // a window dominated by a Fano dip has no peak to measure
    let deepest = ys.iter().copied().fold(f64::INFINITY, f64::min);
    if -deepest > top {
        return Err(SpectrumError::NoPeak(a, b));
    }
    for i in 1..SCAN_POINTS - 1 {
        if i == imax || !(ys[i] > ys[i - 1] && ys[i] >= ys[i + 1]) || ys[i] < top / E {
            continue;
        }
        let (lo, hi) = if i < imax { (i, imax) } else { (imax, i) };
        let dip = ys[lo..=hi].iter().copied().fold(f64::INFINITY, f64::min);
        if dip < 0.5 * ys[i] {
            return Err(SpectrumError::MultiPeak(xs[imax], xs[i]));
        }
    }

    // bisection on the sign of a central-difference slope; a golden-section
    // search would stall at sqrt(eps) of the peak width
    let (mut lo, mut hi) = (xs[imax - 1], xs[imax + 1]);
    let s = 1e-3 * h;
    let slope = |x: f64| -> Result<f64, SpectrumError> { Ok(g(x + s)? - g(x - s)?) };
    let mut refined = false;
    if slope(lo)? > 0.0 && slope(hi)? < 0.0 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                refined = true;
                break;
            }
            if slope(mid)? > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-12 * lo.abs().max(hi.abs()).max(b - a) {
                refined = true;
                break;
            }
        }
    }
    let mut e_peak = 0.5 * (lo + hi);
    let mut peak = g(e_peak)?;
    if ys[imax] > peak {
        e_peak = xs[imax];
        peak = ys[imax];
        refined = false;
    }
    let level = peak / E;
    let above = |x: f64| -> Result<bool, SpectrumError> { Ok(g(x)? > level) };
    let tol = 1e-12 * (b - a);

    let bisect = |mut inside: f64, mut outside: f64| -> Result<f64, SpectrumError> {
        while (inside - outside).abs() > tol {
            let mid = 0.5 * (inside + outside);
            if mid == inside || mid == outside {
                break;
            }
            if above(mid)? {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        Ok(0.5 * (inside + outside))
    };
    let left_idx = (0..=imax).rev().find(|&i| ys[i] <= level);
    let right_idx = (imax..SCAN_POINTS).find(|&i| ys[i] <= level);
    let (Some(li), Some(ri)) = (left_idx, right_idx) else {
        return Err(SpectrumError::CrossingOutsideWindow(if left_idx.is_none() {
            "left"
        } else {
            "right"
        }));
    };
    let left_inside = if e_peak < xs[li + 1] { e_peak } else { xs[li + 1] };
    let right_inside = if e_peak > xs[ri - 1] { e_peak } else { xs[ri - 1] };
    let left = bisect(left_inside, xs[li])?;
    let right = bisect(right_inside, xs[ri])?;
    let background = base(e_peak);
    Ok(PeakMetrics {
        e_peak,
        height: peak + background,
        width: right - left,
        left_cross: left,
        right_cross: right,
        background,
        refined,
    })
}

pub fn peak_metrics(
    p: &DimensionlessParams,
    ch: Channel,
    window: (f64, f64),
    baseline: Baseline,
) -> Result<PeakMetrics, SpectrumError> {
    let model = SpectrumModel::new(p)?;
    peak_metrics_fn(|e| model.density(e, ch), window, baseline)
}

/// `Re Ẽ₁ ± k|Im Ẽ₁|` around the least-damped eigenvalue.
pub fn pole_window(e1: Complex64, k: f64) -> (f64, f64) {
    (e1.re - k * e1.im.abs(), e1.re + k * e1.im.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    pub channel: Channel,
    /// Half-width of the peak window in units of `|Im Ẽ₁|`.
    pub window_halfwidths: f64,
    pub baseline: Baseline,
    /// Fixed window instead of the pole-centred one.
    pub window: Option<(f64, f64)>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            channel: Channel::One,
            window_halfwidths: 5.0,
            baseline: Baseline::Linear,
            window: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EtaSweepEntry {
    pub eta: f64,
    pub eigenvalues: Option<[Complex64; 3]>,
    pub metrics: Result<PeakMetrics, SpectrumError>,
}

impl EtaSweepEntry {
    pub fn e1(&self) -> Option<Complex64> {
        self.eigenvalues.map(|v| v[0])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EtaSweepResult {
    pub entries: Vec<EtaSweepEntry>,
}

fn sweep_one(p: &DimensionlessParams, eta: f64, opts: &SweepOptions) -> EtaSweepEntry {
    let q = p.with_eta(eta);
    let model = match SpectrumModel::new(&q) {
        Ok(m) => m,
        Err(e) => {
            return EtaSweepEntry {
                eta,
                eigenvalues: None,
                metrics: Err(e),
            }
        }
    };
    let ev = model.eigenvalues();
    let e1 = ev[0];
    let metrics = if opts.window.is_none() && e1.im.abs() <= 1e-13 * e1.re.abs().max(1.0) {
        // exact BIC: the pole has left the spectrum and the width is zero
        model.density(e1.re, opts.channel).map(|h| PeakMetrics {
            e_peak: e1.re,
            height: h,
            width: 0.0,
            left_cross: e1.re,
            right_cross: e1.re,
            background: 0.0,
            refined: false,
        })
    } else {
        let window = opts.window.unwrap_or_else(|| pole_window(e1, opts.window_halfwidths));
        peak_metrics_fn(|e| model.density(e, opts.channel), window, opts.baseline)
    };
    EtaSweepEntry {
        eta,
        eigenvalues: Some(ev),
        metrics,
    }
}

/// Per-η peak metrics; failures are recorded per entry. Order follows the
/// input list.
pub fn sweep_eta(p: &DimensionlessParams, etas: &[f64], opts: &SweepOptions) -> EtaSweepResult {
    EtaSweepResult {
        entries: etas.par_iter().map(|&eta| sweep_one(p, eta, opts)).collect(),
    }
}

const PERMUTATIONS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Eigenvalue triples along the η path, matched to the previous step by the
/// closest permutation instead of re-sorting.
pub fn eigentrack(p: &DimensionlessParams, etas: &[f64]) -> Result<Vec<[Complex64; 3]>, SpectrumError> {
    let mut out: Vec<[Complex64; 3]> = Vec::with_capacity(etas.len());
    for &eta in etas {
        let v = heff::eigensystem(&heff::build(&p.with_eta(eta)))?.values();
        let scale = v.iter().map(|z| z.norm()).fold(1.0, f64::max);
        for i in 0..3 {
            for j in 0..i {
                if (v[i] - v[j]).norm() < 1e-12 * scale {
                    return Err(SpectrumError::TrackingAmbiguity(v[i], v[j]));
                }
            }
        }
        let next = match out.last() {
            None => v,
            Some(prev) => {
                let cost = |perm: &[usize; 3]| -> f64 { (0..3).map(|k| (v[perm[k]] - prev[k]).norm_sqr()).sum() };
                let best = PERMUTATIONS
                    .iter()
                    .min_by(|x, y| cost(x).total_cmp(&cost(y)))
                    .unwrap();
                best.map(|k| v[k])
            }
        };
        out.push(next);
    }
    Ok(out)
}
