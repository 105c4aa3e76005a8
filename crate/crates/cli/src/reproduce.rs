//! Bundled caption parameter sets for the three figures, kept verbatim.
//! Each recipe writes its data files into one directory and returns
//! PASS/FLAG lines comparing against the quoted numbers.

use crate::commands::{sweep_table, width_table};
use crate::emit::{table_csv, Table};
use crate::error::CliError;
use biclab_core::bic::{self, BicInputs};
use biclab_core::params::DimensionlessParams;
use biclab_core::spectrum::{self, Channel, SweepOptions};
use biclab_core::{eigensystem, build, Complex64};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Figure {
    Fig3,
    Fig4,
    Fig5,
}

#[derive(Debug, Default)]
pub struct Summary {
    pub lines: Vec<String>,
}

impl Summary {
    fn check(&mut self, ok: bool, text: String) {
        self.lines.push(format!("{} {text}", if ok { "PASS" } else { "FLAG" }));
    }

    pub fn flags(&self) -> usize {
        self.lines.iter().filter(|l| l.starts_with("FLAG")).count()
    }

    pub fn text(&self) -> String {
        let mut s = self.lines.join("\n");
        s.push('\n');
        s
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn eig(p: &DimensionlessParams) -> Result<[Complex64; 3], CliError> {
    Ok(eigensystem(&build(p))?.values())
}

fn within_factor(x: f64, target: f64, f: f64) -> bool {
    x.signum() == target.signum() && (x / target).abs() <= f && (target / x).abs() <= f
}

fn write(dir: &Path, name: &str, t: &Table) -> Result<(), CliError> {
    let path = dir.join(name);
    std::fs::write(&path, table_csv(t)).map_err(|e| CliError::io(path.display(), e))
}

fn spectrum_table(p: &DimensionlessParams, lo: f64, hi: f64, n: usize) -> Result<Table, CliError> {
    let s = spectrum::spectrum_series(p, lo, hi, n, Channel::One)?;
    let mut t = Table::new(&["E_tilde", "S_n"]);
    for (&e, &v) in s.grid.iter().zip(&s.values) {
        t.push(vec![e, v]);
    }
    Ok(t)
}

pub fn fig3_params() -> DimensionlessParams {
    let (g1, g2) = (4.0, 1.91);
    DimensionlessParams {
        g1,
        g2,
        g12: (g1 * g2).sqrt(),
        q1: -0.8,
        q2: -0.6,
        delta1: 0.45,
        delta2: 1.88,
        delta: 0.1,
        ..Default::default()
    }
}

pub fn fig4_params() -> DimensionlessParams {
    let (g1, g2) = (3.01, 2.0);
    DimensionlessParams {
        g1,
        g2,
        g12: (g1 * g2).sqrt(),
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

pub fn fig5_params() -> DimensionlessParams {
    let g1 = 3.0;
    DimensionlessParams {
        g1,
        g12: (g1 * 2.0f64).sqrt(),
        ..fig4_params()
    }
}

fn with_g(p: DimensionlessParams, g1: f64, g2: f64) -> DimensionlessParams {
    DimensionlessParams {
        g1,
        g2,
        g12: (g1 * g2).sqrt(),
        ..p
    }
}

fn with_decay(p: DimensionlessParams, gamma: f64, eta: f64) -> DimensionlessParams {
    DimensionlessParams {
        gamma1: gamma,
        gamma2: gamma,
        eta,
        ..p
    }
}

fn fig3(dir: &Path) -> Result<Summary, CliError> {
    let mut s = Summary::default();
    let base = fig3_params();
    let ev = eig(&base)?;
    for (label, want) in [("E1", c(1.29, -1e-4)), ("E2", c(-0.538, -6.459)), ("E3", c(1.571, -0.450))] {
        let got = *ev
            .iter()
            .min_by(|a, b| (*a - want).norm().total_cmp(&(*b - want).norm()))
            .unwrap();
        let ok = (got.re - want.re).abs() <= 0.02 && (got.im - want.im).abs() <= 0.02;
        s.check(
            ok,
            format!("fig3 {label} = {:.6}{:+.6e}i vs caption {}{:+}i (0.02 per component)", got.re, got.im, want.re, want.im),
        );
    }
    let near = ev[0];
    s.check(
        within_factor(near.im, -1e-4, 2.0),
        format!("fig3 Im E1 = {:.6e} vs caption -1e-4 (factor 2)", near.im),
    );

    let bic_set = with_g(base, 4.0, 2.0);
    let cert = bic::certify(&bic_set, 1e-6)?;
    s.check(
        cert.is_bic,
        format!(
            "fig3 g2 = 2 gives a BIC: min |Im E| = {:.3e} at Re E = {:.6} (caption detunings are rounded)",
            cert.min_abs_im, cert.lambda_est
        ),
    );

    let vic = with_decay(base, 0.01, 0.01);
    let ev_vic = eig(&vic)?;
    let rel = (ev_vic[0].im - near.im).abs() / near.im.abs();
    s.check(
        rel < 0.05,
        format!(
            "fig3 gamma = eta = 0.01 reproduces the gamma = 0 line: Im E1 {:.6e} vs {:.6e} (rel {:.2e})",
            ev_vic[0].im, near.im, rel
        ),
    );
    let cert = bic::certify(&with_decay(bic_set, 0.01, 0.01), 1e-6)?;
    s.check(
        cert.is_bic,
        format!("fig3 g2 = 2, gamma = eta = 0.01 keeps the BIC: min |Im E| = {:.3e}", cert.min_abs_im),
    );

    let quoted = with_decay(bic_set, 0.01, 0.0101);
    let res = bic::vic_residual(&quoted);
    s.check(
        res.abs() < 1e-12,
        format!("fig3 caption eta = 0.0101 with gamma = 0.01: eta^2 - gamma1*gamma2 = {res:.3e}, not zero"),
    );
    let ev_q = eig(&quoted)?;
    s.check(
        ev_q[0].im <= 0.0,
        format!(
            "fig3 g2 = 2, gamma = 0.01, eta = 0.0101: Im E1 = {:+.3e} (positive means gain; eta exceeds sqrt(gamma1*gamma2))",
            ev_q[0].im
        ),
    );

    let no_vic = eig(&with_decay(bic_set, 0.01, 0.0))?;
    s.check(
        no_vic[0].im.abs() > 1e-6,
        format!("fig3 gamma = 0.01, eta = 0 destroys the BIC: Im E1 = {:.3e}", no_vic[0].im),
    );

    let text_variant = eig(&with_g(base, 3.91, 2.0))?;
    s.check(
        within_factor(text_variant[0].im, -1e-4, 2.0),
        format!(
            "fig3 reading 'deviate g1' (g1 = 3.91, g2 = 2): E1 = {:.6}{:+.3e}i; only the caption's g2 = 1.91 matches -1e-4",
            text_variant[0].re, text_variant[0].im
        ),
    );

    let (lo, hi, n) = (0.5, 2.5, 2001);
    write(dir, "fig3_spectrum_gamma0.csv", &spectrum_table(&base, lo, hi, n)?)?;
    write(dir, "fig3_spectrum_vic.csv", &spectrum_table(&vic, lo, hi, n)?)?;
    write(dir, "fig3_spectrum_eta0101.csv", &spectrum_table(&with_decay(base, 0.01, 0.0101), lo, hi, n)?)?;
    write(dir, "fig3_spectrum_eta0.csv", &spectrum_table(&with_decay(base, 0.01, 0.0), lo, hi, n)?)?;
    let mut t = Table::new(&["re_E1", "im_E1", "re_E2", "im_E2", "re_E3", "im_E3"]);
    for p in [base, vic, bic_set] {
        let v = eig(&p)?;
        t.push(v.iter().flat_map(|z| [z.re, z.im]).collect());
    }
    write(dir, "fig3_eigenvalues.csv", &t)?;
    Ok(s)
}

const FIG4_ETAS: [f64; 4] = [1.0, 0.999, 0.99, 0.9];

fn fig4(dir: &Path) -> Result<Summary, CliError> {
    let mut s = Summary::default();
    let base = fig4_params();
    let ev = eig(&base)?;
    s.check(
        (ev[0].re - 6.763).abs() < 0.05 && within_factor(ev[0].im, -1e-6, 3.0),
        format!("fig4 E1 = {:.6}{:+.3e}i vs caption 6.763-1e-6i (0.05 in Re, factor 3 in Im)", ev[0].re, ev[0].im),
    );
    let tr_b: f64 = -(base.g1 + base.gamma1 + base.g2 + base.gamma2 + 1.0);
    let caption_sum = -1e-6 - 7.182 - 8.828;
    let im_sum: f64 = ev.iter().map(|z| z.im).sum();
    s.check(
        (caption_sum - tr_b).abs() < 0.01,
        format!(
            "fig4 caption E2 = 6.051-7.182i, E3 = 0.227-8.828i: Im parts sum to {caption_sum:.3}, tr B = {tr_b:.3}; computed E2 = {:.3}{:+.3}i, E3 = {:.3}{:+.3}i (sum {im_sum:.3})",
            ev[1].re, ev[1].im, ev[2].re, ev[2].im
        ),
    );

    let opts = SweepOptions::default();
    let res = spectrum::sweep_eta(&base, &FIG4_ETAS, &opts);
    write(dir, "fig4_sweep.csv", &sweep_table(&res))?;
    let widths: Vec<f64> = res
        .entries
        .iter()
        .map(|e| e.metrics.as_ref().map_or(f64::NAN, |m| m.width))
        .collect();
    let ims: Vec<f64> = res.entries.iter().map(|e| e.e1().map_or(f64::NAN, |z| z.im)).collect();

    for (k, (quoted_w, factor)) in [(1e-6, 3.0), (2.0e-5, 3.0), (0.025, 3.0), (0.25, 3.0)].into_iter().enumerate() {
        let eta = FIG4_ETAS[k];
        s.check(
            within_factor(widths[k], quoted_w, factor),
            format!(
                "fig4 width eta = {eta}: W = {:.3e} vs quoted {quoted_w:e} (factor {factor}); 2|Im E1| = {:.3e}",
                widths[k],
                2.0 * ims[k].abs()
            ),
        );
    }
    for (k, target) in [(1, -1e-3), (2, -1e-2), (3, -1e-1)] {
        s.check(
            within_factor(ims[k], target, 2.0),
            format!("fig4 Im E1 at eta = {}: {:.4e} vs {target:e} (factor 2)", FIG4_ETAS[k], ims[k]),
        );
    }
    let monotone = widths.windows(2).all(|w| w[0] < w[1]);
    s.check(
        monotone && widths[3] / widths[0].max(1e-300) >= 1e4,
        format!("fig4 W strictly decreasing as eta -> 1, span {:.3e}", widths[3] / widths[0].max(1e-300)),
    );

    let h = 1e-4;
    let up = eig(&base.with_eta(1.0 + h))?[0].im;
    let dn = eig(&base.with_eta(1.0 - h))?[0].im;
    let slope = (up - dn) / (2.0 * h);
    s.check(
        (slope - 0.952).abs() <= 0.05 * 0.952,
        format!("fig4 dIm(E1)/deta at eta = 1: {slope:.4} vs 0.952 (5%)"),
    );

    for (k, &eta) in FIG4_ETAS.iter().enumerate() {
        let name = format!("fig4_spectrum_{}.csv", ["a", "b", "c", "d"][k]);
        let t = spectrum_table(&base.with_eta(eta), 5.5, 8.0, 2001)?;
        write(dir, &name, &t)?;
    }
    let path: Vec<f64> = (0..=100).map(|k| 1.0 - 0.001 * k as f64).collect();
    let track = spectrum::eigentrack(&base, &path)?;
    let mut t = Table::new(&["eta", "re_E1", "im_E1", "re_E2", "im_E2", "re_E3", "im_E3"]);
    for (eta, v) in path.iter().zip(&track) {
        let mut row = vec![*eta];
        row.extend(v.iter().flat_map(|z| [z.re, z.im]));
        t.push(row);
    }
    write(dir, "fig4_track.csv", &t)?;
    Ok(s)
}

fn fig5(dir: &Path) -> Result<Summary, CliError> {
    let mut s = Summary::default();
    let base = fig5_params();
    let etas: Vec<f64> = (0..=100).map(|k| if k == 100 { 1.0 } else { 0.9 + 0.001 * k as f64 }).collect();
    let opts = SweepOptions::default();

    let res = spectrum::sweep_eta(&base, &etas, &opts);
    write(dir, "fig5_width.csv", &width_table(&res))?;
    let exact = bic::solve_bic(&BicInputs::from(&base))?;
    let exact_params = DimensionlessParams {
        delta1: exact.delta1_req,
        delta2: exact.delta2_req,
        ..base
    };
    let res_exact = spectrum::sweep_eta(&exact_params, &etas, &opts);
    write(dir, "fig5_width_exact.csv", &width_table(&res_exact))?;

    let e1 = eig(&base)?[0];
    s.check(
        e1.im.abs() < 1e-9,
        format!(
            "fig5 caption detunings 6.4, 6.6 are rounded: at eta = 1, Im E1 = {:.3e}; exact BIC needs delta1 = {:.5}, delta2 = {:.5}",
            e1.im, exact.delta1_req, exact.delta2_req
        ),
    );
    for (label, r) in [("caption", &res), ("exact", &res_exact)] {
        let w: Vec<f64> = r
            .entries
            .iter()
            .map(|e| e.metrics.as_ref().map_or(f64::NAN, |m| m.width))
            .collect();
        // NaN marks an eta where the window holds no dominant peak (a Fano
        // dip outweighs it)
        let failures = w.iter().filter(|x| !x.is_finite()).count();
        let monotone = w.windows(2).all(|p| p[1] < p[0]);
        s.check(
            failures == 0 && monotone,
            format!(
                "fig5 {label} detunings: W decreasing on [0.9, 1] ({} points, {failures} without a dominant peak), W(0.9) = {:.3e}, W(1) = {:.3e}",
                w.len(),
                w[0],
                w[w.len() - 1]
            ),
        );
    }
    let w_exact = res_exact.entries.last().and_then(|e| e.metrics.as_ref().ok()).map_or(f64::NAN, |m| m.width);
    s.check(w_exact < 1e-9, format!("fig5 exact BIC at eta = 1: W = {w_exact:.3e}"));
    Ok(s)
}

pub fn reproduce(fig: Figure, dir: &Path) -> Result<Summary, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir.display(), e))?;
    let s = match fig {
        Figure::Fig3 => fig3(dir)?,
        Figure::Fig4 => fig4(dir)?,
        Figure::Fig5 => fig5(dir)?,
    };
    let path = dir.join("summary.txt");
    std::fs::write(&path, s.text()).map_err(|e| CliError::io(path.display(), e))?;
    Ok(s)
}
