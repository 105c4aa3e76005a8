use crate::config::Config;
use crate::emit::{self, Output, Table};
use crate::error::CliError;
use biclab_core::bic;
use biclab_core::dressing;
use biclab_core::microscopic::{derive_couplings, to_dimensionless};
use biclab_core::oracle;
use biclab_core::params::validate;
use biclab_core::spectrum::{self, EtaSweepResult};
use serde_json::json;

pub fn dress(cfg: &Config) -> Result<Output, CliError> {
    let input = cfg.dressing()?;
    let pair = dressing::dress(&input)?;
    let feasibility = dressing::vic_feasibility(input.omega_m, input.gamma1_bare, input.gamma2_bare)?;
    Ok(Output::Record(json!({
        "theta": pair.theta,
        "c1": pair.c1,
        "s1": pair.s1,
        "splitting": pair.splitting,
        "vic_feasibility": feasibility,
    })))
}

pub fn solve(cfg: &Config) -> Result<Output, CliError> {
    let inputs = cfg.bic_inputs()?;
    let sol = bic::solve_bic(&inputs)?;
    let max_eq = sol.equation_residuals.iter().copied().fold(0.0, f64::max);
    Ok(Output::Record(json!({
        "lambda": sol.lambda,
        "delta1": sol.delta1_req,
        "delta2": sol.delta2_req,
        "eta": sol.params.eta,
        "x": sol.x,
        "residual_b": sol.residual_b,
        "residual_a": sol.residual_a,
        "max_equation_residual": max_eq,
    })))
}

pub fn certify(cfg: &Config) -> Result<Output, CliError> {
    let p = cfg.params()?;
    let c = bic::certify(&p, cfg.tol_im)?;
    let mut v = emit::to_value(&c)?;
    v["vic_residual"] = json!(bic::vic_residual(&p));
    v["tol_im"] = json!(cfg.tol_im);
    Ok(Output::Record(v))
}

pub fn spectrum(cfg: &Config) -> Result<Output, CliError> {
    let p = cfg.params()?;
    let g = cfg.grid()?;
    let s = spectrum::spectrum_series(&p, g.e_min, g.e_max, g.n_points, cfg.channel)?;
    let mut t = Table::new(&["E_tilde", "S_n"]);
    for (&e, &v) in s.grid.iter().zip(&s.values) {
        t.push(vec![e, v]);
    }
    Ok(Output::Table(t))
}

pub fn sweep_table(res: &EtaSweepResult) -> Table {
    let mut t = Table::new(&["eta", "E_peak", "height", "width", "re_E1", "im_E1"]);
    for e in &res.entries {
        let (re, im) = e.e1().map_or((f64::NAN, f64::NAN), |z| (z.re, z.im));
        let (ep, h, w) = e
            .metrics
            .as_ref()
            .map_or((f64::NAN, f64::NAN, f64::NAN), |m| (m.e_peak, m.height, m.width));
        t.push(vec![e.eta, ep, h, w, re, im]);
    }
    t
}

fn report_sweep_errors(res: &EtaSweepResult, quiet: bool) {
    if quiet {
        return;
    }
    for e in &res.entries {
        if let Err(err) = &e.metrics {
            eprintln!("warning: eta = {}: {err}", e.eta);
        }
    }
}

pub fn sweep_eta(cfg: &Config, quiet: bool) -> Result<Output, CliError> {
    let p = cfg.params()?;
    let sw = cfg.sweep()?;
    let res = spectrum::sweep_eta(&p, &sw.etas()?, &sw.options(cfg.channel));
    report_sweep_errors(&res, quiet);
    Ok(Output::Table(sweep_table(&res)))
}

pub fn width_table(res: &EtaSweepResult) -> Table {
    let mut t = Table::new(&["eta", "width", "pole_width"]);
    for e in &res.entries {
        let w = e.metrics.as_ref().map_or(f64::NAN, |m| m.width);
        let pole = e.e1().map_or(f64::NAN, |z| 2.0 * z.im.abs());
        t.push(vec![e.eta, w, pole]);
    }
    t
}

pub fn width_curve(cfg: &Config, quiet: bool) -> Result<Output, CliError> {
    let p = cfg.params()?;
    let sw = cfg.sweep()?;
    let res = spectrum::sweep_eta(&p, &sw.etas()?, &sw.options(cfg.channel));
    report_sweep_errors(&res, quiet);
    Ok(Output::Table(width_table(&res)))
}

pub fn derive(cfg: &Config) -> Result<Output, CliError> {
    let m = cfg.microscopic()?;
    let res = derive_couplings(&m.model, m.vic_convention, &m.quad)?;
    let p = validate(to_dimensionless(&res, &m.model, &m.levels)?, cfg.validation)?;
    Ok(Output::Record(json!({
        "couplings": emit::to_value(&res)?,
        "params": emit::to_value(&p)?,
        "energy_unit": res.gamma_f / 2.0,
    })))
}

pub fn validate_oracle(cfg: &Config, quiet: bool) -> Result<Output, CliError> {
    let m = cfg.microscopic()?;
    let dm = oracle::discretize(&m.model, &m.levels, &cfg.discretization())?;
    let report = oracle::resolvent_check(&dm, &dm.default_probes())?;
    let res = derive_couplings(&m.model, m.vic_convention, &m.quad)?;
    let p = to_dimensionless(&res, &m.model, &m.levels)?;
    let poles = oracle::compare_pole_approximation(&dm, &p, res.gamma_f / 2.0)?;
    if !quiet {
        if report.max_dev > 1e-10 {
            eprintln!("warning: resolvent deviation {:e} exceeds 1e-10", report.max_dev);
        }
        for k in 0..3 {
            eprintln!(
                "pole {}: constant H_eff {} vs discretized {} (|diff| {:e})",
                k + 1,
                poles.predicted[k],
                poles.discretized[k],
                poles.deviation[k]
            );
        }
    }
    let mut t = Table::new(&["z_re", "z_im", "max_dev"]);
    for pr in &report.probes {
        t.push(vec![pr.z.re, pr.z.im, pr.max_dev]);
    }
    let doc = json!({
        "dimension": dm.dim(),
        "resolvent": emit::to_value(&report)?,
        "poles": emit::to_value(&poles)?,
    });
    Ok(Output::Both(t, doc))
}
