//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines always reach the terminal.

use biclab_core::bic::{self, BicInputs};
use biclab_core::heff::{char_poly_b, expand_char_poly_real};
use biclab_core::microscopic::{reference_levels, reference_model};
use biclab_core::oracle::{self, BinGrid, GridSpec};
use biclab_core::params::DimensionlessParams;
use biclab_core::quadrature::{self, QuadSpec};
use biclab_core::spectrum::{self, Baseline, SweepOptions};
use biclab_core::{build, eigensystem, Complex64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn fig3() -> DimensionlessParams {
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

fn fig4() -> DimensionlessParams {
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

fn within_factor(x: f64, target: f64, f: f64) -> bool {
    x.signum() == target.signum() && (x / target).abs() <= f && (target / x).abs() <= f
}

fn fig3_eigenvalues() -> Outcome {
    let p = fig3();
    let reps = 1000;
    let start = Instant::now();
    let mut ev = [Complex64::new(0.0, 0.0); 3];
    for _ in 0..reps {
        ev = eigensystem(&build(&p)).unwrap().values();
    }
    let per_call = start.elapsed().as_secs_f64() / reps as f64;
    let want = [
        Complex64::new(1.29, -1e-4),
        Complex64::new(1.571, -0.450),
        Complex64::new(-0.538, -6.459),
    ];
    let mut worst = 0.0f64;
    for (z, w) in ev.iter().zip(&want) {
        worst = worst.max((z.re - w.re).abs()).max((z.im - w.im).abs());
    }
    outcome(
        worst <= 0.02 && per_call < 1e-3,
        format!("max component error {worst:.2e} (tol 0.02), {:.1} us per solve (limit 1 ms)", per_call * 1e6),
    )
}

fn closed_form_bic() -> Outcome {
    let (g1, g2) = (3.0, 2.0);
    let sol = bic::solve_bic(&BicInputs {
        g1,
        g2,
        g12: (g1 * g2).sqrt(),
        q1: -0.8,
        q2: 0.54,
        delta: 0.1,
        gamma1: 1.0,
        gamma2: 1.0,
        inv_kca: 0.0,
    })
    .unwrap();
    let res = sol.equation_residuals.iter().copied().fold(0.0, f64::max);
    let ok = (sol.lambda - 6.7623).abs() <= 1e-3
        && (sol.delta1_req - 6.422).abs() <= 1e-3
        && (sol.delta2_req - 6.620).abs() <= 1e-3
        && (sol.delta1_req - 6.4).abs() <= 0.05
        && (sol.delta2_req - 6.6).abs() <= 0.05
        && (sol.lambda - 6.763).abs() <= 0.05
        && res < 1e-12;
    outcome(
        ok,
        format!(
            "lambda {:.6}, delta1 {:.6}, delta2 {:.6}, residual {res:.1e}",
            sol.lambda, sol.delta1_req, sol.delta2_req
        ),
    )
}

/// A draw whose closed-form BIC is well defined.
fn random_inputs(rng: &mut ChaCha8Rng) -> BicInputs {
    loop {
        let g1: f64 = rng.gen_range(0.1..5.0);
        let g2: f64 = rng.gen_range(0.1..5.0);
        let gamma1: f64 = rng.gen_range(0.01..2.0);
        let gamma2: f64 = rng.gen_range(0.01..2.0);
        let r = (gamma1 / gamma2).sqrt();
        let g12 = (g1 * g2).sqrt();
        let den = g1 - g12 * r;
        let d = (g2 * gamma1).sqrt() - (g1 * gamma2).sqrt();
        if den.abs() < 0.05 || d.abs() < 0.05 {
            continue;
        }
        return BicInputs {
            g1,
            g2,
            g12,
            q1: rng.gen_range(-2.0..2.0),
            q2: rng.gen_range(-2.0..2.0),
            delta: rng.gen_range(-1.0..1.0),
            gamma1,
            gamma2,
            inv_kca: rng.gen_range(-1.0..1.0),
        };
    }
}

fn vic_necessity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20240611);
    let mut false_bic = 0;
    let mut missed = 0;
    let mut min_im_no_vic = f64::INFINITY;
    let mut max_im_vic = 0.0f64;
    for _ in 0..1000 {
        let inp = random_inputs(&mut rng);
        let sol = bic::solve_bic(&inp).unwrap();
        let without = sol.params.with_eta(0.0);
        let c0 = bic::certify(&without, 1e-6).unwrap();
        min_im_no_vic = min_im_no_vic.min(c0.min_abs_im);
        if c0.is_bic {
            false_bic += 1;
        }
        let c1 = bic::certify(&sol.params, 1e-8).unwrap();
        max_im_vic = max_im_vic.max(c1.min_abs_im);
        if !c1.is_bic {
            missed += 1;
        }
    }
    outcome(
        false_bic == 0 && missed == 0,
        format!(
            "eta = 0: min |Im E| {min_im_no_vic:.2e} (> 1e-6, {false_bic} violations); eta = sqrt(gamma1 gamma2): max |Im E1| {max_im_vic:.2e} (< 1e-8, {missed} violations)"
        ),
    )
}

fn fig4_trajectory() -> Outcome {
    let p = fig4();
    let im = |eta: f64| eigensystem(&build(&p.with_eta(eta))).unwrap().values()[0].im;
    let mut ok = true;
    let mut parts = Vec::new();
    for (eta, target) in [(0.999, -1e-3), (0.99, -1e-2), (0.9, -1e-1)] {
        let v = im(eta);
        ok &= within_factor(v, target, 2.0);
        parts.push(format!("Im E1({eta}) = {v:.3e}"));
    }
    let h = 1e-4;
    let slope = (im(1.0 + h) - im(1.0 - h)) / (2.0 * h);
    ok &= (slope - 0.952).abs() <= 0.05 * 0.952;
    parts.push(format!("slope {slope:.4} (0.952 +- 5%)"));
    outcome(ok, parts.join(", "))
}

fn width_ordering() -> (Outcome, String) {
    let etas = [0.9, 0.99, 0.999, 1.0];
    let res = spectrum::sweep_eta(&fig4(), &etas, &SweepOptions::default());
    let w: Vec<f64> = res
        .entries
        .iter()
        .map(|e| e.metrics.as_ref().map_or(f64::NAN, |m| m.width))
        .collect();
    let monotone = w.windows(2).all(|p| p[1] < p[0]);
    let span = w[0] / w[3];
    let ok = monotone && within_factor(w[1], 0.025, 3.0) && within_factor(w[0], 0.25, 3.0) && span >= 1e4;
    let flag = format!(
        "FLAG [5] W(0.999) = {:.3e} vs quoted 2.0e-5 (2|Im E1| = {:.3e}); report-only",
        w[2],
        2.0 * res.entries[2].e1().unwrap().im.abs()
    );
    (
        outcome(
            ok,
            format!(
                "W(0.9) {:.3e}, W(0.99) {:.3e}, W(0.999) {:.3e}, W(1) {:.3e}, span {span:.2e}",
                w[0], w[1], w[2], w[3]
            ),
        ),
        flag,
    )
}

fn char_poly_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_closed = 0.0f64;
    let mut worst_free = 0.0f64;
    for _ in 0..1000 {
        let g1: f64 = rng.gen_range(0.0..5.0);
        let g2: f64 = rng.gen_range(0.0..5.0);
        let gamma1: f64 = rng.gen_range(0.0..2.0);
        let gamma2: f64 = rng.gen_range(0.0..2.0);
        let p = DimensionlessParams {
            g1,
            g2,
            g12: (g1 * g2).sqrt(),
            q1: rng.gen_range(-2.0..2.0),
            q2: rng.gen_range(-2.0..2.0),
            delta1: rng.gen_range(-5.0..5.0),
            delta2: rng.gen_range(-5.0..5.0),
            delta: rng.gen_range(-1.0..1.0),
            gamma1,
            gamma2,
            eta: rng.gen_range(-1.0..1.0) * (gamma1 * gamma2).sqrt(),
            inv_kca: rng.gen_range(-2.0..2.0),
        };
        let (e2, e1, e0) = expand_char_poly_real(&build(&p).b);
        let cf = char_poly_b(&p);
        worst_closed = worst_closed
            .max((e2 - cf.g2).abs())
            .max((e1 - cf.g1).abs())
            .max((e0 - cf.g0).abs());

        let free = DimensionlessParams {
            g12: rng.gen_range(-3.0..3.0),
            ..p
        };
        let (_, _, f0) = expand_char_poly_real(&build(&free).b);
        let expect = free.gamma1 * free.gamma2 - (free.g12 + free.eta - (free.g1 * free.g2).sqrt()).powi(2);
        worst_free = worst_free.max((f0 - expect).abs());
    }
    outcome(
        worst_closed <= 1e-10 && worst_free <= 1e-10,
        format!("closed form {worst_closed:.1e}, free g12 constant term {worst_free:.1e} (tol 1e-10)"),
    )
}

fn resolvent_identity() -> Outcome {
    let start = Instant::now();
    let dm = oracle::discretize(&reference_model(), &reference_levels(), &GridSpec::reference()).unwrap();
    let report = oracle::resolvent_check(&dm, &dm.default_probes()).unwrap();
    let secs = start.elapsed().as_secs_f64();
    outcome(
        report.probes.len() == 8 && report.max_dev < 1e-10 && secs < 10.0,
        format!(
            "dimension {}, max deviation {:.2e} over {} probes (tol 1e-10), {secs:.2} s (limit 10 s)",
            dm.dim(),
            report.max_dev,
            report.probes.len()
        ),
    )
}

fn pv_quadrature() -> (Outcome, String) {
    let spec = QuadSpec::default();
    let ln2 = quadrature::pv_integral(|_| 1.0, 1.0, 3.0, &spec).unwrap().value;
    let e_ln2 = (ln2 + 2f64.ln()).abs();
    let mut e_sym = 0.0f64;
    for (e3, f) in [(1.0, 1.0), (2.5, -0.7), (10.0, 3.0)] {
        e_sym = e_sym.max(quadrature::pv_integral(move |_| f, e3, 2.0 * e3, &spec).unwrap().value.abs());
    }
    let model = reference_model();
    let shapes = [model.lambda1, model.lambda2, model.v3];
    // E3 = 10 sits on a bin edge of this grid
    let grid = BinGrid::uniform(0.0, 40.0, 4000).unwrap();
    let de = grid.widths[0];
    let mut e_disc = 0.0f64;
    let mut e_literal = 0.0f64;
    for a in &shapes {
        for b in &shapes {
            let f = |e: f64| a.eval(e) * b.eval(e);
            let pv = quadrature::pv_integral(f, model.e3, f64::INFINITY, &spec).unwrap().value;
            e_disc = e_disc.max((oracle::discrete_pv(&grid, f, model.e3, 1e-9) - pv).abs());
            e_literal = e_literal.max((oracle::discrete_pv(&grid, f, model.e3, 10.0 * de) - pv).abs());
        }
    }
    let note = format!(
        "NOTE [8] at eps = 10 dE the discrete sum is off by {e_literal:.2e}: a first-order bias ~ pi eps f'(E3) that vanishes only as eps -> 0"
    );
    (
        outcome(
            e_ln2 <= 1e-10 && e_sym <= 1e-12 && e_disc <= 1e-4,
            format!(
                "-ln 2 error {e_ln2:.1e} (1e-10), symmetric {e_sym:.1e} (1e-12), discrete sum as eps -> 0+ at N_E = 4000: {e_disc:.1e} (1e-4)"
            ),
        ),
        note,
    )
}

fn lorentzian_calibration() -> Outcome {
    let (c, h, w) = (1.7, 2.5, 3e-3);
    let f = |e: f64| -> Result<f64, spectrum::SpectrumError> { Ok(h / (1.0 + ((e - c) / w).powi(2))) };
    let m = spectrum::peak_metrics_fn(f, (c - 7.0 * w, c + 9.0 * w), Baseline::None).unwrap();
    let want = 2.0 * w * (std::f64::consts::E - 1.0).sqrt();
    let rel_w = (m.width - want).abs() / want;
    let rel_c = (m.e_peak - c).abs() / c;
    let rel_h = (m.height - h).abs() / h;
    let worst = rel_w.max(rel_c).max(rel_h);
    outcome(
        worst <= 1e-9,
        format!("relative errors: width {rel_w:.1e}, centre {rel_c:.1e}, height {rel_h:.1e} (tol 1e-9)"),
    )
}

fn read_dir_sorted(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_bic-lab");
    let mut ok = true;
    let mut parts = Vec::new();
    for fig in ["fig3", "fig4", "fig5"] {
        let mut runs = Vec::new();
        for k in 0..2 {
            let dir = tmp.path().join(format!("{fig}_{k}"));
            let status = Command::new(bin)
                .args(["reproduce", fig, "--quiet", "--out"])
                .arg(&dir)
                .status()
                .unwrap();
            ok &= status.success();
            runs.push(read_dir_sorted(&dir));
        }
        let csvs = runs[0].iter().filter(|(n, _)| n.ends_with(".csv")).count();
        let same = runs[0] == runs[1];
        ok &= same && csvs > 0;
        parts.push(format!("{fig}: {csvs} CSVs {}", if same { "identical" } else { "DIFFER" }));
    }
    outcome(ok, parts.join(", "))
}

fn main() {
    // cargo passes harness flags such as --list; only a list request needs
    // special handling
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let mut failures = 0;
    let mut report = |id: u32, name: &str, o: Outcome| {
        println!("{} [{id}] {name}: {}", if o.ok { "PASS" } else { "FAIL" }, o.detail);
        if !o.ok {
            failures += 1;
        }
    };
    report(1, "Fig. 3 eigenvalues", fig3_eigenvalues());
    report(2, "closed-form BIC solve", closed_form_bic());
    report(3, "VIC necessity", vic_necessity());
    report(4, "Fig. 4(e) trajectory", fig4_trajectory());
    let (w, flag) = width_ordering();
    report(5, "width ordering and magnitudes", w);
    println!("{flag}");
    report(6, "characteristic polynomial of B", char_poly_identity());
    report(7, "resolvent identity", resolvent_identity());
    let (pv, note) = pv_quadrature();
    report(8, "principal-value quadrature", pv);
    println!("{note}");
    report(9, "Lorentzian width calibration", lorentzian_calibration());
    report(10, "reproduce determinism", determinism());
    if failures > 0 {
        eprintln!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
