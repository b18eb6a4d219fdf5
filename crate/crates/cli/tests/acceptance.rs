//! Acceptance criteria 1-9, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so every line is printed; exits
//! nonzero if any criterion fails. Oracles and standard errors are
//! computed here from closed forms, not taken from the library.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use beatfield::kinematics::{derive_kinematics, weak_field_metric, ParticleSpec};
use beatfield::walker::{check_phase_accord, simulate_stationary_pair, simulate_tally, WalkConfig, WalkScales, WalkSummary};
use beatfield::waves::{complexity_balance, kg_dispersion_residual, solve_bound_states, PlaneWave, Preset};
use beatfield::PhysicalConstants;

const PI: f64 = std::f64::consts::PI;
const SEEDS: [u64; 3] = [42, 7, 2024];
const STEPS: u64 = 1_000_000;
const K_SE: f64 = 4.0;

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

fn beta_grid() -> Vec<f64> {
    (0..20).map(|k| k as f64 * 0.05).chain([0.99]).collect()
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn criterion_1() -> Outcome {
    let k = PhysicalConstants::si();
    let r = derive_kinematics(ParticleSpec::new(9.1093837015e-31, 0.0).unwrap(), k).unwrap();
    let err = rel(r.rest_frequency, 1.2356e20);
    outcome(err <= 1e-4, format!("nu0={:?} Hz rel_err={err:?} (tol 1e-4)", r.rest_frequency))
}

fn criterion_2() -> Outcome {
    let mut worst = (0.0f64, String::new());
    for (m0, k) in [(1.0, PhysicalConstants::natural()), (9.1093837015e-31, PhysicalConstants::si())] {
        let (h, c) = (k.h, k.c);
        for beta in beta_grid() {
            let r = derive_kinematics(ParticleSpec::new(m0, beta).unwrap(), k).unwrap();
            let nu0 = m0 * c * c / h;
            let tau0 = 1.0 / nu0;
            let v = beta * c;
            let gamma = 1.0 / (1.0 - beta * beta).sqrt();
            let mut errs = vec![
                ("N*nu=nu0^2", rel(r.irregular_frequency * r.frequency, nu0 * nu0)),
                ("T*tau=tau0^2", rel(r.irregular_period * r.period, tau0 * tau0)),
                ("E=hN+pv", rel(h * r.irregular_frequency + r.momentum * r.speed, r.energy)),
                ("E=-L+pv", rel(-r.lagrangian + r.momentum * r.speed, r.energy)),
                ("m=m0*gamma", rel(r.mass, m0 * gamma)),
            ];
            if beta > 0.0 {
                let lb = r.lambda_b.unwrap_or(f64::NAN);
                errs.push(("p=Ev/c^2", rel(r.momentum, r.energy * v / (c * c))));
                errs.push(("lambdaB*nuB=v", rel(lb * r.nu_b, v)));
                errs.push(("lambdaB=lambdaCm/beta", rel(lb, r.lambda_cm / beta)));
            } else {
                errs.push(("p=Ev/c^2", r.momentum.abs()));
            }
            for (name, e) in errs {
                if !(e <= worst.0) {
                    worst = (e, format!("{name} at beta={beta}"));
                }
            }
        }
    }
    outcome(worst.0 <= 1e-12, format!("max_rel_err={:?} ({}) (tol 1e-12)", worst.0, worst.1))
}

struct WalkRun {
    summary: WalkSummary,
    path: Option<beatfield::walker::PathLedger>,
}

fn walk(beta: f64, seed: u64, path_mode: bool) -> WalkRun {
    let k = PhysicalConstants::natural();
    let spec = ParticleSpec::new(1.0, beta).unwrap();
    let mut c = WalkConfig::new(spec, k, STEPS, seed);
    c.path_mode = path_mode;
    let (tally, path) = simulate_tally(&c).unwrap();
    let report = derive_kinematics(spec, k).unwrap();
    let summary = WalkSummary::from_tally(tally, WalkScales::new(&report, c.kernel)).unwrap();
    WalkRun { summary, path }
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let n = STEPS as f64;
    let h = 2.0 * PI;
    let mut failures = Vec::new();
    let mut worst_z = 0.0f64;
    for beta in [0.3f64, 0.6, 0.9] {
        // Natural units, m0 = 1: nu0 = 1/h, E = gamma, tau = h/E.
        let gamma = 1.0 / (1.0 - beta * beta).sqrt();
        let nu0 = 1.0 / h;
        let nu = gamma * nu0;
        let tau = h / gamma;
        let a1 = beta * beta;
        let a2 = 1.0 - a1;
        let lambda_b = h / (gamma * beta);
        let lambda_cm = h / gamma;
        let drift_se = ((a1 * a2 * lambda_b * lambda_b + a2 * lambda_cm * lambda_cm) / n).sqrt() / tau;
        let frac_se = (a1 * a2 / n).sqrt();
        let targets = [
            ("v", beta, drift_se),
            ("N", nu0 * (1.0 - beta * beta).sqrt(), nu * frac_se),
            ("nuB", nu0 * beta * beta / (1.0 - beta * beta).sqrt(), nu * frac_se),
            ("fraction", a1, frac_se),
        ];
        for seed in SEEDS {
            let s = walk(beta, seed, false).summary;
            let measured = [s.drift_velocity, s.rate_irregular, s.rate_regular, s.regular_fraction()];
            for ((name, target, se), m) in targets.iter().zip(measured) {
                let z = (m - target).abs() / se;
                worst_z = worst_z.max(z);
                if z > K_SE {
                    failures.push(format!("{name}@beta={beta},seed={seed} z={z:?}"));
                }
            }
            if s.action_total != -h * n {
                failures.push(format!("action_total@beta={beta},seed={seed}"));
            }
            if s.action_irregular != -h * s.n_irregular as f64 {
                failures.push(format!("action_irregular@beta={beta},seed={seed}"));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        failures.is_empty(),
        format!(
            "worst |z|={worst_z:?} (tol {K_SE} SE), exact ledgers{}, {secs:.2} s{}",
            if failures.iter().any(|f| f.starts_with("action")) { " broken" } else { " hold" },
            if failures.is_empty() { String::new() } else { format!(", failed: {}", failures.join("; ")) }
        ),
    )
}

fn criterion_4() -> Outcome {
    let beta = 0.6;
    let a1 = beta * beta;
    let n = STEPS as f64;
    let k = PhysicalConstants::natural();
    let report = derive_kinematics(ParticleSpec::new(1.0, beta).unwrap(), k).unwrap();
    let se = (a1 * (1.0 - a1) / n).sqrt() / (a1 * a1);
    let mut notes = Vec::new();
    let mut passed = true;
    for seed in SEEDS {
        let run = walk(beta, seed, true);
        let a = check_phase_accord(&run.summary, &report, run.path.as_ref()).unwrap();
        let z = (a.cycles_ratio - 1.0 / a1).abs() / se;
        let compton = k.h / (report.mass * k.c);
        let path = run.path.unwrap();
        let ok = z <= K_SE && a.path_per_jump == compton && path.prefix_violations == 0;
        passed &= ok;
        notes.push(format!(
            "seed={seed}: cycles_ratio z={z:?}, path_per_jump-h/(mc)={:?}, prefix_violations={}",
            a.path_per_jump - compton,
            path.prefix_violations
        ));
    }
    outcome(passed, notes.join("; "))
}

fn criterion_5() -> Outcome {
    let k = PhysicalConstants::natural();
    let a = weak_field_metric(0.0, &k).unwrap();
    let b = weak_field_metric(-1e-6 * k.c * k.c, &k).unwrap();
    let tau0 = k.h / (k.c * k.c);
    let p = simulate_stationary_pair(1.0, &a, &b, 1e9 * tau0, &k).unwrap();
    let deficit = p.count_a as i64 - p.count_b as i64;
    let expected = 1.0 / (1.0 - 2e-6f64).sqrt();
    let quantum = 1.0 / p.count_b as f64;
    let ok = (deficit - 1000).abs() <= 1 && (p.ratio - expected).abs() <= quantum;
    outcome(
        ok,
        format!(
            "deficit={deficit} (1000 +/- 1), |ratio - 1/sqrt(1-2e-6)|={:?} (quantum {quantum:?})",
            (p.ratio - expected).abs()
        ),
    )
}

fn criterion_6() -> Outcome {
    let k = PhysicalConstants::natural();
    let (mut on, mut off, mut spread) = (0.0f64, f64::INFINITY, 0.0f64);
    for beta in beta_grid() {
        let r = derive_kinematics(ParticleSpec::new(1.0, beta).unwrap(), k).unwrap();
        let d = kg_dispersion_residual(&PlaneWave::from_report(&r)).unwrap();
        on = on.max(d.residual);
        spread = spread.max(d.form_spread());
        let bumped = PlaneWave::new(r.momentum, r.energy * 1.001, 1.0, k).unwrap();
        off = off.min(kg_dispersion_residual(&bumped).unwrap().residual);
    }
    outcome(
        on <= 1e-12 && off >= 1e-3 && spread <= 1e-12,
        format!("on_shell_max={on:?} (<= 1e-12) off_shell_min={off:?} (>= 1e-3) form_spread={spread:?} (<= 1e-12)"),
    )
}

fn level_errors(preset: Preset, n_points: usize, levels: usize) -> Vec<f64> {
    let k = PhysicalConstants::natural();
    let hbar = 1.0;
    let problem = preset.problem(n_points, 1.0, k).unwrap();
    let width = problem.grid.length();
    solve_bound_states(&problem, levels)
        .unwrap()
        .energies()
        .into_iter()
        .enumerate()
        .map(|(i, e)| {
            let exact = match preset {
                Preset::Box => ((i + 1) as f64 * PI * hbar / width).powi(2) / 2.0,
                _ => hbar * (i as f64 + 0.5),
            };
            rel(e, exact)
        })
        .collect()
}

fn criterion_7() -> Outcome {
    let max = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
    let box_err = level_errors(Preset::Box, 2001, 3);
    let osc_err = level_errors(Preset::Oscillator, 2001, 5);
    let box_coarse = level_errors(Preset::Box, 1001, 3);
    let osc_coarse = level_errors(Preset::Oscillator, 1001, 5);
    let ratio = |coarse: &[f64], fine: &[f64]| {
        coarse
            .iter()
            .zip(fine)
            .map(|(c, f)| c / f)
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(r), hi.max(r)))
    };
    let (bl, bh) = ratio(&box_coarse, &box_err);
    let (ol, oh) = ratio(&osc_coarse, &osc_err);
    let in_band = |lo: f64, hi: f64| lo >= 3.8 && hi <= 4.2;
    outcome(
        max(&box_err) <= 1e-3 && max(&osc_err) <= 5e-3 && in_band(bl, bh) && in_band(ol, oh),
        format!(
            "box_max_err={:?} (<= 1e-3) oscillator_max_err={:?} (<= 5e-3) refinement box [{bl:.4}, {bh:.4}] oscillator [{ol:.4}, {oh:.4}] (within [3.8, 4.2])",
            max(&box_err),
            max(&osc_err)
        ),
    )
}

fn criterion_8() -> Outcome {
    let k = PhysicalConstants::natural();
    let h = k.h;
    let m0 = 1.0;
    let (mut worst_res, mut worst_q2) = (0.0f64, 0.0f64);
    for (preset, levels) in [(Preset::Box, 3), (Preset::Oscillator, 5)] {
        let problem = preset.problem(2000, m0, k).unwrap();
        let sol = solve_bound_states(&problem, levels).unwrap();
        let report = complexity_balance(&sol, &problem).unwrap();
        let dx = problem.grid.spacing();
        for (lvl, level) in report.levels.iter().zip(&sol.levels) {
            let psi: Vec<f64> = level.psi.iter().map(|z| z.re).collect();
            // q² from the wavefunction's second difference, interior nodes.
            let integral: f64 = (1..psi.len() - 1)
                .map(|i| psi[i] * (psi[i + 1] - 2.0 * psi[i] + psi[i - 1]) / (dx * dx))
                .sum::<f64>()
                * dx;
            let q2 = -integral / (8.0 * PI * PI);
            let q2_kin = (m0 / h) * (lvl.kinetic / h);
            worst_q2 = worst_q2.max(rel(q2, q2_kin)).max(rel(lvl.q2, q2_kin));
            let scale = m0 * lvl.energy.abs().max(lvl.kinetic + lvl.v_psi.abs()) / (h * h);
            let residual = q2 + m0 * lvl.v_psi / (h * h) - m0 * lvl.energy / (h * h);
            worst_res = worst_res.max((residual / scale).abs());
        }
    }
    outcome(
        worst_res <= 1e-6 && worst_q2 <= 1e-10,
        format!("max_rel_residual={worst_res:?} (<= 1e-6) max_q2_disagreement={worst_q2:?} (<= 1e-10)"),
    )
}

fn cli(dir: &Path, args: &[&str]) -> i32 {
    let status = Command::new(env!("CARGO_BIN_EXE_beatfield"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .env_remove("BEATFIELD_OUT_DIR")
        .output()
        .expect("run beatfield");
    status.status.code().unwrap_or(-1)
}

fn same_files(a: &Path, b: &Path) -> Result<usize, String> {
    let mut names: Vec<_> = std::fs::read_dir(a)
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    for name in &names {
        let x = std::fs::read(a.join(name)).map_err(|e| e.to_string())?;
        let y = std::fs::read(b.join(name)).map_err(|e| format!("{name:?}: {e}"))?;
        if x != y {
            return Err(format!("{name:?} differs"));
        }
    }
    Ok(names.len())
}

fn criterion_9() -> Outcome {
    let root = tempfile::tempdir().unwrap();
    let dir = |n: &str| root.path().join(n);
    let walk = ["walk", "--beta", "0.6", "--steps", "1000000", "--seed", "42", "--path-mode", "--trace"];
    let ens = ["walk", "--beta", "0.6", "--steps", "250000", "--seed", "42", "--trajectories", "8", "--format", "json"];
    let codes = [
        cli(&dir("walk_a"), &walk),
        cli(&dir("walk_b"), &walk),
        cli(&dir("ens_1"), &[&ens[..], &["--workers", "1"]].concat()),
        cli(&dir("ens_4"), &[&ens[..], &["--workers", "4"]].concat()),
        cli(&dir("check_1"), &["check", "--workers", "1"]),
        cli(&dir("check_4"), &["check", "--workers", "4"]),
    ];
    let pairs = [("walk_a", "walk_b"), ("ens_1", "ens_4"), ("check_1", "check_4")];
    let mut notes = Vec::new();
    let mut passed = codes[..4].iter().all(|&c| c == 0);
    for (a, b) in pairs {
        match same_files(&dir(a), &dir(b)) {
            Ok(n) if n > 0 => notes.push(format!("{a} == {b} ({n} files)")),
            Ok(_) => {
                passed = false;
                notes.push(format!("{a}: no files"));
            }
            Err(e) => {
                passed = false;
                notes.push(format!("{a} vs {b}: {e}"));
            }
        }
    }
    notes.push(format!("exit codes {codes:?}"));
    outcome(passed, notes.join("; "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("electron rest frequency", criterion_1),
        ("identity suite", criterion_2),
        ("walker convergence", criterion_3),
        ("phase accord", criterion_4),
        ("gravitational pair", criterion_5),
        ("dispersion shell", criterion_6),
        ("bound states", criterion_7),
        ("complexity balance", criterion_8),
        ("reproducibility", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.passed {
            failed += 1;
        }
        println!("{} criterion {} ({name}): {}", if o.passed { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
