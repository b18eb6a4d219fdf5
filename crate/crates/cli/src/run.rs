//! Command dispatch and artifact emission.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use beatfield::checks::{run_suite, CheckLine};
use beatfield::fmt::{num, opt};
use beatfield::kinematics::{derive_kinematics, weak_field_metric, KinematicsReport};
use beatfield::par::Parallelism;
use beatfield::walker::{
    check_phase_accord, run_ensemble, simulate_stationary_pair, simulate_walk, write_trace_csv,
    PairReport, PathLedger, WalkConfig, WalkScales, WalkSummary, WalkTally,
};
use beatfield::waves::export::{write_balance_csv, write_levels_csv, write_psi_csv};
use beatfield::waves::{complexity_balance, solve_bound_states, Boundary, Grid1D, WaveProblem};
use beatfield::PhysicalConstants;
use serde::Serialize;
use thiserror::Error;

use crate::config::{Command, OutputFormat, PotentialSource, RunConfig};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Model(#[from] beatfield::Error),
    #[error("potential file {path}: {message}")]
    PotentialFile { path: String, message: String },
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
}

/// Files written and the process exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutcome {
    pub exit_code: u8,
    pub files: Vec<PathBuf>,
    /// Human-readable lines for stdout.
    pub lines: Vec<String>,
}

struct Sink<'a> {
    dir: &'a Path,
    files: Vec<PathBuf>,
}

impl<'a> Sink<'a> {
    fn write(&mut self, name: &str, body: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<(), RunError> {
        let path = self.dir.join(name);
        let io_err = |source| RunError::Io {
            path: path.display().to_string(),
            source,
        };
        let file = File::create(&path).map_err(io_err)?;
        let mut out = BufWriter::new(file);
        body(&mut out).and_then(|_| out.flush()).map_err(io_err)?;
        self.files.push(path);
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), RunError> {
        self.write(name, |out| {
            serde_json::to_writer_pretty(&mut *out, value).map_err(io::Error::other)?;
            writeln!(out)
        })
    }
}

pub fn run(config: &RunConfig) -> Result<RunOutcome, RunError> {
    fs::create_dir_all(&config.out_dir).map_err(|source| RunError::Io {
        path: config.out_dir.display().to_string(),
        source,
    })?;
    let mut sink = Sink {
        dir: &config.out_dir,
        files: Vec::new(),
    };
    let constants = PhysicalConstants::for_units(config.units);
    let parallelism = Parallelism {
        workers: config.workers,
    };
    let (exit_code, lines) = match config.command {
        Command::Kin => (0, kin(config, constants, &mut sink)?),
        Command::Walk => (0, walk(config, constants, &parallelism, &mut sink)?),
        Command::Pair => (0, pair(config, constants, &mut sink)?),
        Command::Waves => (0, waves(config, constants, &mut sink)?),
        Command::Check => check(config, &parallelism, &mut sink)?,
    };
    Ok(RunOutcome {
        exit_code,
        files: sink.files,
        lines,
    })
}

#[derive(Serialize)]
struct QuantityRow {
    quantity: &'static str,
    value: Option<f64>,
}

pub const KIN_CSV_HEADER: &str = "quantity,value";

fn kin(config: &RunConfig, constants: PhysicalConstants, sink: &mut Sink) -> Result<Vec<String>, RunError> {
    let report = derive_kinematics(config.particle, constants)?;
    let rows = report.rows();
    match config.format {
        OutputFormat::Csv => sink.write("kinematics.csv", |out| {
            writeln!(out, "{KIN_CSV_HEADER}")?;
            for (name, value) in &rows {
                writeln!(out, "{name},{}", opt(*value))?;
            }
            Ok(())
        })?,
        OutputFormat::Json => {
            let json: Vec<QuantityRow> = rows
                .iter()
                .map(|&(quantity, value)| QuantityRow { quantity, value })
                .collect();
            sink.json("kinematics.json", &json)?
        }
    }
    Ok(rows
        .iter()
        .map(|(name, value)| format!("{name:>9} = {}", value.map(num).unwrap_or_else(|| "undefined".into())))
        .collect())
}

pub const ACCORD_CSV_HEADER: &str =
    "lambda_b_hat,cycles_ratio,cycles_ratio_std_error,cycles_ratio_target,path_per_jump";
pub const PATH_CSV_HEADER: &str =
    "trajectory,steps,total_path,final_displacement,prefix_violations,first_violation,max_speed_ratio";

#[derive(Serialize)]
struct AccordRow {
    lambda_b_hat: f64,
    cycles_ratio: f64,
    cycles_ratio_std_error: f64,
    cycles_ratio_target: f64,
    path_per_jump: f64,
}

#[derive(Serialize)]
struct PathRow {
    trajectory: u64,
    steps: u64,
    total_path: f64,
    final_displacement: f64,
    prefix_violations: u64,
    first_violation: Option<u64>,
    max_speed_ratio: f64,
}

impl PathRow {
    fn new(trajectory: u64, p: &PathLedger) -> Self {
        Self {
            trajectory,
            steps: p.steps,
            total_path: p.total_path,
            final_displacement: p.final_displacement,
            prefix_violations: p.prefix_violations,
            first_violation: p.first_violation,
            max_speed_ratio: p.max_speed_ratio,
        }
    }

    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.trajectory,
            self.steps,
            num(self.total_path),
            num(self.final_displacement),
            self.prefix_violations,
            self.first_violation.map(|s| s.to_string()).unwrap_or_default(),
            num(self.max_speed_ratio),
        )
    }
}

fn walk(
    config: &RunConfig,
    constants: PhysicalConstants,
    parallelism: &Parallelism,
    sink: &mut Sink,
) -> Result<Vec<String>, RunError> {
    let w = &config.walk;
    let mut base = WalkConfig::new(config.particle, constants, w.steps, w.seed).with_trajectory(w.trajectory_index);
    base.kernel = w.kernel;
    base.path_mode = w.path_mode;

    let report = derive_kinematics(config.particle, constants)?;
    let outcomes = run_ensemble(&base, w.trajectories, parallelism)?;
    let tally = outcomes.iter().fold(WalkTally::default(), |acc, o| acc.merge(o.tally));
    let summary = WalkSummary::from_tally(tally, WalkScales::new(&report, w.kernel))?;
    let accord = accord_row(&summary, &report);
    let paths: Vec<PathRow> = outcomes
        .iter()
        .filter_map(|o| o.path.as_ref().map(|p| PathRow::new(o.trajectory_index, p)))
        .collect();

    match config.format {
        OutputFormat::Csv => {
            sink.write("walk_summary.csv", |out| {
                writeln!(out, "{}", WalkSummary::CSV_HEADER)?;
                writeln!(out, "{}", summary.csv_row())
            })?;
            if let Some(a) = &accord {
                sink.write("phase_accord.csv", |out| {
                    writeln!(out, "{ACCORD_CSV_HEADER}")?;
                    writeln!(
                        out,
                        "{},{},{},{},{}",
                        num(a.lambda_b_hat),
                        num(a.cycles_ratio),
                        num(a.cycles_ratio_std_error),
                        num(a.cycles_ratio_target),
                        num(a.path_per_jump)
                    )
                })?;
            }
            if !paths.is_empty() {
                sink.write("path.csv", |out| {
                    writeln!(out, "{PATH_CSV_HEADER}")?;
                    paths.iter().try_for_each(|p| writeln!(out, "{}", p.csv()))
                })?;
            }
        }
        OutputFormat::Json => {
            sink.json("walk_summary.json", &summary)?;
            if let Some(a) = &accord {
                sink.json("phase_accord.json", a)?;
            }
            if !paths.is_empty() {
                sink.json("path.json", &paths)?;
            }
        }
    }
    if w.trace {
        let trace = simulate_walk(&base)?;
        sink.write("walk_trace.csv", |out| write_trace_csv(&trace, out))?;
    }

    let mut lines = vec![
        format!("steps {} x {} trajectories", w.steps, w.trajectories),
        format!("drift_velocity = {} (v = {})", num(summary.drift_velocity), num(report.speed)),
        format!("rate_irregular = {} (N = {})", num(summary.rate_irregular), num(report.irregular_frequency)),
        format!("rate_regular = {} (nuB = {})", num(summary.rate_regular), num(report.nu_b)),
    ];
    if let Some(a) = &accord {
        lines.push(format!("cycles_ratio = {} (target {})", num(a.cycles_ratio), num(a.cycles_ratio_target)));
    }
    for p in &paths {
        lines.push(format!(
            "trajectory {}: {} prefix violations of |x| <= c t",
            p.trajectory, p.prefix_violations
        ));
    }
    Ok(lines)
}

/// Phase-accord estimates, when the walk moves and has enough regular events.
fn accord_row(summary: &WalkSummary, report: &KinematicsReport) -> Option<AccordRow> {
    check_phase_accord(summary, report, None).ok().map(|a| AccordRow {
        lambda_b_hat: a.lambda_b_hat,
        cycles_ratio: a.cycles_ratio,
        cycles_ratio_std_error: a.cycles_ratio_std_error,
        cycles_ratio_target: a.cycles_ratio_target,
        path_per_jump: a.path_per_jump,
    })
}

pub const PAIR_CSV_HEADER: &str =
    "phi_a,phi_b,g00_a,g00_b,duration,count_a,count_b,deficit,ratio,expected_ratio";

#[derive(Serialize)]
struct PairRow {
    phi_a: f64,
    phi_b: f64,
    g00_a: f64,
    g00_b: f64,
    duration: f64,
    count_a: u64,
    count_b: u64,
    deficit: i64,
    ratio: f64,
    expected_ratio: f64,
}

impl PairRow {
    fn new(phi_a: f64, phi_b: f64, r: &PairReport) -> Self {
        Self {
            phi_a,
            phi_b,
            g00_a: r.point_a.g00,
            g00_b: r.point_b.g00,
            duration: r.duration,
            count_a: r.count_a,
            count_b: r.count_b,
            deficit: r.count_a as i64 - r.count_b as i64,
            ratio: r.ratio,
            expected_ratio: r.expected_ratio,
        }
    }

    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            num(self.phi_a),
            num(self.phi_b),
            num(self.g00_a),
            num(self.g00_b),
            num(self.duration),
            self.count_a,
            self.count_b,
            self.deficit,
            num(self.ratio),
            num(self.expected_ratio),
        )
    }
}

fn pair(config: &RunConfig, constants: PhysicalConstants, sink: &mut Sink) -> Result<Vec<String>, RunError> {
    let g = &config.gravity;
    let m0 = config.particle.rest_mass;
    let c2 = constants.c * constants.c;
    let tau0 = constants.h / (m0 * c2);
    let duration = g.duration * tau0;
    let phis = &g.phi_over_c2;
    let reference = phis[0];
    let point_a = weak_field_metric(reference * c2, &constants)?;
    let others: &[f64] = if phis.len() > 1 { &phis[1..] } else { &phis[..1] };
    let mut rows = Vec::new();
    for &phi in others {
        let point_b = weak_field_metric(phi * c2, &constants)?;
        let r = simulate_stationary_pair(m0, &point_a, &point_b, duration, &constants)?;
        rows.push(PairRow::new(reference, phi, &r));
    }
    match config.format {
        OutputFormat::Csv => sink.write("pair.csv", |out| {
            writeln!(out, "{PAIR_CSV_HEADER}")?;
            rows.iter().try_for_each(|r| writeln!(out, "{}", r.csv()))
        })?,
        OutputFormat::Json => sink.json("pair.json", &rows)?,
    }
    Ok(rows
        .iter()
        .map(|r| {
            format!(
                "phi {} vs {}: counts {} / {}, deficit {}, ratio {} (expected {})",
                num(r.phi_a),
                num(r.phi_b),
                r.count_a,
                r.count_b,
                r.deficit,
                num(r.ratio),
                num(r.expected_ratio)
            )
        })
        .collect())
}

fn load_problem(config: &RunConfig, constants: PhysicalConstants) -> Result<WaveProblem, RunError> {
    let m0 = config.particle.rest_mass;
    match &config.waves.potential {
        PotentialSource::Preset(p) => Ok(p.problem(config.waves.grid, m0, constants)?),
        PotentialSource::File(path) => {
            let (xs, vs) = read_potential(path)?;
            let err = |message: String| RunError::PotentialFile {
                path: path.display().to_string(),
                message,
            };
            let n = xs.len();
            if n < Grid1D::MIN_POINTS {
                return Err(err(format!("need at least {} samples, got {n}", Grid1D::MIN_POINTS)));
            }
            let grid = Grid1D::new(xs[0], xs[n - 1], n)?;
            let dx = grid.spacing();
            if let Some(i) = (0..n).find(|&i| (xs[i] - grid.x(i)).abs() > 1e-9 * dx.max(grid.length())) {
                return Err(err(format!("x is not uniformly spaced at row {}", i + 1)));
            }
            Ok(WaveProblem::new(grid, vs, m0, constants, Boundary::HardWall)?)
        }
    }
}

/// Reads a two-column `x,V` CSV with a header row.
pub fn read_potential(path: &Path) -> Result<(Vec<f64>, Vec<f64>), RunError> {
    let err = |message: String| RunError::PotentialFile {
        path: path.display().to_string(),
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| err(e.to_string()))?;
    let mut xs = Vec::new();
    let mut vs = Vec::new();
    for (i, record) in reader.deserialize::<(f64, f64)>().enumerate() {
        let (x, v) = record.map_err(|e| err(format!("row {}: {e}", i + 1)))?;
        xs.push(x);
        vs.push(v);
    }
    Ok((xs, vs))
}

#[derive(Serialize)]
struct LevelRow {
    level: usize,
    energy: f64,
}

#[derive(Serialize)]
struct PsiRow {
    x: f64,
    re: f64,
    im: f64,
}

fn waves(config: &RunConfig, constants: PhysicalConstants, sink: &mut Sink) -> Result<Vec<String>, RunError> {
    let problem = load_problem(config, constants)?;
    let solution = solve_bound_states(&problem, config.waves.levels)?;
    let balance = complexity_balance(&solution, &problem)?;
    match config.format {
        OutputFormat::Csv => {
            sink.write("levels.csv", |out| write_levels_csv(&solution, out))?;
            sink.write("balance.csv", |out| write_balance_csv(&balance, out))?;
            if config.waves.wavefunctions {
                for (n, level) in solution.levels.iter().enumerate() {
                    sink.write(&format!("psi_{n}.csv"), |out| write_psi_csv(level, &problem.grid, out))?;
                }
            }
        }
        OutputFormat::Json => {
            let levels: Vec<LevelRow> = solution
                .levels
                .iter()
                .enumerate()
                .map(|(level, l)| LevelRow { level, energy: l.energy })
                .collect();
            sink.json("levels.json", &levels)?;
            sink.json("balance.json", &balance.levels)?;
            if config.waves.wavefunctions {
                for (n, level) in solution.levels.iter().enumerate() {
                    let rows: Vec<PsiRow> = problem
                        .grid
                        .nodes()
                        .zip(&level.psi)
                        .map(|(x, z)| PsiRow { x, re: z.re, im: z.im })
                        .collect();
                    sink.json(&format!("psi_{n}.json"), &rows)?;
                }
            }
        }
    }
    Ok(balance
        .levels
        .iter()
        .map(|l| {
            format!(
                "level {}: E = {}, balance residual {}",
                l.level,
                num(l.energy),
                num(l.relative_residual)
            )
        })
        .collect())
}

pub const CHECK_CSV_HEADER: &str = "check,status,detail";

#[derive(Serialize)]
struct CheckRow<'a> {
    check: &'a str,
    status: &'static str,
    detail: &'a str,
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn check(config: &RunConfig, parallelism: &Parallelism, sink: &mut Sink) -> Result<(u8, Vec<String>), RunError> {
    let suite: Vec<CheckLine> = run_suite(parallelism);
    match config.format {
        OutputFormat::Csv => sink.write("check.csv", |out| {
            writeln!(out, "{CHECK_CSV_HEADER}")?;
            suite.iter().try_for_each(|l| {
                writeln!(out, "{},{},{}", csv_field(&l.name), l.status(), csv_field(&l.detail))
            })
        })?,
        OutputFormat::Json => {
            let rows: Vec<CheckRow> = suite
                .iter()
                .map(|l| CheckRow {
                    check: &l.name,
                    status: l.status(),
                    detail: &l.detail,
                })
                .collect();
            sink.json("check.json", &rows)?
        }
    }
    let failed = suite.iter().filter(|l| !l.passed).count();
    let mut lines: Vec<String> = suite
        .iter()
        .map(|l| format!("{} {} {}", l.status(), l.name, l.detail))
        .collect();
    lines.push(format!("{} checks, {} failed", suite.len(), failed));
    Ok((u8::from(failed > 0), lines))
}
