//! Seeded Monte Carlo realization of the quantum-beat jump process.
//!
//! Each beat cycle lasts `τ = h/E` and changes the action by `−h`. With
//! probability `α₁ = β²` the cycle is *regular* and books a net advance of
//! exactly one de Broglie wavelength `λ_B`; otherwise it is *irregular* and
//! books a zero-mean displacement at the relativistic Compton scale
//! `λ_Cm = h/(mc)`.
//!
//! # Random stream
//!
//! Every trajectory owns a ChaCha8 stream keyed by `seed` (expanded with
//! `SeedableRng::seed_from_u64`) and selected by `trajectory_index` via
//! `set_stream`. Each cycle consumes one `u64`: its top 53 bits are compared
//! against `round(α₁·2⁵³)` to decide the kind. Irregular cycles consume one
//! more `u64` for the kernel. This layout is part of the output contract.
//!
//! Irregular displacements are held as integers in units of `λ_Cm/2³²`, so
//! positions and all tallies are exact integer sums and merge associatively.

mod accord;
mod ensemble;
mod export;
mod pair;
mod summary;
mod targets;

pub use accord::{check_phase_accord, PathLedger, PhaseAccordReport, MIN_REGULAR_EVENTS};
pub use ensemble::{run_ensemble, run_ensemble_sequential, TrajectoryOutcome};
pub use export::{write_trace_csv, TRACE_CSV_HEADER};
pub use pair::{simulate_stationary_pair, PairReport};
pub use summary::{summarize, WalkSummary, WalkTally};
pub use targets::{within_se, WalkTargets};

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::kinematics::{derive_kinematics, KinematicsReport, ParticleSpec};

/// Kernel displacements are integers in units of `λ_Cm / KERNEL_UNITS`.
pub const KERNEL_UNITS: i64 = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IrregularKernel {
    /// `±λ_Cm` with equal probability.
    #[default]
    #[serde(rename = "binary")]
    SymmetricBinary,
    /// Uniform on `[−λ_Cm, +λ_Cm]` at 2⁻³² resolution.
    #[serde(rename = "uniform")]
    SymmetricUniform,
}

impl IrregularKernel {
    /// Variance of one draw in units of `λ_Cm²`.
    pub fn variance(self) -> f64 {
        match self {
            IrregularKernel::SymmetricBinary => 1.0,
            IrregularKernel::SymmetricUniform => {
                // Odd numerators (2k+1−2³²)/2³², k uniform on [0, 2³²).
                let n = KERNEL_UNITS as f64;
                (n * n - 1.0) / (3.0 * n * n)
            }
        }
    }

    fn draw(self, word: u64) -> i64 {
        match self {
            IrregularKernel::SymmetricBinary => {
                if word >> 63 == 0 {
                    KERNEL_UNITS
                } else {
                    -KERNEL_UNITS
                }
            }
            IrregularKernel::SymmetricUniform => 2 * (word >> 32) as i64 + 1 - KERNEL_UNITS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WalkConfig {
    pub spec: ParticleSpec,
    pub constants: PhysicalConstants,
    pub n_steps: u64,
    pub seed: u64,
    pub trajectory_index: u64,
    pub kernel: IrregularKernel,
    /// Track cumulative path length `c·t` and the prefix bound on it.
    pub path_mode: bool,
}

impl WalkConfig {
    pub fn new(spec: ParticleSpec, constants: PhysicalConstants, n_steps: u64, seed: u64) -> Self {
        Self {
            spec,
            constants,
            n_steps,
            seed,
            trajectory_index: 0,
            kernel: IrregularKernel::default(),
            path_mode: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_steps == 0 {
            return Err(Error::invalid("n_steps", "must be >= 1"));
        }
        self.spec.validate()?;
        self.constants.validate()
    }

    pub fn with_trajectory(mut self, index: u64) -> Self {
        self.trajectory_index = index;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum JumpKind {
    Regular,
    Irregular,
}

impl JumpKind {
    pub fn code(self) -> char {
        match self {
            JumpKind::Regular => 'R',
            JumpKind::Irregular => 'I',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JumpEvent {
    pub kind: JumpKind,
    /// Kernel draw in units of `λ_Cm / KERNEL_UNITS`; zero for regular events.
    pub kernel_units: i64,
    pub displacement: f64,
    pub duration: f64,
    pub action: f64,
}

/// Length scales and timing shared by every event of one configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WalkScales {
    pub lambda_b: f64,
    pub lambda_cm: f64,
    pub tau: f64,
    pub h: f64,
    pub c: f64,
    pub kernel: IrregularKernel,
}

impl WalkScales {
    pub fn new(report: &KinematicsReport, kernel: IrregularKernel) -> Self {
        Self {
            lambda_b: report.lambda_b.unwrap_or(0.0),
            lambda_cm: report.lambda_cm,
            tau: report.period,
            h: report.constants.h,
            c: report.constants.c,
            kernel,
        }
    }

    pub fn kernel_unit(&self) -> f64 {
        self.lambda_cm / KERNEL_UNITS as f64
    }

    /// Net position after `n_regular` regular events and a kernel sum.
    pub fn position(&self, n_regular: u64, kernel_sum: i128) -> f64 {
        n_regular as f64 * self.lambda_b + kernel_sum as f64 * self.kernel_unit()
    }
}

/// Endless-by-count iterator over the events of one trajectory.
pub struct JumpStream {
    rng: ChaCha8Rng,
    threshold: u64,
    scales: WalkScales,
    remaining: u64,
}

impl JumpStream {
    pub fn new(config: &WalkConfig) -> Result<(Self, KinematicsReport)> {
        config.validate()?;
        let report = derive_kinematics(config.spec, config.constants)?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(config.trajectory_index);
        let threshold = (report.alpha1 * (1u64 << 53) as f64).round() as u64;
        let stream = Self {
            rng,
            threshold,
            scales: WalkScales::new(&report, config.kernel),
            remaining: config.n_steps,
        };
        Ok((stream, report))
    }

    pub fn scales(&self) -> &WalkScales {
        &self.scales
    }
}

impl Iterator for JumpStream {
    type Item = JumpEvent;

    fn next(&mut self) -> Option<JumpEvent> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let s = &self.scales;
        let (kind, kernel_units, displacement) = if self.rng.next_u64() >> 11 < self.threshold {
            (JumpKind::Regular, 0, s.lambda_b)
        } else {
            let units = s.kernel.draw(self.rng.next_u64());
            (JumpKind::Irregular, units, units as f64 * s.kernel_unit())
        };
        Some(JumpEvent {
            kind,
            kernel_units,
            displacement,
            duration: s.tau,
            action: -s.h,
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (n, Some(n))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkTrace {
    pub config: WalkConfig,
    pub scales: WalkScales,
    pub events: Vec<JumpEvent>,
    pub final_position: f64,
    pub elapsed: f64,
    pub tally: WalkTally,
    pub path: Option<PathLedger>,
}

impl WalkTrace {
    /// Position after each event, in order.
    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        let mut n_regular = 0u64;
        let mut kernel_sum = 0i128;
        self.events.iter().map(move |e| {
            match e.kind {
                JumpKind::Regular => n_regular += 1,
                JumpKind::Irregular => kernel_sum += e.kernel_units as i128,
            }
            self.scales.position(n_regular, kernel_sum)
        })
    }
}

pub fn simulate_walk(config: &WalkConfig) -> Result<WalkTrace> {
    let (stream, _) = JumpStream::new(config)?;
    let scales = *stream.scales();
    let mut tally = WalkTally::default();
    let mut path = config.path_mode.then(|| PathLedger::new(scales.c, scales.tau));
    let mut events = Vec::with_capacity(stream.size_hint().0);
    for event in stream {
        tally.absorb(&event);
        if let Some(p) = path.as_mut() {
            p.record(tally.n_steps, scales.position(tally.n_regular, tally.kernel_sum));
        }
        events.push(event);
    }
    Ok(WalkTrace {
        config: *config,
        scales,
        events,
        final_position: scales.position(tally.n_regular, tally.kernel_sum),
        elapsed: config.n_steps as f64 * scales.tau,
        tally,
        path,
    })
}

/// Runs one trajectory without storing its events.
pub fn simulate_tally(config: &WalkConfig) -> Result<(WalkTally, Option<PathLedger>)> {
    let (stream, _) = JumpStream::new(config)?;
    let scales = *stream.scales();
    let mut tally = WalkTally::default();
    let mut path = config.path_mode.then(|| PathLedger::new(scales.c, scales.tau));
    for event in stream {
        tally.absorb(&event);
        if let Some(p) = path.as_mut() {
            p.record(tally.n_steps, scales.position(tally.n_regular, tally.kernel_sum));
        }
    }
    Ok((tally, path))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(beta: f64, n: u64, seed: u64) -> WalkConfig {
        WalkConfig::new(
            ParticleSpec::new(1.0, beta).unwrap(),
            PhysicalConstants::natural(),
            n,
            seed,
        )
    }

    #[test]
    fn rest_walk_never_regular() {
        let trace = simulate_walk(&config(0.0, 100_000, 9)).unwrap();
        assert_eq!(trace.tally.n_regular, 0);
        assert!(trace.events.iter().all(|e| e.kind == JumpKind::Irregular));
        // ±λ_C steps: drift SE = λ_C/√n per step.
        let n = 100_000f64;
        let se = trace.scales.lambda_cm / n.sqrt();
        assert!((trace.final_position / n).abs() < 4.0 * se);
    }

    #[test]
    fn rejects_zero_steps_and_light_speed() {
        assert!(simulate_walk(&config(0.5, 0, 1)).is_err());
        let mut c = config(0.5, 10, 1);
        c.spec.beta = 1.0;
        assert!(matches!(simulate_walk(&c), Err(Error::Superluminal(_))));
    }

    #[test]
    fn events_obey_their_kind() {
        let trace = simulate_walk(&config(0.6, 10_000, 3)).unwrap();
        let s = trace.scales;
        for e in &trace.events {
            assert_eq!(e.duration, s.tau);
            assert_eq!(e.action, -s.h);
            match e.kind {
                JumpKind::Regular => assert_eq!(e.displacement, s.lambda_b),
                JumpKind::Irregular => assert_eq!(e.displacement.abs(), s.lambda_cm),
            }
        }
        assert_eq!(trace.elapsed, 10_000.0 * s.tau);
        assert_eq!(trace.positions().last().unwrap(), trace.final_position);
    }

    #[test]
    fn uniform_kernel_stays_inside_compton_scale() {
        let mut c = config(0.3, 20_000, 5);
        c.kernel = IrregularKernel::SymmetricUniform;
        let trace = simulate_walk(&c).unwrap();
        for e in trace.events.iter().filter(|e| e.kind == JumpKind::Irregular) {
            assert!(e.kernel_units.abs() < KERNEL_UNITS);
            assert!(e.kernel_units % 2 != 0);
            assert!(e.displacement.abs() < trace.scales.lambda_cm);
        }
    }

    #[test]
    fn streams_differ_by_trajectory() {
        let a = simulate_walk(&config(0.6, 1000, 42)).unwrap();
        let b = simulate_walk(&config(0.6, 1000, 42).with_trajectory(1)).unwrap();
        let a2 = simulate_walk(&config(0.6, 1000, 42)).unwrap();
        assert_eq!(a, a2);
        assert_ne!(a.events, b.events);
    }

    #[test]
    fn tally_matches_trace() {
        let c = config(0.9, 5000, 11);
        let trace = simulate_walk(&c).unwrap();
        let (tally, _) = simulate_tally(&c).unwrap();
        assert_eq!(trace.tally, tally);
    }

    #[test]
    fn uniform_variance_is_near_one_third() {
        assert!((IrregularKernel::SymmetricUniform.variance() - 1.0 / 3.0).abs() < 1e-18);
        assert_eq!(IrregularKernel::SymmetricBinary.variance(), 1.0);
    }
}
