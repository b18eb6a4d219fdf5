use serde::{Deserialize, Serialize};

use super::WalkSummary;
use crate::error::{Error, Result};
use crate::kinematics::KinematicsReport;

/// Fewest regular events for which phase-accord estimates are reported.
pub const MIN_REGULAR_EVENTS: u64 = 100;

/// Cumulative path length `c·t` against the net displacement of every
/// prefix of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathLedger {
    c: f64,
    tau: f64,
    pub steps: u64,
    pub total_path: f64,
    pub final_displacement: f64,
    /// Prefixes whose `|x|` exceeds `c·t`.
    pub prefix_violations: u64,
    pub first_violation: Option<u64>,
    /// Largest `|x| / (c·t)` seen over all prefixes.
    pub max_speed_ratio: f64,
}

impl PathLedger {
    pub fn new(c: f64, tau: f64) -> Self {
        Self {
            c,
            tau,
            steps: 0,
            total_path: 0.0,
            final_displacement: 0.0,
            prefix_violations: 0,
            first_violation: None,
            max_speed_ratio: 0.0,
        }
    }

    /// Records the position reached after `steps` events.
    pub fn record(&mut self, steps: u64, position: f64) {
        self.steps = steps;
        self.total_path = self.c * steps as f64 * self.tau;
        self.final_displacement = position;
        let ratio = position.abs() / self.total_path;
        if ratio > self.max_speed_ratio {
            self.max_speed_ratio = ratio;
        }
        if position.abs() > self.total_path {
            self.prefix_violations += 1;
            self.first_violation.get_or_insert(steps);
        }
    }

    pub fn final_within_bound(&self) -> bool {
        self.final_displacement.abs() <= self.total_path
    }

    pub fn all_prefixes_within_bound(&self) -> bool {
        self.prefix_violations == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseAccordReport {
    /// `v̂ / ν̂_B`, converging to `h/(mv)`.
    pub lambda_b_hat: f64,
    /// `ν̂ / ν̂_B`: total beat cycles per regular advance.
    pub cycles_ratio: f64,
    /// Delta-method standard error of `cycles_ratio`.
    pub cycles_ratio_std_error: f64,
    pub cycles_ratio_target: f64,
    /// `c·τ`, the path covered in one beat cycle.
    pub path_per_jump: f64,
    pub path: Option<PathLedger>,
}

pub fn check_phase_accord(
    summary: &WalkSummary,
    report: &KinematicsReport,
    path: Option<&PathLedger>,
) -> Result<PhaseAccordReport> {
    if report.spec.beta <= 0.0 {
        return Err(Error::invalid("beta", "phase accord needs a moving particle"));
    }
    if summary.n_regular < MIN_REGULAR_EVENTS {
        return Err(Error::InsufficientStatistics {
            have: summary.n_regular,
            need: MIN_REGULAR_EVENTS,
        });
    }
    let fraction = summary.regular_fraction();
    let n = summary.n_steps as f64;
    let fraction_se = (fraction * (1.0 - fraction) / n).sqrt();
    Ok(PhaseAccordReport {
        lambda_b_hat: summary.drift_velocity / summary.rate_regular,
        cycles_ratio: summary.rate_total / summary.rate_regular,
        cycles_ratio_std_error: fraction_se / (fraction * fraction),
        cycles_ratio_target: 1.0 / report.alpha1,
        path_per_jump: report.constants.c * report.period,
        path: path.copied(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::PhysicalConstants;
    use crate::kinematics::{derive_kinematics, ParticleSpec};
    use crate::walker::{simulate_walk, summarize, WalkConfig};

    #[test]
    fn path_per_jump_is_relativistic_compton_length() {
        let spec = ParticleSpec::new(1.0, 0.6).unwrap();
        let k = PhysicalConstants::natural();
        let report = derive_kinematics(spec, k).unwrap();
        let mut config = WalkConfig::new(spec, k, 20_000, 4);
        config.path_mode = true;
        let trace = simulate_walk(&config).unwrap();
        let summary = summarize(&trace, &report).unwrap();
        let acc = check_phase_accord(&summary, &report, trace.path.as_ref()).unwrap();
        // τ·c = h/E·c = 2π/1.25 in natural units.
        assert!((acc.path_per_jump - 2.0 * std::f64::consts::PI / 1.25).abs() < 1e-15);
        assert_eq!(acc.path_per_jump, report.lambda_cm);
        let ledger = acc.path.unwrap();
        assert!(ledger.final_within_bound());
        assert_eq!(ledger.steps, 20_000);
    }

    #[test]
    fn insufficient_statistics() {
        let spec = ParticleSpec::new(1.0, 0.05).unwrap();
        let k = PhysicalConstants::natural();
        let report = derive_kinematics(spec, k).unwrap();
        let trace = simulate_walk(&WalkConfig::new(spec, k, 1000, 4)).unwrap();
        let summary = summarize(&trace, &report).unwrap();
        assert!(matches!(
            check_phase_accord(&summary, &report, None),
            Err(Error::InsufficientStatistics { .. })
        ));
    }

    #[test]
    fn ledger_counts_violations() {
        let mut l = PathLedger::new(1.0, 1.0);
        l.record(1, 0.5);
        l.record(2, 2.5);
        l.record(3, -1.0);
        assert_eq!(l.prefix_violations, 1);
        assert_eq!(l.first_violation, Some(2));
        assert!((l.max_speed_ratio - 1.25).abs() < 1e-15);
        assert!(l.final_within_bound());
        assert!(!l.all_prefixes_within_bound());
    }
}
