use serde::{Deserialize, Serialize};

use super::{JumpEvent, JumpKind, WalkScales, WalkTrace};
use crate::error::{Error, Result};
use crate::kinematics::KinematicsReport;

/// Exact integer sufficient statistics of one or more trajectories.
///
/// Adding tallies is associative and commutative, so merged ensembles do
/// not depend on how the work was partitioned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct WalkTally {
    pub n_steps: u64,
    pub n_regular: u64,
    pub kernel_sum: i128,
    pub kernel_sq_sum: u128,
}

impl WalkTally {
    pub fn absorb(&mut self, event: &JumpEvent) {
        self.n_steps += 1;
        match event.kind {
            JumpKind::Regular => self.n_regular += 1,
            JumpKind::Irregular => {
                let u = event.kernel_units;
                self.kernel_sum += u as i128;
                self.kernel_sq_sum += (u.unsigned_abs() as u128).pow(2);
            }
        }
    }

    pub fn merge(self, other: Self) -> Self {
        Self {
            n_steps: self.n_steps + other.n_steps,
            n_regular: self.n_regular + other.n_regular,
            kernel_sum: self.kernel_sum + other.kernel_sum,
            kernel_sq_sum: self.kernel_sq_sum + other.kernel_sq_sum,
        }
    }

    pub fn n_irregular(&self) -> u64 {
        self.n_steps - self.n_regular
    }
}

/// Measured rates, drift, diffusion and action ledger of a walk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WalkSummary {
    pub n_steps: u64,
    pub n_regular: u64,
    pub n_irregular: u64,
    pub elapsed: f64,
    /// Total beat rate `ν̂`.
    pub rate_total: f64,
    /// Regular event rate `ν̂_B`.
    pub rate_regular: f64,
    /// Irregular event rate `N̂`.
    pub rate_irregular: f64,
    pub drift_velocity: f64,
    /// Empirical standard error of `drift_velocity`.
    pub drift_std_error: f64,
    /// Growth rate of the irregular mean-square displacement, `Σδ²/(2t)`.
    pub diffusion: f64,
    pub action_total: f64,
    pub action_irregular: f64,
    /// Classical action `Σ L_j T_j` over irregular cycles, `−h` each.
    pub s_class_estimate: f64,
    pub energy_estimate: f64,
    pub lagrangian_estimate: f64,
    pub final_position: f64,
    #[serde(skip)]
    pub tally: WalkTally,
    #[serde(skip)]
    pub scales: Option<WalkScales>,
}

impl WalkSummary {
    pub fn from_tally(tally: WalkTally, scales: WalkScales) -> Result<Self> {
        if tally.n_steps == 0 {
            return Err(Error::invalid("trace", "must contain at least one event"));
        }
        let n = tally.n_steps as f64;
        let n_irregular = tally.n_irregular();
        let elapsed = n * scales.tau;
        let rate_total = n / elapsed;
        let rate_irregular = n_irregular as f64 / elapsed;

        let final_position = scales.position(tally.n_regular, tally.kernel_sum);
        let unit = scales.kernel_unit();
        let kernel_sq = tally.kernel_sq_sum as f64 * unit * unit;
        let sum_sq = tally.n_regular as f64 * scales.lambda_b * scales.lambda_b + kernel_sq;
        let mean = final_position / n;
        let step_var = (sum_sq / n - mean * mean).max(0.0);

        Ok(Self {
            n_steps: tally.n_steps,
            n_regular: tally.n_regular,
            n_irregular,
            elapsed,
            rate_total,
            rate_regular: tally.n_regular as f64 / elapsed,
            rate_irregular,
            drift_velocity: final_position / elapsed,
            drift_std_error: (step_var / n).sqrt() / scales.tau,
            diffusion: kernel_sq / (2.0 * elapsed),
            action_total: -scales.h * n,
            action_irregular: -scales.h * n_irregular as f64,
            s_class_estimate: -scales.h * n_irregular as f64,
            energy_estimate: scales.h * rate_total,
            lagrangian_estimate: -scales.h * rate_irregular,
            final_position,
            tally,
            scales: Some(scales),
        })
    }

    /// Summary of the concatenation of two walks with identical scales.
    pub fn merge(&self, other: &Self) -> Result<Self> {
        match (self.scales, other.scales) {
            (Some(a), Some(b)) if a == b => Self::from_tally(self.tally.merge(other.tally), a),
            _ => Err(Error::invalid("summary", "cannot merge walks with different scales")),
        }
    }

    pub fn regular_fraction(&self) -> f64 {
        self.n_regular as f64 / self.n_steps as f64
    }

    /// CSV header matching [`WalkSummary::csv_row`].
    pub const CSV_HEADER: &'static str = "n_steps,n_regular,n_irregular,elapsed,rate_total,\
rate_regular,rate_irregular,drift_velocity,drift_std_error,diffusion,action_total,\
action_irregular,s_class_estimate,energy_estimate,lagrangian_estimate,final_position";

    pub fn csv_row(&self) -> String {
        use crate::fmt::num;
        [
            self.n_steps.to_string(),
            self.n_regular.to_string(),
            self.n_irregular.to_string(),
            num(self.elapsed),
            num(self.rate_total),
            num(self.rate_regular),
            num(self.rate_irregular),
            num(self.drift_velocity),
            num(self.drift_std_error),
            num(self.diffusion),
            num(self.action_total),
            num(self.action_irregular),
            num(self.s_class_estimate),
            num(self.energy_estimate),
            num(self.lagrangian_estimate),
            num(self.final_position),
        ]
        .join(",")
    }
}

pub fn summarize(trace: &WalkTrace, report: &KinematicsReport) -> Result<WalkSummary> {
    let scales = WalkScales::new(report, trace.config.kernel);
    if scales != trace.scales {
        return Err(Error::invalid("report", "does not describe the walked particle"));
    }
    WalkSummary::from_tally(trace.tally, scales)
}
