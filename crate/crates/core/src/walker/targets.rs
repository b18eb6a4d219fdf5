use serde::{Deserialize, Serialize};

use super::IrregularKernel;
use crate::kinematics::KinematicsReport;

/// Closed-form expectations and standard errors of walk estimators after
/// `n` cycles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WalkTargets {
    pub drift: f64,
    pub drift_se: f64,
    pub rate_irregular: f64,
    pub rate_regular: f64,
    /// Shared by both rates: `ν·√(α₁α₂/n)`.
    pub rate_se: f64,
    pub regular_fraction: f64,
    pub regular_fraction_se: f64,
    pub cycles_ratio: f64,
    pub diffusion: f64,
}

impl WalkTargets {
    pub fn new(report: &KinematicsReport, kernel: IrregularKernel, n: u64) -> Self {
        let n = n as f64;
        let (a1, a2) = (report.alpha1, report.alpha2);
        let lambda_b = report.lambda_b.unwrap_or(0.0);
        let kernel_var = kernel.variance() * report.lambda_cm * report.lambda_cm;
        let step_var = a1 * a2 * lambda_b * lambda_b + a2 * kernel_var;
        let fraction_se = (a1 * a2 / n).sqrt();
        Self {
            drift: report.speed,
            drift_se: (step_var / n).sqrt() / report.period,
            rate_irregular: report.irregular_frequency,
            rate_regular: report.nu_b,
            rate_se: report.frequency * fraction_se,
            regular_fraction: a1,
            regular_fraction_se: fraction_se,
            cycles_ratio: 1.0 / a1,
            diffusion: a2 * kernel_var / (2.0 * report.period),
        }
    }
}

/// `|measured − target| ≤ k·se`; a zero standard error demands equality.
pub fn within_se(measured: f64, target: f64, se: f64, k: f64) -> bool {
    (measured - target).abs() <= k * se
}
